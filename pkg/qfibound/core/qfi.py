"""
QFI-level quantities: the exact oracle, finite-shift QFI, fidelity-induced
bounds, generator-aware bounds and the purity-loss bound.
"""
from collections import namedtuple

import numpy as np

from . import fidelity as fid
from .circuits import encode_phase
from .states import purity, check_spectrum, DensityMatrix
from ..utils import stats
from ..utils.errors import ZeroDelta, BoundViolation

PAIR_TOL = 1e-12
SANDWICH_TOL = 1e-8
LOG_BASES = {'e': np.log, '2': np.log2, '10': np.log10}


def induced_bound(f_value, delta):
    """8 (1 - f) / delta^2, never negative."""
    if delta == 0:
        raise ZeroDelta('delta must be non-zero')
    return max(8. * (1. - f_value) / delta ** 2, 0.)


def _eigen_frame(rho, G):
    spectrum = rho.spectrum()
    V = spectrum.eigenvectors
    return spectrum.eigenvalues, V.conj().T @ G.matrix @ V


def exact_qfi(rho, G):
    """2 sum_ij (l_i - l_j)^2 / (l_i + l_j) |<i|G|j>|^2 over pairs with l_i + l_j > 1e-12."""
    lam, Gm = _eigen_frame(rho, G)
    total = lam[:, None] + lam[None, :]
    diff = (lam[:, None] - lam[None, :]) ** 2
    mask = total > PAIR_TOL
    return float(2. * np.sum(diff[mask] / total[mask] * np.abs(Gm[mask]) ** 2))


def encoded_pair(rho, G, theta, delta):
    """(rho_theta, rho_theta+delta)."""
    return encode_phase(rho, G, theta), encode_phase(rho, G, theta + delta)


def finite_delta_qfi(rho_theta, rho_error, delta):
    return induced_bound(fid.fidelity(rho_theta, rho_error), delta)


def tqfi_bounds(rho_theta, rho_error, m, delta):
    t = fid.truncate(rho_theta, rho_error, m)
    return (induced_bound(fid.generalized_fidelity(t), delta),
            induced_bound(fid.truncated_fidelity(t), delta))


def ssqfi_bounds(rho_theta, rho_error, delta):
    root_e = np.sqrt(fid.sub_fidelity(rho_theta, rho_error))
    root_r = np.sqrt(fid.super_fidelity(rho_theta, rho_error))
    return induced_bound(root_r, delta), induced_bound(root_e, delta)


def dynamics_agnostic_bounds(tqfi, ssqfi):
    """(H, J) from the (lower, upper) TQFI and SSQFI pairs."""
    return max(tqfi[0], ssqfi[0]), min(tqfi[1], ssqfi[1])


BOUNDS_COLUMNS = ['delta', 'm', 'eigensolver', 'F', 'F_reference', 'F_trunc', 'F_gen', 'sqrtE', 'sqrtR', 'I_delta',
                  'tqfi_lower', 'tqfi_upper', 'ssqfi_lower', 'ssqfi_upper', 'H_delta', 'J_delta', 'exact_qfi']


class BoundsReport(namedtuple('BoundsReport', BOUNDS_COLUMNS, defaults=(None,))):
    """
    Fidelity-type quantities and the QFI bounds they induce.

    ``F_reference`` is the fidelity of the state whose principal eigenpairs
    built the truncated quantities: rho_theta itself with exact
    eigenvectors, the dephased state of the trained circuit with VQSE.
    """
    __slots__ = ()

    @classmethod
    def header(cls):
        return list(cls._fields)

    def to_row(self):
        return ['' if v is None else v for v in self]

    def violations(self, tol=SANDWICH_TOL):
        """Broken orderings, as messages."""
        pairs = [('sqrtE', 'F'), ('F', 'sqrtR'), ('ssqfi_lower', 'I_delta'), ('I_delta', 'ssqfi_upper'),
                 ('F_trunc', 'F_reference'), ('F_reference', 'F_gen')]
        if self.eigensolver == 'exact':
            pairs += [('tqfi_lower', 'I_delta'), ('I_delta', 'tqfi_upper'), ('H_delta', 'I_delta'),
                      ('I_delta', 'J_delta')]
        messages = []
        for low, high in pairs:
            a, b = getattr(self, low), getattr(self, high)
            if a > b + tol:
                messages.append('%s = %.12g exceeds %s = %.12g' % (low, a, high, b))
        return messages

    def check(self, tol=SANDWICH_TOL):
        messages = self.violations(tol)
        if messages:
            raise BoundViolation('; '.join(messages))
        return self


def bounds_report(rho_theta, rho_error, m, delta, G=None, eigenpairs=None, reference=None):
    """
    All fidelity-induced quantities for one (rho_theta, rho_error) pair.

    Parameters
    ----------
    rho_theta, rho_error: DensityMatrix
    m: int
    delta: float
    G: Generator, optional
        Fills exact_qfi when given.
    eigenpairs: (vectors, values), optional
        Estimated principal eigenpairs of rho_theta (e.g. from VQSE). The
        truncated fidelities then go through the T-matrix.
    reference: DensityMatrix
        Required with ``eigenpairs``: a state whose m principal eigenpairs
        are exactly ``eigenpairs``.
    """
    F = fid.fidelity(rho_theta, rho_error)
    if eigenpairs is None:
        t = fid.truncate(rho_theta, rho_error, m)
        F_trunc, F_gen = fid.truncated_fidelity(t), fid.generalized_fidelity(t)
        F_reference = F
        eigensolver = 'exact'
    else:
        if reference is None:
            raise ValueError('estimated eigenpairs need the reference state they belong to')
        vectors, values = eigenpairs
        F_trunc, F_gen = fid.tmatrix_fidelity(fid.build_tmatrix(vectors, values, rho_error), values)
        F_reference = fid.fidelity(reference, rho_error)
        eigensolver = 'vqse'
    sqrtE = float(np.sqrt(fid.sub_fidelity(rho_theta, rho_error)))
    sqrtR = float(np.sqrt(fid.super_fidelity(rho_theta, rho_error)))
    tqfi = (induced_bound(F_gen, delta), induced_bound(F_trunc, delta))
    ssqfi = (induced_bound(sqrtR, delta), induced_bound(sqrtE, delta))
    H, J = dynamics_agnostic_bounds(tqfi, ssqfi)
    return BoundsReport(delta=delta, m=m, eigensolver=eigensolver, F=F, F_reference=F_reference, F_trunc=F_trunc,
                        F_gen=F_gen, sqrtE=sqrtE, sqrtR=sqrtR, I_delta=induced_bound(F, delta),
                        tqfi_lower=tqfi[0], tqfi_upper=tqfi[1], ssqfi_lower=ssqfi[0], ssqfi_upper=ssqfi[1],
                        H_delta=H, J_delta=J,
                        exact_qfi=None if G is None else exact_qfi(rho_theta, G))


def tqfi_limit_analytic(rho_theta, G, m):
    """
    delta -> 0 limit of the TQFI lower bound:

        4 Tr[rho_m G^2] - sum_{i,j<=m} 8 l_i l_j / (l_i + l_j) |G_ij|^2 - 4 Tr[P_rest G rho_m G]

    The last term only appears while the kept weight is below one; once the
    kept eigenvalues carry the whole state the bound equals the exact QFI.
    """
    lam, Gm = _eigen_frame(rho_theta, G)
    kept = lam[:m]
    rows = np.abs(Gm[:m, :]) ** 2  # m,d
    value = 4. * np.dot(kept, rows.sum(axis=1))
    total = kept[:, None] + kept[None, :]
    mask = total > PAIR_TOL
    value -= np.sum((8. * np.outer(kept, kept))[mask] / total[mask] * rows[:, :m][mask])
    if 1. - kept.sum() > PAIR_TOL:
        value -= 4. * np.dot(kept, rows[:, m:].sum(axis=1))
    return max(float(value), 0.)


def max_qfi_pure(n):
    if n < 1:
        raise ValueError('n must be >= 1')
    return 4. * n ** 2


def max_qfi_mixed(spectrum, G):
    """1/2 sum_k l_{k,d-k+1} (g_k - g_{d-k+1})^2 with l_{k,l} = (l_k - l_l)^2 / (l_k + l_l)."""
    lam = check_spectrum(spectrum, G.dim)
    g = G.eigenvalues()
    paired_lam, paired_g = lam[::-1], g[::-1]
    total = lam + paired_lam
    mask = total > PAIR_TOL
    terms = (lam - paired_lam)[mask] ** 2 / total[mask] * (g - paired_g)[mask] ** 2
    return 0.5 * float(terms.sum())


def generator_aware_bounds(rho, G):
    """(4(Tr[r^2 G^2] - Tr[(rG)^2]), 4 Var_rho(G))."""
    r, g = rho.mat, G.matrix
    rg = r @ g
    g2 = g @ g
    lower = 4. * (np.sum((r @ r) * g2.T) - np.einsum('ij,ji->', rg, rg)).real
    upper = 4. * (np.sum(r * g2.T) - np.trace(rg) ** 2).real
    return float(lower), float(upper)


class PurityLossReport(namedtuple('PurityLossReport', ['L_exact', 'delta_nu', 'variance_dx2', 'strata',
                                                       'L_stratified', 'rho_ave_purity', 'sampling'])):
    __slots__ = ()

    @classmethod
    def header(cls):
        return list(cls._fields)

    def to_row(self):
        return list(self)


def purity_loss_bound(rho, G, theta, dx2, K, rng_seed=None, sampling='stratified'):
    """
    2 (Tr[rho^2] - Tr[rho_ave^2]) / dx2 with rho_ave the mean of rho encoded at
    K angles around theta.

    Stratified sampling takes the median of each of K equal-probability
    strata of N(theta, dx2); 'monte_carlo' draws K angles from rng_seed.
    """
    if dx2 <= 0:
        raise ValueError('dx2 must be positive')
    if K < 1:
        raise ValueError('K must be >= 1')
    if sampling == 'stratified':
        thetas = stats.stratified_normal_nodes(theta, dx2, K)
    elif sampling == 'monte_carlo':
        thetas = stats.normal_samples(theta, dx2, K, np.random.default_rng(rng_seed))
    else:
        raise ValueError('unknown sampling %r' % sampling)
    rho_theta = encode_phase(rho, G, theta)
    ave = sum(encode_phase(rho, G, t).mat for t in thetas) / K
    ave_purity = purity(DensityMatrix(ave, check=False))
    delta_nu = purity(rho_theta) - ave_purity
    return PurityLossReport(L_exact=generator_aware_bounds(rho_theta, G)[0], delta_nu=delta_nu,
                            variance_dx2=dx2, strata=K, L_stratified=2. * delta_nu / dx2,
                            rho_ave_purity=ave_purity, sampling=sampling)


def logarithm(x, log_base):
    try:
        return LOG_BASES[str(log_base)](x)
    except KeyError:
        raise ValueError('log base %r is not one of %s' % (log_base, sorted(LOG_BASES)))


def tqfi_call_budget(n, t, shots=1, m=None, log_base='e'):
    """Circuit calls of one TQFI estimate: s (2 t n log n + m + (m^2 + m)/2), m = n by default."""
    m = n if m is None else m
    return shots * (2. * t * n * logarithm(n, log_base) + m + (m ** 2 + m) / 2.)


def purity_loss_call_budget(K, shots=1):
    return shots * ((K ** 2 + K) / 2. + 1.)


def strata_count(n, t, log_base='e'):
    """Smallest K whose purity-loss budget matches the TQFI budget."""
    if n < 2 or t < 0:
        raise ValueError('strata_count needs n >= 2 and t >= 0')
    target = tqfi_call_budget(n, t, log_base=log_base)
    K = max(1, int(np.ceil((-1. + np.sqrt(1. + 8. * (target - 1.))) / 2.)))
    while K > 1 and purity_loss_call_budget(K - 1) >= target:
        K -= 1
    while purity_loss_call_budget(K) < target:
        K += 1
    return K

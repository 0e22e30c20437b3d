"""
Fidelity-type quantities between an exact state and an error state.

The truncated quantities project both states onto the span of the m
principal eigenvectors of the exact state. The error state is never
diagonalized.
"""
from collections import namedtuple

import numpy as np
import scipy.linalg

from . import numerics
from .states import DensityMatrix
from ..utils import stats
from ..utils.errors import DimMismatch, MOutOfRange, NonPSDTMatrix, NumericalInconsistency

RADICAND_TOL = 1e-10
SWAP_TEST_KINDS = ('pair', 'purity', 'quartic')

TruncationResult = namedtuple('TruncationResult',
                              ['m', 'truncated_exact', 'truncated_error', 'kept_eigenvalues', 'projector_basis'])
SwapTestEstimate = namedtuple('SwapTestEstimate', ['estimate', 'std_error'])


class TMatrix(object):
    """
    m x m matrix T_ij = sqrt(l_i l_j) <l_i|rho_error|l_j> built from
    (estimated) principal eigenpairs (l_i, |l_i>) of the exact state.
    """

    def __init__(self, matrix, diag_overlaps, dim):
        self.matrix = matrix
        self.diag_overlaps = diag_overlaps
        self.dim = dim

    @property
    def m(self):
        return self.matrix.shape[0]


def _check_pair(rho, sigma):
    if rho.dim != sigma.dim:
        raise DimMismatch('states of dimension %d and %d' % (rho.dim, sigma.dim))


def fidelity(rho, sigma):
    """Tr sqrt(sqrt(rho) sigma sqrt(rho)), in [0, 1]."""
    _check_pair(rho, sigma)
    return float(np.clip(numerics.trace_norm_product(rho.mat, sigma.mat), 0., 1.))


def truncate(rho_exact, rho_error, m):
    """Project both states on the m principal eigenvectors of rho_exact."""
    _check_pair(rho_exact, rho_error)
    if not 1 <= m <= rho_exact.dim:
        raise MOutOfRange('m = %d outside [1, %d]' % (m, rho_exact.dim))
    spectrum = rho_exact.spectrum()
    basis = spectrum.projector_basis(m)
    kept = spectrum.eigenvalues[:m].copy()
    if m == rho_exact.dim:
        exact, error = rho_exact.mat, rho_error.mat
    else:
        projector = basis @ basis.conj().T
        exact = (basis * kept) @ basis.conj().T
        error = projector @ rho_error.mat @ projector
    return TruncationResult(m,
                            DensityMatrix(exact, normalized=False, check=False),
                            DensityMatrix(error, normalized=False, check=False),
                            kept, basis)


def truncated_fidelity(t):
    return numerics.trace_norm_product(t.truncated_exact.mat, t.truncated_error.mat)


def round_off(dim):
    """Largest trace or radicand of a d-dimensional computation that is still an exact zero."""
    return numerics.noise_floor(np.ones(1), dim)


def _trace_deficit_term(trace_a, trace_b, dim):
    # A deficit at round-off level is an exact zero; its square root is not.
    deficit_a, deficit_b = 1. - trace_a, 1. - trace_b
    if deficit_a <= round_off(dim) or deficit_b <= round_off(dim):
        return 0.
    return np.sqrt(deficit_a * deficit_b)


def generalized_fidelity(t):
    """||sqrt(s) sqrt(t)||_1 + sqrt((1 - Tr s)(1 - Tr t)) of the truncated pair."""
    deficit = _trace_deficit_term(float(np.sum(t.kept_eigenvalues)), t.truncated_error.trace,
                                  t.truncated_exact.dim)
    return min(truncated_fidelity(t) + deficit, 1.)


def build_tmatrix(eigenvectors, eigenvalues, rho_error):
    """
    Parameters
    ----------
    eigenvectors: (d, m) array
        Estimates of the principal eigenvectors of the exact state, as columns.
    eigenvalues: (m,) array
        Matching eigenvalue estimates.
    rho_error: DensityMatrix
    """
    eigenvectors = np.asarray(eigenvectors, dtype=complex)
    if eigenvectors.shape[0] != rho_error.dim:
        raise DimMismatch('eigenvectors of dimension %d, state of dimension %d'
                          % (eigenvectors.shape[0], rho_error.dim))
    roots = np.sqrt(np.clip(np.asarray(eigenvalues, dtype=float), 0., None))
    overlaps = eigenvectors.conj().T @ rho_error.mat @ eigenvectors  # m,m
    matrix = numerics.hermitize(roots[:, None] * overlaps * roots[None, :])
    return TMatrix(matrix, np.diag(overlaps).real.copy(), rho_error.dim)


def tmatrix_fidelity(tm, kept):
    """(truncated fidelity, truncated generalized fidelity) from a T-matrix."""
    values = scipy.linalg.eigvalsh(tm.matrix)
    if values.min() < -numerics.NEGATIVE_TOL:
        raise NonPSDTMatrix('T-matrix eigenvalue %.3e' % values.min())
    floor = numerics.noise_floor(values, len(values))
    lower = float(np.sqrt(np.where(values > floor, values, 0.)).sum())
    upper = lower + _trace_deficit_term(float(np.sum(kept)), float(np.sum(tm.diag_overlaps)), tm.dim)
    return lower, min(upper, 1.)


def overlap(rho, sigma):
    """Tr[rho sigma] for Hermitian arguments."""
    return float(np.sum(rho.mat * sigma.mat.T).real)


def quartic_overlap(rho, sigma):
    """Tr[rho sigma rho sigma]."""
    M = rho.mat @ sigma.mat
    return float(np.einsum('ij,ji->', M, M).real)


def _radicand_root(value, name, noise=0.):
    """
    Square root of a radicand that is non-negative in exact arithmetic.
    Values down to -RADICAND_TOL are clamped, anything within ``noise`` of
    zero is the round-off of a difference of equal terms.
    """
    if value < -RADICAND_TOL:
        raise NumericalInconsistency('%s radicand %.3e is negative' % (name, value))
    return np.sqrt(value) if value > noise else 0.


def sub_fidelity(rho, sigma):
    """E = Tr[rs] + sqrt(2((Tr[rs])^2 - Tr[rsrs])); sqrt(E) <= F."""
    _check_pair(rho, sigma)
    first = overlap(rho, sigma)
    # (Tr[rs])^2 and Tr[rsrs] agree for pure pairs; their difference then carries only round-off.
    return first + _radicand_root(2. * (first ** 2 - quartic_overlap(rho, sigma)), 'sub-fidelity',
                                  noise=round_off(rho.dim))


def super_fidelity(rho, sigma):
    """R = Tr[rs] + sqrt((1 - Tr r^2)(1 - Tr s^2)); F <= sqrt(R)."""
    _check_pair(rho, sigma)
    radicand = (1. - overlap(rho, rho)) * (1. - overlap(sigma, sigma))
    return overlap(rho, sigma) + _radicand_root(radicand, 'super-fidelity')


def swap_test_functional(kind, states):
    if kind == 'pair':
        return overlap(states[0], states[1])
    if kind == 'purity':
        return overlap(states[0], states[0])
    if kind == 'quartic':
        return quartic_overlap(states[0], states[1])
    raise ValueError('unknown swap test kind %r, expected one of %s' % (kind, SWAP_TEST_KINDS))


def swap_test_estimate(kind, states, shots, rng_seed):
    """
    Estimate Tr[rs], Tr[r^2] or Tr[rsrs] from ``shots`` ancilla readouts.

    The ancilla reads 0 with probability 1/2 + f/2; readouts are drawn from
    that probability directly.
    """
    if shots < 1:
        raise ValueError('shots must be >= 1')
    p0 = np.clip(0.5 + 0.5 * swap_test_functional(kind, states), 0., 1.)
    rng = np.random.default_rng(rng_seed)
    freq = rng.binomial(shots, p0) / shots
    return SwapTestEstimate(2. * freq - 1., 2. * stats.binomial_std_error(freq, shots))


def _cyclic_shift(register_dim, registers):
    D = register_dim ** registers
    shape = (register_dim,) * registers
    digits = np.unravel_index(np.arange(D), shape)
    rolled = digits[-1:] + digits[:-1]
    S = np.zeros((D, D))
    S[np.ravel_multi_index(rolled, shape), np.arange(D)] = 1.
    return S


def swap_test_circuit_probability(kind, states):
    """
    Ancilla p(0) of the (generalized) swap test, simulated as a circuit.

    Ancilla in |+>, a controlled cyclic shift over the registers, Hadamard
    on the ancilla. Meant for cross-checks at n = 1, 2 only.
    """
    registers = {'pair': [states[0], states[1]],
                 'purity': [states[0], states[0]],
                 'quartic': [states[0], states[1], states[0], states[1]]}[kind]
    if registers[0].n_qubits > 2:
        raise ValueError('circuit simulation of the swap test is limited to n <= 2')
    plus = np.full((2, 2), 0.5, dtype=complex)
    system = numerics.kron_all([r.mat for r in registers])
    D = system.shape[0]
    total = np.kron(plus, system)

    S = _cyclic_shift(registers[0].dim, len(registers))
    controlled = scipy.linalg.block_diag(np.eye(D), S)
    hadamard = np.kron(np.array([[1., 1.], [1., -1.]]) / np.sqrt(2.), np.eye(D))
    U = hadamard @ controlled
    final = U @ total @ U.conj().T
    return float(np.trace(final[:D, :D]).real)

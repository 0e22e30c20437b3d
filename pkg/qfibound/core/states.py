import numpy as np
import scipy.optimize
import scipy.stats

from . import numerics
from ..utils.errors import (PurityOutOfRange, SpectrumInvalid, DimMismatch,
                            NonHermitianInput, NegativeSpectrum)

STATE_TOL = 1e-10
RANK_TOL = 1e-10


class SpectralDecomposition(object):
    """Descending eigenvalues and matching eigenvectors (as columns) of a state."""

    def __init__(self, eigenvalues, eigenvectors, rank_tol=RANK_TOL):
        self.min_eigenvalue = float(eigenvalues[-1])
        self.eigenvalues = np.clip(eigenvalues, 0., None)
        self.eigenvectors = eigenvectors
        self.rank = max(1, int(np.sum(self.eigenvalues > rank_tol)))

    def projector_basis(self, m):
        return self.eigenvectors[:, :m]

    def projector(self, m):
        P = self.projector_basis(m)
        return P @ P.conj().T


class DensityMatrix(object):
    """
    A state on n qubits.

    Parameters
    ----------
    mat: (2**n, 2**n) array-like
    normalized: bool
        If False the trace may be anywhere in (0, 1] (projected states).
    check: bool
        Validate Hermiticity, positivity and trace on construction.
    """

    def __init__(self, mat, normalized=True, check=True):
        mat = numerics.as_matrix(mat)
        dim = mat.shape[0]
        n_qubits = dim.bit_length() - 1
        if 2 ** n_qubits != dim or n_qubits < 1:
            raise DimMismatch('dimension %d is not 2**n with n >= 1' % dim)
        if n_qubits > numerics.MAX_QUBITS:
            raise DimMismatch('%d qubits exceed the simulator limit of %d' % (n_qubits, numerics.MAX_QUBITS))
        self.n_qubits = n_qubits
        self.mat = mat
        self.normalized = normalized
        self._spectrum = None
        if check:
            self.validate()

    @property
    def dim(self):
        return self.mat.shape[0]

    @property
    def trace(self):
        return float(np.trace(self.mat).real)

    def spectrum(self):
        if self._spectrum is None:
            values, vectors = numerics.eig_hermitian(self.mat, check=False)
            self._spectrum = SpectralDecomposition(values, vectors)
        return self._spectrum

    def validate(self):
        if np.abs(self.mat - self.mat.conj().T).max() > STATE_TOL:
            raise NonHermitianInput('density matrix is not Hermitian')
        lowest = self.spectrum().min_eigenvalue
        if lowest < -STATE_TOL:
            raise NegativeSpectrum('density matrix has eigenvalue %.3e' % lowest)
        tr = self.trace
        if self.normalized and abs(tr - 1.) > STATE_TOL:
            raise ValueError('trace %.12f of a normalized state is not 1' % tr)
        if not self.normalized and not (0. < tr <= 1. + STATE_TOL):
            raise ValueError('trace %.12f of a sub-normalized state is outside (0, 1]' % tr)
        return self

    def evolve(self, U):
        """U rho U^dagger as a new state with the same normalization flag."""
        return DensityMatrix(U @ self.mat @ U.conj().T, normalized=self.normalized, check=False)

    def __repr__(self):
        return 'DensityMatrix(n_qubits=%d, trace=%.6f, normalized=%s)' % (self.n_qubits, self.trace, self.normalized)


def purity(rho):
    return float(np.vdot(rho.mat, rho.mat).real)


def pure_state(psi):
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return DensityMatrix(np.outer(psi, psi.conj()), check=False)


def basis_state(n, index=0):
    psi = np.zeros(2 ** n, dtype=complex)
    psi[index] = 1.
    return pure_state(psi)


def maximally_mixed(n):
    d = 2 ** n
    return DensityMatrix(np.eye(d, dtype=complex) / d, check=False)


def ghz(n, phase=0.):
    if n < 1:
        raise ValueError('GHZ state needs n >= 1')
    psi = np.zeros(2 ** n, dtype=complex)
    psi[0] = 1.
    psi[-1] = np.exp(1j * phase)
    return pure_state(psi)


def from_spectrum(spectrum, basis):
    spectrum = np.asarray(spectrum, dtype=float)
    return DensityMatrix((basis * spectrum) @ basis.conj().T, check=False)


def _spectral_purity(p):
    return float(np.dot(p, p))


def random_spectrum_with_purity(d, target_purity, rng):
    """
    Descending spectrum of length d whose squares sum to target_purity.

    A symmetric Dirichlet draw is moved along the segment towards the pure
    spectrum (1, 0, ..., 0) or towards the uniform one, whichever contains
    the target; the position on the segment is found by bisection. Both
    segments are monotone in purity.
    """
    if not (1. / d - 1e-12 <= target_purity <= 1. + 1e-12):
        raise PurityOutOfRange('purity %g outside [1/%d, 1]' % (target_purity, d))
    p0 = np.sort(rng.dirichlet(np.ones(d)))[::-1]
    uniform = np.full(d, 1. / d)
    pure = np.zeros(d)
    pure[0] = 1.
    if target_purity >= 1. - 1e-15:
        return pure
    if target_purity <= 1. / d + 1e-15:
        return uniform
    end = pure if target_purity >= _spectral_purity(p0) else uniform

    def f(w):
        return _spectral_purity((1. - w) * p0 + w * end) - target_purity

    if abs(f(0.)) < 1e-15:
        return p0
    w = scipy.optimize.bisect(f, 0., 1., xtol=1e-14, maxiter=200)
    return (1. - w) * p0 + w * end


def depolarized_spectrum(d, target_purity):
    """Spectrum of (1-p)|0><0| + p I/d at the given purity."""
    if not (1. / d - 1e-12 <= target_purity <= 1. + 1e-12):
        raise PurityOutOfRange('purity %g outside [1/%d, 1]' % (target_purity, d))
    keep = np.sqrt(max(target_purity - 1. / d, 0.) / (1. - 1. / d))
    spectrum = np.full(d, (1. - keep) / d)
    spectrum[0] += keep
    return spectrum


def random_state_with_purity(n, target_purity, rng_seed):
    """
    Random n-qubit state with an exactly prescribed purity.

    The eigenbasis is Haar random. Deterministic for a fixed seed.
    """
    rng = np.random.default_rng(rng_seed)
    return random_state_with_spectrum(random_spectrum_with_purity(2 ** n, target_purity, rng), rng)


def random_state_with_spectrum(spectrum, rng_seed):
    """State of the given spectrum in a Haar random eigenbasis; ``rng_seed`` may be a Generator."""
    spectrum = np.asarray(spectrum, dtype=float)
    rng = np.random.default_rng(rng_seed)
    U = scipy.stats.unitary_group.rvs(len(spectrum), random_state=rng)
    return from_spectrum(spectrum, U)


def check_spectrum(spectrum, d=None):
    spectrum = np.asarray(spectrum, dtype=float)
    if spectrum.ndim != 1 or (d is not None and len(spectrum) != d):
        raise SpectrumInvalid('spectrum must be a vector of length %s' % d)
    if spectrum.min() < -1e-12:
        raise SpectrumInvalid('spectrum has negative entries')
    if np.any(np.diff(spectrum) > 1e-12):
        raise SpectrumInvalid('spectrum is not in descending order')
    if abs(spectrum.sum() - 1.) > 1e-10:
        raise SpectrumInvalid('spectrum sums to %.12f, not 1' % spectrum.sum())
    return np.clip(spectrum, 0., None)


def optimal_mixed_probe(spectrum, G):
    """
    The state of given spectrum with the largest QFI for generator G.

    With g_1 >= ... >= g_d the eigenvalues of G, lambda_k is placed on
    (|g_k> + |g_l>)/sqrt(2) and lambda_l on (|g_k> - |g_l>)/sqrt(2) for
    l = d - k + 1 > k; a middle index keeps |g_k>.
    """
    G = getattr(G, 'matrix', G)
    d = G.shape[0]
    spectrum = check_spectrum(spectrum, d)
    _, gvec = numerics.eig_hermitian(G)
    basis = np.zeros((d, d), dtype=complex)
    for k in range(d):
        l = d - 1 - k
        if k < l:
            basis[:, k] = (gvec[:, k] + gvec[:, l]) / np.sqrt(2.)
            basis[:, l] = (gvec[:, k] - gvec[:, l]) / np.sqrt(2.)
        elif k == l:
            basis[:, k] = gvec[:, k]
    return from_spectrum(spectrum, basis)

"""
Dense complex-matrix kernels shared by every other module.

Matrices are plain ``numpy.ndarray`` objects of dtype complex128. Nothing here
mutates its inputs.
"""
from collections import namedtuple

import numpy as np
import scipy.linalg

from ..utils.errors import NonHermitianInput, NegativeSpectrum

MAX_QUBITS = 13
HERMITIAN_TOL = 1e-12
DEGENERACY_GAP = 1e-10
NEGATIVE_TOL = 1e-8

HermitianEig = namedtuple('HermitianEig', ['values', 'vectors'])


def as_matrix(A):
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise ValueError('expected a non-empty square matrix, got shape %s' % (A.shape,))
    if not np.all(np.isfinite(A)):
        raise ValueError('matrix has non-finite entries')
    return A


def is_hermitian(A, tol=HERMITIAN_TOL):
    """Asymmetry within tol relative to the largest entry."""
    return np.abs(A - A.conj().T).max() <= tol * np.abs(A).max()


def hermitize(A):
    return 0.5 * (A + A.conj().T)


def noise_floor(values, dim):
    """Eigenvalues below this are round-off of an exact zero."""
    return 10. * dim * np.finfo(float).eps * max(np.abs(values).max(), 1e-300)


def _phase_fix(v):
    nz = np.flatnonzero(np.abs(v) > DEGENERACY_GAP)
    if len(nz) == 0:
        return v
    c = v[nz[0]]
    return v * (abs(c) / c)


def _order_key(v):
    # Lexicographic over components: larger real part first, then imaginary.
    key = np.empty(2 * len(v))
    key[0::2] = -np.round(v.real, 10)
    key[1::2] = -np.round(v.imag, 10)
    return tuple(key)


def eig_hermitian(A, check=True):
    """
    Eigendecomposition of a Hermitian matrix.

    Parameters
    ----------
    A: (d, d) array-like
    check: bool
        Raise NonHermitianInput when A is not Hermitian to HERMITIAN_TOL.

    Returns
    -------
    HermitianEig
        values in descending order; vectors[:, k] belongs to values[k].
        Inside a degenerate cluster the vectors are phase fixed and sorted,
        so equal inputs always give equal outputs.
    """
    A = as_matrix(A)
    if check and not is_hermitian(A):
        raise NonHermitianInput('matrix is not Hermitian (max asymmetry %.3e)'
                                % np.abs(A - A.conj().T).max())
    values, vectors = scipy.linalg.eigh(hermitize(A))
    values, vectors = values[::-1], vectors[:, ::-1].copy()

    d = len(values)
    start = 0
    while start < d:
        stop = start + 1
        while stop < d and values[stop - 1] - values[stop] < DEGENERACY_GAP:
            stop += 1
        if stop - start > 1:
            block = [_phase_fix(vectors[:, k]) for k in range(start, stop)]
            block.sort(key=_order_key)
            vectors[:, start:stop] = np.column_stack(block)
        start = stop
    return HermitianEig(values, vectors)


def _clamped_values(values, dim):
    if values.min() < -NEGATIVE_TOL:
        raise NegativeSpectrum('eigenvalue %.3e below -%g' % (values.min(), NEGATIVE_TOL))
    return np.where(values > noise_floor(values, dim), values, 0.)


def sqrt_psd(A):
    """Principal square root of a Hermitian positive semidefinite matrix."""
    values, vectors = eig_hermitian(A)
    roots = np.sqrt(_clamped_values(values, len(values)))
    return (vectors * roots) @ vectors.conj().T


def trace_norm_product(rho, sigma):
    """
    Tr sqrt(sqrt(rho) sigma sqrt(rho)), i.e. the trace norm of sqrt(rho) sqrt(sigma).

    Works on the support of rho, where sqrt(rho) sigma sqrt(rho) reduces to
    the matrix sqrt(l_i l_j) <i|sigma|j> over the eigenpairs (l_i, |i>) of rho
    with non-zero weight. Sub-normalized inputs are fine.
    """
    rho, sigma = as_matrix(rho), as_matrix(sigma)
    if rho.shape != sigma.shape:
        raise ValueError('shape mismatch %s vs %s' % (rho.shape, sigma.shape))
    values, vectors = eig_hermitian(rho)
    values = _clamped_values(values, len(values))
    support = values > 0
    if not support.any():
        return 0.
    V = vectors[:, support]
    roots = np.sqrt(values[support])
    inner = roots[:, None] * (V.conj().T @ sigma @ V) * roots[None, :]
    return psd_trace_sqrt(inner)


def psd_trace_sqrt(A):
    """Sum of square roots of the eigenvalues of a PSD matrix."""
    A = as_matrix(A)
    values = scipy.linalg.eigvalsh(hermitize(A))
    values = _clamped_values(values, len(values))
    return float(np.sqrt(values).sum())


def exp_i_hermitian(G, t):
    """exp(-i t G) for Hermitian G."""
    values, vectors = eig_hermitian(G)
    return (vectors * np.exp(-1j * t * values)) @ vectors.conj().T


def kron_all(ops):
    out = np.ones((1, 1), dtype=complex)
    for op in ops:
        out = np.kron(out, op)
    return out

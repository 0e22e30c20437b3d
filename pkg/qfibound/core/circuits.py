"""
Parameterized probe preparation, phase encoding and generators.

Qubit 0 is the most significant bit of a basis index (``numpy.kron`` order).
Rotations follow R_a(alpha) = exp(-i alpha sigma_a / 2).
"""
from collections import namedtuple

import numpy as np
import ujson

from . import numerics
from .states import DensityMatrix
from ..utils.errors import ParamLengthMismatch, DimMismatch, NonRotationSlot, NonHermitianInput

Rot = namedtuple('Rot', ['qubit', 'axis', 'param_index'])
Cnot = namedtuple('Cnot', ['control', 'target'])

SHIFT = np.pi / 2


def rotation_matrix(axis, alpha):
    c, s = np.cos(alpha / 2.), np.sin(alpha / 2.)
    if axis == 'x':
        return np.array([[c, -1j * s], [-1j * s, c]])
    if axis == 'y':
        return np.array([[c, -s], [s, c]], dtype=complex)
    if axis == 'z':
        return np.array([[c - 1j * s, 0.], [0., c + 1j * s]])
    raise ValueError('unknown rotation axis %r' % axis)


class Ansatz(object):
    """
    A fixed gate layout with p free rotation angles.

    Parameters
    ----------
    n_qubits: int
    layers: int
    layout: sequence of Rot / Cnot slots
    """

    def __init__(self, n_qubits, layers, layout):
        self.n_qubits = n_qubits
        self.layers = layers
        self.layout = tuple(layout)
        indices = sorted(slot.param_index for slot in self.layout if isinstance(slot, Rot))
        if indices != list(range(len(indices))):
            raise ValueError('rotation parameter indices must cover [0, p) exactly once')
        self.param_count = len(indices)
        for slot in self.layout:
            qubits = (slot.qubit,) if isinstance(slot, Rot) else (slot.control, slot.target)
            if any(q < 0 or q >= n_qubits for q in qubits):
                raise ValueError('slot %s addresses a qubit outside [0, %d)' % (slot, n_qubits))

    def __len__(self):
        return len(self.layout)

    def rotation_slot(self, index):
        for slot in self.layout:
            if isinstance(slot, Rot) and slot.param_index == index:
                return slot
        raise NonRotationSlot('no rotation gate carries parameter %d' % index)

    def inverse(self):
        """Reversed layout; apply it with negated parameters to undo this ansatz."""
        return Ansatz(self.n_qubits, self.layers, self.layout[::-1])

    def to_records(self):
        records = []
        for position, slot in enumerate(self.layout):
            record = {'slot': position, 'gate': 'rot' if isinstance(slot, Rot) else 'cnot'}
            record.update(slot._asdict())
            records.append(record)
        return records

    def describe(self):
        return ujson.dumps({'n_qubits': self.n_qubits, 'layers': self.layers,
                            'param_count': self.param_count, 'layout': self.to_records()})


def build_hw_efficient(n, layers):
    """
    Layered hardware-efficient ansatz.

    Each layer is Ry then Rz on every qubit, followed by CNOTs on the pairs
    (0,1),(2,3),... and then (1,2),(3,4),...
    """
    if n < 2 or layers < 1:
        raise ValueError('hardware-efficient ansatz needs n >= 2 and layers >= 1')
    layout = []
    index = 0
    for _ in range(layers):
        for q in range(n):
            layout.append(Rot(q, 'y', index))
            layout.append(Rot(q, 'z', index + 1))
            index += 2
        for first in (0, 1):
            for q in range(first, n - 1, 2):
                layout.append(Cnot(q, q + 1))
    return Ansatz(n, layers, layout)


def _apply_single(T, gate, axis):
    T = np.tensordot(gate, T, axes=([1], [axis]))
    return np.moveaxis(T, 0, axis)


def _apply_cnot(T, control, target):
    T = T.copy()
    index = [slice(None)] * T.ndim
    index[control] = 1
    # Removing the control axis shifts the target axis down by one.
    flip_axis = target - 1 if target > control else target
    T[tuple(index)] = np.flip(T[tuple(index)], axis=flip_axis).copy()
    return T


def _run_layout(T, ansatz, params, n, sides):
    for slot in ansatz.layout:
        if isinstance(slot, Rot):
            gate = rotation_matrix(slot.axis, params[slot.param_index])
            T = _apply_single(T, gate, slot.qubit)
            if sides == 2:
                T = _apply_single(T, gate.conj(), n + slot.qubit)
        else:
            T = _apply_cnot(T, slot.control, slot.target)
            if sides == 2:
                T = _apply_cnot(T, n + slot.control, n + slot.target)
    return T


def _check_params(ansatz, params):
    params = np.asarray(params, dtype=float)
    if params.shape != (ansatz.param_count,):
        raise ParamLengthMismatch('expected %d parameters, got %d' % (ansatz.param_count, params.size))
    return params


def apply(ansatz, params, rho):
    """U(params) rho U(params)^dagger, gate by gate on the reshaped tensor."""
    params = _check_params(ansatz, params)
    n = ansatz.n_qubits
    if rho.n_qubits != n:
        raise DimMismatch('ansatz acts on %d qubits, state has %d' % (n, rho.n_qubits))
    T = rho.mat.reshape((2,) * (2 * n))
    T = _run_layout(T, ansatz, params, n, sides=2)
    return DensityMatrix(T.reshape(rho.dim, rho.dim), normalized=rho.normalized, check=False)


def unitary(ansatz, params):
    params = _check_params(ansatz, params)
    n = ansatz.n_qubits
    d = 2 ** n
    T = np.eye(d, dtype=complex).reshape((2,) * (2 * n))
    T = _run_layout(T, ansatz, params, n, sides=1)
    return T.reshape(d, d)


class Generator(object):
    """
    Hermitian generator G of the encoding exp(-i theta G).

    ``diagonal`` holds the diagonal when G is diagonal in the computational
    basis, which enables elementwise encoding.
    """

    def __init__(self, matrix, locality_note=''):
        matrix = numerics.as_matrix(matrix)
        if np.abs(matrix - matrix.conj().T).max() > 1e-10:
            raise NonHermitianInput('generator is not Hermitian')
        self.matrix = matrix
        self.locality_note = locality_note
        off = matrix - np.diag(np.diag(matrix))
        self.diagonal = np.diag(matrix).real.copy() if not off.any() else None

    @property
    def dim(self):
        return self.matrix.shape[0]

    def eigenvalues(self):
        if self.diagonal is not None:
            return np.sort(self.diagonal)[::-1]
        return numerics.eig_hermitian(self.matrix).values


def magnetometry(n):
    """G = sum_i Z_i."""
    d = 2 ** n
    ones = np.array([bin(b).count('1') for b in range(d)])
    return Generator(np.diag((n - 2 * ones).astype(complex)), locality_note='sum_z')


def random_generator(n, rng_seed, scale=1.):
    rng = np.random.default_rng(rng_seed)
    d = 2 ** n
    X = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return Generator(scale * numerics.hermitize(X) / np.sqrt(d), locality_note='random')


def encoding_unitary(G, theta):
    if G.diagonal is not None:
        return np.diag(np.exp(-1j * theta * G.diagonal))
    return numerics.exp_i_hermitian(G.matrix, theta)


def encode_phase(rho, G, theta):
    """W rho W^dagger with W = exp(-i theta G)."""
    if rho.dim != G.dim:
        raise DimMismatch('state dimension %d, generator dimension %d' % (rho.dim, G.dim))
    if G.diagonal is not None:
        phases = np.exp(-1j * theta * G.diagonal)
        mat = rho.mat * phases[:, None] * phases.conj()[None, :]
        return DensityMatrix(mat, normalized=rho.normalized, check=False)
    return rho.evolve(numerics.exp_i_hermitian(G.matrix, theta))


def param_shift_grad(cost, ansatz, params, index):
    """
    d cost / d params[index] by the two-term shift rule.

    cost: callable mapping a parameter vector to a real expectation value.
    """
    ansatz.rotation_slot(index)
    params = _check_params(ansatz, params)
    plus, minus = params.copy(), params.copy()
    plus[index] += SHIFT
    minus[index] -= SHIFT
    return (cost(plus) - cost(minus)) / 2.


def param_shift_gradient(cost, ansatz, params):
    return np.array([param_shift_grad(cost, ansatz, params, k) for k in range(ansatz.param_count)])

import numpy as np
import pytest
import scipy.linalg

from qfibound.core import circuits, states
from qfibound.utils.errors import ParamLengthMismatch, NonRotationSlot, DimMismatch, NonHermitianInput


def params_for(ansatz, seed):
    return np.random.default_rng(seed).uniform(0., 2. * np.pi, ansatz.param_count)


class TestAnsatz:

    @pytest.mark.parametrize('n,layers', [(2, 1), (3, 2), (4, 3)])
    def test_param_count(self, n, layers):
        assert circuits.build_hw_efficient(n, layers).param_count == 2 * n * layers

    def test_cnot_bricks(self):
        ansatz = circuits.build_hw_efficient(4, 1)
        cnots = [slot for slot in ansatz.layout if isinstance(slot, circuits.Cnot)]
        assert cnots == [circuits.Cnot(0, 1), circuits.Cnot(2, 3), circuits.Cnot(1, 2)]

    def test_zero_params_is_the_entangler(self):
        U = circuits.unitary(circuits.build_hw_efficient(2, 1), np.zeros(4))
        cnot = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
        np.testing.assert_allclose(U, cnot, atol=1e-12)

    def test_rotation_slot(self):
        ansatz = circuits.build_hw_efficient(2, 1)
        assert ansatz.rotation_slot(1) == circuits.Rot(0, 'z', 1)
        with pytest.raises(NonRotationSlot):
            ansatz.rotation_slot(4)

    def test_bad_layout(self):
        with pytest.raises(ValueError):
            circuits.Ansatz(2, 1, [circuits.Rot(0, 'y', 1)])
        with pytest.raises(ValueError):
            circuits.Ansatz(2, 1, [circuits.Cnot(0, 2)])

    def test_describe(self):
        text = circuits.build_hw_efficient(2, 1).describe()
        assert '"param_count":4' in text.replace(' ', '')


class TestApply:

    @pytest.mark.parametrize('n', [2, 3])
    def test_matches_dense_unitary(self, n):
        ansatz = circuits.build_hw_efficient(n, 2)
        params = params_for(ansatz, n)
        rho = states.random_state_with_purity(n, 0.7, n)
        U = circuits.unitary(ansatz, params)
        np.testing.assert_allclose(U @ U.conj().T, np.eye(2 ** n), atol=1e-12)
        np.testing.assert_allclose(circuits.apply(ansatz, params, rho).mat, U @ rho.mat @ U.conj().T, atol=1e-12)

    def test_inverse_undoes(self, mixed2):
        ansatz = circuits.build_hw_efficient(2, 2)
        params = params_for(ansatz, 3)
        there = circuits.apply(ansatz, params, mixed2)
        back = circuits.apply(ansatz.inverse(), -params, there)
        np.testing.assert_allclose(back.mat, mixed2.mat, atol=1e-12)

    def test_preserves_purity(self, mixed2):
        ansatz = circuits.build_hw_efficient(2, 3)
        out = circuits.apply(ansatz, params_for(ansatz, 4), mixed2)
        assert states.purity(out) == pytest.approx(states.purity(mixed2), abs=1e-12)

    def test_wrong_param_length(self, mixed2):
        with pytest.raises(ParamLengthMismatch):
            circuits.apply(circuits.build_hw_efficient(2, 1), np.zeros(3), mixed2)

    def test_wrong_state_size(self):
        with pytest.raises(DimMismatch):
            circuits.apply(circuits.build_hw_efficient(2, 1), np.zeros(4), states.basis_state(3))

    def test_input_not_mutated(self, mixed2):
        before = mixed2.mat.copy()
        ansatz = circuits.build_hw_efficient(2, 1)
        circuits.apply(ansatz, params_for(ansatz, 0), mixed2)
        np.testing.assert_array_equal(mixed2.mat, before)


class TestGenerators:

    def test_magnetometry_diagonal(self):
        G = circuits.magnetometry(2)
        np.testing.assert_allclose(G.diagonal, [2., 0., 0., -2.])
        np.testing.assert_allclose(G.eigenvalues(), [2., 0., 0., -2.])

    def test_non_hermitian_generator(self):
        with pytest.raises(NonHermitianInput):
            circuits.Generator(np.array([[0., 1.], [0., 0.]]))

    @pytest.mark.parametrize('make', [lambda: circuits.magnetometry(2), lambda: circuits.random_generator(2, 9)])
    def test_encode_phase_matches_unitary(self, make, mixed2):
        G = make()
        W = circuits.encoding_unitary(G, 0.37)
        np.testing.assert_allclose(circuits.encode_phase(mixed2, G, 0.37).mat, W @ mixed2.mat @ W.conj().T,
                                   atol=1e-12)

    def test_encode_dimension_mismatch(self, mixed2):
        with pytest.raises(DimMismatch):
            circuits.encode_phase(mixed2, circuits.magnetometry(3), 0.1)


class TestParameterShift:

    def test_matches_finite_difference(self, mixed2):
        ansatz = circuits.build_hw_efficient(2, 2)
        energies = circuits.magnetometry(2).diagonal

        def cost(params):
            return float(np.dot(energies, np.diag(circuits.apply(ansatz, params, mixed2).mat).real))

        params = params_for(ansatz, 8)
        shift = circuits.param_shift_gradient(cost, ansatz, params)
        h = 1e-6
        for k in range(ansatz.param_count):
            e = np.zeros_like(params)
            e[k] = h
            assert shift[k] == pytest.approx((cost(params + e) - cost(params - e)) / (2 * h), abs=1e-6)

    def test_unknown_index(self):
        ansatz = circuits.build_hw_efficient(2, 1)
        with pytest.raises(NonRotationSlot):
            circuits.param_shift_grad(lambda p: 0., ansatz, np.zeros(4), 7)


def test_encoding_unitary_matches_expm():
    G = circuits.random_generator(2, 13)
    np.testing.assert_allclose(circuits.encoding_unitary(G, 0.8), scipy.linalg.expm(-0.8j * G.matrix), atol=1e-12)

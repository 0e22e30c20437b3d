import numpy as np
import pytest
from hypothesis import given, strategies as st

from qfibound.core import states
from qfibound.core.states import DensityMatrix
from qfibound.utils.errors import (DimMismatch, NonHermitianInput, NegativeSpectrum,
                                   PurityOutOfRange, SpectrumInvalid)


class TestDensityMatrix:

    def test_dimension_must_be_power_of_two(self):
        with pytest.raises(DimMismatch):
            DensityMatrix(np.eye(3) / 3)

    def test_single_entry_is_rejected(self):
        with pytest.raises(DimMismatch):
            DensityMatrix(np.ones((1, 1)))

    def test_non_hermitian(self):
        with pytest.raises(NonHermitianInput):
            DensityMatrix(np.array([[0.5, 0.3], [0., 0.5]]))

    def test_negative_eigenvalue(self):
        with pytest.raises(NegativeSpectrum):
            DensityMatrix(np.diag([1.2, -0.2]))

    def test_trace_must_be_one(self):
        with pytest.raises(ValueError):
            DensityMatrix(np.diag([0.5, 0.25]))

    def test_sub_normalized_allowed(self):
        rho = DensityMatrix(np.diag([0.5, 0.25]), normalized=False)
        assert rho.trace == pytest.approx(0.75)

    def test_spectrum_descending(self, mixed2):
        spectrum = mixed2.spectrum()
        assert np.all(np.diff(spectrum.eigenvalues) <= 0)
        assert spectrum.eigenvalues.sum() == pytest.approx(1.)
        P = spectrum.projector(2)
        np.testing.assert_allclose(P @ P, P, atol=1e-10)


class TestConstructors:

    @pytest.mark.parametrize('n', [1, 2, 3])
    def test_pure_states_have_unit_purity(self, n):
        for rho in (states.ghz(n), states.basis_state(n), states.ghz(n, phase=0.4)):
            assert states.purity(rho) == pytest.approx(1.)

    def test_maximally_mixed(self):
        assert states.purity(states.maximally_mixed(3)) == pytest.approx(1. / 8)

    @pytest.mark.parametrize('target', [0.3, 0.5, 0.8, 0.95, 1.])
    def test_random_state_purity(self, target):
        rho = states.random_state_with_purity(2, target, 11)
        rho.validate()
        assert states.purity(rho) == pytest.approx(target, abs=1e-10)

    def test_random_state_is_deterministic(self):
        a = states.random_state_with_purity(3, 0.7, 5)
        b = states.random_state_with_purity(3, 0.7, 5)
        np.testing.assert_array_equal(a.mat, b.mat)

    def test_purity_below_uniform_raises(self):
        with pytest.raises(PurityOutOfRange):
            states.random_state_with_purity(2, 0.1, 0)

    @given(st.floats(min_value=0.25, max_value=1.), st.integers(min_value=0, max_value=2 ** 16))
    def test_random_spectrum_properties(self, target, seed):
        p = states.random_spectrum_with_purity(4, target, np.random.default_rng(seed))
        assert np.all(np.diff(p) <= 1e-15)
        assert p.min() >= 0.
        assert p.sum() == pytest.approx(1., abs=1e-12)
        assert np.dot(p, p) == pytest.approx(target, abs=1e-9)

    @pytest.mark.parametrize('target', [0.25, 0.4, 0.9, 1.])
    def test_depolarized_spectrum(self, target):
        p = states.depolarized_spectrum(4, target)
        assert np.dot(p, p) == pytest.approx(target, abs=1e-12)
        assert p.sum() == pytest.approx(1.)


class TestSpectrumChecks:

    @pytest.mark.parametrize('spectrum', [[0.2, 0.8], [1.2, -0.2], [0.5, 0.4], [[0.5, 0.5]]])
    def test_invalid(self, spectrum):
        with pytest.raises(SpectrumInvalid):
            states.check_spectrum(spectrum, 2)

    def test_wrong_length(self):
        with pytest.raises(SpectrumInvalid):
            states.check_spectrum([1., 0.], 4)

    def test_optimal_state_keeps_spectrum(self, sum_z2):
        spectrum = [0.6, 0.25, 0.1, 0.05]
        rho = states.optimal_mixed_probe(spectrum, sum_z2)
        np.testing.assert_allclose(rho.spectrum().eigenvalues, spectrum, atol=1e-12)

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from spindimer import oracle
from spindimer.dimer import (REFERENCE_PARAMS, BellDiagonalState, DimerParams,
                             correlation_function, model_moment,
                             moment_prefactor, normalized_moment, spectrum,
                             susceptibility, susceptibility_derivatives,
                             thermal_state)
from spindimer.errors import InvalidInputError, UnphysicalInputError
from spindimer.units import curie_constant

# mpmath (50 digits) evaluation of 4/(3 + exp(748.5/300))
X_300 = 0.26451993715421064


def _dense_heisenberg(J):
    s = [np.array([[0, 1], [1, 0]]) / 2, np.array([[0, -1j], [1j, 0]]) / 2,
         np.array([[1, 0], [0, -1]]) / 2]
    return -J * sum(np.kron(a, a) for a in s)


class TestParams:
    def test_rejects_non_positive_g(self):
        with pytest.raises(InvalidInputError):
            DimerParams(-10.0, 0.0)

    def test_rejects_non_finite_J(self):
        with pytest.raises(InvalidInputError):
            DimerParams(float("nan"), 2.0)


class TestSpectrum:
    def test_reference_coupling(self):
        s = spectrum(REFERENCE_PARAMS)
        assert s.E_singlet == -561.375
        assert s.E_triplet == 187.125
        assert s.gap == 748.5
        e = np.linalg.eigvalsh(_dense_heisenberg(-748.5))
        assert_allclose(e, [-561.375, 187.125, 187.125, 187.125], atol=1e-10)

    def test_free_spins(self):
        s = spectrum(DimerParams(0.0))
        assert s.E_singlet == 0 and s.E_triplet == 0

    def test_ferromagnetic(self):
        s = spectrum(DimerParams(100.0))
        assert s.E_triplet < s.E_singlet
        assert s.gap == -100.0

    @given(st.floats(min_value=-5000, max_value=5000).filter(lambda j: abs(j) > 1e-3))
    def test_sign_symmetry(self, J):
        a, b = spectrum(DimerParams(J)), spectrum(DimerParams(-J))
        assert abs(a.gap) == abs(b.gap)
        assert np.sign(a.gap) == -np.sign(b.gap)
        assert a.degeneracy_singlet == 1 and a.degeneracy_triplet == 3


class TestThermalState:
    def test_ground_state_limit(self):
        s = thermal_state(REFERENCE_PARAMS, 1.0)
        assert s.p_singlet == pytest.approx(1.0, abs=1e-12)
        assert s.c == pytest.approx(-1.0, abs=1e-12)

    @pytest.mark.parametrize("J", [-748.5, -3.0, 50.0])
    def test_infinite_temperature_limit(self, J):
        s = thermal_state(DimerParams(J), 1e9 * abs(J))
        assert_allclose(s.populations, 0.25, atol=1e-9)
        assert s.c == pytest.approx(0.0, abs=1e-9)

    def test_300K_against_dense_matrix(self):
        rho = oracle.gibbs_state(REFERENCE_PARAMS, 300.0)
        sz = np.diag([0.5, -0.5])
        c_oracle = 4 * np.real(np.trace(rho @ np.kron(sz, sz)))
        s = thermal_state(REFERENCE_PARAMS, 300.0)
        assert s.c == pytest.approx(c_oracle, abs=1e-12)
        assert s.c == pytest.approx(-0.7355, abs=1e-4)

    @given(st.floats(min_value=-3000, max_value=3000),
           st.floats(min_value=0.01, max_value=1e6))
    def test_population_invariants(self, J, T):
        s = thermal_state(DimerParams(J), T)
        assert s.p_singlet + 3 * s.p_triplet_each == pytest.approx(1.0, abs=1e-12)
        assert s.p_singlet == pytest.approx((1 - 3 * s.c) / 4, abs=1e-12)
        assert s.p_triplet_each == pytest.approx((1 + s.c) / 4, abs=1e-12)
        assert -1 <= s.c <= 1 / 3 + 1e-15
        if J < 0:
            assert s.c <= 0

    def test_from_correlation(self):
        s = BellDiagonalState.from_correlation(-0.5)
        assert s.p_singlet == pytest.approx(0.625)
        assert s.p_triplet_each == pytest.approx(0.125)

    @pytest.mark.parametrize("T", [0.0, -1.0])
    def test_rejects_non_positive_temperature(self, T):
        with pytest.raises(InvalidInputError):
            thermal_state(REFERENCE_PARAMS, T)


class TestSusceptibility:
    def test_curie_limit(self):
        T = 1e6 * 748.5
        assert susceptibility(REFERENCE_PARAMS, T) * T == pytest.approx(
            curie_constant(2.07, 2), rel=1e-6)

    def test_paramagnet_is_curie_at_every_T(self):
        p = DimerParams(0.0, 2.07)
        T = np.geomspace(0.1, 1e5, 50)
        assert_allclose(susceptibility(p, T) * T, curie_constant(2.07, 2), rtol=1e-14)

    def test_normalized_moment_at_300K(self):
        chi = susceptibility(REFERENCE_PARAMS, 300.0)
        x = normalized_moment(REFERENCE_PARAMS, chi, 300.0)
        assert x == pytest.approx(0.26450, abs=1e-4)
        assert x == pytest.approx(X_300, rel=1e-13)

    def test_matches_fluctuation_oracle_on_dense_grid(self):
        p = REFERENCE_PARAMS
        T = np.geomspace(1.0, 1e5, 1000)
        closed = susceptibility(p, T)
        fluct = np.array([oracle.fluctuation_susceptibility(p, t) for t in T])
        # relative precision is only defined above the smallest normal double
        assert_allclose(closed, fluct, rtol=1e-10, atol=np.finfo(float).tiny)

    def test_no_overflow_at_low_T(self):
        with np.errstate(over="raise", invalid="raise"):
            assert susceptibility(REFERENCE_PARAMS, 0.5) == 0.0
            assert model_moment(DimerParams(748.5), 0.5) == pytest.approx(4 / 3)

    def test_derivatives_match_finite_differences(self):
        p = REFERENCE_PARAMS
        T = np.linspace(50, 1000, 20)
        d_J, d_g = susceptibility_derivatives(p, T)
        h = 1e-4
        fd_J = (susceptibility(DimerParams(p.J + h, p.g), T)
                - susceptibility(DimerParams(p.J - h, p.g), T)) / (2 * h)
        fd_g = (susceptibility(DimerParams(p.J, p.g + h), T)
                - susceptibility(DimerParams(p.J, p.g - h), T)) / (2 * h)
        assert_allclose(d_J, fd_J, rtol=1e-7)
        assert_allclose(d_g, fd_g, rtol=1e-9)


class TestNormalizedMoment:
    def test_bounds_for_afm(self):
        T = np.geomspace(1, 1e5, 200)
        x = model_moment(REFERENCE_PARAMS, T)
        assert np.all((x >= 0) & (x < 1))

    def test_tail_at_9540K(self):
        # direct evaluation of 4/(3 + e^{748.5/9540})
        assert model_moment(REFERENCE_PARAMS, 9540.0) == pytest.approx(0.9800, abs=1e-3)
        assert model_moment(REFERENCE_PARAMS, 9540.0) == pytest.approx(0.98000324518729329, rel=1e-13)

    def test_zero_chi(self):
        x = normalized_moment(REFERENCE_PARAMS, 0.0, 100.0)
        assert x == 0.0
        assert correlation_function(x) == -1.0

    def test_unphysical_flagged(self):
        chi = 1.5 * moment_prefactor(2.07) / 10.0
        with pytest.raises(UnphysicalInputError):
            normalized_moment(REFERENCE_PARAMS, chi, 10.0)
        assert normalized_moment(REFERENCE_PARAMS, chi, 10.0, allow_unphysical=True) == \
            pytest.approx(1.5)


class TestCorrelationFunction:
    @pytest.mark.parametrize("x, c", [(1.0, 0.0), (0.0, -1.0)])
    def test_trivial(self, x, c):
        assert correlation_function(x) == c

    def test_300K_matches_gibbs_state(self):
        assert correlation_function(X_300) == pytest.approx(-0.73550, abs=1e-4)
        assert correlation_function(X_300) == pytest.approx(
            thermal_state(REFERENCE_PARAMS, 300.0).c, abs=1e-14)

    def test_consistency_triangle(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            p = DimerParams(rng.uniform(-2000, 2000), rng.uniform(1.8, 2.4))
            T = float(np.exp(rng.uniform(0, np.log(1e5))))
            chi = susceptibility(p, T)
            via_chi = correlation_function(normalized_moment(p, chi, T))
            assert via_chi == pytest.approx(thermal_state(p, T).c, abs=1e-10)

    def test_monotone_in_temperature(self):
        T = np.geomspace(1, 1e5, 5000)
        x = model_moment(REFERENCE_PARAMS, T)
        c = correlation_function(x)
        assert np.all(np.diff(c) >= 0)
        # x itself stays resolvable down to the underflow of exp(-|J|/T)
        resolved = x > np.finfo(float).tiny
        assert np.all(np.diff(x[resolved]) > 0)
        assert c[0] >= -1 and c[-1] < 0

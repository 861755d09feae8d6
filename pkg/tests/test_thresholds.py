import math

import numpy as np
import pytest
from scipy.optimize import brentq

from spindimer import oracle, thresholds
from spindimer.dimer import REFERENCE_PARAMS, DimerParams
from spindimer.errors import AmbiguousBracketError, InvalidInputError
from spindimer.measures import (eof_of_moment, entanglement_of_formation,
                                entropic_discord)
from spindimer.thresholds import (crossing_temperature, entanglement_temperature,
                                  epsilon_threshold, measure_at,
                                  purity_temperature, threshold_report)


def wootters_at(params, T):
    return oracle.wootters_concurrence(oracle.gibbs_state(params, T))


def _oscillating_measure(params, name, T):
    T = np.asarray(T, dtype=float)
    if name == "eof":
        return 0.5 + 0.1 * np.sin(T / 20.0)
    return np.full_like(T, 0.5)


class TestEntanglementTemperature:
    def test_reference_value(self):
        T_e = entanglement_temperature(REFERENCE_PARAMS)
        assert T_e == pytest.approx(681, abs=1)
        assert T_e == pytest.approx(681.31406113, abs=1e-8)

    def test_unit_normalization(self):
        assert entanglement_temperature(DimerParams(-math.log(3))) == pytest.approx(1.0, rel=1e-15)

    def test_J_minus_100_against_wootters_bisection(self):
        p = DimerParams(-100.0)
        # Wootters concurrence is exactly zero above T_e, so bisect on C > 0
        lo, hi = 50.0, 150.0
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            lo, hi = (mid, hi) if wootters_at(p, mid) > 1e-13 else (lo, mid)
        assert entanglement_temperature(p) == pytest.approx(91.02, abs=5e-3)
        assert entanglement_temperature(p) == pytest.approx(lo, abs=1e-3)

    @pytest.mark.parametrize("J", [0.0, 100.0])
    def test_no_entanglement_for_non_afm(self, J):
        assert entanglement_temperature(DimerParams(J)) is None

    def test_concurrence_epsilon_limit(self):
        T = epsilon_threshold(REFERENCE_PARAMS, "concurrence", 1e-9)
        assert T < entanglement_temperature(REFERENCE_PARAMS)
        assert T == pytest.approx(entanglement_temperature(REFERENCE_PARAMS), abs=1e-3)


class TestEpsilonThreshold:
    def test_geometric_discord(self):
        T = epsilon_threshold(REFERENCE_PARAMS, "geometric_discord", 0.01)
        assert T == pytest.approx(9540, abs=20)
        closed = 748.5 / math.log((1 + 6 * 0.01) / (1 - 2 * 0.01))
        assert T == pytest.approx(closed, rel=1e-12)

    def test_entropic_discord(self):
        T = epsilon_threshold(REFERENCE_PARAMS, "entropic_discord", 0.01)
        assert T == pytest.approx(2320, abs=15)
        found = oracle.numerical_discord(oracle.gibbs_state(REFERENCE_PARAMS, T))
        assert abs(found - 0.01) <= 2e-6

    @pytest.mark.parametrize("measure", ["entropic_discord", "geometric_discord",
                                         "concurrence", "eof"])
    def test_self_consistent(self, measure):
        for eps in (1e-4, 0.01, 0.3):
            T = epsilon_threshold(REFERENCE_PARAMS, measure, eps)
            assert abs(float(measure_at(REFERENCE_PARAMS, measure, T)) - eps) <= 1e-9

    @pytest.mark.parametrize("measure", ["entropic_discord", "geometric_discord",
                                         "concurrence", "eof"])
    def test_strictly_decreasing_in_epsilon(self, measure):
        top = 0.5 if measure == "geometric_discord" else 1.0
        eps = np.linspace(0.01, 0.9, 10) * top
        T = [epsilon_threshold(REFERENCE_PARAMS, measure, e) for e in eps]
        assert np.all(np.diff(T) < 0)

    def test_agrees_with_brentq(self):
        f = lambda T: entropic_discord(4 / (3 + np.exp(748.5 / T))) - 0.01  # noqa: E731
        reference = brentq(f, 1000, 5000, xtol=1e-12, rtol=1e-15)
        assert epsilon_threshold(REFERENCE_PARAMS, "entropic_discord", 0.01) == \
            pytest.approx(reference, rel=1e-12)

    @pytest.mark.parametrize("measure, eps", [("geometric_discord", 0.5),
                                              ("entropic_discord", 1.0),
                                              ("eof", 0.0), ("eof", -0.1)])
    def test_out_of_range(self, measure, eps):
        with pytest.raises(InvalidInputError):
            epsilon_threshold(REFERENCE_PARAMS, measure, eps)

    def test_unknown_measure(self):
        with pytest.raises(InvalidInputError):
            epsilon_threshold(REFERENCE_PARAMS, "mutual_information", 0.1)

    def test_requires_afm(self):
        with pytest.raises(InvalidInputError):
            epsilon_threshold(DimerParams(10.0), "eof", 0.1)


class TestCrossing:
    def test_eof_vs_entropic_discord(self):
        T = crossing_temperature(REFERENCE_PARAMS, "eof", "entropic_discord", (150, 400))
        assert T == pytest.approx(221, abs=3)
        x = 4 / (3 + math.exp(748.5 / T))
        assert abs(eof_of_moment(x) - entropic_discord(x)) <= 1e-9

    def test_crossing_via_wootters_oracle(self):
        T = crossing_temperature(REFERENCE_PARAMS, "eof", "entropic_discord", (150, 400))
        rho = oracle.gibbs_state(REFERENCE_PARAMS, T)
        eof = entanglement_of_formation(oracle.wootters_concurrence(rho))
        assert abs(eof - oracle.numerical_discord(rho)) <= 5e-6

    def test_geometric_vs_entropic(self):
        T = crossing_temperature(REFERENCE_PARAMS, "geometric_discord", "entropic_discord",
                                 (400, 600))
        assert 450 < T < 500
        # dense grid scan of the two closed forms brackets the same root
        grid = np.linspace(400, 600, 20001)
        d = measure_at(REFERENCE_PARAMS, "geometric_discord", grid) - \
            measure_at(REFERENCE_PARAMS, "entropic_discord", grid)
        i = np.flatnonzero(np.diff(np.sign(d)))[0]
        assert grid[i] <= T <= grid[i + 1]

    def test_same_measure(self):
        assert crossing_temperature(REFERENCE_PARAMS, "eof", "eof", (100, 200)) is None

    def test_no_crossing(self):
        assert crossing_temperature(REFERENCE_PARAMS, "eof", "entropic_discord", (300, 600)) is None

    def test_round_off_ties_are_not_crossings(self):
        # both measures equal 1 to machine precision below ~7 K
        T = crossing_temperature(REFERENCE_PARAMS, "eof", "entropic_discord", (2, 400))
        assert T == pytest.approx(220.09, abs=0.01)

    def test_ambiguous_bracket(self, monkeypatch):
        # no pair of dimer profiles crosses twice, so feed an oscillating one
        monkeypatch.setattr(thresholds, "measure_at", _oscillating_measure)
        with pytest.raises(AmbiguousBracketError, match="narrow"):
            crossing_temperature(REFERENCE_PARAMS, "eof", "entropic_discord", (100, 400))

    def test_bad_bracket(self):
        with pytest.raises(InvalidInputError):
            crossing_temperature(REFERENCE_PARAMS, "eof", "entropic_discord", (400, 150))


class TestPurity:
    def test_eof(self):
        T = purity_temperature(REFERENCE_PARAMS, 1e-3, "eof")
        assert T == pytest.approx(83, abs=2)
        assert float(measure_at(REFERENCE_PARAMS, "eof", T)) == pytest.approx(1 - 1e-3, abs=1e-9)

    def test_eof_via_wootters_oracle(self):
        T = purity_temperature(REFERENCE_PARAMS, 1e-3, "eof")
        for dT, sign in ((-0.01, 1), (0.01, -1)):
            eof = entanglement_of_formation(wootters_at(REFERENCE_PARAMS, T + dT))
            assert sign * (eof - (1 - 1e-3)) > 0

    def test_entropic_discord_band(self):
        T = purity_temperature(REFERENCE_PARAMS, 2e-3, "entropic_discord")
        assert 78 <= T <= 86
        assert T == pytest.approx(83, abs=1)

    def test_min_of_both(self):
        T = purity_temperature(REFERENCE_PARAMS, 1e-3, "min_of_both")
        assert T == pytest.approx(min(purity_temperature(REFERENCE_PARAMS, 1e-3, "eof"),
                                      purity_temperature(REFERENCE_PARAMS, 1e-3, "entropic_discord")),
                                  rel=1e-12)

    def test_delta_near_one_approaches_T_e(self):
        T = purity_temperature(REFERENCE_PARAMS, 0.999, "eof")
        T_e = entanglement_temperature(REFERENCE_PARAMS)
        assert T < T_e
        assert T == pytest.approx(T_e, rel=0.05)

    @pytest.mark.parametrize("delta", [0.0, 1.0, 2.0])
    def test_bad_delta(self, delta):
        with pytest.raises(InvalidInputError):
            purity_temperature(REFERENCE_PARAMS, delta)


def _all_thresholds(params):
    return np.array([
        entanglement_temperature(params),
        epsilon_threshold(params, "geometric_discord", 0.01),
        epsilon_threshold(params, "entropic_discord", 0.01),
        epsilon_threshold(params, "concurrence", 0.2),
        epsilon_threshold(params, "eof", 0.2),
        purity_temperature(params, 1e-3, "eof"),
        purity_temperature(params, 2e-3, "entropic_discord"),
        crossing_temperature(params, "eof", "entropic_discord",
                             (150 * abs(params.J) / 748.5, 400 * abs(params.J) / 748.5)),
        crossing_temperature(params, "geometric_discord", "entropic_discord",
                             (400 * abs(params.J) / 748.5, 600 * abs(params.J) / 748.5)),
    ])


class TestScaling:
    base = _all_thresholds(REFERENCE_PARAMS)

    @pytest.mark.parametrize("k", [0.5, 2.0, 10.0])
    def test_linear_in_J(self, k):
        scaled = _all_thresholds(DimerParams(k * REFERENCE_PARAMS.J, REFERENCE_PARAMS.g))
        np.testing.assert_allclose(scaled, k * self.base, rtol=1e-9)

    @pytest.mark.parametrize("g", [1.5, 2.0, 2.3])
    def test_independent_of_g(self, g):
        np.testing.assert_allclose(_all_thresholds(DimerParams(REFERENCE_PARAMS.J, g)),
                                   self.base, rtol=1e-9)


class TestReport:
    def test_reference_defaults(self):
        report = threshold_report(REFERENCE_PARAMS)
        assert report.T_entanglement == pytest.approx(681.3, abs=0.1)
        assert report.T_pure["T"] == pytest.approx(83, abs=2)
        eps = {e["measure"]: e["T"] for e in report.epsilon_thresholds}
        assert eps["geometric_discord"] == pytest.approx(9538, abs=2)
        assert eps["entropic_discord"] == pytest.approx(2320, abs=15)
        cross = {tuple(c["measures"]): c for c in report.crossings}
        assert cross["eof", "entropic_discord"]["T"] == pytest.approx(221, abs=3)
        assert cross["eof", "entropic_discord"]["status"] == "ok"
        assert report.parameters == {"J": -748.5, "g": 2.07}

    def test_stability_annotation_does_not_change_values(self):
        clamped = threshold_report(REFERENCE_PARAMS, stability_limit=513.0)
        free = threshold_report(REFERENCE_PARAMS, stability_limit=None)
        geo = clamped.epsilon_thresholds[0]
        assert geo["above_stability_limit"] and geo["T_clamped"] == 513.0
        assert geo["T"] == free.epsilon_thresholds[0]["T"]
        assert "T_clamped" not in free.epsilon_thresholds[0]
        assert any("stability" in n for n in clamped.notes)

    def test_ferromagnet(self):
        report = threshold_report(DimerParams(100.0))
        assert report.T_entanglement is None
        assert report.T_pure["T"] is None
        assert report.notes

    def test_ambiguous_crossing_is_structured(self, monkeypatch):
        def ambiguous(*args):
            raise AmbiguousBracketError("2 sign changes; narrow the bracket")

        monkeypatch.setattr(thresholds, "crossing_temperature", ambiguous)
        report = threshold_report(REFERENCE_PARAMS)
        assert report.crossings[0]["status"] == "ambiguous"
        assert report.crossings[0]["T"] is None

    def test_doubled_coupling(self):
        a = threshold_report(REFERENCE_PARAMS, stability_limit=None)
        b = threshold_report(DimerParams(-1497.0, 2.07), stability_limit=None)
        assert b.T_entanglement == pytest.approx(2 * a.T_entanglement, rel=1e-12)
        assert b.T_pure["T"] == pytest.approx(2 * a.T_pure["T"], rel=1e-9)
        for x, y in zip(a.epsilon_thresholds + a.crossings,
                        b.epsilon_thresholds + b.crossings):
            assert y["T"] == pytest.approx(2 * x["T"], rel=1e-9)

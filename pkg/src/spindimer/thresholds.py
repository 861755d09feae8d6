"""Characteristic temperatures of the dimer's correlation profiles.

All profiles of an antiferromagnetic dimer are functions of J/T only and are
monotone in T, so every threshold is found by bracketed bisection carried to
machine precision. Consequently thresholds scale exactly with |J| and do not
depend on g.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.optimize import bisect

from .dimer import DimerParams, model_moment
from .errors import AmbiguousBracketError, InvalidInputError
from .measures import MEASURES, measure_of_moment

THRESHOLD_MEASURES = ("entropic_discord", "geometric_discord", "concurrence", "eof")
PURITY_MEASURES = ("entropic_discord", "eof", "min_of_both")

DEFAULT_EPSILON = 0.01
DEFAULT_DELTA = 1e-3
DEFAULT_STABILITY_LIMIT = 513.0

# value of each measure in the T -> 0 (pure singlet) limit
_GROUND_VALUE = {"entropic_discord": 1.0, "geometric_discord": 0.5,
                 "concurrence": 1.0, "eof": 1.0, "min_of_both": 1.0}

_RTOL = 4.5 * np.finfo(float).eps
_SCAN_POINTS = 513
# differences below this are round-off ties (e.g. two measures both equal
# to 1 near the singlet limit) and carry no sign information
_TIE_TOL = 1e-12


def measure_at(params: DimerParams, name: str, T):
    """Measure `name` of the dimer Gibbs state at temperature(s) `T` (K)."""
    x = model_moment(params, T)
    if name == "min_of_both":
        return np.minimum(measure_of_moment("entropic_discord", x),
                          measure_of_moment("eof", x))
    return measure_of_moment(name, x)


def _require_afm(params: DimerParams):
    if not params.J < 0:
        raise InvalidInputError("thresholds are defined for antiferromagnetic J < 0")


def _solve_decreasing(f, scale: float) -> float:
    """Root of a decreasing function of T, starting from [1, 10 scale] K."""
    lo, hi = 1.0, 10.0 * scale
    while f(lo) <= 0:
        lo /= 2.0
        if lo < 1e-300:
            raise InvalidInputError("could not bracket threshold from below")
    while f(hi) > 0:
        hi *= 2.0
        if hi > 1e300:
            raise InvalidInputError("could not bracket threshold from above")
    return bisect(f, lo, hi, xtol=1e-300, rtol=_RTOL, maxiter=4000)


def entanglement_temperature(params: DimerParams) -> float | None:
    """|J| / ln 3, above which the concurrence is exactly zero.

    Returns None when J >= 0 (no entanglement at any temperature).
    """
    if params.J >= 0:
        return None
    return abs(params.J) / math.log(3.0)


def epsilon_threshold(params: DimerParams, measure: str,
                      epsilon: float = DEFAULT_EPSILON) -> float:
    """Temperature at which `measure` has decayed to `epsilon`."""
    _require_afm(params)
    if measure not in THRESHOLD_MEASURES:
        raise InvalidInputError(f"measure must be one of {THRESHOLD_MEASURES}")
    if not 0 < epsilon < _GROUND_VALUE[measure]:
        raise InvalidInputError(
            f"epsilon must lie in (0, {_GROUND_VALUE[measure]}) for {measure}")
    return _solve_decreasing(lambda T: float(measure_at(params, measure, T)) - epsilon,
                             abs(params.J))


def purity_temperature(params: DimerParams, delta: float = DEFAULT_DELTA,
                       measure: str = "eof") -> float:
    """Temperature at which `measure` falls to 1 - delta."""
    _require_afm(params)
    if measure not in PURITY_MEASURES:
        raise InvalidInputError(f"measure must be one of {PURITY_MEASURES}")
    if not 0 < delta < 1:
        raise InvalidInputError("delta must lie in (0, 1)")
    target = 1.0 - delta
    return _solve_decreasing(lambda T: float(measure_at(params, measure, T)) - target,
                             abs(params.J))


def crossing_temperature(params: DimerParams, a: str, b: str,
                         bracket: tuple[float, float]) -> float | None:
    """Temperature in `bracket` where measures `a` and `b` cross.

    Returns None if ``a - b`` does not change sign on the bracket. Raises
    `AmbiguousBracketError` if a scan of the bracket finds more than one
    sign change.
    """
    for name in (a, b):
        if name not in MEASURES:
            raise InvalidInputError(f"unknown measure {name!r}")
    lo, hi = map(float, bracket)
    if not 0 < lo < hi:
        raise InvalidInputError("bracket must satisfy 0 < low < high")
    if a == b:
        return None

    def diff(T):
        return measure_at(params, a, T) - measure_at(params, b, T)

    grid = np.linspace(lo, hi, _SCAN_POINTS)
    d = diff(grid)
    resolved = np.flatnonzero(np.abs(d) > _TIE_TOL)
    changes = np.flatnonzero(np.diff(np.sign(d[resolved])) != 0)
    if len(changes) == 0:
        return None
    if len(changes) > 1:
        raise AmbiguousBracketError(
            f"{len(changes)} sign changes of {a} - {b} on {bracket}; narrow the bracket")
    i, j = resolved[changes[0]], resolved[changes[0] + 1]
    return bisect(lambda T: float(diff(T)), grid[i], grid[j],
                  xtol=1e-300, rtol=_RTOL, maxiter=4000)


# Crossings reported by default: (a, b, bracket in units of |J|)
DEFAULT_CROSSINGS = (
    ("eof", "entropic_discord", (150.0, 400.0)),
    ("geometric_discord", "entropic_discord", (400.0, 600.0)),
)


@dataclass
class ThresholdReport:
    T_entanglement: float | None
    T_pure: dict
    epsilon_thresholds: list[dict]
    crossings: list[dict]
    parameters: dict
    stability_limit: float | None = None
    notes: list[str] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return asdict(self)


def _annotate(entry: dict, limit: float | None) -> dict:
    T = entry.get("T")
    if limit is not None and T is not None:
        entry["above_stability_limit"] = bool(T > limit)
        entry["T_clamped"] = min(T, limit)
    return entry


def threshold_report(params: DimerParams, epsilon: float = DEFAULT_EPSILON,
                     delta: float = DEFAULT_DELTA, purity_measure: str = "eof",
                     crossings=DEFAULT_CROSSINGS,
                     stability_limit: float | None = DEFAULT_STABILITY_LIMIT,
                     ) -> ThresholdReport:
    """Solve all characteristic temperatures for `params`.

    Default crossing brackets are quoted for J = -748.5 K and are rescaled
    by |J| / 748.5 so that the report scales with the coupling. The
    stability limit only annotates entries; solver output is unchanged.
    """
    echo = {"J": params.J, "g": params.g}
    if params.J >= 0:
        return ThresholdReport(
            T_entanglement=None,
            T_pure={"measure": purity_measure, "delta": delta, "T": None},
            epsilon_thresholds=[], crossings=[], parameters=echo,
            stability_limit=stability_limit,
            notes=["J >= 0: ground state is the triplet, no entanglement at any T"])

    k = abs(params.J) / 748.5
    T_e = entanglement_temperature(params)
    pure = _annotate({"measure": purity_measure, "delta": delta,
                      "T": purity_temperature(params, delta, purity_measure)},
                     stability_limit)
    eps = [_annotate({"measure": m, "epsilon": epsilon,
                      "T": epsilon_threshold(params, m, epsilon)}, stability_limit)
           for m in ("geometric_discord", "entropic_discord")]
    cross = []
    for a, b, (lo, hi) in crossings:
        bracket = [lo * k, hi * k]
        entry = {"measures": [a, b], "bracket": bracket}
        try:
            T = crossing_temperature(params, a, b, bracket)
            entry.update(T=T, status="ok" if T is not None else "no-crossing")
        except AmbiguousBracketError as exc:
            entry.update(T=None, status="ambiguous", message=str(exc))
        cross.append(_annotate(entry, stability_limit))
    notes = []
    if stability_limit is not None and T_e > stability_limit:
        notes.append(f"T_entanglement exceeds the stability limit {stability_limit:g} K")
    return ThresholdReport(T_entanglement=T_e, T_pure=pure, epsilon_thresholds=eps,
                           crossings=cross, parameters=echo,
                           stability_limit=stability_limit, notes=notes)

"""Closed-form quantum correlation measures of the dimer's thermal state.

All measures take the normalized moment ``x`` (equivalently the correlation
coefficient ``c = x - 1``), so they apply equally to model curves and to
susceptibility data converted with :func:`spindimer.dimer.normalized_moment`.
Entropies are in bits and ``0 log 0 = 0`` throughout.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np
from scipy.special import xlogy

from .dimer import X_MAX, _scalar_or_array, check_moment
from .errors import InvalidInputError

LN2 = np.log(2.0)

MEASURES = (
    "concurrence",
    "eof",
    "entropic_discord",
    "geometric_discord",
    "mutual_information",
    "classical_correlation",
)


def _xlog2x(p):
    return xlogy(p, p) / LN2


def _check_correlation(c, slack=1e-6):
    c = np.asarray(c, dtype=float)
    return check_moment(c + 1.0, slack) - 1.0


def binary_entropy(p):
    """h(p) = -p log2 p - (1-p) log2 (1-p)."""
    p = np.asarray(p, dtype=float)
    return _scalar_or_array(-_xlog2x(p) - _xlog2x(1.0 - p))


def classical_correlation(c, slack: float = 1e-6):
    """Classical correlation of the Werner state with correlation `c`.

    Optimized one-way classical correlation; for this family any projective
    measurement on one spin reaches the maximum.
    """
    a = np.abs(_check_correlation(c, slack))
    return _scalar_or_array(0.5 * (_xlog2x(1.0 + a) + _xlog2x(1.0 - a)))


def mutual_information(c, slack: float = 1e-6):
    """Quantum mutual information 2 - S(rho); both marginals are I/2."""
    c = _check_correlation(c, slack)
    s = -_xlog2x((1.0 - 3.0 * c) / 4.0) - 3.0 * _xlog2x((1.0 + c) / 4.0)
    return _scalar_or_array(2.0 - s)


def entropic_discord(x, slack: float = 1e-6):
    """Entropic quantum discord as a function of x = alpha T chi.

    Written in terms of x exactly:

        Q = 1/4 [(4-3x) log2(4-3x) + 3x log2 x]
            - 1/2 [(1+|x-1|) log2(1+|x-1|) + (1-|x-1|) log2(1-|x-1|)]

    x = 0 (pure singlet) takes the continuous limit Q = 1.
    """
    x = check_moment(x, slack)
    a = np.abs(x - 1.0)
    total = 0.25 * (_xlog2x(4.0 - 3.0 * x) + 3.0 * _xlog2x(x))
    classical = 0.5 * (_xlog2x(1.0 + a) + _xlog2x(1.0 - a))
    return _scalar_or_array(total - classical)


def geometric_discord(c, slack: float = 1e-6):
    """Schatten 1-norm geometric discord |c|/2 (maximum 1/2)."""
    c = _check_correlation(c, slack)
    return _scalar_or_array(0.5 * np.abs(c))


def concurrence(x, slack: float = 1e-6):
    """Concurrence max{0, (2 - 3x)/2}.

    Vanishes for x >= 2/3, i.e. above |J| / ln 3 for the dimer model.

    Notes
    -----
    The form ``-(2 + 3x)/2`` sometimes quoted for this quantity is negative
    for every x > 0; the expression used here is the Wootters concurrence
    of the Werner state (checked in :mod:`spindimer.oracle`).
    """
    x = check_moment(x, slack)
    return _scalar_or_array(np.maximum(0.0, (2.0 - 3.0 * x) / 2.0))


def entanglement_of_formation(C):
    """Entanglement of formation h((1 + sqrt(1 - C^2)) / 2) from concurrence."""
    C = np.asarray(C, dtype=float)
    if np.any(np.isnan(C)) or np.any(C < 0) or np.any(C > 1):
        raise InvalidInputError("concurrence must lie in [0, 1]")
    # (1-C)(1+C) keeps precision as C -> 1
    root = np.sqrt((1.0 - C) * (1.0 + C))
    return _scalar_or_array(binary_entropy(0.5 * (1.0 + root)))


def eof_of_moment(x, slack: float = 1e-6):
    """Entanglement of formation as a function of x.

    Uses 1 - C^2 = (3x/2)(2 - 3x/2) to avoid cancellation near the singlet.
    """
    x = check_moment(x, slack)
    C = np.maximum(0.0, (2.0 - 3.0 * x) / 2.0)
    one_minus = np.where(C > 0, 1.5 * x * (2.0 - 1.5 * x), 1.0)
    p = 0.5 * (1.0 + np.sqrt(one_minus))
    return _scalar_or_array(np.where(C > 0, -_xlog2x(p) - _xlog2x(1.0 - p), 0.0))


def measure_of_moment(name: str, x, slack: float = 1e-6):
    """Evaluate the measure called `name` (see `MEASURES`) at moment x."""
    if name == "concurrence":
        return concurrence(x, slack)
    if name == "eof":
        return eof_of_moment(x, slack)
    if name == "entropic_discord":
        return entropic_discord(x, slack)
    c = np.asarray(x, dtype=float) - 1.0
    if name == "geometric_discord":
        return geometric_discord(c, slack)
    if name == "mutual_information":
        return mutual_information(c, slack)
    if name == "classical_correlation":
        return classical_correlation(c, slack)
    raise InvalidInputError(f"unknown measure {name!r}; expected one of {MEASURES}")


@dataclass(frozen=True)
class CorrelationPoint:
    T: float
    x: float
    c: float
    concurrence: float
    eof: float
    entropic_discord: float
    geometric_discord: float
    mutual_information: float
    classical_correlation: float

    def as_dict(self) -> dict:
        return asdict(self)


FIELDS = ("T", "x", "c") + MEASURES


def correlation_table(x, T) -> dict[str, np.ndarray]:
    """All measures for arrays of moments `x` at temperatures `T`, column-wise."""
    x = check_moment(np.atleast_1d(np.asarray(x, dtype=float)))
    T = np.broadcast_to(np.asarray(T, dtype=float), x.shape)
    cols = {"T": np.array(T), "x": x, "c": x - 1.0}
    for name in MEASURES:
        cols[name] = np.atleast_1d(measure_of_moment(name, x))
    return {k: cols[k] for k in FIELDS}


def correlation_points(x, T) -> list[CorrelationPoint]:
    cols = correlation_table(x, T)
    return [CorrelationPoint(**{k: float(cols[k][i]) for k in FIELDS})
            for i in range(len(cols["x"]))]


"""Reading susceptibility curves and fitting (J, g) of the dimer model.

The fit is a damped (Levenberg-Marquardt) least-squares problem on either
chi or chi*T, with the analytic partial derivatives of the dimer
susceptibility as Jacobian. Data are converted to SI before fitting, so the
result does not depend on the unit system the file was written in.
"""
from __future__ import annotations

import csv
import io
import logging
import math
import os
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares, minimize

from .dimer import (DimerParams, moment_prefactor, susceptibility,
                    susceptibility_derivatives)
from .errors import CurveParseError, InvalidInputError
from .units import UnitSystem, conversion_factor

logger = logging.getLogger(__name__)

FIT_SPACES = ("chi", "chiT")
MIN_FIT_SAMPLES = 5

# Relative error in J per unit relative noise above which J is reported as
# not identifiable from the data.
J_NOISE_GAIN_LIMIT = 50.0
GRADIENT_TOL = 1e-8
# A fitted g below this means the model amplitude collapsed to zero, which
# leaves J undetermined.
G_COLLAPSE = 1e-6


@dataclass
class SusceptibilityCurve:
    """Temperature (K) / susceptibility samples in a declared unit system."""

    T: np.ndarray
    chi: np.ndarray
    units: UnitSystem = UnitSystem.SI
    label: str = ""

    def __post_init__(self):
        self.T = np.asarray(self.T, dtype=float)
        self.chi = np.asarray(self.chi, dtype=float)
        self.units = UnitSystem.parse(self.units)
        if self.T.shape != self.chi.shape or self.T.ndim != 1:
            raise InvalidInputError("T and chi must be 1-d arrays of equal length")
        if not np.all(np.isfinite(self.T)) or not np.all(np.isfinite(self.chi)):
            raise InvalidInputError("curve contains non-finite values")
        if np.any(self.T <= 0):
            raise InvalidInputError("temperatures must be > 0 K")
        if np.any(np.diff(self.T) <= 0):
            raise InvalidInputError("temperatures must be strictly increasing")

    def __len__(self):
        return len(self.T)

    def to_units(self, units: UnitSystem | str) -> "SusceptibilityCurve":
        units = UnitSystem.parse(units)
        return SusceptibilityCurve(self.T.copy(),
                                   self.chi * conversion_factor(self.units, units),
                                   units, self.label)

    @property
    def chi_si(self) -> np.ndarray:
        return self.chi * conversion_factor(self.units, UnitSystem.SI)


def _read_text(source) -> str:
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as f:
            data = f.read()
    elif hasattr(source, "read"):
        data = source.read()
    else:
        data = source
    if isinstance(data, (bytes, bytearray)):
        data = data.decode("utf-8")
    return data


def parse_curve(text: str, units: UnitSystem | str = UnitSystem.SI,
                label: str = "") -> SusceptibilityCurve:
    """Parse comma-separated ``T,chi`` rows.

    Lines starting with ``#`` and blank lines are ignored. A single
    non-numeric header line is allowed before the first data row. Rows are
    sorted by temperature and duplicate temperatures are averaged.
    """
    rows: list[tuple[float, float]] = []
    header_seen = False
    reader = csv.reader(io.StringIO(text))
    for fields in reader:
        lineno = reader.line_num
        fields = [f.strip() for f in fields]
        while fields and fields[-1] == "":
            fields.pop()
        if not fields or fields[0].startswith("#"):
            continue
        if len(fields) != 2:
            raise CurveParseError(f"expected 2 columns (T, chi), got {len(fields)}", lineno)
        try:
            T, chi = float(fields[0]), float(fields[1])
        except ValueError:
            if not rows and not header_seen:
                header_seen = True
                continue
            raise CurveParseError(f"non-numeric row {fields!r}", lineno) from None
        if not (math.isfinite(T) and math.isfinite(chi)):
            raise CurveParseError("non-finite value", lineno)
        if T <= 0:
            raise CurveParseError(f"temperature must be > 0 K, got {T}", lineno)
        rows.append((T, chi))
    if not rows:
        raise CurveParseError("no data rows found")

    data = np.array(rows)
    T_unique, inverse, counts = np.unique(data[:, 0], return_inverse=True,
                                          return_counts=True)
    if np.any(counts > 1):
        warnings.warn(f"{int(np.sum(counts > 1))} duplicate temperature(s) averaged",
                      stacklevel=2)
    chi = np.bincount(inverse, weights=data[:, 1]) / counts
    return SusceptibilityCurve(T_unique, chi, units, label)


def load_curve(source, units: UnitSystem | str = UnitSystem.SI,
               label: str = "") -> SusceptibilityCurve:
    """Load a curve from a path, a file object, or raw bytes/str content."""
    if not label and isinstance(source, (str, os.PathLike)):
        label = os.path.basename(os.fspath(source))
    return parse_curve(_read_text(source), units, label)


def synthesize_curve(params: DimerParams, T_grid, noise_fraction: float = 0.0,
                     seed: int = 0, units: UnitSystem | str = UnitSystem.SI,
                     label: str = "synthetic") -> SusceptibilityCurve:
    """Model curve times (1 + eps), eps ~ U(-noise_fraction, noise_fraction)."""
    if not noise_fraction >= 0:
        raise InvalidInputError("noise_fraction must be >= 0")
    T = np.asarray(T_grid, dtype=float)
    chi = np.asarray(susceptibility(params, T), dtype=float)
    if noise_fraction > 0:
        rng = np.random.default_rng(seed)
        chi = chi * (1.0 + rng.uniform(-noise_fraction, noise_fraction, size=T.shape))
    units = UnitSystem.parse(units)
    return SusceptibilityCurve(T, chi * conversion_factor(UnitSystem.SI, units),
                               units, label)


def initial_guess(curve: SusceptibilityCurve, g: float = 2.0) -> DimerParams:
    """Starting point from inverting x = 4/(3 + exp(-J/T)) at one sample.

    Uses the sample whose moment (with `g`) is closest to 1/2, which is
    where the dimer curve is most sensitive to J.
    """
    x = curve.chi_si * curve.T / moment_prefactor(g)
    ok = (x > 0) & (x < 4.0 / 3.0)
    if not np.any(ok):
        return DimerParams(J=-float(curve.T.max()), g=g)
    idx = np.flatnonzero(ok)[np.argmin(np.abs(x[ok] - 0.5))]
    J = -curve.T[idx] * math.log(4.0 / x[idx] - 3.0)
    if J == 0.0:
        J = -1.0
    return DimerParams(J=float(J), g=g)


@dataclass
class FitResult:
    J: float
    g: float
    residual_norm: float
    per_point_residuals: np.ndarray
    converged: bool
    iterations: int
    covariance_estimate: np.ndarray
    fit_space: str = "chiT"
    units: UnitSystem = UnitSystem.SI
    background: float | None = None
    r_squared: float = float("nan")
    method: str = "lm"
    noise_gain: tuple[float, float] = (float("nan"), float("nan"))
    diagnostics: list[str] = field(default_factory=list)

    @property
    def params(self) -> DimerParams:
        return DimerParams(self.J, self.g)

    @property
    def identifiable(self) -> bool:
        return bool(self.noise_gain[0] <= J_NOISE_GAIN_LIMIT)

    def to_json_dict(self) -> dict:
        out = {
            "J_K": self.J,
            "g": self.g,
            "residual_norm": self.residual_norm,
            "converged": self.converged,
            "iterations": self.iterations,
            "r_squared": self.r_squared,
            "fit_space": self.fit_space,
            "units": self.units.value,
            "method": self.method,
            "J_identifiable": self.identifiable,
            "covariance_estimate": np.asarray(self.covariance_estimate).tolist(),
            "diagnostics": list(self.diagnostics),
        }
        if self.background is not None:
            out["background"] = self.background
        return out


def _fit_space_data(curve: SusceptibilityCurve, fit_space: str):
    if fit_space == "chi":
        return curve.chi_si
    return curve.chi_si * curve.T


def _model(p, T, fit_space, chi_scale):
    """Model and Jacobian columns in fit space (SI)."""
    params = DimerParams(p[0], abs(p[1]))
    chi = np.asarray(susceptibility(params, T))
    d_J, d_g = susceptibility_derivatives(params, T)
    d_g = d_g * np.sign(p[1])
    cols = [d_J, d_g]
    if len(p) == 3:
        chi = chi + p[2] * chi_scale
        cols.append(np.full_like(T, chi_scale))
    jac = np.column_stack(cols)
    if fit_space == "chiT":
        return chi * T, jac * T[:, None]
    return chi, jac


def fit(curve: SusceptibilityCurve, initial: DimerParams | None = None,
        fit_space: str = "chiT", background: bool = False) -> FitResult:
    """Least-squares fit of the dimer susceptibility to `curve`.

    Parameters
    ----------
    curve : SusceptibilityCurve
        At least five samples.
    initial : DimerParams, optional
        Starting point; defaults to :func:`initial_guess`.
    fit_space : {"chiT", "chi"}
        Quantity whose squared residuals are minimized.
    background : bool
        Also fit an additive temperature-independent susceptibility.

    Returns
    -------
    FitResult
        Residuals are reported in `curve.units` (times K in chiT space).
        Failure modes are reported through ``converged`` and
        ``diagnostics`` rather than raised.
    """
    if fit_space not in FIT_SPACES:
        raise InvalidInputError(f"fit_space must be one of {FIT_SPACES}")
    if len(curve) < MIN_FIT_SAMPLES:
        raise InvalidInputError(f"need at least {MIN_FIT_SAMPLES} samples to fit")
    if initial is None:
        initial = initial_guess(curve)

    T = curve.T
    y = _fit_space_data(curve, fit_space)
    scale = float(np.max(np.abs(y)))
    if scale == 0.0:
        scale = 1.0
    chi_scale = float(np.max(np.abs(curve.chi_si))) or 1.0
    p0 = [initial.J, initial.g] + ([0.0] if background else [])

    def residuals(p):
        return (_model(p, T, fit_space, chi_scale)[0] - y) / scale

    def jacobian(p):
        return _model(p, T, fit_space, chi_scale)[1] / scale

    diagnostics: list[str] = []
    method = "lm"
    solver_failed = False
    jac0 = jacobian(p0)
    well_posed = np.all(np.isfinite(jac0)) and np.linalg.cond(jac0) < 1e12
    res = None
    if well_posed:
        try:
            res = least_squares(residuals, p0, jac=jacobian, method="lm",
                                xtol=1e-15, ftol=1e-15, gtol=1e-15,
                                max_nfev=2000)
        except (ValueError, np.linalg.LinAlgError) as exc:
            diagnostics.append(f"damped least squares failed: {exc}")
    else:
        diagnostics.append("ill-conditioned Jacobian at the initial point")

    if res is not None and res.status > 0 and np.all(np.isfinite(res.x)):
        p, nfev = res.x, res.nfev
    else:
        method = "nelder-mead"
        logger.info("falling back to simplex fit")
        simplex = minimize(lambda q: 0.5 * np.sum(residuals(q) ** 2), p0,
                           method="Nelder-Mead",
                           options={"xatol": 1e-12, "fatol": 1e-30,
                                    "maxiter": 20000, "maxfev": 40000})
        p, nfev = simplex.x, simplex.nfev
        if not simplex.success:
            solver_failed = True
            diagnostics.append(f"simplex did not converge: {simplex.message}")

    r = residuals(p)
    jac = jacobian(p)
    grad = float(np.linalg.norm(jac.T @ r))
    converged = bool(np.all(np.isfinite(p)) and grad < GRADIENT_TOL
                     and not solver_failed)
    if not converged and grad >= GRADIENT_TOL:
        diagnostics.append(f"gradient norm {grad:.3g} above tolerance")

    n, k = len(T), len(p)
    col_norms = np.linalg.norm(jac, axis=0)
    if (abs(p[1]) < G_COLLAPSE or np.any(col_norms == 0)
            or np.linalg.cond(jac / np.where(col_norms, col_norms, 1)) > 1e14):
        converged = False
        diagnostics.append("singular normal equations: parameters not determined by data")
        cov = np.full((k, k), np.inf)
        gain = (np.inf, np.inf)
    else:
        jac_u = jac * scale
        r_u = r * scale
        dof = max(n - k, 1)
        cov = np.sum(r_u ** 2) / dof * np.linalg.inv(jac_u.T @ jac_u)
        model_vals = _model(p, T, fit_space, chi_scale)[0]
        # log-sensitivities d ln(model) / d ln(J), d ln(model) / d ln(g)
        safe = np.where(model_vals != 0, model_vals, np.inf)
        sens = jac_u[:, :2] * np.array([p[0], p[1]]) / safe[:, None]
        try:
            gain = tuple(float(v) for v in
                         np.sqrt(n * np.diag(np.linalg.inv(sens.T @ sens))))
        except np.linalg.LinAlgError:
            gain = (np.inf, np.inf)
    if gain[0] > J_NOISE_GAIN_LIMIT:
        diagnostics.append(
            f"J poorly identifiable: 1% data noise maps to ~{gain[0]:.0f}% error in J; "
            "include temperatures comparable to or below |J|")

    to_units = conversion_factor(UnitSystem.SI, curve.units)
    resid_units = r * scale * to_units
    result = FitResult(
        J=float(p[0]), g=float(abs(p[1])),
        residual_norm=float(np.sum(resid_units ** 2)),
        per_point_residuals=resid_units,
        converged=converged,
        iterations=int(nfev),
        covariance_estimate=cov[:2, :2],
        fit_space=fit_space,
        units=curve.units,
        background=float(p[2] * chi_scale * to_units) if background else None,
        method=method,
        noise_gain=gain,
        diagnostics=diagnostics,
    )
    result.r_squared = goodness(result, curve).r_squared
    return result


@dataclass(frozen=True)
class FitStatistics:
    r_squared: float
    reduced_chi2: float
    max_abs_residual: float


def goodness(result: FitResult, curve: SusceptibilityCurve) -> FitStatistics:
    """R^2, residual_norm/(n - 2) and max |residual| of `result` on `curve`."""
    n = len(curve)
    if n <= 2:
        raise InvalidInputError("goodness needs more than 2 samples")
    chi_model = np.asarray(susceptibility(result.params, curve.T))
    if result.background is not None:
        chi_model = chi_model + result.background * conversion_factor(curve.units, UnitSystem.SI)
    y = _fit_space_data(curve, result.fit_space)
    model = chi_model * curve.T if result.fit_space == "chiT" else chi_model
    to_units = conversion_factor(UnitSystem.SI, curve.units)
    resid = (model - y) * to_units
    y = y * to_units
    ss_res = float(np.sum(resid ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else (1.0 if ss_res == 0 else -np.inf)
    return FitStatistics(r_squared=r2, reduced_chi2=ss_res / (n - 2),
                         max_abs_residual=float(np.max(np.abs(resid))))

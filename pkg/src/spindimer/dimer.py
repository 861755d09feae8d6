"""Zero-field spin-1/2 Heisenberg dimer, H = -J S1.S2.

Energies are carried in kelvin (divided by k_B) and J is given in kelvin
with the sign convention above: J < 0 is antiferromagnetic and puts the
singlet below the triplet.

The thermal state is a Werner (Bell-diagonal) state fully described by one
number, the normalized moment

    x = 2 k_B T chi / (mu_0 N_A (g mu_B)^2) = 4 / (3 + exp(-J/T)),

with spin-spin correlation c = <S1^i S2^i> * 4 = x - 1.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, UnphysicalInputError
from .units import CONSTANTS, MU_0

X_MAX = 4.0 / 3.0


@dataclass(frozen=True)
class DimerParams:
    """Exchange coupling `J` (K) and isotropic Lande factor `g`."""

    J: float
    g: float = 2.0

    def __post_init__(self):
        if not np.isfinite(self.J):
            raise InvalidInputError(f"J must be finite, got {self.J!r}")
        if not (np.isfinite(self.g) and self.g > 0):
            raise InvalidInputError(f"g must be positive, got {self.g!r}")


# Parameters fitted to the formate-bridged Cu(II) dimer.
REFERENCE_PARAMS = DimerParams(J=-748.5, g=2.07)


@dataclass(frozen=True)
class DimerSpectrum:
    E_singlet: float
    E_triplet: float
    degeneracy_singlet: int = 1
    degeneracy_triplet: int = 3

    @property
    def gap(self) -> float:
        """E_triplet - E_singlet, equal to -J."""
        return self.E_triplet - self.E_singlet


@dataclass(frozen=True)
class BellDiagonalState:
    """Werner-type thermal state of the dimer.

    `p_singlet` is the singlet population, `p_triplet_each` the population
    of each triplet level and `c` the isotropic correlation coefficient.
    """

    p_singlet: float
    p_triplet_each: float
    c: float

    @classmethod
    def from_correlation(cls, c: float) -> "BellDiagonalState":
        return cls((1.0 - 3.0 * c) / 4.0, (1.0 + c) / 4.0, c)

    @property
    def populations(self) -> np.ndarray:
        """Bell populations ordered (singlet, triplet, triplet, triplet)."""
        p = self.p_triplet_each
        return np.array([self.p_singlet, p, p, p])


def _scalar_or_array(a):
    a = np.asarray(a, dtype=float)
    return float(a) if a.ndim == 0 else a


def _check_temperature(T):
    T = np.asarray(T, dtype=float)
    if not np.all(T > 0):
        raise InvalidInputError("temperature must be > 0 K")
    return T


def spectrum(params: DimerParams) -> DimerSpectrum:
    """Singlet and triplet energies of -J S1.S2 in kelvin."""
    J = params.J
    return DimerSpectrum(E_singlet=0.75 * J, E_triplet=-0.25 * J)


def _triplet_population(gap, T):
    """Population of one triplet level for singlet-triplet gap `gap` (K).

    Split by the sign of the gap so the Boltzmann ratio never overflows.
    """
    r = np.exp(-np.abs(gap) / T)
    return np.where(gap >= 0, r / (1.0 + 3.0 * r), 1.0 / (r + 3.0))


def thermal_state(params: DimerParams, T: float) -> BellDiagonalState:
    """Gibbs state of the dimer at temperature `T` (K)."""
    T = float(_check_temperature(T))
    gap = spectrum(params).gap
    p_t = float(_triplet_population(gap, T))
    # 1 - 3 p_t loses digits when p_t -> 1/3; use the singlet weight directly.
    r = np.exp(-abs(gap) / T)
    p_s = 1.0 / (1.0 + 3.0 * r) if gap >= 0 else r / (r + 3.0)
    return BellDiagonalState(p_singlet=float(p_s), p_triplet_each=p_t,
                             c=4.0 * p_t - 1.0)


def model_moment(params: DimerParams, T):
    """Normalized moment x(T) = 4/(3 + exp(-J/T)) of the dimer model."""
    T = _check_temperature(T)
    return _scalar_or_array(4.0 * _triplet_population(-params.J, T))


def moment_prefactor(g: float) -> float:
    """mu_0 N_A (g mu_B)^2 / (2 k_B), so that chi * T = prefactor * x (SI)."""
    c = CONSTANTS
    return MU_0 * c.N_A * (g * c.mu_B) ** 2 / (2.0 * c.k_B)


def susceptibility(params: DimerParams, T):
    """Molar susceptibility of one mole of dimers, SI (m^3/mol).

    chi(T) = mu_0 * 2 N_A (g mu_B)^2 / (k_B T) / (3 + exp(-J/T))
    """
    T = _check_temperature(T)
    x = 4.0 * _triplet_population(-params.J, T)
    return _scalar_or_array(moment_prefactor(params.g) * x / T)


def susceptibility_derivatives(params: DimerParams, T):
    """Partial derivatives (d chi/dJ, d chi/dg) of `susceptibility`, SI."""
    T = _check_temperature(T)
    p_t = _triplet_population(-params.J, T)
    chi = moment_prefactor(params.g) * 4.0 * p_t / T
    # d/dJ of 1/(3+e^{-J/T}) = p_t * (1 - 3 p_t) / T
    d_J = chi * (1.0 - 3.0 * p_t) / T
    d_g = 2.0 * chi / params.g
    return d_J, d_g


def normalized_moment(params: DimerParams, chi, T, allow_unphysical: bool = False):
    """Map susceptibility (SI, per mole of dimers) at `T` to x.

    Raises `UnphysicalInputError` when x falls outside [0, 4/3] unless
    `allow_unphysical` is set.
    """
    T = _check_temperature(T)
    x = np.asarray(chi, dtype=float) * T / moment_prefactor(params.g)
    upper = X_MAX * (1.0 + 1e-12)  # round-off of the chi -> x round trip
    if not allow_unphysical and (np.any(x < 0) or np.any(x > upper)):
        bad = x[(x < 0) | (x > upper)] if x.ndim else x
        raise UnphysicalInputError(
            f"normalized moment outside [0, 4/3]: {np.ravel(bad)[:5]}")
    return _scalar_or_array(x)


def check_moment(x, slack: float = 1e-6):
    """Validate x against [0, 4/3], clamping excursions up to `slack`."""
    x = np.asarray(x, dtype=float)
    if np.any(np.isnan(x)):
        raise InvalidInputError("normalized moment is NaN")
    if np.any(x < -slack) or np.any(x > X_MAX + slack):
        raise UnphysicalInputError(
            f"normalized moment outside [0, 4/3] beyond slack {slack:g}")
    return np.clip(x, 0.0, X_MAX)


def correlation_function(x, slack: float = 1e-6):
    """Spin-spin correlation coefficient c = x - 1."""
    return _scalar_or_array(check_moment(x, slack) - 1.0)

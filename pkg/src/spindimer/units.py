"""Physical constants and molar-susceptibility unit conversions.

Everything inside the package is computed in SI (m^3/mol of dimers, kelvin).
Conversions to CGS (emu/mol) or to the per-formula-unit Bohr-magneton scale
(mu_B/FU/Oe) happen only when reading or writing data.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import InvalidInputError


@dataclass(frozen=True)
class PhysicalConstants:
    """CODATA exact / recommended values in SI."""

    k_B: float = 1.380649e-23          # J/K
    mu_B: float = 9.2740100783e-24     # J/T
    N_A: float = 6.02214076e23         # 1/mol


CONSTANTS = PhysicalConstants()

# Conventional vacuum permeability. Using 4*pi*1e-7 keeps the
# emu/mol -> m^3/mol factor at exactly 4*pi*1e-6.
MU_0 = 4.0e-7 * math.pi

# Bohr magneton in erg/G (emu).
MU_B_EMU = CONSTANTS.mu_B * 1e3


class UnitSystem(enum.Enum):
    """Molar susceptibility unit systems, per mole (or unit) of dimers."""

    SI = "si"                 # m^3/mol
    CGS = "cgs"               # emu/mol
    MUB_FU_OE = "mub-fu-oe"   # mu_B per formula unit per Oe

    @classmethod
    def parse(cls, tag: "UnitSystem | str") -> "UnitSystem":
        if isinstance(tag, cls):
            return tag
        try:
            return cls(str(tag).lower())
        except ValueError:
            valid = ", ".join(u.value for u in cls)
            raise InvalidInputError(
                f"unknown unit tag {tag!r}; expected one of {valid}") from None


# Size of one unit of each system expressed in emu/mol.
_IN_EMU_PER_MOL = {
    UnitSystem.CGS: 1.0,
    UnitSystem.SI: 1.0 / (4.0e-6 * math.pi),
    UnitSystem.MUB_FU_OE: CONSTANTS.N_A * MU_B_EMU,
}


def conversion_factor(src: UnitSystem | str, dst: UnitSystem | str) -> float:
    """Multiplicative factor taking a susceptibility from `src` to `dst`."""
    src = UnitSystem.parse(src)
    dst = UnitSystem.parse(dst)
    if src is dst:
        return 1.0
    return _IN_EMU_PER_MOL[src] / _IN_EMU_PER_MOL[dst]


def convert_susceptibility(value, src: UnitSystem | str, dst: UnitSystem | str):
    """Convert a molar susceptibility (scalar or array) between unit systems.

    Negative values pass through unchanged in sign so that
    diamagnetically corrected data survive the conversion.

    Examples
    --------
    >>> f"{convert_susceptibility(1.0, 'cgs', 'si'):.4e}"
    '1.2566e-05'
    """
    factor = conversion_factor(src, dst)
    if factor == 1.0:
        return value
    return value * factor


def curie_constant(g: float, n_spins: int = 2,
                   units: UnitSystem | str = UnitSystem.SI) -> float:
    """High-temperature limit of chi*T for `n_spins` free spins 1/2.

    Returns ``n_spins * N_A g^2 mu_B^2 S(S+1) / (3 k_B)`` with S = 1/2,
    per mole of formula units, in `units` times kelvin.
    """
    if n_spins not in (1, 2):
        raise InvalidInputError(f"n_spins must be 1 or 2, got {n_spins!r}")
    if not g >= 0:
        raise InvalidInputError(f"g must be non-negative, got {g!r}")
    c = CONSTANTS
    spin_factor = 0.5 * 1.5
    c_si = n_spins * MU_0 * c.N_A * (g * c.mu_B) ** 2 * spin_factor / (3.0 * c.k_B)
    return convert_susceptibility(c_si, UnitSystem.SI, units)

"""Seeded cross-check of every closed form against the two-qubit oracle."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import measures, oracle
from .dimer import DimerParams, model_moment, susceptibility

# name -> (tolerance, relative?)
TOLERANCES = {
    "susceptibility": (1e-10, True),
    "concurrence": (1e-10, False),
    "mutual_information": (1e-10, False),
    "entropic_discord": (2e-6, False),
    "classical_correlation": (2e-6, False),
    "geometric_discord": (1e-12, False),
    "discord_identity": (1e-12, False),
}

DEFAULT_SAMPLES = 200
J_RANGE = (-2000.0, -50.0)
G_RANGE = (1.9, 2.3)
T_RANGE = (1.0, 1e4)

_TINY = np.finfo(float).tiny


@dataclass
class VerificationSummary:
    seed: int
    n_samples: int
    max_deviation: dict[str, float]
    worst_sample: dict[str, tuple[float, float, float]]
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def sample_parameters(seed: int, n: int = DEFAULT_SAMPLES):
    """(J, g, T) triples; T is drawn log-uniformly so every regime is hit."""
    rng = np.random.default_rng(seed)
    J = rng.uniform(*J_RANGE, size=n)
    g = rng.uniform(*G_RANGE, size=n)
    T = np.exp(rng.uniform(np.log(T_RANGE[0]), np.log(T_RANGE[1]), size=n))
    return list(zip(J.tolist(), g.tolist(), T.tolist()))


def _closed_forms():
    return {
        "concurrence": measures.concurrence,
        "entropic_discord": measures.entropic_discord,
        "classical_correlation": lambda x: measures.classical_correlation(x - 1.0),
        "mutual_information": lambda x: measures.mutual_information(x - 1.0),
        "geometric_discord": lambda x: measures.geometric_discord(x - 1.0),
    }


def compare_sample(J: float, g: float, T: float, closed_forms=None) -> dict[str, float]:
    """Deviation of each closed form from the oracle at one (J, g, T)."""
    forms = _closed_forms()
    forms.update(closed_forms or {})
    params = DimerParams(J, g)
    x = model_moment(params, T)
    rho = oracle.gibbs_state(params, T)
    opt = oracle.optimize_measurement(rho)
    c_axes = [float(np.real(np.trace(rho @ np.kron(s, s)))) for s in oracle.PAULIS]

    chi_closed = susceptibility(params, T)
    chi_oracle = oracle.fluctuation_susceptibility(params, T)
    denom = max(abs(chi_closed), abs(chi_oracle))
    # relative error is meaningful only above the smallest normal double
    chi_dev = abs(chi_closed - chi_oracle) / denom if denom > _TINY else 0.0

    q_e = float(forms["entropic_discord"](x))
    return {
        "susceptibility": chi_dev,
        "concurrence": abs(float(forms["concurrence"](x)) - oracle.wootters_concurrence(rho)),
        "mutual_information": abs(float(forms["mutual_information"](x)) - opt.mutual_information),
        "entropic_discord": abs(q_e - opt.discord),
        "classical_correlation": abs(float(forms["classical_correlation"](x))
                                     - opt.classical_correlation),
        "geometric_discord": abs(float(forms["geometric_discord"](x))
                                 - oracle.bell_diagonal_geometric_discord_reference(*c_axes)),
        "discord_identity": abs(q_e - (float(forms["mutual_information"](x))
                                       - float(forms["classical_correlation"](x)))),
    }


def run_verification(seed: int = 0, n_samples: int = DEFAULT_SAMPLES,
                     closed_forms=None) -> VerificationSummary:
    """Compare closed forms with the oracle on seeded random samples.

    `closed_forms` may replace any closed-form function (keyed as in
    `TOLERANCES`) and exists so failure handling can be exercised.
    """
    worst = {k: 0.0 for k in TOLERANCES}
    where = {k: (np.nan, np.nan, np.nan) for k in TOLERANCES}
    for J, g, T in sample_parameters(seed, n_samples):
        for name, dev in compare_sample(J, g, T, closed_forms).items():
            if not dev <= worst[name]:
                worst[name], where[name] = dev, (J, g, T)
    failures = []
    for name, (tol, _) in TOLERANCES.items():
        if not worst[name] <= tol:
            J, g, T = where[name]
            failures.append(f"{name}: deviation {worst[name]:.3g} > {tol:g} "
                            f"at J={J!r}, g={g!r}, T={T!r}")
    return VerificationSummary(seed, n_samples, worst, where, failures)

"""
Characteristic temperatures
===========================

Every profile of the antiferromagnetic dimer depends on T only through
J/T, so the interesting temperatures are all proportional to |J| and do not
depend on g. This script solves them for J = -748.5 K and then shows the
scaling by doubling the coupling.
"""

import json

from spindimer import REFERENCE_PARAMS, DimerParams
from spindimer.thresholds import purity_temperature, threshold_report

report = threshold_report(REFERENCE_PARAMS)
print(json.dumps(report.to_json_dict(), indent=2))

# Two readings of "the dimer is still in its ground state": eof within
# 1e-3 of one, or entropic discord within 2e-3 of one. Both land near 83 K.
for measure, delta in (("eof", 1e-3), ("entropic_discord", 2e-3)):
    print(f"T_pure({measure}, delta={delta:g}) = "
          f"{purity_temperature(REFERENCE_PARAMS, delta, measure):.2f} K")

doubled = threshold_report(DimerParams(2 * REFERENCE_PARAMS.J, 1.9), stability_limit=None)
print(f"\nT_e(J) = {report.T_entanglement:.3f} K, "
      f"T_e(2J, other g) = {doubled.T_entanglement:.3f} K")
for a, b in zip(report.epsilon_thresholds, doubled.epsilon_thresholds):
    print(f"{a['measure']:>18}: {a['T']:9.3f} K -> {b['T']:9.3f} K "
          f"(ratio {b['T'] / a['T']:.12f})")

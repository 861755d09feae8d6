"""Thermal quantum correlations of spin-1/2 Heisenberg dimer magnets.

The thermal state of an isolated dimer is fixed by its susceptibility, so
concurrence, entanglement of formation and entropic and geometric discord
can all be read off chi(T). This package provides the dimer model, the
closed-form measures, a brute-force two-qubit oracle that checks them,
(J, g) fitting of susceptibility data and solvers for characteristic
temperatures.
"""
from .dimer import (REFERENCE_PARAMS, BellDiagonalState, DimerParams, DimerSpectrum,
                    correlation_function, model_moment, normalized_moment,
                    spectrum, susceptibility, thermal_state)
from .errors import (AmbiguousBracketError, CurveParseError, InvalidInputError,
                     UnphysicalInputError)
from .fitting import (FitResult, SusceptibilityCurve, fit, goodness, load_curve,
                      synthesize_curve)
from .measures import (CorrelationPoint, classical_correlation, concurrence,
                       entanglement_of_formation, entropic_discord,
                       geometric_discord, mutual_information)
from .thresholds import (ThresholdReport, crossing_temperature,
                         entanglement_temperature, epsilon_threshold,
                         purity_temperature, threshold_report)
from .units import CONSTANTS, UnitSystem, convert_susceptibility, curie_constant

__version__ = "0.1.0"

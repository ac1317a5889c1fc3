"""Multilevel atoms as polarization-dependent scatterers.

Jones-vector transfer tensors, ground-state optical pumping in the
low-saturation limit, and the resulting radiation forces.
"""
from .atom import (GroundDensityMatrix, LevelScheme, PolarizabilityTensor, chi_element,
                   chi_operator, clebsch_gordan, polarizability)
from .bloch import (LinPerpLin, LocalField, PumpingParameters, SigmaPlusMinus,
                    nonadiabatic_populations, steady_state)
from .errors import (ConvergenceError, DarkStateMultiplicityError, InvalidInputError,
                     ScenarioValidationError, SingularSystemError, UnsupportedConfigurationError)
from .forces import ForceResult, force_expansion, force_from_modes, sigma_force, sisyphus_force
from .jones import JonesVector, ModeQuartet, TransferTensor, compose, scatter, transfer_tensor
from .optics import Element, element_tensor, solve_system
from .scan import run_scan
from .scenario import Scenario, parse_scenario

__version__ = "0.1.0"

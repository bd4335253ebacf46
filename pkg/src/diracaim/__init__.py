"""Bound states of the radial Dirac equation by the asymptotic iteration method."""
from .coulomb import CoulombState, coulomb_energy, coulomb_radial, coulomb_state
from .engine import (AimLevel, CoefficientSystem, EigenResult, aim_step, delta,
                     delta_profile, normalized_delta, scan_brackets, solve_eigenvalue)
from .errors import (CenterMismatchError, DegreeExhaustedError, GeneratorSingular,
                     NoDiscreteSpectrum, NoSignChange, NotConverged, SingularExpansionError,
                     UnphysicalCoupling)
from .models import (ConfinedProblem, CoulombProblem, LinearConfined, PureCoulomb,
                     QuantumChannel, ScreenedCoulomb, ScreenedProblem, channel_from_k,
                     make_channel, make_problem, parse_label)
from .series import TruncatedSeries
from .shooting import ShootingConfig, match_eigenvalue, radial_solution
from .wavefunction import GeneratedWavefunction, generate_wavefunction, reconstruct

__version__ = "0.1.0"

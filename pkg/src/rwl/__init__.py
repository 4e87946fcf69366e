"""Numerical laboratory for the radial supercritical wave equation."""

from .model import DEFOCUSING, FOCUSING, Params, make_params, rescale_exponents
from .grid import (RadialGrid, RadialState, SampledFunction, differentiate,
                   integrate_power, state_from_arrays)
from .dalembert import (FreeWaveProfile, build_free_profile, eval_linear,
                        exterior_surrogate, profile_mass)
from .energetics import (EnergyBreakdown, exterior_generalized_energy,
                         generalized_energy, hardy_weighted_norm,
                         nonlinear_energy, sobolev_norm_radial, utov_sides)
from .operators import cutoff_chi, exterior_data, truncate_T
from .nonlinear import (SolverConfig, Trajectory, check_finite_speed,
                        detect_blowup, evolve, nonlinearity)
from .stationary import (HSolution, StationarySolution, integrate_h,
                         scaling_check, series_init, solve_stationary,
                         z_from_h)

__version__ = "0.1.0"

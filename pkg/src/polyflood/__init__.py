"""Finite-volume schemes and an exact Riemann solver for 1D polymer flooding.

The system is ``s_t + f(s, c)_x = 0``, ``(s c + a(c))_t + (c f(s, c))_x = 0``
for water saturation ``s`` and polymer concentration ``c``.
"""

from .analysis import (ErrorReport, ErrorRow, convergence_rates, l1_error, mass_totals,
                       render_table, report_csv, restrict, total_variation)
from .fluxes import (InterfaceFlux, SchemeKind, dflu_flux, force_flux, godunov_flux,
                     lax_friedrichs_flux, numerical_flux, upstream_mobility_flux)
from .model import (Adsorption, DomainError, FluxModel, GenericFluxModel, ModelError,
                    QuadraticTestModel, TwoPhaseGravityModel, argmax_theta, cfl_bound,
                    eigenvalues, eval_f, make_model, secant_adsorption, validate_model)
from .presets import PRESETS, ConfigError, ExperimentPreset, get_preset, parse_config
from .riemann import (RiemannFan, State, Wave, coincidence_s_star, godunov_interface_flux,
                      sample, scalar_godunov, secant_intersections, solve_riemann)
from .solver import (ClosedZeroFlux, Dirichlet, Grid1D, NumericalBlowup, PiecewiseConstant,
                     RunConfig, SolverError, SolverState, StepInfo, run, step)

__version__ = "0.1.0"

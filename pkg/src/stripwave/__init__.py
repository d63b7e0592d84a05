"""Travelling-wave continuation for a reaction-diffusion strip coupled
to a line of fast diffusion.

The solver computes the propagation speed c and the wave profiles
(psi on the strip, phi on the line) along a three-stage homotopy: the
1-D Neumann front, the Wentzell boundary-value family (s from 0 to 1),
and the two-field exchange system (eps from a small eps0 to 1).  Every
qualitative property the continuous problem guarantees is re-checked
numerically on each converged state.
"""

from .analysis import (SymbolQuery, approximation_identity_mass, bessel_k0, k0_line_mass,
                       scan_symbol_zero_free, wentzell_symbol_denominator)
from .continuation import (ContinuationOptions, ContinuationPath, ContinuationRecord,
                           StepControl, continue_exchange, continue_wentzell,
                           embed_one_dim_wave, handoff_to_system)
from .diagnostics import (DiagnosticsReport, DispersionQuery, check_bounds,
                          check_monotonicity, check_sandwich, dispersion_root,
                          fit_right_decay, left_decay_bound, run_diagnostics,
                          speed_identity, supersolution_rate, translation_collapse)
from .grid import DofLayout, Grid, build_grid, dof_layout
from .model import (ModelParams, NonlinearityKind, NonlinearitySpec, c_max,
                    eval_nonlinearity, lipschitz_constant)
from .residual import (HomotopyFamily, WaveState, assemble_jacobian, assemble_residual,
                       state_to_vector, vector_to_state)
from .solver import (NewtonOptions, NewtonResult, OneDimWave, linear_solve, newton_solve,
                     solve_1d_ignition_shooting)

__all__ = [
    "ModelParams", "NonlinearityKind", "NonlinearitySpec", "eval_nonlinearity",
    "lipschitz_constant", "c_max",
    "Grid", "DofLayout", "build_grid", "dof_layout",
    "HomotopyFamily", "WaveState", "assemble_residual", "assemble_jacobian",
    "state_to_vector", "vector_to_state",
    "NewtonOptions", "NewtonResult", "OneDimWave", "newton_solve", "linear_solve",
    "solve_1d_ignition_shooting",
    "ContinuationOptions", "ContinuationPath", "ContinuationRecord", "StepControl",
    "continue_wentzell", "continue_exchange", "handoff_to_system", "embed_one_dim_wave",
    "DiagnosticsReport", "DispersionQuery", "run_diagnostics", "check_bounds",
    "check_monotonicity", "check_sandwich", "speed_identity", "left_decay_bound",
    "dispersion_root", "supersolution_rate", "fit_right_decay", "translation_collapse",
    "SymbolQuery", "wentzell_symbol_denominator", "scan_symbol_zero_free", "bessel_k0",
    "k0_line_mass", "approximation_identity_mass",
]

__version__ = "0.1.0"

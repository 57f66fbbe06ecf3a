"""Deterministic Grover search with one phase angle fixed.

The package builds zero-failure search schedules by composing generalized
phase-oracle and phase-diffusion iterations into a fixed-axis Bloch
rotation, solving for the free phase pair at any iteration count above a
closed-form threshold, and certifying every schedule by exact simulation.
"""

from .classic import (
    ClassicSchedule,
    big_small_step_params,
    conjugate_rotation_params,
    k_optimal,
    three_d_rotation_params,
)
from .errors import (
    DegenerateAngleError,
    InfeasibleScheduleError,
    IterationCountTooSmallError,
    ResourceLimitError,
    SolverFailureError,
)
from .hamming import HammingInstance, HammingResult, identify_secret, oracle_phase, qft_qudit, run_search
from .operators import (
    SearchSpec,
    diffusion_matrix,
    diffusion_rotation,
    fxr_alpha_rotation,
    fxr_beta_rotation,
    g_matrix,
    g_rotation,
    oracle_matrix,
    oracle_rotation,
)
from .rotation import Rotation, compose, decompose_unitary, power, rotation_from_axis_angle, to_unitary
from .simulate import State2, StateVector, Step, fxr_schedule, run_2d, run_full, success_probability
from .solver import CurveF, ParamSolution, k_lower, phi_zero, residuals, solve_free_pair, trace_curve

__all__ = [
    "ClassicSchedule",
    "CurveF",
    "DegenerateAngleError",
    "HammingInstance",
    "HammingResult",
    "InfeasibleScheduleError",
    "IterationCountTooSmallError",
    "ParamSolution",
    "ResourceLimitError",
    "Rotation",
    "SearchSpec",
    "SolverFailureError",
    "State2",
    "StateVector",
    "Step",
    "big_small_step_params",
    "compose",
    "conjugate_rotation_params",
    "decompose_unitary",
    "diffusion_matrix",
    "diffusion_rotation",
    "fxr_alpha_rotation",
    "fxr_beta_rotation",
    "fxr_schedule",
    "g_matrix",
    "g_rotation",
    "identify_secret",
    "k_lower",
    "k_optimal",
    "oracle_matrix",
    "oracle_phase",
    "oracle_rotation",
    "phi_zero",
    "power",
    "qft_qudit",
    "residuals",
    "rotation_from_axis_angle",
    "run_2d",
    "run_full",
    "run_search",
    "solve_free_pair",
    "success_probability",
    "three_d_rotation_params",
    "to_unitary",
    "trace_curve",
]

__version__ = "0.1.0"

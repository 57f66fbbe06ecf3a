import math

import numpy as np
import pytest

from fxrsearch.errors import DegenerateAngleError, IterationCountTooSmallError
from fxrsearch.operators import SearchSpec, diffusion_matrix, oracle_matrix
from fxrsearch.solver import (
    CurveF,
    ParamSolution,
    k_lower,
    phi_zero,
    residuals,
    solve_free_pair,
    trace_curve,
)


def pair_matrix(mode, fixed, pair, spec):
    """Independent oracle: assemble the double iteration from 2x2 factors."""
    if mode == "alpha":
        b1, b2 = pair
        return (diffusion_matrix(b2, spec) @ oracle_matrix(fixed)
                @ diffusion_matrix(b1, spec) @ oracle_matrix(fixed))
    a1, a2 = pair
    return (diffusion_matrix(fixed, spec) @ oracle_matrix(a2)
            @ diffusion_matrix(fixed, spec) @ oracle_matrix(a1))


def leftover_amp(mode, fixed, pair, k, spec):
    psi0 = np.array([spec.amp_unmarked, spec.amp_marked], dtype=complex)
    final = np.linalg.matrix_power(pair_matrix(mode, fixed, pair, spec), k) @ psi0
    return abs(final[0])


def test_k_lower_quarter_fraction_pi():
    # 4*arcsin(1/2) = 2*pi/3 folds to -pi/3, so the threshold is exactly 3
    assert k_lower(math.pi, SearchSpec(0.25)) == pytest.approx(3.0, abs=1e-12)


def test_k_lower_small_fraction_asymptotics():
    lam = 1e-6
    assert k_lower(math.pi, SearchSpec(lam)) * math.sqrt(lam) == pytest.approx(
        math.pi / 4, rel=0.01
    )


def test_k_lower_degenerate_at_half():
    with pytest.raises(DegenerateAngleError):
        k_lower(math.pi, SearchSpec(0.5))


def test_k_lower_rejects_out_of_range_angle():
    with pytest.raises(ValueError):
        k_lower(0.0, SearchSpec(0.2))
    with pytest.raises(ValueError):
        k_lower(2 * math.pi, SearchSpec(0.2))


def test_curve_half_fraction_right_angle_is_constant_half_turn():
    # at lam = 1/2, fixed = pi/2 the half-tangent relation degenerates to
    # t2 = -(t1 + 1)/0, i.e. the curve is the constant y = pi + 2*l*pi;
    # cross-checked against the matrix-decomposition axis constraint
    lam = 0.5
    spec = SearchSpec(lam)
    curve = trace_curve(0.5 * math.pi, spec, "alpha")
    assert np.max(np.abs(np.cos(0.5 * curve.ys))) < 1e-9
    from fxrsearch.rotation import decompose_unitary

    for x in (-2.0, 0.3, 1.1):
        y = float(curve.value(x))
        f = pair_matrix("alpha", 0.5 * math.pi, (x, y), spec)
        _, rot = decompose_unitary(f)
        assert abs(math.sqrt(1 - lam) * rot.v[2] + math.sqrt(lam) * rot.v[0]) < 1e-12


def test_curve_flip_oracle_is_linear_in_half_tangent():
    # at fixed = pi: tan(y/2) = -(1-4*lam)*tan(x/2)
    lam = 0.2
    curve = trace_curve(math.pi, SearchSpec(lam), "alpha")
    inner = np.abs(curve.xs) < 3.0
    lhs = np.tan(0.5 * curve.ys[inner])
    rhs = -(1 - 4 * lam) * np.tan(0.5 * curve.xs[inner])
    assert np.max(np.abs(lhs - rhs)) < 1e-9


def test_curve_flip_oracle_quarter_fraction_constant():
    curve = trace_curve(math.pi, SearchSpec(0.25), "alpha")
    assert np.max(np.abs(np.sin(0.5 * curve.ys))) < 1e-12  # constant 2*l*pi branch


def test_curve_samples_satisfy_axis_constraint():
    for mode in ("alpha", "beta"):
        curve = trace_curve(0.6 * math.pi, SearchSpec(0.2), mode)
        assert np.max(curve.axis_residuals()) < 1e-10


def test_curve_identity_point_and_angle_bound():
    spec = SearchSpec(0.2)
    fixed = 0.6 * math.pi
    curve = trace_curve(fixed, spec, "alpha")
    assert float(curve.g(curve.x_identity)) < 1e-10
    g_vals = curve.g(curve.xs)
    assert g_vals.max() >= phi_zero(fixed, spec) - 1e-12


def test_solve_strictness_of_iteration_count():
    spec = SearchSpec(0.25)
    with pytest.raises(IterationCountTooSmallError) as err:
        solve_free_pair(math.pi, spec, "alpha", 2)
    assert err.value.k_lower == pytest.approx(3.0, abs=1e-9)


def test_solve_quarter_fraction_flip_oracle():
    spec = SearchSpec(0.25)
    sol = solve_free_pair(math.pi, spec, "alpha", 4)
    assert sol.residual_real < 1e-9 and sol.residual_imag < 1e-9
    assert sol.certified_success_prob > 1 - 1e-8
    # independent matrix-power oracle
    assert leftover_amp("alpha", math.pi, sol.free_pair, 4, spec) < 1e-8


def test_solve_reference_instance_alpha():
    spec = SearchSpec(0.2)
    fixed = 0.6 * math.pi
    k = math.ceil(k_lower(fixed, spec)) + 1
    sol = solve_free_pair(fixed, spec, "alpha", k)
    assert sol.certified_success_prob > 1 - 1e-8
    assert leftover_amp("alpha", fixed, sol.free_pair, k, spec) < 1e-8


def test_solve_reference_instance_beta():
    spec = SearchSpec(0.2)
    fixed = 0.6 * math.pi
    k = math.ceil(k_lower(fixed, spec)) + 1
    sol = solve_free_pair(fixed, spec, "beta", k)
    assert sol.certified_success_prob > 1 - 1e-8
    assert leftover_amp("beta", fixed, sol.free_pair, k, spec) < 1e-8


def test_solve_reports_pair_in_documented_range():
    spec = SearchSpec(0.2)
    sol = solve_free_pair(0.6 * math.pi, spec, "alpha", 3)
    for angle in sol.free_pair:
        assert -2 * math.pi < angle <= 4 * math.pi


def test_solve_accepts_pretraced_curve():
    spec = SearchSpec(0.2)
    fixed = 0.6 * math.pi
    curve = trace_curve(fixed, spec, "alpha")
    a = solve_free_pair(fixed, spec, "alpha", 3, curve=curve)
    b = solve_free_pair(fixed, spec, "alpha", 3)
    assert a.free_pair == b.free_pair


def test_solve_rejects_mismatched_curve():
    spec = SearchSpec(0.2)
    curve = trace_curve(0.6 * math.pi, spec, "alpha")
    with pytest.raises(ValueError):
        solve_free_pair(0.7 * math.pi, spec, "alpha", 5, curve=curve)


def test_residuals_of_certified_solution():
    spec = SearchSpec(0.2)
    sol = solve_free_pair(0.6 * math.pi, spec, "alpha", 3)
    real, imag = residuals(sol, spec)
    assert real < 1e-9 and imag < 1e-9


def test_residuals_detect_perturbation():
    spec = SearchSpec(0.2)
    sol = solve_free_pair(0.6 * math.pi, spec, "alpha", 3)
    b1, b2 = sol.free_pair
    perturbed = ParamSolution(
        mode="alpha", fixed_angle=sol.fixed_angle, free_pair=(b1 + 0.1, b2), k=sol.k,
        rotation_angle_phi=sol.rotation_angle_phi, residual_real=0.0, residual_imag=0.0,
        certified_success_prob=0.0,
    )
    _, imag = residuals(perturbed, spec)
    assert imag > 1e-3


def test_residuals_trivial_diffusion_pair():
    # with both free diffusions switched off the axis constraint reduces to
    # |sin(fixed)| exactly
    fixed = 0.6 * math.pi
    spec = SearchSpec(0.2)
    trivial = ParamSolution(
        mode="alpha", fixed_angle=fixed, free_pair=(0.0, 0.0), k=1,
        rotation_angle_phi=0.0, residual_real=0.0, residual_imag=0.0,
        certified_success_prob=0.0,
    )
    _, imag = residuals(trivial, spec)
    assert imag == pytest.approx(abs(math.sin(fixed)), abs=1e-14)


def test_solver_mode_validation():
    with pytest.raises(ValueError):
        solve_free_pair(0.6 * math.pi, SearchSpec(0.2), "gamma", 5)


def test_existence_spot_checks_both_modes():
    rng = np.random.default_rng(20)
    for _ in range(6):
        lam = float(rng.uniform(0.02, 0.7))
        fixed = float(rng.uniform(0.1, 1.9)) * math.pi
        spec = SearchSpec(lam)
        try:
            threshold = k_lower(fixed, spec)
        except DegenerateAngleError:
            continue
        k = math.ceil(threshold) + int(rng.integers(1, 4))
        for mode in ("alpha", "beta"):
            sol = solve_free_pair(fixed, spec, mode, k)
            assert leftover_amp(mode, fixed, sol.free_pair, k, spec) < 1e-8

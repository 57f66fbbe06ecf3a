"""Three earlier exact-search schemes, as cross-validation baselines.

Each scheme turns the optimal fractional iteration count
k_opt = pi/(2*theta) - 1/2 into an integer and tunes phases so the final
marked-state probability is exactly 1:

* big-small step: k = floor(k_opt) standard iterations, then one corrective
  generalized iteration;
* conjugate rotation: one oracle prefix, then k = ceil(k_opt) identical
  generalized iterations about a common axis;
* 3D rotation: k = ceil(k_opt) iterations with opposite phase signs and a
  per-step angle shrunk to land exactly.

Every returned schedule is certified by the 2D simulator before it leaves
this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import simulate
from .errors import InfeasibleScheduleError, SolverFailureError
from .operators import SearchSpec, g_matrix, oracle_matrix
from .simulate import Step, diffusion_step, oracle_step, run_2d

__all__ = [
    "ClassicSchedule",
    "k_optimal",
    "three_d_rotation_params",
    "conjugate_rotation_params",
    "big_small_step_params",
]

_CERT_TOL = 1e-8
_EPS = 1e-9  # guards ceil/floor against representation error in k_opt


@dataclass(frozen=True)
class ClassicSchedule:
    method: str
    phase_sequence: tuple[Step, ...]
    k_opt: float
    k_used: int
    params: dict = field(default_factory=dict)
    success_probability: float = 0.0

    @property
    def oracle_calls(self) -> int:
        return sum(1 for s in self.phase_sequence if s.kind == "oracle")


def k_optimal(spec: SearchSpec) -> float:
    """Fractional optimum pi/(2*theta) - 1/2."""
    return math.pi / (2.0 * spec.theta) - 0.5


def _certified(method: str, steps: list[Step], k_opt: float, k: int,
               params: dict, spec: SearchSpec) -> ClassicSchedule:
    prob = run_2d(steps, spec).success_probability
    if prob <= 1.0 - _CERT_TOL:
        raise SolverFailureError(
            f"{method} schedule failed certification: success={prob!r} (lam={spec.lam})"
        )
    return ClassicSchedule(method, tuple(steps), k_opt, k, params, prob)


def three_d_rotation_params(spec: SearchSpec) -> ClassicSchedule:
    """k iterations G(a3, -a3) with sin(pi/(4k+2)) = sin(a3/2)*sin(theta/2)."""
    k_opt = k_optimal(spec)
    k = max(1, math.ceil(k_opt - _EPS))
    ratio = math.sin(math.pi / (4 * k + 2)) / spec.amp_marked
    # ratio <= 1 holds analytically for k >= k_opt; asin amplifies the last
    # few ulps below 1 into ~1e-8, so snap the exactly-critical case to pi
    a3 = math.pi if ratio >= 1.0 - 1e-15 else 2.0 * math.asin(ratio)
    steps = [oracle_step(a3), diffusion_step(-a3)] * k
    return _certified("three-d-rotation", steps, k_opt, k, {"alpha3": a3}, spec)


def conjugate_rotation_params(spec: SearchSpec) -> ClassicSchedule:
    """Oracle prefix S_o(u) with u = (pi - b2)/2, then k = ceil(k_opt)
    identical iterations G(a2, -b2).

    The pair (a2, b2) is pinned by exactness of the whole schedule and
    solved with a damped 2D Newton iteration.  The closed-form seed
    sin(a2/2)*sin(theta) = sin((pi-theta)/(2k)) with
    tan(b2/2) = tan(a2/2)*cos(theta) is exact in the small-lam limit and
    keeps Newton in the intended root's basin; a coarse grid of fallback
    starts covers the rest.
    """
    k_opt = k_optimal(spec)
    k = max(1, math.ceil(k_opt - _EPS))
    theta = spec.theta
    psi0 = np.array([spec.amp_unmarked, spec.amp_marked], dtype=complex)

    def leftover(a2: float, b2: float) -> np.ndarray:
        u = 0.5 * (math.pi - b2)
        m = np.linalg.matrix_power(g_matrix(a2, -b2, spec), k) @ oracle_matrix(u)
        amp = (m @ psi0)[0]
        return np.array([amp.real, amp.imag])

    seeds: list[tuple[float, float]] = []
    ratio = math.sin((math.pi - theta) / (2 * k)) / math.sin(theta)
    if ratio <= 1.0 + 1e-9:
        a_seed = 2.0 * math.asin(min(ratio, 1.0))
        seeds.append((a_seed, 2.0 * math.atan(math.tan(0.5 * a_seed) * math.cos(theta))))
    seeds += [(a0, b0)
              for a0 in np.linspace(0.2, 2.0 * math.pi - 0.2, 9)
              for b0 in np.linspace(-math.pi + 0.2, math.pi - 0.2, 9)]

    root = _newton_2d(leftover, seeds, lambda a2, b2: 0.02 < a2 < 2.0 * math.pi - 0.02)
    if root is None:
        raise InfeasibleScheduleError(
            f"no exact conjugate-rotation phases found for lam={spec.lam}, k={k} "
            f"({len(seeds)} starts tried)"
        )
    a2 = root[0] % (2.0 * math.pi)
    # the iteration operator has period 2*pi in b2, but u = (pi - b2)/2 does
    # not: of the two folded representatives keep the one whose prefix closes
    b2_folded = (root[1] + math.pi) % (2.0 * math.pi) - math.pi
    last_error: SolverFailureError | None = None
    for b2 in (b2_folded, b2_folded + 2.0 * math.pi):
        u = 0.5 * (math.pi - b2)
        steps = [oracle_step(u)] + [oracle_step(a2), diffusion_step(-b2)] * k
        try:
            return _certified("conjugate-rotation", steps, k_opt, k,
                              {"alpha2": a2, "beta2": b2, "u": u}, spec)
        except SolverFailureError as err:
            last_error = err
    raise last_error


def big_small_step_params(spec: SearchSpec) -> ClassicSchedule:
    """k = floor(k_opt) standard iterations, then one corrective G(a1, -b1).

    (a1, b1) solve (-cos(theta) + i*cot(b1/2)) * cot((2k+1)*theta/2)
    = e^{i*a1} * sin(theta); its real part is the Bloch cone condition
    cos(a1) = -cot(theta)*cot((2k+1)*theta/2) for the corrective step.
    Solved by damped Newton from a multi-start grid; k = 0 is allowed (the
    corrective iteration alone remains, e.g. for lam >= 1/3).
    """
    k_opt = k_optimal(spec)
    k = max(0, math.floor(k_opt + _EPS))
    theta = spec.theta
    cot_big = 1.0 / math.tan((2 * k + 1) * 0.5 * theta)

    def residual_vec(a1: float, b1: float) -> np.ndarray:
        tan_half = math.tan(0.5 * b1)
        if tan_half == 0.0:
            return np.array([1e6, 1e6])
        lhs = (-math.cos(theta) + 1j / tan_half) * cot_big
        rhs = np.exp(1j * a1) * math.sin(theta)
        d = lhs - rhs
        return np.array([d.real, d.imag])

    seeds: list[tuple[float, float]] = []
    # closed-form branch solutions seed the grid
    cos_a = -cot_big / math.tan(theta)
    if abs(cos_a) <= 1.0:
        for sign in (1.0, -1.0):
            a1 = sign * math.acos(cos_a)
            b1 = 2.0 * math.atan2(cot_big, math.sin(a1) * math.sin(theta))
            seeds.append((a1 % (2.0 * math.pi), b1))
    grid = [i * math.pi / 4.0 for i in range(1, 8)]  # pi/4 .. 7*pi/4
    seeds += [(a0, b0) for a0 in grid for b0 in grid]

    # no domain restriction: the b1 -> 0 root is legitimate (trivial
    # corrective diffusion when the standard schedule is already exact)
    root = _newton_2d(residual_vec, seeds, lambda a1, b1: True)
    if root is None:
        raise SolverFailureError(
            f"corrective-step phases did not converge for lam={spec.lam}, k={k} "
            f"({len(seeds)} starts tried)"
        )
    a1, b1 = root
    a1 %= 2.0 * math.pi
    b1 = (b1 + math.pi) % (2.0 * math.pi) - math.pi
    steps = [oracle_step(math.pi), diffusion_step(math.pi)] * k
    steps += [oracle_step(a1), diffusion_step(-b1)]
    return _certified("big-small-step", steps, k_opt, k, {"alpha1": a1, "beta1": b1}, spec)


def _newton_2d(fun, seeds, in_domain, tol: float = 1e-13,
               max_iter: int = 80) -> tuple[float, float] | None:
    """Damped 2-variable Newton with finite-difference Jacobian.

    Returns the first converged root (|f| < tol) among the seeds, or None.
    """
    h = 1e-7
    for x0, y0 in seeds:
        x = np.array([x0, y0], dtype=float)
        ok = False
        for _ in range(max_iter):
            f = fun(*x)
            norm = np.linalg.norm(f)
            if norm < tol:
                ok = True
                break
            fx = fun(x[0] + h, x[1])
            fy = fun(x[0], x[1] + h)
            jac = np.column_stack([(fx - f) / h, (fy - f) / h])
            try:
                step = np.linalg.solve(jac, -f)
            except np.linalg.LinAlgError:
                break
            length = np.linalg.norm(step)
            if length > 1.0:
                step /= length
            # backtracking damping
            scale = 1.0
            while scale > 1e-3:
                cand = x + scale * step
                if in_domain(*cand) and np.linalg.norm(fun(*cand)) < norm:
                    break
                scale *= 0.5
            else:
                break
            x = x + scale * step
        if ok and in_domain(*x):
            return float(x[0]), float(x[1])
    return None

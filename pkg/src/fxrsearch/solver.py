"""Free phase pairs for deterministic search with one phase fixed.

With the oracle angle fixed, the double iteration G(a,b2)G(a,b1) must
satisfy two real conditions: its rotation axis has to lie on the
perpendicular-bisector plane of the initial and target Bloch vectors (the
"axis constraint", independent of the iteration count k), and the k-th
power has to carry the initial state all the way to the target (the
"closure condition").  The axis constraint is linear in the half-angle
sine/cosine of the second free angle, so it defines a curve b2 = f(b1)
whose raw arctangent branch wraps at isolated points; translating wrapped
segments by 2*pi restores a single continuous branch.

The constructive algorithm walks that curve:

1. locate the point where the double iteration degenerates to the identity
   (rotation half-angle g = 0); if the traced branch carries -identity
   instead, shift the second free angle by 2*pi, which flips the sign of
   cos(phi/2), and retrace;
2. the point x'' = -fixed (folded into [-pi, pi]) is guaranteed to have
   g(x'') >= phi_0 = arccos|cos(4*phi')| with sin(phi') =
   sqrt(lam)*sin(fixed/2);
3. bisect g - pi/k between those two points, then bisect the closure
   function F between the identity point and that root; F is positive at
   the first and negative at the second, so a sign change is guaranteed
   whenever k exceeds k_lower = pi/phi_0.

The diffusion-fixed case is identical with the roles of the angles
swapped; there the curve gives a1 = f(a2) and the variable is a2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Literal

import numpy as np

from . import simulate
from .errors import DegenerateAngleError, IterationCountTooSmallError, SolverFailureError
from .operators import SearchSpec, fxr_alpha_params, fxr_beta_params

__all__ = [
    "Mode",
    "CurveF",
    "ParamSolution",
    "k_lower",
    "phi_prime",
    "phi_zero",
    "trace_curve",
    "solve_free_pair",
    "residuals",
    "DEFAULT_GRID_POINTS",
]

Mode = Literal["alpha", "beta"]

TAU = 2.0 * math.pi
DEFAULT_GRID_POINTS = 4096
_REFINE_FACTOR = 16
_REFINE_ROUNDS = 4
_JUMP_TOL = 0.5 * math.pi          # adjacent-sample gap that counts as a branch jump
_BISECT_XTOL = 1e-13
_BISECT_MAXIT = 200
_IDENTITY_TOL = 1e-12              # accept identity point when 1 - cos(phi/2) < this
_RESIDUAL_TOL = 1e-9
_SUCCESS_TOL = 1e-8


def _check_mode(mode: str) -> None:
    if mode not in ("alpha", "beta"):
        raise ValueError(f"mode must be 'alpha' or 'beta', got {mode!r}")


def _mod_half_pi(x: float) -> float:
    """Representative of x + l*pi inside [-pi/2, pi/2]."""
    return x - math.pi * round(x / math.pi)


def phi_prime(fixed_angle: float, spec: SearchSpec) -> float:
    """Auxiliary angle with sin(phi') = sqrt(lam) * sin(fixed/2)."""
    return float(np.arcsin(spec.amp_marked * math.sin(0.5 * fixed_angle)))


def phi_zero(fixed_angle: float, spec: SearchSpec) -> float:
    """Reachable rotation bound arccos|cos(4*phi')|, in [0, pi/2]."""
    return float(np.arccos(abs(math.cos(4.0 * phi_prime(fixed_angle, spec)))))


def k_lower(fixed_angle: float, spec: SearchSpec) -> float:
    """Iteration threshold pi / |4*arcsin(sqrt(lam)*sin(fixed/2)) mod [-pi/2, pi/2]|.

    Raises DegenerateAngleError when the folded increment vanishes: no
    finite k works on this branch.
    """
    if not 0.0 < fixed_angle < TAU:
        raise ValueError(f"fixed angle must lie in (0, 2*pi), got {fixed_angle!r}")
    x = 4.0 * phi_prime(fixed_angle, spec)
    rep = _mod_half_pi(x)
    if abs(rep) < 1e-14:
        raise DegenerateAngleError(
            f"4*arcsin(sqrt(lam)*sin(a/2)) = {x!r} is a multiple of pi; "
            "the rotation increment degenerates and no finite iteration count works"
        )
    return math.pi / abs(rep)


def _constraint_coeffs(x, fixed_angle: float, lam: float, mode: Mode):
    """Coefficients (A, B) of the axis constraint sin(y/2)*A + cos(y/2)*B = 0."""
    half = 0.5 * np.asarray(x, dtype=float)
    s, c = np.sin(half), np.cos(half)
    ct = 1.0 - 2.0 * lam
    sin_f, cos_f = math.sin(fixed_angle), math.cos(fixed_angle)
    if mode == "alpha":
        a = c * cos_f - s * sin_f * ct
        b = s * (ct * cos_f + 2.0 * lam) + c * sin_f
    else:
        a = -s * ct * sin_f + c * cos_f
        b = s * (2.0 * lam + ct * cos_f) + c * sin_f
    return a, b


def _raw_free_angle(x, fixed_angle: float, lam: float, mode: Mode):
    """Principal-branch solution of the axis constraint.

    The returned value 2*arctan(-B/A) lies in (-pi, pi] and wraps where A
    crosses zero.
    """
    a, b = _constraint_coeffs(x, fixed_angle, lam, mode)
    m = np.arctan2(-b, a)
    # fold the quadrant-aware angle onto the principal arctan branch
    m = np.where(m > 0.5 * math.pi, m - math.pi, m)
    m = np.where(m <= -0.5 * math.pi, m + math.pi, m)
    return 2.0 * m


def _axis_residual(x, y, fixed_angle: float, lam: float, mode: Mode):
    """Literal axis-constraint expression; zero on the curve."""
    hx, hy = 0.5 * np.asarray(x), 0.5 * np.asarray(y)
    ct = 1.0 - 2.0 * lam
    sin_f, cos_f = math.sin(fixed_angle), math.cos(fixed_angle)
    if mode == "alpha":
        s1, c1 = np.sin(hx), np.cos(hx)       # x = b1
        s2, c2 = np.sin(hy), np.cos(hy)       # y = b2
        return (
            -s1 * s2 * sin_f * ct
            + s1 * c2 * (ct * cos_f + 2.0 * lam)
            + c1 * s2 * cos_f
            + c1 * c2 * sin_f
        )
    s1, c1 = np.sin(hy), np.cos(hy)           # y = a1
    s2, c2 = np.sin(hx), np.cos(hx)           # x = a2
    return (
        -s1 * s2 * ct * sin_f
        + s1 * c2 * cos_f
        + c1 * s2 * (2.0 * lam + ct * cos_f)
        + c1 * c2 * sin_f
    )


@dataclass
class CurveF:
    """One continuous branch of the axis-constraint curve.

    ``xs``/``ys`` are dense sorted samples of y = f(x) over [-pi, pi],
    already translated so the branch passes through the +identity point
    ``x_identity``.  ``branch_offset`` counts the 2*pi shifts applied on
    top of the unwrapped raw branch.
    """

    mode: Mode
    fixed_angle: float
    spec: SearchSpec
    xs: np.ndarray
    ys: np.ndarray
    branch_offset: int
    x_identity: float
    max_jump: float = field(default=0.0)

    def value(self, x):
        """Branch-consistent curve value at arbitrary x in [-pi, pi].

        Evaluates the closed form and snaps it onto this branch using the
        nearest sampled value, so no interpolation error enters.
        """
        raw = _raw_free_angle(x, self.fixed_angle, self.spec.lam, self.mode)
        guide = np.interp(x, self.xs, self.ys)
        return raw + TAU * np.round((guide - raw) / TAU)

    def params(self, x):
        """(c, vx, vy, vz) of the double iteration at (x, f(x))."""
        y = self.value(x)
        if self.mode == "alpha":
            return fxr_alpha_params(self.fixed_angle, x, y, self.spec.lam)
        return fxr_beta_params(y, x, self.fixed_angle, self.spec.lam)

    def g(self, x):
        """Rotation half-angle phi/2 in [0, pi] along the curve.

        atan2(|v|, c) instead of arccos(c): near the identity the vector
        part vanishes linearly, so the value stays accurate down to ~1e-15
        where arccos would floor at ~1e-8.
        """
        c, vx, vy, vz = self.params(x)
        return np.arctan2(np.sqrt(vx * vx + vy * vy + vz * vz), c)

    def closure(self, x, k: int):
        """Closure function F whose root gives the solved pair.

        F = sqrt(1-lam)*cos(k*g) - sqrt(lam)*(sin(k*g)/sin(g))*v_y, with the
        ratio replaced by its limit k as g -> 0.
        """
        c, vx, vy, vz = self.params(x)
        g = np.arctan2(np.sqrt(vx * vx + vy * vy + vz * vz), c)
        s = np.sin(g)
        ratio = np.where(s > 1e-9, np.sin(k * g) / np.where(s > 1e-9, s, 1.0), float(k))
        lam = self.spec.lam
        return np.sqrt(1.0 - lam) * np.cos(k * g) - np.sqrt(lam) * ratio * vy

    def axis_residuals(self):
        """Axis-constraint residual at every stored sample."""
        return np.abs(
            _axis_residual(self.xs, self.ys, self.fixed_angle, self.spec.lam, self.mode)
        )


def _golden_minimize(f: Callable[[float], float], lo: float, hi: float, iters: int = 90) -> float:
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = f(d)
        if b - a < 1e-15:
            break
    return 0.5 * (a + b)


def _bisect(f: Callable[[float], float], a: float, b: float,
            xtol: float = _BISECT_XTOL, maxit: int = _BISECT_MAXIT) -> float:
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0.0:
        raise SolverFailureError(
            f"bisection bracket has no sign change: f({a})={fa}, f({b})={fb}"
        )
    for _ in range(maxit):
        m = 0.5 * (a + b)
        fm = f(m)
        if fm == 0.0:
            return m
        if fa * fm < 0.0:
            b, fb = m, fm
        else:
            a, fa = m, fm
        if abs(b - a) < xtol:
            break
    return 0.5 * (a + b)


def _fold_pi(x: float) -> float:
    """Fold into [-pi, pi]."""
    while x > math.pi:
        x -= TAU
    while x < -math.pi:
        x += TAU
    return x


def trace_curve(fixed_angle: float, spec: SearchSpec, mode: Mode = "alpha",
                grid_points: int = DEFAULT_GRID_POINTS) -> CurveF:
    """Trace the continuous axis-constraint branch anchored at +identity.

    The raw principal branch is sampled on a dense grid, refined around
    branch jumps, unwrapped by 2*pi translations, and finally shifted (by
    one more 2*pi if needed -- that shift flips the sign of cos(phi/2)) so
    that the curve's extremal point is the identity rather than -identity.
    The polished identity abscissa is inserted into the samples.
    """
    _check_mode(mode)
    if grid_points < 16:
        raise ValueError("grid_points too small")
    lam = spec.lam

    def sample(points: np.ndarray) -> np.ndarray:
        raw = _raw_free_angle(points, fixed_angle, lam, mode)
        a, b = _constraint_coeffs(points, fixed_angle, lam, mode)
        # where both coefficients vanish the constraint holds for every y;
        # extend by continuity from the nearest determined samples
        degenerate = a * a + b * b < 1e-24
        if degenerate.any() and not degenerate.all():
            idx = np.arange(len(points), dtype=float)
            raw = raw.copy()
            raw[degenerate] = np.interp(idx[degenerate], idx[~degenerate], raw[~degenerate])
        return raw

    xs = np.linspace(-math.pi, math.pi, grid_points)
    raw = sample(xs)
    for _ in range(_REFINE_ROUNDS):
        ys = np.unwrap(raw, period=TAU)
        jumps = np.nonzero(np.abs(np.diff(ys)) > _JUMP_TOL)[0]
        if jumps.size == 0:
            break
        extra = [np.linspace(xs[i], xs[i + 1], _REFINE_FACTOR + 1)[1:-1] for i in jumps]
        xs = np.unique(np.concatenate([xs] + extra))
        raw = sample(xs)
    ys = np.unwrap(raw, period=TAU)

    curve = CurveF(mode=mode, fixed_angle=fixed_angle, spec=spec,
                   xs=xs, ys=ys, branch_offset=0, x_identity=0.0)

    for attempt in range(2):
        c_samples = curve.params(xs)[0]
        i_max = int(np.argmax(c_samples))
        # -identity on this branch: shift the free angle by 2*pi and retry
        if attempt == 0 and 1.0 - c_samples[i_max] > 1.0 + c_samples.min():
            curve.ys = curve.ys + TAU
            curve.branch_offset += 1
            continue
        lo = xs[max(0, i_max - 1)]
        hi = xs[min(len(xs) - 1, i_max + 1)]
        x_id = _golden_minimize(lambda t: float(curve.g(t)), lo, hi)
        x_id = _polish_identity(curve, x_id)
        c_id = float(curve.params(x_id)[0])
        if 1.0 - c_id < _IDENTITY_TOL:
            curve.x_identity = float(x_id)
            break
        if attempt == 0:
            curve.ys = curve.ys + TAU
            curve.branch_offset += 1
        else:
            raise SolverFailureError(
                f"no identity point on either branch: best 1-cos(phi/2) = {1.0 - c_id:.3e}"
            )

    # record the identity point among the samples
    if curve.x_identity not in curve.xs:
        xs2 = np.append(curve.xs, curve.x_identity)
        order = np.argsort(xs2)
        ys2 = np.append(curve.ys, float(curve.value(curve.x_identity)))
        curve.xs, curve.ys = xs2[order], ys2[order]
    curve.max_jump = float(np.max(np.abs(np.diff(curve.ys)))) if len(curve.ys) > 1 else 0.0
    return curve


def _polish_identity(curve: CurveF, x0: float) -> float:
    """Secant-polish the identity abscissa on the dominant axis component.

    All three components of v cross zero together at the identity; driving
    the steepest one to zero pins the crossing to machine precision.
    """
    def vec(t: float) -> np.ndarray:
        c, vx, vy, vz = curve.params(t)
        return np.array([float(vx), float(vy), float(vz)])

    h = 1e-6
    slope = (vec(x0 + h) - vec(x0 - h)) / (2.0 * h)
    j = int(np.argmax(np.abs(slope)))
    a, b = x0 - 1e-7, x0 + 1e-7
    fa, fb = vec(a)[j], vec(b)[j]
    for _ in range(60):
        if fb == fa:
            break
        step = fb * (b - a) / (fb - fa)
        a, fa = b, fb
        b = b - step
        fb = vec(b)[j]
        if abs(b - a) < 1e-16:
            break
    return float(np.clip(b, -math.pi, math.pi))


@dataclass(frozen=True)
class ParamSolution:
    """A solved and certified schedule for one fixed phase."""

    mode: Mode
    fixed_angle: float
    free_pair: tuple[float, float]
    k: int
    rotation_angle_phi: float
    residual_real: float
    residual_imag: float
    certified_success_prob: float

    def as_dict(self) -> dict:
        first, second = ("beta1", "beta2") if self.mode == "alpha" else ("alpha1", "alpha2")
        return {
            "mode": self.mode,
            "fixed_angle": self.fixed_angle,
            first: self.free_pair[0],
            second: self.free_pair[1],
            "k": self.k,
            "rotation_angle_phi": self.rotation_angle_phi,
            "residual_real": self.residual_real,
            "residual_imag": self.residual_imag,
            "success_probability": self.certified_success_prob,
        }


def _pair_params(mode: Mode, fixed_angle: float, pair, lam: float):
    if mode == "alpha":
        return fxr_alpha_params(fixed_angle, pair[0], pair[1], lam)
    return fxr_beta_params(pair[0], pair[1], fixed_angle, lam)


def residuals(solution: ParamSolution, spec: SearchSpec) -> tuple[float, float]:
    """Literal residuals of the closure and axis constraint equations."""
    mode, k, lam = solution.mode, solution.k, spec.lam
    fixed = solution.fixed_angle
    c, vx, vy, vz = _pair_params(mode, fixed, solution.free_pair, lam)
    g = float(np.arctan2(np.sqrt(vx * vx + vy * vy + vz * vz), c))
    sin_f, cos_f = math.sin(fixed), math.cos(fixed)
    if mode == "alpha":
        b1, b2 = solution.free_pair
        s1, c1 = math.sin(0.5 * b1), math.cos(0.5 * b1)
        s2 = math.sin(0.5 * b2)
        bracket = -sin_f * c1 * s2 + (1.0 - 2.0 * lam) * (1.0 - cos_f) * s1 * s2
        x_var, y_var = b1, b2
    else:
        a1, a2 = solution.free_pair
        s1, c1 = math.sin(0.5 * a1), math.cos(0.5 * a1)
        s2 = math.sin(0.5 * a2)
        bracket = -s1 * math.cos(0.5 * a2) * sin_f + (1.0 - 2.0 * lam) * s1 * s2 * (1.0 - cos_f)
        x_var, y_var = a2, a1
    real = math.sin(g) * math.cos(k * g) - 2.0 * lam * math.sin(k * g) * bracket
    imag = float(_axis_residual(x_var, y_var, fixed, lam, mode))
    return abs(real), abs(imag)


def solve_free_pair(fixed_angle: float, spec: SearchSpec, mode: Mode, k: int,
                    curve: CurveF | None = None,
                    grid_points: int = DEFAULT_GRID_POINTS) -> ParamSolution:
    """Solve for the free phase pair at iteration count k > k_lower.

    Follows the constructive walk described in the module docstring and
    certifies the result by exact 2D simulation before returning.
    """
    _check_mode(mode)
    threshold = k_lower(fixed_angle, spec)
    if k <= threshold:
        raise IterationCountTooSmallError(k, threshold)
    if curve is None:
        curve = trace_curve(fixed_angle, spec, mode, grid_points)
    elif (curve.mode, curve.fixed_angle, curve.spec.lam) != (mode, fixed_angle, spec.lam):
        raise ValueError("supplied curve was traced for different parameters")

    p0 = phi_zero(fixed_angle, spec)
    x_id = curve.x_identity
    x_far = _fold_pi(-fixed_angle)
    g_far = float(curve.g(x_far))
    if g_far + 1e-9 < p0:
        raise SolverFailureError(
            f"curve value at folded -fixed angle fell below phi_0: g={g_far!r} < {p0!r}"
        )
    target = math.pi / k
    x3 = _bisect(lambda t: float(curve.g(t)) - target, x_id, x_far)

    f_id = float(curve.closure(x_id, k))
    f_x3 = float(curve.closure(x3, k))
    if not (f_id > 0.0 > f_x3):
        g_lo, g_hi = float(curve.g(x_id)), g_far
        raise SolverFailureError(
            "closure bracket failed: "
            f"F(identity)={f_id!r}, F(x''')={f_x3!r}, g range [{g_lo!r}, {g_hi!r}], phi_0={p0!r}"
        )
    x_hat = _bisect(lambda t: float(curve.closure(t, k)), x_id, x3)
    y_hat = float(curve.value(x_hat))
    # fold the dependent angle by full turns (invariant period) into (-2*pi, 2*pi]
    y_hat = y_hat - 2.0 * TAU * math.ceil((y_hat - TAU) / (2.0 * TAU))

    pair = (x_hat, y_hat) if mode == "alpha" else (y_hat, x_hat)
    phi = 2.0 * float(curve.g(x_hat))
    partial = ParamSolution(
        mode=mode, fixed_angle=fixed_angle, free_pair=pair, k=k,
        rotation_angle_phi=phi, residual_real=0.0, residual_imag=0.0,
        certified_success_prob=0.0,
    )
    res_real, res_imag = residuals(partial, spec)
    prob = simulate.success_probability(partial, spec)
    if res_real > _RESIDUAL_TOL or res_imag > _RESIDUAL_TOL or prob <= 1.0 - _SUCCESS_TOL:
        raise SolverFailureError(
            f"solution failed certification: residuals=({res_real!r}, {res_imag!r}), "
            f"success={prob!r}, g range [{float(curve.g(x_id))!r}, {g_far!r}], phi_0={p0!r}"
        )
    return ParamSolution(
        mode=mode, fixed_angle=fixed_angle, free_pair=pair, k=k,
        rotation_angle_phi=phi, residual_real=res_real, residual_imag=res_imag,
        certified_success_prob=prob,
    )

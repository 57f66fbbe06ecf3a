"""Search operators on the two-dimensional invariant subspace.

A database with marked fraction ``lam`` confines the whole search dynamics
to the plane spanned by the uniform unmarked state |R> and the uniform
marked state |T>.  In that basis the phase oracle is diag(1, e^{i*alpha}),
the phase diffusion is a rank-one perturbation of the identity, and both
act on the Bloch sphere as rotations: the oracle about the +z axis, the
diffusion about the initial-state axis [sin(theta), 0, cos(theta)].

Every operator is available on two independent paths: as an explicit 2x2
matrix, and as a closed-form :class:`~fxrsearch.rotation.Rotation`.  The
matrix path is the test oracle for the closed forms, which the root-finding
code consumes.  The ``*_params`` functions are ndarray-friendly so curves
can be evaluated on whole grids at once.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rotation import Rotation

__all__ = [
    "SearchSpec",
    "oracle_matrix",
    "diffusion_matrix",
    "g_matrix",
    "oracle_rotation",
    "diffusion_rotation",
    "g_rotation",
    "fxr_alpha_params",
    "fxr_beta_params",
    "fxr_alpha_rotation",
    "fxr_beta_rotation",
]


@dataclass(frozen=True)
class SearchSpec:
    """Marked fraction ``lam`` in (0, 1) and the derived geometry.

    The half-angle convention sqrt(lam) = sin(theta/2) places the initial
    state at Bloch vector [sin(theta), 0, cos(theta)]; |R> is the north
    pole, |T> the south pole.  lam in {0, 1} is rejected: the search is
    empty or trivial and the angle geometry degenerates.
    """

    lam: float

    def __post_init__(self):
        lam = float(self.lam)
        if not 0.0 < lam < 1.0:
            raise ValueError(f"marked fraction must be strictly inside (0, 1), got {lam!r}")
        object.__setattr__(self, "lam", lam)

    @classmethod
    def from_counts(cls, total: int, marked: int) -> "SearchSpec":
        if not 1 <= marked < total:
            raise ValueError("need 1 <= marked < total")
        return cls(marked / total)

    @property
    def theta(self) -> float:
        """Bloch polar angle of the initial state, in (0, pi)."""
        return 2.0 * float(np.arcsin(np.sqrt(self.lam)))

    @property
    def sin_theta(self) -> float:
        return 2.0 * float(np.sqrt(self.lam * (1.0 - self.lam)))

    @property
    def cos_theta(self) -> float:
        return 1.0 - 2.0 * self.lam

    @property
    def bloch_initial(self) -> np.ndarray:
        return np.array([self.sin_theta, 0.0, self.cos_theta])

    @property
    def amp_unmarked(self) -> float:
        return float(np.sqrt(1.0 - self.lam))

    @property
    def amp_marked(self) -> float:
        return float(np.sqrt(self.lam))


def oracle_matrix(alpha: float) -> np.ndarray:
    """Phase oracle diag(1, e^{i*alpha}) in the {|R>, |T>} basis."""
    return np.array([[1.0, 0.0], [0.0, np.exp(1j * alpha)]], dtype=complex)


def diffusion_matrix(beta: float, spec: SearchSpec) -> np.ndarray:
    """Phase diffusion I - (1 - e^{-i*beta}) |psi0><psi0| in the same basis."""
    f = 1.0 - np.exp(-1j * beta)
    lam = spec.lam
    off = -f * np.sqrt(lam * (1.0 - lam))
    return np.array(
        [
            [1.0 - f * (1.0 - lam), off],
            [off, 1.0 - f * lam],
        ],
        dtype=complex,
    )


def g_matrix(alpha: float, beta: float, spec: SearchSpec) -> np.ndarray:
    """One generalized iteration: diffusion after oracle."""
    return diffusion_matrix(beta, spec) @ oracle_matrix(alpha)


def oracle_rotation(alpha: float) -> tuple[float, Rotation]:
    """(global phase, rotation) pair of the oracle: phase alpha/2, R_z(alpha)."""
    half = 0.5 * alpha
    return half, Rotation(float(np.cos(half)), np.array([0.0, 0.0, np.sin(half)]))


def diffusion_rotation(beta: float, spec: SearchSpec) -> tuple[float, Rotation]:
    """(global phase, rotation) of the diffusion: -beta/2, rotation about psi0."""
    half = 0.5 * beta
    return -half, Rotation(float(np.cos(half)), np.sin(half) * spec.bloch_initial)


def g_rotation(alpha: float, beta: float, spec: SearchSpec) -> Rotation:
    """Closed-form rotation of one generalized iteration.

    c = c_b*c_a - s_b*s_a*cos(theta);
    v = (s_b*c_a*sin(theta), -s_b*s_a*sin(theta), c_b*s_a + s_b*c_a*cos(theta)),
    with half-angle sines/cosines of alpha and beta.
    """
    ca, sa = np.cos(0.5 * alpha), np.sin(0.5 * alpha)
    cb, sb = np.cos(0.5 * beta), np.sin(0.5 * beta)
    ct, st = spec.cos_theta, spec.sin_theta
    c = cb * ca - sb * sa * ct
    v = np.array([sb * ca * st, -sb * sa * st, cb * sa + sb * ca * ct])
    return Rotation(float(c), v)


def fxr_alpha_params(alpha, beta1, beta2, lam):
    """Rotation parameters (c, vx, vy, vz) of G(alpha,beta2)G(alpha,beta1).

    v is sin(phi/2) times the unit axis.  Accepts ndarray arguments and
    broadcasts, so a whole constraint curve can be evaluated in one call.
    """
    s1, c1 = np.sin(0.5 * np.asarray(beta1)), np.cos(0.5 * np.asarray(beta1))
    s2, c2 = np.sin(0.5 * np.asarray(beta2)), np.cos(0.5 * np.asarray(beta2))
    sin_a, cos_a = np.sin(alpha), np.cos(alpha)
    sa2 = np.sin(0.5 * alpha) ** 2
    ct = 1.0 - 2.0 * lam
    st = 2.0 * np.sqrt(lam * (1.0 - lam))
    sum_half = 0.5 * (np.asarray(beta1) + np.asarray(beta2))

    c = (
        np.cos(alpha + sum_half)
        + 2.0 * lam * (sin_a * np.sin(sum_half) - 4.0 * sa2 * s1 * s2)
        + 8.0 * lam * lam * sa2 * s1 * s2
    )
    vx = st * (s1 * c2 + cos_a * c1 * s2 - ct * sin_a * s1 * s2)
    vy = st * (-sin_a * c1 * s2 + 2.0 * ct * sa2 * s1 * s2)
    vz = sin_a * c1 * c2 + ct * cos_a * np.sin(sum_half) - ct * ct * sin_a * s1 * s2
    return c, vx, vy, vz


def fxr_beta_params(alpha1, alpha2, beta, lam):
    """Rotation parameters (c, vx, vy, vz) of G(alpha2,beta)G(alpha1,beta)."""
    s1, c1 = np.sin(0.5 * np.asarray(alpha1)), np.cos(0.5 * np.asarray(alpha1))
    s2, c2 = np.sin(0.5 * np.asarray(alpha2)), np.cos(0.5 * np.asarray(alpha2))
    sin_b, cos_b = np.sin(beta), np.cos(beta)
    sb2 = np.sin(0.5 * beta) ** 2
    ct = 1.0 - 2.0 * lam
    st = 2.0 * np.sqrt(lam * (1.0 - lam))
    sum_half = 0.5 * (np.asarray(alpha1) + np.asarray(alpha2))

    c = (
        np.cos(sum_half + beta)
        + 2.0 * lam * (np.sin(sum_half) * sin_b - 4.0 * s1 * s2 * sb2)
        + 8.0 * lam * lam * s1 * s2 * sb2
    )
    vx = st * (c1 * c2 * sin_b - 2.0 * ct * c1 * s2 * sb2)
    vy = st * (-s1 * c2 * sin_b + 2.0 * ct * s1 * s2 * sb2)
    vz = (
        s1 * c2 * cos_b
        + c1 * s2
        + ct * np.cos(sum_half) * sin_b
        - 2.0 * ct * ct * c1 * s2 * sb2
    )
    return c, vx, vy, vz


def fxr_alpha_rotation(alpha: float, beta1: float, beta2: float, spec: SearchSpec) -> Rotation:
    """Closed-form rotation of the oracle-fixed double iteration (beta1 first)."""
    c, vx, vy, vz = fxr_alpha_params(alpha, beta1, beta2, spec.lam)
    return Rotation(float(c), np.array([vx, vy, vz], dtype=float))


def fxr_beta_rotation(alpha1: float, alpha2: float, beta: float, spec: SearchSpec) -> Rotation:
    """Closed-form rotation of the diffusion-fixed double iteration (alpha1 first)."""
    c, vx, vy, vz = fxr_beta_params(alpha1, alpha2, beta, spec.lam)
    return Rotation(float(c), np.array([vx, vy, vz], dtype=float))

"""Exact arithmetic on Bloch-sphere rotations.

A rotation by angle phi about the unit axis n is stored as the pair
(c, v) = (cos(phi/2), sin(phi/2) * n) -- the scalar/vector parts of a unit
quaternion.  Composition, integer powers and the 2x2 unitary form all have
closed expressions in these coordinates, and the phi = 0 axis singularity
never arises.

All values are immutable; every operation is a pure function.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Rotation",
    "identity",
    "rotation_from_axis_angle",
    "compose",
    "power",
    "to_unitary",
    "decompose_unitary",
    "is_unitary",
]

_NORM_TOL = 1e-12       # construction invariant |c^2 + |v|^2 - 1|
_DRIFT_TOL = 1e-14      # silent renormalisation threshold after composition
_UNITARY_TOL = 1e-10


@dataclass(frozen=True)
class Rotation:
    """Scalar part ``c = cos(phi/2)`` and vector part ``v = sin(phi/2)*n``."""

    c: float
    v: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        v = np.asarray(self.v, dtype=float).reshape(3).copy()
        norm2 = self.c * self.c + float(v @ v)
        if abs(norm2 - 1.0) > _NORM_TOL:
            raise ValueError(f"rotation parameters not normalised: c^2+|v|^2 = {norm2!r}")
        v.flags.writeable = False
        object.__setattr__(self, "c", float(self.c))
        object.__setattr__(self, "v", v)

    @property
    def angle(self) -> float:
        """Rotation angle in [0, 2*pi]."""
        return 2.0 * float(np.arccos(np.clip(self.c, -1.0, 1.0)))

    @property
    def axis(self) -> np.ndarray:
        """Unit axis; the zero vector for (+/-) identity."""
        n = float(np.linalg.norm(self.v))
        if n == 0.0:
            return np.zeros(3)
        return self.v / n

    def isclose(self, other: "Rotation", tol: float = 1e-12) -> bool:
        return abs(self.c - other.c) <= tol and bool(np.all(np.abs(self.v - other.v) <= tol))


def identity() -> Rotation:
    return Rotation(1.0, np.zeros(3))


def _normalised(c: float, v: np.ndarray) -> Rotation:
    norm = np.sqrt(c * c + float(v @ v))
    if abs(norm - 1.0) > _DRIFT_TOL:
        c, v = c / norm, v / norm
    return Rotation(c, v)


def rotation_from_axis_angle(axis, angle: float) -> Rotation:
    """Rotation by ``angle`` radians about ``axis`` (normalised internally)."""
    axis = np.asarray(axis, dtype=float).reshape(3)
    norm = float(np.linalg.norm(axis))
    if norm == 0.0:
        raise ValueError("rotation axis must have nonzero length")
    half = 0.5 * angle
    return Rotation(float(np.cos(half)), np.sin(half) * axis / norm)


def compose(second: Rotation, first: Rotation) -> Rotation:
    """Rotation equal to ``second`` applied after ``first``.

    c = c1*c2 - v1.v2 ;  v = c2*v1 + c1*v2 + v2 x v1.
    """
    c1, v1 = first.c, first.v
    c2, v2 = second.c, second.v
    c = c1 * c2 - float(v1 @ v2)
    v = c2 * v1 + c1 * v2 + np.cross(v2, v1)
    return _normalised(c, v)


def power(r: Rotation, k: int) -> Rotation:
    """k-th power: rotation about the same axis by k times the angle.

    Computed as (cos(k*phi/2), sin(k*phi/2)*n), not by repeated composition.
    """
    if k < 0:
        raise ValueError("exponent must be nonnegative")
    half = 0.5 * k * r.angle
    n = r.axis
    return _normalised(float(np.cos(half)), np.sin(half) * n)


def to_unitary(r: Rotation) -> np.ndarray:
    """2x2 special-unitary matrix of the rotation."""
    vx, vy, vz = r.v
    return np.array(
        [
            [r.c - 1j * vz, -1j * vx - vy],
            [-1j * vx + vy, r.c + 1j * vz],
        ],
        dtype=complex,
    )


def is_unitary(u: np.ndarray, tol: float = _UNITARY_TOL) -> bool:
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2):
        return False
    return bool(np.max(np.abs(u.conj().T @ u - np.eye(2))) <= tol)


def decompose_unitary(u) -> tuple[float, Rotation]:
    """Split a 2x2 unitary into ``(global_phase, rotation)``.

    ``exp(1j*global_phase) * to_unitary(rotation)`` reproduces the input.
    The representative with c > 0 is returned whenever the rotation's trace
    allows it; for the ambiguous c = 0 case the sign is fixed by requiring
    the first nonzero coordinate of v to be positive.
    """
    u = np.asarray(u, dtype=complex)
    if not is_unitary(u):
        raise ValueError("input is not unitary within 1e-10")

    det = u[0, 0] * u[1, 1] - u[0, 1] * u[1, 0]
    phase = 0.5 * float(np.angle(det))
    r = u * np.exp(-1j * phase)
    c = 0.5 * float((r[0, 0] + r[1, 1]).real)
    if c < 0.0:
        phase += np.pi
        r = -r
        c = -c
    v = np.array(
        [
            -0.5 * (r[0, 1] + r[1, 0]).imag,
            0.5 * (r[1, 0] - r[0, 1]).real,
            0.5 * (r[1, 1] - r[0, 0]).imag,
        ]
    )
    if c < 5e-7:
        # trace-free within noise: pick the representative whose first
        # nonzero axis coordinate is positive
        for comp in v:
            if abs(comp) > 1e-6:
                if comp < 0.0:
                    phase += np.pi
                    v = -v
                    c = -c
                break
    phase = float((phase + np.pi) % (2.0 * np.pi) - np.pi)
    return phase, _normalised(c, v)

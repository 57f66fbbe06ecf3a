"""Exact schedule certification at two fidelities.

``run_2d`` multiplies 2x2 operator matrices over the invariant {|R>, |T>}
basis.  ``run_full`` evolves an explicit N-dimensional state vector with a
marked index set; the diffusion is applied as a rank-one update (one inner
product against the uniform state, one shifted subtraction), O(N) per step,
no matrix is ever materialised.  Agreement between the two is itself a
tested invariant.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import ResourceLimitError
from .operators import SearchSpec, diffusion_matrix, oracle_matrix

__all__ = [
    "MAX_FULL_DIM",
    "Step",
    "oracle_step",
    "diffusion_step",
    "grover_schedule",
    "fxr_schedule",
    "State2",
    "StateVector",
    "run_2d",
    "run_full",
    "success_probability",
]

MAX_FULL_DIM = 2**22


class Step(NamedTuple):
    """One schedule entry: apply-oracle(angle) or apply-diffusion(angle)."""

    kind: str  # "oracle" | "diffusion"
    angle: float


def oracle_step(angle: float) -> Step:
    return Step("oracle", float(angle))


def diffusion_step(angle: float) -> Step:
    return Step("diffusion", float(angle))


def grover_schedule(alpha: float, beta: float, k: int) -> list[Step]:
    """k generalized iterations G(alpha, beta), oracle before diffusion."""
    return [oracle_step(alpha), diffusion_step(beta)] * k


def fxr_schedule(mode: str, fixed_angle: float, free_pair: Sequence[float], k: int) -> list[Step]:
    """2k-iteration schedule of the double-iteration operator raised to k.

    mode "alpha": pair = (beta1, beta2), beta1 block first;
    mode "beta":  pair = (alpha1, alpha2), alpha1 block first.
    """
    a, b = free_pair
    if mode == "alpha":
        block = [
            oracle_step(fixed_angle), diffusion_step(a),
            oracle_step(fixed_angle), diffusion_step(b),
        ]
    elif mode == "beta":
        block = [
            oracle_step(a), diffusion_step(fixed_angle),
            oracle_step(b), diffusion_step(fixed_angle),
        ]
    else:
        raise ValueError(f"mode must be 'alpha' or 'beta', got {mode!r}")
    return block * k


@dataclass(frozen=True)
class State2:
    """Amplitude pair over the invariant basis."""

    amp_R: complex
    amp_T: complex

    @property
    def success_probability(self) -> float:
        return float(abs(self.amp_T) ** 2)

    @property
    def norm(self) -> float:
        return float(np.sqrt(abs(self.amp_R) ** 2 + abs(self.amp_T) ** 2))


@dataclass(frozen=True)
class StateVector:
    """Full amplitude array with its marked index set."""

    amplitudes: np.ndarray
    marked: tuple[int, ...]

    @property
    def marked_mass(self) -> float:
        return float(np.sum(np.abs(self.amplitudes[list(self.marked)]) ** 2))

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def _step_matrix(step: Step, spec: SearchSpec) -> np.ndarray:
    if step.kind == "oracle":
        return oracle_matrix(step.angle)
    if step.kind == "diffusion":
        return diffusion_matrix(step.angle, spec)
    raise ValueError(f"unknown step kind {step.kind!r}")


def run_2d(schedule: Iterable[Step], spec: SearchSpec) -> State2:
    """Evolve (sqrt(1-lam), sqrt(lam)) through the schedule's matrices."""
    steps = list(schedule)
    if not steps:
        raise ValueError("schedule must be non-empty")
    psi = np.array([spec.amp_unmarked, spec.amp_marked], dtype=complex)
    for step in steps:
        psi = _step_matrix(step, spec) @ psi
    return State2(complex(psi[0]), complex(psi[1]))


def run_full(n_elements: int, marked, schedule: Iterable[Step]) -> StateVector:
    """Evolve the uniform N-vector; oracle phases the marked indices,
    diffusion is the rank-one update psi -= (1-e^{-i*beta}) <u|psi> u."""
    if n_elements < 2:
        raise ValueError("need at least two elements")
    if n_elements > MAX_FULL_DIM:
        raise ResourceLimitError(
            f"state vector of {n_elements} amplitudes exceeds cap {MAX_FULL_DIM}"
        )
    marked = tuple(sorted(int(i) for i in marked))
    if not marked or len(marked) >= n_elements:
        raise ValueError("need 1 <= |marked| < N")
    if marked[0] < 0 or marked[-1] >= n_elements or len(set(marked)) != len(marked):
        raise ValueError("marked indices must be distinct and in [0, N)")
    steps = list(schedule)
    if not steps:
        raise ValueError("schedule must be non-empty")

    inv_sqrt_n = 1.0 / np.sqrt(n_elements)
    psi = np.full(n_elements, inv_sqrt_n, dtype=complex)
    marked_arr = np.array(marked)
    for step in steps:
        if step.kind == "oracle":
            psi[marked_arr] *= np.exp(1j * step.angle)
        elif step.kind == "diffusion":
            overlap = psi.sum() * inv_sqrt_n
            psi -= (1.0 - np.exp(-1j * step.angle)) * overlap * inv_sqrt_n
        else:
            raise ValueError(f"unknown step kind {step.kind!r}")
    return StateVector(psi, marked)


def success_probability(solution, spec: SearchSpec) -> float:
    """Marked-state probability of a solved schedule, by 2D simulation."""
    schedule = fxr_schedule(solution.mode, solution.fixed_angle, solution.free_pair, solution.k)
    return run_2d(schedule, spec).success_probability

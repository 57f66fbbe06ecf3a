"""Exception types shared across the package."""


class DegenerateAngleError(ValueError):
    """The fixed phase angle sits exactly on a degenerate branch.

    The folded rotation increment is zero, so no finite iteration count can
    close the schedule on this branch.
    """


class IterationCountTooSmallError(ValueError):
    """Requested iteration count does not exceed the guaranteed threshold."""

    def __init__(self, k: int, k_lower: float):
        self.k = k
        self.k_lower = k_lower
        super().__init__(
            f"iteration count k={k} must strictly exceed k_lower={k_lower:.12g}; "
            "no free phase pair is guaranteed below that"
        )


class SolverFailureError(RuntimeError):
    """Internal solver failure; carries diagnostics in the message."""


class InfeasibleScheduleError(RuntimeError):
    """A classic schedule's defining equations have no usable root."""


class ResourceLimitError(RuntimeError):
    """State-space size exceeds the configured cap."""

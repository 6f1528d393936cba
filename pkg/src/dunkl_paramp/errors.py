"""Exception hierarchy shared by every module."""


class ParameterError(ValueError):
    """Invalid physical or numerical input (mu <= -1/2, odd dim, bad n, ...)."""


class InstabilityError(ParameterError):
    """The stability condition omega > 2|f| is violated."""

    def __init__(self, omega, f_mag):
        super().__init__(
            f"stability condition omega > 2|f| violated (omega={omega!r}, |f|={f_mag!r})"
        )
        self.omega = omega
        self.f_mag = f_mag


class ParityError(ValueError):
    """Operator does not commute with the reflection R."""


class TruncationError(RuntimeError):
    """State amplitude leaks into the top of the truncated basis; raise dim."""


class ConvergenceError(RuntimeError):
    """An iterative numerical kernel failed to converge."""

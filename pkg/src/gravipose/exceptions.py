"""Exception types shared across the library."""


class GraviposeError(Exception):
    """Base class for all library errors."""


class NotDivisible(GraviposeError):
    """Polynomial division left a remainder above tolerance.

    Raised by exact division helpers; signals a broken upstream
    construction rather than bad user input.
    """

    def __init__(self, residual, tol):
        self.residual = float(residual)
        self.tol = float(tol)
        super().__init__(
            f"polynomial division remainder {self.residual:.3e} exceeds "
            f"tolerance {self.tol:.3e}"
        )


class NumericalFailure(GraviposeError):
    """An eigenvalue / factorization routine failed to converge."""


class DegenerateInput(GraviposeError):
    """Input configuration admits no meaningful estimate."""


class GenerationFailure(GraviposeError):
    """Synthetic scene generation could not satisfy visibility constraints."""


class NoModel(GraviposeError):
    """Robust estimation found no hypothesis with enough inliers."""

"""Exception types raised by gradshift."""


class GradshiftError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(GradshiftError, ValueError):
    pass


class NotHermitian(GradshiftError, ValueError):
    pass


class NotUnitary(GradshiftError, ValueError):
    pass


class InternalConsistencyError(GradshiftError, RuntimeError):
    """A numerical invariant that should hold by construction was violated."""


class RGateValidation(GradshiftError, ValueError):
    def __init__(self, n_eigenvalues: int):
        self.n_eigenvalues = n_eigenvalues
        super().__init__(
            f"generator has {n_eigenvalues} distinct eigenvalue(s); an r-gate needs exactly 2"
        )


class NotAnRGateFunction(GradshiftError, ValueError):
    """Raised when a sampled single-component function is not a degree-1 trig polynomial."""


class SingularShift(GradshiftError, ValueError):
    pass


class ZeroStep(GradshiftError, ValueError):
    pass


class ConditionViolation(GradshiftError, ValueError):
    def __init__(self, condition: str, message: str):
        self.condition = condition
        super().__init__(f"{condition}: {message}")

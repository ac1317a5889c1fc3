"""Exception types raised across the package."""


class InvalidInputError(ValueError):
    """An argument violates a documented precondition."""


class SingularSystemError(InvalidInputError):
    """A linear solve hit a non-invertible block."""

    def __init__(self, message, element=None):
        super().__init__(message)
        self.element = element


class DarkStateMultiplicityError(RuntimeError):
    """The steady state is not unique: several states are left untouched by the light."""

    def __init__(self, message, dark_states=(), null_dimension=0):
        super().__init__(message)
        self.dark_states = list(dark_states)
        self.null_dimension = null_dimension


class ConvergenceError(RuntimeError):
    def __init__(self, message, residual):
        super().__init__(message)
        self.residual = residual


class UnsupportedConfigurationError(InvalidInputError):
    pass


class ScenarioValidationError(InvalidInputError):
    """Collects every validation problem found in a scenario document."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))

"""Exception hierarchy shared across the solver."""


class ThermoBEMError(Exception):
    """Base class for all solver errors."""


class ParameterDomainError(ThermoBEMError, ValueError):
    """Physical or numerical parameter outside its admissible domain."""


class SingularityError(ThermoBEMError, ValueError):
    """Evaluation requested at (or too close to) a kernel singularity."""


class DegenerateRootError(ThermoBEMError, ArithmeticError):
    """Wave-number roots coincide; the mode-splitting matrices blow up."""


class ConditioningError(ThermoBEMError, ArithmeticError):
    """Discrete system numerically singular."""

    def __init__(self, message, condition_estimate=None):
        super().__init__(message)
        self.condition_estimate = condition_estimate


class ConfigError(ThermoBEMError, ValueError):
    """Invalid run configuration; carries field-level messages."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class CausalityError(ThermoBEMError, ValueError):
    """Time signal violates the causality contract."""

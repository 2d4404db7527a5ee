"""Exception types shared by all solver modules."""


class TelequantError(Exception):
    """Base class for every error raised by this package."""


class DomainError(TelequantError, ValueError):
    """A physical parameter or field value is outside its valid domain."""


class UsageError(TelequantError, ValueError):
    """An operation was called with missing or inconsistent inputs."""


class ConfigError(TelequantError, ValueError):
    """A run configuration violates a documented stability or setup bound."""


class BlowupError(TelequantError, ArithmeticError):
    """Non-finite values appeared during time stepping.

    The step index at which the blowup was detected is stored in ``step``.
    """

    def __init__(self, message: str, step: int):
        super().__init__(f"{message} (step {step})")
        self.step = step

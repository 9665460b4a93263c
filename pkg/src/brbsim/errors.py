"""Exception types raised across the simulator."""


class ParameterError(ValueError):
    """Invalid parameters for a generator or decision procedure."""


class GenerationError(RuntimeError):
    """A randomized or constructive generator could not produce a valid graph."""


class CapacityError(ValueError):
    """Input exceeds what an exhaustive oracle is willing to enumerate."""


class ChannelViolation(RuntimeError):
    """A message arrived over a link that does not exist."""


class ConfigError(ValueError):
    """An experiment configuration is malformed or inconsistent."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SweepError(RuntimeError):
    """A run inside a sweep failed; carries the config index and repetition."""

    def __init__(self, index: int, repetition: int, cause: BaseException):
        super().__init__(index, repetition, cause)
        self.index = index
        self.repetition = repetition
        self.cause = cause

    def __str__(self) -> str:
        return f"config {self.index}, repetition {self.repetition}: {self.cause}"

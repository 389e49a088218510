"""Exception hierarchy shared by the library and the command line."""


class JugglingError(Exception):
    """Base class for every error raised by mjuggle."""


class ParameterError(JugglingError, ValueError):
    """Arguments are inconsistent (mismatched ball counts, bad heights...)."""


class ParseError(JugglingError, ValueError):
    """Malformed pattern text. ``position`` is a 0-based character offset."""

    def __init__(self, message, position):
        super().__init__(f"{message} at offset {position}")
        self.position = position


class ValidationError(JugglingError, ValueError):
    """Well-formed text that does not describe a usable pattern."""


class SimulationError(JugglingError):
    """A throw sequence cannot be carried out from the given state."""

    def __init__(self, message, step=None):
        prefix = f"step {step}: " if step is not None else ""
        super().__init__(prefix + message)
        self.step = step

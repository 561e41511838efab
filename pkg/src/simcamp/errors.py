"""Exception hierarchy shared by every simcamp module."""


class SimcampError(Exception):
    """Base class. Campaign execution errors carry ``index`` and ``record``."""

    index: int | None = None
    record = None


class DomainError(SimcampError, ValueError):
    pass


class AlphabetError(SimcampError, ValueError):
    pass


class StepError(SimcampError, ValueError):
    """A duration that is not a positive multiple of the model's base step."""


class CodecError(SimcampError, ValueError):
    pass


class NumericsError(SimcampError, ArithmeticError):
    pass


class SimulatorMemoryError(SimcampError, LookupError):
    """LOAD or FREE of a label that is not bound in simulator memory."""


class LabelError(SimcampError, ValueError):
    pass


class NormalizeError(SimcampError):
    pass


class SynthesisError(SimcampError):
    pass


class PropertyError(SimcampError, ValueError):
    pass


class FormatError(SimcampError, ValueError):
    """Malformed campaign, scenario, spec or property text."""

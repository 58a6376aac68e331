"""Exception hierarchy shared by every module."""


class ToricError(ValueError):
    """A domain error: the input violates a mathematical precondition."""


class FanError(ToricError):
    pass


class NotInDualError(ToricError):
    """A rational vector does not pair integrally with the support lattice."""


class MapError(ToricError):
    pass


class InputFormatError(ToricError):
    """Malformed input file or parameters (a usage problem, not a math one)."""


class ResourceLimitError(RuntimeError):
    """An enumeration hit its configured cap; the answer is unknown."""

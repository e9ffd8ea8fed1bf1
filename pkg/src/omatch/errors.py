class OmatchError(Exception):
    """Base class for every error raised by this package."""


class InvalidInstance(OmatchError):
    pass


class InvalidPoint(OmatchError):
    pass


class CapacityExceeded(OmatchError):
    pass


class OracleSizeError(OmatchError):
    pass


class InvalidPlan(OmatchError):
    pass


class IllegalMove(OmatchError):
    """An online algorithm picked a server that is already full."""


class DesyncError(OmatchError):
    """Game history does not match the requests an adversary emitted."""


class TracePlanMismatch(OmatchError):
    pass


class UnsupportedMetric(OmatchError):
    pass


class PreconditionError(OmatchError):
    pass


class UnknownScenario(OmatchError):
    pass


class UnknownAlgorithm(OmatchError):
    pass

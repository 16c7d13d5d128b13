"""Exception types raised across weylcap."""


class WeylcapError(ValueError):
    """Base class for all library errors."""


class InvalidDimensionError(WeylcapError):
    pass


class IndexOutOfRangeError(WeylcapError):
    pass


class DimensionMismatchError(WeylcapError):
    pass


class CompositeDimensionError(WeylcapError):
    """Raised where a construction only exists for prime dimensions."""


class ZeroIndexError(WeylcapError):
    """Raised when the identity index (0, 0) is passed where it is excluded."""


class InvalidDistributionError(WeylcapError):
    pass


class ParameterOutOfRangeError(WeylcapError):
    pass


class DuplicateIndexError(WeylcapError):
    pass


class MalformedPartitionError(WeylcapError):
    pass


class NotHermitianError(WeylcapError):
    pass


class NegativeEigenvalueError(WeylcapError):
    pass


class MalformedSpecError(WeylcapError):
    """A JSON channel description could not be parsed."""

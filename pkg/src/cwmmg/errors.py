"""Exception hierarchy shared by every module."""


class CwmmgError(Exception):
    """Base class for all domain errors raised by this package."""


class InvalidGameError(CwmmgError, ValueError):
    pass


class MalformedCoalitionError(CwmmgError, ValueError):
    pass


class InvalidPartitionError(CwmmgError, ValueError):
    pass


class PreconditionError(CwmmgError, ValueError):
    pass


class DimensionError(CwmmgError, ValueError):
    """Raised when a two-dimensional routine receives a game with k != 2."""


class OracleLimitError(CwmmgError, ValueError):
    pass


class ConsistencyError(CwmmgError, ValueError):
    """An auxiliary structure was built from a different game than the one supplied."""


class DegeneratePowerError(CwmmgError, ArithmeticError):
    pass


class ParameterError(CwmmgError, ValueError):
    pass


class GameFileError(CwmmgError, ValueError):
    pass

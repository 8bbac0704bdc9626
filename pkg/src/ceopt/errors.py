"""Exception types shared across the package.

The CLI maps these onto process exit codes, and the HTTP service maps
them onto structured error responses, so solver code should raise the
most specific type that applies.
"""


class CeoptError(Exception):
    """Base class for all package errors."""


class ParseError(CeoptError):
    """A game or solution file does not match the expected schema."""


class NonconvergenceError(CeoptError):
    """Column generation hit its iteration cap without a certificate."""


class PenaltyFailureError(NonconvergenceError):
    """Feasibility slacks could not be driven out after doubling the
    penalty the configured number of times."""


class ResourceLimitError(CeoptError):
    """An enumeration or LP exceeded its configured size cap."""


class UnsupportedStructureError(CeoptError):
    """A specialized oracle was asked to handle a game it does not
    support (e.g. the tree oracle on a cyclic polymatrix graph)."""


class UndefinedRatioError(CeoptError):
    """Price of anarchy requested but the worst-equilibrium welfare is
    not strictly positive."""

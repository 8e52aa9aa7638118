"""Exceptions raised by rankgap."""


class RankGapError(Exception):
    """Base class for rankgap errors."""


class InvalidParameterError(RankGapError, ValueError):
    """A precondition on an argument was violated."""


class BudgetExceededError(RankGapError):
    """A size or digit budget would be exceeded."""


class CertificationError(RankGapError):
    """An exact certificate failed to verify."""


class TensorFormatError(RankGapError, ValueError):
    """A tensor or decomposition document could not be parsed."""

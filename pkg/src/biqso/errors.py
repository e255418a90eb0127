"""Exception hierarchy.

Every domain error derives from :class:`QSOError`, which is a ``ValueError``
so that callers catching plain ``ValueError`` keep working.
"""

from __future__ import annotations


class QSOError(ValueError):
    """Base class for all domain errors raised by this package."""


class ShapeMismatch(QSOError):
    pass


class NegativeCoefficient(QSOError):
    def __init__(self, sex: str, index: tuple[int, int, int], value: float):
        self.sex = sex
        self.index = index
        self.value = value
        i, j, k = index
        super().__init__(f"negative {sex} coefficient p[{i},{j},{k}] = {value!r}")


class RowSumViolation(QSOError):
    def __init__(self, sex: str, pair: tuple[int, int], actual: float):
        self.sex = sex
        self.pair = pair
        self.actual = actual
        super().__init__(
            f"{sex} row for parent pair {pair} sums to {actual!r}, expected 1"
        )


class LengthMismatch(QSOError):
    pass


class NegativeEntry(QSOError):
    def __init__(self, sex: str, index: int, value: float):
        self.sex = sex
        self.index = index
        self.value = value
        super().__init__(f"negative {sex} entry at {index}: {value!r}")


class SumViolation(QSOError):
    def __init__(self, sex: str, actual: float):
        self.sex = sex
        self.actual = actual
        super().__init__(f"{sex} part sums to {actual!r}, expected 1")


class DimensionMismatch(QSOError):
    pass


class ModelFileError(QSOError):
    """Malformed model file. ``line`` is 1-based, or 0 for whole-file problems."""

    def __init__(self, line: int, message: str):
        self.line = line
        self.message = message
        super().__init__(f"line {line}: {message}" if line else message)


class BasisIndexError(QSOError, IndexError):
    pass


class UnequalColumnSums(QSOError):
    pass


class TooFewColumns(QSOError):
    pass


class InvalidParameters(QSOError):
    pass


class DomainError(QSOError):
    pass


class DriftError(QSOError):
    """Iterate left the product simplex by more than the drift limit."""


class UnknownBuiltin(QSOError):
    pass

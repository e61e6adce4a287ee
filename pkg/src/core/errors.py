"""
Domain exceptions.

Every failure the toolkit raises on purpose derives from FairnessError so that
the audit runner can turn it into a skipped test and the CLI can map it to
exit code 1. Subclasses keep their structured context as attributes.
"""

from __future__ import annotations


class FairnessError(Exception):
    """Root of all domain errors."""


# Dataset / schema

class InvalidSchemaError(FairnessError):
    pass


class MissingColumnError(FairnessError):
    def __init__(self, column: str) -> None:
        super().__init__(f"Column '{column}' declared in the schema is missing from the input")
        self.column = column


class MissingValueError(FairnessError):
    def __init__(self, row: int, column: str) -> None:
        super().__init__(f"Missing value at row {row}, column '{column}'")
        self.row = row
        self.column = column


class NonBinaryProtectedError(FairnessError):
    def __init__(self, column: str, levels: list[str]) -> None:
        super().__init__(
            f"Protected column '{column}' has {len(levels)} distinct values {levels}; "
            "audit multi-valued attributes one-vs-rest"
        )
        self.column = column
        self.levels = levels


class NonBinaryLabelError(FairnessError):
    def __init__(self, column: str, levels: list[str], role: str = "Label") -> None:
        super().__init__(f"{role} column '{column}' has {len(levels)} distinct values {levels}")
        self.role = role
        self.column = column
        self.levels = levels


class UnparsableCsvError(FairnessError):
    def __init__(self, path: str, reason: str) -> None:
        super().__init__(f"Cannot read '{path}' as UTF-8 CSV: {reason}")
        self.path = path


class UnparsableNumericError(FairnessError):
    def __init__(self, row: int, column: str, value: str) -> None:
        super().__init__(f"Cannot parse '{value}' as a number at row {row}, column '{column}'")
        self.row = row
        self.column = column
        self.value = value


class EmptyGroupError(FairnessError):
    pass


class DegenerateSplitError(FairnessError):
    pass


class UnknownColumnError(FairnessError):
    def __init__(self, column: str) -> None:
        super().__init__(f"Unknown column '{column}'")
        self.column = column


class NonNumericQuantileColumnError(FairnessError):
    def __init__(self, column: str) -> None:
        super().__init__(f"Quantile binning needs a numeric column, '{column}' is categorical")
        self.column = column


# Metrics

class AllStrataSkippedError(FairnessError):
    pass


class RankDeficientDesignError(FairnessError):
    pass


class InsufficientNeighborsError(FairnessError):
    pass


# Model

class SingleClassLabelError(FairnessError):
    pass


class NonFiniteLossError(FairnessError):
    def __init__(self, learning_rate: float, iteration: int) -> None:
        super().__init__(
            f"Loss became non-finite at iteration {iteration} "
            f"(learning rate {learning_rate}); lower the learning rate or check feature scales"
        )
        self.learning_rate = learning_rate
        self.iteration = iteration


class UnknownLevelError(FairnessError):
    def __init__(self, column: str, level: str) -> None:
        super().__init__(f"Level '{level}' of column '{column}' was not seen during training")
        self.column = column
        self.level = level


class MissingFeatureError(FairnessError):
    def __init__(self, column: str) -> None:
        super().__init__(f"Row is missing feature '{column}'")
        self.column = column


class NonPositiveCostError(FairnessError):
    pass


class UnsupportedModelVersionError(FairnessError):
    pass


# Mitigation

class EmptyCellError(FairnessError):
    def __init__(self, s: int, y: int) -> None:
        super().__init__(f"Cell (s={s}, y={y}) is empty")
        self.s = s
        self.y = y


class NotEnoughCandidatesError(FairnessError):
    pass


class MissingPositivesError(FairnessError):
    pass


# Generic

class InvalidParamError(FairnessError):
    pass


class InvalidConfigError(FairnessError):
    pass


class UnknownFormatError(FairnessError):
    pass


class InvalidReportError(FairnessError):
    pass

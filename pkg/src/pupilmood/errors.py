"""Exception taxonomy shared across the package.

Every error raised by library code derives from PupilmoodError so the CLI
can map failures onto its exit-code contract (2 config, 3 data, 4 internal).
"""


class PupilmoodError(Exception):
    """Base class for all package errors."""


class ConfigError(PupilmoodError):
    """Bad or inconsistent run configuration."""


class DataError(PupilmoodError):
    """Problem with input data (files, rows, values)."""


# -- validation ---------------------------------------------------------------

class ValidationError(DataError):
    """A candidate record failed a field-level check."""

    def __init__(self, code: str, field: str, message: str):
        super().__init__(f"{code}: {field}: {message}")
        self.code = code
        self.field = field


class MissingField(ValidationError):
    def __init__(self, field: str):
        super().__init__("MissingField", field, "required field absent or empty")


class NonFiniteValue(ValidationError):
    def __init__(self, field: str):
        super().__init__("NonFiniteValue", field, "value is NaN or infinite")


class RatioOutOfUnitInterval(ValidationError):
    def __init__(self, field: str, value: float):
        super().__init__("RatioOutOfUnitInterval", field, f"{value!r} not strictly inside (0, 1)")


class BadTimestamp(ValidationError):
    def __init__(self, field: str, raw: str):
        super().__init__("BadTimestamp", field, f"unparseable timestamp {raw!r}")


class ScoreOutOfRange(ValidationError):
    def __init__(self, field: str, value: float):
        super().__init__("ScoreOutOfRange", field, f"{value!r} outside [-4, 4]")


# -- ingest -------------------------------------------------------------------

class FileNotFound(DataError):
    def __init__(self, path):
        super().__init__(f"FileNotFound: {path}")
        self.path = str(path)


class BadHeader(DataError):
    def __init__(self, path, expected, got):
        super().__init__(f"BadHeader: {path}: expected columns {expected}, got {got}")


class EmptyFile(DataError):
    def __init__(self, path):
        super().__init__(f"EmptyFile: {path}")


class IoError(DataError):
    pass


# -- features / labeling ------------------------------------------------------

class AllCellsMissing(DataError):
    """Imputation was asked to fill a day with no observed cell at all."""


class NoReports(DataError):
    """Daily mood average requested for a day without reports."""


# -- learn --------------------------------------------------------------------

class LearnError(PupilmoodError):
    pass


class DegenerateLabels(LearnError):
    """Boosting requested but only one class is present."""


class EmptyMatrix(LearnError):
    pass


class DimensionMismatch(LearnError):
    def __init__(self, expected: int, got: int):
        super().__init__(f"DimensionMismatch: model expects {expected} features, got {got}")


# -- eval ---------------------------------------------------------------------

class TooFewGroups(PupilmoodError):
    def __init__(self, n_groups: int, k: int):
        super().__init__(f"TooFewGroups: {n_groups} participants cannot fill {k} folds")


class SingleClassDataset(PupilmoodError):
    """Evaluation requires both classes to be present overall."""


# -- simgen -------------------------------------------------------------------

class InvalidConfig(ConfigError):
    pass

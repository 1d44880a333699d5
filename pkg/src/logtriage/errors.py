"""Exception hierarchy shared by the library and the CLI.

Every error a user can trigger with bad data or bad parameters derives from
TriageError and maps to exit code 2; command-line misuse maps to 1; anything
else escaping to the top level is an internal error and maps to 3.
"""

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3


class TriageError(Exception):
    """Base class for data/validation errors (CLI exit code 2)."""


class UsageError(Exception):
    """Bad command-line invocation (CLI exit code 1)."""


class ValidationError(TriageError):
    """A configuration record violates its invariants."""


class ParameterError(TriageError):
    """A hyperparameter is out of range for the given data."""


class NotFoundError(TriageError):
    """A required path does not exist."""


class EmptyBundleError(TriageError):
    """Log selection matched no files; there is nothing to classify."""


class ReductionUndefinedError(TriageError):
    """Size reduction is undefined because the tree holds zero bytes."""


class EmptyVocabularyError(TriageError):
    """No token survived the document-frequency threshold."""


class ShapeError(TriageError):
    """Vector dimension does not match what a model was trained on."""


class DegenerateTrainingError(TriageError):
    """Training data cannot support the requested model (e.g. one class)."""


class TrainingDivergedError(TriageError):
    """Optimization produced a non-finite loss."""

    def __init__(self, epoch: int, message: str | None = None):
        self.epoch = epoch
        super().__init__(message or f"training loss became non-finite at epoch {epoch}")


class StratificationError(TriageError):
    """A class has too few instances for the requested fold count."""


class ArtifactCorruptError(TriageError):
    """A stored artifact failed its checksum or could not be parsed."""


class UnsupportedVersionError(TriageError):
    """A stored artifact declares a format version this build cannot read."""

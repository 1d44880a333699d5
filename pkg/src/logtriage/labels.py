"""The failure taxonomy: five triage categories for a failed CI test run.

The class decides which team receives the report, so the set is closed and
carries a total (alphabetical) order used everywhere determinism matters:
report rows, one-vs-rest head order, argmax tie-breaking.
"""

import enum
import functools

from .errors import ValidationError


@functools.total_ordering
class FailureClass(enum.Enum):
    """One of the five triage categories for a failed test run."""

    ARTIFACTORY = "artifactory"
    CICD_TEST = "cicd_test"
    CLUSTER = "cluster"
    ENVIRONMENT = "environment"
    MICROSERVICE = "microservice"

    def __str__(self) -> str:
        return self.value

    def __lt__(self, other: "FailureClass") -> bool:
        if not isinstance(other, FailureClass):
            return NotImplemented
        return self.value < other.value

    @property
    def ordinal(self) -> int:
        """Position in the alphabetical order, 0-based."""
        return ALL_CLASSES.index(self)

    @classmethod
    def from_name(cls, name: str) -> "FailureClass":
        try:
            return cls(name.strip().lower())
        except ValueError:
            known = ", ".join(c.value for c in ALL_CLASSES)
            raise ValidationError(f"unknown failure class {name!r}; expected one of: {known}") from None


#: All five classes in their total (alphabetical) order.
ALL_CLASSES: tuple[FailureClass, ...] = tuple(sorted(FailureClass, key=lambda c: c.value))

"""Dump-tree walking and the expert data-selection rule.

A cluster dump is mostly ballast; the failure signal lives in the per-pod
container logs and describe outputs. Selection is purely path-based: a file
is kept when a ``pods`` segment is followed, at any depth, by a
``containers`` or ``describe`` segment. Both singular and plural spellings
are accepted because dump tools disagree.

Patterns use ``/``-separated segments where ``*`` matches within one segment
and ``**`` spans one or more segments (a trailing ``**`` must cover the file
name itself). A pattern may match anywhere below the dump root.
"""

import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .errors import EmptyBundleError, NotFoundError, ReductionUndefinedError, ValidationError
from .labels import FailureClass

__all__ = [
    "SelectionRules",
    "BundleFile",
    "LogBundle",
    "ReductionStats",
    "DEFAULT_PATTERNS",
    "scan_dump",
    "compute_reduction",
]

#: Spellings vary between dump tools; all combinations are selected.
DEFAULT_PATTERNS: tuple[str, ...] = (
    "pods/**/containers/**",
    "pods/**/container/**",
    "pods/**/describe/**",
    "pod/**/containers/**",
    "pod/**/container/**",
    "pod/**/describe/**",
)

DEFAULT_MAX_FILE_BYTES = 64 * 1024 * 1024


def _compile_pattern(pattern: str) -> re.Pattern:
    segments = pattern.strip("/").split("/")
    if not segments or segments == [""]:
        raise ValidationError(f"empty selection pattern: {pattern!r}")
    parts: list[str] = []
    for i, seg in enumerate(segments):
        last = i == len(segments) - 1
        if seg == "**":
            parts.append(r".+" if last else r"(?:[^/]+/)*")
            continue
        body = re.escape(seg).replace(r"\*", "[^/]*").replace(r"\?", "[^/]")
        parts.append(body if last else body + "/")
    return re.compile(r"(?:^|/)" + "".join(parts) + r"$")


@dataclass(frozen=True)
class SelectionRules:
    """Path-only selection: no file content is inspected."""

    include_patterns: tuple[str, ...] = DEFAULT_PATTERNS
    max_file_bytes: int = DEFAULT_MAX_FILE_BYTES
    _compiled: tuple[re.Pattern, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        patterns = tuple(self.include_patterns)
        if not patterns:
            raise ValidationError("selection rules need at least one include pattern")
        if self.max_file_bytes is not None and self.max_file_bytes <= 0:
            raise ValidationError("max_file_bytes must be positive when set")
        object.__setattr__(self, "include_patterns", patterns)
        object.__setattr__(self, "_compiled", tuple(_compile_pattern(p) for p in patterns))

    def matches(self, rel_path: str) -> bool:
        return any(rx.search(rel_path) for rx in self._compiled)


@dataclass(frozen=True)
class BundleFile:
    path: str  # relative, '/'-separated
    size: int  # on-disk bytes, before any truncation
    text: str
    truncated: bool = False


@dataclass(frozen=True)
class LogBundle:
    root: Path
    files: tuple[BundleFile, ...]
    label: FailureClass | None = None


@dataclass(frozen=True)
class ReductionStats:
    total_bytes: int
    selected_bytes: int

    @property
    def reduction(self) -> Fraction:
        return 1 - Fraction(self.selected_bytes, self.total_bytes)

    @property
    def reduction_rounded(self) -> float:
        """Exact rational rounding to the 4 decimals used in reports."""
        return float(round(self.reduction, 4))


def _walk_files(root: Path):
    """Yield (relative posix path, absolute path) for regular files, sorted.

    Symbolic links are never followed; adversarial dumps can contain cycles.
    """
    for dirpath, dirnames, filenames in os.walk(root, followlinks=False):
        dirnames.sort()
        for name in sorted(filenames):
            abspath = Path(dirpath) / name
            if abspath.is_symlink() or not abspath.is_file():
                continue
            yield abspath.relative_to(root).as_posix(), abspath


def scan_dump(root: str | os.PathLike, rules: SelectionRules | None = None,
              label: FailureClass | None = None) -> LogBundle:
    """Select the informative files under a dump root.

    Contents are decoded as UTF-8 with invalid sequences replaced, so the
    bundle is always valid text. Files over the size cap keep their head
    (startup context) and carry a truncation flag.
    """
    rules = rules or SelectionRules()
    root = Path(root)
    if not root.exists():
        raise NotFoundError(f"dump root does not exist: {root}")

    files: list[BundleFile] = []
    for rel, abspath in _walk_files(root):
        if not rules.matches(rel):
            continue
        size = abspath.stat().st_size
        cap = rules.max_file_bytes
        truncated = cap is not None and size > cap
        with open(abspath, "rb") as fh:
            raw = fh.read(cap) if truncated else fh.read()
        files.append(BundleFile(rel, size, raw.decode("utf-8", errors="replace"), truncated))

    if not files:
        raise EmptyBundleError(
            f"no files under {root} match the selection patterns; nothing to classify"
        )
    files.sort(key=lambda f: f.path)
    return LogBundle(root=root, files=tuple(files), label=label)


def compute_reduction(root: str | os.PathLike, bundle: LogBundle) -> ReductionStats:
    """Size-reduction statistic of selection: 1 - selected/total, exact."""
    root = Path(root)
    if not root.exists():
        raise NotFoundError(f"dump root does not exist: {root}")
    total = sum(abspath.stat().st_size for _, abspath in _walk_files(root))
    if total == 0:
        raise ReductionUndefinedError(f"no bytes under {root}; reduction is undefined")
    selected = sum(f.size for f in bundle.files)
    return ReductionStats(total_bytes=total, selected_bytes=selected)

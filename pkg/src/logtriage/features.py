"""TF-IDF vocabulary and sparse feature vectors.

The vocabulary is built once from training documents and then frozen: column
order is the lexicographic term order (a pure function of the term set, so
document order never leaks into feature layout), and the idf weight uses the
smoothed form ln((1 + n) / (1 + df)) + 1, which is always >= 1 and never
divides by zero on unseen terms.

A document vectorizes to raw weights count(term) * idf(term), L2-normalized.
Tokens outside the vocabulary are ignored; a document with no in-vocabulary
token yields the empty vector (its dimension is still the vocabulary size).
"""

import hashlib
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ArtifactCorruptError, EmptyVocabularyError, UnsupportedVersionError, ValidationError
from .labels import FailureClass
from .preprocess import TokenDocument

__all__ = [
    "Vocabulary",
    "SparseVector",
    "Dataset",
    "build_vocabulary",
    "vectorize",
    "save_vocabulary",
    "load_vocabulary",
]

_VOCAB_FORMAT = "triage-vocab/1"


@dataclass(frozen=True)
class SparseVector:
    """Sorted (column, weight) pairs; empty means all-out-of-vocabulary."""

    indices: np.ndarray  # int32, strictly increasing
    values: np.ndarray  # float64, all > 0
    dimension: int

    def __post_init__(self):
        object.__setattr__(self, "indices", np.asarray(self.indices, dtype=np.int32))
        object.__setattr__(self, "values", np.asarray(self.values, dtype=np.float64))

    @property
    def nnz(self) -> int:
        return len(self.indices)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(self.values**2)))

    def dot(self, other: "SparseVector") -> float:
        i = j = 0
        total = 0.0
        si, sv, oi, ov = self.indices, self.values, other.indices, other.values
        while i < len(si) and j < len(oi):
            if si[i] == oi[j]:
                total += sv[i] * ov[j]
                i += 1
                j += 1
            elif si[i] < oi[j]:
                i += 1
            else:
                j += 1
        return total

    def to_dense(self) -> np.ndarray:
        dense = np.zeros(self.dimension, dtype=np.float64)
        dense[self.indices] = self.values
        return dense


@dataclass(frozen=True)
class Vocabulary:
    """Frozen term -> (column, idf) mapping from a fitting document set."""

    terms: tuple[str, ...]
    idf: np.ndarray  # float64, aligned with terms
    doc_count: int
    min_df: int
    index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "idf", np.asarray(self.idf, dtype=np.float64))
        object.__setattr__(self, "index", {t: i for i, t in enumerate(self.terms)})

    def __len__(self) -> int:
        return len(self.terms)

    def records(self) -> list[str]:
        """Canonical per-term records; idf carries 12 significant digits."""
        return [f"{t}\t{i}\t{self.idf[i]:.11e}" for i, t in enumerate(self.terms)]

    def checksum(self) -> str:
        body = "\n".join(self.records()).encode("utf-8")
        return hashlib.sha256(body).hexdigest()


def build_vocabulary(docs: list[TokenDocument], min_df: int = 2) -> Vocabulary:
    """Terms occurring in at least min_df documents, with smoothed idf."""
    if not docs:
        raise ValidationError("cannot build a vocabulary from zero documents")
    if min_df < 1:
        raise ValidationError(f"min_df must be >= 1, got {min_df}")
    df: Counter[str] = Counter()
    for doc in docs:
        df.update(set(doc.tokens))
    terms = tuple(sorted(t for t, c in df.items() if c >= min_df))
    if not terms:
        raise EmptyVocabularyError(
            f"no token appears in at least {min_df} of the {len(docs)} documents"
        )
    n = len(docs)
    idf = np.array([math.log((1 + n) / (1 + df[t])) + 1.0 for t in terms], dtype=np.float64)
    return Vocabulary(terms=terms, idf=idf, doc_count=n, min_df=min_df)


def vectorize(vocab: Vocabulary, doc: TokenDocument) -> SparseVector:
    """Count * idf per in-vocabulary term, L2-normalized; OOV terms ignored."""
    counts = Counter(doc.tokens)
    cols = []
    weights = []
    for term, count in counts.items():
        col = vocab.index.get(term)
        if col is not None:
            cols.append(col)
            weights.append(count * vocab.idf[col])
    if not cols:
        return SparseVector(np.empty(0, np.int32), np.empty(0, np.float64), len(vocab))
    order = np.argsort(cols)
    indices = np.asarray(cols, dtype=np.int32)[order]
    values = np.asarray(weights, dtype=np.float64)[order]
    values /= np.sqrt(np.sum(values**2))
    return SparseVector(indices=indices, values=values, dimension=len(vocab))


@dataclass(frozen=True)
class Dataset:
    """Aligned vectors and labels, ready for fitting."""

    vectors: tuple[SparseVector, ...]
    labels: tuple[FailureClass, ...]
    vocab_checksum: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "vectors", tuple(self.vectors))
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(self.vectors) != len(self.labels):
            raise ValidationError(
                f"{len(self.vectors)} vectors but {len(self.labels)} labels"
            )

    def __len__(self) -> int:
        return len(self.vectors)

    @property
    def dimension(self) -> int:
        return self.vectors[0].dimension if self.vectors else 0

    def to_dense(self) -> np.ndarray:
        dense = np.zeros((len(self.vectors), self.dimension), dtype=np.float64)
        for row, vec in enumerate(self.vectors):
            dense[row, vec.indices] = vec.values
        return dense


def save_vocabulary(vocab: Vocabulary, path: str | Path) -> str:
    """Write the versioned vocabulary file; returns its checksum."""
    checksum = vocab.checksum()
    header = (
        f"{_VOCAB_FORMAT} n={vocab.doc_count} min_df={vocab.min_df} "
        f"terms={len(vocab)} sha256={checksum}"
    )
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(header + "\n")
        for record in vocab.records():
            fh.write(record + "\n")
    return checksum


def load_vocabulary(path: str | Path) -> Vocabulary:
    """Read a vocabulary file, verifying version and checksum."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        body = fh.read()
    fields = header.split()
    if not fields or "/" not in fields[0]:
        raise ArtifactCorruptError(f"{path}: not a vocabulary file")
    if fields[0] != _VOCAB_FORMAT:
        raise UnsupportedVersionError(
            f"{path}: format {fields[0]!r} is not supported (expected {_VOCAB_FORMAT})"
        )
    try:
        meta = dict(f.split("=", 1) for f in fields[1:])
        doc_count = int(meta["n"])
        min_df = int(meta["min_df"])
        want_terms = int(meta["terms"])
        want_sha = meta["sha256"]
    except (KeyError, ValueError) as exc:
        raise ArtifactCorruptError(f"{path}: malformed vocabulary header") from exc

    lines = [ln for ln in body.split("\n") if ln]
    got_sha = hashlib.sha256("\n".join(lines).encode("utf-8")).hexdigest()
    if got_sha != want_sha or len(lines) != want_terms:
        raise ArtifactCorruptError(f"{path}: vocabulary checksum mismatch")
    terms = []
    idf = []
    try:
        for i, line in enumerate(lines):
            term, col, weight = line.split("\t")
            if int(col) != i:
                raise ArtifactCorruptError(f"{path}: column ids out of order")
            terms.append(term)
            idf.append(float(weight))
    except ValueError as exc:
        raise ArtifactCorruptError(f"{path}: malformed vocabulary record") from exc
    return Vocabulary(terms=tuple(terms), idf=np.array(idf), doc_count=doc_count, min_df=min_df)

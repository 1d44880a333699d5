"""Log text cleaning and tokenization.

Raw dump text is noisy in ways that carry no failure signal: timestamps, IP
addresses, container/pod hash ids, line counters, and punctuation. The
cleaner scrubs exactly those, lowercases everything, and leaves the rest
alone - no stopword lists and no stemming, because log identifiers like
"requesthandlerclass" are not dictionary words and must survive verbatim.

Rule order is fixed and documented on DEFAULT_RULES. The full rule list is
re-applied until the text stops changing, so cleaning is idempotent even
when an early rule exposes new matches for a later one (e.g. punctuation
removal promoting a digit run to the start of the text).

Tokens keep the characters ``_ . / -`` because image paths, file paths and
dotted identifiers are class signal; everything else becomes a space.
"""

import re
from dataclasses import dataclass, field
from typing import Callable

from .errors import EmptyBundleError
from .ingest import LogBundle

__all__ = [
    "CleaningRule",
    "CleaningConfig",
    "TokenDocument",
    "DEFAULT_RULES",
    "default_config",
    "clean_text",
    "tokenize",
    "preprocess_bundle",
]

Replacement = str | Callable[[re.Match], str]


@dataclass(frozen=True)
class CleaningRule:
    name: str
    pattern: re.Pattern
    replacement: Replacement

    def apply(self, text: str) -> str:
        return self.pattern.sub(self.replacement, text)


def _ipv6_guard(match: re.Match) -> str:
    # plain digit groups like "10:23:45" are not addresses; require hex
    # letters or a "::" before scrubbing
    text = match.group()
    return "" if re.search(r"[a-f]|::", text) else text


# Patterns operate on already-lowercased text (lowercasing is rule 1).
_ISO_TS = (
    r"\b\d{4}-\d{2}-\d{2}[t ]\d{2}:\d{2}:\d{2}(?:\.\d+)?(?:z|[+-]\d{2}:?\d{2})?"
)
_KLOG_TS = r"\b[iwef]?\d{4} \d{2}:\d{2}:\d{2}(?:\.\d+)?\b"
_IPV4 = r"\b\d{1,3}(?:\.\d{1,3}){3}\b"
_IPV6 = (
    r"(?<![\w.])(?:"
    r"(?:[0-9a-f]{1,4}:){1,7}:(?:[0-9a-f]{1,4}(?::[0-9a-f]{1,4})*)?"  # a::b, a::
    r"|(?:[0-9a-f]{1,4}:){2,7}[0-9a-f]{1,4}"  # full form
    r"|::(?:[0-9a-f]{1,4}(?::[0-9a-f]{1,4})*)?"  # ::b, ::
    r")(?![\w.])"
)
_UUID = r"\b[0-9a-f]{8}-[0-9a-f]{4}-[0-9a-f]{4}-[0-9a-f]{4}-[0-9a-f]{12}\b"
_HEX_RUN = r"\b[0-9a-f]{8,}\b"
_LINE_NUMBER = r"(?m)^\s*\d+[.:]?(?=\s|$)"
_PUNCT = r"[^a-z0-9_./\-]+"

#: The cleaning pipeline, in application order.
DEFAULT_RULES: tuple[CleaningRule, ...] = (
    CleaningRule("timestamp_iso8601", re.compile(_ISO_TS), ""),
    CleaningRule("timestamp_klog", re.compile(_KLOG_TS), ""),
    CleaningRule("ipv4", re.compile(_IPV4), ""),
    CleaningRule("ipv6", re.compile(_IPV6), _ipv6_guard),
    CleaningRule("uuid", re.compile(_UUID), ""),
    CleaningRule("hex_run", re.compile(_HEX_RUN), ""),
    CleaningRule("line_number", re.compile(_LINE_NUMBER), ""),
    CleaningRule("punctuation", re.compile(_PUNCT), " "),
    CleaningRule("whitespace", re.compile(r"\s+"), " "),
)


@dataclass(frozen=True)
class CleaningConfig:
    """Ordered scrub rules; lowercase always runs first, trim always last."""

    rules: tuple[CleaningRule, ...] = DEFAULT_RULES
    max_passes: int = 8


def default_config() -> CleaningConfig:
    return CleaningConfig()


@dataclass(frozen=True)
class TokenDocument:
    """Ordered lowercase token sequence ready for feature extraction."""

    tokens: tuple[str, ...]
    source_bundle: str = ""

    @property
    def token_count(self) -> int:
        return len(self.tokens)


def _one_pass(text: str, config: CleaningConfig) -> str:
    # casefold, not lower: it collapses case variants that round-trip
    # through upper() differently (e.g. the sharp s), keeping cleaning
    # case-insensitive for every codepoint except locale-dependent ones
    out = text.casefold()
    for rule in config.rules:
        out = rule.apply(out)
    return out.strip()


def clean_text(raw: str, config: CleaningConfig | None = None) -> str:
    """Scrub unique elements from log text; total function, idempotent."""
    config = config or default_config()
    text = raw
    for _ in range(config.max_passes):
        cleaned = _one_pass(text, config)
        if cleaned == text:
            return cleaned
        text = cleaned
    return text


_TOKEN_KEEP = re.compile(r"[a-z]")


def tokenize(cleaned: str) -> TokenDocument:
    """Split cleaned text on spaces, dropping short and letterless tokens."""
    tokens = tuple(
        t for t in cleaned.split(" ") if len(t) >= 2 and _TOKEN_KEEP.search(t)
    )
    return TokenDocument(tokens=tokens)


def preprocess_bundle(bundle: LogBundle, config: CleaningConfig | None = None) -> TokenDocument:
    """Concatenate a bundle's files in path order, then clean and tokenize."""
    if not bundle.files:
        raise EmptyBundleError(f"bundle at {bundle.root} holds no files to preprocess")
    joined = " ".join(f.text for f in bundle.files)
    doc = tokenize(clean_text(joined, config))
    return TokenDocument(tokens=doc.tokens, source_bundle=str(bundle.root))

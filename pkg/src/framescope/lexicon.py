"""Moral-frame word counting over dictionary files with prefix wildcards.

Dictionary files follow the common word-count ``.dic`` layout:

    %
    1<TAB>care
    ...
    11<TAB>morality
    %
    kill*<TAB>2
    fair<TAB>3

The header block, delimited by two lines containing exactly ``%``, declares
numeric ids for the eleven canonical frame names (case-insensitive). Each
body line is a pattern followed by one or more declared ids; a single
trailing ``*`` makes the pattern match any token it prefixes. Lines starting
with ``#`` and blank lines are ignored everywhere.

Scoring assigns each token at most one winning entry: an exact entry beats
any wildcard, and among matching wildcards the longest pattern wins. The
winning entry contributes one count to every category it declares.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import (
    BadWildcard,
    DuplicatePattern,
    EmptyDocument,
    InvalidEncoding,
    MalformedEntry,
    MalformedHeader,
    UnknownCategoryName,
)
from .frames import CANONICAL_TAGS, FrameTag

N_CATEGORIES = len(CANONICAL_TAGS)

#: A tag is suggested only when its raw count reaches this floor...
SUGGEST_MIN_COUNT = 2
#: ...and its rate per 1000 tokens reaches the (configurable) threshold.
DEFAULT_SUGGEST_THRESHOLD = 1.0

_NAME_TO_TAG = {t.value: t for t in CANONICAL_TAGS}


@dataclass(frozen=True)
class LexiconEntry:
    pattern: str
    wildcard: bool
    categories: frozenset[FrameTag]


@dataclass(frozen=True)
class Lexicon:
    """Parsed dictionary with entry order preserved. Immutable."""

    entries: tuple[LexiconEntry, ...]
    source_name: str = ""
    _exact: dict[str, LexiconEntry] = field(init=False, repr=False, compare=False)
    _prefix: dict[str, LexiconEntry] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        exact = {}
        prefix = {}
        for entry in self.entries:
            (prefix if entry.wildcard else exact)[entry.pattern] = entry
        object.__setattr__(self, "_exact", exact)
        object.__setattr__(self, "_prefix", prefix)

    def __len__(self) -> int:
        return len(self.entries)

    def lookup(self, token: str) -> LexiconEntry | None:
        """Winning entry for a token, or None.

        Exact entries take precedence; among wildcard entries the longest
        matching prefix wins. Uniqueness of (pattern, wildcard) keys makes
        the winner unambiguous.
        """
        entry = self._exact.get(token)
        if entry is not None:
            return entry
        for length in range(len(token), 0, -1):
            entry = self._prefix.get(token[:length])
            if entry is not None:
                return entry
        return None

    def dumps(self) -> str:
        """Serialize back to the dictionary file format (canonical ids 1-11)."""
        lines = ["%"]
        lines += [f"{tag.index + 1}\t{tag.value}" for tag in CANONICAL_TAGS]
        lines.append("%")
        for entry in self.entries:
            ids = "\t".join(
                str(tag.index + 1)
                for tag in sorted(entry.categories, key=lambda t: t.index)
            )
            star = "*" if entry.wildcard else ""
            lines.append(f"{entry.pattern}{star}\t{ids}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class FrameVector:
    """Per-document match counts in canonical tag order, plus the token count."""

    counts: tuple[int, ...]
    token_count: int

    def __post_init__(self):
        if len(self.counts) != N_CATEGORIES:
            raise ValueError(f"expected {N_CATEGORIES} counts, got {len(self.counts)}")
        if any(c < 0 for c in self.counts) or self.token_count < 0:
            raise ValueError("counts and token_count must be non-negative")

    def __add__(self, other: "FrameVector") -> "FrameVector":
        return FrameVector(
            tuple(a + b for a, b in zip(self.counts, other.counts)),
            self.token_count + other.token_count,
        )

    def count(self, tag: FrameTag) -> int:
        return self.counts[tag.index]

    def frequencies(self) -> tuple[float, ...]:
        """Counts divided by token count; defined only for non-empty documents."""
        if self.token_count == 0:
            raise EmptyDocument("frequencies are undefined for an empty document")
        return tuple(c / self.token_count for c in self.counts)

    def as_dict(self) -> dict:
        return {
            "counts": {tag.value: self.counts[tag.index] for tag in CANONICAL_TAGS},
            "token_count": self.token_count,
        }


@dataclass(frozen=True)
class SuggestedTags:
    """Auto-suggested frame tags plus the per-tag rates behind the decision."""

    tags: frozenset[FrameTag]
    rates: dict[FrameTag, float]

    def as_dict(self) -> dict:
        return {
            "tags": [t.value for t in sorted(self.tags, key=lambda t: t.index)],
            "rates": {tag.value: self.rates[tag] for tag in CANONICAL_TAGS},
        }


def no_suggestions() -> SuggestedTags:
    return SuggestedTags(frozenset(), {tag: 0.0 for tag in CANONICAL_TAGS})


def tokenize(text: str) -> list[str]:
    """Split text into lowercase tokens.

    Tokens are maximal runs of Unicode alphabetic characters, lowercased
    after NFC normalization; every other character (digits, punctuation,
    apostrophes, whitespace) separates tokens.
    """
    tokens: list[str] = []
    run: list[str] = []
    for ch in unicodedata.normalize("NFC", text):
        if ch.isalpha():
            run.append(ch)
        elif run:
            tokens.append("".join(run).lower())
            run.clear()
    if run:
        tokens.append("".join(run).lower())
    return tokens


def parse_lexicon(data: bytes | str, source_name: str = "") -> Lexicon:
    """Parse a dictionary file. See the module docstring for the format."""
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise InvalidEncoding(f"lexicon is not valid UTF-8: {exc}") from None
    else:
        text = data

    STATE_PREAMBLE, STATE_HEADER, STATE_BODY = range(3)
    state = STATE_PREAMBLE
    id_to_tag: dict[int, FrameTag] = {}
    entries: list[LexiconEntry] = []
    seen: set[tuple[str, bool]] = set()

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line == "%":
            if state == STATE_PREAMBLE:
                state = STATE_HEADER
            elif state == STATE_HEADER:
                state = STATE_BODY
            else:
                raise MalformedEntry(f"line {lineno}: unexpected '%' in body")
            continue

        if state == STATE_PREAMBLE:
            raise MalformedHeader(f"line {lineno}: content before the '%' header delimiter")

        if state == STATE_HEADER:
            parts = line.split()
            if len(parts) != 2:
                raise MalformedHeader(f"line {lineno}: expected '<id><TAB><name>', got {raw!r}")
            try:
                cat_id = int(parts[0])
            except ValueError:
                raise MalformedHeader(f"line {lineno}: category id {parts[0]!r} is not an integer") from None
            name = parts[1].lower()
            if name not in _NAME_TO_TAG:
                raise UnknownCategoryName(f"line {lineno}: unknown category name {parts[1]!r}")
            if cat_id in id_to_tag:
                raise MalformedHeader(f"line {lineno}: category id {cat_id} declared twice")
            id_to_tag[cat_id] = _NAME_TO_TAG[name]
            continue

        # body
        parts = line.split()
        if len(parts) < 2:
            raise MalformedEntry(f"line {lineno}: expected '<pattern> <id>...', got {raw!r}")
        pattern = unicodedata.normalize("NFC", parts[0]).lower()
        wildcard = pattern.endswith("*")
        if wildcard:
            pattern = pattern[:-1]
        if "*" in pattern:
            raise BadWildcard(f"line {lineno}: '*' may only appear as the final character")
        if not pattern:
            raise BadWildcard(f"line {lineno}: bare '*' is not a valid pattern")
        key = (pattern, wildcard)
        if key in seen:
            raise DuplicatePattern(f"line {lineno}: duplicate pattern {parts[0]!r}")
        seen.add(key)
        categories = set()
        for part in parts[1:]:
            try:
                cat_id = int(part)
            except ValueError:
                raise MalformedEntry(f"line {lineno}: category id {part!r} is not an integer") from None
            if cat_id not in id_to_tag:
                raise MalformedEntry(f"line {lineno}: category id {cat_id} is not declared in the header")
            categories.add(id_to_tag[cat_id])
        entries.append(LexiconEntry(pattern, wildcard, frozenset(categories)))

    if state != STATE_BODY:
        raise MalformedHeader("header block is missing its '%' delimiters")
    return Lexicon(tuple(entries), source_name)


def load_lexicon(path: str | Path) -> Lexicon:
    path = Path(path)
    return parse_lexicon(path.read_bytes(), source_name=path.name)


def score(text: str, lexicon: Lexicon) -> FrameVector:
    """Count frame-category matches over the tokens of ``text``.

    Each token contributes through at most one winning lexicon entry
    (see :meth:`Lexicon.lookup`), which increments every category it
    declares. Pure and deterministic.
    """
    counts = [0] * N_CATEGORIES
    tokens = tokenize(text)
    for token in tokens:
        entry = lexicon.lookup(token)
        if entry is not None:
            for tag in entry.categories:
                counts[tag.index] += 1
    return FrameVector(tuple(counts), len(tokens))


def suggest_tags(
    vector: FrameVector, threshold: float = DEFAULT_SUGGEST_THRESHOLD
) -> SuggestedTags:
    """Suggest tags whose count is >= 2 and whose rate per 1000 tokens is >= threshold.

    Rates are reported for all eleven tags regardless of suggestion.
    """
    if vector.token_count == 0:
        raise EmptyDocument("cannot suggest tags for an empty document")
    rates = {
        tag: 1000.0 * vector.counts[tag.index] / vector.token_count
        for tag in CANONICAL_TAGS
    }
    tags = frozenset(
        tag
        for tag in CANONICAL_TAGS
        if vector.counts[tag.index] >= SUGGEST_MIN_COUNT and rates[tag] >= threshold
    )
    return SuggestedTags(tags, rates)


def stub_lexicon_path() -> Path:
    """Path to the compact dictionary shipped for tests and demos."""
    return Path(str(resources.files("framescope") / "data" / "mft_stub.dic"))


def load_stub_lexicon() -> Lexicon:
    return load_lexicon(stub_lexicon_path())

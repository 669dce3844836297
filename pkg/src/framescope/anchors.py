"""Quote-with-context anchors that relocate highlights after text drift.

An anchor stores the highlighted quote, up to 32 characters of context on
each side, and the original character offsets. Offsets are Unicode
code-point indices. Resolution tries the stored offsets first, then
searches for the quote and scores candidates by how much surrounding
context still matches.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import EmptySpan, OutOfBounds

CONTEXT_WINDOW = 32


class AnchorStatus(enum.Enum):
    EXACT = "exact"
    RELOCATED = "relocated"
    ORPHANED = "orphaned"


@dataclass(frozen=True)
class TextAnchor:
    exact: str
    prefix: str
    suffix: str
    start: int
    end: int

    def as_dict(self) -> dict:
        return {
            "exact": self.exact,
            "prefix": self.prefix,
            "suffix": self.suffix,
            "start": self.start,
            "end": self.end,
        }


@dataclass(frozen=True)
class AnchorResolution:
    status: AnchorStatus
    anchor: TextAnchor

    @property
    def renderable(self) -> bool:
        return self.status is not AnchorStatus.ORPHANED


def create_anchor(article_text: str, start: int, end: int) -> TextAnchor:
    """Anchor the span [start, end) of ``article_text``.

    Context windows are shorter at document edges.
    """
    if start < 0 or end > len(article_text):
        raise OutOfBounds(
            f"span ({start}, {end}) outside document of length {len(article_text)}"
        )
    if start >= end:
        raise EmptySpan(f"span ({start}, {end}) selects no text")
    return TextAnchor(
        exact=article_text[start:end],
        prefix=article_text[max(0, start - CONTEXT_WINDOW):start],
        suffix=article_text[end:end + CONTEXT_WINDOW],
        start=start,
        end=end,
    )


def resolve(anchor: TextAnchor, article_text: str) -> AnchorResolution:
    """Locate an anchor in (possibly edited) article text.

    Returns status ``exact`` when the stored offsets still hold, ``relocated``
    with updated offsets when the quote is found elsewhere (best context
    match wins, ties broken by smallest offset), and ``orphaned`` when the
    quote no longer occurs. Orphaned anchors keep their stored offsets.
    """
    if article_text[anchor.start:anchor.end] == anchor.exact:
        return AnchorResolution(AnchorStatus.EXACT, anchor)

    best_start = -1
    best_score = -1
    for pos in _occurrences(article_text, anchor.exact):
        found_prefix = article_text[max(0, pos - CONTEXT_WINDOW):pos]
        found_suffix = article_text[pos + len(anchor.exact):pos + len(anchor.exact) + CONTEXT_WINDOW]
        score = _common_suffix_len(anchor.prefix, found_prefix) + _common_prefix_len(
            anchor.suffix, found_suffix
        )
        if score > best_score:
            best_score = score
            best_start = pos

    if best_start < 0:
        return AnchorResolution(AnchorStatus.ORPHANED, anchor)

    relocated = TextAnchor(
        exact=anchor.exact,
        prefix=anchor.prefix,
        suffix=anchor.suffix,
        start=best_start,
        end=best_start + len(anchor.exact),
    )
    return AnchorResolution(AnchorStatus.RELOCATED, relocated)


def _occurrences(text: str, needle: str):
    """All (possibly overlapping) start offsets of needle, ascending."""
    pos = text.find(needle)
    while pos != -1:
        yield pos
        pos = text.find(needle, pos + 1)


def _common_prefix_len(a: str, b: str) -> int:
    n = 0
    for x, y in zip(a, b):
        if x != y:
            break
        n += 1
    return n


def _common_suffix_len(a: str, b: str) -> int:
    n = 0
    for x, y in zip(reversed(a), reversed(b)):
        if x != y:
            break
        n += 1
    return n

"""The eleven moral-frame categories and their canonical ordering."""

from __future__ import annotations

import enum

from .errors import UnknownFrame


class Foundation(enum.Enum):
    CARE = "care"
    FAIRNESS = "fairness"
    LOYALTY = "loyalty"
    AUTHORITY = "authority"
    SANCTITY = "sanctity"
    MORALITY = "morality"


class Polarity(enum.Enum):
    VIRTUE = "virtue"
    VICE = "vice"
    GENERAL = "general"


class FrameTag(enum.Enum):
    """One of the eleven frame categories.

    Five foundations each split into a virtue and a vice expression, plus a
    general appeal to morality. Definition order is the canonical order and
    fixes each tag's index (0-10); vice expressions carry their own display
    names (harm, cheating, betrayal, subversion, degradation).
    """

    CARE = "care"
    HARM = "harm"
    FAIRNESS = "fairness"
    CHEATING = "cheating"
    LOYALTY = "loyalty"
    BETRAYAL = "betrayal"
    AUTHORITY = "authority"
    SUBVERSION = "subversion"
    SANCTITY = "sanctity"
    DEGRADATION = "degradation"
    MORALITY = "morality"

    @property
    def index(self) -> int:
        """Position in the canonical ordering, 0-10."""
        return _INDEX[self]

    @property
    def foundation(self) -> Foundation:
        if self is FrameTag.MORALITY:
            return Foundation.MORALITY
        return _FOUNDATIONS[self.index // 2]

    @property
    def polarity(self) -> Polarity:
        if self is FrameTag.MORALITY:
            return Polarity.GENERAL
        return Polarity.VIRTUE if self.index % 2 == 0 else Polarity.VICE

    @classmethod
    def from_name(cls, name: str) -> "FrameTag":
        """Look up a tag by its display name, case-insensitively."""
        try:
            return cls(name.strip().lower())
        except ValueError:
            raise UnknownFrame(f"unknown frame tag {name!r}") from None


CANONICAL_TAGS: tuple[FrameTag, ...] = tuple(FrameTag)

_INDEX = {tag: i for i, tag in enumerate(CANONICAL_TAGS)}

_FOUNDATIONS = (
    Foundation.CARE,
    Foundation.FAIRNESS,
    Foundation.LOYALTY,
    Foundation.AUTHORITY,
    Foundation.SANCTITY,
)


def tags_to_names(tags) -> list[str]:
    """Serialize a collection of tags as display names in canonical order."""
    return [t.value for t in sorted(tags, key=lambda t: t.index)]


def names_to_tags(names) -> frozenset[FrameTag]:
    return frozenset(FrameTag.from_name(n) for n in names)

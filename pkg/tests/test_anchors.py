"""Anchor creation and re-location against edited text."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from framescope.anchors import (
    CONTEXT_WINDOW,
    AnchorStatus,
    TextAnchor,
    create_anchor,
    resolve,
)
from framescope.errors import EmptySpan, OutOfBounds
from helpers import random_plain_words


class TestCreate:
    def test_basic_span(self):
        anchor = create_anchor("abcdef", 2, 4)
        assert anchor == TextAnchor("cd", "ab", "ef", 2, 4)

    def test_document_edges_shorten_context(self):
        anchor = create_anchor("abcdef", 0, 2)
        assert anchor.prefix == ""
        assert anchor.suffix == "cdef"

    def test_context_window_is_32_characters(self):
        text = "".join(chr(ord("a") + i % 26) for i in range(100))
        anchor = create_anchor(text, 40, 50)
        assert anchor.prefix == text[8:40]
        assert anchor.suffix == text[50:82]
        assert len(anchor.prefix) == CONTEXT_WINDOW
        assert len(anchor.suffix) == CONTEXT_WINDOW

    def test_out_of_bounds(self):
        with pytest.raises(OutOfBounds):
            create_anchor("abc", -1, 2)
        with pytest.raises(OutOfBounds):
            create_anchor("abc", 0, 4)

    def test_empty_span(self):
        with pytest.raises(EmptySpan):
            create_anchor("abc", 1, 1)
        with pytest.raises(EmptySpan):
            create_anchor("abc", 2, 1)


class TestResolve:
    def test_unchanged_text_is_exact(self):
        text = "the quick brown fox"
        anchor = create_anchor(text, 4, 9)
        resolution = resolve(anchor, text)
        assert resolution.status is AnchorStatus.EXACT
        assert resolution.anchor == anchor

    def test_insertion_before_quote_relocates(self):
        text = "the quick brown fox"
        anchor = create_anchor(text, 4, 9)
        edited = "xyz" + text
        resolution = resolve(anchor, edited)
        assert resolution.status is AnchorStatus.RELOCATED
        assert (resolution.anchor.start, resolution.anchor.end) == (7, 12)
        assert edited[7:12] == anchor.exact

    def test_deleted_quote_orphans(self):
        text = "the quick brown fox"
        anchor = create_anchor(text, 4, 9)
        resolution = resolve(anchor, "the brown fox")
        assert resolution.status is AnchorStatus.ORPHANED
        assert (resolution.anchor.start, resolution.anchor.end) == (4, 9)
        assert not resolution.renderable

    def test_context_picks_among_duplicates(self):
        # same quote twice; context should pick the second occurrence
        original = "alpha TARGET beta ... gamma TARGET delta"
        anchor = create_anchor(original, original.rindex("TARGET"), original.rindex("TARGET") + 6)
        edited = "X" + original
        resolution = resolve(anchor, edited)
        assert resolution.status is AnchorStatus.RELOCATED
        assert resolution.anchor.start == edited.rindex("TARGET")

    def test_tie_breaks_to_smallest_offset(self):
        anchor = TextAnchor(exact="dup", prefix="", suffix="", start=50, end=53)
        text = "xx dup yy dup zz"
        resolution = resolve(anchor, text)
        assert resolution.status is AnchorStatus.RELOCATED
        assert resolution.anchor.start == text.index("dup")

    def test_relocated_slice_always_matches_exact(self):
        rng = random.Random(7)
        for _ in range(100):
            text = random_plain_words(rng, rng.randint(3, 30))
            start = rng.randrange(0, len(text))
            end = rng.randrange(start + 1, min(len(text), start + 20) + 1)
            anchor = create_anchor(text, start, end)
            insert_at = rng.randrange(0, len(text) + 1)
            edited = text[:insert_at] + random_plain_words(rng, 2) + text[insert_at:]
            resolution = resolve(anchor, edited)
            if resolution.status is not AnchorStatus.ORPHANED:
                assert (
                    edited[resolution.anchor.start:resolution.anchor.end]
                    == anchor.exact
                )


@given(st.data())
@settings(max_examples=200, deadline=None)
def test_round_trip_property(data):
    text = data.draw(st.text(min_size=1, max_size=300))
    start = data.draw(st.integers(0, len(text) - 1))
    end = data.draw(st.integers(start + 1, len(text)))
    anchor = create_anchor(text, start, end)
    resolution = resolve(anchor, text)
    assert resolution.status is AnchorStatus.EXACT
    assert (resolution.anchor.start, resolution.anchor.end) == (start, end)


def test_shift_property_with_single_occurrence():
    rng = random.Random(42)
    for _ in range(200):
        text = random_plain_words(rng, rng.randint(4, 40))
        start = rng.randrange(0, len(text) - 1)
        end = rng.randrange(start + 1, min(len(text), start + 24) + 1)
        exact = text[start:end]
        if text.count(exact) != 1:
            continue
        anchor = create_anchor(text, start, end)
        k = rng.randint(1, 12)
        edited = "#" * k + text  # '#' never occurs in the generated words
        resolution = resolve(anchor, edited)
        assert resolution.status is AnchorStatus.RELOCATED
        assert (resolution.anchor.start, resolution.anchor.end) == (start + k, end + k)

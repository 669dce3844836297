"""Dictionary parsing, tokenization, scoring, and tag suggestion."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from framescope.errors import (
    BadWildcard,
    DuplicatePattern,
    EmptyDocument,
    MalformedEntry,
    MalformedHeader,
    UnknownCategoryName,
)
from framescope.frames import CANONICAL_TAGS, FrameTag
from framescope.lexicon import (
    FrameVector,
    Lexicon,
    LexiconEntry,
    parse_lexicon,
    score,
    suggest_tags,
    tokenize,
)
from helpers import oracle_score, random_lexicon, random_text

HEADER = "%\n" + "\n".join(f"{t.index + 1}\t{t.value}" for t in CANONICAL_TAGS) + "\n%\n"


def make_vector(token_count=0, **counts):
    values = [0] * 11
    for name, n in counts.items():
        values[FrameTag.from_name(name).index] = n
    return FrameVector(tuple(values), token_count)


# --- parsing ---------------------------------------------------------------

class TestParse:
    def test_single_wildcard_entry(self):
        lex = parse_lexicon(HEADER + "kill*\t2\n")
        assert lex.entries == (LexiconEntry("kill", True, frozenset({FrameTag.HARM})),)

    def test_header_only_gives_empty_lexicon(self):
        lex = parse_lexicon(HEADER)
        assert lex.entries == ()

    def test_exact_and_wildcard_are_distinct_entries(self):
        lex = parse_lexicon(HEADER + "fair\t3\nfair*\t3 4\n")
        assert len(lex) == 2
        exact, wild = lex.entries
        assert (exact.pattern, exact.wildcard) == ("fair", False)
        assert exact.categories == frozenset({FrameTag.FAIRNESS})
        assert (wild.pattern, wild.wildcard) == ("fair", True)
        assert wild.categories == frozenset({FrameTag.FAIRNESS, FrameTag.CHEATING})

    def test_roundtrip_through_serialization(self):
        lex = parse_lexicon(HEADER + "fair\t3\nfair*\t3 4\nkill*\t2\n")
        again = parse_lexicon(lex.dumps())
        assert again.entries == lex.entries
        # and the serialization is itself stable
        assert again.dumps() == lex.dumps()

    def test_header_ids_map_by_name_not_position(self):
        text = "%\n7\tharm\n9\tcare\n%\nkill*\t7\nhug\t9\n"
        lex = parse_lexicon(text)
        assert lex.entries[0].categories == frozenset({FrameTag.HARM})
        assert lex.entries[1].categories == frozenset({FrameTag.CARE})

    def test_comments_and_blank_lines_ignored(self):
        text = "# a comment\n\n" + HEADER + "# body comment\n\nkill*\t2\n"
        assert len(parse_lexicon(text)) == 1

    def test_patterns_lowercased(self):
        lex = parse_lexicon(HEADER + "Kill*\t2\n")
        assert lex.entries[0].pattern == "kill"

    def test_bytes_input(self):
        assert len(parse_lexicon((HEADER + "kill*\t2\n").encode())) == 1

    def test_missing_header_delimiters(self):
        with pytest.raises(MalformedHeader):
            parse_lexicon("1\tcare\n%\nkill*\t1\n")
        with pytest.raises(MalformedHeader):
            parse_lexicon("%\n1\tcare\nkill*\t1\n")

    def test_unknown_category_name(self):
        with pytest.raises(UnknownCategoryName):
            parse_lexicon("%\n1\tjoy\n%\n")

    def test_duplicate_pattern(self):
        with pytest.raises(DuplicatePattern):
            parse_lexicon(HEADER + "kill*\t2\nkill*\t1\n")

    def test_duplicate_only_within_same_wildcard_flag(self):
        lex = parse_lexicon(HEADER + "kill\t2\nkill*\t2\n")
        assert len(lex) == 2

    def test_internal_star_rejected(self):
        with pytest.raises(BadWildcard):
            parse_lexicon(HEADER + "ki*ll\t2\n")
        with pytest.raises(BadWildcard):
            parse_lexicon(HEADER + "*\t2\n")

    def test_undeclared_category_id(self):
        with pytest.raises(MalformedEntry):
            parse_lexicon("%\n1\tcare\n%\nkill*\t2\n")

    def test_body_line_without_ids(self):
        with pytest.raises(MalformedEntry):
            parse_lexicon(HEADER + "kill*\n")


# --- tokenization ------------------------------------------------------------

class TestTokenize:
    def test_empty(self):
        assert tokenize("") == []

    def test_separators_and_lowercase(self):
        assert tokenize("Kill—killing.") == ["kill", "killing"]

    def test_apostrophes_split(self):
        assert tokenize("it's FAIR") == ["it", "s", "fair"]

    def test_digits_and_underscores_separate(self):
        assert tokenize("a1b c_d") == ["a", "b", "c", "d"]

    @given(st.text(max_size=200))
    def test_tokens_are_lowercase_alpha(self, text):
        for token in tokenize(text):
            assert token
            assert token == token.lower()
            assert all(ch.isalpha() for ch in token)

    @given(st.text(max_size=100), st.text(max_size=100))
    def test_space_join_concatenates_token_lists(self, a, b):
        assert tokenize(a + " " + b) == tokenize(a) + tokenize(b)


# --- scoring -------------------------------------------------------------------

class TestScore:
    def test_empty_text(self, stub_lexicon):
        vec = score("", stub_lexicon)
        assert vec.counts == (0,) * 11
        assert vec.token_count == 0

    def test_prefix_counting(self):
        lex = Lexicon(
            (
                LexiconEntry("kill", True, frozenset({FrameTag.HARM})),
                LexiconEntry("fair", True, frozenset({FrameTag.FAIRNESS})),
            )
        )
        vec = score("Killing is not fair, killers say", lex)
        assert vec == oracle_score("Killing is not fair, killers say", lex)
        assert vec.token_count == 6
        assert vec.count(FrameTag.HARM) == 2
        assert vec.count(FrameTag.FAIRNESS) == 1
        assert sum(vec.counts) == 3

    def test_exact_beats_prefix(self):
        lex = Lexicon(
            (
                LexiconEntry("fair", False, frozenset({FrameTag.FAIRNESS})),
                LexiconEntry("fair", True, frozenset({FrameTag.CHEATING})),
            )
        )
        vec = score("fair fairness", lex)
        assert vec == oracle_score("fair fairness", lex)
        assert vec.count(FrameTag.FAIRNESS) == 1  # exact wins on "fair"
        assert vec.count(FrameTag.CHEATING) == 1  # prefix wins on "fairness"

    def test_longest_prefix_wins(self, stub_lexicon):
        vec = score("lawless laws", stub_lexicon)
        assert vec.count(FrameTag.SUBVERSION) == 1
        assert vec.count(FrameTag.AUTHORITY) == 1

    def test_multi_category_entry_counts_each(self, stub_lexicon):
        vec = score("illegally", stub_lexicon)
        assert vec.count(FrameTag.CHEATING) == 1
        assert vec.count(FrameTag.SUBVERSION) == 1

    def test_oracle_equivalence_randomized(self):
        rng = random.Random(1234)
        for _ in range(200):
            lex = random_lexicon(rng)
            text = random_text(rng, lex)
            assert score(text, lex) == oracle_score(text, lex)

    def test_determinism(self, stub_lexicon):
        text = "The killers were cruel and unfair."
        assert score(text, stub_lexicon) == score(text, stub_lexicon)

    @given(st.data())
    @settings(max_examples=50, deadline=None)
    def test_concatenation_and_monotonicity(self, data):
        rng = random.Random(data.draw(st.integers(0, 2**32)))
        lex = random_lexicon(rng, max_entries=20)
        a = random_text(rng, lex, max_tokens=30)
        b = random_text(rng, lex, max_tokens=30)
        combined = score(a + " " + b, lex)
        assert combined == score(a, lex) + score(b, lex)
        before = score(a, lex)
        assert all(x >= y for x, y in zip(combined.counts, before.counts))


# --- suggestion -----------------------------------------------------------------

class TestSuggest:
    def test_no_matches_no_suggestions(self):
        suggested = suggest_tags(make_vector(token_count=500))
        assert suggested.tags == frozenset()
        assert all(rate == 0.0 for rate in suggested.rates.values())

    def test_rate_and_count_both_required(self):
        suggested = suggest_tags(make_vector(token_count=1000, harm=3))
        assert suggested.tags == frozenset({FrameTag.HARM})
        assert suggested.rates[FrameTag.HARM] == pytest.approx(3.0)

    def test_minimum_count_clause(self):
        # rate 10.0 clears the threshold but the count floor does not
        suggested = suggest_tags(make_vector(token_count=100, harm=1))
        assert FrameTag.HARM not in suggested.tags
        assert suggested.rates[FrameTag.HARM] == pytest.approx(10.0)

    def test_rate_threshold_clause(self):
        # count 2 but rate 2/10000*1000 = 0.2 < 1.0
        suggested = suggest_tags(make_vector(token_count=10000, harm=2))
        assert FrameTag.HARM not in suggested.tags

    def test_threshold_configurable(self):
        vec = make_vector(token_count=10000, harm=2)
        assert FrameTag.HARM in suggest_tags(vec, threshold=0.1).tags

    def test_empty_document_rejected(self):
        with pytest.raises(EmptyDocument):
            suggest_tags(make_vector(token_count=0))

    def test_rates_reported_for_all_eleven(self):
        suggested = suggest_tags(make_vector(token_count=10, care=2))
        assert set(suggested.rates) == set(CANONICAL_TAGS)

    def test_deterministic_function_of_vector(self):
        vec = make_vector(token_count=50, care=2, harm=5)
        assert suggest_tags(vec) == suggest_tags(vec)


# --- vector arithmetic ------------------------------------------------------------

def test_frame_vector_validation():
    with pytest.raises(ValueError):
        FrameVector((0,) * 10, 5)
    with pytest.raises(ValueError):
        FrameVector((-1,) + (0,) * 10, 5)


def test_frequencies_undefined_for_empty():
    with pytest.raises(EmptyDocument):
        make_vector(token_count=0).frequencies()

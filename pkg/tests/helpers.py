"""Shared test oracles and random-case generators."""

from __future__ import annotations

import random
import string

from framescope.frames import CANONICAL_TAGS
from framescope.lexicon import FrameVector, Lexicon, LexiconEntry, tokenize


def oracle_score(text: str, lexicon: Lexicon) -> FrameVector:
    """Brute-force reference scorer.

    For every token, test every lexicon entry; an exact match wins outright,
    otherwise the longest matching wildcard pattern wins; the winner
    contributes all of its categories. Deliberately independent of the
    production lookup tables.
    """
    counts = [0] * len(CANONICAL_TAGS)
    tokens = tokenize(text)
    for token in tokens:
        exact = [e for e in lexicon.entries if not e.wildcard and e.pattern == token]
        prefixed = [e for e in lexicon.entries if e.wildcard and token.startswith(e.pattern)]
        if exact:
            winner = exact[0]
        elif prefixed:
            winner = max(prefixed, key=lambda e: len(e.pattern))
        else:
            continue
        for tag in winner.categories:
            counts[tag.index] += 1
    return FrameVector(tuple(counts), len(tokens))


def random_lexicon(rng: random.Random, max_entries: int = 50) -> Lexicon:
    """Random lexicon over a tiny alphabet, to force prefix/exact collisions."""
    alphabet = "abcde"
    entries = []
    seen = set()
    for _ in range(rng.randint(1, max_entries)):
        pattern = "".join(rng.choice(alphabet) for _ in range(rng.randint(1, 6)))
        wildcard = rng.random() < 0.5
        if (pattern, wildcard) in seen:
            continue
        seen.add((pattern, wildcard))
        categories = frozenset(rng.sample(CANONICAL_TAGS, rng.randint(1, 3)))
        entries.append(LexiconEntry(pattern, wildcard, categories))
    return Lexicon(tuple(entries), "random")


def random_text(rng: random.Random, lexicon: Lexicon, max_tokens: int = 200) -> str:
    """Random text biased toward lexicon patterns, with assorted separators."""
    alphabet = "abcde"
    separators = [" ", " ", ", ", ". ", "\n", "—", "'", "1"]
    words = []
    patterns = [e.pattern for e in lexicon.entries] or ["zz"]
    for _ in range(rng.randint(0, max_tokens)):
        base = rng.choice(patterns) if rng.random() < 0.6 else "".join(
            rng.choice(alphabet) for _ in range(rng.randint(1, 7))
        )
        suffix = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 3)))
        word = base + suffix
        if rng.random() < 0.3:
            word = word.upper() if rng.random() < 0.5 else word.capitalize()
        words.append(word)
    out = []
    for word in words:
        out.append(word)
        out.append(rng.choice(separators))
    return "".join(out)


def random_plain_words(rng: random.Random, n: int) -> str:
    letters = string.ascii_lowercase
    return " ".join(
        "".join(rng.choice(letters) for _ in range(rng.randint(2, 9))) for _ in range(n)
    )


def build_engagement_log(
    highlights: int,
    total_tags: int,
    total_votes: int,
    comments: int = 0,
    summary_edits: int = 0,
    article_id: str = "a1",
    n_users: int = 10,
) -> list[dict]:
    """Synthetic event log with exact engagement totals for one article.

    Every annotation is created with one tag (one automatic creator vote);
    extra tags arrive via tag_added (one vote each); the remaining votes are
    spread over assignments as distinct non-creator vote_toggled events.
    """
    assert total_tags >= highlights >= 1
    assert total_votes >= total_tags
    users = [f"u{i}" for i in range(n_users)]
    tag_names = [t.value for t in CANONICAL_TAGS]
    events = []
    seq = 0

    def push(kind, actor, payload):
        nonlocal seq
        seq += 1
        events.append(
            {
                "seq": seq,
                "kind": kind,
                "actor": actor,
                "payload": payload,
                "at": "2017-06-01T00:00:00+00:00",
            }
        )

    push("article_ingested", users[0], {"article_id": article_id, "title": "t", "text": "body"})
    assignments = []  # (annotation_id, tag, adder)
    for i in range(highlights):
        ann = f"ann{i}"
        adder = users[i % n_users]
        push(
            "annotation_created",
            adder,
            {
                "annotation_id": ann,
                "article_id": article_id,
                "start": 0,
                "end": 1,
                "tags": [tag_names[0]],
            },
        )
        assignments.append((ann, tag_names[0], adder))
    for i in range(total_tags - highlights):
        ann = f"ann{i % highlights}"
        tag = tag_names[1 + i // highlights]
        adder = users[(i + 1) % n_users]
        push("tag_added", adder, {"annotation_id": ann, "tag": tag})
        assignments.append((ann, tag, adder))
    extra_votes = total_votes - total_tags
    voted = {(a, t): {u} for a, t, u in assignments}
    i = 0
    while extra_votes > 0:
        ann, tag, adder = assignments[i % len(assignments)]
        candidates = [u for u in users if u not in voted[(ann, tag)]]
        assert candidates, "need more users to place distinct votes"
        voter = candidates[0]
        push("vote_toggled", voter, {"annotation_id": ann, "tag": tag})
        voted[(ann, tag)].add(voter)
        extra_votes -= 1
        i += 1
    for i in range(comments):
        ann, _, _ = assignments[i % len(assignments)]
        push(
            "comment_added",
            users[i % n_users],
            {
                "comment_id": f"c{i}",
                "annotation_id": ann,
                "body": "words",
                "declared_frames": [],
                "parent_comment": None,
            },
        )
    for i in range(summary_edits):
        push("summary_edited", users[i % n_users], {"article_id": article_id, "body": f"v{i+1}"})
    return events

"""Frame-aware article recommendations over a local corpus.

Topic similarity is cosine distance between TF-IDF vectors (tf = raw count /
document token count, idf = ln(N/df)). Frame similarity is cosine distance
between the articles' token-normalized frame-count vectors. The two blend
linearly; topic dominates by default.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable

from .errors import EmptyCorpus, UnknownArticle
from .lexicon import SuggestedTags, tokenize
from .model import Article

DEFAULT_ALPHA = 0.7
DEFAULT_TAU = 0.15


@dataclass(frozen=True)
class Recommendation:
    article_id: str
    topic_similarity: float
    frame_similarity: float
    combined_score: float
    frame_tags: SuggestedTags

    def as_dict(self) -> dict:
        return {
            "article_id": self.article_id,
            "topic_similarity": self.topic_similarity,
            "frame_similarity": self.frame_similarity,
            "combined_score": self.combined_score,
            "frame_tags": self.frame_tags.as_dict(),
        }


@dataclass
class CorpusIndex:
    """Immutable once built; rebuild and swap to refresh."""

    doc_count: int
    term_freq: dict[str, dict[str, float]]      # article id -> term -> tf
    doc_freq: dict[str, int]                    # term -> number of docs containing it
    tfidf: dict[str, dict[str, float]]          # article id -> term -> tf * idf
    frame_freq: dict[str, tuple[float, ...]]    # article id -> normalized frame vector
    frame_tags: dict[str, SuggestedTags]

    def __contains__(self, article_id: str) -> bool:
        return article_id in self.tfidf


def build_index(articles: Iterable[Article]) -> CorpusIndex:
    articles = list(articles)
    if not articles:
        raise EmptyCorpus("cannot index an empty corpus")

    token_lists = {a.id: tokenize(a.canonical_text) for a in articles}
    doc_freq: Counter[str] = Counter()
    term_freq: dict[str, dict[str, float]] = {}
    for article in articles:
        tokens = token_lists[article.id]
        counts = Counter(tokens)
        total = len(tokens)
        term_freq[article.id] = (
            {term: n / total for term, n in counts.items()} if total else {}
        )
        doc_freq.update(counts.keys())

    n_docs = len(articles)
    idf = {term: math.log(n_docs / df) for term, df in doc_freq.items()}
    tfidf = {
        article_id: {term: tf * idf[term] for term, tf in freqs.items()}
        for article_id, freqs in term_freq.items()
    }

    frame_freq = {}
    frame_tags = {}
    for article in articles:
        vec = article.frame_vector
        if vec.token_count:
            frame_freq[article.id] = tuple(c / vec.token_count for c in vec.counts)
        else:
            frame_freq[article.id] = tuple(0.0 for _ in vec.counts)
        frame_tags[article.id] = article.suggested_tags

    return CorpusIndex(
        doc_count=n_docs,
        term_freq=term_freq,
        doc_freq=dict(doc_freq),
        tfidf=tfidf,
        frame_freq=frame_freq,
        frame_tags=frame_tags,
    )


def recommend(
    index: CorpusIndex,
    article_id: str,
    k: int,
    alpha: float = DEFAULT_ALPHA,
    tau: float = DEFAULT_TAU,
) -> list[Recommendation]:
    """Top-k articles similar to ``article_id``, never including it.

    Candidates must clear the topic-similarity floor ``tau``; ranking is by
    ``alpha * topic + (1 - alpha) * frame`` descending, ties by article id.
    """
    if article_id not in index:
        raise UnknownArticle(f"article {article_id!r} is not in the index")
    if k < 1:
        raise ValueError("k must be >= 1")

    query_tfidf = index.tfidf[article_id]
    query_frames = index.frame_freq[article_id]
    scored = []
    for candidate_id in sorted(index.tfidf):
        if candidate_id == article_id:
            continue
        topic = sparse_cosine(query_tfidf, index.tfidf[candidate_id])
        if topic < tau:
            continue
        frame = dense_cosine(query_frames, index.frame_freq[candidate_id])
        combined = alpha * topic + (1.0 - alpha) * frame
        scored.append(
            Recommendation(
                article_id=candidate_id,
                topic_similarity=topic,
                frame_similarity=frame,
                combined_score=combined,
                frame_tags=index.frame_tags[candidate_id],
            )
        )
    scored.sort(key=lambda r: (-r.combined_score, r.article_id))
    return scored[:k]


def sparse_cosine(a: dict[str, float], b: dict[str, float]) -> float:
    """Cosine similarity of sparse vectors; zero vectors compare as 0.0."""
    if len(b) < len(a):
        a, b = b, a
    dot = sum(value * b.get(term, 0.0) for term, value in a.items())
    norm_a = math.sqrt(sum(v * v for v in a.values()))
    norm_b = math.sqrt(sum(v * v for v in b.values()))
    if norm_a == 0.0 or norm_b == 0.0:
        return 0.0
    return dot / (norm_a * norm_b)


def dense_cosine(a: tuple[float, ...], b: tuple[float, ...]) -> float:
    dot = sum(x * y for x, y in zip(a, b))
    norm_a = math.sqrt(sum(x * x for x in a))
    norm_b = math.sqrt(sum(y * y for y in b))
    if norm_a == 0.0 or norm_b == 0.0:
        return 0.0
    return dot / (norm_a * norm_b)

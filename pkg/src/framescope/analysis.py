"""Study-evaluation toolkit.

Three concerns live here: engagement metrics folded from the service event
log, permutation tests over per-participant empathy deltas, and the
bookkeeping for dual-coder moral-frame coding (agreement intersection and
re-framing classification against per-issue rubrics).

All computations are pure functions over immutable snapshots. Sampled
permutation runs draw from an explicitly seeded generator and record the
seed, never ambient randomness.
"""

from __future__ import annotations

import csv
import enum
import json
import math
import random
from dataclasses import dataclass, field
from importlib import resources
from itertools import combinations
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    BadSampleCount,
    EmptyGroup,
    UnknownArticle,
    ZeroBaseline,
)
from .frames import FrameTag

#: Exhaustive enumeration is used up to this many distinct relabelings.
EXHAUSTIVE_LIMIT = 20000
DEFAULT_SAMPLES = 10000

GROUPS = ("control", "treatment")
PHASES = ("pre", "post")
_PHASE_ALIASES = {"pre": "pre", "baseline": "pre", "post": "post", "final": "post"}


# --- engagement metrics -------------------------------------------------------

@dataclass
class EngagementReport:
    """Per-article engagement counts and ratios.

    Ratio fields are None (absent) when their denominator is zero; they are
    never reported as 0 in that case.
    """

    article_id: str
    highlights: int
    avg_tags_per_highlight: float | None
    avg_votes_per_tag: float | None
    summary_edits: int
    comments_per_tag: float | None
    avg_interactions_per_user: float | None

    def as_dict(self) -> dict:
        return {
            "article_id": self.article_id,
            "highlights": self.highlights,
            "avg_tags_per_highlight": self.avg_tags_per_highlight,
            "avg_votes_per_tag": self.avg_votes_per_tag,
            "summary_edits": self.summary_edits,
            "comments_per_tag": self.comments_per_tag,
            "avg_interactions_per_user": self.avg_interactions_per_user,
        }


def engagement_report(events: Iterable[Mapping], article_id: str) -> EngagementReport:
    """Fold an event log into the engagement metrics for one article.

    highlights = annotation creations; tags = assignments created with the
    annotation plus later additions; votes = standing votes including the
    adder's automatic vote (toggles net out); interactions = all write
    events targeting the article, divided by the distinct users who wrote.
    """
    seen_article = False
    annotation_article: dict[str, str] = {}
    voters: dict[tuple[str, str], set[str]] = {}  # (annotation, tag) -> voters
    highlights = 0
    tags = 0
    comments = 0
    summary_edits = 0
    writes = 0
    actors: set[str] = set()

    def on_article(actor: str):
        nonlocal writes
        writes += 1
        actors.add(actor)

    for event in events:
        kind = event["kind"]
        payload = event.get("payload", {})
        actor = event.get("actor", "")
        if kind == "article_ingested":
            if payload.get("article_id") == article_id:
                seen_article = True
                on_article(actor)
        elif kind == "annotation_created":
            annotation_article[payload["annotation_id"]] = payload["article_id"]
            if payload["article_id"] != article_id:
                continue
            on_article(actor)
            highlights += 1
            for tag in payload["tags"]:
                tags += 1
                voters[(payload["annotation_id"], tag)] = {actor}
            if payload.get("comment_body") is not None:
                comments += 1
        elif kind == "tag_added":
            if annotation_article.get(payload["annotation_id"]) != article_id:
                continue
            on_article(actor)
            tags += 1
            voters[(payload["annotation_id"], payload["tag"])] = {actor}
        elif kind == "vote_toggled":
            if annotation_article.get(payload["annotation_id"]) != article_id:
                continue
            on_article(actor)
            tag_voters = voters.setdefault((payload["annotation_id"], payload["tag"]), set())
            if actor in tag_voters:
                tag_voters.discard(actor)
            else:
                tag_voters.add(actor)
        elif kind == "comment_added":
            if annotation_article.get(payload["annotation_id"]) != article_id:
                continue
            on_article(actor)
            comments += 1
        elif kind == "summary_edited":
            if payload.get("article_id") != article_id:
                continue
            on_article(actor)
            summary_edits += 1

    if not seen_article:
        raise UnknownArticle(f"article {article_id!r} never appears in the event log")

    votes = sum(len(v) for v in voters.values())

    def ratio(numerator: float, denominator: float) -> float | None:
        return numerator / denominator if denominator else None

    return EngagementReport(
        article_id=article_id,
        highlights=highlights,
        avg_tags_per_highlight=ratio(tags, highlights),
        avg_votes_per_tag=ratio(votes, tags),
        summary_edits=summary_edits,
        comments_per_tag=ratio(comments, tags),
        avg_interactions_per_user=ratio(writes, len(actors)),
    )


def engagement_table(report: EngagementReport) -> str:
    """Aligned plain-text rendering of one engagement report."""
    rows = [
        ("article", report.article_id),
        ("highlights", str(report.highlights)),
        ("avg tags/highlight", _fmt(report.avg_tags_per_highlight)),
        ("avg votes/tag", _fmt(report.avg_votes_per_tag)),
        ("summary edits", str(report.summary_edits)),
        ("comments/tag", _fmt(report.comments_per_tag)),
        ("avg interactions/user", _fmt(report.avg_interactions_per_user)),
    ]
    width = max(len(name) for name, _ in rows)
    return "\n".join(f"{name.ljust(width)}  {value}" for name, value in rows)


def _fmt(value: float | None) -> str:
    return "-" if value is None else f"{value:.4f}"


# --- empathy samples and permutation tests ------------------------------------

@dataclass(frozen=True)
class EmpathySample:
    participant: str
    group: str
    baseline: float
    final: float

    def __post_init__(self):
        if self.group not in GROUPS:
            raise ValueError(f"group must be one of {GROUPS}, got {self.group!r}")
        for label, score in (("baseline", self.baseline), ("final", self.final)):
            if not 1.0 <= score <= 5.0:
                raise ValueError(f"{label} score {score} outside the 1-5 scale")

    @property
    def delta(self) -> float:
        return self.final - self.baseline


def read_survey_csv(path: str | Path) -> list[EmpathySample]:
    """Load samples from a survey CSV with columns participant_id, group, phase, score.

    Each participant must have exactly one pre and one post row ("baseline"
    and "final" are accepted phase aliases).
    """
    scores: dict[str, dict[str, float]] = {}
    groups: dict[str, str] = {}
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        required = {"participant_id", "group", "phase", "score"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise ValueError(f"survey CSV needs columns {sorted(required)}")
        for row in reader:
            participant = row["participant_id"].strip()
            phase = _PHASE_ALIASES.get(row["phase"].strip().lower())
            if phase is None:
                raise ValueError(f"unknown phase {row['phase']!r} for {participant}")
            if phase in scores.setdefault(participant, {}):
                raise ValueError(f"duplicate {phase} row for participant {participant}")
            scores[participant][phase] = float(row["score"])
            groups[participant] = row["group"].strip().lower()
    samples = []
    for participant, phases in scores.items():
        missing = set(PHASES) - set(phases)
        if missing:
            raise ValueError(f"participant {participant} is missing {sorted(missing)} rows")
        samples.append(
            EmpathySample(participant, groups[participant], phases["pre"], phases["post"])
        )
    samples.sort(key=lambda s: s.participant)
    return samples


def group_deltas(samples: Iterable[EmpathySample], group: str | None = None) -> list[float]:
    return [s.delta for s in samples if group is None or s.group == group]


@dataclass
class PermutationResult:
    observed_mean_diff: float
    p_value: float
    n_permutations: int
    mode: str  # "exhaustive" | "sampled"
    seed: int | None = None
    null_stats: np.ndarray | None = field(default=None, repr=False, compare=False)

    def as_dict(self) -> dict:
        return {
            "observed_mean_diff": self.observed_mean_diff,
            "p_value": self.p_value,
            "n_permutations": self.n_permutations,
            "mode": self.mode,
            "seed": self.seed,
        }


def permutation_test(
    treatment_deltas: Sequence[float],
    control_deltas: Sequence[float],
    mode: str = "exhaustive",
    n_samples: int | None = None,
    seed: int | None = None,
    sidedness: str = "one_sided",
) -> PermutationResult:
    """Two-sample permutation test on mean(treatment) - mean(control).

    Exhaustive mode enumerates every group relabeling while C(n, n_t) stays
    within EXHAUSTIVE_LIMIT, and otherwise degrades to sampling; sampled
    mode draws ``n_samples`` relabelings (default 10000) from a seeded
    generator and records the seed. p-values use add-one smoothing,
    (1 + hits) / (1 + N), so 0 is impossible. One-sided tests count
    permuted statistics >= the observed one; two-sided compares magnitudes.
    """
    treatment = np.asarray(list(treatment_deltas), dtype=float)
    control = np.asarray(list(control_deltas), dtype=float)
    if treatment.size == 0 or control.size == 0:
        raise EmptyGroup("both groups must be non-empty")
    if mode not in ("exhaustive", "sampled"):
        raise ValueError(f"mode must be 'exhaustive' or 'sampled', got {mode!r}")
    if sidedness not in ("one_sided", "two_sided"):
        raise ValueError(f"sidedness must be 'one_sided' or 'two_sided', got {sidedness!r}")

    n_t = treatment.size
    pooled = np.concatenate([treatment, control])
    n = pooled.size
    observed = float(treatment.mean() - control.mean())
    total_relabelings = math.comb(n, n_t)

    if mode == "exhaustive" and total_relabelings <= EXHAUSTIVE_LIMIT:
        pooled_sum = pooled.sum()
        sums = np.fromiter(
            (pooled[list(ix)].sum() for ix in combinations(range(n), n_t)),
            dtype=float,
            count=total_relabelings,
        )
        stats = sums / n_t - (pooled_sum - sums) / (n - n_t)
        result_mode = "exhaustive"
        n_perm = total_relabelings
        used_seed = None
    else:
        if n_samples is None:
            n_samples = DEFAULT_SAMPLES
        if not isinstance(n_samples, int) or n_samples < 1:
            raise BadSampleCount(f"n_samples must be a positive integer, got {n_samples!r}")
        used_seed = seed if seed is not None else random.SystemRandom().randrange(2**32)
        rng = np.random.default_rng(used_seed)
        shuffled = rng.permuted(np.tile(pooled, (n_samples, 1)), axis=1)
        stats = shuffled[:, :n_t].mean(axis=1) - shuffled[:, n_t:].mean(axis=1)
        result_mode = "sampled"
        n_perm = n_samples

    if sidedness == "two_sided":
        hits = int((np.abs(stats) >= abs(observed)).sum())
    else:
        hits = int((stats >= observed).sum())
    p_value = (1 + hits) / (1 + n_perm)

    return PermutationResult(
        observed_mean_diff=observed,
        p_value=p_value,
        n_permutations=n_perm,
        mode=result_mode,
        seed=used_seed,
        null_stats=stats,
    )


def mean_percent_change(samples: Iterable[EmpathySample], group: str) -> float:
    """Percent change of the group's mean score, final vs baseline."""
    selected = [s for s in samples if s.group == group]
    if not selected:
        raise EmptyGroup(f"no samples in group {group!r}")
    baseline = sum(s.baseline for s in selected) / len(selected)
    final = sum(s.final for s in selected) / len(selected)
    if baseline == 0.0:
        raise ZeroBaseline("baseline mean is zero")
    return 100.0 * (final - baseline) / baseline


# --- dual-coder bookkeeping -----------------------------------------------------

@dataclass(frozen=True)
class CodedResponse:
    """One participant response coded independently by two coders."""

    participant: str
    phase: str  # "pre" | "post"
    frames_coder_a: frozenset[FrameTag]
    frames_coder_b: frozenset[FrameTag]

    def __post_init__(self):
        if self.phase not in PHASES:
            raise ValueError(f"phase must be one of {PHASES}, got {self.phase!r}")

    @property
    def frames_agreed(self) -> frozenset[FrameTag]:
        """Only overlapping codings are kept."""
        return self.frames_coder_a & self.frames_coder_b


class ReframingChange(enum.Enum):
    POSITIVE_GAINED_FRAMING = "positive_gained_framing"
    POSITIVE_REFRAMED_TO_AUDIENCE = "positive_reframed_to_audience"
    NONE = "none"


def classify_reframing(
    pre_frames: Iterable[FrameTag],
    post_frames: Iterable[FrameTag],
    own_side_frames: Iterable[FrameTag],
    opposing_side_frames: Iterable[FrameTag],
) -> ReframingChange:
    """Classify the change between pre- and post-study framing.

    Gaining any framing from none is the first positive change; moving from
    purely own-side framing to framing that reaches the opposing side's
    values is the second. Checked in that order.
    """
    pre = frozenset(pre_frames)
    post = frozenset(post_frames)
    own = frozenset(own_side_frames)
    opposing = frozenset(opposing_side_frames)
    if not pre and post:
        return ReframingChange.POSITIVE_GAINED_FRAMING
    if pre and pre <= own and post & opposing:
        return ReframingChange.POSITIVE_REFRAMED_TO_AUDIENCE
    return ReframingChange.NONE


# --- issue rubrics ----------------------------------------------------------------

def load_rubrics() -> dict:
    """Machine-readable per-issue frame rubrics (issue -> side -> tag -> gloss)."""
    raw = json.loads(
        (resources.files("framescope") / "data" / "rubrics.json").read_text("utf-8")
    )
    rubrics = {}
    for issue, sides in raw.items():
        rubrics[issue] = {"label": sides["label"]}
        for side in ("left", "right"):
            rubrics[issue][side] = {
                FrameTag.from_name(name): gloss for name, gloss in sides[side].items()
            }
    return rubrics


def rubric_frames(issue: str, side: str, rubrics: dict | None = None) -> frozenset[FrameTag]:
    rubrics = rubrics if rubrics is not None else load_rubrics()
    try:
        return frozenset(rubrics[issue][side])
    except KeyError:
        raise KeyError(f"no rubric for issue {issue!r} side {side!r}") from None

"""Collaborative domain model: articles, annotations, tags, votes, gated comments.

All write-path business rules live in :class:`Store`. The store is a plain
in-memory structure; persistence and concurrency control belong to the
service layer. Every write method accepts explicit ids and timestamps so an
event log can be replayed into an identical state.

The gating rule: commenting on an annotation is unlocked by being its
creator or by having ever added a tag or cast a vote on it. Eligibility is
permanent once earned; retracting a vote does not revoke it.
"""

from __future__ import annotations

import html
import re
import secrets
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Iterable, Mapping

from . import anchors
from .errors import (
    BadParent,
    DuplicateTag,
    EmptyBody,
    EmptyDocument,
    GatingViolation,
    NoTagsProvided,
    UnknownAnnotation,
    UnknownArticle,
    UnknownTagAssignment,
    UnknownUser,
)
from .frames import FrameTag, tags_to_names
from .lexicon import (
    DEFAULT_SUGGEST_THRESHOLD,
    FrameVector,
    Lexicon,
    SuggestedTags,
    no_suggestions,
    score,
    suggest_tags,
)

# --- article text canonicalization -----------------------------------------

_TAG_LIKE_RE = re.compile(r"<[a-zA-Z/!][^>]*>")
_SCRIPT_STYLE_RE = re.compile(r"<(script|style)\b[^>]*>.*?</\1\s*>", re.I | re.S)
_HTML_COMMENT_RE = re.compile(r"<!--.*?-->", re.S)
_BLOCK_TAGS = (
    "p|div|br|li|ul|ol|h[1-6]|tr|td|th|table|blockquote|section|article|"
    "header|footer|pre|figure|figcaption|hr|dl|dt|dd|nav|aside|form"
)
_BLOCK_RE = re.compile(rf"</?(?:{_BLOCK_TAGS})\b[^>]*/?>", re.I)
_ANY_TAG_RE = re.compile(r"</?[a-zA-Z][^>]*>|<![^>]*>")
_HSPACE_RE = re.compile(r"[^\S\n]+")


def looks_like_html(text: str) -> bool:
    return _TAG_LIKE_RE.search(text) is not None


def canonicalize(text_or_html: str) -> str:
    """Produce the canonical article text.

    HTML inputs lose their markup: script/style content is dropped, block
    elements become line breaks, remaining tags are removed and entities
    unescaped. In all inputs, horizontal whitespace runs collapse to single
    spaces, lines are trimmed, and blank lines are dropped.
    """
    text = text_or_html
    if looks_like_html(text):
        text = _SCRIPT_STYLE_RE.sub(" ", text)
        text = _HTML_COMMENT_RE.sub(" ", text)
        text = _BLOCK_RE.sub("\n", text)
        text = _ANY_TAG_RE.sub("", text)
        text = html.unescape(text)
    lines = (_HSPACE_RE.sub(" ", line).strip() for line in text.splitlines())
    return "\n".join(line for line in lines if line)


# --- domain records ---------------------------------------------------------

def utc_now() -> datetime:
    return datetime.now(timezone.utc)


def _iso(ts: datetime) -> str:
    return ts.isoformat()


@dataclass
class User:
    id: str
    display_name: str
    api_token: str


@dataclass
class Article:
    id: str
    title: str
    canonical_text: str
    frame_vector: FrameVector
    suggested_tags: SuggestedTags
    source_url: str | None
    created_at: datetime


@dataclass
class TagAssignment:
    tag: FrameTag
    added_by: str
    voters: set[str]
    created_at: datetime

    @property
    def vote_count(self) -> int:
        return len(self.voters)


@dataclass
class Comment:
    id: str
    annotation_id: str
    author: str
    body: str
    declared_frames: frozenset[FrameTag]
    parent_comment: str | None
    created_at: datetime


@dataclass
class Annotation:
    id: str
    article_id: str
    anchor: anchors.TextAnchor
    creator: str
    created_at: datetime
    tag_assignments: list[TagAssignment] = field(default_factory=list)
    comments: list[Comment] = field(default_factory=list)

    @property
    def display_color(self) -> FrameTag:
        """The most-voted tag; ties go to the lower canonical index. Never stored."""
        return winning_tag({a.tag: a.vote_count for a in self.tag_assignments})

    def assignment_for(self, tag: FrameTag) -> TagAssignment | None:
        for assignment in self.tag_assignments:
            if assignment.tag is tag:
                return assignment
        return None


def winning_tag(votes_by_tag: Mapping[FrameTag, int]) -> FrameTag:
    if not votes_by_tag:
        raise ValueError("no tag assignments")
    return min(votes_by_tag, key=lambda t: (-votes_by_tag[t], t.index))


@dataclass
class SummaryRevision:
    article_id: str
    revision_no: int
    body: str
    author: str
    created_at: datetime


@dataclass(frozen=True)
class FramingRow:
    tag: FrameTag
    origin: str  # "auto" | "user"
    weight: float


def new_id(kind: str) -> str:
    return f"{kind}-{uuid.uuid4().hex[:12]}"


# --- the store ----------------------------------------------------------------

class Store:
    """Mutable in-memory state plus all write-path validation."""

    def __init__(self, lexicon: Lexicon, suggest_threshold: float = DEFAULT_SUGGEST_THRESHOLD):
        self.lexicon = lexicon
        self.suggest_threshold = suggest_threshold
        self.users: dict[str, User] = {}
        self.articles: dict[str, Article] = {}
        self.annotations: dict[str, Annotation] = {}
        self.summaries: dict[str, list[SummaryRevision]] = {}
        self._token_to_user: dict[str, str] = {}
        # users who ever tagged or voted on an annotation; never shrinks
        self._contributors: dict[str, set[str]] = {}

    # -- lookups --

    def user_by_token(self, token: str) -> User | None:
        user_id = self._token_to_user.get(token)
        return self.users.get(user_id) if user_id else None

    def _require_user(self, user_id: str) -> User:
        try:
            return self.users[user_id]
        except KeyError:
            raise UnknownUser(f"no user {user_id!r}") from None

    def _require_article(self, article_id: str) -> Article:
        try:
            return self.articles[article_id]
        except KeyError:
            raise UnknownArticle(f"no article {article_id!r}") from None

    def article(self, article_id: str) -> Article:
        return self._require_article(article_id)

    def _require_annotation(self, annotation_id: str) -> Annotation:
        try:
            return self.annotations[annotation_id]
        except KeyError:
            raise UnknownAnnotation(f"no annotation {annotation_id!r}") from None

    def annotations_for(self, article_id: str) -> list[Annotation]:
        self._require_article(article_id)
        found = [a for a in self.annotations.values() if a.article_id == article_id]
        found.sort(key=lambda a: (a.created_at, a.id))
        return found

    # -- writes --

    def create_user(
        self,
        display_name: str,
        *,
        user_id: str | None = None,
        api_token: str | None = None,
        created_at: datetime | None = None,
    ) -> User:
        del created_at  # accepted for uniformity with the other writes
        user_id = user_id or new_id("u")
        if api_token is None:
            api_token = secrets.token_hex(16)
            while api_token in self._token_to_user:
                api_token = secrets.token_hex(16)
        if api_token in self._token_to_user:
            raise ValueError("api token already in use")
        user = User(user_id, display_name, api_token)
        self.users[user_id] = user
        self._token_to_user[api_token] = user_id
        return user

    def ingest_article(
        self,
        title: str,
        text_or_html: str,
        source_url: str | None = None,
        *,
        article_id: str | None = None,
        created_at: datetime | None = None,
    ) -> Article:
        canonical = canonicalize(text_or_html)
        if not canonical:
            raise EmptyDocument("article is empty after canonicalization")
        vector = score(canonical, self.lexicon)
        if vector.token_count > 0:
            suggested = suggest_tags(vector, self.suggest_threshold)
        else:
            suggested = no_suggestions()
        article = Article(
            id=article_id or new_id("a"),
            title=title,
            canonical_text=canonical,
            frame_vector=vector,
            suggested_tags=suggested,
            source_url=source_url,
            created_at=created_at or utc_now(),
        )
        self.articles[article.id] = article
        return article

    def create_annotation(
        self,
        user_id: str,
        article_id: str,
        start: int,
        end: int,
        tags: Iterable[FrameTag],
        comment_body: str | None = None,
        comment_frames: Iterable[FrameTag] = (),
        *,
        annotation_id: str | None = None,
        comment_id: str | None = None,
        created_at: datetime | None = None,
    ) -> Annotation:
        self._require_user(user_id)
        article = self._require_article(article_id)
        tag_set = sorted(set(tags), key=lambda t: t.index)
        if not tag_set:
            raise NoTagsProvided("an annotation needs at least one frame tag")
        anchor = anchors.create_anchor(article.canonical_text, start, end)
        when = created_at or utc_now()
        annotation = Annotation(
            id=annotation_id or new_id("ann"),
            article_id=article_id,
            anchor=anchor,
            creator=user_id,
            created_at=when,
            tag_assignments=[
                TagAssignment(tag, user_id, {user_id}, when) for tag in tag_set
            ],
        )
        self.annotations[annotation.id] = annotation
        self._contributors[annotation.id] = {user_id}
        if comment_body is not None:
            self._append_comment(
                annotation,
                user_id,
                comment_body,
                frozenset(comment_frames),
                parent_id=None,
                comment_id=comment_id,
                created_at=when,
            )
        return annotation

    def add_tag(
        self,
        user_id: str,
        annotation_id: str,
        tag: FrameTag,
        *,
        created_at: datetime | None = None,
    ) -> TagAssignment:
        self._require_user(user_id)
        annotation = self._require_annotation(annotation_id)
        if annotation.assignment_for(tag) is not None:
            raise DuplicateTag(f"annotation already carries tag {tag.value!r}")
        assignment = TagAssignment(tag, user_id, {user_id}, created_at or utc_now())
        annotation.tag_assignments.append(assignment)
        self._contributors[annotation_id].add(user_id)
        return assignment

    def toggle_vote(self, user_id: str, annotation_id: str, tag: FrameTag) -> int:
        self._require_user(user_id)
        annotation = self._require_annotation(annotation_id)
        assignment = annotation.assignment_for(tag)
        if assignment is None:
            raise UnknownTagAssignment(
                f"annotation carries no tag {tag.value!r} to vote on"
            )
        if user_id in assignment.voters:
            assignment.voters.discard(user_id)
        else:
            assignment.voters.add(user_id)
        # having ever voted counts as a contribution, even after retraction
        self._contributors[annotation_id].add(user_id)
        return assignment.vote_count

    def eligibility(self, user_id: str, annotation_id: str) -> bool:
        annotation = self._require_annotation(annotation_id)
        if annotation.creator == user_id:
            return True
        return user_id in self._contributors.get(annotation_id, ())

    def add_comment(
        self,
        user_id: str,
        annotation_id: str,
        body: str,
        declared_frames: Iterable[FrameTag] = (),
        parent_id: str | None = None,
        *,
        comment_id: str | None = None,
        created_at: datetime | None = None,
    ) -> Comment:
        self._require_user(user_id)
        annotation = self._require_annotation(annotation_id)
        if not self.eligibility(user_id, annotation_id):
            raise GatingViolation(
                "commenting unlocks after contributing a tag or vote to this annotation"
            )
        return self._append_comment(
            annotation,
            user_id,
            body,
            frozenset(declared_frames),
            parent_id=parent_id,
            comment_id=comment_id,
            created_at=created_at,
        )

    def _append_comment(
        self,
        annotation: Annotation,
        user_id: str,
        body: str,
        declared_frames: frozenset[FrameTag],
        parent_id: str | None,
        comment_id: str | None,
        created_at: datetime | None,
    ) -> Comment:
        if not body or not body.strip():
            raise EmptyBody("comment body must be non-empty")
        if parent_id is not None and all(c.id != parent_id for c in annotation.comments):
            raise BadParent(
                f"parent comment {parent_id!r} is not on annotation {annotation.id!r}"
            )
        comment = Comment(
            id=comment_id or new_id("c"),
            annotation_id=annotation.id,
            author=user_id,
            body=body,
            declared_frames=declared_frames,
            parent_comment=parent_id,
            created_at=created_at or utc_now(),
        )
        annotation.comments.append(comment)
        return comment

    def edit_summary(
        self,
        user_id: str,
        article_id: str,
        body: str,
        *,
        created_at: datetime | None = None,
    ) -> SummaryRevision:
        self._require_user(user_id)
        self._require_article(article_id)
        if not body or not body.strip():
            raise EmptyBody("summary body must be non-empty")
        history = self.summaries.setdefault(article_id, [])
        revision = SummaryRevision(
            article_id=article_id,
            revision_no=len(history) + 1,
            body=body,
            author=user_id,
            created_at=created_at or utc_now(),
        )
        history.append(revision)
        return revision

    def get_summary(self, article_id: str) -> SummaryRevision | None:
        self._require_article(article_id)
        history = self.summaries.get(article_id)
        return history[-1] if history else None

    def summary_history(self, article_id: str) -> list[SummaryRevision]:
        self._require_article(article_id)
        return list(self.summaries.get(article_id, []))

    # -- reads --

    def page_framing(self, article_id: str) -> list[FramingRow]:
        """Auto-suggested and user-applied tags for a page, heaviest first.

        Auto rows weigh their suggestion rate; user rows weigh total standing
        votes across the article's annotations. The same tag may appear once
        per origin.
        """
        article = self._require_article(article_id)
        rows = [
            FramingRow(tag, "auto", article.suggested_tags.rates[tag])
            for tag in article.suggested_tags.tags
        ]
        votes: dict[FrameTag, int] = {}
        for annotation in self.annotations.values():
            if annotation.article_id != article_id:
                continue
            for assignment in annotation.tag_assignments:
                votes[assignment.tag] = votes.get(assignment.tag, 0) + assignment.vote_count
        rows += [FramingRow(tag, "user", float(n)) for tag, n in votes.items()]
        rows.sort(key=lambda r: (-r.weight, r.tag.index, r.origin))
        return rows

    # -- snapshots --

    def snapshot(self) -> dict:
        """Deterministic plain-data image of the full state (for comparisons)."""
        return {
            "users": [
                {"id": u.id, "display_name": u.display_name, "api_token": u.api_token}
                for u in sorted(self.users.values(), key=lambda u: u.id)
            ],
            "articles": [
                {
                    "id": a.id,
                    "title": a.title,
                    "source_url": a.source_url,
                    "canonical_text": a.canonical_text,
                    "frame_vector": a.frame_vector.as_dict(),
                    "suggested_tags": a.suggested_tags.as_dict(),
                    "created_at": _iso(a.created_at),
                }
                for a in sorted(self.articles.values(), key=lambda a: a.id)
            ],
            "annotations": [
                {
                    "id": ann.id,
                    "article_id": ann.article_id,
                    "creator": ann.creator,
                    "anchor": ann.anchor.as_dict(),
                    "created_at": _iso(ann.created_at),
                    "tags": [
                        {
                            "tag": t.tag.value,
                            "added_by": t.added_by,
                            "voters": sorted(t.voters),
                            "created_at": _iso(t.created_at),
                        }
                        for t in ann.tag_assignments
                    ],
                    "comments": [
                        {
                            "id": c.id,
                            "author": c.author,
                            "body": c.body,
                            "declared_frames": tags_to_names(c.declared_frames),
                            "parent_comment": c.parent_comment,
                            "created_at": _iso(c.created_at),
                        }
                        for c in ann.comments
                    ],
                    "contributors": sorted(self._contributors.get(ann.id, ())),
                }
                for ann in sorted(self.annotations.values(), key=lambda a: a.id)
            ],
            "summaries": {
                article_id: [
                    {
                        "revision_no": r.revision_no,
                        "body": r.body,
                        "author": r.author,
                        "created_at": _iso(r.created_at),
                    }
                    for r in revisions
                ]
                for article_id, revisions in sorted(self.summaries.items())
            },
        }

"""HTTP facade and persistence over the collaborative model.

State is event-sourced: every write validates against the in-memory store,
then appends one JSONL event; startup replays the log through the same
apply path, so a restarted service is byte-identical to the one that wrote
the log. Writes are serialized under a single store lock (strictly stronger
than the per-article contract); reads serve the current snapshot.
"""

from __future__ import annotations

import secrets
import threading
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path

from fastapi import Depends, FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from . import analysis, recommend
from .errors import (
    ConfigError,
    CorruptLog,
    DuplicateTag,
    FramescopeError,
    GatingViolation,
    LexiconError,
    UnknownAnnotation,
    UnknownArticle,
    UnknownTagAssignment,
    UnknownUser,
)
from .eventlog import EventLog
from .frames import FrameTag, names_to_tags, tags_to_names
from .lexicon import DEFAULT_SUGGEST_THRESHOLD, load_lexicon
from .model import (
    Annotation,
    Article,
    Comment,
    Store,
    SummaryRevision,
    new_id,
    utc_now,
)


@dataclass
class ServiceConfig:
    data_dir: Path
    lexicon_path: Path
    port: int = 8000
    host: str = "127.0.0.1"
    suggest_threshold: float = DEFAULT_SUGGEST_THRESHOLD
    alpha: float = recommend.DEFAULT_ALPHA
    tau: float = recommend.DEFAULT_TAU
    ui_dir: Path | None = None

    def validate(self) -> None:
        if not 0 < self.port < 65536:
            raise ConfigError(f"port {self.port} out of range")
        if not Path(self.lexicon_path).is_file():
            raise ConfigError(f"lexicon file not found: {self.lexicon_path}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ConfigError(f"alpha must be in [0, 1], got {self.alpha}")
        if not 0.0 <= self.tau <= 1.0:
            raise ConfigError(f"tau must be in [0, 1], got {self.tau}")
        if self.suggest_threshold < 0.0:
            raise ConfigError(f"suggest threshold must be >= 0, got {self.suggest_threshold}")


def apply_event(store: Store, event: dict):
    """Apply one event to the store; shared by the live path and replay."""
    kind = event["kind"]
    payload = event["payload"]
    actor = event["actor"]
    at = datetime.fromisoformat(event["at"])
    if kind == "user_created":
        return store.create_user(
            payload["display_name"],
            user_id=payload["user_id"],
            api_token=payload["api_token"],
            created_at=at,
        )
    if kind == "article_ingested":
        return store.ingest_article(
            payload["title"],
            payload["text"],
            payload.get("source_url"),
            article_id=payload["article_id"],
            created_at=at,
        )
    if kind == "annotation_created":
        return store.create_annotation(
            actor,
            payload["article_id"],
            payload["start"],
            payload["end"],
            names_to_tags(payload["tags"]),
            comment_body=payload.get("comment_body"),
            comment_frames=names_to_tags(payload.get("comment_frames") or []),
            annotation_id=payload["annotation_id"],
            comment_id=payload.get("comment_id"),
            created_at=at,
        )
    if kind == "tag_added":
        return store.add_tag(
            actor,
            payload["annotation_id"],
            FrameTag.from_name(payload["tag"]),
            created_at=at,
        )
    if kind == "vote_toggled":
        return store.toggle_vote(
            actor, payload["annotation_id"], FrameTag.from_name(payload["tag"])
        )
    if kind == "comment_added":
        return store.add_comment(
            actor,
            payload["annotation_id"],
            payload["body"],
            names_to_tags(payload.get("declared_frames") or []),
            parent_id=payload.get("parent_comment"),
            comment_id=payload["comment_id"],
            created_at=at,
        )
    if kind == "summary_edited":
        return store.edit_summary(
            actor, payload["article_id"], payload["body"], created_at=at
        )
    raise ValueError(f"unknown event kind {kind!r}")


class ServiceState:
    """Store + event log + recommendation index behind one write lock."""

    def __init__(self, config: ServiceConfig):
        config.validate()
        try:
            lexicon = load_lexicon(config.lexicon_path)
        except LexiconError as exc:
            raise ConfigError(f"cannot parse lexicon: {exc}") from exc
        self.config = config
        self.store = Store(lexicon, suggest_threshold=config.suggest_threshold)
        self.log = EventLog(Path(config.data_dir) / "events.jsonl")
        self.events: list[dict] = []
        self.lock = threading.Lock()
        self.index: recommend.CorpusIndex | None = None
        self._replay()

    def _replay(self) -> None:
        for event in self.log.read():
            try:
                apply_event(self.store, event)
            except Exception as exc:
                raise CorruptLog(
                    f"event {event['seq']} failed to replay: {exc}", seq=event["seq"]
                ) from exc
            self.events.append(event)
        self._rebuild_index()

    def _rebuild_index(self) -> None:
        articles = list(self.store.articles.values())
        self.index = recommend.build_index(articles) if articles else None

    def commit(self, kind: str, actor: str, payload: dict):
        """Validate, apply, then durably append one event."""
        with self.lock:
            event = {
                "seq": len(self.events) + 1,
                "kind": kind,
                "actor": actor,
                "payload": payload,
                "at": utc_now().isoformat(),
            }
            result = apply_event(self.store, event)  # raises before anything is logged
            self.log.append(event)
            self.events.append(event)
            if kind == "article_ingested":
                self._rebuild_index()
            return result


# --- request bodies -----------------------------------------------------------

class CreateUserBody(BaseModel):
    display_name: str


class IngestBody(BaseModel):
    title: str
    text: str
    source_url: str | None = None


class HighlightBody(BaseModel):
    start: int
    end: int
    tags: list[str]
    comment_body: str | None = None
    comment_frames: list[str] = Field(default_factory=list)


class TagBody(BaseModel):
    tag: str


class CommentBody(BaseModel):
    body: str
    declared_frames: list[str] = Field(default_factory=list)
    parent_comment: str | None = None


class SummaryBody(BaseModel):
    body: str


# --- serialization ------------------------------------------------------------

def _iso(ts: datetime) -> str:
    return ts.isoformat()


def article_listing_json(article: Article) -> dict:
    return {
        "id": article.id,
        "title": article.title,
        "source_url": article.source_url,
        "created_at": _iso(article.created_at),
        "suggested_tags": tags_to_names(article.suggested_tags.tags),
    }


def article_json(article: Article) -> dict:
    return {
        "id": article.id,
        "title": article.title,
        "source_url": article.source_url,
        "canonical_text": article.canonical_text,
        "frame_vector": article.frame_vector.as_dict(),
        "suggested_tags": article.suggested_tags.as_dict(),
        "created_at": _iso(article.created_at),
    }


def comment_json(comment: Comment) -> dict:
    return {
        "id": comment.id,
        "annotation_id": comment.annotation_id,
        "author": comment.author,
        "body": comment.body,
        "declared_frames": tags_to_names(comment.declared_frames),
        "parent_comment": comment.parent_comment,
        "created_at": _iso(comment.created_at),
    }


def annotation_json(annotation: Annotation, store: Store, viewer: str) -> dict:
    return {
        "id": annotation.id,
        "article_id": annotation.article_id,
        "creator": annotation.creator,
        "anchor": annotation.anchor.as_dict(),
        "display_color": annotation.display_color.value,
        "eligible": store.eligibility(viewer, annotation.id),
        "created_at": _iso(annotation.created_at),
        "tag_assignments": [
            {
                "tag": a.tag.value,
                "added_by": a.added_by,
                "voters": sorted(a.voters),
                "vote_count": a.vote_count,
                "created_at": _iso(a.created_at),
            }
            for a in annotation.tag_assignments
        ],
        "comments": [comment_json(c) for c in annotation.comments],
    }


def revision_json(revision: SummaryRevision) -> dict:
    return {
        "article_id": revision.article_id,
        "revision_no": revision.revision_no,
        "body": revision.body,
        "author": revision.author,
        "created_at": _iso(revision.created_at),
    }


# --- the app --------------------------------------------------------------------

class ApiFailure(Exception):
    def __init__(self, status: int, code: str, message: str, detail: str = ""):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.detail = detail


_ERROR_STATUS: list[tuple[type, int, str]] = [
    (GatingViolation, 403, "forbidden_gating"),
    (DuplicateTag, 409, "conflict"),
    (UnknownArticle, 404, "not_found"),
    (UnknownAnnotation, 404, "not_found"),
    (UnknownTagAssignment, 404, "not_found"),
    (UnknownUser, 404, "not_found"),
]


def _error_response(status: int, code: str, message: str, detail: str = "") -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"code": code, "message": message, "detail": detail},
    )


def create_app(config: ServiceConfig) -> FastAPI:
    state = ServiceState(config)
    app = FastAPI(title="framescope", version="0.1.0")
    app.state.ctx = state

    def auth(request: Request) -> str:
        header = request.headers.get("authorization", "")
        scheme, _, token = header.partition(" ")
        if scheme.lower() != "bearer" or not token:
            raise ApiFailure(401, "unauthorized", "missing bearer token")
        user = state.store.user_by_token(token.strip())
        if user is None:
            raise ApiFailure(401, "unauthorized", "unknown token")
        return user.id

    @app.exception_handler(ApiFailure)
    async def handle_api_failure(_req, exc: ApiFailure):
        return _error_response(exc.status, exc.code, exc.message, exc.detail)

    @app.exception_handler(FramescopeError)
    async def handle_domain_error(_req, exc: FramescopeError):
        for klass, status, code in _ERROR_STATUS:
            if isinstance(exc, klass):
                return _error_response(status, code, str(exc), type(exc).__name__)
        return _error_response(400, "bad_request", str(exc), type(exc).__name__)

    @app.exception_handler(RequestValidationError)
    async def handle_validation_error(_req, exc: RequestValidationError):
        return _error_response(400, "bad_request", "invalid request body", str(exc.errors()))

    # -- users --

    @app.post("/users", status_code=201)
    def create_user(body: CreateUserBody):
        user_id = new_id("u")
        token = secrets.token_hex(16)
        user = state.commit(
            "user_created",
            user_id,
            {"user_id": user_id, "display_name": body.display_name, "api_token": token},
        )
        return {"id": user.id, "display_name": user.display_name, "api_token": user.api_token}

    # -- articles --

    @app.post("/articles", status_code=201)
    def ingest_article(body: IngestBody, user_id: str = Depends(auth)):
        article = state.commit(
            "article_ingested",
            user_id,
            {
                "article_id": new_id("a"),
                "title": body.title,
                "text": body.text,
                "source_url": body.source_url,
            },
        )
        return article_json(article)

    @app.get("/articles")
    def list_articles(user_id: str = Depends(auth)):
        articles = sorted(state.store.articles.values(), key=lambda a: (a.created_at, a.id))
        return [article_listing_json(a) for a in articles]

    @app.get("/articles/{article_id}")
    def get_article(article_id: str, user_id: str = Depends(auth)):
        return article_json(state.store.article(article_id))

    @app.get("/articles/{article_id}/framing")
    def page_framing(article_id: str, user_id: str = Depends(auth)):
        rows = state.store.page_framing(article_id)
        return [{"tag": r.tag.value, "origin": r.origin, "weight": r.weight} for r in rows]

    @app.get("/articles/{article_id}/recommendations")
    def recommendations(article_id: str, k: int = 5, user_id: str = Depends(auth)):
        state.store.article(article_id)
        if state.index is None or state.index.doc_count < 2:
            return []
        results = recommend.recommend(
            state.index, article_id, k, alpha=config.alpha, tau=config.tau
        )
        titles = {a.id: a.title for a in state.store.articles.values()}
        return [dict(r.as_dict(), title=titles.get(r.article_id)) for r in results]

    # -- annotations --

    @app.post("/articles/{article_id}/highlights", status_code=201)
    def create_highlight(article_id: str, body: HighlightBody, user_id: str = Depends(auth)):
        payload = {
            "annotation_id": new_id("ann"),
            "article_id": article_id,
            "start": body.start,
            "end": body.end,
            "tags": tags_to_names(names_to_tags(body.tags)),
        }
        if body.comment_body is not None:
            payload["comment_id"] = new_id("c")
            payload["comment_body"] = body.comment_body
            payload["comment_frames"] = tags_to_names(names_to_tags(body.comment_frames))
        annotation = state.commit("annotation_created", user_id, payload)
        return annotation_json(annotation, state.store, user_id)

    @app.get("/articles/{article_id}/annotations")
    def list_annotations(article_id: str, user_id: str = Depends(auth)):
        return [
            annotation_json(a, state.store, user_id)
            for a in state.store.annotations_for(article_id)
        ]

    @app.post("/annotations/{annotation_id}/tags", status_code=201)
    def add_tag(annotation_id: str, body: TagBody, user_id: str = Depends(auth)):
        tag = FrameTag.from_name(body.tag)
        assignment = state.commit(
            "tag_added", user_id, {"annotation_id": annotation_id, "tag": tag.value}
        )
        return {
            "tag": assignment.tag.value,
            "added_by": assignment.added_by,
            "vote_count": assignment.vote_count,
            "eligible": True,
        }

    @app.post("/annotations/{annotation_id}/tags/{tag_name}/vote")
    def toggle_vote(annotation_id: str, tag_name: str, user_id: str = Depends(auth)):
        tag = FrameTag.from_name(tag_name)
        count = state.commit(
            "vote_toggled", user_id, {"annotation_id": annotation_id, "tag": tag.value}
        )
        return {
            "tag": tag.value,
            "vote_count": count,
            "voted": user_id
            in state.store.annotations[annotation_id].assignment_for(tag).voters,
            "eligible": True,
        }

    @app.post("/annotations/{annotation_id}/comments", status_code=201)
    def add_comment(annotation_id: str, body: CommentBody, user_id: str = Depends(auth)):
        comment = state.commit(
            "comment_added",
            user_id,
            {
                "comment_id": new_id("c"),
                "annotation_id": annotation_id,
                "body": body.body,
                "declared_frames": tags_to_names(names_to_tags(body.declared_frames)),
                "parent_comment": body.parent_comment,
            },
        )
        return comment_json(comment)

    # -- summaries --

    @app.get("/articles/{article_id}/summary")
    def get_summary(article_id: str, user_id: str = Depends(auth)):
        revision = state.store.get_summary(article_id)
        return {
            "article_id": article_id,
            "revision": revision_json(revision) if revision else None,
        }

    @app.put("/articles/{article_id}/summary")
    def put_summary(article_id: str, body: SummaryBody, user_id: str = Depends(auth)):
        revision = state.commit(
            "summary_edited", user_id, {"article_id": article_id, "body": body.body}
        )
        return revision_json(revision)

    @app.get("/articles/{article_id}/summary/history")
    def summary_history(article_id: str, user_id: str = Depends(auth)):
        return [revision_json(r) for r in state.store.summary_history(article_id)]

    # -- metrics --

    @app.get("/metrics/engagement/{article_id}")
    def engagement(article_id: str, user_id: str = Depends(auth)):
        state.store.article(article_id)
        return analysis.engagement_report(state.events, article_id).as_dict()

    ui_dir = config.ui_dir
    if ui_dir and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app

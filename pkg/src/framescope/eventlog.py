"""Append-only JSONL event log: one UTF-8 JSON object per line, LF-terminated.

Events carry a gapless 1-based ``seq``; current state is always a
deterministic fold over the log. Appends are flushed and fsynced before
returning.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

from .errors import CorruptLog, StorageFailure

EVENT_KINDS = (
    "user_created",
    "article_ingested",
    "annotation_created",
    "tag_added",
    "vote_toggled",
    "comment_added",
    "summary_edited",
)


class EventLog:
    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)

    def append(self, event: dict) -> None:
        line = json.dumps(event, ensure_ascii=False, sort_keys=True)
        try:
            with open(self.path, "a", encoding="utf-8") as handle:
                handle.write(line + "\n")
                handle.flush()
                os.fsync(handle.fileno())
        except OSError as exc:
            raise StorageFailure(f"cannot append to {self.path}: {exc}") from exc

    def read(self) -> list[dict]:
        """Load and structurally validate all events.

        Raises CorruptLog (with the first bad sequence number) on undecodable
        lines, blank lines, missing fields, or sequence gaps.
        """
        if not self.path.exists():
            return []
        events: list[dict] = []
        with open(self.path, encoding="utf-8") as handle:
            for lineno, line in enumerate(handle, 1):
                expected_seq = lineno
                line = line.rstrip("\n")
                if not line.strip():
                    raise CorruptLog(f"blank line at event {expected_seq}", seq=expected_seq)
                try:
                    event = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise CorruptLog(
                        f"event {expected_seq} is not valid JSON: {exc}", seq=expected_seq
                    ) from None
                for key in ("seq", "kind", "actor", "payload", "at"):
                    if key not in event:
                        raise CorruptLog(
                            f"event {expected_seq} is missing {key!r}", seq=expected_seq
                        )
                if event["seq"] != expected_seq:
                    raise CorruptLog(
                        f"sequence gap: expected {expected_seq}, found {event['seq']}",
                        seq=expected_seq,
                    )
                if event["kind"] not in EVENT_KINDS:
                    raise CorruptLog(
                        f"event {expected_seq} has unknown kind {event['kind']!r}",
                        seq=expected_seq,
                    )
                events.append(event)
        return events

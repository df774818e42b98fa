"""Durable session storage: append-only event log + materialized snapshot.

The event log is the source of truth; snapshots are a cache. A crash
between the event append and the snapshot rewrite is healed on load by
replaying the log, so an acknowledged response is never lost and the
cursor is always consistent with the recorded responses.
"""

import json
import os
from pathlib import Path

from ..errors import NotFound
from .model import SessionState, StudyResponse, StudySession, ITEMS_PER_SESSION


class SessionStore:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _events_path(self, session_id: str) -> Path:
        return self.root / f"{session_id}.events.jsonl"

    def _snapshot_path(self, session_id: str) -> Path:
        return self.root / f"{session_id}.json"

    def _append_event(self, session_id: str, event: dict) -> None:
        with open(self._events_path(session_id), "a", encoding="utf-8") as f:
            f.write(json.dumps(event, sort_keys=True) + "\n")
            f.flush()
            os.fsync(f.fileno())

    def _write_snapshot(self, session: StudySession) -> None:
        tmp = self._snapshot_path(session.id).with_suffix(".json.tmp")
        tmp.write_text(json.dumps(session.to_dict(), indent=2), encoding="utf-8")
        tmp.replace(self._snapshot_path(session.id))

    def create(self, session: StudySession) -> None:
        if self._events_path(session.id).exists():
            raise ValueError(f"session {session.id} already exists")
        self._append_event(session.id, {"type": "created", "session": session.to_dict()})
        self._write_snapshot(session)

    def record(self, session: StudySession, response: StudyResponse) -> None:
        """Append the response event first, then refresh the snapshot."""
        self._append_event(session.id, {
            "type": "response",
            "shown_index": response.shown_index,
            "choice": response.choice,
            "latency_ms": response.latency_ms,
        })
        self._write_snapshot(session)

    def load(self, session_id: str) -> StudySession:
        """Rebuild the session by replaying its event log."""
        path = self._events_path(session_id)
        if not path.exists():
            raise NotFound(f"unknown session {session_id}")
        session: StudySession | None = None
        with open(path, encoding="utf-8") as f:
            for line in f:
                line = line.strip()
                if not line:
                    continue
                event = json.loads(line)
                if event["type"] == "created":
                    session = StudySession.from_dict(event["session"])
                elif event["type"] == "response":
                    if session is None:
                        raise ValueError(f"response before creation in {path}")
                    session.responses.append(StudyResponse(
                        shown_index=event["shown_index"],
                        choice=event["choice"],
                        latency_ms=event["latency_ms"],
                    ))
                    session.cursor = len(session.responses)
        if session is None:
            raise NotFound(f"empty event log for {session_id}")
        session.state = (
            SessionState.COMPLETE
            if session.cursor >= ITEMS_PER_SESSION
            else SessionState.OPEN
        )
        self._write_snapshot(session)
        return session

    def exists(self, session_id: str) -> bool:
        return self._events_path(session_id).exists()

    def list_ids(self) -> list[str]:
        return sorted(p.name[: -len(".events.jsonl")]
                      for p in self.root.glob("*.events.jsonl"))

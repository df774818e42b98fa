"""Blinded reader-study sessions: composition, sequencing, scoring."""

import hashlib
import uuid
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from ..errors import (
    DuplicateResponse,
    InsufficientPool,
    NotComplete,
    SequenceError,
    UsageError,
)
from .model import (
    ITEMS_PER_SESSION,
    PER_ARM,
    SessionState,
    StudyItem,
    StudyKind,
    StudyReport,
    StudyResponse,
    StudySession,
    build_report,
    choices_for,
)
from .store import SessionStore


def _handle_for(session_id: str, index: int) -> str:
    digest = hashlib.sha1(f"{session_id}:{index}".encode()).hexdigest()
    return f"img_{digest[:16]}"


class StudyService:
    """Per-session writes are serialized through the store; reads share it.

    Pools are mappings label -> list of image paths: `real_pools` keyed
    "AMD"/"NON_AMD", `synth_pools` likewise for generated images.
    """

    def __init__(
        self,
        store: SessionStore,
        real_pools: dict[str, list] | None = None,
        synth_pools: dict[str, list] | None = None,
    ):
        self.store = store
        self.real_pools = {k: list(v) for k, v in (real_pools or {}).items()}
        self.synth_pools = {k: list(v) for k, v in (synth_pools or {}).items()}
        self._handles: dict[str, str] = {}

    # -- composition ---------------------------------------------------------

    def _compose(self, kind: StudyKind, rng: np.random.Generator) -> list[tuple[str, str]]:
        """(image_path, truth) pairs per the kind's fixed composition."""
        if kind is StudyKind.DIAGNOSIS:
            amd = self.real_pools.get("AMD", [])
            non = self.real_pools.get("NON_AMD", [])
            if len(amd) < PER_ARM or len(non) < PER_ARM:
                raise InsufficientPool(
                    f"diagnosis needs {PER_ARM}+{PER_ARM} real images, "
                    f"have {len(amd)}/{len(non)}"
                )
            picks = [(str(amd[i]), "AMD") for i in rng.choice(len(amd), PER_ARM, replace=False)]
            picks += [(str(non[i]), "NON_AMD") for i in rng.choice(len(non), PER_ARM, replace=False)]
            return picks

        arm = "AMD" if kind is StudyKind.TURING_AMD else "NON_AMD"
        real = self.real_pools.get(arm, [])
        synth = self.synth_pools.get(arm, [])
        if len(real) < PER_ARM or len(synth) < PER_ARM:
            raise InsufficientPool(
                f"{kind.value} needs {PER_ARM} real + {PER_ARM} synthetic "
                f"{arm} images, have {len(real)}/{len(synth)}"
            )
        picks = [(str(real[i]), "REAL") for i in rng.choice(len(real), PER_ARM, replace=False)]
        picks += [(str(synth[i]), "SYNTHETIC") for i in rng.choice(len(synth), PER_ARM, replace=False)]
        return picks

    def create_session(
        self, kind: StudyKind, reader_id: str, seed: int
    ) -> StudySession:
        kind = StudyKind(kind)
        rng = np.random.default_rng(seed)
        pairs = self._compose(kind, rng)
        order = rng.permutation(len(pairs))
        session_id = uuid.uuid4().hex[:12]
        items = []
        for shown_index, j in enumerate(order):
            path, truth = pairs[j]
            items.append(StudyItem(
                handle=_handle_for(session_id, shown_index),
                image_path=path,
                truth=truth,
                shown_index=shown_index,
            ))
        session = StudySession(
            id=session_id,
            kind=kind,
            items=items,
            reader_id=reader_id,
            seed=seed,
            created_at=datetime.now(timezone.utc).isoformat(),
        )
        self.store.create(session)
        for item in items:
            self._handles[item.handle] = item.image_path
        return session

    # -- sequencing ----------------------------------------------------------

    def next_item(self, session_id: str) -> dict:
        """{"index", "image_handle"} for the cursor item, or {"done": true}.

        Idempotent until a response is recorded; never exposes truth.
        """
        session = self.store.load(session_id)
        if session.cursor >= len(session.items):
            return {"done": True}
        item = session.items[session.cursor]
        return {"index": item.shown_index, "image_handle": item.handle}

    def record_response(
        self, session_id: str, shown_index: int, choice: str, latency_ms: float
    ) -> dict:
        session = self.store.load(session_id)
        if session.state is SessionState.COMPLETE:
            raise DuplicateResponse("session already complete")
        if shown_index < session.cursor:
            raise DuplicateResponse(f"item {shown_index} already answered")
        if shown_index > session.cursor:
            raise SequenceError(
                f"expected response for item {session.cursor}, got {shown_index}"
            )
        valid = choices_for(session.kind)
        if choice not in valid:
            raise UsageError(f"choice must be one of {valid}, got {choice!r}")
        response = StudyResponse(
            shown_index=shown_index, choice=choice, latency_ms=float(latency_ms)
        )
        session.responses.append(response)
        session.cursor += 1
        if session.cursor >= ITEMS_PER_SESSION:
            session.state = SessionState.COMPLETE
        self.store.record(session, response)
        return {"ok": True, "cursor": session.cursor, "state": session.state.value}

    # -- scoring -------------------------------------------------------------

    def score_session(self, session_id: str) -> StudyReport:
        session = self.store.load(session_id)
        if session.state is not SessionState.COMPLETE:
            raise NotComplete(f"session at {session.cursor}/{ITEMS_PER_SESSION}")
        return build_report(
            session,
            [r.choice for r in session.responses],
            [r.latency_ms for r in session.responses],
        )

    def compare_with_model(self, session_id: str, predict_fn) -> dict:
        """Run a classifier over the same diagnosis items; paired reports.

        predict_fn: image path -> "AMD" | "NON_AMD".
        """
        session = self.store.load(session_id)
        if session.kind is not StudyKind.DIAGNOSIS:
            raise UsageError("model comparison applies to DIAGNOSIS sessions")
        if session.state is not SessionState.COMPLETE:
            raise NotComplete(f"session at {session.cursor}/{ITEMS_PER_SESSION}")
        human = self.score_session(session_id)
        model_choices = [predict_fn(item.image_path) for item in session.items]
        model = build_report(session, model_choices)
        assert [i["index"] for i in human.items] == [i["index"] for i in model.items]
        return {"human": human, "model": model}

    # -- image serving -------------------------------------------------------

    def resolve_handle(self, handle: str) -> Path:
        """Opaque handle -> server-side path; rebuilt from the store after
        a restart so handles stay stable across processes."""
        if handle not in self._handles:
            for session_id in self.store.list_ids():
                for item in self.store.load(session_id).items:
                    self._handles.setdefault(item.handle, item.image_path)
        if handle not in self._handles:
            raise UsageError(f"unknown image handle {handle}")
        return Path(self._handles[handle])

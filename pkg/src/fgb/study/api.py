"""HTTP+JSON surface of the reader-study service.

POST /sessions {kind, reader_id, seed}            -> {id}
GET  /sessions/{id}/next                          -> {index, image_url} | {done}
POST /sessions/{id}/responses {index, choice, latency_ms} -> ack
GET  /sessions/{id}/report                        -> StudyReport
GET  /images/{handle}                             -> 256x256 PNG
Errors: {code, message} with a matching status.
"""

import io
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, Response
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from ..errors import (
    DuplicateResponse,
    FgbError,
    InsufficientPool,
    NotComplete,
    NotFound,
    SequenceError,
    UsageError,
)
from .model import StudyKind
from .service import StudyService

SERVE_SIZE = 256

_STATUS = {
    NotFound: 404,
    SequenceError: 409,
    DuplicateResponse: 409,
    NotComplete: 409,
    InsufficientPool: 400,
    UsageError: 400,
}


class CreateSessionBody(BaseModel):
    kind: StudyKind
    reader_id: str
    seed: int


class ResponseBody(BaseModel):
    index: int
    choice: str
    latency_ms: float = 0.0


def create_app(service: StudyService, frontend_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="reader-study service")

    @app.exception_handler(FgbError)
    async def fgb_error_handler(_req: Request, exc: FgbError):
        status = _STATUS.get(type(exc), 500)
        return JSONResponse(
            status_code=status,
            content={"code": type(exc).__name__, "message": str(exc)},
        )

    @app.post("/sessions")
    def create_session(body: CreateSessionBody):
        session = service.create_session(body.kind, body.reader_id, body.seed)
        return {"id": session.id, "kind": session.kind.value, "total": len(session.items)}

    @app.get("/sessions/{session_id}/next")
    def next_item(session_id: str):
        out = service.next_item(session_id)
        if "done" in out:
            return out
        return {"index": out["index"], "image_url": f"/images/{out['image_handle']}"}

    @app.post("/sessions/{session_id}/responses")
    def record_response(session_id: str, body: ResponseBody):
        return service.record_response(session_id, body.index, body.choice, body.latency_ms)

    @app.get("/sessions/{session_id}/report")
    def report(session_id: str):
        return service.score_session(session_id).to_dict()

    @app.get("/images/{handle}")
    def image(handle: str):
        from PIL import Image

        path = service.resolve_handle(handle)
        with Image.open(path) as im:
            im = im.convert("RGB")
            if im.size != (SERVE_SIZE, SERVE_SIZE):
                im = im.resize((SERVE_SIZE, SERVE_SIZE), Image.BILINEAR)
            buf = io.BytesIO()
            im.save(buf, format="PNG")
        return Response(content=buf.getvalue(), media_type="image/png")

    if frontend_dir is not None:
        app.mount("/", StaticFiles(directory=Path(frontend_dir), html=True), name="ui")

    return app

"""HTTP service for blinded MOS listening tests.

Sessions get a per-session random permutation of the clip pool under
opaque 128-bit ids; the id -> (file, algorithm, variant) map never leaves
the server. Ratings go to an append-only JSONL log before they are
acknowledged; restart replays the log.
"""

from __future__ import annotations

import json
import os
import secrets
import threading
import time
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import FileResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .metrics import MosRecord, mos_aggregate

LOG_NAME = "mos_events.jsonl"


def parse_clip_name(name: str) -> tuple[str, str]:
    """algorithm, variant from the <stem>__<algorithm>__<variant>.wav convention."""
    parts = Path(name).stem.split("__")
    if len(parts) >= 3:
        return parts[1], parts[2]
    return Path(name).stem, ""


class MosStore:
    """Event log plus the in-memory state rebuilt from it."""

    def __init__(self, state_dir: Path):
        self.state_dir = Path(state_dir)
        self.state_dir.mkdir(parents=True, exist_ok=True)
        self.log_path = self.state_dir / LOG_NAME
        self._lock = threading.Lock()
        # session_id -> {rater, playlist, blind: blinded_id -> clip filename}
        self.sessions: dict[str, dict] = {}
        # (session_id, blinded_id) -> score (latest wins)
        self.ratings: dict[tuple[str, str], int] = {}
        self._replay()

    def _replay(self) -> None:
        if not self.log_path.exists():
            return
        with open(self.log_path) as fh:
            for line in fh:
                line = line.strip()
                if line:
                    self._apply(json.loads(line))

    def _apply(self, event: dict) -> None:
        if event["type"] == "session":
            self.sessions[event["session_id"]] = {
                "rater": event["rater"],
                "playlist": event["playlist"],
                "blind": event["blind"],
                "created": event["ts"],
                "seed": event.get("seed"),
            }
        elif event["type"] == "rating":
            self.ratings[(event["session_id"], event["clip_id"])] = event["score"]

    def _append(self, event: dict) -> None:
        # caller holds the lock; fsync before acknowledging
        with open(self.log_path, "a") as fh:
            fh.write(json.dumps(event, sort_keys=True) + "\n")
            fh.flush()
            os.fsync(fh.fileno())
        self._apply(event)

    def create_session(self, rater: str, clips: list[str], seed: int | None) -> dict:
        rng = __import__("random").Random(seed)
        order = list(clips)
        rng.shuffle(order)
        blind = {secrets.token_hex(16): clip for clip in order}
        playlist = list(blind)
        session_id = secrets.token_hex(16)
        with self._lock:
            self._append({
                "type": "session", "session_id": session_id, "rater": rater,
                "playlist": playlist, "blind": blind, "seed": seed,
                "ts": time.time(),
            })
        return {"session_id": session_id, "playlist": playlist}

    def record_rating(self, session_id: str, clip_id: str, score: int,
                      client_ts: float | None = None) -> None:
        with self._lock:
            session = self.sessions.get(session_id)
            if session is None:
                raise KeyError("unknown session")
            if clip_id not in session["blind"]:
                raise KeyError("clip not in session playlist")
            superseded = (session_id, clip_id) in self.ratings
            self._append({
                "type": "rating", "session_id": session_id, "clip_id": clip_id,
                "score": score, "supersedes_previous": superseded,
                "client_ts": client_ts, "ts": time.time(),
            })

    def records(self) -> list[MosRecord]:
        """Latest rating per (session, clip), unblinded."""
        out = []
        for (session_id, clip_id), score in self.ratings.items():
            clip = self.sessions[session_id]["blind"][clip_id]
            algorithm, variant = parse_clip_name(clip)
            out.append(MosRecord(rater=self.sessions[session_id]["rater"],
                                 clip=clip, algorithm=f"{algorithm}::{variant}",
                                 score=score))
        return out

    def report_csv(self) -> str:
        records = self.records()
        if not records:
            raise ValueError("no ratings recorded")
        lines = ["algorithm,variant,mos,n,stddev"]
        for row in mos_aggregate(records):
            algorithm, _, variant = row.algorithm.partition("::")
            lines.append(f"{algorithm},{variant},{row.mean:.4f},{row.n},{row.stddev:.4f}")
        return "\n".join(lines) + "\n"


class SessionRequest(BaseModel):
    rater: str


class RatingRequest(BaseModel):
    session_id: str
    clip_id: str
    score: int
    client_ts: float | None = None


def create_app(clips_dir, state_dir, static_dir=None,
               seed: int | None = None) -> FastAPI:
    clips_dir = Path(clips_dir)
    store = MosStore(Path(state_dir))
    app = FastAPI(title="MOS listening test")
    app.state.store = store

    def clip_pool() -> list[str]:
        return sorted(p.name for p in clips_dir.glob("*.wav"))

    @app.post("/api/sessions")
    def create_session(req: SessionRequest):
        if not req.rater.strip():
            raise HTTPException(400, "rater label must not be empty")
        pool = clip_pool()
        if not pool:
            raise HTTPException(409, "no clips available")
        session_seed = None if seed is None else seed + len(store.sessions)
        return store.create_session(req.rater.strip(), pool, session_seed)

    @app.get("/api/clips/{blinded_id}")
    def get_clip(blinded_id: str, session_id: str):
        session = store.sessions.get(session_id)
        if session is None or blinded_id not in session["blind"]:
            raise HTTPException(404, "unknown clip")
        path = clips_dir / session["blind"][blinded_id]
        if not path.exists():
            raise HTTPException(404, "clip file missing")
        return FileResponse(path, media_type="audio/wav",
                            filename=f"{blinded_id}.wav")

    @app.post("/api/ratings")
    def post_rating(req: RatingRequest):
        if not isinstance(req.score, int) or not 0 <= req.score <= 10:
            return {"error": "score must be an integer in [0, 10]"}
        try:
            store.record_rating(req.session_id, req.clip_id, req.score,
                                req.client_ts)
        except KeyError as exc:
            return {"error": str(exc.args[0])}
        return {"ok": True}

    @app.get("/api/report")
    def report(request: Request):
        token = os.environ.get("MOS_ADMIN_TOKEN", "")
        if token and request.headers.get("x-admin-token") != token:
            raise HTTPException(403, "admin token required")
        try:
            csv_text = store.report_csv()
        except ValueError as exc:
            raise HTTPException(409, str(exc))
        return PlainTextResponse(csv_text, media_type="text/csv")

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="webapp")
    return app

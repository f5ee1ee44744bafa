"""HTTP session service: FastAPI wrapper around the pipeline for live chat.

Sessions live in memory with TTL eviction; per-session turns are serialized
(turn order defines the expansion state).
"""
import logging
import threading
import time
import uuid

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from .hqe import SessionState
from .index import InvertedIndex
from .pipeline import PipelineConfig, run_turn

log = logging.getLogger("convsearch.service")

DEFAULT_SESSION_TTL = 3600.0


class TurnRequest(BaseModel):
    utterance: str = Field(min_length=1)


class ExpansionTerm(BaseModel):
    term: str
    provenance: str


class PassageResult(BaseModel):
    passage_id: str
    doc_id: str
    text: str
    score: float
    rank: int


class TurnResponse(BaseModel):
    turn_id: str
    rewritten: str
    expansion: list[ExpansionTerm]
    results: list[PassageResult]
    degraded: bool


class SessionCreated(BaseModel):
    session_id: str


class TurnRecord(BaseModel):
    utterance: str
    response: TurnResponse


class SessionHistory(BaseModel):
    session_id: str
    created_at: float
    turns: list[TurnRecord]


class _Session:
    def __init__(self, session_id: str):
        self.session_id = session_id
        self.created_at = time.time()
        self.last_used = self.created_at
        self.state = SessionState()
        self.history: list[TurnRecord] = []
        self.lock = threading.Lock()


def create_app(index: InvertedIndex, cfg: PipelineConfig, session_ttl: float = DEFAULT_SESSION_TTL) -> FastAPI:
    app = FastAPI(title="convsearch")
    # the chat UI is served from a different origin during development
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    sessions: dict[str, _Session] = {}
    store_lock = threading.Lock()

    def evict_stale() -> None:
        now = time.time()
        for sid in [s for s, sess in sessions.items() if now - sess.last_used > session_ttl]:
            del sessions[sid]

    def get_session(session_id: str) -> _Session:
        with store_lock:
            evict_stale()
            session = sessions.get(session_id)
            if session is None:
                raise HTTPException(status_code=404, detail=f"unknown session {session_id}")
            session.last_used = time.time()
            return session

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "doc_count": index.doc_count}

    @app.post("/sessions", response_model=SessionCreated, status_code=201)
    def create_session():
        session = _Session(uuid.uuid4().hex)
        with store_lock:
            evict_stale()
            sessions[session.session_id] = session
        return SessionCreated(session_id=session.session_id)

    @app.post("/sessions/{session_id}/turns", response_model=TurnResponse)
    def post_turn(session_id: str, req: TurnRequest):
        if not req.utterance.strip():
            raise HTTPException(status_code=422, detail="utterance must be non-empty")
        session = get_session(session_id)
        with session.lock:
            turn_id = f"{session.session_id[:8]}_{len(session.state.turns) + 1}"
            result, session.state = run_turn(session.state, req.utterance, cfg, index, turn_id=turn_id)
            response = TurnResponse(
                turn_id=turn_id,
                rewritten=result.rewritten,
                expansion=[ExpansionTerm(term=t, provenance=p) for t, p in result.expanded.terms],
                results=[
                    PassageResult(
                        passage_id=pid,
                        doc_id=result.passages[pid].doc_id,
                        text=result.passages[pid].text,
                        score=score,
                        rank=rank,
                    )
                    for rank, (pid, score) in enumerate(result.ranking.entries, start=1)
                ],
                degraded=bool(result.diagnostics["degraded"]),
            )
            session.history.append(TurnRecord(utterance=req.utterance, response=response))
        log.info(
            '{"event": "turn", "session": "%s", "turn": "%s", "results": %d, "degraded": %s, "timings": %s}',
            session.session_id,
            turn_id,
            len(response.results),
            str(response.degraded).lower(),
            {k: round(v, 6) for k, v in result.diagnostics["timings"].items()},
        )
        return response

    @app.get("/sessions/{session_id}", response_model=SessionHistory)
    def get_history(session_id: str):
        session = get_session(session_id)
        with session.lock:
            return SessionHistory(
                session_id=session.session_id,
                created_at=session.created_at,
                turns=list(session.history),
            )

    @app.delete("/sessions/{session_id}", status_code=204)
    def delete_session(session_id: str):
        with store_lock:
            if session_id not in sessions:
                raise HTTPException(status_code=404, detail=f"unknown session {session_id}")
            del sessions[session_id]

    return app

"""HTTP labeling service: interactive sessions over registered corpora.

Sessions persist as append-only JSONL event logs (one create event, then one
event per label); state is rebuilt by replaying the log, so a restart
restores every session exactly. All responses are JSON; errors use the shape
{"code": ..., "message": ...}.
"""

import json
import threading
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np
from fastapi import FastAPI
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel
from starlette.exceptions import HTTPException as StarletteHTTPException

from . import __version__
from .corpus import Corpus, load_jsonl, normalize_hashtag
from .errors import EvalError, KeyselError, SelectionError
from .eval import OracleSet, recall
from .graph import GRAPH_KINDS, build_graph
from .selection import (
    METHOD_NAMES,
    ActiveSession,
    Method,
    apply_label,
    init_session,
    suggest_next,
    to_export,
)


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


class CreateSessionRequest(BaseModel):
    corpus_id: str
    seeds: list[str]
    method: str = "keyselect"
    graph_kind: str = "user_hashtag"
    day_range: tuple[int, int] | None = None
    rng_seed: int = 0
    oracle_keywords: list[str] | None = None


class LabelRequest(BaseModel):
    hashtag: str
    label: str


@dataclass
class ServiceSession:
    session_id: str
    corpus_id: str
    method_name: str
    graph_kind: str
    day_range: tuple[int, int]
    rng_seed: int
    created_at: str
    session: ActiveSession
    oracle: OracleSet | None
    log_path: Path
    lock: threading.Lock = field(default_factory=threading.Lock)

    @property
    def live_count(self) -> int:
        return self.session.queue.live_count(self.session.state.is_labeled)

    @property
    def status(self) -> str:
        return "active" if self.live_count > 0 else "exhausted"


class SessionStore:
    """Registered corpora plus event-logged sessions under one data dir."""

    def __init__(self, data_dir, strict: bool = False):
        self.data_dir = Path(data_dir)
        self.corpora_dir = self.data_dir / "corpora"
        self.sessions_dir = self.data_dir / "sessions"
        self.corpora_dir.mkdir(parents=True, exist_ok=True)
        self.sessions_dir.mkdir(parents=True, exist_ok=True)
        self.strict = strict
        self._corpora: dict[str, Corpus] = {}
        self._sessions: dict[str, ServiceSession] = {}
        self._registry_lock = threading.Lock()
        self._replay_all()

    def corpus_ids(self) -> list[str]:
        return sorted(p.stem for p in self.corpora_dir.glob("*.jsonl"))

    def get_corpus(self, corpus_id: str):
        with self._registry_lock:
            if corpus_id in self._corpora:
                return self._corpora[corpus_id]
        path = self.corpora_dir / f"{corpus_id}.jsonl"
        if not path.exists():
            return None
        corpus = load_jsonl(path).corpus
        with self._registry_lock:
            self._corpora[corpus_id] = corpus
        return corpus

    def get_session(self, session_id: str):
        with self._registry_lock:
            return self._sessions.get(session_id)

    def create_session(self, req: CreateSessionRequest) -> ServiceSession:
        seeds = sorted({t for t in (normalize_hashtag(s) for s in req.seeds) if t})
        if not seeds:
            raise ApiError(422, "invalid_request", "seeds must contain at least one hashtag")
        oracle_keywords = None
        if req.oracle_keywords is not None:
            oracle_keywords = sorted(
                {t for t in (normalize_hashtag(s) for s in req.oracle_keywords) if t}
            )
            if not oracle_keywords:
                raise ApiError(422, "invalid_request", "oracle_keywords must be non-empty when given")
        event = {
            "event": "create",
            "session_id": uuid.uuid4().hex[:12],
            "created_at": datetime.now(timezone.utc).isoformat(),
            "corpus_id": req.corpus_id,
            "seeds": seeds,
            "method": req.method,
            "graph_kind": req.graph_kind,
            "day_range": list(req.day_range) if req.day_range is not None else None,
            "rng_seed": req.rng_seed,
            "oracle_keywords": oracle_keywords,
        }
        sess = self._build_session(event)
        with open(sess.log_path, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(event, sort_keys=True) + "\n")
        with self._registry_lock:
            self._sessions[sess.session_id] = sess
        return sess

    def _build_session(self, event: dict) -> ServiceSession:
        corpus = self.get_corpus(event["corpus_id"])
        if corpus is None:
            raise ApiError(404, "not_found", f"unknown corpus {event['corpus_id']!r}")
        if event["method"] not in METHOD_NAMES:
            raise ApiError(422, "invalid_request", f"unknown method {event['method']!r}")
        if event["graph_kind"] not in GRAPH_KINDS:
            raise ApiError(422, "invalid_request", f"unknown graph kind {event['graph_kind']!r}")
        bounds = corpus.day_bounds()
        day_range = event["day_range"]
        if day_range is None:
            day_lo, day_hi = bounds
        else:
            day_lo, day_hi = int(day_range[0]), int(day_range[1])
            if not (bounds[0] <= day_lo <= day_hi <= bounds[1]):
                raise ApiError(
                    422, "invalid_request",
                    f"day_range [{day_lo}, {day_hi}] outside corpus days {list(bounds)}",
                )
        graph = build_graph(corpus, (day_lo, day_hi), kind=event["graph_kind"])
        method = Method(name=event["method"], rng_seed=int(event["rng_seed"]))
        rng = np.random.default_rng(int(event["rng_seed"]))
        try:
            session = init_session(
                graph, frozenset(event["seeds"]), method,
                corpus=corpus, day=day_lo, rng=rng,
            )
        except SelectionError as exc:
            raise ApiError(422, "invalid_request", str(exc))
        oracle = None
        if event.get("oracle_keywords"):
            oracle = OracleSet(topic_name="attached", keywords=frozenset(event["oracle_keywords"]))
        return ServiceSession(
            session_id=event["session_id"],
            corpus_id=event["corpus_id"],
            method_name=event["method"],
            graph_kind=event["graph_kind"],
            day_range=(day_lo, day_hi),
            rng_seed=int(event["rng_seed"]),
            created_at=event["created_at"],
            session=session,
            oracle=oracle,
            log_path=self.sessions_dir / f"{event['session_id']}.jsonl",
        )

    def append_label_event(self, sess: ServiceSession, hashtag: str, label: str) -> None:
        event = {
            "event": "label",
            "hashtag": hashtag,
            "label": label,
            "ts": datetime.now(timezone.utc).isoformat(),
        }
        with open(sess.log_path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(event, sort_keys=True) + "\n")

    def _replay_all(self) -> None:
        for path in sorted(self.sessions_dir.glob("*.jsonl")):
            try:
                with open(path, encoding="utf-8") as fh:
                    events = [json.loads(line) for line in fh if line.strip()]
                if not events or events[0].get("event") != "create":
                    continue
                sess = self._build_session(events[0])
                for ev in events[1:]:
                    if ev.get("event") != "label":
                        continue
                    apply_label(sess.session, ev["hashtag"], ev["label"] == "positive")
                self._sessions[sess.session_id] = sess
            except (KeyselError, ApiError, ValueError, KeyError, json.JSONDecodeError):
                continue  # a corrupt log must not block startup


def create_app(data_dir, strict: bool = False, frontend_dir=None) -> FastAPI:
    store = SessionStore(data_dir, strict=strict)
    app = FastAPI(title="keyword selection labeling service", version=__version__)
    app.state.store = store

    @app.exception_handler(ApiError)
    async def handle_api_error(request, exc: ApiError):
        return JSONResponse(status_code=exc.status, content={"code": exc.code, "message": exc.message})

    @app.exception_handler(RequestValidationError)
    async def handle_validation(request, exc: RequestValidationError):
        parts = []
        for err in exc.errors():
            loc = ".".join(str(p) for p in err.get("loc", ()) if p != "body")
            parts.append(f"{loc}: {err.get('msg')}" if loc else str(err.get("msg")))
        return JSONResponse(status_code=422, content={"code": "invalid_request", "message": "; ".join(parts)})

    @app.exception_handler(StarletteHTTPException)
    async def handle_http(request, exc: StarletteHTTPException):
        code = "not_found" if exc.status_code == 404 else "error"
        return JSONResponse(status_code=exc.status_code, content={"code": code, "message": str(exc.detail)})

    def get_session_or_404(session_id: str) -> ServiceSession:
        sess = store.get_session(session_id)
        if sess is None:
            raise ApiError(404, "not_found", f"unknown session {session_id!r}")
        return sess

    @app.post("/v1/sessions", status_code=201)
    def create_session(req: CreateSessionRequest):
        sess = store.create_session(req)
        return {"session_id": sess.session_id, "candidate_count": sess.live_count}

    @app.get("/v1/sessions/{session_id}/next")
    def next_candidate(session_id: str):
        sess = get_session_or_404(session_id)
        with sess.lock:
            sug = suggest_next(sess.session)
            if sug is None:
                return {"status": "exhausted"}
            return {"status": "active", **sug.to_dict()}

    @app.post("/v1/sessions/{session_id}/labels")
    def submit_label(session_id: str, req: LabelRequest):
        if req.label not in ("positive", "negative"):
            raise ApiError(422, "invalid_request", f"label must be positive or negative, got {req.label!r}")
        tag = normalize_hashtag(req.hashtag)
        if not tag:
            raise ApiError(422, "invalid_request", "hashtag must be non-empty")
        sess = get_session_or_404(session_id)
        with sess.lock:
            current = sess.session.state.label_of(tag)
            if current is not None:
                raise ApiError(409, "conflict", f"hashtag {tag!r} already labeled {current}")
            try:
                apply_label(sess.session, tag, req.label == "positive", strict=store.strict)
            except SelectionError as exc:
                raise ApiError(422, "invalid_request", str(exc))
            store.append_label_event(sess, tag, req.label)
            live_recall = None
            if sess.oracle is not None:
                try:
                    live_recall = recall(sess.session.state, sess.oracle)
                except EvalError:
                    live_recall = None
            return {
                "accepted": True,
                "new_candidate_count": sess.live_count,
                "recall_if_oracle_attached": live_recall,
            }

    @app.get("/v1/sessions/{session_id}")
    def get_session(session_id: str):
        sess = get_session_or_404(session_id)
        with sess.lock:
            state = sess.session.state
            return {
                "session_id": sess.session_id,
                "corpus_id": sess.corpus_id,
                "method": sess.method_name,
                "graph_kind": sess.graph_kind,
                "day_range": list(sess.day_range),
                "status": sess.status,
                "created_at": sess.created_at,
                "seeds": sorted(state.seeds),
                "counters": {
                    "positives": len(state.positives - state.seeds),
                    "negatives": len(state.negatives),
                    "remaining": sess.live_count,
                },
            }

    @app.get("/v1/sessions/{session_id}/export")
    def export_session(session_id: str):
        sess = get_session_or_404(session_id)
        with sess.lock:
            return to_export(sess.session.state)

    @app.get("/v1/corpora")
    def list_corpora():
        out = []
        for corpus_id in store.corpus_ids():
            corpus = store.get_corpus(corpus_id)
            bounds = corpus.day_bounds() if corpus.days else (0, 0)
            out.append({
                "corpus_id": corpus_id,
                "tweets": len(corpus.tweets),
                "users": len(corpus.user_ids()),
                "hashtags": len(corpus.vocabulary()),
                "day_range": list(bounds),
            })
        return {"corpora": out}

    if frontend_dir is not None and Path(frontend_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=str(frontend_dir), html=True), name="ui")

    return app

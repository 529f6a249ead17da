"""HTTP session service backing the web UI.

Each session runs one derivation. Interactive sessions execute the engine
on a worker thread; pending choice requests surface through session state
and are answered with POST /sessions/{id}/choices. Policy and scripted
sessions complete synchronously.
"""
from __future__ import annotations

import threading
import uuid
from typing import Dict, List, Optional

from fastapi import FastAPI, HTTPException, Request, Response
from pydantic import BaseModel

from .bundle import Bundle
from .engine import (ChoiceProvider, ChoiceRequest, PolicyChoices,
                     ScriptedChoices, derive)
from .errors import DerivationError, QcidgenError
from .export import layout, to_diagram_dict, to_dot
from .qcid import check_properties, classify_model


class CreateSession(BaseModel):
    terms: List[str]
    mode: str = "policy"  # policy | script | interactive
    script: Optional[list] = None


class AnswerChoice(BaseModel):
    request_id: int
    answer: object = None


class _Aborted(DerivationError):
    pass


class Session:
    def __init__(self, terms: List[str], mode: str):
        self.id = uuid.uuid4().hex[:12]
        self.terms = terms
        self.mode = mode
        self.status = "running"
        self.stage = 0
        self.snapshots: List[dict] = []
        self.history: List[dict] = []
        self.pending: Optional[ChoiceRequest] = None
        self.result: Optional[dict] = None
        self.dot: Optional[str] = None
        self.transcript: Optional[dict] = None
        self.report: Optional[dict] = None
        self.error: Optional[str] = None
        self.cond = threading.Condition()
        self._response = None
        self._aborted = False

    def to_state(self) -> dict:
        with self.cond:
            state = {
                "id": self.id,
                "terms": self.terms,
                "mode": self.mode,
                "status": self.status,
                "stage": self.stage,
                "snapshots": self.snapshots,
                "history": self.history,
                "pending_choice": self.pending.to_json_dict() if self.pending else None,
                "diagram": self.result,
                "properties": self.report,
                "error": self.error,
            }
        return state


class _BridgeChoices(ChoiceProvider):
    """Blocks the engine thread until a client answers via HTTP."""

    def __init__(self, session: Session):
        self.session = session

    def answer(self, request: ChoiceRequest):
        s = self.session
        with s.cond:
            s.pending = request
            s.status = "awaiting_choice"
            s.cond.notify_all()
            while True:
                if s._aborted:
                    raise _Aborted("session aborted")
                if s._response is not None and s._response[0] == request.id:
                    rid, answer = s._response
                    s._response = None
                    s.pending = None
                    s.status = "running"
                    return answer
                s.cond.wait(timeout=0.5)


def _run_session(session: Session, bundle: Bundle, provider: ChoiceProvider) -> None:
    def on_stage(stage, host, tax):
        model = classify_model(host, tax)
        snap = to_diagram_dict(model, layout(model))
        with session.cond:
            session.stage = stage
            session.snapshots.append(snap)

    try:
        result = derive(bundle.grammar, bundle.taxonomy, session.terms,
                        provider, on_stage=on_stage)
    except _Aborted:
        with session.cond:
            session.status = "aborted"
        return
    except QcidgenError as exc:
        with session.cond:
            session.status = "error"
            session.error = str(exc)
        return

    with session.cond:
        session.history = [a for s in result.transcript.stages
                           for a in s["applications"]]
        session.transcript = result.transcript.to_json_dict()
        if result.success:
            model = classify_model(result.graph, result.taxonomy)
            coords = layout(model)
            session.result = to_diagram_dict(model, coords)
            session.dot = to_dot(model, coords)
            session.report = check_properties(model).to_json_dict()
            session.status = "completed"
        else:
            session.status = "failed"
            session.error = "derivation failed"
            if result.failure:
                session.error += f"; stuck terms: {sorted(result.failure.stuck)}"


def create_app(bundle: Bundle) -> FastAPI:
    app = FastAPI(title="qcidgen session service")
    sessions: Dict[str, Session] = {}
    lock = threading.Lock()

    def get_session(session_id: str) -> Session:
        with lock:
            session = sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail="unknown session id")
        return session

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSession):
        if body.mode not in ("policy", "script", "interactive"):
            raise HTTPException(status_code=422, detail=f"bad mode {body.mode!r}")
        session = Session(body.terms, body.mode)
        with lock:
            sessions[session.id] = session
        if body.mode == "interactive":
            provider: ChoiceProvider = _BridgeChoices(session)
            thread = threading.Thread(
                target=_run_session, args=(session, bundle, provider), daemon=True)
            thread.start()
        else:
            provider = (ScriptedChoices(body.script or []) if body.mode == "script"
                        else PolicyChoices())
            _run_session(session, bundle, provider)
        return session.to_state()

    @app.get("/sessions/{session_id}")
    def get_state(session_id: str):
        return get_session(session_id).to_state()

    @app.post("/sessions/{session_id}/choices")
    def answer_choice(session_id: str, body: AnswerChoice):
        session = get_session(session_id)
        with session.cond:
            if session.pending is None or session.pending.id != body.request_id:
                raise HTTPException(
                    status_code=409,
                    detail="no pending choice with that request id")
            session._response = (body.request_id, body.answer)
            session.cond.notify_all()
        # wait briefly for the engine to consume the answer and advance
        for _ in range(200):
            with session.cond:
                if session.status != "running" or session.pending is not None:
                    if not (session.pending and session.pending.id == body.request_id):
                        break
                session.cond.wait(timeout=0.05)
        return session.to_state()

    @app.get("/sessions/{session_id}/diagram")
    def get_diagram(session_id: str, request: Request):
        session = get_session(session_id)
        with session.cond:
            if session.status != "completed":
                raise HTTPException(status_code=409, detail="session not completed")
            accept = request.headers.get("accept", "")
            if "text/vnd.graphviz" in accept:
                return Response(session.dot, media_type="text/vnd.graphviz")
            return session.result

    @app.get("/sessions/{session_id}/transcript")
    def get_transcript(session_id: str):
        session = get_session(session_id)
        with session.cond:
            if session.transcript is None:
                raise HTTPException(status_code=409, detail="no transcript yet")
            return session.transcript

    @app.delete("/sessions/{session_id}", status_code=204)
    def delete_session(session_id: str):
        session = get_session(session_id)
        with session.cond:
            session._aborted = True
            session.cond.notify_all()
        with lock:
            sessions.pop(session_id, None)
        return Response(status_code=204)

    return app

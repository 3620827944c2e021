"""HTTP service exposing play sessions and the analysis pipeline.

Sessions reference named provider configs loaded server-side; credentials
never transit the API. Each session is single-writer: concurrent commands
to the same session either queue on its lock (default) or are rejected
with 429, per configuration. Analysis endpoints are stateless: the graph
id is a digest of the input log contents, so identical inputs produce an
identical id and identical documents.
"""

from __future__ import annotations

import hashlib
import json
import threading
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from dejaboom import session as sessions
from dejaboom.errors import (
    CorruptLogError,
    EmptyInputError,
    GraphError,
    SessionOverError,
)
from dejaboom.gateway import Provider, RemoteConfig, RemoteProvider, RuleBasedProvider
from dejaboom.narrative import build_designer_graph, build_player_graph, emergence_report
from dejaboom.narrative.io import graph_to_dict
from dejaboom.session import Session, load_records, persist_session
from dejaboom.world import WorldSpec, bundled_world_path, load_world_file

QUEUE = "queue"
REJECT = "reject"


@dataclass
class AppConfig:
    worlds: dict[str, str] = field(default_factory=dict)
    providers: dict[str, dict] = field(default_factory=lambda: {"rule": {"type": "rule"}})
    sessions_dir: str = "sessions"
    command_conflict: str = QUEUE

    @classmethod
    def from_file(cls, path: str | Path) -> "AppConfig":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(
            worlds=data.get("worlds", {}),
            providers=data.get("providers", {"rule": {"type": "rule"}}),
            sessions_dir=data.get("sessions_dir", "sessions"),
            command_conflict=data.get("command_conflict", QUEUE),
        )


class CreateSessionRequest(BaseModel):
    world: str = "dejaboom"
    provider: str = "rule"
    player_id: str = "player"
    profiles: list[str] = []


class CommandRequest(BaseModel):
    text: str


class AnalysisRequest(BaseModel):
    player_logs: list[str]
    designer_logs: list[str]
    world: str = "dejaboom"
    provider: str = "rule"


def _load_world(config: AppConfig, name: str) -> WorldSpec:
    if name in config.worlds:
        return load_world_file(config.worlds[name])
    if name == "dejaboom":
        return load_world_file(bundled_world_path())
    raise HTTPException(status_code=404, detail=f"unknown world '{name}'")


def _build_provider(config: AppConfig, name: str, spec: WorldSpec) -> Provider:
    entry = config.providers.get(name)
    if entry is None:
        raise HTTPException(status_code=404, detail=f"unknown provider config '{name}'")
    kind = entry.get("type", "rule")
    if kind == "rule":
        return RuleBasedProvider(spec)
    if kind == "remote":
        endpoint = entry.get("endpoint", "")
        if not endpoint:
            # misconfigured remote with nothing to fall back to at startup
            raise HTTPException(
                status_code=503,
                detail="remote provider unavailable: no endpoint configured",
                headers={"Retry-After": "60"},
            )
        remote_config = RemoteConfig(
            endpoint=endpoint,
            model=entry.get("model", ""),
            api_key=entry.get("api_key", ""),
            timeout=float(entry.get("timeout", 30.0)),
        )
        return RemoteProvider(spec, config=remote_config)
    raise HTTPException(status_code=404, detail=f"unknown provider type '{kind}'")


def create_app(config: AppConfig | None = None) -> FastAPI:
    config = config or AppConfig()
    app = FastAPI(title="dejaboom", version="0.1.0")

    registry: dict[str, tuple[Session, threading.Lock]] = {}
    analyses: dict[str, dict] = {}

    def _get_session(session_id: str) -> tuple[Session, threading.Lock]:
        entry = registry.get(session_id)
        if entry is None:
            raise HTTPException(status_code=404, detail=f"unknown session '{session_id}'")
        return entry

    @app.post("/sessions", status_code=201)
    def create_session(request: CreateSessionRequest) -> dict:
        spec = _load_world(config, request.world)
        provider = _build_provider(config, request.provider, spec)
        session = sessions.start_session(
            spec,
            provider,
            player_id=request.player_id,
            profiles=tuple(request.profiles),
            world_ref=request.world,
        )
        registry[session.session_id] = (session, threading.Lock())
        persist_session(config.sessions_dir, session)
        return {"session_id": session.session_id}

    @app.post("/sessions/{session_id}/commands")
    def post_command(session_id: str, request: CommandRequest) -> dict:
        session, lock = _get_session(session_id)
        if config.command_conflict == REJECT:
            if not lock.acquire(blocking=False):
                raise HTTPException(status_code=429, detail="command already in flight")
        else:
            lock.acquire()
        try:
            records = sessions.step(session, request.text)
            persist_session(config.sessions_dir, session)
        except EmptyInputError:
            raise HTTPException(status_code=422, detail="empty command")
        except SessionOverError as exc:
            raise HTTPException(status_code=409, detail=f"session over: {exc}")
        finally:
            lock.release()
        return {"records": [r.to_dict() for r in records], "status": session.status}

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str) -> dict:
        session, _ = _get_session(session_id)
        return {
            "session_id": session.session_id,
            "status": session.status,
            "day": session.state.day,
            "step_in_day": session.state.step_in_day,
            "recent_records": [r.to_dict() for r in session.records[-10:]],
        }

    @app.get("/sessions/{session_id}/log")
    def get_log(session_id: str, from_seq: int = 0) -> dict:
        session, _ = _get_session(session_id)
        records = [r.to_dict() for r in session.records if r.seq > from_seq]
        next_seq = records[-1]["seq"] if records else from_seq
        return {"records": records, "next_seq": next_seq}

    @app.post("/analysis/graphs", status_code=201)
    def create_analysis(request: AnalysisRequest) -> dict:
        spec = _load_world(config, request.world)
        provider = _build_provider(config, request.provider, spec)
        try:
            payloads = []
            for ref in sorted(request.designer_logs) + sorted(request.player_logs):
                path = Path(ref)
                if not path.exists():
                    raise HTTPException(status_code=404, detail=f"log not found: {ref}")
                payloads.append(path.read_bytes())
            graph_id = hashlib.sha256(b"\x00".join(payloads)).hexdigest()[:16]
            if graph_id not in analyses:
                designer = [
                    (Path(ref).stem, load_records(ref)) for ref in sorted(request.designer_logs)
                ]
                graph0 = build_designer_graph(designer, provider)
                player_graphs = {
                    Path(ref).stem: build_player_graph(load_records(ref), provider, Path(ref).stem)
                    for ref in sorted(request.player_logs)
                }
                report = emergence_report(graph0, player_graphs, provider)
                analyses[graph_id] = {
                    "graph": graph_to_dict(report.merged_graph),
                    "emergence": report.to_dict(),
                    "designer_graph": graph_to_dict(graph0),
                }
        except (CorruptLogError, GraphError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return {"graph_id": graph_id}

    @app.get("/analysis/graphs/{graph_id}")
    def get_graph(graph_id: str) -> dict:
        entry = analyses.get(graph_id)
        if entry is None:
            raise HTTPException(status_code=404, detail=f"unknown graph '{graph_id}'")
        return entry["graph"]

    @app.get("/analysis/graphs/{graph_id}/emergence")
    def get_emergence(graph_id: str) -> dict:
        entry = analyses.get(graph_id)
        if entry is None:
            raise HTTPException(status_code=404, detail=f"unknown graph '{graph_id}'")
        return entry["emergence"]

    return app

"""HTTP face of the pipeline: ask questions, flag bad answers, health check.

Sessionless by design: every question is independent. Exchanges are
persisted to an append-only JSON-lines log; replaying the log rebuilds
the full exchange state, which is how flags survive restarts.
"""

from __future__ import annotations

import json
import sqlite3
import threading
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .agent import AgentConfig, Outcome
from .backend import BackendConfig, BackendUnavailable, script_entries_from_config
from .pipeline import answer_question

DEFAULT_BIND = "127.0.0.1:8000"


@dataclass
class ChatExchange:
    id: str
    question: str
    sql: str
    sql_result: str
    answer: str
    flagged: bool = False
    flag_reason: str | None = None
    timestamp: str = ""

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "question": self.question,
            "sql": self.sql,
            "sql_result": self.sql_result,
            "answer": self.answer,
            "flagged": self.flagged,
            "flag_reason": self.flag_reason,
            "timestamp": self.timestamp,
        }


@dataclass
class ServiceConfig:
    db_path: str
    backend: BackendConfig
    agent: AgentConfig = field(default_factory=AgentConfig)
    bind_address: str = DEFAULT_BIND
    exchange_log_path: str = "exchanges.jsonl"
    ui_dir: str | None = None


def load_service_config(path: str | Path) -> ServiceConfig:
    """Read the JSON service config; the API key itself never lives in the file."""
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    backend_raw = dict(raw["backend"])
    kind = backend_raw.get("kind", "remote")
    if kind == "scripted":
        backend = BackendConfig(
            kind="scripted",
            model_name=backend_raw.get("model_name", "scripted"),
            script=script_entries_from_config(backend_raw.get("script", [])),
        )
    else:
        backend = BackendConfig(
            kind="remote",
            model_name=backend_raw.get("model_name", "default"),
            endpoint=backend_raw["endpoint"],
            credential_ref=backend_raw.get("credential_ref", ""),
        )
    agent = AgentConfig(**raw.get("agent", {}))
    return ServiceConfig(
        db_path=raw["db_path"],
        backend=backend,
        agent=agent,
        bind_address=raw.get("bind_address", DEFAULT_BIND),
        exchange_log_path=raw.get("exchange_log_path", "exchanges.jsonl"),
        ui_dir=raw.get("ui_dir"),
    )


class ExchangeStore:
    """In-memory exchange index backed by an append-only JSON-lines log."""

    def __init__(self, log_path: str | Path):
        self.log_path = Path(log_path)
        self._lock = threading.Lock()
        self._exchanges: dict[str, ChatExchange] = {}
        if self.log_path.exists():
            self._replay()

    def _replay(self) -> None:
        for line in self.log_path.read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            record = json.loads(line)
            if record.get("type") == "flag":
                exchange = self._exchanges.get(record["id"])
                if exchange is not None:
                    exchange.flagged = True
                    exchange.flag_reason = record.get("reason")
            else:
                data = {key: value for key, value in record.items() if key != "type"}
                self._exchanges[data["id"]] = ChatExchange(**data)

    def _append(self, record: dict) -> None:
        with open(self.log_path, "a", encoding="utf-8") as stream:
            stream.write(json.dumps(record, ensure_ascii=False) + "\n")

    def add(self, exchange: ChatExchange) -> None:
        with self._lock:
            self._exchanges[exchange.id] = exchange
            self._append({"type": "exchange", **exchange.to_dict()})

    def flag(self, exchange_id: str, reason: str | None) -> ChatExchange | None:
        """Mark an exchange flagged; repeated flags do not duplicate log records."""
        with self._lock:
            exchange = self._exchanges.get(exchange_id)
            if exchange is None:
                return None
            if not exchange.flagged:
                exchange.flagged = True
                exchange.flag_reason = reason
                self._append(
                    {
                        "type": "flag",
                        "id": exchange_id,
                        "reason": reason,
                        "timestamp": _now(),
                    }
                )
            return exchange

    def get(self, exchange_id: str) -> ChatExchange | None:
        with self._lock:
            return self._exchanges.get(exchange_id)

    def all(self) -> list[ChatExchange]:
        with self._lock:
            return list(self._exchanges.values())


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


class AskRequest(BaseModel):
    question: str = ""


class FlagRequest(BaseModel):
    id: str
    reason: str | None = None


_APOLOGY = (
    "Lo siento, no pude generar una respuesta fiable para esta pregunta "
    "(motivo: {reason}). Intenta reformularla."
)


def check_database(db_path: str | Path) -> bool:
    """True when the corpus database exists and is readable."""
    if not Path(db_path).exists():
        return False
    try:
        conn = sqlite3.connect(f"file:{Path(db_path)}?mode=ro", uri=True)
        try:
            conn.execute("SELECT name FROM sqlite_master LIMIT 1").fetchone()
        finally:
            conn.close()
    except sqlite3.Error:
        return False
    return True


def create_app(config: ServiceConfig) -> FastAPI:
    app = FastAPI(title="tesischat")
    store = ExchangeStore(config.exchange_log_path)
    app.state.config = config
    app.state.store = store

    @app.post("/ask")
    def ask(body: AskRequest) -> dict:
        question = body.question.strip()
        if not question:
            raise HTTPException(status_code=400, detail="question must be non-empty")

        try:
            result = answer_question(question, config.db_path, config.backend, config.agent)
        except BackendUnavailable as exc:
            raise HTTPException(status_code=502, detail=str(exc)) from None
        if result.transcript.outcome is Outcome.BACKEND_FAILURE:
            raise HTTPException(status_code=502, detail="completion backend unavailable")

        if result.chat is not None:
            answer_text = result.chat.answer
        else:
            answer_text = _APOLOGY.format(reason=result.transcript.outcome.value)

        exchange = ChatExchange(
            id=uuid.uuid4().hex,
            question=question,
            sql=result.sql,
            sql_result=result.sql_result,
            answer=answer_text,
            timestamp=_now(),
        )
        store.add(exchange)
        return {
            "id": exchange.id,
            "answer": exchange.answer,
            "sql": exchange.sql,
            "sql_result": exchange.sql_result,
        }

    @app.post("/flag")
    def flag(body: FlagRequest) -> dict:
        exchange = store.flag(body.id, body.reason)
        if exchange is None:
            raise HTTPException(status_code=404, detail=f"unknown exchange id: {body.id}")
        return {"ok": True, "id": exchange.id, "flagged": exchange.flagged}

    @app.get("/health")
    def health() -> dict:
        db_ok = check_database(config.db_path)
        return {
            "status": "ok" if db_ok else "degraded",
            "db_ok": db_ok,
            "backend_kind": config.backend.kind,
        }

    ui_dir = _resolve_ui_dir(config)
    if ui_dir is not None:
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")
    else:

        @app.get("/")
        def index() -> dict:
            return {
                "service": "tesischat",
                "endpoints": ["POST /ask", "POST /flag", "GET /health"],
            }

    return app


def _resolve_ui_dir(config: ServiceConfig) -> str | None:
    candidates = [config.ui_dir] if config.ui_dir else ["frontend/dist"]
    for candidate in candidates:
        if candidate and Path(candidate).is_dir():
            return candidate
    return None

"""One-shot question pipeline: agent run, provenance extraction, composed answer."""

from __future__ import annotations

import sqlite3
from dataclasses import dataclass
from pathlib import Path

from .agent import AgentConfig, AgentTranscript, NoSqlFound, Outcome, extract_sql, run_agent
from .backend import BackendConfig
from .composer import ChatAnswer, compose_answer


@dataclass(frozen=True)
class PipelineResult:
    transcript: AgentTranscript
    sql: str
    sql_result: str
    chat: ChatAnswer | None


def open_corpus_db(db_path: str | Path) -> sqlite3.Connection:
    """Open the thesis database read-only; the agent never writes to it."""
    return sqlite3.connect(f"file:{Path(db_path)}?mode=ro", uri=True)


def last_query_provenance(transcript: AgentTranscript) -> tuple[str, str]:
    """The SQL actually executed last and its raw result, or empty strings."""
    for step in reversed(transcript.steps):
        if step.action != "sql_db_query":
            continue
        try:
            sql = extract_sql(step.action_input).text
        except NoSqlFound:
            sql = step.action_input.strip()
        return sql, step.observation
    return "", ""


def answer_question(
    question: str,
    db_path: str | Path,
    backend: BackendConfig,
    config: AgentConfig = AgentConfig(),
) -> PipelineResult:
    """Run the agent over the corpus and, when it answers, compose the reply.

    Raises BackendUnavailable only from the composing call; agent-side
    backend failures are reported through the transcript outcome.
    """
    conn = open_corpus_db(db_path)
    try:
        transcript = run_agent(question, conn, backend, config)
    finally:
        conn.close()

    sql, sql_result = last_query_provenance(transcript)
    if transcript.outcome is not Outcome.ANSWERED:
        return PipelineResult(transcript=transcript, sql=sql, sql_result=sql_result, chat=None)

    chat = compose_answer(question, sql, sql_result, backend)
    return PipelineResult(transcript=transcript, sql=sql, sql_result=sql_result, chat=chat)

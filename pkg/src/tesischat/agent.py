"""Zero-shot ReAct loop over the thesis database.

One run is a strictly serial loop: render the prompt (base prompt plus the
step history), ask the model for the next Thought/Action/Action Input,
dispatch one of the four SQL tools, feed the observation back. The loop
stops on a Final Answer, the iteration budget, two consecutive unparseable
completions, or a backend failure; nothing is ever raised out of it, every
failure mode lands in the transcript outcome.

SQL errors are deliberately returned as observation text so the model can
rewrite the query and try again instead of killing the run.
"""

from __future__ import annotations

import json
import re
import sqlite3
import threading
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Sequence

from .backend import BackendConfig, BackendUnavailable, CompletionRequest, complete

OBSERVATION_STOP = "Observation:"

TOOL_DESCRIPTIONS = {
    "sql_db_query": (
        "Input to this tool is a detailed and correct SQL query, "
        "output is a result from the database"
    ),
    "sql_db_schema": (
        "Input to this tool is a comma-separated list of tables, "
        "output is the schema and sample rows for those tables"
    ),
    "sql_db_list_tables": (
        "Input is an empty string, output is a comma-separated list of tables in the database."
    ),
    "sql_db_query_checker": (
        "Use this tool to double check if your query is correct before executing it."
    ),
}

TOOL_NAMES = tuple(TOOL_DESCRIPTIONS)


class DbError(RuntimeError):
    """The database handle cannot serve the request."""


class StepParseError(ValueError):
    """Model output holds neither a Final Answer nor an Action/Action Input pair."""


class NoSqlFound(ValueError):
    """No recognizable SQL statement in the model output."""


@dataclass(frozen=True)
class Tool:
    name: str
    description: str

    def __post_init__(self) -> None:
        if self.name not in TOOL_NAMES:
            raise ValueError(f"unknown tool name: {self.name!r}")


DEFAULT_TOOLS: tuple[Tool, ...] = tuple(
    Tool(name, description) for name, description in TOOL_DESCRIPTIONS.items()
)


@dataclass
class AgentStep:
    thought: str
    action: str
    action_input: str
    observation: str = ""


@dataclass(frozen=True)
class FinalAnswer:
    text: str


class Outcome(str, Enum):
    ANSWERED = "answered"
    ITERATION_LIMIT = "iteration_limit"
    PARSE_FAILURE = "parse_failure"
    BACKEND_FAILURE = "backend_failure"


@dataclass
class AgentTranscript:
    question: str
    steps: list[AgentStep] = field(default_factory=list)
    final_answer: str | None = None
    outcome: Outcome = Outcome.ITERATION_LIMIT


@dataclass(frozen=True)
class AgentConfig:
    max_iterations: int = 10
    sample_rows: int = 3
    read_only: bool = True

    def __post_init__(self) -> None:
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if self.sample_rows < 0:
            raise ValueError("sample_rows must be non-negative")


class StatementKind(str, Enum):
    SELECT = "select"
    OTHER = "other"


@dataclass(frozen=True)
class SqlStatement:
    text: str
    statement_kind: StatementKind


# ---------------------------------------------------------------------------
# prompt construction
# ---------------------------------------------------------------------------

AGENT_PROMPT_PREFIX = (
    "You are an agent designed to interact with a SQL database. Given an input question, "
    "create a syntactically correct sqlite query to run, then look at the results of the "
    "query and return the answer.\n\n"
    "You have access to tools for interacting with the database. Only use the below tools. "
    "Only use the information returned by the below tools to construct your final answer.\n\n"
    "You must double check your query before executing it. If you get an error while "
    "executing a query, rewrite the query and try again.\n\n"
)

AGENT_FORMAT_BLOCK = (
    "Use the following format:\n\n"
    "Question: the input question you must answer\n"
    "Thought: you should always think about what to do\n"
    "Action: the action to take, should be one of [{tool_names}]\n"
    "Action Input: the input to the action\n"
    "Observation: the result of the action\n"
    "... (this Thought/Action/Action Input/Observation can repeat N times)\n"
    "Thought: I now know the final answer\n"
    "Final Answer: the final answer to the original input question\n\n"
    "Begin!\n\n"
)

SEED_THOUGHT = (
    "Thought: I should look at the tables in the database to see what I can query.  "
    "Then I should query the schema of the most relevant tables."
)


def build_agent_prompt(question: str, tools: Sequence[Tool] = DEFAULT_TOOLS) -> str:
    """Assemble the agent prompt: role, tool list, format block, question, seed thought."""
    if not question.strip():
        raise ValueError("question must be non-empty")
    tool_block = "".join(f"{tool.name} - {tool.description}\n" for tool in tools)
    tool_names = ", ".join(tool.name for tool in tools)
    return (
        AGENT_PROMPT_PREFIX
        + tool_block
        + "\n"
        + AGENT_FORMAT_BLOCK.replace("{tool_names}", tool_names)
        + f"Question: {question}\n"
        + SEED_THOUGHT
        + "\n"
    )


# ---------------------------------------------------------------------------
# step parsing and rendering
# ---------------------------------------------------------------------------

_MARKERS = ("Thought:", "Action:", "Action Input:", "Observation:", "Final Answer:")


def _marker_of(line: str) -> str | None:
    stripped = line.lstrip()
    for marker in _MARKERS:
        if stripped.startswith(marker):
            return marker
    return None


def _content_after(line: str, marker: str) -> str:
    content = line.lstrip()[len(marker):]
    return content[1:] if content.startswith(" ") else content


def _collect(lines: list[str], start: int, marker: str, stop_at_blank: bool) -> str:
    parts = [_content_after(lines[start], marker)]
    for line in lines[start + 1 :]:
        if _marker_of(line) is not None:
            break
        if stop_at_blank and not line.strip():
            break
        parts.append(line)
    return "\n".join(parts).rstrip()


def _strip_wrapping_quotes(text: str) -> str:
    trimmed = text.strip()
    if len(trimmed) >= 2 and trimmed[0] == trimmed[-1] and trimmed[0] in "\"'`":
        return trimmed[1:-1]
    return trimmed


def parse_llm_step(generated: str) -> AgentStep | FinalAnswer:
    """Parse one model completion into the next step or the final answer.

    A line starting with "Final Answer:" wins outright. Otherwise the step
    is the first complete Action/Action Input pair after the last
    "Thought:" line. The action name is trimmed of brackets and quotes;
    the action input runs to the end of its line(s), stopping at a blank
    line or the next marker.
    """
    lines = generated.splitlines()

    for index, line in enumerate(lines):
        if _marker_of(line) == "Final Answer:":
            head = _content_after(line, "Final Answer:")
            return FinalAnswer("\n".join([head] + lines[index + 1 :]).strip())

    last_thought = -1
    for index, line in enumerate(lines):
        if _marker_of(line) == "Thought:":
            last_thought = index
    thought = _collect(lines, last_thought, "Thought:", stop_at_blank=False) if last_thought >= 0 else ""

    for index in range(last_thought + 1, len(lines)):
        if _marker_of(lines[index]) != "Action:":
            continue
        for follow in range(index + 1, len(lines)):
            marker = _marker_of(lines[follow])
            if marker == "Action Input:":
                action = _content_after(lines[index], "Action:").strip().strip("[]\"'` ").strip()
                action_input = _strip_wrapping_quotes(
                    _collect(lines, follow, "Action Input:", stop_at_blank=True)
                )
                return AgentStep(thought=thought, action=action, action_input=action_input)
            if marker is not None:
                break
    raise StepParseError("no Final Answer and no complete Action/Action Input pair")


def render_step(step: AgentStep) -> str:
    return (
        f"Thought: {step.thought}\n"
        f"Action: {step.action}\n"
        f"Action Input: {step.action_input}\n"
        f"Observation: {step.observation}\n"
    )


# ---------------------------------------------------------------------------
# tools
# ---------------------------------------------------------------------------


def tool_list_tables(conn: sqlite3.Connection) -> str:
    """Comma-separated table names, alphabetical."""
    try:
        rows = conn.execute(
            "SELECT name FROM sqlite_master WHERE type='table' "
            "AND name NOT LIKE 'sqlite_%' ORDER BY name"
        ).fetchall()
    except sqlite3.Error as exc:
        raise DbError(str(exc)) from None
    return ", ".join(row[0] for row in rows)


_CELL_WIDTH = 40


def _render_cell(value: object) -> str:
    text = "" if value is None else str(value)
    if len(text) > _CELL_WIDTH:
        return text[: _CELL_WIDTH - 3] + "..."
    return text


def _render_sample_table(headers: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    cells = [list(headers)] + [[_render_cell(value) for value in row] for row in rows]
    widths = [max(len(line[col]) for line in cells) for col in range(len(headers))]
    return "\n".join(
        "  ".join(cell.ljust(width) for cell, width in zip(line, widths)).rstrip()
        for line in cells
    )


def tool_schema(conn: sqlite3.Connection, tables: str, sample_rows: int = 3) -> str:
    """CREATE statement plus the first sample rows for each named table.

    Unknown tables come back as error text inside the observation so the
    model can correct itself.
    """
    names = [name.strip() for name in tables.split(",") if name.strip()]
    if not names:
        return "Error: no table name given."
    parts: list[str] = []
    for name in names:
        found = conn.execute(
            "SELECT sql FROM sqlite_master WHERE type='table' AND name=?", (name,)
        ).fetchone()
        if found is None:
            parts.append(f"Error: table '{name}' not found in the database.")
            continue
        block = found[0]
        if sample_rows > 0:
            quoted = name.replace('"', '""')
            cursor = conn.execute(f'SELECT * FROM "{quoted}" LIMIT ?', (sample_rows,))
            headers = [description[0] for description in cursor.description]
            block += "\n\n" + _render_sample_table(headers, cursor.fetchall())
        parts.append(block)
    return "\n\n".join(parts)


QUERY_CHECK_PROMPT = (
    "{query}\n\n"
    "Double check the sqlite query above for common mistakes, including comparing values "
    "of the wrong type, quoting identifiers improperly, and referencing columns that do "
    "not exist. Rewrite the query if there are any mistakes. If the query is correct, "
    "reproduce it exactly. Output only the final SQL query."
)


def tool_query_checker(sql: str, backend: BackendConfig) -> str:
    """Ask the model to proofread a query; returns the (possibly identical) SQL."""
    prompt = QUERY_CHECK_PROMPT.replace("{query}", sql)
    response = complete(CompletionRequest(prompt=prompt), backend)
    try:
        return extract_sql(response.text).text
    except NoSqlFound:
        return response.text.strip()


_FENCE_RE = re.compile(r"```(?:sql)?\s*(.*?)```", re.DOTALL | re.IGNORECASE)
_LABEL_RE = re.compile(r"^\s*(?:sql|query)\s*:\s*", re.IGNORECASE)

_SQL_KEYWORDS = {
    "select", "insert", "update", "delete", "drop", "create", "alter", "replace",
    "pragma", "with", "vacuum", "attach", "detach", "begin", "commit", "rollback",
    "explain", "reindex", "analyze",
}


def _semicolon_cut(text: str) -> int | None:
    """Index of the first statement-terminating semicolon, ignoring quoted literals."""
    in_single = in_double = False
    for index, char in enumerate(text):
        if char == "'" and not in_double:
            in_single = not in_single
        elif char == '"' and not in_single:
            in_double = not in_double
        elif char == ";" and not in_single and not in_double:
            return index
    return None


def extract_sql(model_text: str) -> SqlStatement:
    """Pull the first SQL statement out of free-form model output.

    Strips code fences, leading "SQL:"/"Query:" labels, wrapping quotes,
    and anything after the first statement-terminating semicolon.
    """
    text = model_text
    fenced = _FENCE_RE.search(text)
    if fenced:
        text = fenced.group(1)
    text = _LABEL_RE.sub("", text.strip(), count=1)
    text = _strip_wrapping_quotes(text)
    cut = _semicolon_cut(text)
    if cut is not None:
        text = text[: cut + 1]
    text = text.strip()

    first_word = re.match(r"[A-Za-z]+", text)
    if first_word is None or first_word.group(0).lower() not in _SQL_KEYWORDS:
        raise NoSqlFound("no recognizable SQL statement")
    kind = StatementKind.SELECT if first_word.group(0).lower() == "select" else StatementKind.OTHER
    return SqlStatement(text=text, statement_kind=kind)


def tool_query(
    conn: sqlite3.Connection, sql: SqlStatement, config: AgentConfig = AgentConfig()
) -> str:
    """Execute a statement and render rows as pipe-separated lines, no header.

    SQL errors (and read-only violations) come back as observation text so
    the loop survives and the model can retry.
    """
    if config.read_only and sql.statement_kind is not StatementKind.SELECT:
        return "Error: only SELECT statements are allowed against the thesis database."
    try:
        rows = conn.execute(sql.text).fetchall()
    except sqlite3.Error as exc:
        return f"Error: {exc}"
    return "\n".join(
        "|".join("" if value is None else str(value) for value in row) for row in rows
    )


# ---------------------------------------------------------------------------
# the loop
# ---------------------------------------------------------------------------


def _dispatch(
    step: AgentStep, conn: sqlite3.Connection, backend: BackendConfig, config: AgentConfig
) -> str:
    if step.action == "sql_db_list_tables":
        try:
            return tool_list_tables(conn)
        except DbError as exc:
            return f"Error: {exc}"
    if step.action == "sql_db_schema":
        return tool_schema(conn, step.action_input, config.sample_rows)
    if step.action == "sql_db_query_checker":
        return tool_query_checker(step.action_input, backend)
    try:
        statement = extract_sql(step.action_input)
    except NoSqlFound:
        return "Error: no SQL statement found in the action input."
    return tool_query(conn, statement, config)


def run_agent(
    question: str,
    conn: sqlite3.Connection,
    backend: BackendConfig,
    config: AgentConfig = AgentConfig(),
) -> AgentTranscript:
    """Run the full loop for one question; every failure mode ends up in the transcript."""
    transcript = AgentTranscript(question=question)
    base_prompt = build_agent_prompt(question)
    history: list[str] = []
    consecutive_unusable = 0

    for _ in range(config.max_iterations):
        prompt = base_prompt + "".join(history)
        try:
            response = complete(
                CompletionRequest(prompt=prompt, stop_sequences=(OBSERVATION_STOP,)), backend
            )
        except BackendUnavailable:
            transcript.outcome = Outcome.BACKEND_FAILURE
            return transcript

        try:
            parsed = parse_llm_step(response.text)
        except StepParseError:
            parsed = None

        if isinstance(parsed, FinalAnswer):
            transcript.final_answer = parsed.text
            transcript.outcome = Outcome.ANSWERED
            return transcript

        # unparseable output and made-up tool names get the same treatment:
        # skip the round, give up after two in a row
        if parsed is None or parsed.action not in TOOL_NAMES:
            consecutive_unusable += 1
            if consecutive_unusable >= 2:
                transcript.outcome = Outcome.PARSE_FAILURE
                return transcript
            continue
        consecutive_unusable = 0

        try:
            parsed.observation = _dispatch(parsed, conn, backend, config)
        except BackendUnavailable:
            transcript.outcome = Outcome.BACKEND_FAILURE
            return transcript
        transcript.steps.append(parsed)
        history.append(render_step(parsed))

    transcript.outcome = Outcome.ITERATION_LIMIT
    return transcript


# ---------------------------------------------------------------------------
# transcript audit log
# ---------------------------------------------------------------------------

_LOG_LOCK = threading.Lock()


def transcript_to_dict(transcript: AgentTranscript) -> dict:
    return {
        "question": transcript.question,
        "steps": [
            {
                "thought": step.thought,
                "action": step.action,
                "action_input": step.action_input,
                "observation": step.observation,
            }
            for step in transcript.steps
        ],
        "outcome": transcript.outcome.value,
        "final_answer": transcript.final_answer,
    }


def transcript_from_dict(record: dict) -> AgentTranscript:
    return AgentTranscript(
        question=record["question"],
        steps=[AgentStep(**step) for step in record["steps"]],
        final_answer=record["final_answer"],
        outcome=Outcome(record["outcome"]),
    )


def append_transcript_log(path: str | Path, transcript: AgentTranscript) -> None:
    """Append one run to a line-oriented audit log (one JSON record per line)."""
    line = json.dumps(transcript_to_dict(transcript), ensure_ascii=False)
    with _LOG_LOCK:
        with open(path, "a", encoding="utf-8") as stream:
            stream.write(line + "\n")


def read_transcript_log(path: str | Path) -> list[AgentTranscript]:
    transcripts = []
    with open(path, encoding="utf-8") as stream:
        for line in stream:
            if line.strip():
                transcripts.append(transcript_from_dict(json.loads(line)))
    return transcripts

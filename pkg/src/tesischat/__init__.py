"""Conversational access to a thesis corpus through a SQL-grounded agent loop."""

from .agent import AgentConfig, AgentTranscript, Outcome, run_agent
from .backend import BackendConfig, CompletionRequest, complete, scripted_backend
from .composer import compose_answer
from .ingest import IngestReport, ThesisRecord, build_database, ingest_csv
from .metrics import EvalCase, EvalReport, adapted_score, bleu, evaluate_corpus
from .pipeline import answer_question

__version__ = "0.1.0"

__all__ = [
    "AgentConfig",
    "AgentTranscript",
    "BackendConfig",
    "CompletionRequest",
    "EvalCase",
    "EvalReport",
    "IngestReport",
    "Outcome",
    "ThesisRecord",
    "adapted_score",
    "answer_question",
    "bleu",
    "build_database",
    "complete",
    "compose_answer",
    "evaluate_corpus",
    "ingest_csv",
    "run_agent",
    "scripted_backend",
]

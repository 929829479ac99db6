"""Final response generation: wrap the question and raw SQL result for the model.

The response prompt is Spanish and pins the thesis collection as the main
topic; the model output is returned to the user untouched.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timezone

from .backend import BackendConfig, CompletionRequest, complete

ANSWER_PROMPT = (
    "Dada la siguiente pregunta del usuario sobre las tesis de Geología y el resultado SQL, "
    "genera una respuesta detallada al usuario mencionando siempre las tesis de Geología "
    "como tópico principal.\n"
    "Question: {question}\n"
    "SQL Result: {result}"
)


@dataclass(frozen=True)
class ChatAnswer:
    question: str
    sql: str
    sql_result: str
    answer: str
    created_at: datetime


def build_answer_prompt(question: str, sql_result: str) -> str:
    """Substitute question and result into the response prompt, verbatim, once each."""
    head, _, rest = ANSWER_PROMPT.partition("{question}")
    middle, _, tail = rest.partition("{result}")
    return head + question + middle + sql_result + tail


def compose_answer(
    question: str, sql: str, sql_result: str, backend: BackendConfig
) -> ChatAnswer:
    """Ask the model for the user-facing answer grounded in the SQL result."""
    prompt = build_answer_prompt(question, sql_result)
    response = complete(CompletionRequest(prompt=prompt), backend)
    return ChatAnswer(
        question=question,
        sql=sql,
        sql_result=sql_result,
        answer=response.text,
        created_at=datetime.now(timezone.utc),
    )

#!/usr/bin/env python3
"""Run the canned count question end to end, printing the full agent trace.

No model is contacted: the scripted backend replays the conversation, the
SQL really executes against a freshly built corpus database.
"""

from __future__ import annotations

import tempfile
from pathlib import Path

from tesischat.pipeline import answer_question
from tesischat.sampledata import COUNT_QUESTION, build_fixture_db, count_backend


def main() -> int:
    with tempfile.TemporaryDirectory() as tmp:
        db_path = Path(tmp) / "tesis.db"
        build_fixture_db(db_path)
        result = answer_question(COUNT_QUESTION, db_path, count_backend())

    print(f"Pregunta: {COUNT_QUESTION}\n")
    for index, step in enumerate(result.transcript.steps, start=1):
        print(f"[paso {index}]")
        print(f"  Thought:      {step.thought}")
        print(f"  Action:       {step.action}")
        print(f"  Action Input: {step.action_input}")
        observation = step.observation.replace("\n", "\n                ")
        print(f"  Observation:  {observation}")
    print(f"\nSQL ejecutado: {result.sql}")
    print(f"Resultado:     {result.sql_result}")
    print(f"Respuesta:     {result.chat.answer if result.chat else '(sin respuesta)'}")
    print(f"Estado:        {result.transcript.outcome.value}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

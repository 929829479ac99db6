"""Command-line surface: ingest, ask, serve, eval."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .agent import Outcome
from .backend import BackendUnavailable
from .ingest import BadNumeric, HeaderMismatch, MalformedRow, StorageError, ingest_csv
from .metrics import EmptyCorpus, EmptyInput, evaluate_corpus, load_eval_cases
from .pipeline import answer_question
from .service import create_app, load_service_config


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tesischat")
    commands = parser.add_subparsers(dest="command", required=True)

    ingest = commands.add_parser("ingest", help="load a thesis CSV into the SQLite corpus")
    ingest.add_argument("--csv", required=True)
    ingest.add_argument("--db", required=True)
    ingest.add_argument("--replace", action="store_true", help="overwrite an existing database")

    ask = commands.add_parser("ask", help="answer one question end to end")
    ask.add_argument("--question", required=True)
    ask.add_argument("--config", required=True, help="service config JSON (db + backend)")

    serve = commands.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--config", required=True)

    evaluate = commands.add_parser("eval", help="score an eval corpus and apply the pass gate")
    evaluate.add_argument("--cases", required=True)
    evaluate.add_argument("--report", help="write the full JSON report here")
    evaluate.add_argument("--threshold", type=float, default=0.7)

    return parser


def cmd_ingest(args: argparse.Namespace) -> int:
    db_path = Path(args.db)
    if db_path.exists() and not args.replace:
        print(f"error: {db_path} already exists (pass --replace to overwrite)", file=sys.stderr)
        return 1
    try:
        report = ingest_csv(args.csv, db_path)
    except (HeaderMismatch, MalformedRow, BadNumeric, StorageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"read {report.records_read} rows, loaded {report.records_loaded} into '{report.table_name}'")
    for row_number, reason in report.rejected:
        print(f"rejected row {row_number}: {reason}")
    return 0


def cmd_ask(args: argparse.Namespace) -> int:
    try:
        config = load_service_config(args.config)
    except (OSError, KeyError, ValueError) as exc:
        print(f"error: bad config: {exc}", file=sys.stderr)
        return 1
    try:
        result = answer_question(args.question, config.db_path, config.backend, config.agent)
    except BackendUnavailable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # unreadable database and friends
        print(f"error: {exc}", file=sys.stderr)
        return 1

    if result.transcript.outcome is not Outcome.ANSWERED or result.chat is None:
        print(f"error: agent run failed ({result.transcript.outcome.value})", file=sys.stderr)
        return 1
    print(f"Respuesta: {result.chat.answer}")
    print(f"SQL: {result.sql}")
    print(f"Resultado: {result.sql_result}")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    try:
        config = load_service_config(args.config)
    except (OSError, KeyError, ValueError) as exc:
        print(f"error: bad config: {exc}", file=sys.stderr)
        return 1
    if not Path(config.db_path).exists():
        print(f"error: database not found: {config.db_path}", file=sys.stderr)
        return 1
    host, _, port = config.bind_address.partition(":")
    app = create_app(config)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8000))
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    try:
        cases = load_eval_cases(args.cases)
        report = evaluate_corpus(cases, threshold=args.threshold)
    except (OSError, KeyError, ValueError, EmptyCorpus, EmptyInput) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    width = max((len(case_id) for case_id, _ in report.scores), default=2)
    print(f"{'id'.ljust(width)}  rule           value")
    for case_id, score in report.scores:
        print(f"{case_id.ljust(width)}  {score.rule.value.ljust(13)}  {score.value:.4f}")
    print(f"mean: {report.mean:.4f}  threshold: {report.threshold}  pass: {report.passed}")

    if args.report:
        Path(args.report).write_text(
            json.dumps(report.to_dict(), ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
        )
    return 0 if report.passed else 1


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    handlers = {
        "ingest": cmd_ingest,
        "ask": cmd_ask,
        "serve": cmd_serve,
        "eval": cmd_eval,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())

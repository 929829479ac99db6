#!/usr/bin/env python3
"""Generate the demo corpus artifacts: CSV, SQLite database, eval cases.

Usage:
    python scripts/make_corpus.py [--out data/] [--bulk 244]

Writes:
    corpus.csv     curated corpus (known aggregations) in CSV form
    tesis.db       the same corpus as the SQLite file the agent queries
    bulk.csv       large generated corpus for load experiments
    cases.jsonl    validation question/reference/candidate triples
    service.json   ready-to-use scripted service config pointing at tesis.db
"""

from __future__ import annotations

import argparse
import json
from pathlib import Path

from tesischat.ingest import write_corpus_csv
from tesischat.sampledata import (
    build_fixture_db,
    count_script_entries,
    fixture_records,
    sample_records,
    validation_cases,
)


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", default="data", help="output directory")
    parser.add_argument("--bulk", type=int, default=244, help="size of the generated corpus")
    args = parser.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    write_corpus_csv(fixture_records(), out / "corpus.csv")
    report = build_fixture_db(out / "tesis.db")
    write_corpus_csv(sample_records(args.bulk), out / "bulk.csv")

    with open(out / "cases.jsonl", "w", encoding="utf-8") as stream:
        for case in validation_cases():
            stream.write(
                json.dumps(
                    {
                        "id": case.id,
                        "question": case.question,
                        "reference": case.reference,
                        "candidate": case.candidate,
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )

    service_config = {
        "db_path": str(out / "tesis.db"),
        "bind_address": "127.0.0.1:8000",
        "exchange_log_path": str(out / "exchanges.jsonl"),
        "backend": {"kind": "scripted", "script": count_script_entries()},
        "agent": {"max_iterations": 10, "sample_rows": 3, "read_only": True},
    }
    (out / "service.json").write_text(
        json.dumps(service_config, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )

    print(f"wrote {out}/corpus.csv, tesis.db ({report.records_loaded} rows), "
          f"bulk.csv ({args.bulk} rows), cases.jsonl, service.json")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

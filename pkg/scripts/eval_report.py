#!/usr/bin/env python3
"""Score the bundled validation set and print the per-case report.

These are the frozen reference numbers for this scorer; the tests in
tests/test_metrics.py assert the same values.
"""

from __future__ import annotations

from tesischat.metrics import evaluate_corpus
from tesischat.sampledata import validation_cases


def main() -> int:
    report = evaluate_corpus(validation_cases())
    width = max(len(case_id) for case_id, _ in report.scores)
    print(f"{'id'.ljust(width)}  rule           value")
    for case_id, score in report.scores:
        print(f"{case_id.ljust(width)}  {score.rule.value.ljust(13)}  {score.value:.4f}")
    print(f"\nmean: {report.mean:.4f}  threshold: {report.threshold}  pass: {report.passed}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

"""Answer quality scoring: classic BLEU plus a three-band adapted scorer.

The adapted scorer reflects how grounded answers are judged in practice:
an answer that carries the right number is nearly always useful, keyword
overlap is a weaker but real signal, and pure phrasing similarity matters
least. Routing:

1. shared numeric value            -> value in [0.8, 1.0]
2. content-token overlap (Jaccard) -> value in (0.6, 1.0]
3. otherwise                       -> 0.4 * BLEU, so never above 0.4
"""

from __future__ import annotations

import csv
import json
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Sequence

from .stopwords import SPANISH_STOPWORDS


class EmptyInput(ValueError):
    """A candidate or reference with no scorable content."""


class EmptyCorpus(ValueError):
    """evaluate_corpus called with no cases."""


PASS_THRESHOLD = 0.7

_TOKEN_RE = re.compile(r"\d+(?:[.,]\d+)?|\w+", re.UNICODE)
_NUMBER_RE = re.compile(r"\d+(?:[.,]\d+)?")


def tokenize(text: str) -> list[str]:
    """Lowercase tokens split on whitespace and punctuation.

    Diacritics are preserved, underscores are word-internal, and numeric
    literals (decimal point or decimal comma) stay single tokens.
    """
    return [m.group(0).lower() for m in _TOKEN_RE.finditer(text)]


def extract_numbers(text: str) -> set[float]:
    """All numeric values in the text, normalized so "10" == "10.0" == "10,0"."""
    values: set[float] = set()
    for token in tokenize(text):
        if _NUMBER_RE.fullmatch(token):
            values.add(float(token.replace(",", ".")))
    return values


def content_tokens(text: str) -> set[str]:
    """Token set minus the frozen Spanish stopword list."""
    return set(tokenize(text)) - SPANISH_STOPWORDS


def _ngram_counts(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def bleu(candidate: Sequence[str], reference: Sequence[str], max_n: int = 4) -> float:
    """Unsmoothed BLEU over token lists.

    Geometric mean of clipped n-gram precisions for n = 1..min(max_n,
    len(candidate)) with uniform weights, times the brevity penalty
    exp(1 - r/c) when the candidate is shorter than the reference. Any
    zero precision yields 0.
    """
    if max_n < 1:
        raise ValueError("max_n must be at least 1")
    if not candidate or not reference:
        raise EmptyInput("bleu requires non-empty token lists")
    top = min(max_n, len(candidate))
    log_sum = 0.0
    for n in range(1, top + 1):
        cand_counts = _ngram_counts(candidate, n)
        ref_counts = _ngram_counts(reference, n)
        clipped = sum(min(count, ref_counts[gram]) for gram, count in cand_counts.items())
        if clipped == 0:
            return 0.0
        log_sum += math.log(clipped / sum(cand_counts.values()))
    c, r = len(candidate), len(reference)
    penalty = 1.0 if c >= r else math.exp(1.0 - r / c)
    return penalty * math.exp(log_sum / top)


class ScoreRule(str, Enum):
    NUMBER_MATCH = "number_match"
    KEYWORD_BAND = "keyword_band"
    BLEU_FALLBACK = "bleu_fallback"


@dataclass(frozen=True)
class EvalScore:
    value: float
    rule: ScoreRule
    detail: dict = field(default_factory=dict)


@dataclass(frozen=True)
class EvalCase:
    id: str
    question: str
    reference: str
    candidate: str


@dataclass(frozen=True)
class EvalReport:
    scores: list[tuple[str, EvalScore]]
    mean: float
    passed: bool
    threshold: float = PASS_THRESHOLD

    def to_dict(self) -> dict:
        return {
            "scores": [
                {"id": case_id, "rule": score.rule.value, "value": score.value, "detail": score.detail}
                for case_id, score in self.scores
            ],
            "mean": self.mean,
            "pass": self.passed,
            "threshold": self.threshold,
            "chart": [[case_id, score.value] for case_id, score in self.scores],
        }


def adapted_score(candidate: str, reference: str) -> EvalScore:
    """Score a generated answer against the expected one.

    Shared numbers dominate, then keyword overlap, then scaled BLEU. The
    Jaccard overlap of stopword-filtered tokens positions the score inside
    the first two bands.
    """
    if not candidate.strip() or not reference.strip():
        raise EmptyInput("candidate and reference must be non-empty")

    shared_numbers = extract_numbers(candidate) & extract_numbers(reference)
    cand_content = content_tokens(candidate)
    ref_content = content_tokens(reference)
    union = cand_content | ref_content
    shared_tokens = cand_content & ref_content
    jaccard = len(shared_tokens) / len(union) if union else 0.0

    if shared_numbers:
        return EvalScore(
            value=0.8 + 0.2 * jaccard,
            rule=ScoreRule.NUMBER_MATCH,
            detail={"shared_numbers": sorted(shared_numbers), "jaccard": jaccard},
        )
    if jaccard > 0:
        return EvalScore(
            value=0.6 + 0.4 * jaccard,
            rule=ScoreRule.KEYWORD_BAND,
            detail={"jaccard": jaccard, "shared_tokens": sorted(shared_tokens)},
        )
    cand_tokens = tokenize(candidate)
    ref_tokens = tokenize(reference)
    # punctuation-only strings tokenize to nothing; score them as zero
    # rather than refusing the pair
    raw = bleu(cand_tokens, ref_tokens) if cand_tokens and ref_tokens else 0.0
    return EvalScore(value=0.4 * raw, rule=ScoreRule.BLEU_FALLBACK, detail={"bleu": raw})


def summarize(values: Sequence[float], threshold: float = PASS_THRESHOLD) -> tuple[float, bool]:
    """Mean of the per-case values and the strict pass gate (mean > threshold)."""
    mean = sum(values) / len(values)
    return mean, mean > threshold


def evaluate_corpus(cases: Sequence[EvalCase], threshold: float = PASS_THRESHOLD) -> EvalReport:
    """Score every case, aggregate by case id, and apply the pass gate."""
    if not cases:
        raise EmptyCorpus("evaluate_corpus requires at least one case")
    scored = sorted(
        ((case.id, adapted_score(case.candidate, case.reference)) for case in cases),
        key=lambda pair: pair[0],
    )
    mean, passed = summarize([score.value for _, score in scored], threshold)
    return EvalReport(scores=scored, mean=mean, passed=passed, threshold=threshold)


def load_eval_cases(path: str | Path) -> list[EvalCase]:
    """Read an eval corpus file: JSON-lines, or CSV with a header row.

    Each record needs id, question, reference and candidate fields.
    """
    text = Path(path).read_text(encoding="utf-8")
    stripped = text.lstrip()
    cases: list[EvalCase] = []
    if stripped.startswith("{"):
        for line in text.splitlines():
            if not line.strip():
                continue
            record = json.loads(line)
            cases.append(
                EvalCase(
                    id=str(record["id"]),
                    question=str(record.get("question", "")),
                    reference=str(record["reference"]),
                    candidate=str(record["candidate"]),
                )
            )
    else:
        reader = csv.DictReader(text.splitlines())
        for record in reader:
            cases.append(
                EvalCase(
                    id=record["id"],
                    question=record.get("question", ""),
                    reference=record["reference"],
                    candidate=record["candidate"],
                )
            )
    return cases

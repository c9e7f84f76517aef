"""Extraction benchmark: per-row match/noise at leaf-path granularity."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterable

from .extraction import extract_answer, prefix_think
from .schema_model import JsonParseError, JsonValue, leaf_map, parse_json, scalar_equals


class Status(str, enum.Enum):
    NO_OUTPUT = "no_output"
    INVALID_JSON = "invalid_json"
    VALID = "valid"


@dataclass(frozen=True)
class RowOutcome:
    id: str
    status: Status
    match_pct: float | None = None
    noise_pct: float | None = None


def compare(answer: JsonValue, truth: JsonValue) -> tuple[float, float]:
    """(match %, noise %) of *answer* against *truth*."""
    truth_leaves = leaf_map(truth)
    if not truth_leaves:
        raise ValueError("ground truth has no leaf values to match")
    answer_leaves = leaf_map(answer)
    correct = 0
    for path, value in answer_leaves.items():
        if path in truth_leaves and scalar_equals(value, truth_leaves[path]):
            correct += 1
    match = 100.0 * correct / len(truth_leaves)
    noise = 100.0 * (len(answer_leaves) - correct) / len(answer_leaves) if answer_leaves else 0.0
    return match, noise


def row_outcome(completion: str, truth: JsonValue, row_id: str = "") -> RowOutcome:
    text = extract_answer(prefix_think(completion))
    if not text:
        if not leaf_map(truth):
            raise ValueError("ground truth has no leaf values to match")
        return RowOutcome(row_id, Status.NO_OUTPUT)
    try:
        answer = parse_json(text)
    except JsonParseError:
        if not leaf_map(truth):
            raise ValueError("ground truth has no leaf values to match")
        return RowOutcome(row_id, Status.INVALID_JSON)
    match, noise = compare(answer, truth)
    return RowOutcome(row_id, Status.VALID, match, noise)


@dataclass(frozen=True)
class EvalSummary:
    total_rows: int
    rows_no_output: int
    rows_invalid_json: int
    rows_valid_json: int
    mean_match_pct: float
    mean_noise_pct: float

    def to_json(self) -> dict:
        return {
            "total_rows": self.total_rows,
            "rows_no_output": self.rows_no_output,
            "rows_invalid_json": self.rows_invalid_json,
            "rows_valid_json": self.rows_valid_json,
            "mean_match_pct": pct2(self.mean_match_pct),
            "mean_noise_pct": pct2(self.mean_noise_pct),
        }


def pct2(x: float) -> Decimal:
    """Percentage fixed to two decimals (half-up) for report files."""
    return Decimal(repr(x)).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP)


class SummaryAccumulator:
    """Single-pass reduction of row outcomes.

    By default means cover valid rows only; ``mean_over_all`` counts the
    other rows as scoring 0 on both metrics.
    """

    def __init__(self, mean_over_all: bool = False):
        self.mean_over_all = mean_over_all
        self.counts = {s: 0 for s in Status}
        self.match_sum = 0.0
        self.noise_sum = 0.0

    def add(self, row: RowOutcome) -> None:
        self.counts[row.status] += 1
        if row.status is Status.VALID:
            self.match_sum += row.match_pct
            self.noise_sum += row.noise_pct

    def result(self) -> EvalSummary:
        total = sum(self.counts.values())
        denom = total if self.mean_over_all else self.counts[Status.VALID]
        return EvalSummary(
            total_rows=total,
            rows_no_output=self.counts[Status.NO_OUTPUT],
            rows_invalid_json=self.counts[Status.INVALID_JSON],
            rows_valid_json=self.counts[Status.VALID],
            mean_match_pct=self.match_sum / denom if denom else 0.0,
            mean_noise_pct=self.noise_sum / denom if denom else 0.0,
        )


def summarize(rows: Iterable[RowOutcome], mean_over_all: bool = False) -> EvalSummary:
    acc = SummaryAccumulator(mean_over_all)
    for row in rows:
        acc.add(row)
    return acc.result()

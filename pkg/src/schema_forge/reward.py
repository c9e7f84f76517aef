"""JSON-based reward: top-level key agreement plus a size-similarity term."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .extraction import extract_answer, prefix_think
from .inspection import InspectionLog, Sampler
from .schema_model import JsonParseError, JsonValue, deep_equals, parse_json

HIGH_REWARD_THRESHOLD = 0.6
HIGH_REWARD_LOG_PROBABILITY = 0.6


class Failure(str, enum.Enum):
    NO_ANSWER = "no_answer"
    ANSWER_PARSE_ERROR = "answer_parse_error"
    TRUTH_PARSE_ERROR = "truth_parse_error"


@dataclass(frozen=True)
class RewardBreakdown:
    id: str
    reward: float
    key_match_score: float | None = None
    length_ratio: float | None = None
    failure: Failure | None = None

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "reward": self.reward,
            "key_match_score": self.key_match_score,
            "length_ratio": self.length_ratio,
            "failure": self.failure.value if self.failure else None,
        }


def _key_match_fraction(answer: JsonValue, truth: JsonValue) -> Fraction:
    if not (isinstance(answer, dict) and isinstance(truth, dict)):
        return Fraction(int(deep_equals(answer, truth)))
    total = len(answer.keys() | truth.keys())
    if total == 0:
        return Fraction(0)
    matching = sum(1 for k in answer.keys() & truth.keys() if deep_equals(answer[k], truth[k]))
    return Fraction(matching, total)


def _size(v: JsonValue) -> int:
    n = len(v) if isinstance(v, (dict, list, tuple)) else 1
    return n or 1


def _length_fraction(answer: JsonValue, truth: JsonValue) -> Fraction:
    a, g = _size(answer), _size(truth)
    return Fraction(min(a, g), max(a, g))


def key_match_score(answer: JsonValue, truth: JsonValue) -> float:
    """Share of the union of top-level keys whose values deep-match.

    Non-object inputs score 1 if the two values are deep-equal, else 0.
    """
    return float(_key_match_fraction(answer, truth))


def length_ratio(answer: JsonValue, truth: JsonValue) -> float:
    return float(_length_fraction(answer, truth))


def round_tenths(x: Fraction) -> Fraction:
    """Round to one decimal place, halves away from zero."""
    sign = -1 if x < 0 else 1
    return sign * Fraction(math.floor(abs(x) * 10 + Fraction(1, 2)), 10)


def score_pair(row_id: str, completion: str, ground_truth) -> RewardBreakdown:
    """Reward for one completion. *ground_truth* is JSON text or an already parsed value."""
    answer_text = extract_answer(prefix_think(completion))
    if not answer_text:
        return RewardBreakdown(row_id, 0.0, failure=Failure.NO_ANSWER)
    try:
        answer = parse_json(answer_text)
    except JsonParseError:
        return RewardBreakdown(row_id, 0.0, failure=Failure.ANSWER_PARSE_ERROR)
    if isinstance(ground_truth, str):
        try:
            truth = parse_json(ground_truth)
        except JsonParseError:
            return RewardBreakdown(row_id, 0.0, failure=Failure.TRUTH_PARSE_ERROR)
    else:
        truth = ground_truth
    km = _key_match_fraction(answer, truth)
    lr = _length_fraction(answer, truth)
    raw = min(max((km + lr) / 2, Fraction(0)), Fraction(1))
    return RewardBreakdown(row_id, float(round_tenths(raw)), float(km), float(lr))


class JsonRewardScorer:
    """Applies the high-reward inspection sampling in row order."""

    def __init__(self, log_probability: float = HIGH_REWARD_LOG_PROBABILITY,
                 seed: int = 0, log: InspectionLog | None = None):
        if not 0.0 <= log_probability <= 1.0:
            raise ValueError(f"log probability {log_probability} outside [0, 1]")
        self.log_probability = log_probability
        self.log = log
        self._sampler = Sampler(seed)

    def record(self, completion: str, result: RewardBreakdown) -> None:
        if result.reward < HIGH_REWARD_THRESHOLD:
            return
        if self._sampler.draw() < self.log_probability and self.log is not None:
            self.log.append({
                "id": result.id,
                "prefixed_text": prefix_think(completion),
                "reward": result.reward,
            })

    def score(self, row_id: str, completion: str, ground_truth) -> RewardBreakdown:
        result = score_pair(row_id, completion, ground_truth)
        self.record(completion, result)
        return result


def json_reward(
    completions: Sequence[str],
    ground_truths: Sequence,
    log_probability: float = HIGH_REWARD_LOG_PROBABILITY,
    rng_seed: int = 0,
    log: InspectionLog | None = None,
    ids: Sequence[str] | None = None,
) -> list[RewardBreakdown]:
    if len(completions) != len(ground_truths):
        raise ValueError(
            f"{len(completions)} completions but {len(ground_truths)} ground truths"
        )
    ids = ids if ids is not None else [str(i) for i in range(len(completions))]
    scorer = JsonRewardScorer(log_probability, rng_seed, log)
    return [scorer.score(i, c, g) for i, c, g in zip(ids, completions, ground_truths)]

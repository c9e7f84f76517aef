"""Think/answer block handling and the binary format reward."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from .inspection import InspectionLog, Sampler, timestamp

THINK_OPEN = "<think>"
THINK_CLOSE = "</think>"
ANSWER_OPEN = "<answer>"
ANSWER_CLOSE = "</answer>"

FORMAT_PATTERN = r"^<think>([^<]*(?:<(?!/?think>)[^<]*)*)</think>\n<answer>([\s\S]*?)</answer>$"
# fullmatch keeps `$` from matching before a trailing newline
_FORMAT_RE = re.compile(FORMAT_PATTERN)

DEFAULT_FORMAT_LOG_PROBABILITY = 0.1


@dataclass(frozen=True)
class Completion:
    id: str
    raw: str

    @property
    def prefixed(self) -> str:
        return prefix_think(self.raw)


@dataclass(frozen=True)
class ExtractedBlocks:
    think: str | None
    answer: str | None


def prefix_think(raw: str) -> str:
    return THINK_OPEN + raw


def extract_answer(prefixed: str) -> str | None:
    """Text between the first ``<answer>`` and the next ``</answer>``.

    Returns None if either tag is missing. The result may be ``""``.
    """
    start = prefixed.find(ANSWER_OPEN)
    if start < 0:
        return None
    start += len(ANSWER_OPEN)
    end = prefixed.find(ANSWER_CLOSE, start)
    if end < 0:
        return None
    return prefixed[start:end]


def extract_blocks(prefixed: str) -> ExtractedBlocks:
    think = None
    start = prefixed.find(THINK_OPEN)
    if start >= 0:
        end = prefixed.find(THINK_CLOSE, start + len(THINK_OPEN))
        if end >= 0:
            think = prefixed[start + len(THINK_OPEN):end]
    return ExtractedBlocks(think=think, answer=extract_answer(prefixed))


def check_format(raw: str) -> int:
    """1 if ``<think>`` + *raw* is exactly one think block then one answer block."""
    return 1 if _FORMAT_RE.fullmatch(prefix_think(raw)) else 0


def _check_lengths(completions, ground_truths):
    if len(completions) != len(ground_truths):
        raise ValueError(
            f"{len(completions)} completions but {len(ground_truths)} ground truths"
        )


class FormatScorer:
    """Stateful format scoring with seeded inspection sampling.

    Every completion draws from the sampler before it is checked, so the
    logged set depends only on the seed and the row order.
    """

    def __init__(self, log_probability: float = DEFAULT_FORMAT_LOG_PROBABILITY,
                 seed: int = 0, log: InspectionLog | None = None):
        if not 0.0 <= log_probability <= 1.0:
            raise ValueError(f"log probability {log_probability} outside [0, 1]")
        self.log_probability = log_probability
        self.log = log
        self._sampler = Sampler(seed)

    def record(self, row_id: str, raw: str, reward: int) -> None:
        sampled = self._sampler.draw() < self.log_probability
        if sampled and self.log is not None:
            self.log.append({
                "id": row_id,
                "prefixed_text": prefix_think(raw),
                "format_reward": reward,
                "timestamp": timestamp(),
            })

    def score(self, row_id: str, raw: str) -> int:
        reward = check_format(raw)
        self.record(row_id, raw, reward)
        return reward


def format_reward(
    completions: Sequence[str],
    ground_truths: Sequence,
    log_probability: float = DEFAULT_FORMAT_LOG_PROBABILITY,
    rng_seed: int = 0,
    log: InspectionLog | None = None,
    ids: Sequence[str] | None = None,
) -> list[int]:
    """Binary format reward per completion.

    *ground_truths* only has to match *completions* in length; its
    contents are not consulted.
    """
    _check_lengths(completions, ground_truths)
    ids = ids if ids is not None else [str(i) for i in range(len(completions))]
    scorer = FormatScorer(log_probability, rng_seed, log)
    return [scorer.score(i, c) for i, c in zip(ids, completions)]

"""Group-relative advantages and the GRPO objective over supplied log-probabilities.

No model lives here: callers pass log pi(c_i) for each sampled completion
and get the scalar loss (and its gradient with respect to those
log-probabilities) back.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from typing import Sequence

WEIGHT_SUM_TOLERANCE = 1e-9


@dataclass(frozen=True)
class RewardVector:
    rewards: tuple[float, ...]
    weights: tuple[float, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "rewards", tuple(float(r) for r in self.rewards))
        if not self.rewards:
            raise ValueError("need at least one reward")
        if self.weights is None:
            k = len(self.rewards)
            object.__setattr__(self, "weights", tuple(1.0 / k for _ in range(k)))
        else:
            object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        if len(self.weights) != len(self.rewards):
            raise ValueError(f"{len(self.rewards)} rewards but {len(self.weights)} weights")
        if any(w < 0 for w in self.weights):
            raise ValueError("weights must be non-negative")
        if abs(math.fsum(self.weights) - 1.0) > WEIGHT_SUM_TOLERANCE:
            raise ValueError(f"weights sum to {math.fsum(self.weights)}, not 1")


def combine_rewards(vector: RewardVector) -> float:
    """Weighted sum of the per-function rewards (uniform weights by default)."""
    return math.fsum(w * r for w, r in zip(vector.weights, vector.rewards))


def relative_advantages(rewards: Sequence[float]) -> list[float]:
    """For each sample, the fraction of the *other* samples it strictly beats."""
    m = len(rewards)
    if m == 0:
        raise ValueError("empty group")
    if m == 1:
        return [0.0]
    ordered = sorted(rewards)
    return [bisect.bisect_left(ordered, r) / (m - 1) for r in rewards]


@dataclass(frozen=True)
class AdvantageGroup:
    rewards: tuple[float, ...]
    advantages: tuple[float, ...]

    @classmethod
    def from_rewards(cls, rewards: Sequence[float]) -> "AdvantageGroup":
        return cls(tuple(rewards), tuple(relative_advantages(rewards)))

    @property
    def size(self) -> int:
        return len(self.rewards)


@dataclass
class GrpoLossInput:
    """Loss inputs. ``log_probs`` is flat, in group order."""

    groups: list[AdvantageGroup]
    log_probs: list[float]
    entropy_coefficient: float = 0.0
    kl_coefficient: float = 0.0
    reference_log_probs: list[float] | None = None
    # sum over groups by default; True divides by the number of groups
    mean_over_groups: bool = False

    def validate(self) -> None:
        n = sum(g.size for g in self.groups)
        if len(self.log_probs) != n:
            raise ValueError(f"{len(self.log_probs)} log-probs for {n} grouped completions")
        if any(lp > 0 for lp in self.log_probs):
            raise ValueError("log-probabilities must be <= 0")
        if self.entropy_coefficient < 0 or self.kl_coefficient < 0:
            raise ValueError("regularizer coefficients must be non-negative")
        if self.kl_coefficient > 0:
            if self.reference_log_probs is None:
                raise ValueError("KL term enabled but no reference log-probs given")
            if len(self.reference_log_probs) != n:
                raise ValueError("reference log-probs do not line up with log-probs")

    def _advantages(self) -> list[float]:
        return [a for g in self.groups for a in g.advantages]


def grpo_loss(inp: GrpoLossInput) -> float:
    r"""Policy-gradient term plus optional entropy and KL regularizers.

    .. math::
        L = -\sum_i A_i \log\pi_i
            + \beta_H \sum_i \pi_i \log\pi_i
            + \beta_{KL} \sum_i \pi_i (\log\pi_i - \log\pi^{ref}_i)
    """
    inp.validate()
    terms = [-a * lp for a, lp in zip(inp._advantages(), inp.log_probs)]
    if inp.entropy_coefficient:
        terms += [inp.entropy_coefficient * lp * math.exp(lp) for lp in inp.log_probs]
    if inp.kl_coefficient:
        terms += [
            inp.kl_coefficient * math.exp(lp) * (lp - ref)
            for lp, ref in zip(inp.log_probs, inp.reference_log_probs)
        ]
    loss = math.fsum(terms)
    if inp.mean_over_groups and inp.groups:
        loss /= len(inp.groups)
    return loss


def grpo_loss_grad(inp: GrpoLossInput) -> list[float]:
    """d loss / d log pi_i for every completion."""
    inp.validate()
    refs = inp.reference_log_probs or [0.0] * len(inp.log_probs)
    grads = []
    for a, lp, ref in zip(inp._advantages(), inp.log_probs, refs):
        p = math.exp(lp)
        g = -a
        g += inp.entropy_coefficient * p * (1.0 + lp)
        g += inp.kl_coefficient * p * (lp - ref + 1.0)
        grads.append(g)
    if inp.mean_over_groups and inp.groups:
        grads = [g / len(inp.groups) for g in grads]
    return grads


def log_softmax(logits: Sequence[float]) -> list[float]:
    top = max(logits)
    log_z = top + math.log(math.fsum(math.exp(x - top) for x in logits))
    return [x - log_z for x in logits]


def softmax_logit_grad(grad_log_probs: Sequence[float], logits: Sequence[float]) -> list[float]:
    """Chain a log-prob gradient through log_softmax back to the logits.

    With log pi = log_softmax(theta), dL/dtheta_k = g_k - pi_k * sum_i g_i.
    """
    probs = [math.exp(lp) for lp in log_softmax(logits)]
    total = math.fsum(grad_log_probs)
    return [g - p * total for g, p in zip(grad_log_probs, probs)]

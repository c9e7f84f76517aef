import math
import random

import hypothesis.strategies as st
import numpy as np
import pytest
from hypothesis import given

from schema_forge.grpo import (
    AdvantageGroup,
    GrpoLossInput,
    RewardVector,
    combine_rewards,
    grpo_loss,
    grpo_loss_grad,
    log_softmax,
    relative_advantages,
    softmax_logit_grad,
)


def brute_advantages(rewards):
    m = len(rewards)
    if m == 1:
        return [0.0]
    return [sum(1 for j in range(m) if j != i and rewards[i] > rewards[j]) / (m - 1) for i in range(m)]


def test_combine_examples():
    assert combine_rewards(RewardVector([1.0, 0.7], [0.5, 0.5])) == pytest.approx(0.85)
    assert combine_rewards(RewardVector([0.3], [1])) == 0.3
    assert combine_rewards(RewardVector([0, 1], [0.25, 0.75])) == 0.75
    assert combine_rewards(RewardVector([0.2, 0.4])) == pytest.approx(0.3)


@pytest.mark.parametrize("rewards,weights", [([1, 2], [1.0]), ([1], [0.5]), ([1, 2], [1.5, -0.5]), ([], None)])
def test_reward_vector_domain_errors(rewards, weights):
    with pytest.raises(ValueError):
        RewardVector(rewards, weights)


def test_advantage_examples():
    assert relative_advantages([0.2, 0.5, 0.9]) == [0, 0.5, 1.0]
    assert relative_advantages([0.4] * 3) == [0, 0, 0]
    assert relative_advantages([0.9]) == [0]
    assert relative_advantages([1, 1, 0]) == [0.5, 0.5, 0]


@given(st.lists(st.integers(0, 5), min_size=1, max_size=12))
def test_advantages_match_pairwise_count(rewards):
    assert relative_advantages(rewards) == brute_advantages(rewards)


@given(st.lists(st.floats(-100, 100), min_size=2, max_size=16))
def test_advantage_sum_bound(rewards):
    total = sum(relative_advantages(rewards))
    m = len(rewards)
    if len(set(rewards)) == m:
        assert total == pytest.approx(m / 2)
    else:
        assert total <= m / 2 + 1e-12


# dyadic rewards keep 2x+1 and x**3 exact in floating point
dyadic = st.lists(st.integers(-1000, 1000), min_size=1, max_size=16).map(lambda ks: [k / 8 for k in ks])


@given(dyadic)
def test_monotone_transform_invariance(rewards):
    base = relative_advantages(rewards)
    assert relative_advantages([2 * r + 1 for r in rewards]) == base
    assert relative_advantages([r ** 3 for r in rewards]) == base


def _input(advantages, log_probs, **kw):
    group = AdvantageGroup(tuple(0.0 for _ in advantages), tuple(advantages))
    return GrpoLossInput([group], list(log_probs), **kw)


def test_loss_examples():
    assert grpo_loss(_input([0, 0, 0], [-1, -2, -3])) == 0
    assert grpo_loss(_input([1], [-2.0])) == 2.0
    assert grpo_loss(_input([0, 1], [-1, -3])) == 3.0


def test_loss_sums_groups_unless_mean():
    g1 = AdvantageGroup.from_rewards([0.1, 0.9])
    g2 = AdvantageGroup.from_rewards([0.5, 0.2])
    inp = GrpoLossInput([g1, g2], [-1.0, -2.0, -3.0, -4.0])
    assert grpo_loss(inp) == 2.0 + 3.0
    inp.mean_over_groups = True
    assert grpo_loss(inp) == 2.5


def test_loss_regularizers():
    lp = [-0.5, -1.5]
    ent = grpo_loss(_input([0, 0], lp, entropy_coefficient=0.1))
    assert ent == pytest.approx(0.1 * sum(x * math.exp(x) for x in lp))
    kl = grpo_loss(_input([0, 0], lp, kl_coefficient=0.2, reference_log_probs=[-1.0, -1.0]))
    assert kl == pytest.approx(0.2 * sum(math.exp(x) * (x + 1.0) for x in lp))


def test_loss_domain_errors():
    with pytest.raises(ValueError, match="reference"):
        grpo_loss(_input([0], [-1], kl_coefficient=0.1))
    with pytest.raises(ValueError, match="<= 0"):
        grpo_loss(_input([0], [0.5]))
    with pytest.raises(ValueError):
        grpo_loss(_input([0, 1], [-1]))


def test_loss_decreases_with_best_logprob():
    adv = [0.0, 0.5, 1.0]
    lp = [-2.0, -2.0, -2.0]
    before = grpo_loss(_input(adv, lp))
    after = grpo_loss(_input(adv, [-2.0, -2.0, -1.5]))
    assert after < before
    assert grpo_loss_grad(_input(adv, lp)) == [-a for a in adv]


def _numeric_grad(f, x, h=1e-5):
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    for k in range(x.size):
        up, down = x.copy(), x.copy()
        up[k] += h
        down[k] -= h
        out[k] = (f(up) - f(down)) / (2 * h)
    return out


@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("coefs", [(0.0, 0.0), (0.3, 0.0), (0.0, 0.4), (0.2, 0.1)])
def test_softmax_policy_gradient_check(seed, coefs):
    rng = random.Random(seed)
    logits = [rng.gauss(0, 1) for _ in range(8)]
    group = AdvantageGroup.from_rewards([rng.random() for _ in range(8)])
    ref = log_softmax([rng.gauss(0, 1) for _ in range(8)])
    ent, kl = coefs

    def loss(theta):
        return grpo_loss(GrpoLossInput([group], log_softmax(list(theta)), ent, kl, ref))

    analytic = softmax_logit_grad(
        grpo_loss_grad(GrpoLossInput([group], log_softmax(logits), ent, kl, ref)), logits
    )
    numeric = _numeric_grad(loss, logits)
    rel = np.abs(np.array(analytic) - numeric) / np.maximum(np.abs(numeric), 1e-8)
    assert rel.max() < 1e-5


def test_log_softmax_normalizes():
    lp = log_softmax([1000.0, 1001.0, 999.0])
    assert math.fsum(math.exp(x) for x in lp) == pytest.approx(1.0)

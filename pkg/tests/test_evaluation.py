import random

import pytest

from planting import corrupt
from schema_forge.evaluation import RowOutcome, Status, compare, pct2, row_outcome, summarize
from schema_forge.schema_model import dumps, leaf_paths, parse_json
from schema_forge.synth import SynthConfig, emit_triple


def wrap(answer_text):
    return f"reasoning</think>\n<answer>{answer_text}</answer>"


TRUTH = {"a": 1, "b": {"c": "x", "d": [True, 2]}}


def test_identity():
    out = row_outcome(wrap(dumps(TRUTH)), TRUTH, "r1")
    assert out == RowOutcome("r1", Status.VALID, 100.0, 0.0)


def test_empty_answer_object():
    out = row_outcome(wrap("{}"), TRUTH)
    assert (out.match_pct, out.noise_pct) == (0.0, 0.0)


def test_three_of_four_plus_extra():
    answer = {"a": 1, "b": {"c": "x", "d": [True, 99]}}
    assert compare(answer, TRUTH) == (75.0, 25.0)
    answer = {"a": 1, "b": {"c": "x", "d": [True]}, "extra": 0}
    assert compare(answer, TRUTH) == (75.0, 25.0)


def test_statuses():
    assert row_outcome("no tags", TRUTH).status is Status.NO_OUTPUT
    assert row_outcome(wrap(""), TRUTH).status is Status.NO_OUTPUT
    assert row_outcome(wrap("{bad"), TRUTH).status is Status.INVALID_JSON
    invalid = row_outcome(wrap("{bad"), TRUTH)
    assert invalid.match_pct is None and invalid.noise_pct is None


def test_truth_without_leaves_is_domain_error():
    for completion in (wrap("{}"), "none", wrap("{")):
        with pytest.raises(ValueError):
            row_outcome(completion, {"xs": []})


def test_numbers_compare_by_value():
    assert compare(parse_json('{"v": 1.0}'), parse_json('{"v": 1}')) == (100.0, 0.0)


def test_summarize_examples():
    empty = summarize([])
    assert (empty.total_rows, empty.rows_valid_json, empty.mean_match_pct, empty.mean_noise_pct) == (0, 0, 0, 0)
    two = summarize([RowOutcome("a", Status.VALID, 100.0, 0.0), RowOutcome("b", Status.VALID, 50.0, 0.0)])
    assert two.mean_match_pct == 75.0
    three = summarize([
        RowOutcome("a", Status.NO_OUTPUT),
        RowOutcome("b", Status.INVALID_JSON),
        RowOutcome("c", Status.VALID, 60.0, 10.0),
    ])
    assert (three.rows_no_output, three.rows_invalid_json, three.rows_valid_json) == (1, 1, 1)
    assert (three.mean_match_pct, three.mean_noise_pct) == (60.0, 10.0)
    assert three.rows_no_output + three.rows_invalid_json + three.rows_valid_json == three.total_rows


def test_mean_over_all():
    rows = [RowOutcome("a", Status.NO_OUTPUT), RowOutcome("c", Status.VALID, 60.0, 10.0)]
    s = summarize(rows, mean_over_all=True)
    assert (s.mean_match_pct, s.mean_noise_pct) == (30.0, 5.0)


def test_pct2():
    assert str(pct2(62.405)) == "62.41"
    assert str(pct2(100.0)) == "100.00"
    assert str(pct2(0.0)) == "0.00"


@pytest.mark.parametrize("seed", range(20))
def test_match_partitions_truth_leaves(seed):
    rng = random.Random(seed)
    t = emit_triple(SynthConfig(seed=seed, max_depth=3))
    answer, k, n = corrupt(t.filled, 0.3, rng)
    match, noise = compare(answer, t.filled)
    assert match == pytest.approx(100.0 * (n - k) / n)
    assert noise == pytest.approx(100.0 * k / n)
    reproduced = sum(
        1 for p in leaf_paths(t.filled)
        if any(p.segments == a.segments and a.value == p.value for a in leaf_paths(answer))
    )
    assert match + 100.0 * (n - reproduced) / n == pytest.approx(100.0)


@pytest.mark.parametrize("seed", range(20))
def test_extra_leaf_never_helps(seed):
    rng = random.Random(seed)
    t = emit_triple(SynthConfig(seed=seed, max_depth=2))
    answer, _, _ = corrupt(t.filled, 0.2, rng)
    match, noise = compare(answer, t.filled)
    answer["properties"]["variables"]["Unlisted (u)"] = 1
    match2, noise2 = compare(answer, t.filled)
    assert match2 <= match and noise2 >= noise

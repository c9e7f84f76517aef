"""Independent reference transcriptions used to check the package."""

import json
import random
from decimal import ROUND_HALF_UP, Decimal, localcontext
from fractions import Fraction


def _strict_eq(a, b):
    if isinstance(a, bool) or isinstance(b, bool):
        return type(a) is type(b) and a == b
    if isinstance(a, dict) and isinstance(b, dict):
        return a.keys() == b.keys() and all(_strict_eq(a[k], b[k]) for k in a)
    if isinstance(a, list) and isinstance(b, list):
        return len(a) == len(b) and all(_strict_eq(x, y) for x, y in zip(a, b))
    if isinstance(a, (dict, list)) or isinstance(b, (dict, list)):
        return False
    if isinstance(a, (int, float)) and isinstance(b, (int, float)):
        return a == b
    return type(a) is type(b) and a == b


def _length(v):
    return len(v) if isinstance(v, (dict, list)) else 1


def reference_reward(completion, ground_truth_text):
    """The JSON reward written out step by step, returning tenths as an int (or 0)."""
    c = "<think>" + completion
    start = c.find("<answer>")
    ans = ""
    if start != -1:
        end = c.find("</answer>", start + len("<answer>"))
        if end != -1:
            ans = c[start + len("<answer>"):end]
    if ans == "":
        return 0
    try:
        answer_json = json.loads(ans)
        gt_json = json.loads(ground_truth_text)
    except ValueError:
        return 0
    if isinstance(answer_json, dict) and isinstance(gt_json, dict):
        k_a, k_g = set(answer_json), set(gt_json)
        total_fields = len(k_a | k_g)
        matching_fields = sum(1 for k in k_a & k_g if _strict_eq(answer_json[k], gt_json[k]))
        key_match_score = Fraction(matching_fields, total_fields) if total_fields > 0 else Fraction(0)
    else:
        key_match_score = Fraction(int(_strict_eq(answer_json, gt_json)))
    l_a = _length(answer_json) or 1
    l_g = _length(gt_json) or 1
    length_ratio = Fraction(min(l_a, l_g), max(l_a, l_g))
    r = (key_match_score + length_ratio) / 2
    r = min(max(r, Fraction(0)), Fraction(1))
    with localcontext() as ctx:
        ctx.prec = 60
        d = Decimal(r.numerator) / Decimal(r.denominator)
    return int(d.quantize(Decimal("0.1"), rounding=ROUND_HALF_UP) * 10)


_KEYS = list("abcdefgh")


def random_value(rng, depth):
    kind = rng.randrange(7 if depth > 0 else 5)
    if kind == 0:
        return rng.randint(0, 3)
    if kind == 1:
        return rng.choice(["x", "y", "1"])
    if kind == 2:
        return rng.choice([True, False, None])
    if kind == 3:
        return rng.choice([1.5, 2.0, 0.25])
    if kind == 4:
        return rng.choice([0, 1, "0"])
    if kind == 5:
        return [random_value(rng, depth - 1) for _ in range(rng.randint(0, 2))]
    return {k: random_value(rng, depth - 1) for k in rng.sample(_KEYS[:3], rng.randint(0, 2))}


def random_object(rng, max_keys=6, depth=3):
    keys = rng.sample(_KEYS, rng.randint(0, max_keys))
    return {k: random_value(rng, depth - 1) for k in keys}


def related_pair(rng):
    """An (answer, truth) pair sharing some keys and values."""
    truth = random_object(rng)
    answer = {}
    for k, v in truth.items():
        roll = rng.random()
        if roll < 0.5:
            answer[k] = v
        elif roll < 0.8:
            answer[k] = random_value(rng, 2)
    for k in rng.sample(_KEYS, rng.randint(0, 2)):
        answer.setdefault(k, random_value(rng, 2))
    keys = list(answer)
    rng.shuffle(keys)
    return {k: answer[k] for k in keys[:6]}, truth


def render_completion(rng, answer):
    text = json.dumps(answer, indent=rng.choice([None, 2]))
    roll = rng.random()
    if roll < 0.05:
        return "no answer block here</think>"
    if roll < 0.10:
        return f"r</think>\n<answer>{text[:-1]}</answer>"
    return f"reasoning</think>\n<answer>{text}</answer>"

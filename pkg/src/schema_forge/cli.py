"""Batch command line: ``schema-forge <subcommand> ...``.

Every flag can also come from an environment variable named
``SCHEMA_FORGE_<FLAG>`` (upper case, dashes as underscores); explicit
flags win. Exit status is 0 on success, 1 on usage errors and 2 on
malformed input data.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import functools
import os
import sys
from decimal import Decimal
from typing import Sequence

from . import __version__
from .batch import DigestingReader, InputError, RunManifest, ordered_map, parse_row
from .evaluation import Status, SummaryAccumulator, pct2, row_outcome
from .extraction import DEFAULT_FORMAT_LOG_PROBABILITY, FormatScorer, check_format
from .grpo import RewardVector, combine_rewards, relative_advantages
from .inspection import InspectionLog
from .reward import HIGH_REWARD_LOG_PROBABILITY, JsonRewardScorer, score_pair
from .schema_model import JsonParseError, dumps, parse_json
from .synth import CHECKBOX_STYLES, LAYOUTS, TABLE_STYLES, canonical_completion, corpus_configs, emit_triple

ENV_PREFIX = "SCHEMA_FORGE_"
CYCLE = "cycle"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _probability(text: str) -> float:
    value = float(text)
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"{text} is not in [0, 1]")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"{text} must be >= 1")
    return value


def _weights(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(w) for w in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad weight list {text!r}") from None


def _apply_env(parser: argparse.ArgumentParser) -> None:
    """Take defaults from SCHEMA_FORGE_* variables."""
    for action in parser._actions:
        if not action.option_strings or action.dest in ("help", "version"):
            continue
        value = os.environ.get(ENV_PREFIX + action.dest.upper())
        if value is None:
            continue
        if isinstance(action, argparse._StoreTrueAction):
            action.default = value.strip().lower() in ("1", "true", "yes", "on")
        else:
            # argparse runs string defaults through the action's type
            action.default = value
            action.required = False


def _common(p: argparse.ArgumentParser, *, seed=True, jobs=True) -> None:
    if seed:
        p.add_argument("--seed", type=int, default=None, help="RNG seed (default 0, with a warning)")
    if jobs:
        p.add_argument("--jobs", type=_positive, default=os.cpu_count() or 1,
                       help="worker processes (default: logical cores)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="schema-forge", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"schema-forge {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("gen-corpus", help="synthesize (text, blank, filled) triples")
    _common(p)
    p.add_argument("--count", type=_positive, default=1)
    p.add_argument("--max-depth", type=int, default=3)
    p.add_argument("--layout", choices=(*LAYOUTS, CYCLE), default=CYCLE)
    p.add_argument("--table-style", choices=(*TABLE_STYLES, CYCLE), default=CYCLE)
    p.add_argument("--checkbox-style", choices=(*CHECKBOX_STYLES, CYCLE), default=CYCLE)
    p.add_argument("--domain", default=None, help="domain label (default: cycle the built-in list)")
    p.add_argument("--filler-density", type=_probability, default=0.3)
    p.add_argument("--emit-completions", action="store_true",
                   help="add canonical 'completion' and 'ground_truth' fields to each row")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_corpus, uses_rng=True)

    p = sub.add_parser("score-json", help="JSON-based reward per row")
    _common(p)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--log-prob", type=_probability, default=HIGH_REWARD_LOG_PROBABILITY,
                   help="sampling probability for high-reward rows")
    p.add_argument("--log-path", default=None)
    p.set_defaults(func=cmd_score_json, uses_rng=True)

    p = sub.add_parser("score-format", help="binary think/answer format reward per row")
    _common(p)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--log-prob", type=_probability, default=DEFAULT_FORMAT_LOG_PROBABILITY)
    p.add_argument("--log-path", default=None)
    p.set_defaults(func=cmd_score_format, uses_rng=True)

    p = sub.add_parser("advantage", help="combined rewards and group-relative advantages")
    _common(p, jobs=False)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--weights", type=_weights, default=None, help="comma-separated, summing to 1")
    p.set_defaults(func=cmd_advantage, uses_rng=False)

    p = sub.add_parser("eval", help="benchmark summary over completions")
    _common(p)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True, help="summary JSON path")
    p.add_argument("--per-row", default=None, help="optional per-row CSV path")
    p.add_argument("--mean-over-all", action="store_true",
                   help="average over all rows, scoring non-valid rows as 0")
    p.set_defaults(func=cmd_eval, uses_rng=False)

    for action in sub.choices.values():
        _apply_env(action)
    return parser


def _snapshot(args: argparse.Namespace) -> dict:
    skip = {"func", "uses_rng", "jobs", "command", "seed"}
    return {k: (list(v) if isinstance(v, tuple) else v) for k, v in sorted(vars(args).items()) if k not in skip}


def _open_out(path):
    return open(path, "w", encoding="utf-8", newline="\n")


# -- gen-corpus -------------------------------------------------------------


def _gen_row(config, emit_completions: bool) -> str:
    triple = emit_triple(config)
    row = triple.to_json()
    if emit_completions:
        row["completion"] = canonical_completion(triple)
        row["ground_truth"] = dumps(triple.filled)
    return dumps(row)


def cmd_gen_corpus(args) -> int:
    pick = lambda v: None if v == CYCLE else v  # noqa: E731
    try:
        configs = corpus_configs(
            args.seed, args.count,
            layout=pick(args.layout), table_style=pick(args.table_style),
            checkbox_style=pick(args.checkbox_style), domain_label=args.domain,
            max_depth=args.max_depth, filler_density=args.filler_density,
        )
        first = next(configs)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    manifest = RunManifest(args.out, args.command, _snapshot(args), args.seed)
    fn = functools.partial(_gen_row, emit_completions=args.emit_completions)
    n = 0
    with _open_out(args.out) as out:
        for line in ordered_map(fn, _chain(first, configs), args.jobs):
            out.write(line + "\n")
            n += 1
    manifest.finalize(None, [args.out])
    print(f"gen-corpus: wrote {n} rows to {args.out}", file=sys.stderr)
    return 0


def _chain(first, rest):
    yield first
    yield from rest


# -- score-json / score-format ---------------------------------------------


def _json_row(item):
    lineno, text = item
    row = parse_row(lineno, text, ("completion", "ground_truth"))
    completion = row["completion"]
    if not isinstance(completion, str):
        raise InputError(lineno, "completion must be a string")
    row_id = str(row.get("id", lineno))
    return completion, score_pair(row_id, completion, row["ground_truth"])


def cmd_score_json(args) -> int:
    reader = DigestingReader(args.input)
    manifest = RunManifest(args.out, args.command, _snapshot(args), args.seed)
    log = _fresh_log(args.log_path)
    scorer = JsonRewardScorer(args.log_prob, args.seed, log)
    with log or contextlib.nullcontext(), _open_out(args.out) as out:
        for completion, result in ordered_map(_json_row, reader, args.jobs):
            scorer.record(completion, result)
            out.write(dumps(result.to_json()) + "\n")
    manifest.finalize(reader.digest, [args.out, args.log_path])
    return 0


def _format_row(item):
    lineno, text = item
    row = parse_row(lineno, text, ("completion",))
    completion = row["completion"]
    if not isinstance(completion, str):
        raise InputError(lineno, "completion must be a string")
    return str(row.get("id", lineno)), completion, check_format(completion)


def cmd_score_format(args) -> int:
    reader = DigestingReader(args.input)
    manifest = RunManifest(args.out, args.command, _snapshot(args), args.seed)
    log = _fresh_log(args.log_path)
    scorer = FormatScorer(args.log_prob, args.seed, log)
    with log or contextlib.nullcontext(), _open_out(args.out) as out:
        for row_id, completion, reward in ordered_map(_format_row, reader, args.jobs):
            scorer.record(row_id, completion, reward)
            out.write(dumps({"id": row_id, "format_reward": reward}) + "\n")
    manifest.finalize(reader.digest, [args.out, args.log_path])
    return 0


def _fresh_log(path) -> InspectionLog | None:
    # no path: sampling still advances, nothing is kept
    if path is None:
        return None
    open(path, "w").close()
    return InspectionLog(path)


# -- advantage --------------------------------------------------------------


def _is_number(v) -> bool:
    return isinstance(v, (int, float, Decimal)) and not isinstance(v, bool)


def cmd_advantage(args) -> int:
    reader = DigestingReader(args.input)
    manifest = RunManifest(args.out, args.command, _snapshot(args), args.seed)
    closed: set = set()
    group_key = None
    group: list[tuple] = []

    def flush(out):
        advantages = relative_advantages([c for _, _, c in group])
        for (gid, rid, combined), adv in zip(group, advantages):
            out.write(dumps({"group_id": gid, "id": rid, "combined": combined, "advantage": adv}) + "\n")

    with _open_out(args.out) as out:
        for lineno, text in reader:
            row = parse_row(lineno, text, ("group_id", "id", "rewards"))
            rewards = row["rewards"]
            if not isinstance(rewards, list) or not rewards or not all(map(_is_number, rewards)):
                raise InputError(lineno, "rewards must be a non-empty list of numbers")
            try:
                combined = combine_rewards(RewardVector(rewards, args.weights))
            except ValueError as exc:
                raise InputError(lineno, str(exc)) from None
            gid = row["group_id"]
            key = dumps(gid)
            if key != group_key:
                if key in closed:
                    raise InputError(lineno, f"group {key} is not contiguous")
                if group:
                    flush(out)
                    closed.add(group_key)
                group_key, group = key, []
            group.append((gid, row["id"], combined))
        if group:
            flush(out)
    manifest.finalize(reader.digest, [args.out])
    return 0


# -- eval -------------------------------------------------------------------


def _eval_row(item):
    lineno, text = item
    row = parse_row(lineno, text, ("completion", "ground_truth"))
    completion, truth = row["completion"], row["ground_truth"]
    if not isinstance(completion, str):
        raise InputError(lineno, "completion must be a string")
    if isinstance(truth, str):
        try:
            truth = parse_json(truth)
        except JsonParseError as exc:
            raise InputError(lineno, f"ground_truth is not valid JSON: {exc}") from None
    try:
        return row_outcome(completion, truth, str(row.get("id", lineno)))
    except ValueError as exc:
        raise InputError(lineno, str(exc)) from None


def cmd_eval(args) -> int:
    reader = DigestingReader(args.input)
    manifest = RunManifest(args.out, args.command, _snapshot(args), args.seed)
    acc = SummaryAccumulator(args.mean_over_all)
    per_row = _open_out(args.per_row) if args.per_row else None
    try:
        writer = csv.writer(per_row, lineterminator="\n") if per_row else None
        if writer:
            writer.writerow(["id", "status", "match_pct", "noise_pct"])
        for outcome in ordered_map(_eval_row, reader, args.jobs):
            acc.add(outcome)
            if writer:
                valid = outcome.status is Status.VALID
                writer.writerow([
                    outcome.id,
                    outcome.status.value,
                    pct2(outcome.match_pct) if valid else "",
                    pct2(outcome.noise_pct) if valid else "",
                ])
    finally:
        if per_row:
            per_row.close()
    summary = acc.result()
    with _open_out(args.out) as out:
        out.write(dumps(summary.to_json(), indent=2) + "\n")
    manifest.finalize(reader.digest, [args.out, args.per_row])
    print(
        f"eval: {summary.total_rows} rows, {summary.rows_valid_json} valid, "
        f"match {pct2(summary.mean_match_pct)}%, noise {pct2(summary.mean_noise_pct)}%",
        file=sys.stderr,
    )
    return 0


# -- entry points -----------------------------------------------------------


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(exc, file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    if args.seed is None:
        if args.uses_rng:
            print(f"warning: no --seed given for {args.command}; using seed 0", file=sys.stderr)
        args.seed = 0
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"schema-forge {args.command}: error: {exc}", file=sys.stderr)
        return 1
    except InputError as exc:
        print(f"schema-forge {args.command}: malformed input, {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"schema-forge {args.command}: error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())

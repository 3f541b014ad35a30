"""Command-line entry point: corpus generation, benchmark runs, summaries,
and the semantic-preservation verifier.

Exit codes: 0 success, 1 user error (bad flags, missing files, failed
verification), 2 internal error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .corpus import CorpusSpec, DEFAULT_WIDTHS, FAMILIES, write_corpus
from .harness import (ALL_STRATEGIES, RunConfig, Strategy, read_csv,
                      run_benchmark, summarize_records, verify_corpus)
from .qasm import QasmError, load_qasm_dir

SEED_ENV_VAR = "DQCBENCH_SEED"


class _UserError(Exception):
    pass


def _parse_int_list(text: str, what: str) -> tuple[int, ...]:
    """Accept '2..10' ranges and '2,3,4' lists."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            values = tuple(range(int(lo), int(hi) + 1))
        else:
            values = tuple(int(v) for v in text.split(",") if v)
        if not values:
            raise ValueError
        return values
    except ValueError:
        raise _UserError(f"malformed {what} '{text}': use A..B or comma list") from None


def _parse_strategies(text: str) -> tuple[Strategy, ...]:
    if text == "all":
        return ALL_STRATEGIES
    try:
        return tuple(Strategy(name.strip()) for name in text.split(",") if name.strip())
    except ValueError:
        names = ",".join(s.value for s in ALL_STRATEGIES)
        raise _UserError(f"unknown strategy in '{text}'; choose from {names}") from None


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise _UserError(f"{SEED_ENV_VAR} must be an integer, got '{env}'") from None
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dqcbench",
        description="Distributed quantum circuit compilation benchmark toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen-corpus", help="write the benchmark corpus as QASM files")
    gen.add_argument("--out", required=True, help="output directory")
    gen.add_argument("--seed", type=int, default=None,
                     help="base seed for the random family (default 0)")
    gen.add_argument("--widths", default=None,
                     help="width list, e.g. 2,4,8 (default 2..128 powers of two)")
    gen.add_argument("--families", default=None,
                     help=f"comma list from {','.join(FAMILIES)} (default all)")

    run = sub.add_parser("run", help="execute the benchmark sweep")
    run.add_argument("--corpus", required=True, help="directory of .qasm files")
    run.add_argument("--out", required=True, help="output CSV path")
    run.add_argument("--qpus", default="2..10", help="QPU counts (default 2..10)")
    run.add_argument("--epsilon", type=float, default=0.03,
                     help="imbalance tolerance (default 0.03)")
    run.add_argument("--strategies", default="all",
                     help="all or comma list of baseline,global,local,hybrid")
    run.add_argument("--seed", type=int, default=None, help="master seed (default 0)")
    run.add_argument("--jobs", type=int, default=1,
                     help="parallel workers for the metrics phase; timing is always serial")
    run.add_argument("--timing-repeats", type=int, default=3,
                     help="timed pipeline runs per record, minimum reported")

    summ = sub.add_parser("summarize", help="recompute aggregates from a results CSV")
    summ.add_argument("--in", dest="in_path", required=True, help="results CSV")
    summ.add_argument("--out", required=True, help="summary JSON path")

    ver = sub.add_parser("verify", help="semantic-preservation oracle sweep")
    ver.add_argument("--corpus", required=True, help="directory of .qasm files")
    ver.add_argument("--max-width", type=int, default=10,
                     help="skip circuits wider than this (oracle cap, default 10)")
    ver.add_argument("--qpus", default="2..10", help="QPU counts (default 2..10)")
    ver.add_argument("--epsilon", type=float, default=0.03)
    ver.add_argument("--seed", type=int, default=None)
    return parser


def _cmd_gen_corpus(args) -> int:
    kwargs = {}
    if args.widths:
        kwargs["widths"] = _parse_int_list(args.widths, "width list")
    if args.families:
        fams = tuple(f.strip() for f in args.families.split(",") if f.strip())
        kwargs["families"] = fams
    seed = _resolve_seed(args)
    kwargs["random_seeds"] = tuple(seed + i for i in range(3))
    try:
        spec = CorpusSpec(**kwargs)
    except ValueError as exc:
        raise _UserError(str(exc)) from None
    paths = write_corpus(spec, args.out)
    print(f"wrote {len(paths)} circuits to {args.out}")
    return 0


def _cmd_run(args) -> int:
    corpus = Path(args.corpus)
    if not corpus.is_dir():
        raise _UserError(f"corpus directory not found: {corpus}")
    cfg = RunConfig(
        qpu_counts=_parse_int_list(args.qpus, "QPU list"),
        epsilon=args.epsilon,
        seed=_resolve_seed(args),
        qasm_dir=corpus,
        out_path=args.out,
        strategies=_parse_strategies(args.strategies),
        jobs=args.jobs,
        timing_repeats=args.timing_repeats)
    try:
        result = run_benchmark(cfg)
    except FileNotFoundError as exc:
        raise _UserError(str(exc)) from None
    print(f"wrote {len(result.records)} records to {args.out}")
    if result.skipped:
        print(f"skipped {len(result.skipped)} (circuit, k) pairs with k > width")
    for circuit_id, strategy, k, err in result.failures:
        print(f"FAILED {circuit_id} {strategy} k={k}: {err}", file=sys.stderr)
    return 0


def _cmd_summarize(args) -> int:
    path = Path(args.in_path)
    if not path.is_file():
        raise _UserError(f"results CSV not found: {path}")
    try:
        records = read_csv(path)
    except (ValueError, IndexError) as exc:
        raise _UserError(f"malformed CSV: {exc}") from None
    summary = summarize_records(records)
    Path(args.out).write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    for strategy, stats in summary["compile_time"].items():
        print(f"{strategy:>9}: mean {stats['mean']:.6f}s  median {stats['median']:.6f}s"
              f"  stddev {stats['stddev']:.6f}s  (n={stats['count']})")
    return 0


def _cmd_verify(args) -> int:
    corpus = Path(args.corpus)
    if not corpus.is_dir():
        raise _UserError(f"corpus directory not found: {corpus}")
    try:
        circuits = load_qasm_dir(corpus)
    except (FileNotFoundError, QasmError) as exc:
        raise _UserError(str(exc)) from None
    outcome = verify_corpus(
        circuits, qpu_counts=_parse_int_list(args.qpus, "QPU list"),
        epsilon=args.epsilon, seed=_resolve_seed(args), max_width=args.max_width)
    print(f"checked {outcome.checked} pipeline outputs: "
          f"{outcome.checked - len(outcome.failures)} passed, "
          f"{len(outcome.failures)} failed")
    for circuit_id, strategy, k in outcome.failures:
        print(f"EQUIVALENCE FAILURE: {circuit_id} {strategy} k={k}", file=sys.stderr)
    return 0 if not outcome.failures else 1


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    handlers = {
        "gen-corpus": _cmd_gen_corpus,
        "run": _cmd_run,
        "summarize": _cmd_summarize,
        "verify": _cmd_verify,
    }
    try:
        return handlers[args.command](args)
    except _UserError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except QasmError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

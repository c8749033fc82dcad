"""Command-line surface: certify, normalize, pipeline, search, generate, sweep.

Exit codes are a stable contract:
  0  success / cross-free
  2  usage, configuration or input-format error
  3  witness found (certify)
  4  pipeline precondition failed (input not weakly k-cross-free)
  5  search budget exhausted without proof of optimality

All reports are deterministic for a fixed seed; the elapsed_ms / ms fields
are the only content that varies between runs.  CROSSFREE_THREADS caps
internal parallelism (the implementation is sequential, so any cap >= 1
produces identical output).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

from .certify import certify
from .core import Family, FamilyFormatError, parse_family, serialize_family
from .extremal import (
    UNIVERSES,
    bounds_sweep,
    make_space,
    max_cross_free,
    sweep_to_csv,
)
from .generators import gen_laminar, gen_random_crossfree
from .pipeline import HypothesisError, normalize_weakly, run_pipeline

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_WITNESS = 3
EXIT_PRECONDITION = 4
EXIT_BUDGET = 5


class _UsageError(Exception):
    pass


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _load_family(path: str) -> Family:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_family(fh.read())
    except OSError as exc:
        raise _UsageError(f"cannot read {path}: {exc}") from exc
    except FamilyFormatError as exc:
        raise _UsageError(f"{path}: {exc}") from exc


def _thread_cap() -> int:
    raw = os.environ.get("CROSSFREE_THREADS")
    if raw is None:
        return 1
    try:
        cap = int(raw)
    except ValueError:
        raise _UsageError(f"CROSSFREE_THREADS must be an integer, got {raw!r}")
    if cap < 1:
        raise _UsageError(f"CROSSFREE_THREADS must be >= 1, got {cap}")
    return cap


def _number(text: str):
    value = float(text)
    return int(value) if value.is_integer() else value


def _parse_n_range(text: str) -> list[int]:
    if ".." in text:
        lo_s, hi_s = text.split("..", 1)
        lo, hi = int(lo_s), int(hi_s)
        if lo > hi:
            raise _UsageError(f"empty n range {text!r}")
        return list(range(lo, hi + 1))
    return [int(text)]


def _check_format(fmt: str, allowed: tuple[str, ...]) -> None:
    if fmt not in allowed:
        raise _UsageError(f"format {fmt!r} not supported here (allowed: {', '.join(allowed)})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crossfree",
        description="Laboratory for k-cross-free set families.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_mode=True):
        if with_mode:
            p.add_argument("--mode", choices=("cross", "weak"), default="cross")
        p.add_argument("--format", default=None)
        p.add_argument("--out", default=None)

    p = sub.add_parser("certify", help="decide k-cross-freeness, exit 3 on witness")
    p.add_argument("file")
    p.add_argument("--k", type=int, required=True)
    common(p)

    p = sub.add_parser("normalize", help="complement every member containing the pivot")
    p.add_argument("file")
    p.add_argument("--pivot", type=int, default=1)
    common(p, with_mode=False)

    p = sub.add_parser("pipeline", help="verify the bound pipeline on a family")
    p.add_argument("file")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--a", type=_number, default=None)
    p.add_argument("--b", type=_number, default=None)
    p.add_argument("--schedule", action="store_true")
    p.add_argument("--force", action="store_true")
    p.add_argument("--policy", choices=("min", "random"), default="min")
    p.add_argument("--seed", type=int, default=None)
    common(p, with_mode=False)

    p = sub.add_parser("search", help="exact maximum k-cross-free subfamily")
    p.add_argument("file", nargs="?", default=None, help="family file as custom universe")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--universe", choices=UNIVERSES[:3], default="proper")
    p.add_argument("--budget-ms", type=float, default=None)
    common(p)

    p = sub.add_parser("generate", help="emit a generated family file")
    p.add_argument("kind", choices=("laminar", "random"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--target", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    common(p)

    p = sub.add_parser("sweep", help="exact maxima vs known bounds over an n range")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", required=True, help="single value or range like 4..7")
    p.add_argument("--universe", choices=UNIVERSES[:3], default="proper")
    p.add_argument("--budget-ms", type=float, default=None)
    common(p)

    return parser


def _cmd_certify(args) -> int:
    fmt = args.format or "json"
    _check_format(fmt, ("json", "text"))
    family = _load_family(args.file)
    if args.k < 2:
        raise _UsageError(f"--k must be at least 2, got {args.k}")
    report = certify(family, args.k, args.mode)
    if fmt == "json":
        _emit(_dump_json(report.to_json_dict()), args.out)
    else:
        lines = [
            f"verdict: {report.verdict}",
            f"k: {report.k}  mode: {report.mode}  members: {report.family_size}  n: {report.n}",
            f"pairs crossing: {report.pairs_crossing}  weakly crossing: {report.pairs_weakly_crossing}",
            f"max clique found (capped at k): {report.max_clique_found}",
        ]
        if report.witness_sets:
            lines.append("witness: " + " ".join(report.witness_sets))
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if report.cross_free else EXIT_WITNESS


def _cmd_normalize(args) -> int:
    fmt = args.format or "text"
    _check_format(fmt, ("text", "json"))
    family = _load_family(args.file)
    try:
        result = normalize_weakly(family, pivot=args.pivot)
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc
    if fmt == "text":
        _emit(serialize_family(result), args.out)
    else:
        _emit(
            _dump_json(
                {
                    "schema": "family/1",
                    "n": result.ground.n,
                    "members": [str(s) for s in result],
                }
            ),
            args.out,
        )
    return EXIT_OK


def _cmd_pipeline(args) -> int:
    fmt = args.format or "json"
    _check_format(fmt, ("json", "text"))
    family = _load_family(args.file)
    if args.k < 2:
        raise _UsageError(f"--k must be at least 2, got {args.k}")
    if args.schedule == (args.a is not None or args.b is not None):
        raise _UsageError("pass either --schedule or both --a and --b")
    if not args.schedule and (args.a is None or args.b is None):
        raise _UsageError("explicit windows need both --a and --b")
    try:
        report = run_pipeline(
            family,
            args.k,
            a=args.a,
            b=args.b,
            use_schedule=args.schedule,
            policy=args.policy,
            seed=args.seed,
            force=args.force,
        )
    except HypothesisError as exc:
        sys.stderr.write(
            f"error: input is not weakly {args.k}-cross-free "
            f"(witness: {' '.join(exc.cert_report.witness_sets or ())}); "
            "use --force to run anyway\n"
        )
        return EXIT_PRECONDITION
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc
    if fmt == "json":
        _emit(_dump_json(report.to_json_dict()), args.out)
    else:
        lines = [
            f"k: {report.k}  n: {report.n}  members: {report.input_size} "
            f"(stripped: {report.stripped_size})",
            f"certified weakly cross-free: {report.certified}",
        ]
        for w in report.windows:
            verdict = "PASS" if w.all_passed else "FAIL"
            lines.append(
                f"window ({w.a}, {w.b}]: size {w.window_size}, chains {w.gamma_size}, "
                f"incidences {w.incidences}, nice tuples {w.nice_tuples} -> {verdict}"
            )
            for c in w.checks:
                if not c.passed:
                    lines.append(f"  FAIL {c.name}: lhs={c.lhs} rhs={c.rhs}")
        lines.append(f"all passed: {report.all_passed}")
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _cmd_search(args) -> int:
    fmt = args.format or "json"
    _check_format(fmt, ("json", "text"))
    if args.k < 2:
        raise _UsageError(f"--k must be at least 2, got {args.k}")
    if (args.file is None) == (args.n is None):
        raise _UsageError("pass exactly one of: a family file, or --n with --universe")
    try:
        if args.file is not None:
            family = _load_family(args.file)
            space = make_space(args.mode, args.k, members=family.members)
        else:
            space = make_space(args.mode, args.k, n=args.n, universe=args.universe)
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc
    result = max_cross_free(space, budget_ms=args.budget_ms)
    if fmt == "json":
        _emit(_dump_json(result.to_json_dict()), args.out)
    else:
        lines = [
            f"universe: {result.space.universe} ({len(result.space.members)} members)  "
            f"n: {result.space.ground.n}  k: {result.space.k}  mode: {result.space.mode}",
            f"max size: {result.max_size}  optimal: {result.optimal}  "
            f"nodes: {result.nodes_explored}",
            "witness: " + " ".join(str(s) for s in result.witness),
        ]
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if result.optimal else EXIT_BUDGET


def _cmd_generate(args) -> int:
    fmt = args.format or "text"
    _check_format(fmt, ("text", "json"))
    try:
        if args.kind == "laminar":
            family = gen_laminar(args.n, seed=args.seed)
        else:
            if args.target is None:
                raise _UsageError("generate random needs --target")
            family = gen_random_crossfree(
                args.n, args.k, args.target, mode=args.mode, seed=args.seed
            )
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc
    if fmt == "text":
        _emit(serialize_family(family), args.out)
    else:
        _emit(
            _dump_json(
                {
                    "schema": "family/1",
                    "n": family.ground.n,
                    "members": [str(s) for s in family],
                }
            ),
            args.out,
        )
    return EXIT_OK


def _cmd_sweep(args) -> int:
    fmt = args.format or "csv"
    _check_format(fmt, ("csv", "json"))
    if args.k < 2:
        raise _UsageError(f"--k must be at least 2, got {args.k}")
    ns = _parse_n_range(args.n)
    rows = bounds_sweep(
        args.k, ns, universe=args.universe, mode=args.mode, budget_ms=args.budget_ms
    )
    if fmt == "csv":
        _emit(sweep_to_csv(rows), args.out)
    else:
        _emit(
            _dump_json(
                {"schema": "sweep/1", "rows": [r.to_json_dict() for r in rows]}
            ),
            args.out,
        )
    return EXIT_OK


_COMMANDS = {
    "certify": _cmd_certify,
    "normalize": _cmd_normalize,
    "pipeline": _cmd_pipeline,
    "search": _cmd_search,
    "generate": _cmd_generate,
    "sweep": _cmd_sweep,
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _thread_cap()  # validated; current implementation runs sequentially
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

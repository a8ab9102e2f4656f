"""Command-line interface.

Subcommands: gen, label, verify, solve-exact, bench, export-dot.  Errors
print a single ``error kind=<kind> message=<text>`` line on stderr and exit
with status 2; a failed verification exits with status 1.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .bench import rows_to_csv, run_bench
from .exact import solve_graceful
from .export import parse_dot, to_dot
from .families import FAMILIES, gen_family
from .pipeline import near_graceful
from .tree import TreeError, enumerate_trees, format_tree, parse_tree, MAX_ENUMERATE_N
from .verify import LabellingError, check_report, format_labelling, parse_labelling

CLI_FAMILIES = ("random", "path", "star", "caterpillar", "spider", "binary", "broom")
BENCH_FAMILIES = ("random", "caterpillar", "spider", "binary")
BENCH_SIZES = (10**3, 10**4, 10**5)


class CliError(Exception):
    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind


def _read(path: str | None) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CliError("io", f"cannot read {path}: {exc.strerror}") from exc


def _write(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _tree_from_args(args):
    if args.input is not None:
        return parse_tree(_read(args.input))
    if args.n is None:
        raise CliError("usage", "give --in FILE or --n N (with --family)")
    if args.n < 1:
        raise CliError("usage", "--n must be >= 1")
    return gen_family(args.family, args.n, args.seed)


def _cmd_gen(args):
    if args.n is None:
        raise CliError("usage", "gen needs --n")
    tree = _tree_from_args(args)
    _write(args.out, format_tree(tree))
    return 0


def _cmd_label(args):
    tree = _tree_from_args(args)
    lab, rep = near_graceful(tree, args.epsilon, args.seed, bijective=args.bijective)
    # re-verify from scratch before anything leaves the process
    again = check_report(tree, lab, args.epsilon, rep.stage_log)
    if again != rep:
        raise CliError("verification", "report does not match an independent recount")
    _write(args.out, format_labelling(lab))
    report = rep.to_json() + "\n"
    if args.report:
        Path(args.report).write_text(report)
    elif args.out not in (None, "-"):
        sys.stdout.write(report)
    else:
        sys.stderr.write(report)
    return 0


def _cmd_verify(args):
    if args.input is None or args.labelling is None:
        raise CliError("usage", "verify needs --in TREE and --labelling FILE")
    tree = parse_tree(_read(args.input))
    lab = parse_labelling(_read(args.labelling))
    rep = check_report(tree, lab, args.epsilon)
    _write(args.out, rep.to_json() + "\n")
    if args.require == "graceful" and not rep.graceful:
        return 1
    if args.require == "near-graceful" and not rep.near_graceful:
        return 1
    return 0


def _cmd_solve_exact(args):
    if args.all:
        if args.n is None or not 1 <= args.n <= MAX_ENUMERATE_N:
            raise CliError("usage", f"--all needs 1 <= --n <= {MAX_ENUMERATE_N}")
        t0 = time.perf_counter()
        classes = graceful = 0
        for tree in enumerate_trees(args.n):
            classes += 1
            lab, _ = solve_graceful(tree, args.budget)
            graceful += lab is not None
        out = {"n": args.n, "classes": classes, "graceful": graceful,
               "elapsed_s": round(time.perf_counter() - t0, 3)}
        _write(args.out, json.dumps(out, sort_keys=True) + "\n")
        return 0 if graceful == classes else 1
    tree = _tree_from_args(args)
    lab, stats = solve_graceful(tree, args.budget)
    if lab is None:
        msg = "budget exhausted" if stats.budget_exhausted else "no graceful labelling"
        sys.stderr.write(f"error kind=not-found message={msg} nodes={stats.nodes_expanded}\n")
        return 1
    _write(args.out, format_labelling(lab))
    return 0


def _cmd_bench(args):
    if args.families:
        families = args.families.split(",")
    else:
        families = [args.family] if args.family else list(BENCH_FAMILIES)
    for f in families:
        if f not in FAMILIES:
            raise CliError("usage", f"unknown family {f}")
    if args.sizes:
        try:
            sizes = [int(x) for x in args.sizes.split(",")]
        except ValueError:
            raise CliError("usage", "--sizes must be comma-separated integers") from None
    else:
        sizes = [args.n] if args.n else list(BENCH_SIZES)
    if min(sizes) < 1 or args.seeds < 1:
        raise CliError("usage", "sizes and --seeds must be positive")
    rows = run_bench(families, sizes, range(args.seed, args.seed + args.seeds), args.epsilon, jobs=args.jobs)
    _write(args.out, rows_to_csv(rows))
    return 0


def _cmd_export_dot(args):
    if args.input is None or args.labelling is None:
        raise CliError("usage", "export-dot needs --in TREE and --labelling FILE")
    tree = parse_tree(_read(args.input))
    lab = parse_labelling(_read(args.labelling))
    check_report(tree, lab, args.epsilon)
    text = to_dot(tree, lab)
    back_tree, back_lab = parse_dot(text)
    if back_lab != lab or back_tree != tree:
        raise CliError("verification", "DOT document does not round-trip")
    _write(args.out, text)
    return 0


class _Parser(argparse.ArgumentParser):
    """Argument errors use the same one-line format as every other error."""

    def error(self, message):
        sys.stderr.write(f"error kind=usage message={' '.join(message.split())}\n")
        sys.exit(2)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gracesize", description="Near-graceful labellings of trees.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--n", type=int, default=None, help="number of vertices")
        sp.add_argument("--family", choices=CLI_FAMILIES, default="random")
        sp.add_argument("--epsilon", type=float, default=0.2)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--in", dest="input", default=None, help="tree edge-list file ('-' for stdin)")
        sp.add_argument("--out", default=None, help="output file (default stdout)")
        sp.add_argument("--budget", type=int, default=10_000_000, help="exact search node budget")

    for name, fn, extra in [
        ("gen", _cmd_gen, None),
        ("label", _cmd_label, "label"),
        ("verify", _cmd_verify, "verify"),
        ("solve-exact", _cmd_solve_exact, "exact"),
        ("bench", _cmd_bench, "bench"),
        ("export-dot", _cmd_export_dot, "dot"),
    ]:
        sp = sub.add_parser(name)
        common(sp)
        sp.set_defaults(func=fn)
        if extra == "label":
            sp.add_argument("--report", default=None, help="write the JSON report here")
            sp.add_argument("--bijective", action="store_true", help="labels exactly 1..n")
        if extra in ("verify", "dot"):
            sp.add_argument("--labelling", default=None, help="labelling file")
        if extra == "verify":
            sp.add_argument("--require", choices=("graceful", "near-graceful"), default=None)
        if extra == "exact":
            sp.add_argument("--all", action="store_true", help="every isomorphism class of order --n")
        if extra == "bench":
            sp.add_argument("--families", default=None, help="comma-separated families")
            sp.add_argument("--sizes", default=None, help="comma-separated n values")
            sp.add_argument("--seeds", type=int, default=10, help="seeds per cell, from --seed")
            sp.add_argument("--jobs", type=int, default=1)
            sp.set_defaults(family=None)  # no --family: the default grid families
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if not 0 < args.epsilon < 1:
            raise CliError("usage", "--epsilon must lie in (0, 1)")
        return args.func(args)
    except (TreeError, LabellingError) as exc:
        kind = exc.kind
        msg = str(exc).split(": ", 1)[-1]
    except CliError as exc:
        kind, msg = exc.kind, str(exc)
    except ValueError as exc:
        kind, msg = "value", str(exc)
    sys.stderr.write(f"error kind={kind} message={' '.join(msg.split())}\n")
    return 2


if __name__ == "__main__":
    sys.exit(main())

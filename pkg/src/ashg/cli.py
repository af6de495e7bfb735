"""Command-line surface: solve, verify, gen, oracle, decompose.

Exit codes are a contract: 0 = SOME/stable, 1 = NONE/unstable,
2 = unknown (resource or step limit hit), 3 = input error.  Reports are
emitted as `c`-prefixed comment lines so that stdout stays parseable
when a partition or instance follows them.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from . import formats
from .coloring import DEFAULT_TABLE_CAP, solve_nash_via_coloring
from .connected import solve_connected_nash
from .decomposition import (
    MIN_DEGREE,
    MIN_FILL,
    heuristic_decompose,
    make_nice,
    validate,
)
from .errors import OracleCapError, ResourceLimitError
from .game import (
    AshgInstance,
    better_response_dynamics,
    is_connected_partition,
    is_nash_stable,
)
from .oracle import (
    DEFAULT_PARTITION_CAP,
    brute_force_connected_nash,
    brute_force_nash,
)
from .reductions import (
    gen_bin_packing,
    gen_sat_bounded_degree,
    gen_sat_high_degree,
    gen_three_partition_star,
    square_zero_arcs,
    witness_bin_packing,
    witness_sat_bounded_degree,
    witness_sat_high_degree,
    witness_three_partition_star,
)

EXIT_SOME = 0
EXIT_NONE = 1
EXIT_UNKNOWN = 2
EXIT_INPUT_ERROR = 3

_EXIT_BY_ANSWER = {"SOME": EXIT_SOME, "STABLE": EXIT_SOME,
                   "NONE": EXIT_NONE, "UNSTABLE": EXIT_NONE,
                   "UNKNOWN": EXIT_UNKNOWN}


@dataclass
class RunReport:
    """Per-command summary printed as comment lines."""

    command: str
    n: int
    arcs: int
    max_degree: int
    max_abs_weight: int
    answer: str  # SOME / NONE / UNKNOWN / STABLE / UNSTABLE
    wall_time: float
    width: int | None = None
    peak_table: int | None = None

    def lines(self) -> list[str]:
        out = [
            f"c command {self.command}",
            f"c n {self.n}",
            f"c arcs {self.arcs}",
            f"c max-degree {self.max_degree}",
            f"c max-weight {self.max_abs_weight}",
        ]
        if self.width is not None:
            out.append(f"c width {self.width}")
        if self.peak_table is not None:
            out.append(f"c peak-table {self.peak_table}")
        out.append(f"c answer {self.answer}")
        out.append(f"c wall-time {self.wall_time:.3f}s")
        return out


def _print_report(report: RunReport) -> None:
    print("\n".join(report.lines()))


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load_instance(path: str) -> AshgInstance:
    return formats.parse_instance(_read(path))


def _emit(path: str | None, text: str) -> None:
    if path is None:
        print(text, end="")
    else:
        Path(path).write_text(text, encoding="utf-8")


def _report_for(command: str, instance: AshgInstance, answer: str, t0: float,
                width: int | None = None, peak: int | None = None) -> RunReport:
    return RunReport(
        command=command,
        n=instance.n,
        arcs=instance.arc_count(),
        max_degree=instance.max_degree,
        max_abs_weight=instance.max_abs_weight,
        answer=answer,
        wall_time=time.perf_counter() - t0,
        width=width,
        peak_table=peak,
    )


# ---------------------------------------------------------------------------
# solve


def _load_or_build_td(args, instance):
    if args.td:
        td = formats.parse_decomposition(_read(args.td))
        ok, problems = validate(td, instance)
        if not ok:
            raise ValueError("invalid decomposition: " + "; ".join(problems))
        return td
    return heuristic_decompose(instance, args.strategy)


def cmd_solve(args) -> int:
    instance = _load_instance(args.instance)
    t0 = time.perf_counter()
    stats: dict[str, int] = {}
    width = None
    partition = None
    if args.mode == "dynamics":
        partition = better_response_dynamics(instance, max_steps=args.max_steps)
        answer = "SOME" if partition is not None else "UNKNOWN"
        if partition is None:
            print(f"c no convergence within {args.max_steps} steps", file=sys.stderr)
    else:
        td = _load_or_build_td(args, instance)
        width = td.width
        try:
            if args.mode == "nash":
                partition = solve_nash_via_coloring(
                    instance, td, table_cap=args.table_cap, stats=stats
                )
            else:
                partition = solve_connected_nash(
                    instance, make_nice(td), table_cap=args.table_cap, stats=stats
                )
            answer = "SOME" if partition is not None else "NONE"
        except ResourceLimitError as exc:
            print(f"c resource limit: {exc}", file=sys.stderr)
            answer = "UNKNOWN"
    report = _report_for("solve", instance, answer, t0, width,
                         stats.get("peak_table"))
    _print_report(report)
    if partition is not None:
        _emit(args.out, formats.serialize_partition(partition))
    return _EXIT_BY_ANSWER[answer]


# ---------------------------------------------------------------------------
# verify


def cmd_verify(args) -> int:
    instance = _load_instance(args.instance)
    partition = formats.parse_partition(_read(args.partition))
    t0 = time.perf_counter()
    answer = "STABLE"
    detail = None
    if args.connected:
        ok, bad = is_connected_partition(instance, partition)
        if not ok:
            answer, detail = "UNSTABLE", f"c coalition {bad} is disconnected"
    if answer == "STABLE":
        stable, witness = is_nash_stable(instance, partition)
        if not stable:
            target = "singleton" if witness.target is None else f"coalition {witness.target}"
            answer = "UNSTABLE"
            detail = (
                f"c vertex {witness.vertex} (utility {witness.current_utility}) "
                f"improves by moving to {target} (utility {witness.target_utility})"
            )
    _print_report(_report_for("verify", instance, answer, t0))
    if detail:
        print(detail)
    return _EXIT_BY_ANSWER[answer]


# ---------------------------------------------------------------------------
# gen


def _parse_assignment(path: str, num_vars: int) -> list[bool]:
    bits = formats.parse_int_list(_read(path))
    if len(bits) != num_vars or any(b not in (0, 1) for b in bits):
        raise ValueError(
            f"assignment file must hold {num_vars} values from {{0,1}}, got {bits}"
        )
    return [b == 1 for b in bits]


def cmd_gen(args) -> int:
    witness = None
    if args.generator == "square":
        instance = square_zero_arcs(_load_instance(args.source))
    elif args.generator in ("sat-hd", "sat-bd"):
        phi = formats.parse_cnf(_read(args.source))
        if args.generator == "sat-hd":
            instance, _ = gen_sat_high_degree(phi, args.degree)
        else:
            instance, _ = gen_sat_bounded_degree(phi)
        if args.witness:
            assignment = _parse_assignment(args.witness, phi.num_vars)
            if args.generator == "sat-hd":
                witness = witness_sat_high_degree(phi, args.degree, assignment)
            else:
                witness = witness_sat_bounded_degree(phi, assignment)
    elif args.generator == "3part":
        items = formats.parse_int_list(_read(args.source))
        instance, _ = gen_three_partition_star(items, args.target)
        if args.witness:
            flat = formats.parse_int_list(_read(args.witness))
            if len(flat) % 3 != 0:
                raise ValueError("triple file must hold 3 indices per triple")
            triples = [flat[i : i + 3] for i in range(0, len(flat), 3)]
            witness = witness_three_partition_star(items, args.target, triples)
    else:  # binpack
        items = formats.parse_int_list(_read(args.source))
        instance, _ = gen_bin_packing(items, args.capacity, args.bins, args.unit_weights)
        if args.witness:
            packing = formats.parse_int_list(_read(args.witness))
            witness = witness_bin_packing(
                items, args.capacity, args.bins, packing, args.unit_weights
            )
    if witness is not None and args.witness_out is None and args.out is None:
        raise ValueError("--witness needs --witness-out when the instance goes to stdout")
    _emit(args.out, formats.serialize_instance(instance))
    if witness is not None:
        _emit(args.witness_out, formats.serialize_partition(witness))
    return EXIT_SOME


# ---------------------------------------------------------------------------
# oracle


def cmd_oracle(args) -> int:
    instance = _load_instance(args.instance)
    t0 = time.perf_counter()
    partition = None
    try:
        if args.mode == "nash":
            partition = brute_force_nash(instance, cap=args.cap)
        else:
            partition = brute_force_connected_nash(instance, cap=args.cap)
        answer = "SOME" if partition is not None else "NONE"
    except OracleCapError as exc:
        print(f"c oracle cap: {exc}", file=sys.stderr)
        answer = "UNKNOWN"
    _print_report(_report_for("oracle", instance, answer, t0))
    if partition is not None:
        _emit(args.out, formats.serialize_partition(partition))
    return _EXIT_BY_ANSWER[answer]


# ---------------------------------------------------------------------------
# decompose


def cmd_decompose(args) -> int:
    instance = _load_instance(args.instance)
    t0 = time.perf_counter()
    td = heuristic_decompose(instance, args.strategy)
    _print_report(_report_for("decompose", instance, "SOME", t0, td.width))
    _emit(args.out, formats.serialize_decomposition(td, instance.n))
    return EXIT_SOME


# ---------------------------------------------------------------------------
# parser


class _Parser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with the input-error code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT_ERROR)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ashg", description=__doc__)
    sub = parser.add_subparsers(dest="cmd", required=True)

    p_solve = sub.add_parser("solve", help="decide/construct a stable partition")
    p_solve.add_argument("instance", help="instance file")
    p_solve.add_argument("--mode", choices=["nash", "connected-nash", "dynamics"],
                         default="nash")
    p_solve.add_argument("--td", help="tree decomposition file (default: heuristic)")
    p_solve.add_argument("--strategy", choices=[MIN_DEGREE, MIN_FILL],
                         default=MIN_DEGREE, help="heuristic when no --td is given")
    p_solve.add_argument("--table-cap", type=int, default=DEFAULT_TABLE_CAP,
                         help="abort when a DP table would exceed this size")
    p_solve.add_argument("--max-steps", type=int, default=1000,
                         help="deviation budget for --mode dynamics")
    p_solve.add_argument("--out", help="write the partition here instead of stdout")
    p_solve.set_defaults(func=cmd_solve)

    p_verify = sub.add_parser("verify", help="check a partition for stability")
    p_verify.add_argument("instance")
    p_verify.add_argument("partition")
    p_verify.add_argument("--connected", action="store_true",
                          help="also require every coalition to be connected")
    p_verify.set_defaults(func=cmd_verify)

    p_gen = sub.add_parser("gen", help="generate instances from source problems")
    gsub = p_gen.add_subparsers(dest="generator", required=True)

    def add_common(g):
        g.add_argument("--out", help="instance output file (default stdout)")
        g.add_argument("--witness", help="certificate file; emits a witness partition")
        g.add_argument("--witness-out", help="witness partition output file")

    g_hd = gsub.add_parser("sat-hd", help="3-CNF embedding with a degree parameter")
    g_hd.add_argument("source", help="DIMACS CNF file")
    g_hd.add_argument("--degree", type=int, required=True,
                      help="degree parameter >= 2 (rounded up to a power of two)")
    add_common(g_hd)

    g_bd = gsub.add_parser("sat-bd", help="3-CNF embedding with weights in {-2..2}")
    g_bd.add_argument("source", help="DIMACS CNF file")
    add_common(g_bd)

    g_3p = gsub.add_parser("3part", help="star instance from 3-Partition items")
    g_3p.add_argument("source", help="plain integer list of items")
    g_3p.add_argument("--target", type=int, required=True, help="triple sum target")
    add_common(g_3p)

    g_bp = gsub.add_parser("binpack", help="instance from a Bin Packing input")
    g_bp.add_argument("source", help="plain integer list of item weights")
    g_bp.add_argument("--capacity", type=int, required=True)
    g_bp.add_argument("--bins", type=int, required=True)
    g_bp.add_argument("--unit-weights", action="store_true",
                      help="expand all weights to -1/1 via relay vertices")
    add_common(g_bp)

    g_sq = gsub.add_parser("square", help="add zero-weight arcs at distance two")
    g_sq.add_argument("source", help="instance file")
    g_sq.add_argument("--out", help="instance output file (default stdout)")
    g_sq.set_defaults(witness=None, witness_out=None)

    p_gen.set_defaults(func=cmd_gen)

    p_oracle = sub.add_parser("oracle", help="exhaustive search over all partitions")
    p_oracle.add_argument("instance")
    p_oracle.add_argument("--mode", choices=["nash", "connected-nash"], default="nash")
    p_oracle.add_argument("--cap", type=int, default=DEFAULT_PARTITION_CAP,
                          help="refuse instances with more vertices than this")
    p_oracle.add_argument("--out", help="write the partition here instead of stdout")
    p_oracle.set_defaults(func=cmd_oracle)

    p_dec = sub.add_parser("decompose", help="heuristic tree decomposition")
    p_dec.add_argument("instance")
    p_dec.add_argument("--strategy", choices=[MIN_DEGREE, MIN_FILL], default=MIN_DEGREE)
    p_dec.add_argument("--out", help="decomposition output file (default stdout)")
    p_dec.set_defaults(func=cmd_decompose)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ResourceLimitError, OracleCapError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

"""Command-line entry points.

Subcommands: ``solve`` an instance file, ``verify`` a partition file against
an instance, ``brute`` -force search an instance, ``gen-tight`` and
``gen-random`` instance generators, and ``bench`` for oracle-call sweeps.

Exit codes: 0 success / partition found, 2 precondition violated,
3 no partition exists (brute), 1 anything else.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from .bruteforce import BruteForceBudget, brute_force_solve
from .errors import MatroidTverbergError, PreconditionViolated
from .instances import (
    AffineSpec,
    GENERATOR_FAMILIES,
    GraphicSpec,
    InstanceFile,
    UniformSpec,
    VectorGFpSpec,
    VectorRationalSpec,
    emit_instance,
    emit_partition,
    gen_random_instance,
    parse_instance,
    parse_partition,
)
from .errors import InfeasibleRequest
from .matroids import UniformMatroid
from .sequences import Coloring, IndexedSequence
from .solver import (
    SolveStats,
    solve_general,
    solve_noncolor,
    solve_special,
    verify_partition,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_PRECONDITION = 2
EXIT_NO_PARTITION = 3


@dataclass
class RunReport:
    """Machine-checkable summary of one solve/brute/verify run."""

    outcome: str  # partition | no-partition | precondition-violated | verified | failed | error
    parts: list | None = None
    message: str | None = None
    oracle_calls: int = 0
    cycle_iterations: int = 0
    restarts: int = 0
    recursion_depth: int = 0
    wall_ms: float = 0.0
    extra: dict = field(default_factory=dict)

    def to_text(self):
        lines = [f"outcome {self.outcome}"]
        if self.message:
            lines.append(f"message {self.message}")
        lines.append(f"oracle_calls {self.oracle_calls}")
        lines.append(f"cycle_iterations {self.cycle_iterations}")
        lines.append(f"restarts {self.restarts}")
        lines.append(f"recursion_depth {self.recursion_depth}")
        lines.append(f"wall_ms {self.wall_ms:.3f}")
        for key, value in self.extra.items():
            lines.append(f"{key} {value}")
        if self.parts is not None:
            for i, indices in enumerate(self.parts):
                lines.append(f"part {i + 1}: " + " ".join(str(j) for j in indices))
        return "\n".join(lines)

    def to_json(self):
        payload = {
            "outcome": self.outcome,
            "message": self.message,
            "parts": self.parts,
            "oracle_calls": self.oracle_calls,
            "cycle_iterations": self.cycle_iterations,
            "restarts": self.restarts,
            "recursion_depth": self.recursion_depth,
            "wall_ms": self.wall_ms,
        }
        payload.update(self.extra)
        return json.dumps(payload, indent=2)


def _load(path):
    with open(path, "r", encoding="utf-8") as handle:
        text = handle.read()
    inst = parse_instance(text)
    return inst, inst.build_matroid(), inst.build_sequence(), inst.build_coloring()


def _certificate_extra(partition):
    cert = partition.certificate
    subsets = ";".join(
        " ".join(str(i) for i, _ in subset) if subset else "-"
        for subset in cert.spanning_subsets
    )
    return {
        "witness_nonloop": cert.witness_nonloop[0],
        "chain_spanning_subsets": subsets,
    }


def _emit_report(report, as_json):
    print(report.to_json() if as_json else report.to_text())


def _cmd_solve(args):
    inst, oracle, seq, coloring = _load(args.instance)
    stats = SolveStats()
    check = False if args.no_check else None
    try:
        if inst.mode == "general":
            partition = solve_general(oracle, seq, coloring, inst.r, stats=stats, check=check)
        elif inst.mode == "special":
            partition = solve_special(oracle, seq, coloring, inst.r, stats=stats, check=check)
        else:
            partition = solve_noncolor(oracle, seq, inst.r, stats=stats, check=check)
    except PreconditionViolated as exc:
        report = RunReport(outcome="precondition-violated", message=str(exc))
        _emit_report(report, args.json)
        return EXIT_PRECONDITION
    recheck = verify_partition(oracle, seq, coloring, inst.r, partition.parts)
    if not recheck:
        report = RunReport(outcome="error", message=f"re-verification failed: {recheck.failure}")
        _emit_report(report, args.json)
        return EXIT_ERROR
    report = RunReport(
        outcome="partition",
        parts=[list(p) for p in partition.part_indices()],
        oracle_calls=stats.oracle_calls,
        cycle_iterations=stats.cycle_iterations,
        restarts=stats.restarts,
        recursion_depth=stats.recursion_depth,
        wall_ms=stats.wall_time * 1000.0,
        extra={"reverified": "pass", **_certificate_extra(partition)},
    )
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(emit_partition(report.parts))
    _emit_report(report, args.json)
    return EXIT_OK


def _cmd_verify(args):
    inst, oracle, seq, coloring = _load(args.instance)
    with open(args.partition, "r", encoding="utf-8") as handle:
        index_lists = parse_partition(handle.read())
    known = seq.indices
    for i, indices in enumerate(index_lists):
        stray = [j for j in indices if j not in known]
        if stray:
            print(f"outcome error\nmessage part {i + 1} references unknown index {stray[0]}")
            return EXIT_ERROR
    parts = [seq.with_indices(indices) for indices in index_lists]
    report = verify_partition(oracle, seq, coloring, inst.r, parts)
    if report.ok:
        _emit_report(RunReport(outcome="verified"), args.json)
        return EXIT_OK
    _emit_report(
        RunReport(outcome="failed", message=f"{report.failure}: {report.detail}"), args.json
    )
    return EXIT_ERROR


def _cmd_brute(args):
    inst, oracle, seq, coloring = _load(args.instance)
    budget = BruteForceBudget(
        max_entries=args.max_entries,
        max_r=args.max_r,
        max_assignments=args.budget,
    )
    partition = brute_force_solve(oracle, seq, coloring, inst.r, budget)
    if partition is None:
        _emit_report(
            RunReport(
                outcome="no-partition",
                message="exhaustive search found no valid partition",
                oracle_calls=oracle.oracle_calls,
            ),
            args.json,
        )
        return EXIT_NO_PARTITION
    report = RunReport(
        outcome="partition",
        parts=[list(p) for p in partition.part_indices()],
        oracle_calls=oracle.oracle_calls,
        extra=_certificate_extra(partition),
    )
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(emit_partition(report.parts))
    _emit_report(report, args.json)
    return EXIT_OK


def _tight_spec(family, m):
    if m < 1:
        raise InfeasibleRequest("rank must be at least 1")
    if family == "uniform":
        return UniformSpec(m, m + 2), [f"e{i}" for i in range(m)]
    if family in ("vector_gf2", "vector_gf3"):
        p = 2 if family == "vector_gf2" else 3
        elements = {
            f"b{i + 1}": tuple(1 if j == i else 0 for j in range(m)) for i in range(m)
        }
        elements["s"] = tuple(1 for _ in range(m))
        return VectorGFpSpec(p, m, elements), [f"b{i + 1}" for i in range(m)]
    if family == "vector_rational":
        elements = {
            f"b{i + 1}": tuple(Fraction(1 if j == i else 0) for j in range(m))
            for i in range(m)
        }
        elements["s"] = tuple(Fraction(1) for _ in range(m))
        return VectorRationalSpec(m, elements), [f"b{i + 1}" for i in range(m)]
    if family == "affine_rational":
        dim = m - 1
        points = {
            f"a{i + 1}": tuple(Fraction(1 if j == i - 1 else 0) for j in range(dim))
            for i in range(m)
        }
        points["s"] = tuple(Fraction(1, m) for _ in range(dim))
        return AffineSpec("rational", dim, points), [f"a{i + 1}" for i in range(m)]
    if family == "graphic":
        edges = {f"t{i + 1}": (i, i + 1) for i in range(m)}
        edges["g0"] = (0, 1) if m == 1 else (0, 2)
        return GraphicSpec(m + 1, edges), [f"t{i + 1}" for i in range(m)]
    raise InfeasibleRequest(f"unknown family {family!r}")


def _cmd_gen_tight(args):
    if args.r < 2:
        print("gen-tight needs r >= 2 (r = 1 would yield an empty sequence)", file=sys.stderr)
        return EXIT_ERROR
    spec, basis = _tight_spec(args.family, args.rank)
    refs = []
    for eid in basis:
        refs.extend([eid] * (args.r - 1))
    inst = InstanceFile(matroid=spec, sequence=tuple(refs), colors=None, r=args.r, mode="noncolor")
    text = emit_instance(inst)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        print(text, end="")
    return EXIT_OK


def _cmd_gen_random(args):
    inst = gen_random_instance(
        args.family, args.rank, args.r, args.length, args.seed, args.profile
    )
    text = emit_instance(inst)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        print(text, end="")
    return EXIT_OK


def bench_rows(rank, r_values):
    """Solve the minimum-length exact-profile uniform instance per r.

    The sequence holds m(r-1)+1 distinct uniform elements, colored with the
    minimum counts (r of the first color, r-1 of each other), which is the
    tightest length the profile admits.
    """
    rows = []
    for r in r_values:
        length = rank * (r - 1) + 1
        oracle = UniformMatroid(rank, length)
        seq = IndexedSequence.from_elements(oracle.ground)
        assignment = {}
        idx = 0
        for color_pos in range(rank):
            quota = r if color_pos == 0 else r - 1
            for _ in range(quota):
                assignment[idx] = f"c{color_pos + 1}"
                idx += 1
        coloring = Coloring(assignment)
        stats = SolveStats()
        solve_special(oracle, seq, coloring, r, stats=stats)
        rows.append(
            {
                "family": "uniform",
                "m": rank,
                "r": r,
                "len": length,
                "oracle_calls": stats.oracle_calls,
                "iterations": stats.cycle_iterations,
                "restarts": stats.restarts,
                "wall_ms": round(stats.wall_time * 1000.0, 3),
            }
        )
    return rows


def _cmd_bench(args):
    rows = bench_rows(args.rank, range(args.r_min, args.r_max + 1))
    fieldnames = ["family", "m", "r", "len", "oracle_calls", "iterations", "restarts", "wall_ms"]
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as handle:
            writer = csv.DictWriter(handle, fieldnames=fieldnames)
            writer.writeheader()
            writer.writerows(rows)
    else:
        writer = csv.DictWriter(sys.stdout, fieldnames=fieldnames)
        writer.writeheader()
        writer.writerows(rows)
    return EXIT_OK


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="matroid-tverberg",
        description="Tverberg-style partitions of colored sequences in matroids.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve an instance file")
    p.add_argument("instance")
    p.add_argument("--out", help="write the partition to this file")
    p.add_argument("--json", action="store_true")
    p.add_argument("--no-check", action="store_true", help="skip runtime invariant checks")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("verify", help="verify a partition file against an instance")
    p.add_argument("instance")
    p.add_argument("partition")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("brute", help="exhaustive partition search")
    p.add_argument("instance")
    p.add_argument("--budget", type=int, default=BruteForceBudget.max_assignments)
    p.add_argument("--max-entries", type=int, default=BruteForceBudget.max_entries)
    p.add_argument("--max-r", type=int, default=BruteForceBudget.max_r)
    p.add_argument("--out", help="write a found partition to this file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_brute)

    p = sub.add_parser("gen-tight", help="emit the worst-case instance of length m(r-1)")
    p.add_argument("--family", required=True, choices=GENERATOR_FAMILIES)
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_gen_tight)

    p = sub.add_parser("gen-random", help="emit a seeded random instance")
    p.add_argument("--family", required=True, choices=GENERATOR_FAMILIES)
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--profile", required=True, choices=("general", "special"))
    p.add_argument("--out")
    p.set_defaults(func=_cmd_gen_random)

    p = sub.add_parser("bench", help="oracle-call sweep over r on uniform instances")
    p.add_argument("--rank", type=int, default=5)
    p.add_argument("--r-min", type=int, default=2)
    p.add_argument("--r-max", type=int, default=50)
    p.add_argument("--out", help="CSV output path (default: stdout)")
    p.set_defaults(func=_cmd_bench)

    return parser


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except MatroidTverbergError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()

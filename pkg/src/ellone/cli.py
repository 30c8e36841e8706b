"""Batch command line front end.

Every command reads JSON inputs, computes with exact rationals, and emits
a deterministic JSON run report: numbers are "p/q" strings, decision
metadata (pivot rule, homotopy and Bruhat choices) is recorded, and wall
times live in a segregated "timing" section so that reports for identical
inputs are byte-identical outside it.

Exit codes: 0 success, 2 parse error, 3 precondition violation,
4 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from fractions import Fraction

from . import core
from .core import (
    CapError,
    Chain,
    Cochain,
    DegreeError,
    ElloneError,
    ParseError,
    PreconditionError,
    rat_str,
)
from .covering import (
    CoveringDatum,
    IsometryGroupDatum,
    LineCovering,
    cohomologous_witness,
    path_primitive,
    transfer,
)
from .groupcoh import FiniteGroup, bounded_group_cohomology, group_cohomology
from .seminorm import duality_check, l1_seminorm, linf_seminorm
from .simplicial import subdivide_complex

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_PRECONDITION = 3
EXIT_CAP = 4

DECISIONS = {
    "pivot_rule": "bland",
    "contracting_homotopy": "identity-insertion",
    "bruhat_finite_coverings": "fundamental-domain-indicator",
    "bruhat_line_family": "triangular-hat",
}


def _digest(path: str) -> str:
    try:
        with open(path, "rb") as fh:
            return hashlib.sha256(fh.read()).hexdigest()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def _decimalize(node):
    if isinstance(node, dict):
        return {k: _decimalize(v) for k, v in node.items()}
    if isinstance(node, list):
        return [_decimalize(v) for v in node]
    if isinstance(node, str):
        try:
            return float(Fraction(node))
        except (ValueError, ZeroDivisionError):
            return node
    return node


class Report:
    def __init__(self, command: str, inputs: dict):
        self.start = time.perf_counter()
        self.data = {
            "command": command,
            "inputs": {p: _digest(p) for p in inputs.values() if p},
            "decisions": dict(DECISIONS),
            "results": {},
        }

    def finish(self, args) -> dict:
        timing = self.data.setdefault("timing", {})
        timing["wall_seconds"] = time.perf_counter() - self.start
        if getattr(args, "decimal", False):
            self.data["decimal_rendering"] = {
                "display_only": True,
                "results": _decimalize(self.data["results"]),
            }
        return self.data

    def emit(self, args) -> int:
        data = self.finish(args)
        text = json.dumps(data, indent=2, sort_keys=True)
        if args.report:
            with open(args.report, "w") as fh:
                fh.write(text + "\n")
        print(text)
        return EXIT_OK


def _cochain_dict(c) -> dict:
    return core.chain_to_dict(c)


# ---------------------------------------------------------------------------
# commands

def cmd_homology(args) -> int:
    report = Report("homology", {"complex": args.complex})
    K, assignment = core.load_complex(args.complex)
    degrees = [args.degree] if args.degree is not None else list(range(K.dim + 1))
    for n in degrees:
        if n < 0:
            raise PreconditionError(f"negative degree {n}")
    report.data["results"] = {
        "counts": K.counts(),
        "ranks": {str(n): core.homology_rank(K, n) for n in degrees},
        "index_assignment": assignment,
    }
    return report.emit(args)


def cmd_seminorm(args) -> int:
    report = Report(f"seminorm:{args.mode}", {"complex": args.complex, "chain": args.chain})
    K, _ = core.load_complex(args.complex)
    pivot = _pivot_from_env()
    results = report.data["results"]
    if args.mode == "linf":
        f = core.load_chain(args.chain, cls=Cochain)
        value, rep, cert = linf_seminorm(K, f, pivot=pivot)
        results["model"] = "simplicial-model seminorm (upper bound for the singular one)"
        results["linf_seminorm"] = rat_str(value)
        results["optimal_representative"] = _cochain_dict(rep)
        certificates = {"linf": cert.to_dict()}
    elif args.mode == "l1":
        z = core.load_chain(args.chain, cls=Chain)
        value, rep, cert = l1_seminorm(K, z, pivot=pivot)
        results["model"] = "simplicial-model seminorm (upper bound for the singular one)"
        results["l1_seminorm"] = rat_str(value)
        results["optimal_representative"] = _cochain_dict(rep)
        certificates = {"l1": cert.to_dict()}
    else:
        z = core.load_chain(args.chain, cls=Chain)
        rep = duality_check(K, z, pivot=pivot)
        results["model"] = "simplicial-model seminorm (upper bound for the singular one)"
        results["status"] = rep.status
        results["l1_seminorm"] = rat_str(rep.l1_value)
        certificates = {"l1": rep.l1_certificate.to_dict()}
        if rep.status == "paired":
            results["dual_cocycle"] = _cochain_dict(rep.cocycle)
            results["dual_linf"] = rat_str(rep.cocycle_certificate.value)
            results["reciprocal_identity"] = (
                rep.l1_value * rep.cocycle_certificate.value == 1)
            certificates["cocycle"] = rep.cocycle_certificate.to_dict()
        else:
            results["degenerate"] = True
    if args.certificate:
        with open(args.certificate, "w") as fh:
            json.dump(certificates, fh, indent=2, sort_keys=True)
            fh.write("\n")
    results["certificates"] = certificates
    return report.emit(args)


def cmd_duality(args) -> int:
    args.mode = "duality"
    return cmd_seminorm(args)


def cmd_bench_subdivide(args) -> int:
    import math

    report = Report("bench-subdivide", {"complex": args.complex})
    if args.rounds > args.cap:
        raise CapError(f"rounds {args.rounds} exceed cap {args.cap}")
    K, _ = core.load_complex(args.complex)
    rounds = []
    timings = []
    current = K
    for r in range(args.rounds):
        t0 = time.perf_counter()
        sub = subdivide_complex(current)
        timings.append(time.perf_counter() - t0)
        expected_top = current.counts()[-1] * math.factorial(current.dim + 1)
        got_top = sub.complex.counts()[-1]
        assert got_top == expected_top, "top simplex count must follow the factorial law"
        rounds.append({
            "round": r + 1,
            "counts": sub.complex.counts(),
            "top_count_check": got_top,
        })
        current = sub.complex
    report.data["results"] = {
        "initial_counts": K.counts(),
        "rounds": rounds,
        "growth_factor_per_round": math.factorial(K.dim + 1),
    }
    report.data["timing"] = {"round_seconds": timings}
    return report.emit(args)


def cmd_groupcoh(args) -> int:
    report = Report("groupcoh", {"group": args.group})
    G = FiniteGroup.from_dict(_load_json(args.group))
    res_orbit = group_cohomology(G, args.degree)
    res_dense = bounded_group_cohomology(G, args.degree)
    assert res_orbit.rank == res_dense.rank
    assert sorted(s for _, s in res_orbit.seminorms) == \
        sorted(s for _, s in res_dense.seminorms)
    report.data["results"] = {
        "group": G.name,
        "order": G.order,
        "degree": args.degree,
        "rank": res_orbit.rank,
        "canonical_seminorms": [rat_str(s) for _, s in res_orbit.seminorms],
        "pipelines_agree": True,
    }
    return report.emit(args)


def cmd_transfer(args) -> int:
    report = Report("transfer", {"covering": args.covering, "cochain": args.cochain})
    data = _load_json(args.covering)
    if "ambient_generators" not in data:
        raise ParseError("transfer needs 'ambient_generators' in the covering file")
    total, _ = core.complex_from_dict(data["total"])
    D = IsometryGroupDatum(total, data["ambient_generators"],
                           data.get("deck_generators", []))
    f = core.load_chain(args.cochain, cls=Cochain)
    out = transfer(D, f)
    report.data["results"] = {
        "group_order": len(D.group),
        "subgroup_order": len(D.gamma),
        "region_size": len(D.region),
        "transfer": _cochain_dict(out),
        "sup_norm_in": rat_str(f.sup_norm()),
        "sup_norm_out": rat_str(out.sup_norm()),
    }
    return report.emit(args)


def cmd_theta(args) -> int:
    report = Report("theta", {"cochain": args.cochain})
    line = LineCovering(args.circle)
    f = core.load_chain(args.cochain, cls=Cochain)
    out = line.cone_average(f)
    results = {
        "circle_edges": args.circle,
        "bruhat": line.bruhat_metadata(),
        "theta": _cochain_dict(out),
        "sup_norm_in": rat_str(f.sup_norm()),
        "sup_norm_out": rat_str(out.sup_norm()),
    }
    if f.degree == 1:
        eta = cohomologous_witness(line.base, f, out)
        results["primitive_of_difference"] = _cochain_dict(eta)
    report.data["results"] = results
    return report.emit(args)


def cmd_integrate1(args) -> int:
    report = Report("integrate1", {"complex": args.complex, "cochain": args.cochain})
    K, _ = core.load_complex(args.complex)
    f = core.load_chain(args.cochain, cls=Cochain)
    F = path_primitive(K, f, base_vertex=args.base_vertex)
    report.data["results"] = {
        "primitive": _cochain_dict(F),
        # achieved bound only; it depends on combinatorial path lengths
        "achieved_sup_norm": rat_str(F.sup_norm()),
        "input_sup_norm": rat_str(f.sup_norm()),
    }
    return report.emit(args)


# ---------------------------------------------------------------------------
# wiring

def _pivot_from_env() -> str:
    pivot = os.environ.get("ELLONE_PIVOT", "bland")
    if pivot != "bland":
        raise ParseError(f"ELLONE_PIVOT={pivot!r} is not supported (only 'bland')")
    return pivot


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ellone",
        description="exact chain complex computations with LP seminorms")
    parser.add_argument("--report", metavar="PATH", help="also write the JSON report here")
    parser.add_argument("--decimal", action="store_true",
                        help="add a display-only decimal rendering of the results")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("homology", help="homology ranks of a complex file")
    p.add_argument("complex")
    p.add_argument("--degree", type=int, default=None)
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("seminorm", help="l1/linf/duality seminorm computations")
    p.add_argument("complex")
    p.add_argument("chain")
    p.add_argument("--mode", choices=("l1", "linf", "duality"), default="l1")
    p.add_argument("--certificate", metavar="PATH",
                   help="write the LP certificates to this file")
    p.set_defaults(func=cmd_seminorm)

    p = sub.add_parser("duality", help="shorthand for seminorm --mode duality")
    p.add_argument("complex")
    p.add_argument("chain")
    p.add_argument("--certificate", metavar="PATH")
    p.set_defaults(func=cmd_duality)

    p = sub.add_parser("bench-subdivide", help="iterated barycentric subdivision benchmark")
    p.add_argument("complex")
    p.add_argument("--rounds", type=int, default=1)
    p.add_argument("--cap", type=int, default=6)
    p.set_defaults(func=cmd_bench_subdivide)

    p = sub.add_parser("groupcoh", help="group cohomology rank and canonical seminorms")
    p.add_argument("group")
    p.add_argument("--degree", type=int, default=1)
    p.set_defaults(func=cmd_groupcoh)

    p = sub.add_parser("transfer", help="average a subgroup-invariant cochain over coset reps")
    p.add_argument("covering")
    p.add_argument("cochain")
    p.set_defaults(func=cmd_transfer)

    p = sub.add_parser("theta", help="cone-averaged cochain on the line-over-circle family")
    p.add_argument("cochain")
    p.add_argument("--circle", type=int, required=True, metavar="K",
                   help="number of edges of the base circle")
    p.set_defaults(func=cmd_theta)

    p = sub.add_parser("integrate1", help="primitive of a 1-cochain killing all cycles")
    p.add_argument("complex")
    p.add_argument("cochain")
    p.add_argument("--base-vertex", type=int, default=0)
    p.set_defaults(func=cmd_integrate1)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _pivot_from_env()
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CapError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (PreconditionError, DegreeError) as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except ElloneError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())

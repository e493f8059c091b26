"""Command line entry point: ``shapaudit {analyze,scan,compare,circuit-check}``.

Exit codes: 0 success, 2 input error, 3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction

from . import audit, core, importance, scan, shapley, xplain
from .circuit import check_decomposable, check_deterministic, load_circuit, materialize

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INVARIANT = 3


class InvariantViolation(RuntimeError):
    pass


def _function(args) -> core.BooleanFunction:
    if args.tt is not None:
        return core.parse_tt(args.tt)
    return materialize(load_circuit(args.circuit))


def _problem(args) -> core.ExplanationProblem:
    f = _function(args)
    return core.make_problem(f, core.parse_point(args.instance, f.m))


def analysis_report(e: core.ExplanationProblem, topk: int | None = None, signed: bool = False) -> dict:
    sv = shapley.shapley_all(e)
    xps = xplain.explain(e)
    issues = audit.detect_issues(e)
    imp = importance.axp_importance(e)

    # cheap cross-checks between independently derived quantities
    if sum(sv.values, Fraction(0)) != e.c - shapley.phi(0, e):
        raise InvariantViolation("Shapley values violate efficiency")
    union = 0
    for x in xps.axps:
        union |= x
    if union != xps.relevant:
        raise InvariantViolation("relevancy disagrees with the union of AXp's")

    report = {
        "function": core.render_tt(e.function),
        "instance": core.render_point(e.v),
        "m": e.m,
        "prediction": e.c,
        "shapley": sv.to_json(),
        "ranking": audit.rank_features(sv.values, absolute=not signed),
        "relevant": core.features_of(xps.relevant),
        "irrelevant": core.features_of(core.full_set(e.m) ^ xps.relevant),
        "axps": [core.features_of(x) for x in xps.axps],
        "cxps": [core.features_of(y) for y in xps.cxps],
        "issues": issues.to_json(),
        "all_irrelevant_dominate": audit.all_irrelevant_dominate(e),
        "importance": imp.to_json(),
    }
    if topk is not None:
        report["diagnostics"] = audit.ranking_diagnostics(e, topk, absolute=not signed).to_json()
        report["diagnostics"]["ranking_mode"] = "signed" if signed else "absolute"
    return report


def read_attribution(path: str, m: int) -> list[float]:
    """Read ``feature_index,score`` lines; a non-numeric first row is a header."""
    scores: dict[int, float] = {}
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and any(x.strip() for x in r)]
    for n, row in enumerate(rows):
        if len(row) != 2:
            raise core.FormatError(f"attribution row {n + 1}: expected 'feature,score'")
        try:
            feat, score = int(row[0]), float(row[1])
        except ValueError:
            if n == 0:
                continue
            raise core.FormatError(f"attribution row {n + 1}: not a number") from None
        if feat in scores:
            raise core.FormatError(f"attribution lists feature {feat} twice")
        scores[feat] = score
    if sorted(scores) != list(range(1, m + 1)):
        raise core.FormatError(
            f"attribution must give one score for each feature 1..{m}, got {sorted(scores)}"
        )
    return [scores[i] for i in range(1, m + 1)]


def cmd_analyze(args) -> dict:
    return analysis_report(_problem(args), args.topk, args.signed)


def cmd_compare(args) -> dict:
    e = _problem(args)
    ref = shapley.shapley_all(e).values
    cand = read_attribution(args.attr, e.m)
    wrong, total = audit.wrong_pairs(cand, ref)
    return {
        "function": core.render_tt(e.function),
        "instance": core.render_point(e.v),
        "wrong": wrong,
        "total": total,
        "reference_ranking": audit.rank_features(ref),
        "candidate_ranking": audit.rank_features(cand),
    }


def cmd_circuit_check(args) -> dict:
    c = load_circuit(args.circuit, args.arity)
    f = materialize(c)
    dec = check_decomposable(c)
    det = check_deterministic(c)
    return {
        "m": c.m,
        "nodes": len(c.nodes),
        "decomposable": dec,
        "deterministic": det,
        "ddnnf": dec and det,
        "table": core.render_tt(f),
        "constant": f.constant,
    }


def cmd_scan(args) -> str:
    cfg = scan.ScanConfig(
        exclude_constants=not args.include_constants,
        K=args.topk,
        workers=args.jobs,
        arithmetic=args.arithmetic,
    )
    summary = scan.scan_functions(args.vars, cfg)
    return summary.to_csv() if args.out == "csv" else scan.dumps(summary) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shapaudit",
        description="Audit exact Shapley values of Boolean classifiers against feature relevancy.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_function_args(p):
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--tt", help="truth table, first digit is the class of 0...0")
        src.add_argument("--circuit", help="circuit file (.cir)")
        p.add_argument("--instance", required=True, help="point as a bitstring, x1 first")

    p = sub.add_parser("analyze", help="full report for one instance")
    add_function_args(p)
    p.add_argument("--topk", type=int, help="also report Top-K/Bot-K diagnostics")
    p.add_argument("--signed", action="store_true", help="rank by signed instead of absolute value")
    p.set_defaults(run=cmd_analyze)

    p = sub.add_parser("compare", help="count wrong pairs of an external attribution")
    add_function_args(p)
    p.add_argument("--attr", required=True, help="CSV of feature_index,score")
    p.set_defaults(run=cmd_compare)

    p = sub.add_parser("circuit-check", help="d-DNNF checks and truth table of a circuit")
    p.add_argument("--circuit", required=True)
    p.add_argument("--arity", type=int, help="override the circuit's arity")
    p.set_defaults(run=cmd_circuit_check)

    p = sub.add_parser("scan", help="scan every Boolean function of m variables")
    p.add_argument("--vars", type=int, required=True, help=f"m, at most {core.SCAN_MAX_ARITY}")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--topk", type=int, default=None, help="K for diagnostics (default min(2, m))")
    p.add_argument("--out", choices=("json", "csv"), default="json")
    p.add_argument("--arithmetic", choices=scan.ARITHMETIC, default="exact")
    p.add_argument("--include-constants", action="store_true")
    p.add_argument("--output", help="write to this file instead of stdout")
    p.set_defaults(run=cmd_scan)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        result = args.run(args)
    except InvariantViolation as exc:
        print(f"shapaudit: internal error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (core.AuditError, ValueError, OSError) as exc:
        print(f"shapaudit: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = result if isinstance(result, str) else json.dumps(result, indent=2) + "\n"
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

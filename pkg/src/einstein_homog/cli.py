"""Command-line interface: solve / tables / verify / oracle / plan.

Exit codes: 0 success, 1 usage or input error, 2 certification failure,
3 computed table disagrees with the embedded expected grid.  The residual
tolerance can be overridden with --tol or the EINSTEIN_HOMOG_TOL variable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import tables as tables_mod
from .curvature import DEFAULT_TOLERANCE, MetricParams, verify_einstein
from .oracle import OracleError, compare_triple_symbols, verify_lemma3
from .solvers import (
    GENERAL_X_NE_Y,
    jensen_solve,
    general_solve,
    plan_many_metrics,
    quartic_solve,
    table_sweep,
)
from .spaces import GroupFamily, ModuleId, SpaceSpec, SpaceError, killing_ratio
from .surd import decimal_str

ORACLE_TOL = 1e-9

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CERTIFICATION = 2
EXIT_TABLE_MISMATCH = 3


class CliError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    family: GroupFamily | None = None
    k1: int | None = None
    k2: int | None = None
    k: int | None = None
    l: int | None = None
    s: int | None = None
    p: int | None = None
    blocks: tuple | None = None
    k_range: range | None = None
    l_range: range | None = None
    mode: str | None = None  # jensen | quartic | general
    fmt: str = "json"
    out: str | None = None
    tolerance: float = DEFAULT_TOLERANCE
    path: str | None = None


def _parse_range(text: str) -> range:
    if ".." in text:
        lo, hi = text.split("..")
        return range(int(lo), int(hi) + 1)
    v = int(text)
    return range(v, v + 1)


def _tolerance_from(args) -> float:
    if getattr(args, "tol", None) is not None:
        tol = args.tol
    else:
        tol = float(os.environ.get("EINSTEIN_HOMOG_TOL", DEFAULT_TOLERANCE))
    if tol <= 0:
        raise CliError("tolerance must be positive")
    return tol


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def solution_payload(sol) -> dict:
    return {
        "family_label": sol.family_label,
        "params": {str(m): decimal_str(v) for m, v in sol.metric.items()},
        "lambda": sol.certificate.lambda_,
        "residual": sol.certificate.residual_inf,
        "scalar_curvature": sol.certificate.scalar_curvature,
    }


def solutions_payload(spec: SpaceSpec, sols: list) -> dict:
    return {
        "spec": {
            "family": spec.family.value,
            "blocks": list(spec.blocks),
            "s": spec.s,
            "t": spec.t,
        },
        "solutions": [solution_payload(s) for s in sols],
    }


def _solution_lines(sol) -> list:
    params = "  ".join(f"{m}={float(v):.12g}" for m, v in sol.metric.items())
    lines = [
        f"  [{sol.family_label}] {params}",
        f"      lambda={sol.certificate.lambda_:.12g}"
        f"  residual={sol.certificate.residual_inf:.3e}"
        f"  S={sol.certificate.scalar_curvature:.12g}",
    ]
    if sol.system_residual is not None:
        lines.append(f"      five-parameter system residual={sol.system_residual:.3e}")
    if sol.flags:
        lines.append(f"      FLAGS: {', '.join(sol.flags)}")
    return lines


def cmd_solve(cfg: RunConfig) -> int:
    if cfg.mode == "jensen":
        sols = jensen_solve(cfg.family, cfg.k1, cfg.k2, cfg.tolerance)
        note = None
    elif cfg.mode == "quartic":
        sols = quartic_solve(cfg.family, cfg.k, cfg.l, cfg.tolerance)
        jensen_count = len(jensen_solve(cfg.family, 2 * cfg.k, cfg.l, cfg.tolerance))
        note = (
            f"note: {jensen_count} classical two-parameter solution(s) with "
            "x1 = x2 = x12 also exist on this space"
        )
    elif cfg.mode == "general":
        sols = general_solve(cfg.family, cfg.s, cfg.k, cfg.l, cfg.tolerance)
        note = None
    else:
        raise CliError("choose one of --jensen / --quartic / --general")
    if not sols:
        spec = None
    else:
        spec = sols[0].spec
    if cfg.fmt == "json":
        if spec is None:
            raise CliError("no solutions found; nothing to serialize")
        _emit(json.dumps(solutions_payload(spec, sols), indent=2) + "\n", cfg.out)
    else:
        lines = []
        if spec is not None:
            lines.append(spec.describe())
        lines.append(f"{len(sols)} solution(s)")
        for sol in sols:
            lines.extend(_solution_lines(sol))
        if note:
            lines.append(note)
        _emit("\n".join(lines) + "\n", cfg.out)
    flagged = any(sol.flags for sol in sols)
    return EXIT_CERTIFICATION if flagged else EXIT_OK


def cmd_tables(cfg: RunConfig) -> int:
    grid = table_sweep(cfg.family, cfg.k_range, cfg.l_range)
    if cfg.fmt == "text":
        body = tables_mod.grid_text(
            grid,
            cfg.k_range,
            cfg.l_range,
            title=f"positive quartic roots, family {cfg.family.value}",
        )
    else:
        body = tables_mod.grid_csv(grid, cfg.k_range, cfg.l_range)
    _emit(body, cfg.out)
    mismatches = tables_mod.compare_with_expected(cfg.family, grid)
    if mismatches:
        for k, l, got, want in mismatches:
            sys.stderr.write(
                f"mismatch at k={k} l={l}: computed {got}, expected {want}\n"
            )
        return EXIT_TABLE_MISMATCH
    return EXIT_OK


def _parse_metric_value(raw):
    if isinstance(raw, str):
        return Fraction(raw)
    if isinstance(raw, bool):
        raise CliError("boolean metric value")
    if isinstance(raw, int):
        return Fraction(raw)
    if isinstance(raw, float):
        return Fraction(raw)
    raise CliError(f"bad metric value {raw!r}")


def _spec_from_payload(payload: dict) -> SpaceSpec:
    fam = GroupFamily.parse(payload["family"])
    return SpaceSpec(family=fam, blocks=tuple(payload["blocks"]), s=int(payload["s"]))


def cmd_verify(cfg: RunConfig) -> int:
    try:
        with open(cfg.path) as fh:
            doc = json.load(fh)
        spec_payload = doc["spec"] if "spec" in doc else doc
        spec = _spec_from_payload(spec_payload)
        if "solutions" in doc:
            metrics = [sol["params"] for sol in doc["solutions"]]
        elif "params" in doc:
            metrics = [doc["params"]]
        else:
            raise CliError("file carries neither 'solutions' nor 'params'")
        parsed = [
            MetricParams(
                {ModuleId.parse(key): _parse_metric_value(v) for key, v in m.items()}
            )
            for m in metrics
        ]
    except (OSError, ValueError, KeyError, TypeError, SpaceError) as exc:
        sys.stderr.write(f"cannot read metric file: {exc}\n")
        return EXIT_USAGE
    all_ok = True
    for metric in parsed:
        cert = verify_einstein(spec, metric, cfg.tolerance)
        status = "PASS" if cert.accepted else "FAIL"
        sys.stdout.write(
            f"{status} residual={cert.residual_inf:.3e} lambda={cert.lambda_:.12g} "
            f"S={cert.scalar_curvature:.12g} volume={cert.volume:.12g} "
            f"tol={cfg.tolerance:.1e}\n"
        )
        all_ok = all_ok and cert.accepted
    return EXIT_OK if all_ok else EXIT_CERTIFICATION


def cmd_oracle(cfg: RunConfig) -> int:
    spec = SpaceSpec(family=cfg.family, blocks=cfg.blocks, s=cfg.s)
    try:
        rows = compare_triple_symbols(spec)
    except OracleError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_USAGE
    worst = 0.0
    out = [f"{spec.describe()}", "triple symbols: closed form vs brute force"]
    for row in rows:
        worst = max(worst, row.deviation)
        trip = " ".join(str(m) for m in row.triple)
        out.append(
            f"  [{trip}]  closed={row.closed:.12f}  brute={row.brute:.12f}"
            f"  dev={row.deviation:.2e}"
        )
    out.append("Killing restriction ratios (per-index sums):")
    sizes = sorted(set(spec.blocks))
    pair_sums = sorted(
        {a + b for i, a in enumerate(spec.blocks) for b in spec.blocks[i + 1 :]}
    )
    for k in sizes + [v for v in pair_sums if v <= spec.n]:
        if spec.family is GroupFamily.ORTHOGONAL and k < 2:
            continue
        report = verify_lemma3(cfg.family, spec.n, k)
        worst = max(worst, report.max_deviation)
        out.append(
            f"  k={k}: expected alpha={float(report.expected_alpha):.12f}"
            f"  max dev={report.max_deviation:.2e}"
        )
    out.append(f"max deviation: {worst:.3e}")
    _emit("\n".join(out) + "\n", cfg.out)
    return EXIT_OK if worst < ORACLE_TOL else EXIT_CERTIFICATION


def cmd_plan(cfg: RunConfig) -> int:
    result = plan_many_metrics(cfg.family, cfg.p, cfg.tolerance)
    sols = result.solutions
    flagged = any(sol.flags for sol in sols)
    if cfg.fmt == "json":
        payload = {
            "family": result.family.value,
            "p": result.p,
            "prime_factors": list(result.prime_factors),
            "n": result.n,
            "l": result.l,
            "space": result.spec_label,
            "min_margin": result.min_margin,
            "runs": [
                {
                    "k": run.k,
                    "s": run.s,
                    "solutions": [solution_payload(s) for s in run.solutions],
                }
                for run in result.runs
            ],
        }
        _emit(json.dumps(payload, indent=2) + "\n", cfg.out)
    else:
        lines = [
            f"target space {result.spec_label} (n={result.n}, l={result.l}),"
            f" factors {list(result.prime_factors)}",
            f"{len(sols)} non-classical metric(s), pairwise margin {result.min_margin:.3e}",
        ]
        for run in result.runs:
            lines.append(f"run k={run.k} s={run.s}:")
            for sol in run.solutions:
                lines.extend(_solution_lines(sol))
        _emit("\n".join(lines) + "\n", cfg.out)
    if flagged or len(sols) < 2 * cfg.p:
        return EXIT_CERTIFICATION
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="einstein-homog",
        description="Invariant Einstein metrics on SO(n)/SO(l) and Sp(n)/Sp(l)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, fmt_default="json"):
        p.add_argument("--tol", type=float, default=None, help="residual tolerance")
        p.add_argument("--format", dest="fmt", choices=("json", "text", "csv"),
                       default=fmt_default)
        p.add_argument("--out", default=None, help="write output to a file")

    p = sub.add_parser("solve", help="solve one family on one space")
    p.add_argument("--family", required=True)
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--jensen", action="store_true")
    mode.add_argument("--quartic", action="store_true")
    mode.add_argument("--general", action="store_true")
    p.add_argument("--k1", type=int)
    p.add_argument("--k2", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--s", type=int)
    add_common(p)

    p = sub.add_parser("tables", help="root-count grid vs embedded expectations")
    p.add_argument("--family", required=True)
    p.add_argument("--k", default="3..20", help="k range, e.g. 3..20")
    p.add_argument("--l", default="1..20", help="l range, e.g. 1..20")
    add_common(p, fmt_default="csv")

    p = sub.add_parser("verify", help="check a metric file")
    p.add_argument("path")
    add_common(p, fmt_default="text")

    p = sub.add_parser("oracle", help="closed forms vs brute-force Lie algebra")
    p.add_argument("--family", required=True)
    p.add_argument("--blocks", required=True, help="comma separated, e.g. 2,3")
    p.add_argument("--s", type=int, default=None, help="split (default: all but last)")
    add_common(p, fmt_default="text")

    p = sub.add_parser("plan", help="a space with at least 2p distinct metrics")
    p.add_argument("--family", required=True)
    p.add_argument("--p", type=int, required=True)
    add_common(p)
    return parser


def _config_from_args(args) -> RunConfig:
    cfg = RunConfig(command=args.command, tolerance=_tolerance_from(args))
    cfg.fmt = getattr(args, "fmt", "json")
    cfg.out = getattr(args, "out", None)
    if hasattr(args, "family") and args.family:
        cfg.family = GroupFamily.parse(args.family)
    if args.command == "solve":
        cfg.mode = (
            "jensen" if args.jensen else "quartic" if args.quartic else "general"
        )
        cfg.k1, cfg.k2 = args.k1, args.k2
        cfg.k, cfg.l, cfg.s = args.k, args.l, args.s
        if cfg.mode == "jensen" and (cfg.k1 is None or cfg.k2 is None):
            raise CliError("--jensen needs --k1 and --k2")
        if cfg.mode == "quartic" and (cfg.k is None or cfg.l is None):
            raise CliError("--quartic needs --k and --l")
        if cfg.mode == "general" and (cfg.s is None or cfg.k is None or cfg.l is None):
            raise CliError("--general needs --s, --k and --l")
    elif args.command == "tables":
        cfg.k_range = _parse_range(args.k)
        cfg.l_range = _parse_range(args.l)
        if len(cfg.k_range) == 0 or len(cfg.l_range) == 0:
            raise CliError("empty sweep range")
    elif args.command == "verify":
        cfg.path = args.path
    elif args.command == "oracle":
        cfg.blocks = tuple(int(v) for v in args.blocks.split(","))
        cfg.s = args.s if args.s is not None else len(cfg.blocks) - 1
        if cfg.s < 0 or cfg.s > len(cfg.blocks):
            raise CliError("bad --s")
    elif args.command == "plan":
        cfg.p = args.p
        if cfg.p < 1:
            raise CliError("--p must be at least 1")
    return cfg


_DISPATCH = {
    "solve": cmd_solve,
    "tables": cmd_tables,
    "verify": cmd_verify,
    "oracle": cmd_oracle,
    "plan": cmd_plan,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = _config_from_args(args)
        return _DISPATCH[cfg.command](cfg)
    except CliError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (SpaceError, ValueError) as exc:
        sys.stderr.write(f"invalid input: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

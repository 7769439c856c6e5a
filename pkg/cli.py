#!/usr/bin/env python3
"""
Batch front-end for the symmetric-product engine.

    python cli.py algebra validate P2
    python cli.py verify heisenberg --algebra P2 --max-n 3
    python cli.py stable tabulate --algebra point --max-norm 3 --output reports/point_table.csv
    python cli.py export reports/heisenberg.json --format csv --output reports/heisenberg.csv
"""

import argparse
import asyncio
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from dictionary import chern_generating
from engine_config import SUITES, SuiteConfig, configure_logging, env_settings, resolve_algebra_path, resolve_config
from fock import FockVector, OrbifoldFock, PartitionFunction, apply_word, format_coordinates, parse_ops, reduce_monomials
from frobenius import EngineError, FrobeniusAlgebra, ShapeError, format_rational, parse_rational
from jucys import JucysClasses
from orbiring import OrbElement, invariant_product, product
from reports import Case, CaseResult, RunMeter, SuiteReport, canonical_json, load_report, report_rows, sha256_hex, write_csv, write_json, write_report
from stablering import StableStore, StableTabulator
from suites import build_suite, parse_element

logger = logging.getLogger(__name__)


def load_algebra(name: str) -> FrobeniusAlgebra:
    return FrobeniusAlgebra.load(resolve_algebra_path(name))


def parse_rho(algebra: FrobeniusAlgebra, text: Optional[str]) -> PartitionFunction:
    """JSON mapping such as '{"x": [2], "1": [1]}'; empty means ∅"""
    if not text:
        return PartitionFunction()
    try:
        mapping = json.loads(text)
    except json.JSONDecodeError as e:
        raise ShapeError(f"partition function {text!r} is not JSON: {e}")
    return PartitionFunction.from_mapping(algebra, mapping)


def emit(obj: Any) -> None:
    print(canonical_json(obj))


# ------------------------------------------------------------------ suites


async def _run_concurrently(cases: Sequence[Case], workers: int) -> List[CaseResult]:
    semaphore = asyncio.Semaphore(workers)

    async def run_one(case: Case) -> CaseResult:
        async with semaphore:
            return await asyncio.to_thread(case.run)

    return await asyncio.gather(*(run_one(case) for case in cases))


def run_suite(cfg: SuiteConfig, store_dir: Optional[str] = None) -> SuiteReport:
    """Build, run and (when cfg.output is set) write one suite; merge order is by case id"""
    meter = RunMeter()
    algebra = load_algebra(cfg.algebra)
    theorem, cases, notes = build_suite(cfg, algebra, store_dir)
    logger.info(f"🚀 Running {cfg.suite} on {algebra.name} with {cfg.workers} workers")
    results = asyncio.run(_run_concurrently(cases, cfg.workers))
    report = SuiteReport(cfg.suite, theorem, sorted(results, key=lambda c: c.id), {"algebra": algebra.name, **notes})
    meta = {**meter.snapshot(), "workers": cfg.workers, "cases": len(cases), "algebra_sha256": algebra.fingerprint()}
    logger.info(f"⏱️ {cfg.suite} took {meta['wall_seconds']}s, rss {meta['rss_bytes'] // (1 << 20)} MiB")
    if cfg.output:
        write_report(cfg.output, report, meta)
    if report.passed:
        logger.info(f"✅ {report.summary()}")
    else:
        logger.warning(f"❌ {report.summary()}")
    return report


# ------------------------------------------------------------------ subcommands


def cmd_algebra(args: argparse.Namespace) -> int:
    algebra = load_algebra(args.name)
    emit({
        "name": algebra.name,
        "complex_dim": algebra.d,
        "dim": algebra.dim,
        "euler": algebra.format_element(algebra.euler_class()),
        "euler_integral": format_rational(algebra.integrate(algebra.euler_class())),
        "sha256": algebra.fingerprint(),
    })
    return 0


def load_element(algebra: FrobeniusAlgebra, path: str, n: int) -> OrbElement:
    """OrbElement from a JSON file in the to_dict layout: [{"perm": [...], "payload": [{"indices": [...], "coeff": "p/q"}]}]"""
    source = Path(path)
    if not source.exists():
        raise EngineError(f"element file {source} does not exist")
    try:
        data = json.loads(source.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ShapeError(f"element file {source} is not JSON: {e}")
    return OrbElement.from_dict(algebra, n, data)


def cmd_product(args: argparse.Namespace) -> int:
    algebra = load_algebra(args.algebra)
    t = parse_rational(args.s) ** 6 if args.s else parse_rational(args.t)
    if args.lhs or args.rhs:
        if not (args.lhs and args.rhs):
            raise ShapeError("--lhs and --rhs go together")
        x = load_element(algebra, args.lhs, args.n)
        y = load_element(algebra, args.rhs, args.n)
        emit(product(x, y, t).to_dict())
        return 0
    fock = OrbifoldFock(algebra)
    x = fock.p_rho(parse_rho(algebra, args.x), args.n)
    y = fock.p_rho(parse_rho(algebra, args.y), args.n)
    emit(format_coordinates(algebra, fock.coordinates(invariant_product(x, y, t))))
    return 0


def cmd_fock(args: argparse.Namespace) -> int:
    algebra = load_algebra(args.algebra)
    fock = OrbifoldFock(algebra)
    v = FockVector.of(fock.p_rho(parse_rho(algebra, args.rho), args.n))
    image = apply_word(fock, parse_ops(algebra, args.ops), v)
    emit({str(n): format_coordinates(algebra, fock.coordinates(x)) for n, x in sorted(image.levels.items())})
    return 0


def cmd_class(args: argparse.Namespace) -> int:
    algebra = load_algebra(args.algebra)
    fock = OrbifoldFock(algebra)
    classes = JucysClasses(algebra, parse_rational(args.t))
    element = parse_element(algebra, args.alpha)
    if args.kind == "O":
        out = format_coordinates(algebra, fock.coordinates(classes.O(args.k, element, args.n)))
    elif args.kind == "eta":
        out = format_coordinates(algebra, fock.coordinates(classes.eta(element, args.n)))
    elif args.kind == "epsilon":
        series = classes.epsilon(element, args.n)
        out = {str(k): format_coordinates(algebra, fock.coordinates(x)) for k, x in sorted(series.terms.items())}
    else:
        out = format_coordinates(algebra, fock.coordinates(classes.P(args.k, element, args.n, fock)))
    emit(out)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    values = {
        "algebra": args.algebra,
        "suite": args.suite,
        "max_n": args.max_n,
        "max_k": args.max_k,
        "max_mode": args.max_mode,
        "max_pq": args.max_pq,
        "s": args.s,
        "special_minus_one": args.special_minus_one,
        "L": args.L,
        "hbar_order": args.hbar_order,
        "output": args.output,
        "workers": args.workers,
        "unsafe_caps": args.unsafe_caps,
    }
    cfg = resolve_config(values, args.config)
    report = run_suite(cfg, args.store)
    for failure in report.failures:
        print(f"FAIL {failure.id}: {failure.residual}")
    print(report.summary())
    return 0 if report.passed else 1


def cmd_stable(args: argparse.Namespace) -> int:
    algebra = load_algebra(args.algebra)
    store = StableStore(Path(args.store or env_settings()["store_dir"]), algebra)
    table = StableTabulator(algebra, parse_rational(args.t), store=store).tabulate(args.max_norm)
    unstable = [e for e in table.entries.values() if not e.stable]
    if args.output and args.output.endswith(".csv"):
        write_csv(args.output, ["rho", "sigma", "nu", "coeff"], table.rows())
    elif args.output:
        write_json(args.output, table.to_dict())
    else:
        emit(table.to_dict())
    if unstable:
        logger.warning(f"❌ {len(unstable)} entries are not stable across their window")
        return 1
    return 0


def cmd_chern(args: argparse.Namespace) -> int:
    algebra = load_algebra(args.algebra)
    hbar_order, z_order = (int(x) for x in args.orders.split(","))
    L = parse_element(algebra, args.L)
    series = chern_generating(algebra, L, hbar_order, z_order)
    emit({
        str(n): {str(k): format_coordinates(algebra, reduce_monomials(algebra, vec)) for k, vec in sorted(s.terms.items())}
        for n, s in sorted(series.items())
    })
    return 0


def _mapping_label(mapping: Dict[str, List[int]]) -> str:
    if not mapping:
        return "-"
    return " ".join(f"{label}({','.join(str(r) for r in rs)})" for label, rs in mapping.items())


def cmd_export(args: argparse.Namespace) -> int:
    source = Path(args.input)
    if not source.exists():
        raise EngineError(f"artifact {source} does not exist")
    data = json.loads(source.read_text(encoding="utf-8"))
    output = args.output or str(source.with_suffix(f".export.{args.format}"))
    if "suite" in data:
        report = load_report(source)
        if args.format == "csv":
            write_csv(output, ["id", "pass", "residual"], report_rows(report))
        else:
            write_json(output, report.to_dict())
    elif "entries" in data:
        if args.format == "csv":
            rows = [
                [_mapping_label(e["rho"]), _mapping_label(e["sigma"]), _mapping_label(nu), c]
                for e in data["entries"]
                for nu, c in e["constants"]
            ]
            write_csv(output, ["rho", "sigma", "nu", "coeff"], rows)
        else:
            write_json(output, data)
    else:
        raise EngineError(f"{source} is neither a suite report nor a stable table")
    logger.info(f"📦 exported {source} as {args.format} (input sha256 {sha256_hex(canonical_json(data))[:12]})")
    return 0


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Exact orbifold cohomology of symmetric products")
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR (default SYMPROD_LOG_LEVEL)")
    sub = parser.add_subparsers(dest="command", required=True)

    algebra = sub.add_parser("algebra", help="Algebra files")
    algebra_sub = algebra.add_subparsers(dest="action", required=True)
    validate = algebra_sub.add_parser("validate", help="Check invariants and print the Euler class")
    validate.add_argument("name")
    validate.set_defaults(func=cmd_algebra)

    product_cmd = sub.add_parser("product", help="p_rho(n) o_t p_sigma(n) in reduced coordinates, or x o_t y from element files")
    product_cmd.add_argument("--algebra", required=True)
    product_cmd.add_argument("--n", type=int, required=True)
    product_cmd.add_argument("--x", default="", help='partition function as JSON, e.g. {"x": [2]}')
    product_cmd.add_argument("--y", default="")
    product_cmd.add_argument("--lhs", default=None, help="OrbElement JSON file; with --rhs prints the full product")
    product_cmd.add_argument("--rhs", default=None)
    product_cmd.add_argument("--t", default="1")
    product_cmd.add_argument("--s", default=None, help="use t = s^6")
    product_cmd.set_defaults(func=cmd_product)

    fock = sub.add_parser("fock", help="Heisenberg operators")
    fock_sub = fock.add_subparsers(dest="action", required=True)
    apply = fock_sub.add_parser("apply", help="Apply an operator word to p_rho(n)")
    apply.add_argument("--algebra", required=True)
    apply.add_argument("--ops", required=True, help='e.g. "p(1,x) p(-2,1)"')
    apply.add_argument("--rho", default="")
    apply.add_argument("--n", type=int, default=0)
    apply.set_defaults(func=cmd_fock)

    cls = sub.add_parser("class", help="O^k, eta_n, epsilon_n or P_i classes")
    cls.add_argument("kind", choices=["O", "eta", "epsilon", "P"])
    cls.add_argument("--algebra", required=True)
    cls.add_argument("--n", type=int, required=True)
    cls.add_argument("--k", type=int, default=0, help="k for O, i for P")
    cls.add_argument("--alpha", default="1", help="class, e.g. x or 1,x or 1/2*pt")
    cls.add_argument("--t", default="1")
    cls.set_defaults(func=cmd_class)

    verify = sub.add_parser("verify", help="Run a theorem suite")
    verify.add_argument("suite", choices=SUITES)
    verify.add_argument("--algebra", default=None)
    verify.add_argument("--max-n", "--n", dest="max_n", type=int, default=None)
    verify.add_argument("--max-k", type=int, default=None)
    verify.add_argument("--max-mode", type=int, default=None)
    verify.add_argument("--max-pq", type=int, default=None)
    verify.add_argument("--s", default=None, help="comma-separated nonzero rationals, t = s^6")
    verify.add_argument("--special-minus-one", action="store_true")
    verify.add_argument("--L", default=None)
    verify.add_argument("--hbar-order", type=int, default=None)
    verify.add_argument("--output", default=None)
    verify.add_argument("--workers", type=int, default=None)
    verify.add_argument("--unsafe-caps", action="store_true", help="lift the n caps (can run for hours)")
    verify.add_argument("--config", default=None, help="TOML file mirroring these flags")
    verify.add_argument("--store", default=None, help="stable store directory")
    verify.set_defaults(func=cmd_verify)

    stable = sub.add_parser("stable", help="Stable structure constants")
    stable_sub = stable.add_subparsers(dest="action", required=True)
    tabulate = stable_sub.add_parser("tabulate")
    tabulate.add_argument("--algebra", required=True)
    tabulate.add_argument("--max-norm", type=int, default=2)
    tabulate.add_argument("--t", default="1")
    tabulate.add_argument("--output", default=None, help=".json or .csv")
    tabulate.add_argument("--store", default=None)
    tabulate.set_defaults(func=cmd_stable)

    chern = sub.add_parser("chern", help="Chern generating function of a line class")
    chern.add_argument("--algebra", required=True)
    chern.add_argument("--L", required=True)
    chern.add_argument("--orders", default="2,3", help="hbar order, z order")
    chern.set_defaults(func=cmd_chern)

    export = sub.add_parser("export", help="Re-emit a report or stable table as canonical JSON or CSV")
    export.add_argument("input")
    export.add_argument("--format", choices=["json", "csv"], default="json")
    export.add_argument("--output", default=None)
    export.set_defaults(func=cmd_export)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        configure_logging(args.log_level)
        return args.func(args)
    except EngineError as e:
        logger.error(f"💥 {args.command} failed: {e}")
        return 2
    except ValueError as e:
        logger.error(f"💥 {args.command} failed: {e}")
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: ``lgcy <command> --poly ... --n ...``.

Exit codes: 0 ok, 2 parse/usage error or resource limit, 3 the isolated
singularity certificate failed, 4 some verification check failed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import __version__
from .frobenius import ModelConfig, build_model, compare_models, frobenius_checks, phi_ring_iso
from .milnor import ResourceLimitError, ring_for, set_default_cell_budget
from .parallel import pmap
from .poly import ParseError, PolyError, format_poly, hessian_det, parse_poly
from .report import Check, Report, emit_csv_tables, emit_report
from .tables import (
    bott_table,
    consistency_checks,
    e2_table,
    euler_contraction_checks,
    hypersurface_betti,
    koszul_corner,
    pv_cohomology_table,
)

EXIT_OK, EXIT_USAGE, EXIT_NOT_ISOLATED, EXIT_CHECK_FAILED = 0, 2, 3, 4
COMMANDS = ("hilbert", "koszul", "cohomology", "frobenius", "compare", "verify")
DEFAULT_CELL_BUDGET = 10**8


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    poly_text: str
    n: int
    fmt: str = "json"
    max_weight: int | None = None
    c: dict = field(default_factory=dict)
    trace_scale: Fraction = Fraction(1)
    base_c: dict = field(default_factory=dict)
    base_trace_scale: Fraction = Fraction(1)
    threads: int = 1
    out: str | None = None
    cell_budget: int = DEFAULT_CELL_BUDGET

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.n < 3:
            raise UsageError(f"--n must be at least 3 (got {self.n})")
        if self.max_weight is not None and self.max_weight < 1:
            raise UsageError("--max-weight must be at least 1")
        if self.threads < 1:
            raise UsageError("--threads must be at least 1")
        if self.cell_budget < 1:
            raise UsageError("--cell-budget must be positive")
        for name, scalars, t in (("--c", self.c, self.trace_scale), ("--base-c", self.base_c, self.base_trace_scale)):
            if any(v == 0 for v in scalars.values()):
                raise UsageError(f"{name} scalars must be nonzero")
            if t == 0:
                raise UsageError("trace scales must be nonzero")

    def echo(self, f) -> dict:
        """Input echo for the report; excludes threads and output paths so
        reruns with other worker counts give identical bodies."""
        out = {"poly": format_poly(f), "n": self.n, "command": self.command, "max_weight": self.weight_cap}
        if self.command in ("frobenius", "compare", "verify"):
            out["config"] = ModelConfig(self.c, self.trace_scale).as_dict()
        if self.command == "compare":
            out["base_config"] = ModelConfig(self.base_c, self.base_trace_scale).as_dict()
        return out

    @property
    def weight_cap(self) -> int:
        return self.n if self.max_weight is None else self.max_weight


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a rational number: {text!r}") from exc


def parse_scalar(text: str) -> tuple[int, Fraction]:
    """``q=rational`` as given to ``--c``."""
    q, sep, val = text.partition("=")
    if not sep:
        raise UsageError(f"--c expects q=rational, got {text!r}")
    try:
        qi = int(q)
    except ValueError as exc:
        raise UsageError(f"--c: degree {q!r} is not an integer") from exc
    return qi, parse_rational(val)


class Stopwatch:
    def __init__(self, sink: dict):
        self.sink = sink

    @contextmanager
    def __call__(self, stage: str):
        t0 = time.perf_counter()
        try:
            yield
        finally:
            self.sink[stage] = round((time.perf_counter() - t0) * 1000, 3)


# stages


def _stage_hilbert(rep: Report, ring) -> None:
    n = ring.n
    series = ring.hilbert_series()
    prim = tuple(series[k * n] for k in range(n - 1))
    mu = sum(series.values())
    rep.tables["hilbert"] = {
        "kind": "hilbert",
        "index_names": ["m"],
        "entries": [{"index": [m], "dim": d, "label": "R(f)_m"} for m, d in series.items()],
    }
    rep.certificates["milnor"] = {
        "milnor_number": mu,
        "primitive_dims": list(prim),
        "rw0_dim": sum(prim),
        "socle_hessian_coords": ring.normal_form(hessian_det(ring.f)),
    }
    hil = list(series.values())
    rep.add(Check.of("milnor_number_formula", mu == (n - 1) ** n, {"milnor_number": mu, "expected": (n - 1) ** n}))
    rep.add(Check.of("hilbert_palindrome", hil == hil[::-1], hil))


def _stage_koszul(rep: Report, f, cfg: RunConfig, corner) -> None:
    _, per_k, skipped = corner
    entries = []
    for k in range(1, cfg.weight_cap + 1):
        if k in per_k:
            for s, d in enumerate(per_k[k]):
                entries.append({"index": [k, s], "dim": d, "label": "H" if d else "0"})
    rep.tables["koszul"] = {"kind": "koszul", "index_names": ["k_top", "s"], "entries": entries}
    rep.add(euler_contraction_checks(f.n, cfg.weight_cap, cfg.threads))


def _stage_cohomology(rep: Report, f, cfg: RunConfig, corner) -> None:
    for t in (hypersurface_betti(f), pv_cohomology_table(f), e2_table(f), bott_table(f.n, range(-f.n - 1, f.n + 2))):
        rep.tables[t.kind] = t.payload()
    rep.extend(consistency_checks(f, cfg.weight_cap, cfg.cell_budget, cfg.threads, corner=corner))


def _stage_frobenius(rep: Report, f, cfg: RunConfig) -> None:
    A = build_model(f, ModelConfig(cfg.c, cfg.trace_scale))
    rep.frobenius = A.summary()
    rep.extend(frobenius_checks(A, cfg.threads))


def _stage_phi(rep: Report, f) -> None:
    phi = phi_ring_iso(f)
    rep.add(Check.of("phi_ring_isomorphism", phi.ok, phi.as_dict()))


def _stage_compare(rep: Report, f, cfg: RunConfig) -> None:
    A = build_model(f, ModelConfig(cfg.base_c, cfg.base_trace_scale))
    B = build_model(f, ModelConfig(cfg.c, cfg.trace_scale))
    cmp = compare_models(A, B)
    rep.frobenius = {"A": A.config.as_dict(), "B": B.config.as_dict(), "dim": A.dim, "comparison": cmp.as_dict()}
    rep.add(Check.of("compare_pairing", cmp.pairing_verified, {"pairs": cmp.pairs_checked, "c_phi": cmp.c_phi}))
    rep.add(Check.of("compare_ring_iso", cmp.ring_iso_verified, {"flag": cmp.flag}))


def execute(cfg: RunConfig) -> tuple[Report, int]:
    """Run one command; returns the report and the exit code.

    Usage problems raise :class:`UsageError`, budget overruns
    :class:`ResourceLimitError`; everything else is recorded in the report.
    """
    cfg.validate()
    rep = Report()
    clock = Stopwatch(rep.timings_ms)
    t0 = time.perf_counter()
    set_default_cell_budget(cfg.cell_budget)
    try:
        with clock("parse"):
            try:
                f = parse_poly(cfg.poly_text, cfg.n)
            except ParseError as exc:
                raise UsageError(f"parse error: {exc}") from exc
            except PolyError as exc:
                raise UsageError(str(exc)) from exc
            rep.input = cfg.echo(f)
        with clock("certificate"):
            try:
                ring = ring_for(f)
            except PolyError as exc:
                raise UsageError(str(exc)) from exc
            cert = ring.certificate()
        rep.certificates["isolated"] = cert.as_dict()
        rep.add(Check.of("isolated_certificate", cert.isolated, cert.as_dict()))
        if not cert.isolated:
            return rep, EXIT_NOT_ISOLATED

        cmd = cfg.command
        corner = None
        if cmd in ("hilbert", "verify"):
            with clock("hilbert"):
                _stage_hilbert(rep, ring)
        if cmd in ("koszul", "cohomology", "verify"):
            with clock("koszul_complexes"):
                corner = koszul_corner(f, cfg.weight_cap, cfg.cell_budget, cfg.threads)
        if cmd in ("koszul", "verify"):
            with clock("koszul"):
                _stage_koszul(rep, f, cfg, corner)
        if cmd in ("cohomology", "verify"):
            with clock("cohomology"):
                _stage_cohomology(rep, f, cfg, corner)
        if cmd in ("frobenius", "verify"):
            with clock("frobenius"):
                try:
                    _stage_frobenius(rep, f, cfg)
                except ValueError as exc:
                    raise UsageError(str(exc)) from exc
            with clock("phi"):
                _stage_phi(rep, f)
        if cmd == "compare":
            with clock("compare"):
                try:
                    _stage_compare(rep, f, cfg)
                except ValueError as exc:
                    raise UsageError(str(exc)) from exc
    finally:
        rep.timings_ms["total"] = round((time.perf_counter() - t0) * 1000, 3)
    return rep, (EXIT_CHECK_FAILED if rep.failed else EXIT_OK)


# batch


def _entry_config(entry: dict, threads: int, cell_budget: int) -> RunConfig:
    if not isinstance(entry, dict):
        raise UsageError("manifest entries must be objects")
    poly = entry.get("poly")
    if poly is None and "poly_file" in entry:
        poly = Path(entry["poly_file"]).read_text()
    if not isinstance(poly, str) or "n" not in entry:
        raise UsageError("manifest entry needs 'poly' (or 'poly_file') and 'n'")
    c = {}
    for q, v in (entry.get("c") or {}).items():
        c[int(q)] = parse_rational(str(v))
    return RunConfig(
        command=entry.get("command", "verify"),
        poly_text=poly,
        n=int(entry["n"]),
        max_weight=entry.get("max_weight"),
        c=c,
        trace_scale=parse_rational(str(entry.get("trace_scale", 1))),
        threads=threads,
        cell_budget=int(entry.get("cell_budget", cell_budget)),
    )


def _run_entry(args) -> tuple[dict, int]:
    entry, cell_budget = args
    try:
        cfg = _entry_config(entry, 1, cell_budget)
        rep, code = execute(cfg)
        return rep.to_dict(), code
    except (UsageError, ResourceLimitError, OSError, ValueError, TypeError) as exc:
        echo = {"poly": entry.get("poly") if isinstance(entry, dict) else None}
        return {"input": echo, "error": str(exc), "checks": [], "tables": {}}, EXIT_USAGE


def load_manifest(path: str) -> list:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read manifest {path!r}: {exc}") from exc
    if isinstance(data, dict):
        data = data.get("entries", [])
    if not isinstance(data, list):
        raise UsageError("manifest must be a list of entries or {\"entries\": [...]}")
    return data


def run_batch(path: str, threads: int = 1, cell_budget: int = DEFAULT_CELL_BUDGET) -> tuple[Report, int]:
    entries = load_manifest(path)
    t0 = time.perf_counter()
    results = pmap(_run_entry, [(e, cell_budget) for e in entries], threads)
    rep = Report(input={"manifest": os.path.basename(path), "entries": len(entries)})
    worst = EXIT_OK
    for i, (body, code) in enumerate(results):
        timings = body.pop("timings_ms", {})
        rep.timings_ms[f"entry{i}"] = timings.get("total")
        for name, table in body.pop("tables", {}).items():
            rep.tables[f"entry{i}.{name}"] = table
        body["exit_code"] = code
        rep.entries.append(body)
        failed = [c["name"] for c in body.get("checks", []) if c["verdict"] == "fail"]
        witness = {"poly": body["input"].get("poly"), "exit_code": code, "failed_checks": failed}
        if "error" in body:
            witness["error"] = body["error"]
        rep.add(Check.of(f"entry{i}", code == EXIT_OK, witness))
        if code != EXIT_OK:
            worst = EXIT_CHECK_FAILED
    rep.timings_ms["total"] = round((time.perf_counter() - t0) * 1000, 3)
    return rep, worst


# argv handling


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "pretty"), default="json")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--out", help="output file (a directory for --format csv)")
    common.add_argument("--cell-budget", type=int, default=DEFAULT_CELL_BUDGET)

    poly = argparse.ArgumentParser(add_help=False)
    src = poly.add_mutually_exclusive_group(required=True)
    src.add_argument("--poly", help="polynomial text, e.g. 'x1^3+x2^3+x3^3'")
    src.add_argument("--poly-file", help="file holding the polynomial text")
    poly.add_argument("--n", type=int, required=True, help="number of x variables")
    poly.add_argument("--max-weight", type=int, help="largest k_top for the anti-diagonal complexes (default n)")
    poly.add_argument("--c", action="append", default=[], metavar="Q=RATIONAL", help="model scalar c_q")
    poly.add_argument("--trace-scale", default="1", metavar="RATIONAL")

    parser = argparse.ArgumentParser(prog="lgcy", description="Jacobian, Koszul and Frobenius data of p*f.")
    parser.add_argument("--version", action="version", version=f"lgcy {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "hilbert": "Hilbert function, Milnor number and isolatedness certificate of R(f)",
        "koszul": "anti-diagonal Koszul cohomology and Euler contraction checks",
        "cohomology": "closed-form cohomology tables with consistency checks",
        "frobenius": "build the model Frobenius algebra and check its axioms",
        "compare": "compare two model configurations (--base-c/--base-trace-scale against --c/--trace-scale)",
        "verify": "full pipeline with every check",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, parents=[common, poly], help=text)
        if name == "compare":
            p.add_argument("--base-c", action="append", default=[], metavar="Q=RATIONAL")
            p.add_argument("--base-trace-scale", default="1", metavar="RATIONAL")
    b = sub.add_parser("batch", parents=[common], help="run a JSON manifest of entries")
    b.add_argument("manifest")
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    if ns.poly_file is not None:
        try:
            text = Path(ns.poly_file).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read {ns.poly_file!r}: {exc}") from exc
    else:
        text = ns.poly
    return RunConfig(
        command=ns.command,
        poly_text=text,
        n=ns.n,
        fmt=ns.format,
        max_weight=ns.max_weight,
        c=dict(parse_scalar(s) for s in ns.c),
        trace_scale=parse_rational(ns.trace_scale),
        base_c=dict(parse_scalar(s) for s in getattr(ns, "base_c", [])),
        base_trace_scale=parse_rational(getattr(ns, "base_trace_scale", "1")),
        threads=ns.threads,
        out=ns.out,
        cell_budget=ns.cell_budget,
    )


def write_report(rep: Report, fmt: str, out: str | None) -> None:
    if fmt == "csv" and out:
        d = Path(out)
        d.mkdir(parents=True, exist_ok=True)
        for name, data in emit_csv_tables(rep).items():
            (d / f"{name}.csv").write_bytes(data)
        return
    data = emit_report(rep, fmt)
    if out:
        Path(out).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with code 2
        return int(exc.code or 0)
    try:
        if ns.command == "batch":
            if ns.threads < 1 or ns.cell_budget < 1:
                raise UsageError("--threads and --cell-budget must be positive")
            rep, code = run_batch(ns.manifest, ns.threads, ns.cell_budget)
        else:
            cfg = config_from_args(ns)
            rep, code = execute(cfg)
    except UsageError as exc:
        print(f"lgcy: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimitError as exc:
        print(f"lgcy: resource limit: {exc}", file=sys.stderr)
        return EXIT_USAGE
    write_report(rep, ns.format, ns.out)
    if code == EXIT_NOT_ISOLATED:
        print(f"lgcy: {rep.certificates['isolated']['message']}", file=sys.stderr)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

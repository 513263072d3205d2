"""Acceptance gate: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` or directly as a script.
"""

from __future__ import annotations

import json
import os
import random
import subprocess
import sys
import time
from fractions import Fraction
from math import comb

import pytest
import sympy

from lgcy.cli import EXIT_NOT_ISOLATED, RunConfig, execute, main
from lgcy.frobenius import QUADRATIC_FLAG, ModelConfig, build_model, compare_models, e_degrees, frobenius_checks
from lgcy.koszul import antidiagonal_cohomology, check_chain_map, euler_contraction_kernel_dim
from lgcy.milnor import clear_caches, hilbert_function
from lgcy.poly import count_monomials, fermat, format_poly

from forms import chain_map_cells, random_monomial_form

GOLDEN = {
    3: dict(mu=8, prim=[1, 1], rw0=2, betti=4, limit_s=1.0),
    4: dict(mu=81, prim=[1, 19, 1], rw0=21, betti=24, limit_s=10.0),
    5: dict(mu=1024, prim=[1, 101, 101, 1], rw0=204, betti=208, limit_s=300.0),
}
HESSE_SMOOTH = "x1^3+x2^3+x3^3-6*x1*x2*x3"
HESSE_SINGULAR = "x1^3+x2^3+x3^3-3*x1*x2*x3"


def announce(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {title} ({detail})"
    if _capture is not None:
        with _capture.global_and_fixture_disabled():
            print("\n" + line, flush=True)
    else:
        print(line, flush=True)


_capture = None


@pytest.fixture(autouse=True)
def _direct_output(request):
    global _capture
    _capture = request.config.pluginmanager.getplugin("capturemanager")
    yield
    _capture = None


def fermat_text(n: int) -> str:
    return format_poly(fermat(n))


# 1


def criterion_1():
    details, ok = [], True
    for n, want in GOLDEN.items():
        clear_caches()
        t0 = time.perf_counter()
        rep, code = execute(RunConfig(command="verify", poly_text=fermat_text(n), n=n))
        elapsed = time.perf_counter() - t0
        milnor = rep.certificates["milnor"]
        betti = sum(e["dim"] for e in rep.tables["hypersurface_H"]["entries"])
        good = (
            code == 0
            and milnor["milnor_number"] == want["mu"] == (n - 1) ** n
            and milnor["primitive_dims"] == want["prim"]
            and milnor["rw0_dim"] == want["rw0"]
            and betti == want["betti"] == want["rw0"] + n - 1
            and elapsed < want["limit_s"]
        )
        ok &= good
        details.append(f"n={n} mu={milnor['milnor_number']} betti={betti} {elapsed:.2f}s/{want['limit_s']:g}s")
    return ok, "; ".join(details)


# 2


def criterion_2():
    ok, count = True, 0
    t0 = time.perf_counter()
    for n, k_max in ((3, 3), (4, 4), (5, 2)):
        f = fermat(n)
        for k in range(1, k_max + 1):
            coh = antidiagonal_cohomology(f, k)
            count += 1
            ok &= coh == (0,) * n + (hilbert_function(f, (k - 1) * n),)
    return ok, f"{count} complexes in {time.perf_counter() - t0:.2f}s"


# 3


def criterion_3(per_cell: int = 50):
    rng = random.Random(2024)
    ok, total, cells = True, 0, 0
    for n in (3, 4):
        f = fermat(n)
        for s, k in chain_map_cells(n):
            cells += 1
            for _ in range(per_cell):
                total += 1
                ok &= check_chain_map(f, random_monomial_form(rng, n, s, k))
    return ok, f"{total} forms over {cells} (s,k) cells"


# 4


def criterion_4():
    ok, count = True, 0
    for n in (3, 4):
        for r in range(n + 1):
            for w in range(n + 1):
                count += 1
                ok &= euler_contraction_kernel_dim(n, r, w) == comb(n, r) * count_monomials(n, w * n - r)
    return ok, f"{count} (n,r,w) cells"


# 5


def criterion_5():
    ok, details = True, []
    for n in (3, 4, 5):
        clear_caches()
        t0 = time.perf_counter()
        A = build_model(fermat(n))
        checks = frobenius_checks(A)
        good = all(c.ok for c in checks)
        elapsed = time.perf_counter() - t0
        if n == 5:
            good &= elapsed < 600
        ok &= good
        details.append(f"n={n} dim={A.dim} {elapsed:.2f}s")
    return ok, "; ".join(details)


# 6


def _random_config(rng: random.Random, n: int) -> ModelConfig:
    def nz():
        return Fraction(rng.choice([-1, 1]) * rng.randint(1, 12), rng.randint(1, 6))

    c = {q: nz() for q in e_degrees(n) if q > 0}
    return ModelConfig(c, trace_scale=nz())


def criterion_6(pairs: int = 20):
    rng = random.Random(6)
    ok, flagged, squares = True, 0, 0
    for n in (3, 4):
        f = fermat(n)
        for i in range(pairs):
            cfg_a, cfg_b = _random_config(rng, n), _random_config(rng, n)
            if n == 4:
                c0_b = Fraction(rng.randint(1, 7), rng.randint(1, 7)) * rng.choice([-1, 1])
                # half the pairs get a square ratio on purpose
                if i % 2:
                    c0_a = c0_b * Fraction(rng.randint(1, 5), rng.randint(1, 5)) ** 2
                else:
                    c0_a = Fraction(rng.randint(1, 9), rng.randint(1, 9)) * rng.choice([-1, 1])
                cfg_a = ModelConfig({**cfg_a.c, 0: c0_a}, cfg_a.trace_scale)
                cfg_b = ModelConfig({**cfg_b.c, 0: c0_b}, cfg_b.trace_scale)
            A, B = build_model(f, cfg_a), build_model(f, cfg_b)
            cmp = compare_models(A, B)
            good = cmp.ok and cmp.c_phi == cfg_b.trace_scale / cfg_a.trace_scale
            good &= cmp.pairs_checked == A.dim**2
            if n == 4:
                ratio = sympy.Rational(c0_a.numerator, c0_a.denominator) / sympy.Rational(
                    c0_b.numerator, c0_b.denominator
                )
                nonsquare = not sympy.sqrt(ratio).is_rational
                good &= (cmp.flag == QUADRATIC_FLAG) == nonsquare
                flagged += nonsquare
                squares += not nonsquare
            else:
                good &= cmp.flag is None
            ok &= good
    return ok, f"{2 * pairs} pairs; n=4 flagged {flagged}, rational {squares}"


# 7


def criterion_7():
    smooth, code_s = execute(RunConfig(command="verify", poly_text=HESSE_SMOOTH, n=3))
    ref, code_f = execute(RunConfig(command="verify", poly_text=fermat_text(3), n=3))
    same_tables = smooth.tables == ref.tables
    rc = main(["verify", "--poly", HESSE_SINGULAR, "--n", "3", "--out", os.devnull])
    ok = code_s == 0 and code_f == 0 and same_tables and rc == EXIT_NOT_ISOLATED
    return ok, f"smooth exit {code_s}, tables identical {same_tables}, singular exit {rc}"


# 8


def criterion_8():
    bodies = []
    for threads in ("1", "4"):
        out = subprocess.run(
            [sys.executable, "-m", "lgcy", "verify", "--poly", fermat_text(4), "--n", "4", "--threads", threads],
            capture_output=True,
            check=False,
        )
        raw = out.stdout
        bodies.append(raw.split(b'"timings_ms"')[0])
        json.loads(raw)
    ok = bodies[0] == bodies[1] and len(bodies[0]) > 0
    return ok, f"{len(bodies[0])} body bytes, threads 1 vs 4"


CRITERIA = [
    (1, "Fermat family golden run", criterion_1),
    (2, "Koszul concentration", criterion_2),
    (3, "chain-map identity", criterion_3),
    (4, "Euler-contraction dimensions", criterion_4),
    (5, "Frobenius axiom suite", criterion_5),
    (6, "model comparison", criterion_6),
    (7, "Hesse pencil genericity", criterion_7),
    (8, "determinism across thread counts", criterion_8),
]


@pytest.mark.parametrize("number, title, fn", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(number, title, fn):
    ok, detail = fn()
    announce(number, title, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    failures = 0
    for number, title, fn in CRITERIA:
        ok, detail = fn()
        announce(number, title, ok, detail)
        failures += not ok
    sys.exit(1 if failures else 0)

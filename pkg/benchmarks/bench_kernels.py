"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Workloads are the ones the package actually runs: fraction-free elimination of
Jacobian slices (echelon + back substitution), rank modulo a prime of the same
slices, and the associativity triple scan of the Frobenius models.
"""

from __future__ import annotations

import argparse
import time

from lgcy import kernels
from lgcy.frobenius import build_model, csr_table
from lgcy.linalg import integer_row
from lgcy.milnor import ring_for
from lgcy.poly import fermat, parse_poly

P = 2_147_483_647


def slice_rows(text: str, n: int, m: int):
    ring = ring_for(parse_poly(text, n))
    rows = [integer_row(v.items()) for v in ring.generator_vectors(m)]
    return rows, len(ring.slice(m))


def workloads():
    out = []
    for label, text, n, m in [
        ("hesse cubic deg 4", "x1^3+x2^3+x3^3-6*x1*x2*x3", 3, 4),
        ("perturbed quartic deg 6", "x1^4+x2^4+x3^4+x4^4-3*x1*x2*x3*x4+x1^2*x2*x3", 4, 6),
        ("perturbed quintic deg 10", "x1^5+x2^5+x3^5+x4^5+x5^5-5*x1*x2*x3*x4*x5", 5, 10),
    ]:
        rows, ncols = slice_rows(text, n, m)
        out.append((f"echelon+rref  {label}", lambda k, r=rows, c=ncols: k.back_substitute(k.echelon(r, c))))
        out.append((f"rank mod p    {label}", lambda k, r=rows, c=ncols: k.rank_mod_p(r, c, P)))
    for n in (4, 5):
        A = build_model(fermat(n))
        ptr, idx, val, tr = csr_table(A)
        out.append(
            (f"assoc scan    fermat n={n} dim {A.dim}", lambda k, a=(ptr, idx, val, A.dim, tr): k.assoc_scan(*a))
        )
    return out


def best_of(fn, impl, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(impl)
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    impls = kernels.implementations()
    if "cython" not in impls:
        print("compiled extension not built; only the Python kernels are available")
    names = sorted(impls, reverse=True)  # python first
    print(f"{'workload':44s}" + "".join(f"{n:>12s}" for n in names) + ("     speedup" if len(names) > 1 else ""))
    for label, fn in workloads():
        results = [fn(impls[n]) for n in names]
        if len(results) > 1 and results[0] != results[1]:
            raise SystemExit(f"kernels disagree on {label}")
        times = [best_of(fn, impls[n], args.repeat) for n in names]
        line = f"{label:44s}" + "".join(f"{t * 1000:10.1f}ms" for t in times)
        if len(times) > 1:
            line += f"{times[0] / times[1]:11.1f}x"
        print(line)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

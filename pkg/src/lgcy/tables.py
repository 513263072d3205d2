"""Closed-form cohomology tables and their cross-validation against R(f) and
the Koszul computations."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .koszul import antidiagonal_cohomology, euler_contraction
from .milnor import ResourceLimitError, default_cell_budget, primitive_dims, ring_for
from .parallel import pmap
from .poly import Poly
from .report import Check, Report, table_payload

SCALAR, MIDDLE, MIDDLE_PLUS, ZERO = "C", "R(W)_0", "R(W)_0+C", "0"


@dataclass(frozen=True)
class CohomologyTable:
    kind: str
    index_names: tuple[str, ...]
    entries: dict  # index tuple -> (dim, label)

    def dim(self, *index) -> int:
        return self.entries.get(tuple(index), (0, ZERO))[0]

    def label(self, *index) -> str:
        return self.entries.get(tuple(index), (0, ZERO))[1]

    def total(self) -> int:
        return sum(d for d, _ in self.entries.values())

    def dims(self) -> list[int]:
        return [self.entries[k][0] for k in sorted(self.entries)]

    def as_dict(self) -> dict:
        return {k if len(k) > 1 else k[0]: d for k, (d, _) in sorted(self.entries.items())}

    def nonzero(self) -> dict:
        return {k: d for k, d in self.as_dict().items() if d}

    def payload(self) -> dict:
        rows = [(k, d, lab) for k, (d, lab) in sorted(self.entries.items())]
        return table_payload(self.kind, list(self.index_names), rows)


def rw0_dim(f: Poly) -> int:
    """dim R(W)_0 = sum_k dim R(f)_{kn}."""
    return sum(primitive_dims(f))


def _middle(n: int, rw0: int) -> tuple[int, str]:
    if (n - 2) % 2:
        return rw0, MIDDLE
    return rw0 + 1, MIDDLE_PLUS


def hypersurface_betti(f: Poly) -> CohomologyTable:
    """H^r(V; C) for r = 0..2(n-2)."""
    n = f.n
    rw0 = rw0_dim(f)
    entries = {}
    for r in range(2 * (n - 2) + 1):
        if r == n - 2:
            entries[(r,)] = _middle(n, rw0)
        elif r % 2 == 0:
            entries[(r,)] = (1, SCALAR)
        else:
            entries[(r,)] = (0, ZERO)
    return CohomologyTable("hypersurface_H", ("r",), entries)


def pv_cohomology_table(f: Poly) -> CohomologyTable:
    """H^r(PV, dbar_W) for r = -(n-2)..(n-2)."""
    n = f.n
    rw0 = rw0_dim(f)
    scalar_degrees = {-n + 2 + 2 * k for k in range(n - 1)}
    entries = {}
    for r in range(-(n - 2), n - 1):
        if r == 0:
            entries[(r,)] = _middle(n, rw0)
        elif r in scalar_degrees:
            entries[(r,)] = (1, SCALAR)
        else:
            entries[(r,)] = (0, ZERO)
    return CohomologyTable("pv_H", ("r",), entries)


def bott_dim(n: int, s: int, d: int) -> int:
    """dim H^s(P^{n-1}, O(d))."""
    if n < 2:
        raise ValueError("n >= 2 required")
    if s == 0 and d >= 0:
        return comb(d + n - 1, n - 1)
    if s == n - 1 and d <= -n:
        return comb(-d - 1, n - 1)
    return 0


def bott_table(n: int, d_range: range) -> CohomologyTable:
    entries = {}
    for s in range(n):
        for d in d_range:
            dim = bott_dim(n, s, d)
            entries[(s, d)] = (dim, SCALAR if dim else ZERO)
    return CohomologyTable("bott", ("s", "d"), entries)


def e2_table(f: Poly) -> CohomologyTable:
    """Second page of the algebraic spectral sequence, indexed (r, s)."""
    n = f.n
    rw0 = rw0_dim(f)
    entries = {}
    for r in range(n + 1):
        for s in range(n):
            if 1 <= r == s <= n - 1:
                entries[(r, s)] = (1, SCALAR)
            elif (r, s) == (n, 0):
                entries[(r, s)] = (rw0, MIDDLE)
            else:
                entries[(r, s)] = (0, ZERO)
    return CohomologyTable("e2_page", ("r", "s"), entries)


def _koszul_cell(args):
    f, k, cap, budget = args
    try:
        return antidiagonal_cohomology(f, k, cap, budget)
    except ResourceLimitError as exc:
        return exc


def koszul_corner(
    f: Poly, weight_cap: int | None = None, cell_budget: int | None = None, threads: int = 1
) -> tuple[int, dict[int, tuple[int, ...]], list[int]]:
    """sum_k H^n of the anti-diagonal complexes, the per-k cohomology, and the
    k_top values skipped for exceeding the cell budget.

    A skipped complex contributes its H^n, which is the cokernel of the last
    differential, i.e. R(f)_{(k-1)n}; that is only used when the isolatedness
    certificate already forces it to vanish, otherwise the budget error stands.
    """
    ring = ring_for(f)
    ring.require_isolated()
    cap = f.n if weight_cap is None else weight_cap
    budget = default_cell_budget() if cell_budget is None else cell_budget
    results = pmap(_koszul_cell, [(f, k, cap, budget) for k in range(1, cap + 1)], threads)
    per_k, skipped = {}, []
    for k, res in enumerate(results, start=1):
        if isinstance(res, ResourceLimitError):
            if (k - 1) * f.n <= ring.socle_degree:
                raise res
            skipped.append(k)
        else:
            per_k[k] = res
    return sum(h[-1] for h in per_k.values()), per_k, skipped


def _palindrome(seq) -> bool:
    seq = list(seq)
    return seq == seq[::-1]


def consistency_checks(
    f: Poly,
    weight_cap: int | None = None,
    cell_budget: int | None = None,
    threads: int = 1,
    corner: tuple | None = None,
) -> list[Check]:
    """Checks (i)-(iv) plus Koszul concentration; ``corner`` reuses a
    :func:`koszul_corner` result already at hand."""
    n = f.n
    ring = ring_for(f)
    ring.require_isolated()
    prim = primitive_dims(f)
    rw0 = sum(prim)
    hyp = hypersurface_betti(f)
    pv = pv_cohomology_table(f)
    e2 = e2_table(f)
    corner, per_k, skipped = corner or koszul_corner(f, weight_cap, cell_budget, threads)
    hil = [ring.hilbert(m) for m in range(ring.socle_degree + 1)]
    checks = [
        Check.of(
            "e2_corner_matches_koszul",
            e2.dim(n, 0) == corner == rw0,
            {
                "e2_corner": e2.dim(n, 0),
                "koszul_sum": corner,
                "sum_primitive_dims": rw0,
                "k_top_certified_zero": skipped,
            },
        ),
        Check.of(
            "koszul_concentration",
            all(all(h == 0 for h in coh[:-1]) for coh in per_k.values())
            and all(coh[-1] == ring.hilbert((k - 1) * n) for k, coh in per_k.items()),
            {"cohomology": {str(k): list(v) for k, v in per_k.items()}, "over_budget": skipped},
        ),
        Check.of(
            "betti_total",
            hyp.total() == rw0 + n - 1,
            {"betti_total": hyp.total(), "rw0_plus_n_minus_1": rw0 + n - 1},
        ),
        Check.of(
            "poincare_palindromes",
            _palindrome(hil) and _palindrome(prim) and _palindrome(hyp.dims()),
            {"hilbert": hil, "primitive_dims": list(prim), "betti": hyp.dims()},
        ),
        Check.of(
            "pv_total_equals_betti_total",
            pv.total() == hyp.total(),
            {"pv_total": pv.total(), "betti_total": hyp.total()},
        ),
    ]
    return checks


def _contraction_cell(args):
    n, r, w = args
    data = euler_contraction(n, r, w)
    return [r, w, data.kernel_dim, data.expected]


def euler_contraction_checks(n: int, weight_cap: int, threads: int = 1) -> Check:
    """Kernel dimension of the Euler contraction on every (r, w) with r <= n, w <= cap."""
    grid = [(n, r, w) for r in range(n + 1) for w in range(weight_cap + 1)]
    cells = pmap(_contraction_cell, grid, threads)
    ok = all(kd == exp for _, _, kd, exp in cells)
    return Check.of("euler_contraction_kernel_dims", ok, cells)


def consistency_report(
    f: Poly, weight_cap: int | None = None, cell_budget: int | None = None, threads: int = 1
) -> Report:
    """Tables plus pass/fail verdicts on the identities tying them together."""
    rep = Report(input={"poly": str(f), "n": f.n})
    rep.tables = {
        "hypersurface_H": hypersurface_betti(f).payload(),
        "pv_H": pv_cohomology_table(f).payload(),
        "e2_page": e2_table(f).payload(),
    }
    rep.extend(consistency_checks(f, weight_cap, cell_budget, threads))
    return rep

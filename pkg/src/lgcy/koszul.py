"""Algebraic differential forms, the df-Koszul complex and the homogenization map.

Forms are stored as ``{index tuple: Poly}`` with strictly increasing index
tuples.  Indices ``0..n-1`` stand for dx_1..dx_n; on forms that may contain
dp (:class:`XForm`) the index ``n`` stands for dp and so always sorts last.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .linalg import QMatrix, RowSpace, integer_row
from .milnor import NotIsolatedError, ResourceLimitError, default_cell_budget, ring_for
from .poly import (
    Grading,
    Poly,
    PolyError,
    count_monomials,
    gradient,
    homogeneous_components,
    monomials_of_degree,
)


class _Form:
    __slots__ = ("n", "comps")
    with_dp = False

    def __init__(self, n: int, comps=()):
        self.n = n
        items = comps.items() if isinstance(comps, dict) else comps
        clean: dict[tuple[int, ...], Poly] = {}
        top = n + 1 if self.with_dp else n
        for key, coef in items:
            key = tuple(key)
            if not coef:
                continue
            if coef.n != n:
                raise PolyError("coefficient lives in a different variable count")
            if len(set(key)) != len(key):
                continue
            if any(not 0 <= k < top for k in key):
                raise PolyError(f"bad form index {key!r}")
            sign, skey = _sort_sign(key)
            coef = coef if sign > 0 else -coef
            acc = clean.get(skey)
            coef = coef if acc is None else acc + coef
            if coef:
                clean[skey] = coef
            else:
                clean.pop(skey, None)
        self.comps = clean

    def __eq__(self, other) -> bool:
        if not isinstance(other, _Form):
            return NotImplemented
        return self.n == other.n and self.comps == other.comps

    def __bool__(self) -> bool:
        return bool(self.comps)

    def __add__(self, other):
        out = dict(self.comps)
        for k, v in other.comps.items():
            out[k] = out[k] + v if k in out else v
        return type(self)(self.n, out)

    def __neg__(self):
        return type(self)(self.n, {k: -v for k, v in self.comps.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, g: Poly):
        return type(self)(self.n, {k: g * v for k, v in self.comps.items()})

    def degrees(self) -> set[int]:
        return {len(k) for k in self.comps}

    def _names(self, key) -> str:
        return "^".join("dp" if i == self.n else f"dx{i + 1}" for i in key) or "1"

    def __repr__(self) -> str:
        parts = [f"({c})*{self._names(k)}" for k, c in sorted(self.comps.items())]
        return f"{type(self).__name__}({' + '.join(parts) or '0'})"


class AlgForm(_Form):
    """p-free polynomial differential form in dx_1..dx_n."""

    __slots__ = ()
    with_dp = False

    def __init__(self, n: int, comps=()):
        super().__init__(n, comps)
        if any(not c.is_p_free() for c in self.comps.values()):
            raise PolyError("AlgForm coefficients must be p-free")


class XForm(_Form):
    """Form in dx_1..dx_n, dp with coefficients in Q[x, p]."""

    __slots__ = ()
    with_dp = True


def _sort_sign(key: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    inv = sum(1 for a, b in itertools.combinations(key, 2) if a > b)
    return (-1 if inv % 2 else 1), tuple(sorted(key))


def _merge_sign(a: tuple[int, ...], b: tuple[int, ...]) -> int:
    """Sign of dx_a ^ dx_b against its sorted order (a, b already sorted)."""
    inv = 0
    for x in a:
        for y in b:
            if x > y:
                inv += 1
    return -1 if inv % 2 else 1


def wedge(a: _Form, b: _Form) -> _Form:
    if a.n != b.n:
        raise PolyError("forms live in different variable counts")
    cls = XForm if (a.with_dp or b.with_dp) else AlgForm
    out: dict[tuple[int, ...], Poly] = {}
    for ka, ca in a.comps.items():
        for kb, cb in b.comps.items():
            if set(ka) & set(kb):
                continue
            key = tuple(sorted(ka + kb))
            term = ca * cb
            if _merge_sign(ka, kb) < 0:
                term = -term
            out[key] = out[key] + term if key in out else term
    return cls(a.n, out)


def differential_of(f: Poly) -> AlgForm:
    """df = sum_i df/dx_i dx_i."""
    return AlgForm(f.n, {(i,): d for i, d in enumerate(gradient(f))})


def dW_form(f: Poly) -> XForm:
    """dW = p df + f dp for W = p f."""
    p = Poly.var(f.n, "p")
    comps = {(i,): p * d for i, d in enumerate(gradient(f))}
    comps[(f.n,)] = f
    return XForm(f.n, comps)


def wedge_df(f: Poly, omega: AlgForm) -> AlgForm:
    """df ^ omega; a top-degree input yields 0."""
    if f.n != omega.n:
        raise PolyError("f and omega live in different variable counts")
    return wedge(differential_of(f), omega)


def _divide_by_p(q: Poly) -> Poly:
    out = {}
    for m, c in q.terms.items():
        if m[-1] == 0:
            raise PolyError(f"homogenized coefficient {q} is not divisible by p")
        out[m[:-1] + (m[-1] - 1,)] = c
    return Poly(q.n, out)


def homogenize_coefficient(g: Poly, s: int) -> Poly:
    """F = sum_k p^k g_{kn-s}; every homogeneous part of g needs degree = -s mod n."""
    n = g.n
    out = Poly.zero(n)
    for d, part in homogeneous_components(g, Grading.X_DEGREE).items():
        if (d + s) % n:
            raise PolyError(f"coefficient degree {d} is not congruent to -{s} mod {n}")
        k = (d + s) // n
        out = out + part.mul_monomial((0,) * n + (k,))
    return out


def homogenize_form(omega: AlgForm) -> XForm:
    """omega -> omega': the charge-0 lift intertwining df^ with dW^."""
    n = omega.n
    out: dict[tuple[int, ...], Poly] = {}
    inv_n = Fraction(1, n)
    for key, g in omega.comps.items():
        s = len(key)
        F = homogenize_coefficient(g, s)
        out[key] = out[key] + F if key in out else F
        if s == 0:
            continue
        F_over_p = _divide_by_p(F)
        for t, j in enumerate(key):
            rest = key[:t] + key[t + 1:] + (n,)
            term = (Poly.var(n, j + 1) * F_over_p) * inv_n
            if (s - 1 - t) % 2:
                term = -term
            out[rest] = out[rest] + term if rest in out else term
    return XForm(n, out)


def check_chain_map(f: Poly, omega: AlgForm) -> bool:
    """dW ^ omega' == (df ^ omega)'."""
    lhs = wedge(dW_form(f), homogenize_form(omega))
    rhs = homogenize_form(wedge_df(f, omega))
    return lhs == rhs


def charge_of_xform(omega: XForm) -> set[int]:
    """Charges of all components (dx_i: 1, dp: -n)."""
    n = omega.n
    out = set()
    for key, c in omega.comps.items():
        base = sum(1 if i < n else -n for i in key)
        for m in c.terms:
            out.add(base + sum(m[:-1]) - n * m[-1])
    return out


# anti-diagonal complexes


@dataclass(frozen=True)
class AntiDiagonalComplex:
    k_top: int
    slot_dims: tuple[int, ...]
    differential_matrices: tuple[QMatrix, ...]  # d_s : slot s -> slot s+1, rows = target
    ranks: tuple[int, ...]
    cohomology: tuple[int, ...]

    def euler_characteristic(self) -> int:
        return sum((-1) ** s * d for s, d in enumerate(self.slot_dims))

    def composes_to_zero(self) -> bool:
        mats = self.differential_matrices
        return all(mats[s + 1].matmul(mats[s]).is_zero() for s in range(len(mats) - 1))


def slot_degree(n: int, k_top: int, s: int) -> int | None:
    """Coefficient degree of slot s, or None for an empty slot."""
    weight = k_top - n + s
    deg = weight * n - s
    if weight < 0 or deg < 0:
        return None
    return deg


def slot_basis(n: int, k_top: int, s: int) -> list[tuple[tuple[int, ...], tuple]]:
    deg = slot_degree(n, k_top, s)
    if deg is None:
        return []
    monos = monomials_of_degree(n, deg)
    return [(key, m) for key in itertools.combinations(range(n), s) for m in monos]


def _slot_dim(n: int, k_top: int, s: int) -> int:
    deg = slot_degree(n, k_top, s)
    return 0 if deg is None else comb(n, s) * count_monomials(n, deg)


def antidiagonal_complex(
    f: Poly, k_top: int, weight_cap: int | None = None, cell_budget: int | None = None
) -> AntiDiagonalComplex:
    ring = ring_for(f)
    ring.require_isolated()
    n = f.n
    cap = n if weight_cap is None else weight_cap
    if not 1 <= k_top <= cap:
        raise ValueError(f"k_top = {k_top} outside 1..{cap} (raise the weight cap)")
    if cell_budget is None:
        cell_budget = default_cell_budget()
    dims = [_slot_dim(n, k_top, s) for s in range(n + 1)]
    cells = max(dims[s] * dims[s + 1] for s in range(n))
    if cells > cell_budget:
        raise ResourceLimitError(
            f"anti-diagonal complex k_top={k_top} needs {cells} cells, over the budget of "
            f"{cell_budget}; raise --cell-budget or lower --max-weight"
        )
    grad = ring.grad
    bases = [slot_basis(n, k_top, s) for s in range(n + 1)]
    mats = []
    ranks = []
    for s in range(n):
        src, tgt = bases[s], bases[s + 1]
        index = {b: i for i, b in enumerate(tgt)}
        cols = []
        for key, mono in src:
            vec: dict[int, Fraction] = {}
            for l in range(n):
                if l in key:
                    continue
                sign = -1 if sum(1 for j in key if j < l) % 2 else 1
                new_key = tuple(sorted(key + (l,)))
                for dm, c in grad[l].terms.items():
                    tgt_mono = tuple(a + b for a, b in zip(dm, mono))
                    i = index[(new_key, tgt_mono)]
                    vec[i] = vec.get(i, 0) + sign * c
            cols.append({i: v for i, v in vec.items() if v})
        rows: list[dict[int, Fraction]] = [{} for _ in tgt]
        for j, vec in enumerate(cols):
            for i, v in vec.items():
                rows[i][j] = v
        mats.append(QMatrix(len(tgt), len(src), rows))
        ranks.append(RowSpace([integer_row(v.items()) for v in cols], len(tgt), full=False).rank)
    dims = tuple(len(b) for b in bases)
    coh = []
    for s in range(n + 1):
        r_out = ranks[s] if s < n else 0
        r_in = ranks[s - 1] if s > 0 else 0
        coh.append(dims[s] - r_out - r_in)
    return AntiDiagonalComplex(k_top, dims, tuple(mats), tuple(ranks), tuple(coh))


def antidiagonal_cohomology(
    f: Poly, k_top: int, weight_cap: int | None = None, cell_budget: int | None = None
) -> tuple[int, ...]:
    return antidiagonal_complex(f, k_top, weight_cap, cell_budget).cohomology


# Euler contraction on the free module of forms in dx, dp over Q[x, p]


@dataclass(frozen=True)
class ContractionData:
    domain_dim: int
    rank: int
    kernel_dim: int
    expected: int


def _xp_monomials(n: int, x_deg: int, p_exp: int):
    if x_deg < 0 or p_exp < 0:
        return ()
    return tuple(m[:-1] + (p_exp,) for m in monomials_of_degree(n, x_deg))


def _charge0_weight_basis(n: int, r: int, w: int):
    out = []
    for key in itertools.combinations(range(n + 1), r):
        has_dp = n in key
        p_exp = w - (1 if has_dp else 0)
        nx = r - (1 if has_dp else 0)
        x_deg = n * p_exp - nx + (n if has_dp else 0)
        for m in _xp_monomials(n, x_deg, p_exp):
            out.append((key, m))
    return out


def euler_contraction(n: int, r: int, w: int) -> ContractionData:
    """Kernel of contraction with dx_k -> x_k, dp -> -n p on the charge-0 weight-w slice."""
    if not 0 <= r <= n + 1 or w < 0:
        raise ValueError("need 0 <= r <= n + 1 and w >= 0")
    src = _charge0_weight_basis(n, r, w)
    index: dict = {}
    rows = []
    for key, mono in src:
        vec: dict[int, int] = {}
        for t, j in enumerate(key):
            rest = key[:t] + key[t + 1:]
            if j < n:
                bump = tuple(e + (1 if i == j else 0) for i, e in enumerate(mono))
                coef = 1
            else:
                bump = mono[:-1] + (mono[-1] + 1,)
                coef = -n
            if t % 2:
                coef = -coef
            i = index.setdefault((rest, bump), len(index))
            vec[i] = vec.get(i, 0) + coef
        rows.append(integer_row(vec.items()))
    rk = RowSpace(rows, len(index), full=False).rank
    expected = comb(n, r) * count_monomials(n, w * n - r) if r <= n else 0
    return ContractionData(len(src), rk, len(src) - rk, expected)


def euler_contraction_kernel_dim(n: int, r: int, w: int) -> int:
    return euler_contraction(n, r, w).kernel_dim


__all__ = [
    "AlgForm",
    "AntiDiagonalComplex",
    "ContractionData",
    "NotIsolatedError",
    "XForm",
    "antidiagonal_cohomology",
    "antidiagonal_complex",
    "check_chain_map",
    "differential_of",
    "dW_form",
    "euler_contraction",
    "euler_contraction_kernel_dim",
    "homogenize_form",
    "wedge",
    "wedge_df",
]

"""Model Frobenius algebras on the primitive classes plus the hyperplane generators.

The basis is

* ``Primitive(k, g)``: the class [p^k g] with g a standard monomial of
  R(f)_{kn}, k = 0..n-2 (these span R(W)_0);
* ``NonPrimitive(q)``: an abstract generator e_q of degree q, for
  q in {2i - n : i = 1..n-1}.

Only the scalars c_q and the trace normalisation t are free; two models on the
same f differ in nothing else, which is what :func:`compare_models` exploits.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt, lcm
from typing import Mapping, Sequence

from . import kernels
from .linalg import QMatrix, RowSpace, integer_row, rank
from .milnor import PolyError, ring_for
from .parallel import pmap
from .poly import Poly, format_poly, hessian_det, monomials_of_degree, partial_derivative
from .report import Check, Report

QUADRATIC_FLAG = "requires quadratic extension"
FULL_TABLE_MAX_NNZ = 50_000  # larger tables are summarised by their digest only


@dataclass(frozen=True, order=True)
class Primitive:
    k: int
    mono: tuple  # x-monomial of degree k*n, p exponent 0

    degree = 0

    def label(self, n: int) -> str:
        g = Poly.monomial(self.mono[:-1] + (self.k,))
        return format_poly(g)


@dataclass(frozen=True, order=True)
class NonPrimitive:
    q: int

    @property
    def degree(self) -> int:
        return self.q

    def label(self, n: int) -> str:
        return f"e_{{{self.q:+d}}}" if self.q else "e_{0}"


FrobBasisElem = Primitive | NonPrimitive


def e_degrees(n: int) -> tuple[int, ...]:
    return tuple(2 * i - n for i in range(1, n))


@dataclass(frozen=True)
class ModelConfig:
    """c_q for q > 0 (and c_0 when n is even) plus the trace scale t.

    Missing c_q default to 1.  c_{-q} is never stored: e_q e_{-q} is fixed by
    graded commutativity from e_{-q} e_q = c_q * socle.
    """

    c: Mapping[int, Fraction] = field(default_factory=dict)
    trace_scale: Fraction = Fraction(1)
    parity: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "c", {int(q): Fraction(v) for q, v in dict(self.c).items()})
        object.__setattr__(self, "trace_scale", Fraction(self.trace_scale))

    def scalar(self, q: int) -> Fraction:
        return self.c.get(q, Fraction(1))

    def validate(self, n: int) -> None:
        allowed = {q for q in e_degrees(n) if q > 0} | ({0} if n % 2 == 0 else set())
        for q, v in self.c.items():
            if q not in allowed:
                raise ValueError(f"c_{q} is not a free scalar for n = {n} (allowed: {sorted(allowed)})")
            if v == 0:
                raise ValueError(f"c_{q} must be nonzero")
        if self.trace_scale == 0:
            raise ValueError("trace scale must be nonzero")
        if self.parity is not None and self.parity != n % 2:
            raise ValueError(f"config parity {self.parity} does not match n = {n}")

    def as_dict(self) -> dict:
        return {"c": {str(q): str(v) for q, v in sorted(self.c.items())}, "trace_scale": str(self.trace_scale)}


@dataclass(frozen=True)
class FrobAlgebra:
    f: Poly
    config: ModelConfig
    basis: tuple
    mult: dict  # (i, j) -> {l: Fraction}, zero products omitted
    trace_vec: tuple[Fraction, ...]
    degree: tuple[int, ...]
    unit_index: int
    socle_index: int

    @property
    def n(self) -> int:
        return self.f.n

    @property
    def dim(self) -> int:
        return len(self.basis)

    def index(self, elem) -> int:
        return self.basis.index(elem)

    def e_index(self, q: int) -> int:
        return self.basis.index(NonPrimitive(q))

    def labels(self) -> list[str]:
        return [b.label(self.n) for b in self.basis]

    def sign(self, i: int, j: int) -> int:
        return -1 if (self.degree[i] * self.degree[j]) % 2 else 1

    def product(self, i: int, j: int) -> dict[int, Fraction]:
        return self.mult.get((i, j), {})

    def basis_vector(self, i: int) -> list[Fraction]:
        v = [Fraction(0)] * self.dim
        v[i] = Fraction(1)
        return v

    def structure_constants(self) -> list[tuple[int, int, int, Fraction]]:
        return [(i, j, l, c) for (i, j), prod in sorted(self.mult.items()) for l, c in sorted(prod.items())]

    def digest(self) -> str:
        """sha256 of the canonical structure-constant and trace listing."""
        payload = json.dumps(
            [[[i, j, l, str(c)] for i, j, l, c in self.structure_constants()], [str(t) for t in self.trace_vec]],
            separators=(",", ":"),
        )
        return hashlib.sha256(payload.encode()).hexdigest()

    def summary(self, full_table: bool | None = None) -> dict:
        nnz = sum(len(p) for p in self.mult.values())
        if full_table is None:
            full_table = nnz <= FULL_TABLE_MAX_NNZ
        out = {
            "dim": self.dim,
            "config": self.config.as_dict(),
            "e_degrees": list(e_degrees(self.n)),
            "socle": self.basis[self.socle_index].label(self.n),
            "nnz": nnz,
            "digest": self.digest(),
        }
        if full_table:
            out["basis"] = self.labels()
            out["degrees"] = list(self.degree)
            out["structure_constants"] = [[i, j, l, str(c)] for i, j, l, c in self.structure_constants()]
            out["trace"] = [str(t) for t in self.trace_vec]
        return out


def _socle_monomial(ring) -> tuple:
    std = ring.standard_monomials(ring.socle_degree)
    coords = ring.normal_form(hessian_det(ring.f))
    if len(std) != 1 or not coords or coords[0] == 0:
        raise PolyError("the Hessian does not span the socle")
    return std[0]


def build_model(f: Poly, cfg: ModelConfig | None = None) -> FrobAlgebra:
    cfg = cfg or ModelConfig()
    ring = ring_for(f)
    ring.require_isolated()
    n = f.n
    cfg.validate(n)
    socle = _socle_monomial(ring)

    basis: list = []
    for k in range(n - 1):
        basis.extend(Primitive(k, m) for m in ring.standard_monomials(k * n))
    basis.extend(NonPrimitive(q) for q in e_degrees(n))
    basis = tuple(basis)
    where = {b: i for i, b in enumerate(basis)}
    unit = where[Primitive(0, (0,) * (n + 1))]
    top = where[Primitive(n - 2, socle)]

    prims = [(i, b) for i, b in enumerate(basis) if isinstance(b, Primitive)]
    mult: dict[tuple[int, int], dict[int, Fraction]] = {}
    cache: dict[tuple, dict[int, Fraction]] = {}
    for i, a in prims:
        for j, b in prims:
            k = a.k + b.k
            if k > n - 2:
                continue  # R(f)_{kn} = 0 for k >= n-1
            mono = tuple(x + y for x, y in zip(a.mono, b.mono))
            prod = cache.get(mono)
            if prod is None:
                coords = ring.normal_form(Poly.monomial(mono))
                std = ring.standard_monomials(k * n)
                prod = {where[Primitive(k, s)]: c for s, c in zip(std, coords) if c}
                cache[mono] = prod
            if prod:
                mult[(i, j)] = prod

    for q in e_degrees(n):
        e = where[NonPrimitive(q)]
        mult[(unit, e)] = {e: Fraction(1)}
        mult[(e, unit)] = {e: Fraction(1)}
    for q in e_degrees(n):
        if q < 0:
            continue
        c = cfg.scalar(q)
        if q == 0:
            e0 = where[NonPrimitive(0)]
            mult[(e0, e0)] = {top: c}
            continue
        lo, hi = where[NonPrimitive(-q)], where[NonPrimitive(q)]
        mult[(lo, hi)] = {top: c}
        mult[(hi, lo)] = {top: -c if (q * q) % 2 else c}

    trace_vec = [Fraction(0)] * len(basis)
    trace_vec[top] = cfg.trace_scale
    degree = tuple(b.degree for b in basis)
    return FrobAlgebra(f, cfg, basis, mult, tuple(trace_vec), degree, unit, top)


def _check_vec(A: FrobAlgebra, v: Sequence) -> None:
    if len(v) != A.dim:
        raise ValueError(f"vector of length {len(v)} over an algebra of dimension {A.dim}")


def multiply(A: FrobAlgebra, a: Sequence, b: Sequence) -> list[Fraction]:
    _check_vec(A, a)
    _check_vec(A, b)
    out = [Fraction(0)] * A.dim
    sa = [(i, Fraction(x)) for i, x in enumerate(a) if x]
    sb = [(j, Fraction(y)) for j, y in enumerate(b) if y]
    for i, x in sa:
        for j, y in sb:
            for l, c in A.product(i, j).items():
                out[l] += x * y * c
    return out


def trace(A: FrobAlgebra, a: Sequence) -> Fraction:
    _check_vec(A, a)
    return sum((Fraction(x) * t for x, t in zip(a, A.trace_vec) if x and t), Fraction(0))


def _pairing(A: FrobAlgebra, i: int, j: int) -> Fraction:
    return sum((c * A.trace_vec[l] for l, c in A.product(i, j).items()), Fraction(0))


def gram_matrix(A: FrobAlgebra) -> QMatrix:
    rows = [{} for _ in range(A.dim)]
    for (i, j) in A.mult:
        v = _pairing(A, i, j)
        if v:
            rows[i][j] = v
    return QMatrix(A.dim, A.dim, rows)


# axiom verification


def csr_table(A: FrobAlgebra) -> tuple[list[int], list[int], list[int], list[int]]:
    """Integer CSR form of the structure constants plus an integer trace vector."""
    den = lcm(1, *(c.denominator for p in A.mult.values() for c in p.values()))
    ptr, idx, val = [0], [], []
    for i in range(A.dim):
        for j in range(A.dim):
            for l, c in sorted(A.product(i, j).items()):
                idx.append(l)
                val.append(int(c * den))
            ptr.append(len(idx))
    tden = lcm(1, *(t.denominator for t in A.trace_vec))
    return ptr, idx, val, [int(t * tden) for t in A.trace_vec]


def _scan_chunk(args):
    ptr, idx, val, dim, tr, lo, hi = args
    return kernels.assoc_scan(ptr, idx, val, dim, tr, lo, hi)


def associativity_scan(A: FrobAlgebra, threads: int = 1) -> tuple[int, tuple | None]:
    """Violations of (ab)c = a(bc) and of trace((ab)c) = trace(a(bc)) over all triples."""
    ptr, idx, val, tr = csr_table(A)
    dim = A.dim
    parts = max(1, min(threads, dim))
    bounds = [dim * t // parts for t in range(parts + 1)]
    chunks = [(ptr, idx, val, dim, tr, bounds[t], bounds[t + 1]) for t in range(parts)]
    results = pmap(_scan_chunk, chunks, threads)
    bad = sum(r[0] for r in results)
    first = next((r[1] for r in results if r[1] is not None), None)
    return bad, first


def _invariance(A: FrobAlgebra) -> tuple[int, tuple | None]:
    """K(ab, c) = K(a, bc) on all triples, via sparse contraction with the Gram matrix."""
    K = {}
    for (i, j) in A.mult:
        v = _pairing(A, i, j)
        if v:
            K.setdefault(i, {})[j] = v
    Kcol: dict[int, dict[int, Fraction]] = {}
    for i, row in K.items():
        for j, v in row.items():
            Kcol.setdefault(j, {})[i] = v
    left: dict[tuple, Fraction] = {}
    right: dict[tuple, Fraction] = {}
    for (i, j), prod in A.mult.items():
        # K(b_i b_j, b_k) = sum_l m_ij^l K[l][k]
        for l, c in prod.items():
            for k, v in K.get(l, {}).items():
                left[(i, j, k)] = left.get((i, j, k), 0) + c * v
        # K(b_a, b_i b_j) = sum_l m_ij^l K[a][l], recorded at triple (a, i, j)
        for l, c in prod.items():
            for a, v in Kcol.get(l, {}).items():
                right[(a, i, j)] = right.get((a, i, j), 0) + c * v
    bad = sorted(t for t in set(left) | set(right) if left.get(t, 0) != right.get(t, 0))
    return len(bad), (bad[0] if bad else None)


def _graded_commutativity(A: FrobAlgebra):
    bad = []
    for i in range(A.dim):
        for j in range(i, A.dim):
            s = A.sign(i, j)
            pij, pji = A.product(i, j), A.product(j, i)
            if pij != {l: s * c for l, c in pji.items()}:
                bad.append((i, j))
    return bad


def _unit_law(A: FrobAlgebra):
    u = A.unit_index
    return [i for i in range(A.dim) if A.product(u, i) != {i: 1} or A.product(i, u) != {i: 1}]


def _nilpotency(A: FrobAlgebra):
    """Products of positive p-degree primitives land in p-degree j+k and vanish past n-2.

    Together these give the ceiling: any (n-1)-fold product of such elements is 0.
    """
    n = A.n
    bad = []
    for (i, j), prod in A.mult.items():
        a, b = A.basis[i], A.basis[j]
        if not (isinstance(a, Primitive) and isinstance(b, Primitive)):
            continue
        if a.k + b.k > n - 2:
            bad.append((i, j))
            continue
        for l in prod:
            t = A.basis[l]
            if not isinstance(t, Primitive) or t.k != a.k + b.k:
                bad.append((i, j))
                break
    return bad


def _e_pairing(A: FrobAlgebra):
    """On span{e_q}: K(e_q, e_r) = (-1)^n K(e_r, e_q), nonzero exactly when q + r = 0."""
    n = A.n
    sign = -1 if n % 2 else 1
    bad = []
    es = [A.e_index(q) for q in e_degrees(n)]
    for a in es:
        for b in es:
            qa, qb = A.degree[a], A.degree[b]
            kab, kba = _pairing(A, a, b), _pairing(A, b, a)
            if kab != sign * kba or (kab != 0) != (qa + qb == 0):
                bad.append((a, b))
    return bad


def _socle_column(A: FrobAlgebra):
    """K(1, socle) = t and K(b, socle) = 0 for every other basis element."""
    bad = []
    s = A.socle_index
    for i in range(A.dim):
        want = A.config.trace_scale if i == A.unit_index else 0
        if _pairing(A, i, s) != want:
            bad.append(i)
    return bad


def frobenius_checks(A: FrobAlgebra, threads: int = 1) -> list[Check]:
    assoc_bad, assoc_first = associativity_scan(A, threads)
    inv_bad, inv_first = _invariance(A)
    comm = _graded_commutativity(A)
    unit = _unit_law(A)
    gram_rank = rank(gram_matrix(A))
    nil = _nilpotency(A)
    epair = _e_pairing(A)
    soc = _socle_column(A)
    triples = A.dim**3
    return [
        Check.of(
            "frobenius_associativity",
            assoc_bad == 0,
            {"triples": triples, "violations": assoc_bad, "first": assoc_first, "kernel": kernels.IMPLEMENTATION},
        ),
        Check.of("frobenius_invariance", inv_bad == 0, {"triples": triples, "violations": inv_bad, "first": inv_first}),
        Check.of("frobenius_graded_commutativity", not comm, {"violations": len(comm), "first": comm[:1]}),
        Check.of("frobenius_unit", not unit, {"violations": unit[:5]}),
        Check.of("frobenius_nondegenerate", gram_rank == A.dim, {"rank": gram_rank, "dim": A.dim}),
        Check.of("frobenius_e_pairing_parity", not epair, {"parity": A.n % 2, "violations": epair}),
        Check.of("frobenius_nilpotency_ceiling", not nil, {"violations": len(nil), "first": nil[:1]}),
        Check.of("frobenius_socle_pairing", not soc, {"violations": soc[:5]}),
    ]


def check_frobenius(A: FrobAlgebra, threads: int = 1) -> Report:
    rep = Report(input={"poly": str(A.f), "n": A.n})
    rep.frobenius = A.summary()
    rep.extend(frobenius_checks(A, threads))
    return rep


# phi : R(W)_0 -> (+)_k R(f)_{kn}


@dataclass(frozen=True)
class PhiIso:
    w_dims: tuple[int, ...]  # dim of the p^k slice of R(W)_0, k = 0..n-1
    f_dims: tuple[int, ...]  # dim R(f)_{kn}
    w_basis: tuple[tuple, ...]  # per k: standard monomials x^a of the p^k x^a classes
    matrices: tuple[QMatrix, ...]  # per k: phi in coordinates (rows: R(f), cols: R(W))
    bijective: bool
    multiplicative: bool
    pairs_checked: int
    first_failure: tuple | None

    @property
    def ok(self) -> bool:
        return self.bijective and self.multiplicative

    def apply(self, k: int, mono: tuple) -> list[Fraction]:
        """phi of the basis class [p^k x^mono], in R(f)_{kn} coordinates."""
        j = self.w_basis[k].index(mono)
        return [self.matrices[k].entry(r, j) for r in range(self.matrices[k].rows)]

    def as_dict(self) -> dict:
        return {
            "w_dims": list(self.w_dims),
            "f_dims": list(self.f_dims),
            "bijective": self.bijective,
            "multiplicative": self.multiplicative,
            "pairs_checked": self.pairs_checked,
            "first_failure": self.first_failure,
        }


class _WSlice:
    """Charge-0, p-degree-k piece of Q[x, p] / J(W) for W = p f."""

    def __init__(self, f: Poly, k: int):
        n = f.n
        self.n, self.k = n, k
        W = Poly.var(n, "p") * f
        gens = [partial_derivative(W, i) for i in range(1, n + 1)] + [partial_derivative(W, "p")]
        self.monos = monomials_of_degree(n, k * n)
        target = {m[:-1] + (k,): i for i, m in enumerate(self.monos)}
        rows = []
        for g in gens:
            (gm, _), *_ = g.terms.items()
            g_charge = sum(gm[:-1]) - n * gm[-1]
            g_p = gm[-1]
            c = k - g_p  # p-exponent of the multiplier
            if c < 0:
                continue
            xdeg = n * c - g_charge  # multiplier has charge -g_charge
            if xdeg < 0:
                continue
            for u in monomials_of_degree(n, xdeg):
                prod = g.mul_monomial(u[:-1] + (c,))
                rows.append(integer_row((target[m], v) for m, v in prod.terms.items()))
        self.space = RowSpace(rows, len(self.monos))
        self.std = tuple(self.monos[c] for c in self.space.free_cols())

    def normal_form(self, mono: tuple) -> list[Fraction]:
        red = self.space.reduce({self.monos.index(mono): 1})
        return [red.get(c, Fraction(0)) for c in self.space.free_cols()]


def phi_ring_iso(f: Poly) -> PhiIso:
    """Build R(W)_0 from J(W) directly and check [p^k g] -> [g] is a ring isomorphism."""
    ring = ring_for(f)
    ring.require_isolated()
    n = f.n
    slices = [_WSlice(f, k) for k in range(n)]
    w_dims = tuple(len(s.std) for s in slices)
    f_dims = tuple(ring.hilbert(k * n) for k in range(n))
    mats = []
    bijective = w_dims == f_dims
    for k, s in enumerate(slices):
        rows = [{} for _ in range(f_dims[k])]
        for j, mono in enumerate(s.std):
            for r, v in enumerate(ring.normal_form(Poly.monomial(mono))):
                if v:
                    rows[r][j] = v
        m = QMatrix(f_dims[k], w_dims[k], rows)
        mats.append(m)
        bijective &= rank(m) == w_dims[k]

    checked = 0
    first = None
    multiplicative = True
    memo: dict = {}
    for j in range(n - 1):
        for a in slices[j].std:
            for k in range(n - 1):
                for b in slices[k].std:
                    checked += 1
                    mono = tuple(x + y for x, y in zip(a, b))
                    key = (j + k, mono)
                    ok = memo.get(key)
                    if ok is None:
                        ok = _phi_product_ok(ring, slices, mats, j + k, mono)
                        memo[key] = ok
                    if not ok and first is None:
                        multiplicative = False
                        first = (j, a, k, b)
    return PhiIso(w_dims, f_dims, tuple(s.std for s in slices), tuple(mats), bijective, multiplicative, checked, first)


def _phi_product_ok(ring, slices, mats, k: int, mono: tuple) -> bool:
    """phi([p^k x^mono]) == [x^mono], with the W side reduced first."""
    n = ring.n
    f_side = ring.normal_form(Poly.monomial(mono)) if ring.hilbert(k * n) else []
    if k >= len(slices):
        # p^k x^mono lies in p^{k-n+1} x^a * (p^{n-1} slice), and that slice is checked to vanish
        return not any(f_side) and not slices[-1].std
    w = slices[k].normal_form(mono)
    image = mats[k].matvec(w) if w else [Fraction(0)] * mats[k].rows
    return image == (f_side or [Fraction(0)] * mats[k].rows)


# comparison


@dataclass(frozen=True)
class _Scaled:
    """r * s^e with s^2 = s2 rational; models Q(sqrt(s2)) elements of that shape."""

    r: Fraction
    e: int
    s2: Fraction

    def __mul__(self, other: _Scaled) -> _Scaled:
        e = self.e + other.e
        r = self.r * other.r
        if e == 2:
            r, e = r * self.s2, 0
        return _Scaled(r, e, self.s2)

    def times(self, q: Fraction) -> _Scaled:
        return _Scaled(self.r * q, self.e, self.s2)

    def same(self, other: _Scaled) -> bool:
        if self.r == 0 or other.r == 0:
            return self.r == other.r
        return self.e == other.e and self.r == other.r


def squarefree_part(m: int) -> int:
    """Squarefree kernel of |m| (trial division; a cofactor above 10^12 with no
    small factor is taken as squarefree unless it is a perfect square)."""
    m = abs(m)
    out = 1
    d = 2
    while d * d <= m and d <= 10**6:
        e = 0
        while m % d == 0:
            m //= d
            e += 1
        if e % 2:
            out *= d
        d += 1 if d == 2 else 2
    if m > 1:
        r = isqrt(m)
        if r * r != m:
            out *= m
    return out


def rational_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    a, b = isqrt(x.numerator), isqrt(x.denominator)
    if a * a == x.numerator and b * b == x.denominator:
        return Fraction(a, b)
    return None


@dataclass(frozen=True)
class Comparison:
    lambdas: dict  # q -> Fraction, or None for lambda_0 outside Q
    lambda0_squared: Fraction | None
    c_phi: Fraction
    requires_quadratic_extension: bool
    discriminant: int | None
    pairing_verified: bool
    ring_iso_verified: bool
    pairs_checked: int
    flag: str | None

    @property
    def ok(self) -> bool:
        return self.pairing_verified and self.ring_iso_verified

    def as_dict(self) -> dict:
        return {
            "lambdas": {str(q): (None if v is None else str(v)) for q, v in sorted(self.lambdas.items())},
            "lambda0_squared": None if self.lambda0_squared is None else str(self.lambda0_squared),
            "c_phi": str(self.c_phi),
            "flag": self.flag,
            "discriminant": self.discriminant,
            "pairing_verified": self.pairing_verified,
            "ring_iso_verified": self.ring_iso_verified,
            "pairs_checked": self.pairs_checked,
        }


def compare_models(A: FrobAlgebra, B: FrobAlgebra) -> Comparison:
    """Phi = id on primitives, e_q -> lambda_q e_q, with c_Phi K_A = K_B o (Phi x Phi)."""
    if A.f != B.f or A.basis != B.basis:
        raise ValueError("models are built over different polynomials")
    n = A.n
    lambdas: dict[int, Fraction | None] = {}
    for q in e_degrees(n):
        if q > 0:
            lambdas[q] = A.config.scalar(q) / B.config.scalar(q)
        elif q < 0:
            lambdas[q] = Fraction(1)
    lam0_sq = None
    disc = None
    quadratic = False
    if n % 2 == 0:
        lam0_sq = A.config.scalar(0) / B.config.scalar(0)
        root = rational_sqrt(lam0_sq)
        lambdas[0] = root
        if root is None:
            quadratic = True
            disc = squarefree_part(abs(lam0_sq.numerator) * lam0_sq.denominator)
            if lam0_sq < 0:
                disc = -disc
    c_phi = B.config.trace_scale / A.config.trace_scale

    s2 = lam0_sq if lam0_sq is not None else Fraction(1)
    scale = []
    for b in A.basis:
        if isinstance(b, NonPrimitive) and b.q == 0 and quadratic:
            scale.append(_Scaled(Fraction(1), 1, s2))
        elif isinstance(b, NonPrimitive):
            scale.append(_Scaled(lambdas[b.q], 0, s2))
        else:
            scale.append(_Scaled(Fraction(1), 0, s2))

    pairing_ok = True
    checked = 0
    for i in range(A.dim):
        for j in range(A.dim):
            checked += 1
            lhs = _Scaled(c_phi * _pairing(A, i, j), 0, s2)
            rhs = (scale[i] * scale[j]).times(_pairing(B, i, j))
            if not lhs.same(rhs):
                pairing_ok = False

    ring_ok = True
    for i in range(A.dim):
        for j in range(A.dim):
            pa, pb = A.product(i, j), B.product(i, j)
            for l in set(pa) | set(pb):
                lhs = scale[l].times(pa.get(l, Fraction(0)))
                rhs = (scale[i] * scale[j]).times(pb.get(l, Fraction(0)))
                if not (lhs.same(rhs) or (lhs.r == 0 and rhs.r == 0)):
                    ring_ok = False
    return Comparison(
        lambdas, lam0_sq, c_phi, quadratic, disc, pairing_ok, ring_ok, checked, QUADRATIC_FLAG if quadratic else None
    )


__all__ = [
    "Comparison",
    "FrobAlgebra",
    "ModelConfig",
    "NonPrimitive",
    "PhiIso",
    "Primitive",
    "associativity_scan",
    "QUADRATIC_FLAG",
    "build_model",
    "check_frobenius",
    "compare_models",
    "e_degrees",
    "frobenius_checks",
    "gram_matrix",
    "multiply",
    "phi_ring_iso",
    "trace",
]

"""The graded Jacobian ring R(f) = Q[x]/J(f) of a degree-n form in n variables."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .linalg import QMatrix, RowSpace, integer_row
from .poly import (
    Monomial,
    Poly,
    PolyError,
    count_monomials,
    gradient,
    hessian_det,
    monomials_of_degree,
    require_cy_form,
)

DEFAULT_CELL_BUDGET = 10**8


class NotIsolatedError(PolyError):
    """f does not have an isolated singularity at the origin."""

    def __init__(self, certificate: IsolatedCertificate):
        super().__init__(certificate.message)
        self.certificate = certificate


class ResourceLimitError(RuntimeError):
    """A slice matrix would exceed the configured cell budget."""


@dataclass(frozen=True)
class GradedSlice:
    degree: int
    basis: tuple[Monomial, ...]
    index: dict = field(repr=False, compare=False, hash=False)

    @classmethod
    def of(cls, n: int, degree: int) -> GradedSlice:
        basis = monomials_of_degree(n, degree)
        return cls(degree, basis, {m: i for i, m in enumerate(basis)})

    def __len__(self) -> int:
        return len(self.basis)


@dataclass(frozen=True)
class IsolatedCertificate:
    isolated: bool
    socle_degree: int
    socle_dim: int | None
    above_dim: int
    failing_degree: int | None
    message: str

    def as_dict(self) -> dict:
        return {
            "isolated": self.isolated,
            "socle_degree": self.socle_degree,
            "socle_dim": self.socle_dim,
            "above_dim": self.above_dim,
            "failing_degree": self.failing_degree,
            "message": self.message,
        }


def _check_input(f: Poly) -> None:
    require_cy_form(f)
    if f.n < 3:
        raise PolyError(
            "n >= 3 required: the tables describe positive-dimensional hypersurfaces (got n = %d)" % f.n
        )


class JacobianRing:
    """Lazily computed graded pieces of R(f), cached per degree."""

    def __init__(self, f: Poly, cell_budget: int = DEFAULT_CELL_BUDGET):
        _check_input(f)
        self.f = f
        self.n = f.n
        self.cell_budget = cell_budget
        self.grad = gradient(f)
        self._spaces: dict[int, RowSpace] = {}
        self._certificate: IsolatedCertificate | None = None

    @property
    def socle_degree(self) -> int:
        return self.n * (self.n - 2)

    def slice(self, m: int) -> GradedSlice:
        return _slice(self.n, m)

    def _guard(self, m: int) -> None:
        cells = count_monomials(self.n, m) * self.n * count_monomials(self.n, m - self.n + 1)
        if cells > self.cell_budget:
            raise ResourceLimitError(
                f"degree-{m} Jacobian slice needs {cells} cells, over the budget of "
                f"{self.cell_budget}; raise --cell-budget or lower the degree"
            )

    def generator_vectors(self, m: int) -> list[dict[int, Fraction]]:
        """Coordinates of g * df/dx_i for i = 1..n and g in the degree m-n+1 slice."""
        target = self.slice(m)
        src = monomials_of_degree(self.n, m - self.n + 1)
        out = []
        for d in self.grad:
            for g in src:
                vec = {}
                for mono, c in d.terms.items():
                    key = tuple(a + b for a, b in zip(mono, g))
                    vec[target.index[key]] = c
                out.append(vec)
        return out

    def slice_matrix(self, m: int) -> QMatrix:
        self._guard(m)
        cols = self.generator_vectors(m)
        rows: list[dict[int, Fraction]] = [{} for _ in range(count_monomials(self.n, m))]
        for j, vec in enumerate(cols):
            for i, v in vec.items():
                rows[i][j] = v
        return QMatrix(len(rows), len(cols), rows)

    def space(self, m: int) -> RowSpace:
        """Row-reduced basis of J(f)_m inside the monomial coordinates of degree m."""
        sp = self._spaces.get(m)
        if sp is None:
            self._guard(m)
            rows = [integer_row(v.items()) for v in self.generator_vectors(m)]
            sp = RowSpace(rows, count_monomials(self.n, m))
            self._spaces[m] = sp
        return sp

    def hilbert(self, m: int) -> int:
        if m < 0:
            return 0
        if m > self.socle_degree + 1 and self.certificate().isolated:
            # a graded quotient vanishing in one degree >= n-1 vanishes above it
            return 0
        return count_monomials(self.n, m) - self.space(m).rank

    def standard_monomials(self, m: int) -> tuple[Monomial, ...]:
        if m < 0:
            return ()
        basis = self.slice(m).basis
        return tuple(basis[c] for c in self.space(m).free_cols())

    def normal_form(self, g: Poly) -> list[Fraction]:
        """Coordinates of [g] on the standard monomials of its degree."""
        m = self._degree_of(g)
        if m is None:
            return []
        sl = self.slice(m)
        vec = {sl.index[mono]: c for mono, c in g.terms.items()}
        red = self.space(m).reduce(vec)
        return [red.get(c, Fraction(0)) for c in self.space(m).free_cols()]

    def reduce(self, g: Poly) -> Poly:
        """The standard-monomial representative of [g] as a polynomial."""
        m = self._degree_of(g)
        if m is None:
            return Poly.zero(self.n)
        coords = self.normal_form(g)
        return Poly(self.n, zip(self.standard_monomials(m), coords))

    def lift(self, m: int, coords) -> Poly:
        return Poly(self.n, zip(self.standard_monomials(m), coords))

    def _degree_of(self, g: Poly) -> int | None:
        if g.n != self.n or not g.is_p_free():
            raise PolyError("normal_form expects a p-free polynomial in the same variables")
        degs = g.x_degrees()
        if not degs:
            return None
        if len(degs) != 1:
            raise PolyError("normal_form expects a homogeneous polynomial")
        return degs.pop()

    def certificate(self) -> IsolatedCertificate:
        if self._certificate is None:
            self._certificate = self._certify()
        return self._certificate

    def _certify(self) -> IsolatedCertificate:
        top = self.socle_degree
        above = self.hilbert(top + 1)
        if above:
            return IsolatedCertificate(
                False, top, None, above, top + 1,
                f"dim R(f)_{top + 1} = {above} != 0: singularity not isolated",
            )
        socle = self.hilbert(top)
        if socle != 1:
            return IsolatedCertificate(
                False, top, socle, above, top,
                f"dim R(f)_{top} = {socle} != 1: socle is not one-dimensional",
            )
        return IsolatedCertificate(True, top, socle, above, None, "isolated")

    def require_isolated(self) -> None:
        cert = self.certificate()
        if not cert.isolated:
            raise NotIsolatedError(cert)

    def hilbert_series(self) -> dict[int, int]:
        return {m: self.hilbert(m) for m in range(self.socle_degree + 1)}


@lru_cache(maxsize=None)
def _slice(n: int, m: int) -> GradedSlice:
    return GradedSlice.of(n, m)


_default_budget = [DEFAULT_CELL_BUDGET]


def set_default_cell_budget(cells: int) -> None:
    """Budget used by :func:`ring_for` and the anti-diagonal complexes."""
    if cells < 1:
        raise ValueError("cell budget must be positive")
    _default_budget[0] = cells


def default_cell_budget() -> int:
    return _default_budget[0]


@lru_cache(maxsize=32)
def _ring(f: Poly, cell_budget: int) -> JacobianRing:
    return JacobianRing(f, cell_budget)


def ring_for(f: Poly) -> JacobianRing:
    return _ring(f, _default_budget[0])


def clear_caches() -> None:
    """Drop memoised rings and slices (for cold-start timings)."""
    _ring.cache_clear()
    _slice.cache_clear()
    monomials_of_degree.cache_clear()


@dataclass(frozen=True)
class JacobianRingData:
    f: Poly
    hilbert: dict[int, int]
    std_monomials: dict[int, tuple[Monomial, ...]]
    socle_degree: int
    socle_class_coords: tuple[Fraction, ...]


def jacobian_slice_matrix(f: Poly, m: int) -> QMatrix:
    """Matrix of (g_1..g_n) -> sum g_i df/dx_i from (Q[x]_{m-n+1})^n to Q[x]_m."""
    return ring_for(f).slice_matrix(m)


def hilbert_function(f: Poly, m: int) -> int:
    return ring_for(f).hilbert(m)


def standard_monomials(f: Poly, m: int) -> tuple[Monomial, ...]:
    return ring_for(f).standard_monomials(m)


def normal_form(f: Poly, g: Poly) -> list[Fraction]:
    return ring_for(f).normal_form(g)


def certify_isolated(f: Poly) -> IsolatedCertificate:
    return ring_for(f).certificate()


def milnor_number(f: Poly) -> int:
    ring = ring_for(f)
    ring.require_isolated()
    return sum(ring.hilbert_series().values())


def primitive_dims(f: Poly) -> tuple[int, ...]:
    """(dim R(f)_{kn}) for k = 0..n-2, the p-graded pieces of R(W)_0."""
    ring = ring_for(f)
    ring.require_isolated()
    return tuple(ring.hilbert(k * ring.n) for k in range(ring.n - 1))


def socle_coords(f: Poly) -> tuple[Fraction, ...]:
    ring = ring_for(f)
    return tuple(ring.normal_form(hessian_det(f)))


def jacobian_ring_data(f: Poly) -> JacobianRingData:
    ring = ring_for(f)
    ring.require_isolated()
    hil = ring.hilbert_series()
    std = {m: ring.standard_monomials(m) for m in hil}
    return JacobianRingData(f, hil, std, ring.socle_degree, socle_coords(f))

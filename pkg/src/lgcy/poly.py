"""Sparse multivariate polynomials over Q in x1..xn and an auxiliary variable p.

A monomial is a plain tuple of ``n + 1`` non-negative ints: the x exponents
followed by the exponent of ``p``.  Polynomials are immutable mappings from
monomials to nonzero :class:`fractions.Fraction` coefficients.
"""

from __future__ import annotations

import enum
import itertools
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Iterator, Mapping, Sequence

Monomial = tuple  # (e_1, ..., e_n, e_p)


class Grading(enum.Enum):
    CHARGE = "charge"
    WEIGHT = "weight"
    X_DEGREE = "x_degree"


class PolyError(ValueError):
    """Raised on precondition violations of polynomial operations."""


class ParseError(PolyError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


def x_degree(m: Monomial) -> int:
    return sum(m[:-1])


def grading_value(m: Monomial, g: Grading, n: int) -> int:
    """Additive grading of a monomial: charge(x_i)=1, charge(p)=-n, weight(p)=1."""
    if len(m) != n + 1:
        raise PolyError(f"monomial {m!r} does not live in {n} variables")
    if g is Grading.CHARGE:
        return sum(m[:-1]) - n * m[-1]
    if g is Grading.WEIGHT:
        return m[-1]
    return sum(m[:-1])


def order_key(m: Monomial) -> tuple:
    """Sort key of the canonical order; sort with ``reverse=True`` (largest first)."""
    return (sum(m[:-1]), m[-1], m[:-1])


@lru_cache(maxsize=None)
def monomials_of_degree(n: int, d: int) -> tuple[Monomial, ...]:
    """All p-free monomials of x-degree ``d``, in canonical (descending lex) order."""
    if d < 0:
        return ()
    out = []

    def rec(prefix: list[int], left: int, slots: int) -> None:
        if slots == 1:
            out.append(tuple(prefix) + (left, 0))
            return
        for e in range(left, -1, -1):
            prefix.append(e)
            rec(prefix, left - e, slots - 1)
            prefix.pop()

    rec([], d, n)
    return tuple(out)


def count_monomials(n: int, d: int) -> int:
    """dim C[x1..xn]_d."""
    return comb(d + n - 1, n - 1) if d >= 0 else 0


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


class Poly:
    """Immutable sparse polynomial in ``n`` x-variables and ``p``."""

    __slots__ = ("n", "_terms", "_hash")

    def __init__(self, n: int, terms: Mapping[Monomial, object] | Iterable = ()):
        if n < 1:
            raise PolyError("need at least one variable")
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[Monomial, Fraction] = {}
        for m, c in items:
            m = tuple(m)
            if len(m) != n + 1 or any(e < 0 for e in m):
                raise PolyError(f"bad monomial {m!r} for {n} variables")
            c = Fraction(c)
            if c:
                c = clean.get(m, 0) + c
                if c:
                    clean[m] = c
                else:
                    clean.pop(m, None)
        self.n = n
        self._terms = clean
        self._hash = None

    # construction helpers

    @classmethod
    def _raw(cls, n: int, terms: dict) -> Poly:
        obj = cls.__new__(cls)
        obj.n = n
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, n: int) -> Poly:
        return cls._raw(n, {})

    @classmethod
    def constant(cls, n: int, c) -> Poly:
        c = Fraction(c)
        return cls._raw(n, {(0,) * (n + 1): c} if c else {})

    @classmethod
    def monomial(cls, m: Monomial, c=1) -> Poly:
        return cls(len(m) - 1, {tuple(m): c})

    @classmethod
    def var(cls, n: int, i: int | str) -> Poly:
        """The variable ``x_i`` (1-based) or ``p``."""
        return cls._raw(n, {_unit(n, i): Fraction(1)})

    # container protocol

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return self._terms

    def __iter__(self) -> Iterator[tuple[Monomial, Fraction]]:
        for m in sorted(self._terms, key=order_key, reverse=True):
            yield m, self._terms[m]

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def coeff(self, m: Monomial) -> Fraction:
        return self._terms.get(tuple(m), Fraction(0))

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.n == other.n and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.constant(self.n, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self._terms.items())))
        return self._hash

    # arithmetic

    def _coerce(self, other) -> Poly:
        if isinstance(other, Poly):
            if other.n != self.n:
                raise PolyError("polynomials live in different variable counts")
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.constant(self.n, other)
        return NotImplemented

    def __add__(self, other) -> Poly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Poly._raw(self.n, out)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly._raw(self.n, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> Poly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> Poly:
        return (-self) + other

    def __mul__(self, other) -> Poly:
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                return Poly.zero(self.n)
            return Poly._raw(self.n, {m: v * c for m, v in self._terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                v = out.get(m, 0) + c1 * c2
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return Poly._raw(self.n, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Poly:
        if k < 0:
            raise PolyError("negative power")
        out = Poly.constant(self.n, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def mul_monomial(self, m: Monomial, c=1) -> Poly:
        c = Fraction(c)
        if not c:
            return Poly.zero(self.n)
        return Poly._raw(self.n, {_mono_mul(k, m): v * c for k, v in self._terms.items()})

    # queries

    def is_p_free(self) -> bool:
        return all(m[-1] == 0 for m in self._terms)

    def x_degrees(self) -> set[int]:
        return {x_degree(m) for m in self._terms}

    def is_homogeneous(self, degree: int | None = None) -> bool:
        degs = self.x_degrees()
        if not degs:
            return True
        return len(degs) == 1 and (degree is None or degs == {degree})

    def __repr__(self) -> str:
        return f"Poly({self.n}, {format_poly(self)!r})"

    def __str__(self) -> str:
        return format_poly(self)


def _unit(n: int, i: int | str) -> Monomial:
    e = [0] * (n + 1)
    if i == "p":
        e[n] = 1
    else:
        if not isinstance(i, int) or not 1 <= i <= n:
            raise PolyError(f"unknown variable {i!r}")
        e[i - 1] = 1
    return tuple(e)


# calculus and gradings


def partial_derivative(q: Poly, var: int | str) -> Poly:
    """Formal derivative by ``x_var`` (1-based index) or by ``"p"``."""
    n = q.n
    if var == "p":
        idx = n
    elif isinstance(var, int) and 1 <= var <= n:
        idx = var - 1
    else:
        raise PolyError(f"unknown variable {var!r}")
    out = {}
    for m, c in q.terms.items():
        e = m[idx]
        if e:
            out[m[:idx] + (e - 1,) + m[idx + 1:]] = c * e
    return Poly._raw(n, out)


def gradient(q: Poly) -> list[Poly]:
    return [partial_derivative(q, i) for i in range(1, q.n + 1)]


def homogeneous_part(q: Poly, g: Grading, value: int) -> Poly:
    return Poly._raw(q.n, {m: c for m, c in q.terms.items() if grading_value(m, g, q.n) == value})


def homogeneous_components(q: Poly, g: Grading) -> dict[int, Poly]:
    parts: dict[int, dict] = {}
    for m, c in q.terms.items():
        parts.setdefault(grading_value(m, g, q.n), {})[m] = c
    return {k: Poly._raw(q.n, v) for k, v in sorted(parts.items())}


def compose(q: Poly, images: Sequence[Poly]) -> Poly:
    """Substitute ``x_i -> images[i-1]`` and ``p -> images[n]``."""
    if len(images) != q.n + 1:
        raise PolyError("need one image per variable, p included")
    n_out = images[0].n
    out = Poly.zero(n_out)
    for m, c in q.terms.items():
        term = Poly.constant(n_out, c)
        for img, e in zip(images, m):
            if e:
                term = term * img**e
        out = out + term
    return out


def euler_operator(q: Poly) -> Poly:
    """sum_i x_i * dq/dx_i."""
    out = Poly.zero(q.n)
    for i, d in enumerate(gradient(q), start=1):
        out = out + Poly.var(q.n, i) * d
    return out


def require_cy_form(f: Poly) -> None:
    """f must be p-free and homogeneous of x-degree n in n variables."""
    if not f:
        raise PolyError("f must be nonzero")
    if not f.is_p_free():
        raise PolyError("f must not involve p")
    if not f.is_homogeneous(f.n):
        raise PolyError(f"f must be homogeneous of degree n = {f.n}")


def hessian_det(f: Poly) -> Poly:
    """Determinant of the matrix of second partials of ``f``."""
    require_cy_form(f)
    n = f.n
    first = gradient(f)
    H = [[partial_derivative(first[i], j + 1) for j in range(n)] for i in range(n)]
    # Laplace expansion along rows, memoised on the set of still-unused columns.
    memo: dict[tuple[int, ...], Poly] = {}

    def minor(row: int, cols: tuple[int, ...]) -> Poly:
        if row == n:
            return Poly.constant(n, 1)
        if cols in memo:
            return memo[cols]
        acc = Poly.zero(n)
        for pos, c in enumerate(cols):
            entry = H[row][c]
            if entry:
                sub = minor(row + 1, cols[:pos] + cols[pos + 1:])
                term = entry * sub
                acc = acc - term if pos % 2 else acc + term
        memo[cols] = acc
        return acc

    return minor(0, tuple(range(n)))


# text format


def _fmt_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _fmt_monomial(m: Monomial) -> list[str]:
    parts = []
    for i, e in enumerate(m[:-1], start=1):
        if e:
            parts.append(f"x{i}" if e == 1 else f"x{i}^{e}")
    if m[-1]:
        parts.append("p" if m[-1] == 1 else f"p^{m[-1]}")
    return parts


def format_poly(q: Poly) -> str:
    if not q:
        return "0"
    chunks = []
    for idx, (m, c) in enumerate(q):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        factors = _fmt_monomial(m)
        if a != 1 or not factors:
            factors = [_fmt_coeff(a)] + factors
        body = "*".join(factors)
        if idx == 0:
            chunks.append(("-" if sign == "-" else "") + body)
        else:
            chunks.append(f" {sign} {body}")
    return "".join(chunks)


class _Parser:
    def __init__(self, text: str, n: int):
        self.text = text
        self.n = n
        self.pos = 0
        self.last_token = 0

    def _skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self) -> str:
        self._skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _fail(self, message: str):
        self._skip()
        at = self.pos if self.pos < len(self.text) else self.last_token
        raise ParseError(message, at)

    def _take(self) -> str:
        ch = self._peek()
        self.last_token = self.pos
        self.pos += 1
        return ch

    def _uint(self) -> int:
        self._skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self._fail("expected unsigned integer")
        self.last_token = start
        return int(self.text[start:self.pos])

    def parse(self) -> Poly:
        if not self._peek():
            self._fail("empty polynomial")
        acc: dict[Monomial, Fraction] = {}
        sign = 1
        if self._peek() == "-":
            self._take()
            sign = -1
        while True:
            m, c = self._term()
            v = acc.get(m, 0) + sign * c
            if v:
                acc[m] = v
            else:
                acc.pop(m, None)
            ch = self._peek()
            if not ch:
                break
            if ch not in "+-":
                self._fail(f"unexpected character {ch!r}")
            self._take()
            sign = 1 if ch == "+" else -1
        return Poly._raw(self.n, acc)

    def _term(self) -> tuple[Monomial, Fraction]:
        ch = self._peek()
        exps = [0] * (self.n + 1)
        coeff = Fraction(1)
        if ch.isdigit():
            num = self._uint()
            den = 1
            if self._peek() == "/":
                self._take()
                den = self._uint()
                if den == 0:
                    raise ParseError("zero denominator", self.last_token)
            coeff = Fraction(num, den)
            if self._peek() != "*":
                return tuple(exps), coeff
            self._take()
        elif ch not in ("x", "p"):
            self._fail("expected term" if ch else "expected term after operator")
        while True:
            self._factor(exps)
            if self._peek() != "*":
                return tuple(exps), coeff
            self._take()

    def _factor(self, exps: list[int]) -> None:
        ch = self._peek()
        if ch == "x":
            self._take()
            start = self.pos
            i = self._uint()
            if not 1 <= i <= self.n:
                raise ParseError(f"variable x{i} out of range 1..{self.n}", start)
            slot = i - 1
        elif ch == "p":
            self._take()
            slot = self.n
        else:
            self._fail("expected variable" if ch else "expected variable after '*'")
        e = 1
        if self._peek() == "^":
            self._take()
            e = self._uint()
        exps[slot] += e


def parse_poly(text: str, n_vars: int) -> Poly:
    """Parse the polynomial text format (``2/3*x1*x2^2 - p*x3``)."""
    if n_vars < 1:
        raise PolyError("n_vars must be positive")
    return _Parser(text, n_vars).parse()


def fermat(n: int, degree: int | None = None) -> Poly:
    d = n if degree is None else degree
    return Poly(n, {tuple(d if j == i else 0 for j in range(n)) + (0,): 1 for i in range(n)})


def all_subsets(n: int, s: int) -> list[tuple[int, ...]]:
    return list(itertools.combinations(range(n), s))

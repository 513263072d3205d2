from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from lgcy.poly import (
    Grading,
    ParseError,
    Poly,
    PolyError,
    compose,
    euler_operator,
    fermat,
    format_poly,
    grading_value,
    hessian_det,
    homogeneous_components,
    homogeneous_part,
    monomials_of_degree,
    order_key,
    parse_poly,
    partial_derivative,
)

N = 3

coeffs = st.fractions(min_value=-20, max_value=20, max_denominator=7)
monos = st.tuples(*[st.integers(0, 3)] * (N + 1))
polys = st.dictionaries(monos, coeffs, max_size=6).map(lambda d: Poly(N, d))


def x(i, n=N):
    return Poly.var(n, i)


P = Poly.var(N, "p")


# parser


def test_parse_fermat_cubic():
    f = parse_poly("x1^3+x2^3+x3^3", 3)
    assert f == fermat(3)
    assert len(f) == 3
    assert all(c == 1 for _, c in f)


def test_parse_rational_coefficient():
    f = parse_poly("2/3*x1*x2", 3)
    assert list(f.terms.values()) == [Fraction(2, 3)]
    assert f == x(1) * x(2) * Fraction(2, 3)


def test_parse_dangling_operator_offset():
    with pytest.raises(ParseError) as err:
        parse_poly("x1^2 -", 3)
    assert err.value.offset == 5


@pytest.mark.parametrize(
    "text, n",
    [("x4", 3), ("x0", 3), ("1/0*x1", 3), ("x1^", 3), ("x1 x2", 3), ("*x1", 3), ("", 3), ("y1", 3)],
)
def test_parse_errors(text, n):
    with pytest.raises(PolyError):
        parse_poly(text, n)


def test_parse_whitespace_and_unary_minus():
    assert parse_poly(" - x1 ^ 2 * p + 3 ", 3) == -(x(1) ** 2) * P + 3


def test_parse_p_and_constant_terms():
    f = parse_poly("p*x1^3 - 1/2", 3)
    assert f.coeff((3, 0, 0, 1)) == 1
    assert f.coeff((0, 0, 0, 0)) == Fraction(-1, 2)


@given(polys)
def test_parse_print_fixed_point(q):
    text = format_poly(q)
    again = parse_poly(text, N)
    assert again == q
    assert format_poly(again) == text


def test_format_examples():
    assert format_poly(fermat(3)) == "x1^3 + x2^3 + x3^3"
    assert format_poly(parse_poly("2/3*x1*x2", 3)) == "2/3*x1*x2"
    assert format_poly(Poly.zero(3)) == "0"


# arithmetic


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a - a == Poly.zero(N)


def test_canonical_iteration_order():
    q = parse_poly("x1 + p + x2^2 + 1 + x1*x2", 3)
    keys = [order_key(m) for m, _ in q]
    assert keys == sorted(keys, reverse=True)


def test_no_zero_coefficients_stored():
    q = x(1) + x(2) - x(1)
    assert q.terms == {(0, 1, 0, 0): 1}


# calculus


def test_partial_derivative_examples():
    assert partial_derivative(x(1) ** 3, 1) == 3 * x(1) ** 2
    f = fermat(3)
    assert partial_derivative(P * f, "p") == f
    assert partial_derivative(Poly.constant(3, 7), 1) == Poly.zero(3)
    with pytest.raises(PolyError):
        partial_derivative(f, 4)


@given(polys, polys)
def test_leibniz(a, b):
    for v in (1, 2, 3, "p"):
        assert partial_derivative(a * b, v) == partial_derivative(a, v) * b + a * partial_derivative(b, v)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_euler_identity_fermat(n):
    f = fermat(n)
    assert euler_operator(f) == n * f


@given(st.lists(coeffs, min_size=10, max_size=10))
def test_euler_identity_random_cubic(cs):
    f = Poly(3, zip(monomials_of_degree(3, 3), cs))
    assert euler_operator(f) == 3 * f


@given(st.lists(coeffs, min_size=10, max_size=10))
def test_mu_n_invariance(cs):
    # x_i -> z x_i with a formal marker z, then z^3 = 1 makes f invariant
    f = Poly(3, zip(monomials_of_degree(3, 3), cs))
    n = 4  # x1..x3 and the marker z = x4
    lift = Poly(n, {m[:3] + (0, 0): c for m, c in f.terms.items()})
    z = Poly.var(n, 4)
    images = [z * Poly.var(n, i) for i in (1, 2, 3)] + [Poly.var(n, 4) * 0, Poly.var(n, "p")]
    g = compose(lift, images)
    assert g == lift * z**3


# gradings


def test_grading_examples():
    assert grading_value((1, 1, 0, 0), Grading.CHARGE, 3) == 2
    assert grading_value((0, 0, 0, 1), Grading.CHARGE, 3) == -3
    assert grading_value((1, 0, 0, 2), Grading.WEIGHT, 3) == 2
    assert grading_value((1, 0, 0, 2), Grading.X_DEGREE, 3) == 1


@given(monos, monos, st.sampled_from(list(Grading)))
def test_grading_additive(a, b, g):
    ab = tuple(u + v for u, v in zip(a, b))
    assert grading_value(ab, g, N) == grading_value(a, g, N) + grading_value(b, g, N)


def test_homogeneous_part_examples():
    q = 1 + P * x(1) ** 3 + x(1)
    assert homogeneous_part(q, Grading.CHARGE, 0) == 1 + P * x(1) ** 3
    assert homogeneous_part(q, Grading.CHARGE, 17) == Poly.zero(3)
    assert homogeneous_part(fermat(3), Grading.X_DEGREE, 3) == fermat(3)


@given(polys, st.sampled_from(list(Grading)))
def test_homogeneous_parts_reassemble(q, g):
    total = Poly.zero(N)
    for part in homogeneous_components(q, g).values():
        total = total + part
    assert total == q


# Hessian


def test_hessian_fermat():
    assert hessian_det(fermat(3)) == 216 * x(1) * x(2) * x(3)
    x4 = [Poly.var(4, i) for i in range(1, 5)]
    assert hessian_det(fermat(4)) == 12**4 * (x4[0] * x4[1] * x4[2] * x4[3]) ** 2


@given(st.lists(st.integers(-3, 3), min_size=10, max_size=10))
def test_hessian_matches_sympy(cs):
    f = Poly(3, zip(monomials_of_degree(3, 3), cs))
    if not f:
        return
    h = hessian_det(f)
    assert h.is_homogeneous(3) or not h
    X = sympy.symbols("a b c")
    fs = sum(c * X[0] ** m[0] * X[1] ** m[1] * X[2] ** m[2] for m, c in f.terms.items())
    ref = sympy.Poly(sympy.hessian(fs, X).det(), *X)
    ours = {m[:3]: c for m, c in h.terms.items()}
    theirs = {m: Fraction(int(c.p), int(c.q)) for m, c in ref.terms() if c}
    assert ours == theirs


def test_hessian_rejects_non_cy():
    with pytest.raises(PolyError):
        hessian_det(parse_poly("x1^2", 3))
    with pytest.raises(PolyError):
        hessian_det(P * fermat(3))

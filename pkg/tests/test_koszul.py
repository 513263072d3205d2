import random
from fractions import Fraction
from math import comb

import pytest

from lgcy.koszul import (
    AlgForm,
    NotIsolatedError,
    XForm,
    antidiagonal_cohomology,
    antidiagonal_complex,
    charge_of_xform,
    check_chain_map,
    differential_of,
    euler_contraction,
    euler_contraction_kernel_dim,
    homogenize_form,
    wedge,
    wedge_df,
)
from lgcy.milnor import ResourceLimitError, hilbert_function
from lgcy.poly import Poly, PolyError, count_monomials, fermat, parse_poly

from forms import chain_map_cells, random_monomial_form

HESSE_SMOOTH = "x1^3+x2^3+x3^3-6*x1*x2*x3"


def x(i, n=3):
    return Poly.var(n, i)


# wedge


def test_wedge_df_examples():
    f = fermat(3)
    df = differential_of(f)
    assert wedge_df(f, AlgForm(3, {(): Poly.constant(3, 1)})) == df
    assert wedge_df(f, df) == AlgForm(3)
    got = wedge_df(f, AlgForm(3, {(0,): Poly.constant(3, 1)}))
    assert got == AlgForm(3, {(0, 1): -3 * x(2) ** 2, (0, 2): -3 * x(3) ** 2})


def test_top_degree_wedge_is_zero():
    f = fermat(3)
    top = AlgForm(3, {(0, 1, 2): x(1)})
    assert wedge_df(f, top) == AlgForm(3)


def test_form_sign_convention():
    a = AlgForm(3, {(1, 0): x(1)})
    assert a == AlgForm(3, {(0, 1): -x(1)})
    assert AlgForm(3, {(1, 1): x(1)}) == AlgForm(3)
    with pytest.raises(PolyError):
        AlgForm(3, {(0,): Poly.var(3, "p")})
    with pytest.raises(PolyError):
        AlgForm(3, {(3,): x(1)})


def test_wedge_graded_commutativity():
    a = AlgForm(3, {(0,): x(1)})
    b = AlgForm(3, {(1,): x(2)})
    assert wedge(a, b) == -wedge(b, a)
    c = AlgForm(3, {(0, 2): x(3)})
    assert wedge(a, c) == AlgForm(3)
    assert wedge(b, c) == wedge(c, b)


@pytest.mark.parametrize("n", [3, 4])
def test_d_squared_zero(n):
    rng = random.Random(n)
    f = fermat(n)
    for s, k in chain_map_cells(n):
        for _ in range(5):
            w = random_monomial_form(rng, n, s, k)
            assert wedge_df(f, wedge_df(f, w)) == AlgForm(n)


# anti-diagonal complexes


def test_fermat_cubic_antidiagonal_examples():
    f = fermat(3)
    c1 = antidiagonal_complex(f, 1)
    assert c1.slot_dims == (0, 0, 0, 1) and c1.cohomology == (0, 0, 0, 1)
    c2 = antidiagonal_complex(f, 2)
    assert c2.slot_dims[2:] == (9, 10) and c2.ranks[-1] == 9 and c2.cohomology == (0, 0, 0, 1)
    c3 = antidiagonal_complex(f, 3)
    assert c3.slot_dims == (1, 18, 45, 28)
    assert c3.ranks == (1, 17, 28)
    assert c3.euler_characteristic() == 0
    assert c3.cohomology == (0, 0, 0, 0)


@pytest.mark.parametrize("text, n", [("x1^3+x2^3+x3^3", 3), (HESSE_SMOOTH, 3), ("x1^4+x2^4+x3^4+x4^4", 4)])
def test_concentration_in_top_degree(text, n):
    f = parse_poly(text, n)
    for k in range(1, n + 1):
        cx = antidiagonal_complex(f, k)
        top = hilbert_function(f, (k - 1) * n)
        assert cx.cohomology == (0,) * n + (top,)
        assert cx.euler_characteristic() == (-1) ** n * top
        assert cx.composes_to_zero()
        for s, d in enumerate(cx.slot_dims):
            deg = (k - n + s) * n - s
            assert d == (comb(n, s) * count_monomials(n, deg) if k - n + s >= 0 and deg >= 0 else 0)


def test_quintic_low_weights():
    f = fermat(5)
    assert antidiagonal_cohomology(f, 1) == (0, 0, 0, 0, 0, 1)
    assert antidiagonal_cohomology(f, 2) == (0, 0, 0, 0, 0, 101)


def test_antidiagonal_errors():
    f = fermat(3)
    with pytest.raises(ValueError):
        antidiagonal_complex(f, 4)
    assert antidiagonal_complex(f, 4, weight_cap=4).cohomology == (0, 0, 0, 0)
    with pytest.raises(ResourceLimitError):
        antidiagonal_complex(f, 3, cell_budget=100)
    with pytest.raises(NotIsolatedError):
        antidiagonal_complex(parse_poly("x1^3+x2^3", 3), 1)


# homogenization


def test_homogenize_examples():
    g = x(1) ** 3 + x(2) * x(3) ** 2
    p = Poly.var(3, "p")
    assert homogenize_form(AlgForm(3, {(): g})) == XForm(3, {(): p * g})
    got = homogenize_form(AlgForm(3, {(0,): x(1) ** 2}))
    assert got == XForm(3, {(0,): p * x(1) ** 2, (3,): x(1) ** 3 * Fraction(1, 3)})
    assert homogenize_form(AlgForm(3)) == XForm(3)


def test_homogenize_rejects_bad_degree():
    with pytest.raises(PolyError):
        homogenize_form(AlgForm(3, {(0,): x(1)}))


def test_chain_map_examples():
    f = fermat(3)
    assert check_chain_map(f, AlgForm(3, {(0,): x(1) ** 2}))
    assert check_chain_map(f, AlgForm(3, {(): Poly.constant(3, 1)}))
    assert check_chain_map(f, differential_of(f).scale(x(2) ** 3))


@pytest.mark.parametrize("n", [3, 4])
def test_chain_map_random_forms(n):
    rng = random.Random(100 + n)
    other = parse_poly(HESSE_SMOOTH, 3) if n == 3 else fermat(4) - 2 * parse_poly("x1*x2*x3*x4", 4)
    for f in (fermat(n), other):
        for s, k in chain_map_cells(n):
            for _ in range(8):
                w = random_monomial_form(rng, n, s, k)
                assert check_chain_map(f, w)
                assert charge_of_xform(homogenize_form(w)) <= {0}


# Euler contraction


def test_euler_contraction_examples():
    d = euler_contraction(3, 1, 1)
    assert (d.domain_dim, d.rank, d.kernel_dim) == (28, 10, 18)
    assert euler_contraction_kernel_dim(3, 0, 0) == 1
    d = euler_contraction(3, 3, 1)
    assert (d.domain_dim, d.rank, d.kernel_dim) == (10, 9, 1)


@pytest.mark.parametrize("n", [3, 4])
def test_euler_contraction_grid(n):
    for r in range(n + 1):
        for w in range(3):
            d = euler_contraction(n, r, w)
            assert d.kernel_dim == d.expected == comb(n, r) * count_monomials(n, w * n - r)


def test_euler_contraction_bad_args():
    with pytest.raises(ValueError):
        euler_contraction(3, 5, 0)

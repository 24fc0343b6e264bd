"""Exact polynomial ring used by the symbolic determinant path."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from riccati_pade import InputError, Poly, bisect_root, format_poly

F = Fraction

coeff_lists = st.lists(
    st.fractions(min_value=F(-50), max_value=F(50)), min_size=1, max_size=6
)


def test_degree_and_normalization():
    assert Poly([F(0)]).is_zero
    assert Poly([F(1), F(0), F(0)]).degree == 0
    p = Poly([F(-1), F(0), F(1)])
    assert p.degree == 2
    assert p.coefficient(0) == -1
    assert p.coefficient(1) == 0
    assert p.coefficient(5) == 0
    assert p.leading_coefficient == 1


def test_arithmetic_small_cases():
    p = Poly([F(-1), F(0), F(1)])  # E^2 - 1
    q = Poly([F(1), F(1)])  # E + 1
    assert (p + q).evaluate(F(3)) == 8 + 4
    assert (p - q).evaluate(F(3)) == 8 - 4
    assert (p * q).evaluate(F(3)) == 32
    assert (-p).evaluate(F(2)) == -3
    assert (p * F(1, 2)).evaluate(F(3)) == 4


def test_scalar_dispatch_both_sides():
    # regression: a zero Poly is falsy, which once broke the scalar
    # lifting in __add__/__sub__ and with it every bivariate determinant
    p = Poly([F(1), F(2)])
    assert (F(0) + p) == p
    assert (p + F(0)) == p
    assert (F(0) - p) == -p
    assert (p - F(0)) == p
    assert (3 * p).coefficient(1) == 6


@given(coeff_lists, coeff_lists, st.fractions(min_value=F(-9), max_value=F(9)))
def test_ring_laws_pointwise(a, b, x):
    p, q = Poly(a), Poly(b)
    assert (p + q).evaluate(x) == p.evaluate(x) + q.evaluate(x)
    assert (p * q).evaluate(x) == p.evaluate(x) * q.evaluate(x)
    assert (p - q).evaluate(x) == p.evaluate(x) - q.evaluate(x)


@given(coeff_lists, coeff_lists)
def test_product_degree_law(a, b):
    p, q = Poly(a), Poly(b)
    if p.is_zero or q.is_zero:
        assert (p * q).is_zero
    else:
        assert (p * q).degree == p.degree + q.degree


def test_derivative():
    p = Poly([F(5), F(-3), F(0), F(2)])  # 2E^3 - 3E + 5
    dp = p.derivative()
    assert dp == Poly([F(-3), F(0), F(6)])
    assert Poly([F(7)]).derivative().is_zero


def test_exact_division_and_remainder():
    p = Poly([F(-1), F(0), F(1)])
    q = Poly([F(1), F(1)])
    quotient, remainder = p.divmod_exact(q)
    assert quotient == Poly([F(-1), F(1)])
    assert remainder.is_zero
    assert p.exact_div(q) == quotient
    with pytest.raises(ValueError):
        (p + F(1)).exact_div(q)  # E^2 is not divisible by E + 1


def test_monic():
    p = Poly([F(-2), F(0), F(4)])
    assert p.monic() == Poly([F(-1, 2), F(0), F(1)])
    with pytest.raises(InputError):
        Poly([F(0)]).monic()


def test_format_poly():
    p = Poly([F(-25), F(0), F(51), F(0), F(-27), F(0), F(1)])
    assert format_poly(p, "E") == "E^6 - 27*E^4 + 51*E^2 - 25"
    assert format_poly(Poly([F(0)]), "E") == "0"
    assert format_poly(Poly([F(1, 3), F(-1)]), "W") == "-W + 1/3"


def test_bisect_root_sextic():
    # W^6 + 162 W^3 - 189 has exactly one positive real root
    p = Poly([F(-189), F(0), F(0), F(162), F(0), F(0), F(1)])
    w = bisect_root(p, 1, 2, digits=18)
    assert isinstance(w, Fraction)
    assert abs(p.evaluate(w)) < abs(p.derivative().evaluate(w)) * F(1, 10**17)
    # agree with an independent float solve to double precision
    import numpy as np

    expected = max(
        r.real for r in np.roots([1, 0, 0, 162, 0, 0, -189]) if abs(r.imag) < 1e-9
    )
    assert abs(float(w) - expected) < 1e-12


def test_bisect_root_endpoint_and_errors():
    p = Poly([F(-4), F(0), F(1)])  # (E-2)(E+2)
    assert bisect_root(p, 2, 3) == 2
    assert bisect_root(p, 0, 2) == 2
    with pytest.raises(InputError):
        bisect_root(p, 3, 5)  # no sign change
    with pytest.raises(InputError):
        bisect_root(p, 3, 3)

"""Potential mini-language and the exact series interface."""

import math
from fractions import Fraction

import pytest
from mpmath import mp, mpf, sech

from riccati_pade import (
    InputError,
    MissingCoefficientError,
    parse_potential,
    perturbed,
    series_coefficients,
    shift_constant,
)
from riccati_pade.potential import affine_coefficient_polys, cosh_sq_series

F = Fraction


def test_builtin_models():
    assert parse_potential("harmonic").coeffs[0] == 1
    q = parse_potential("quartic")
    assert q.coefficient(1) == 0 and q.coefficient(2) == 1
    assert q.coefficient(99) == 0  # exact zero tail
    x = parse_potential("x2x4:lambda=1/2")
    assert x.coefficient(1) == 1 and x.coefficient(2) == F(1, 2)
    w = parse_potential("dwell:beta=-5")
    assert w.coefficient(1) == -5 and w.coefficient(2) == 1
    assert w.v0 == 0


def test_poly_model_and_constant():
    p = parse_potential("poly:1/2,0,3")
    assert p.coeffs[:3] == (F(1, 2), F(0), F(3))
    assert all(c == 0 for c in p.coeffs[3:])
    assert p.coefficient(2) == 0
    assert p.v0 == 0


@pytest.mark.parametrize(
    "bad",
    [
        "", "nosuch", "x2x4", "x2x4:lambda=0.5x", "mpt", "mpt:lambda=0",
        "mpt:lambda=1", "poly:", "harmonic:lambda=1",
    ],
)
def test_parse_rejects(bad):
    with pytest.raises(InputError):
        parse_potential(bad)


def test_mpt_series_matches_sech_squared_expansion():
    # V(x) = -lam(lam-1)/cosh^2 x; its x^(2j) Taylor coefficients must
    # match an independent high-precision expansion of sech^2
    lam = F(3)
    pot = parse_potential("mpt:lambda=3", order=12)
    assert pot.v0 == -lam * (lam - 1)
    with mp.workdps(40):
        h = mpf("1e-6")
        # even derivatives via the exact series: compare V at a point
        x = mpf("0.37")
        series = mpf(pot.v0.numerator) / pot.v0.denominator
        z = x * x
        for j in range(1, pot.jmax + 1):
            c = pot.coefficient(j)
            series += (mpf(c.numerator) / c.denominator) * z**j
        direct = -6 * sech(x) ** 2
        assert abs(series - direct) < mpf("1e-14")
    del h


def test_mpt_refuses_coefficients_past_generated_order():
    pot = parse_potential("mpt:lambda=3", order=8)
    pot.coefficient(8)
    with pytest.raises(MissingCoefficientError):
        pot.coefficient(9)


def test_cosh_sq_series_prefix():
    # cosh^2 x = 1 + x^2 + x^4/3 + 2 x^6/45 + ...
    assert cosh_sq_series(3)[:4] == [F(1), F(1), F(1, 3), F(2, 45)]


def test_evaluate_float_polynomial_and_mpt():
    q = parse_potential("quartic")
    assert q.evaluate_float(1.5) == 1.5**4
    m = parse_potential("mpt:lambda=3")
    assert abs(m.evaluate_float(0.7) - (-6.0 / math.cosh(0.7) ** 2)) < 1e-15


def test_shift_constant():
    pot = parse_potential("mpt:lambda=3")
    flat, shift = shift_constant(pot)
    assert shift == -6
    assert flat.v0 == 0
    assert flat.coeffs == pot.coeffs


def test_perturbed_slopes():
    q = parse_potential("quartic")
    pert = perturbed(q, [F(0), F(1)], beta=F(1, 100))
    assert pert.coefficient(1) == F(1, 100)
    assert pert.coefficient(2) == 1
    assert pert.slope(1, "beta") == 1
    assert pert.slope(2, "beta") == 0
    assert pert.param_affine


def test_affine_coefficient_polys():
    x = parse_potential("x2x4:lambda=2")
    polys = affine_coefficient_polys(x, "lambda")
    assert polys[0].evaluate(F(7)) == 1  # V_1 independent of lambda
    assert polys[1].evaluate(F(7)) == 7  # V_2 = lambda
    m = parse_potential("mpt:lambda=3")
    with pytest.raises(InputError):
        affine_coefficient_polys(m, "lambda")  # strength is quadratic in lambda


def test_series_coefficients_entry_point():
    spec = series_coefficients("dwell", {"beta": F(-5)}, order=6)
    assert spec.coefficient(1) == -5
    assert spec.coefficient(2) == 1
    with pytest.raises(InputError):
        series_coefficients("x2x4", {"lambda": 0.5})  # float parameter

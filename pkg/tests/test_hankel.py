"""Hankel determinants: exact forms, numeric evaluation, tangents."""

from fractions import Fraction

import pytest
import sympy
from mpmath import mp, mpf

from riccati_pade import (
    HankelSpec,
    InputError,
    Poly,
    coeffs_symbolic,
    det_dual,
    det_numeric,
    det_symbolic,
    hankel_matrix,
    parse_potential,
)
from riccati_pade.hankel import residual_scale

F = Fraction


@pytest.fixture(scope="module")
def harmonic():
    return parse_potential("harmonic")


def _even_factor(root_sq):
    return Poly([F(-root_sq), F(0), F(1)])


def test_spec_validation():
    spec = HankelSpec(3, 1, 0)
    assert spec.max_series_index == 6
    with pytest.raises(InputError):
        HankelSpec(0, 0, 0)
    with pytest.raises(InputError):
        HankelSpec(2, -1, 0)
    with pytest.raises(InputError):
        HankelSpec(2, 0, 2)


def test_matrix_is_constant_on_antidiagonals(harmonic):
    spec = HankelSpec(4, 1, 0)
    coeffs = coeffs_symbolic(harmonic, 0, spec.max_series_index)
    m = hankel_matrix(coeffs, spec)
    for i in range(4):
        for j in range(4):
            assert m[i][j] == coeffs[2 + i + j]
    short = coeffs_symbolic(harmonic, 0, spec.max_series_index - 1)
    with pytest.raises(InputError):
        hankel_matrix(short, spec)


def test_harmonic_determinants_factor_over_eigenvalues(harmonic):
    # the exact determinants vanish at the sector eigenvalues, with
    # multiplicity falling as the eigenvalue climbs
    d20 = _even_factor(1) ** 2 * _even_factor(25) / 4725
    assert det_symbolic(harmonic, HankelSpec(2, 0, 0)) == d20

    d21 = _even_factor(1) ** 2 * _even_factor(25) * Poly([F(3), F(0), F(1)]) / 297675
    assert det_symbolic(harmonic, HankelSpec(2, 1, 0)) == d21

    d30 = _even_factor(1) ** 3 * _even_factor(25) ** 2 * _even_factor(81)
    assert det_symbolic(harmonic, HankelSpec(3, 0, 0)) == d30 / 46414974375

    d31 = (
        _even_factor(1) ** 3
        * _even_factor(25) ** 2
        * _even_factor(81)
        * Poly([F(29), F(0), F(1)])
        * Poly([F(0), F(4)])
    )
    assert det_symbolic(harmonic, HankelSpec(3, 1, 0)) == d31 / 896041080309375


def test_bivariate_monic_forms():
    x = parse_potential("x2x4:lambda=1")
    p0 = det_symbolic(x, HankelSpec(2, 0, 0), param="lambda").monic()
    lam = Poly([F(0), F(1)])
    one = Poly([F(1)])
    expect0 = Poly(
        [
            -189 * lam**2 - 25 * one,
            -162 * lam,
            51 * one,
            162 * lam,
            -27 * one,
            Poly([F(0)]),
            one,
        ]
    )
    assert p0 == expect0

    p1 = det_symbolic(x, HankelSpec(2, 1, 0), param="lambda").monic()
    expect1 = Poly(
        [
            -882 * lam**2 - 75 * one,
            -846 * lam,
            666 * lam**2 + 128 * one,
            1404 * lam,
            -30 * one,
            -558 * lam,
            -24 * one,
            Poly([F(0)]),
            one,
        ]
    )
    assert p1 == expect1


def test_bivariate_dwell_forms():
    w = parse_potential("dwell:beta=-1")
    beta = Poly([F(0), F(1)])
    one = Poly([F(1)])
    p0 = det_symbolic(w, HankelSpec(2, 0, 0), param="beta").monic()
    expect0 = Poly(
        [
            -25 * beta**3 - 189 * one,
            -162 * beta,
            51 * beta**2,
            162 * one,
            -27 * beta,
            Poly([F(0)]),
            one,
        ]
    )
    assert p0 == expect0

    p1 = det_symbolic(w, HankelSpec(2, 1, 0), param="beta").monic()
    expect1 = Poly(
        [
            -75 * beta**4 - 882 * beta,
            -846 * beta**2,
            128 * beta**3 + 666 * one,
            1404 * beta,
            -30 * beta**2,
            -558 * one,
            -24 * beta,
            Poly([F(0)]),
            one,
        ]
    )
    assert p1 == expect1


def test_symbolic_agrees_with_independent_cas(harmonic):
    # same matrix, determinant expanded by sympy instead of the in-house
    # fraction-free elimination
    spec = HankelSpec(3, 1, 0)
    coeffs = coeffs_symbolic(harmonic, 0, spec.max_series_index)
    E = sympy.Symbol("E")
    rows = []
    for i in range(3):
        rows.append(
            [
                sympy.Poly(
                    list(reversed([sympy.Rational(c) for c in coeffs[2 + i + j].coeffs])),
                    E,
                ).as_expr()
                for j in range(3)
            ]
        )
    det = sympy.expand(sympy.Matrix(rows).det())
    ours = det_symbolic(harmonic, spec)
    theirs = sympy.Poly(det, E).all_coeffs()[::-1]
    assert [sympy.Rational(c) for c in ours.coeffs] == theirs


def test_numeric_matches_symbolic_evaluation(harmonic):
    spec = HankelSpec(3, 0, 0)
    sym = det_symbolic(harmonic, spec)
    for energy in (F(1, 3), F(9, 7), F(-4)):
        exact = sym.evaluate(energy)
        got = det_numeric(harmonic, energy, spec, 50)
        with mp.workdps(40):
            want = mpf(exact.numerator) / exact.denominator
            assert abs(got - want) <= (abs(want) + 1) * mpf("1e-35")


def test_guarded_numeric_returns_refined_value(harmonic):
    spec = HankelSpec(2, 0, 0)
    plain = det_numeric(harmonic, F(3, 2), spec, 40)
    guarded = det_numeric(harmonic, F(3, 2), spec, 40, guard=20)
    with mp.workdps(40):
        assert abs(plain - guarded) < mpf("1e-30")


def test_dual_energy_tangent(harmonic):
    spec = HankelSpec(2, 0, 0)
    sym = det_symbolic(harmonic, spec)
    dual = det_dual(harmonic, F(3, 2), spec, 50)
    dval = sym.derivative().evaluate(F(3, 2))
    with mp.workdps(40):
        want = mpf(dval.numerator) / dval.denominator
        assert abs(dual.d_energy - want) < mpf("1e-35")


def test_dual_parameter_tangent_matches_bivariate():
    x = parse_potential("x2x4:lambda=2")
    spec = HankelSpec(2, 1, 0)
    dual = det_dual(x, F(5, 4), spec, 50, param="lambda")
    biv = det_symbolic(x, spec, param="lambda")
    # differentiate the bivariate form in the parameter, then evaluate
    # at (E, lambda) = (5/4, 2)
    dparam = F(0)
    for k, c in enumerate(biv.coeffs):
        inner = c if isinstance(c, Poly) else Poly([c])
        dparam += inner.derivative().evaluate(F(2)) * F(5, 4) ** k
    with mp.workdps(40):
        want = mpf(dparam.numerator) / dparam.denominator
        assert abs(dual.d_param - want) < mpf("1e-30")


def test_dual_tangent_survives_exactly_singular_matrix(harmonic):
    # at E = 5 the even-sector series coefficients are exact powers of
    # two, so the D = 2 matrix is singular in exact binary arithmetic;
    # the energy tangent must survive the zero value (it is 128/105),
    # and at the doubly degenerate E = 1 it must honestly vanish
    spec = HankelSpec(2, 0, 0)
    at5 = det_dual(harmonic, F(5), spec, 40)
    assert at5.value == 0
    with mp.workdps(40):
        want = mpf(128) / 105
        assert abs(at5.d_energy - want) < mpf("1e-35")
    at1 = det_dual(harmonic, F(1), spec, 40)
    assert at1.value == 0
    assert at1.d_energy == 0


def test_residual_scale_positive(harmonic):
    spec = HankelSpec(2, 0, 0)
    scale = residual_scale(harmonic, F(1), spec, 40)
    assert scale > 0

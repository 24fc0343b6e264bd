"""Symmetric potentials as exact even-power series.

Everything downstream consumes a potential through one narrow interface:
the exact rational coefficients V_j of V(x) = v0 + sum_j V_j x^(2j), plus
(for parameter studies) the exact first derivative of each V_j with
respect to one scalar parameter.  Polynomial wells carry an exactly-zero
tail; the modified Poschl-Teller well is the one built-in model with an
infinite series, and asking it for a coefficient beyond the generated
order fails loudly rather than silently truncating.

All coefficient arithmetic is Fraction-exact.  Floats are rejected at the
boundary: a caller who wants 1/10 must say so, not hand us 0.1000000000001.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction

from .errors import InputError, MissingCoefficientError
from .numerics import parse_rational
from .polynomials import Poly

#: Models the mini-language knows, with their required parameters.
MODELS = {
    "harmonic": (),
    "quartic": (),
    "x2x4": ("lambda",),
    "dwell": ("beta",),
    "mpt": ("lambda",),
    "poly": (),
}


def _as_fraction(value, what: str) -> Fraction:
    if isinstance(value, float):
        raise InputError(
            f"{what} must be exact (int, Fraction, or literal string), got a float"
        )
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise InputError(f"{what} must be rational, got {type(value).__name__}")


def cosh_sq_series(order: int) -> list[Fraction]:
    """Coefficients of x^(2k), k = 0..order, of cosh(x)^2.

    From cosh^2 = (1 + cosh 2x)/2 the x^(2k) coefficient for k >= 1 is
    2^(2k-1)/(2k)!.
    """
    out = [Fraction(1)]
    for k in range(1, order + 1):
        out.append(Fraction(2 ** (2 * k - 1), math.factorial(2 * k)))
    return out


def series_reciprocal(coeffs, order: int) -> list[Fraction]:
    """First ``order + 1`` coefficients of 1/A given those of A.

    ``coeffs`` are the ascending coefficients of A with a nonzero constant
    term; the result r satisfies sum_{j<=k} r_j a_{k-j} = [k == 0] exactly.
    """
    a = [_as_fraction(c, "series coefficient") for c in coeffs]
    if not a or a[0] == 0:
        raise InputError("series reciprocal needs a nonzero constant term")
    while len(a) <= order:
        a.append(Fraction(0))
    r = [1 / a[0]]
    for k in range(1, order + 1):
        acc = Fraction(0)
        for j in range(k):
            acc += r[j] * a[k - j]
        r.append(-acc / a[0])
    return r


@dataclass(frozen=True)
class PotentialSpec:
    """A symmetric potential reduced to exact series data.

    ``coeffs[j-1]`` is V_j for j = 1..jmax.  ``exact_tail`` means every
    coefficient beyond jmax is exactly zero (polynomial well), so any
    order may be requested; otherwise requests past jmax raise.  When the
    model has a scalar parameter, ``slopes[j-1]`` is dV_j/d(param) at the
    stored parameter value and ``param_affine`` records whether each V_j
    is an affine function of the parameter (required for exact bivariate
    work; tangents are fine either way).
    """

    name: str
    params: tuple[tuple[str, Fraction], ...]
    v0: Fraction
    coeffs: tuple[Fraction, ...]
    jmax: int
    exact_tail: bool
    slope_param: str | None = None
    slopes: tuple[Fraction, ...] = ()
    param_affine: bool = False

    def param(self, name: str) -> Fraction:
        for key, value in self.params:
            if key == name:
                return value
        raise InputError(f"potential {self.name!r} has no parameter {name!r}")

    def coefficient(self, j: int) -> Fraction:
        """V_j for j >= 1, exact."""
        if not isinstance(j, int) or j < 1:
            raise InputError(f"series index must be an int >= 1, got {j!r}")
        if j <= self.jmax:
            return self.coeffs[j - 1]
        if self.exact_tail:
            return Fraction(0)
        raise MissingCoefficientError(j, self.jmax, self.name)

    def slope(self, j: int, param: str) -> Fraction:
        """dV_j/d(param) at the stored parameter value, exact."""
        if param != self.slope_param:
            raise InputError(
                f"potential {self.name!r} has no tunable parameter {param!r}"
            )
        if not isinstance(j, int) or j < 1:
            raise InputError(f"series index must be an int >= 1, got {j!r}")
        if j <= len(self.slopes):
            return self.slopes[j - 1]
        if self.exact_tail:
            return Fraction(0)
        raise MissingCoefficientError(j, self.jmax, self.name)

    def evaluate_float(self, x: float) -> float:
        """Pointwise V(x) in double precision, for the independent
        grid-diagonalization check.  Uses the closed form for the
        Poschl-Teller well and exact Horner for polynomial wells."""
        if self.name == "mpt":
            lam = self.param("lambda")
            return -float(lam * (lam - 1)) / math.cosh(x) ** 2
        if not self.exact_tail:
            raise InputError(
                f"no closed form to evaluate {self.name!r} pointwise"
            )
        z = x * x
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * z + float(c)
        return acc * z + float(self.v0)


def series_coefficients(model, params=None, order: int = 32, *, coeffs=None) -> PotentialSpec:
    """Build a :class:`PotentialSpec` for a named model.

    ``params`` maps parameter names to exact rationals.  ``order`` is how
    many series coefficients to generate; for polynomial wells the list
    is padded with exact zeros up to the polynomial degree, and the tail
    is exact regardless of ``order``.  The ``poly`` model takes its
    coefficients V_1, V_2, ... through ``coeffs``.
    """
    if model not in MODELS:
        raise InputError(
            f"unknown potential model {model!r}; known: {', '.join(sorted(MODELS))}"
        )
    if not isinstance(order, int) or order < 1:
        raise InputError(f"order must be an int >= 1, got {order!r}")
    params = dict(params or {})
    for need in MODELS[model]:
        if need not in params:
            raise InputError(f"model {model!r} requires parameter {need!r}")
    for got in params:
        if got not in MODELS[model] and not (model == "poly" and got == "v0"):
            raise InputError(f"model {model!r} does not take parameter {got!r}")
    exact = {k: _as_fraction(v, f"parameter {k!r}") for k, v in params.items()}

    if model == "poly":
        if coeffs is None:
            raise InputError("model 'poly' needs an explicit coefficient list")
        cs = [_as_fraction(c, "poly coefficient") for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        if not cs:
            raise InputError("model 'poly' needs at least one nonzero coefficient")
        if cs[-1] <= 0:
            raise InputError(
                "the leading series coefficient must be positive for a "
                "confining well"
            )
        v0 = exact.get("v0", Fraction(0))
        jmax = max(order, len(cs))
        full = cs + [Fraction(0)] * (jmax - len(cs))
        return PotentialSpec("poly", (), v0, tuple(full), jmax, True)
    if coeffs is not None:
        raise InputError(f"model {model!r} does not take an explicit coefficient list")

    if model == "harmonic":
        jmax = order
        full = [Fraction(1)] + [Fraction(0)] * (jmax - 1)
        return PotentialSpec("harmonic", (), Fraction(0), tuple(full), jmax, True)

    if model == "quartic":
        jmax = max(order, 2)
        full = [Fraction(0), Fraction(1)] + [Fraction(0)] * (jmax - 2)
        return PotentialSpec("quartic", (), Fraction(0), tuple(full), jmax, True)

    if model == "x2x4":
        lam = exact["lambda"]
        jmax = max(order, 2)
        full = [Fraction(1), lam] + [Fraction(0)] * (jmax - 2)
        slopes = [Fraction(0), Fraction(1)] + [Fraction(0)] * (jmax - 2)
        return PotentialSpec(
            "x2x4",
            (("lambda", lam),),
            Fraction(0),
            tuple(full),
            jmax,
            True,
            slope_param="lambda",
            slopes=tuple(slopes),
            param_affine=True,
        )

    if model == "dwell":
        beta = exact["beta"]
        jmax = max(order, 2)
        full = [beta, Fraction(1)] + [Fraction(0)] * (jmax - 2)
        slopes = [Fraction(1)] + [Fraction(0)] * (jmax - 1)
        return PotentialSpec(
            "dwell",
            (("beta", beta),),
            Fraction(0),
            tuple(full),
            jmax,
            True,
            slope_param="beta",
            slopes=tuple(slopes),
            param_affine=True,
        )

    # Modified Poschl-Teller: V = -lambda(lambda-1)/cosh^2 x.  The series
    # of 1/cosh^2 comes from exact reciprocation of the cosh^2 series,
    # whose x^(2k) coefficient is 2^(2k-1)/(2k)! for k >= 1.
    lam = exact["lambda"]
    strength = -lam * (lam - 1)
    if strength == 0:
        raise InputError(
            "mpt with lambda in {0, 1} is the free particle; nothing to solve"
        )
    sech2 = series_reciprocal(cosh_sq_series(order), order)
    v0 = strength * sech2[0]
    dstrength = -(2 * lam - 1)
    body = [strength * sech2[j] for j in range(1, order + 1)]
    slopes = [dstrength * sech2[j] for j in range(1, order + 1)]
    return PotentialSpec(
        "mpt",
        (("lambda", lam),),
        v0,
        tuple(body),
        order,
        False,
        slope_param="lambda",
        slopes=tuple(slopes),
        param_affine=False,
    )


def shift_constant(spec: PotentialSpec) -> tuple[PotentialSpec, Fraction]:
    """Split off the constant term: returns the same well with v0 = 0 and
    the exact shift to add back to every eigenvalue afterwards."""
    return replace(spec, v0=Fraction(0)), spec.v0


def perturbed(
    base: PotentialSpec, observable: tuple[Fraction, ...] | list, beta=Fraction(0)
) -> PotentialSpec:
    """The well V + beta*A for a polynomial observable A(x) = A_0 +
    sum_k A_k x^(2k); ``observable`` lists A_0, A_1, ...  The returned
    spec's parameter is ``beta`` with exact slopes dV_j/dbeta = A_j, which
    is what differentiating an eigenvalue at beta = 0 needs."""
    a = [_as_fraction(c, "observable coefficient") for c in observable]
    if not a:
        raise InputError("observable needs at least one coefficient")
    beta = _as_fraction(beta, "beta")
    k = len(a) - 1  # highest x^(2k) power in A
    if not base.exact_tail and k > base.jmax:
        raise MissingCoefficientError(k, base.jmax, base.name)
    jmax = max(base.jmax, k)
    coeffs = []
    slopes = []
    for j in range(1, jmax + 1):
        aj = a[j] if j <= k else Fraction(0)
        coeffs.append(base.coefficient(j) + beta * aj)
        slopes.append(aj)
    # Only one tunable parameter survives: any parameter of the base well
    # is frozen at its stored value and beta becomes the live one.
    return PotentialSpec(
        f"{base.name}+perturbation",
        base.params + (("beta", beta),),
        base.v0 + beta * a[0],
        tuple(coeffs),
        jmax,
        base.exact_tail,
        slope_param="beta",
        slopes=tuple(slopes),
        param_affine=True,
    )


def affine_coefficient_polys(spec: PotentialSpec, param: str) -> list[Poly]:
    """Each V_j as an exact degree-<=1 polynomial in ``param`` (the
    indeterminate replacing the stored value).  Only valid when the
    dependence really is affine; the Poschl-Teller strength is quadratic
    in lambda, so it is rejected here (its tangents are still exact)."""
    if param != spec.slope_param:
        raise InputError(f"potential {spec.name!r} has no tunable parameter {param!r}")
    if not spec.param_affine:
        raise InputError(
            f"coefficients of {spec.name!r} are not affine in {param!r}; "
            "exact parameter expansion is unavailable (tangents still work)"
        )
    p0 = spec.param(param)
    out = []
    for j in range(1, spec.jmax + 1):
        s = spec.slope(j, param)
        c = spec.coefficient(j) - s * p0
        out.append(Poly([c, s]))
    return out


def parse_potential(text: str, order: int = 64) -> PotentialSpec:
    """Parse the small potential language used at the command line:

    ``harmonic`` | ``quartic`` | ``x2x4:lambda=<r>`` | ``dwell:beta=<r>``
    | ``mpt:lambda=<r>`` | ``poly:<r1>,<r2>,...``

    where ``<r>`` is an exact rational (integer, n/d, or decimal read
    exactly).  The poly list gives V_1, V_2, ... of v0-free x^2, x^4, ...
    """
    if not isinstance(text, str) or not text.strip():
        raise InputError("empty potential specification")
    head, _, rest = text.strip().partition(":")
    model = head.strip()
    if model not in MODELS:
        raise InputError(
            f"unknown potential model {model!r}; known: {', '.join(sorted(MODELS))}"
        )
    if model == "poly":
        if not rest:
            raise InputError("poly needs a coefficient list, e.g. poly:1,0,1/2")
        items = [s for s in rest.split(",")]
        return series_coefficients("poly", {}, order, coeffs=items)
    params = {}
    if rest:
        for piece in rest.split(","):
            key, eq, value = piece.partition("=")
            if not eq or not key.strip() or not value.strip():
                raise InputError(f"bad parameter assignment {piece!r}")
            params[key.strip()] = value.strip()
    return series_coefficients(model, params, order)

"""Rational reconstruction of eigenfunctions.

The series f(x) = x * sum_n f_n z^n (z = x^2) converges only near the
origin, but its Padé approximant R(z) = [M/N](z) extends the
logarithmic derivative far enough to integrate

    psi(x) = x^s * exp( - integral_0^x  t * R(t^2) dt ),

which normalizes itself: psi(0) = 1 for even states, psi'(0) = 1 for
odd.  The natural orders follow the determinant that produced the
energy: H_D^d pins [M/N] with N = D - 1, M = N + d, and at a root of
H_D^d the approximant matches the series one order beyond its defining
system, which is precisely the quantization condition.

Quality control is local and honest: the logarithmic-derivative form of
the Schrodinger equation gives a pointwise residual

    psi''/psi - V + E  =  -(2s+1) R(z) - 2 z R'(z) + z R(z)^2 - V + E,

free of any 1/x cancellation, so the profile can be inspected out to
where the rational approximation lets go (it always does eventually;
real positive denominator zeros mark the hard edge)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from mpmath import mp, mpf

from mpmath import matrix as mp_matrix, lu_solve

from .errors import InputError, PoleError
from .hankel import HankelSpec
from .numerics import require_precision, to_mpf
from .potential import PotentialSpec
from .riccati import CoeffSequence


@dataclass(frozen=True)
class PadeApproximant:
    """[M/N] rational approximant of the z-series of f(x)/x.

    ``numerator``/``denominator`` are ascending mpf coefficients with the
    denominator normalized to b_0 = 1.  ``poles`` holds the real positive
    z-zeros of the denominator (ascending); the first one bounds the
    trustworthy x-range at sqrt(poles[0]).  ``degenerate`` flags a
    singular defining system solved in the least-squares sense.
    """

    numerator: tuple
    denominator: tuple
    order: tuple[int, int]
    precision: int
    poles: tuple
    degenerate: bool

    @property
    def pole_radius(self):
        """Largest safe |x|, or None if no real positive pole exists."""
        if not self.poles:
            return None
        return mp.sqrt(self.poles[0])

    def value(self, z):
        """R(z) by Horner at the instance's precision."""
        with mp.workdps(self.precision):
            num = _horner(self.numerator, z)
            den = _horner(self.denominator, z)
            if den == 0:
                raise PoleError(f"denominator vanishes at z = {z}")
            return num / den

    def derivative(self, z):
        """R'(z) at the instance's precision."""
        with mp.workdps(self.precision):
            num = _horner(self.numerator, z)
            den = _horner(self.denominator, z)
            dnum = _horner(_diff(self.numerator), z)
            dden = _horner(_diff(self.denominator), z)
            if den == 0:
                raise PoleError(f"denominator vanishes at z = {z}")
            return (dnum * den - num * dden) / (den * den)


def _horner(coeffs, z):
    acc = mpf(0)
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def _diff(coeffs):
    return tuple(k * c for k, c in enumerate(coeffs))[1:] if len(coeffs) > 1 else ()


def default_orders(spec: HankelSpec) -> tuple[int, int]:
    """The [M/N] that the determinant H_D^d quantizes: N = D-1, M = N+d."""
    n = spec.dimension - 1
    return n + spec.displacement, n


def pade_from_coeffs(coeffs, m: int, n: int, prec: int) -> PadeApproximant:
    """Build [M/N] from series coefficients f_0..f_{M+N} (more is fine).

    The denominator solves the N x N Toeplitz system expressing that
    orders M+1..M+N of (denominator * series - numerator) vanish.  A
    numerically singular system falls back to the least-squares direction
    (flagged ``degenerate``); callers doing physics should treat that as
    a sign to change (M, N), not as a result.
    """
    require_precision(prec)
    if not (isinstance(m, int) and isinstance(n, int)) or n < 0 or m < n:
        raise InputError(
            f"Padé orders need M >= N >= 0, got M={m!r}, N={n!r} "
            "(the determinant construction never needs M < N)"
        )
    entries = coeffs.entries if isinstance(coeffs, CoeffSequence) else tuple(coeffs)
    if len(entries) < m + n + 1:
        raise InputError(
            f"[{m}/{n}] needs series coefficients through f_{m + n}, "
            f"got {len(entries)}"
        )

    def f(j):
        if j < 0:
            return mpf(0)
        e = entries[j]
        return e if isinstance(e, mpf) else to_mpf(e, prec)

    degenerate = False
    with mp.workdps(prec):
        if n == 0:
            b = [mpf(1)]
        else:
            g = mp_matrix(n, n)
            rhs = mp_matrix(n, 1)
            for i in range(1, n + 1):
                for k in range(1, n + 1):
                    g[i - 1, k - 1] = f(m + i - k)
                rhs[i - 1] = -f(m + i)
            try:
                sol = lu_solve(g, rhs)
                b = [mpf(1)] + [sol[i] for i in range(n)]
            except ZeroDivisionError:
                degenerate = True
                gf = np.array([[float(g[i, k]) for k in range(n)] for i in range(n)])
                rf = np.array([float(rhs[i]) for i in range(n)])
                sol, *_ = np.linalg.lstsq(gf, rf, rcond=None)
                b = [mpf(1)] + [mpf(float(x)) for x in sol]
        a = []
        for j in range(m + 1):
            acc = mpf(0)
            for k in range(0, min(j, n) + 1):
                acc += b[k] * f(j - k)
            a.append(acc)
        poles = _real_positive_roots(b)
    return PadeApproximant(
        numerator=tuple(a),
        denominator=tuple(b),
        order=(m, n),
        precision=prec,
        poles=tuple(poles),
        degenerate=degenerate,
    )


def _real_positive_roots(b) -> list:
    """Real positive zeros of the denominator, ascending, via a float
    companion matrix (pole locations never need many digits) followed by
    one high-precision Newton polish."""
    coeffs = [float(x) for x in b]
    while coeffs and coeffs[-1] == 0.0:
        coeffs.pop()
    if len(coeffs) < 2:
        return []
    roots = np.roots(list(reversed(coeffs)))
    out = []
    for r in roots:
        if abs(r.imag) > 1e-9 * max(1.0, abs(r.real)) or r.real <= 0:
            continue
        z = mpf(float(r.real))
        for _ in range(3):
            val = _horner(b, z)
            dval = _horner(_diff(tuple(b)), z)
            if dval == 0:
                break
            z = z - val / dval
        out.append(z)
    return sorted(out)


def taylor_of_pade(approx: PadeApproximant, upto: int) -> list:
    """Re-expansion coefficients t_0..t_upto of the approximant; matching
    t_j == f_j for j <= M+N is the defining property, and at a Hankel
    root the match extends one order further."""
    a, b = approx.numerator, approx.denominator
    m, n = approx.order
    with mp.workdps(approx.precision):
        t = []
        for j in range(upto + 1):
            acc = a[j] if j <= m else mpf(0)
            for k in range(1, min(j, n) + 1):
                acc -= b[k] * t[j - k]
            t.append(acc / b[0])
    return t


def eigenfunction_eval(approx: PadeApproximant, s: int, x, prec: int | None = None):
    """psi(x) = x^s exp(-int_0^x t R(t^2) dt), parity applied for x < 0.

    Refuses |x| at or beyond the first real positive pole of R: past it
    the integral silently crosses a singularity and means nothing."""
    if s not in (0, 1):
        raise InputError(f"parity must be 0 or 1, got {s!r}")
    prec = approx.precision if prec is None else require_precision(prec)
    with mp.workdps(prec):
        xv = to_mpf(x, prec)
        ax = abs(xv)
        radius = approx.pole_radius
        if radius is not None and ax >= radius:
            raise PoleError(
                f"|x| = {ax} reaches the approximant's pole at x = {radius}; "
                "the reconstruction is only valid inside"
            )
        if ax == 0:
            return mpf(1) if s == 0 else mpf(0)
        integral = mp.quad(lambda t: t * approx.value(t * t), [0, ax])
        body = (ax**s) * mp.e ** (-integral)
        if xv < 0 and s == 1:
            return -body
        return body


def residual_profile(
    pot: PotentialSpec, approx: PadeApproximant, s: int, energy, xs, prec: int | None = None
) -> list[tuple]:
    """Pointwise |psi''/psi - V + E| along ``xs`` (x = 0 excluded).

    The log-derivative identity used here has the 1/x^2 terms cancelled
    algebraically, so the profile is finite all the way to the origin and
    its growth marks exactly where the rational approximant stops
    solving the equation."""
    if s not in (0, 1):
        raise InputError(f"parity must be 0 or 1, got {s!r}")
    prec = approx.precision if prec is None else require_precision(prec)
    out = []
    with mp.workdps(prec):
        e = to_mpf(energy, prec)
        for x in xs:
            xv = to_mpf(x, prec)
            if xv == 0:
                raise InputError("x = 0 carries no information; drop it from xs")
            z = xv * xv
            r = approx.value(z)
            rp = approx.derivative(z)
            log_second = -(2 * s + 1) * r - 2 * z * rp + z * r * r
            v = _potential_value(pot, xv, prec)
            out.append((xv, abs(log_second - v + e)))
    return out


def _potential_value(pot: PotentialSpec, x, prec: int):
    """V(x) as an mpf: exact Horner for polynomial tails, the closed
    cosh form for the Poschl-Teller well."""
    with mp.workdps(prec):
        if pot.name == "mpt":
            lam = pot.param("lambda")
            strength = lam * (lam - 1)
            c = mp.cosh(x)
            return -(mpf(strength.numerator) / strength.denominator) / (c * c)
        if not pot.exact_tail:
            raise InputError(f"no closed form to evaluate {pot.name!r} pointwise")
        z = x * x
        acc = mpf(0)
        for c in reversed(pot.coeffs):
            acc = acc * z + mpf(c.numerator) / c.denominator
        return acc * z + mpf(pot.v0.numerator) / pot.v0.denominator

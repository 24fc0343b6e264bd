"""Expectation values without wavefunctions.

For H(beta) = -d^2/dx^2 + V + beta*A the derivative dE/dbeta at beta = 0
is the expectation value of A in the corresponding eigenstate.  The
eigenvalue is pinned implicitly by the determinant condition
H(E, beta) = 0, so the slope is

    dE/dbeta = - (dH/dbeta) / (dH/dE),

and both partials come out of a single dual-number determinant
evaluation with tangents seeded by the perturbed potential's exact
coefficient slopes dV_j/dbeta = A_j.  A constant term A_0 bypasses the
determinant entirely: it shifts every eigenvalue by beta*A_0, so it
contributes exactly A_0 to the slope.

The quotient is certified like a root is: re-evaluate with extra digits,
compare, escalate on disagreement.  At a degenerate determinant root
dH/dE sits at the noise floor and the slope is 0/0; that is reported as
indeterminate rather than returned as garbage.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpf

from .errors import IndeterminateError, InputError, PrecisionError
from .hankel import GUARD_PAD, HankelSpec, det_dual_pair
from .numerics import agreement_digits, to_mpf
from .potential import PotentialSpec, perturbed, shift_constant
from .solver import RootRecord, SolveOptions, find_root_near

_OBSERVABLE_PARAM = "beta"


@dataclass(frozen=True)
class ExpectationValue:
    """A certified expectation value ⟨A⟩ at one determinant root."""

    value: mpf
    certified_digits: int
    precision: int
    spec: HankelSpec


def _as_observable(observable) -> list[Fraction]:
    coeffs = [
        c if isinstance(c, Fraction) else Fraction(c) if isinstance(c, int) else None
        for c in observable
    ]
    if not coeffs or any(c is None for c in coeffs):
        raise InputError(
            "observable must be a nonempty list of exact rationals A_0, A_1, ... "
            "(coefficients of 1, x^2, x^4, ...)"
        )
    return coeffs


def expectation(
    pot: PotentialSpec,
    record: RootRecord,
    observable,
    options: SolveOptions | None = None,
) -> ExpectationValue:
    """⟨A⟩ for the state whose determinant root is ``record``.

    ``observable`` lists A_0, A_1, ... for A = A_0 + A_1 x^2 + A_2 x^4
    + ...; odd powers are absent by symmetry (their expectation vanishes
    for parity eigenstates).  The certified digits are capped by the
    root's own certificate: a slope cannot be more trustworthy than the
    point it is evaluated at.
    """
    opts = options or SolveOptions()
    coeffs = _as_observable(observable)
    if pot.v0 != 0:
        raise InputError("remove the constant term first (shift_constant)")
    spec = record.spec
    pert = perturbed(pot, coeffs, beta=0)
    a0 = coeffs[0]
    prec = opts.start_precision(spec.dimension)
    cap = opts.cap()
    target = min(opts.target_digits, record.certified_digits)
    best = None
    while True:
        with mp.workdps(prec + GUARD_PAD + 10):
            hi, lo = det_dual_pair(pert, record.root, spec, prec, param=_OBSERVABLE_PARAM)
            noise_de = abs(hi.d_energy - lo.d_energy)
            if abs(hi.d_energy) <= 4 * noise_de:
                raise IndeterminateError(
                    "dH/dE is indistinguishable from noise at this root "
                    "(degenerate root): the expectation value is 0/0 here; "
                    "increase the dimension D"
                )
            slope_hi = -hi.d_param / hi.d_energy
            slope_lo = -lo.d_param / lo.d_energy
            agreed = agreement_digits(slope_hi, slope_lo, max(mpf(1), abs(slope_hi)))
            value = slope_hi + mpf(a0.numerator) / a0.denominator
        agreed = min(agreed, record.certified_digits)
        if best is None or agreed > best[1]:
            best = (value, agreed, prec)
        if agreed >= target:
            return ExpectationValue(value, agreed, prec, spec)
        next_prec = prec + max(prec // 2, GUARD_PAD)
        if next_prec > cap:
            raise PrecisionError(
                f"expectation value certified only {best[1]} of {target} digits "
                f"at the precision cap {cap}"
            )
        prec = next_prec


def energy_slope_scan(
    pot: PotentialSpec,
    parity: int,
    dimension: int,
    displacement: int,
    observable,
    betas,
    seed,
    options: SolveOptions | None = None,
) -> list[tuple[Fraction, mpf]]:
    """Total eigenvalues E(beta) of V + beta*A on a grid of exact betas.

    The workhorse behind finite-difference cross-checks of
    :func:`expectation`: each beta's root is refined from the previous
    one (continuation in beta), and the returned energies include the
    exact beta*A_0 constant so a difference quotient estimates the full
    dE/dbeta.
    """
    opts = options or SolveOptions()
    coeffs = _as_observable(observable)
    if pot.v0 != 0:
        raise InputError("remove the constant term first (shift_constant)")
    values = []
    guess = to_mpf(seed, 40)
    for raw in betas:
        beta = raw if isinstance(raw, Fraction) else Fraction(raw)
        pert = perturbed(pot, coeffs, beta=beta)
        flat, shift = shift_constant(pert)
        spec = HankelSpec(dimension, displacement, parity)
        rec = find_root_near(flat, spec, guess, opts)
        guess = rec.root
        with mp.workdps(rec.precision + 10):
            total = rec.root + mpf(shift.numerator) / shift.denominator
        values.append((beta, total))
    return values

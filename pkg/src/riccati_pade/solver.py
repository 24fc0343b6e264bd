"""Root finding, sequence tracking, bounds, and convergence rates.

A determinant root at fixed (D, d) is only an approximation; the method's
output is the sequence of roots followed through increasing dimension D,
which converges to an eigenvalue exponentially fast.  Near an eigenvalue
the determinant develops a cluster of almost-degenerate roots (one per
parallel sequence), so jumping straight to a large D with a coarse seed
finds the wrong cluster member.  The reliable procedure, implemented by
:func:`track_sequence`, is continuation: start at small D, let the root
walk inward, and seed each dimension with the previous root.

Newton iteration uses exact dual-number derivatives of the determinant;
finite differences are useless here because inside a root cluster the
determinant's value is many orders below its surrounding scale and any
subtractive derivative estimate drowns in rounding noise long before the
value itself does.  Every accepted root carries a certificate: the
determinant and its derivative are re-evaluated with extra digits, the
difference gives an honest noise level, and the certified digit count is
derived from (residual + noise) / |dH/dE|.  If the certificate falls
short, working precision escalates by half until a cap.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from mpmath import mp, mpf

from .errors import (
    ContinuationLostError,
    ConvergenceError,
    InputError,
    PrecisionError,
)
from .hankel import GUARD_PAD, HankelSpec, det_dual, det_dual_pair, det_numeric
from .numerics import default_precision, require_precision, to_mpf
from .polynomials import Poly
from .potential import PotentialSpec

#: Environment variable overriding the precision-escalation ceiling.
PRECISION_CAP_ENV = "RPM_PRECISION_CAP"
_DEFAULT_CAP = 600


def _precision_cap() -> int:
    raw = os.environ.get(PRECISION_CAP_ENV)
    if raw is None:
        return _DEFAULT_CAP
    try:
        cap = int(raw)
    except ValueError as exc:
        raise InputError(f"{PRECISION_CAP_ENV} must be an integer, got {raw!r}") from exc
    if cap < 40:
        raise InputError(f"{PRECISION_CAP_ENV} must be >= 40, got {cap}")
    return cap


@dataclass(frozen=True)
class SolveOptions:
    """Knobs for root refinement and tracking.

    ``target_digits`` is what the certificate must reach.  ``precision``
    fixes the starting working precision (default: the dimension-based
    policy).  ``window`` is the continuation acceptance radius around the
    previous root (default: 5% of its magnitude, at least 10^-3).
    ``gap_stop`` lets a bounds run finish early once the bracket is
    relatively tighter than this.
    """

    target_digits: int = 20
    precision: int | None = None
    precision_cap: int | None = None
    max_iterations: int = 160
    window: object | None = None
    grid_points: int = 200
    gap_stop: object | None = None

    def cap(self) -> int:
        return self.precision_cap if self.precision_cap is not None else _precision_cap()

    def start_precision(self, dimension: int) -> int:
        p = self.precision if self.precision is not None else default_precision(dimension)
        return require_precision(min(p, self.cap()))


@dataclass(frozen=True)
class RootRecord:
    """One certified determinant root.

    ``certified_digits`` counts significant digits of the root backed by
    the noise analysis, never more than were asked for.  ``residual`` is
    |H(root)| at the certifying precision and ``scale`` the determinant's
    magnitude a distance 0.1 away, so residual/scale shows how deep the
    root was driven.  ``multiple_root`` flags a derivative
    indistinguishable from noise (degenerate root; digits then come from
    the final Newton step size).
    """

    root: mpf
    certified_digits: int
    residual: mpf
    derivative: mpf
    noise: mpf
    precision: int
    iterations: int
    multiple_root: bool
    spec: HankelSpec


@dataclass(frozen=True)
class RootSequence:
    """A root followed through increasing dimension at fixed (d, s)."""

    potential: PotentialSpec
    parity: int
    displacement: int
    entries: tuple[tuple[int, RootRecord], ...]

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def dimensions(self) -> list[int]:
        return [d for d, _ in self.entries]

    def record(self, dimension: int) -> RootRecord:
        for d, rec in self.entries:
            if d == dimension:
                return rec
        raise InputError(f"no entry for dimension {dimension}")

    @property
    def final(self) -> RootRecord:
        return self.entries[-1][1]


@dataclass(frozen=True)
class BoundsResult:
    """Bracketing pair of sequences: d = 0 approaches the eigenvalue from
    below, d = 1 from above (within the certified accuracy of each root).
    ``gaps`` holds (D, upper - lower) for dimensions present in both."""

    lower: RootSequence
    upper: RootSequence
    gaps: tuple[tuple[int, mpf], ...]


@dataclass(frozen=True)
class RateFit:
    """Least-squares fit of gap(D) = amplitude * exp(-rate * D).

    ``log10_slope`` is the same decay expressed as decimal digits gained
    per unit D (negative).  ``residual`` is the rms misfit of ln(gap).
    """

    amplitude: float
    rate: float
    log10_slope: float
    residual: float
    points: int


class _Stalled(Exception):
    """Internal: Newton stopped contracting at its noise floor."""

    def __init__(self, energy, radius, iterations):
        self.energy = energy
        self.radius = radius
        self.iterations = iterations


def _refine(pot, spec, guess, prec, opts):
    """Newton with dual derivatives; returns (root, iterations, last_step)."""
    with mp.workdps(prec + 10):
        e = to_mpf(guess, prec + 10)
        tol = mpf(10) ** (-opts.target_digits)
        escape = 10 * max(mpf(1), abs(e))
        origin = e
        steps = []
        for it in range(1, opts.max_iterations + 1):
            h = det_dual(pot, e, spec, prec)
            if h.d_energy == 0:
                if h.value == 0:
                    return e, it, mpf(0)
                raise ConvergenceError(
                    f"determinant derivative vanished at E={e} (dim {spec.dimension})"
                )
            step = -h.value / h.d_energy
            cap = mpf("0.5") * max(mpf(1), abs(e))
            if abs(step) > cap:
                step = cap if step > 0 else -cap
            e = e + step
            if abs(e - origin) > escape:
                raise ConvergenceError(
                    f"iterates escaped the search region around E={origin} "
                    f"(dim {spec.dimension})"
                )
            rel = abs(step) / max(mpf(1), abs(e))
            steps.append(rel)
            if rel < tol:
                return e, it, abs(step)
            # Stagnation: linear convergence (degenerate roots) keeps
            # halving the step, so only flag a stall when the recent best
            # stops beating the earlier best; that is the noise floor.
            if it >= 12 and rel < mpf("1e-6"):
                recent = min(steps[-6:])
                before = min(steps[:-6])
                if recent >= before / 2:
                    raise _Stalled(e, abs(step), it)
        raise ConvergenceError(
            f"no convergence within {opts.max_iterations} iterations "
            f"(dim {spec.dimension}, last relative step {steps[-1] if steps else None})"
        )


def _certify(pot, spec, root, prec, opts, stall_radius=None, iterations=0):
    """Noise-based certificate for an accepted root."""
    with mp.workdps(prec + GUARD_PAD + 10):
        hi, lo = det_dual_pair(pot, root, spec, prec)
        noise_v = abs(hi.value - lo.value)
        noise_d = abs(hi.d_energy - lo.d_energy)
        deriv = abs(hi.d_energy)
        residual = abs(hi.value)
        scale = max(mpf(1), abs(root))
        multiple = deriv <= 4 * noise_d
        if multiple:
            if residual == 0 and noise_v == 0:
                # the point annihilates the determinant exactly at both
                # precisions; it is a root to full working accuracy even
                # though the derivative gives no leverage
                err = mpf(0)
            else:
                err = 2 * stall_radius if stall_radius is not None else scale
        else:
            err = (residual + noise_v) / deriv
        if err == 0:
            digits = prec
        else:
            rel = err / scale
            digits = int(mp.floor(-mp.log10(rel))) if rel < 1 else 0
        digits = max(0, min(digits, prec))
    return RootRecord(
        root=root,
        certified_digits=digits,
        residual=residual,
        derivative=deriv,
        noise=noise_v,
        precision=prec,
        iterations=iterations,
        multiple_root=multiple,
        spec=spec,
    )


def find_root_near(pot, spec: HankelSpec, guess, options: SolveOptions | None = None) -> RootRecord:
    """Refine ``guess`` to a certified determinant root.

    Newton first; if it stalls at a noise floor the stall radius becomes
    the certificate (degenerate roots converge linearly and stop
    contracting at the noise-limited multiplicity radius).  When the
    certificate misses ``target_digits`` the working precision escalates
    by half, up to the cap, reusing the best root so far as the seed.
    """
    opts = options or SolveOptions()
    prec = opts.start_precision(spec.dimension)
    cap = opts.cap()
    seed = guess
    best: RootRecord | None = None
    last_error: Exception | None = None
    while True:
        try:
            try:
                root, iters, last_step = _refine(pot, spec, seed, prec, opts)
                rec = _certify(pot, spec, root, prec, opts, iterations=iters)
            except _Stalled as st:
                rec = _certify(
                    pot, spec, st.energy, prec, opts,
                    stall_radius=st.radius, iterations=st.iterations,
                )
        except ConvergenceError as exc:
            rec = None
            last_error = exc
        if rec is not None:
            if rec.certified_digits >= opts.target_digits:
                return rec
            if best is None or rec.certified_digits > best.certified_digits:
                best = rec
            seed = rec.root
        next_prec = prec + max(prec // 2, GUARD_PAD)
        if next_prec > cap:
            if rec is not None or best is not None:
                got = (rec or best).certified_digits
                raise PrecisionError(
                    f"certified only {got} of {opts.target_digits} digits at the "
                    f"precision cap {cap} (dim {spec.dimension}); raise "
                    f"{PRECISION_CAP_ENV} or lower target_digits"
                )
            raise ConvergenceError(
                f"no root found near {guess} up to the precision cap {cap} "
                f"(dim {spec.dimension})"
            ) from last_error
        prec = next_prec


def _continuation_window(opts: SolveOptions, around) -> mpf:
    if opts.window is not None:
        return abs(to_mpf(opts.window, 30))
    return max(mpf("1e-3"), mpf("0.05") * max(mpf(1), abs(around)))


def track_sequence(
    pot,
    s: int,
    d: int,
    dimensions,
    seed,
    options: SolveOptions | None = None,
    truncate_on_loss: bool = False,
) -> RootSequence:
    """Follow one root through ``dimensions`` (increasing), seeding each
    dimension with the previous root.

    Dimensions before the sequence exists are skipped silently: deep
    wells have no root near the seed at small D (the sequence starts
    later), detected by the refined root landing outside the continuation
    window.  Once the chain has started, losing it raises
    :class:`ContinuationLostError` rather than silently switching roots;
    with ``truncate_on_loss`` the chain built so far is returned instead
    (transient roots at small D genuinely die out, and a survey of
    sequences should report them as short chains, not abort).
    """
    opts = options or SolveOptions()
    dims = list(dimensions)
    if not dims or any(
        not isinstance(x, int) or x < 1 for x in dims
    ) or sorted(dims) != dims:
        raise InputError("dimensions must be an increasing list of ints >= 1")
    origin = to_mpf(seed, 40)
    prev = origin
    entries: list[tuple[int, RootRecord]] = []
    for dim in dims:
        spec = HankelSpec(dim, d, s)
        for attempt in (0, 1):
            rec, cause = None, None
            try:
                cand = find_root_near(pot, spec, prev, opts)
            except (ConvergenceError, PrecisionError) as exc:
                reason = f"lost the root chain at dimension {dim}: {exc}"
                cause = exc
            else:
                window = _continuation_window(opts, prev)
                if abs(cand.root - prev) <= window:
                    rec = cand
                    break
                reason = (
                    f"root jumped by {float(abs(cand.root - prev)):.3g} at "
                    f"dimension {dim}, outside the continuation window "
                    f"{float(window):.3g}"
                )
            if not entries:
                break
            # a lone first record is provisional: a root accepted while
            # the sequence is still traveling fast between dimensions may
            # not continue, so drop it and retry this dimension from the
            # original seed instead of declaring the chain lost
            if len(entries) == 1 and attempt == 0 and not truncate_on_loss:
                entries.clear()
                prev = origin
                continue
            if truncate_on_loss:
                break
            raise ContinuationLostError(reason) from cause
        if rec is None:
            if entries and truncate_on_loss:
                break
            continue
        entries.append((dim, rec))
        prev = rec.root
    if not entries:
        raise ConvergenceError(
            f"no determinant root entered the continuation window around "
            f"{to_mpf(seed, 20)} at any requested dimension"
        )
    return RootSequence(pot, s, d, tuple(entries))


def scan_roots(pot, spec: HankelSpec, lo, hi, options: SolveOptions | None = None) -> list[mpf]:
    """Certified roots found by a sign-change scan of H(E) on [lo, hi].

    A uniform grid (``grid_points`` intervals) locates sign changes; each
    bracket midpoint seeds Newton refinement.  Roots of even multiplicity
    (no sign change) are invisible here by design; this is a seeding aid,
    not a complete root isolator.
    """
    opts = options or SolveOptions()
    prec = opts.start_precision(spec.dimension)
    a = to_mpf(lo, prec)
    b = to_mpf(hi, prec)
    if not a < b:
        raise InputError(f"empty scan interval [{a}, {b}]")
    n = max(8, opts.grid_points)
    roots: list[mpf] = []
    with mp.workdps(prec):
        h = (b - a) / n
        values = [det_numeric(pot, a + k * h, spec, prec) for k in range(n + 1)]
        for k in range(n):
            va, vb = values[k], values[k + 1]
            if va == 0:
                candidate = a + k * h
            elif va * vb < 0:
                candidate = a + (k + mpf("0.5")) * h
            else:
                continue
            try:
                rec = find_root_near(pot, spec, candidate, opts)
            except (ConvergenceError, PrecisionError):
                continue
            if rec.root < a - h or rec.root > b + h:
                continue
            if any(abs(rec.root - r) <= mpf(10) ** (-opts.target_digits // 2) * max(1, abs(r)) for r in roots):
                continue
            roots.append(rec.root)
    return sorted(roots)


def track_sequences_in_window(
    pot, s: int, d: int, dimensions, lo, hi, options: SolveOptions | None = None
) -> list[RootSequence]:
    """Every root sequence whose first-dimension root lies in [lo, hi]:
    scan the smallest dimension for sign changes, then track each seed
    through the remaining dimensions.  Chains that die out early are
    returned truncated.  Sorted by final energy."""
    opts = options or SolveOptions()
    dims = list(dimensions)
    if not dims:
        raise InputError("need at least one dimension")
    first = HankelSpec(dims[0], d, s)
    seeds = scan_roots(pot, first, lo, hi, opts)
    out = []
    for seed in seeds:
        out.append(track_sequence(pot, s, d, dims, seed, opts, truncate_on_loss=True))
    out.sort(key=lambda seq: seq.final.root)
    return out


def bounds(
    pot, s: int, dimensions, seed, options: SolveOptions | None = None
) -> BoundsResult:
    """Track the d = 0 (from below) and d = 1 (from above) sequences of
    the same state side by side and report the bracket width per D.

    With ``gap_stop`` set in the options, the run finishes as soon as the
    relative bracket width drops under it (both chains already started).
    """
    opts = options or SolveOptions()
    dims = list(dimensions)
    if sorted(dims) != dims or not dims:
        raise InputError("dimensions must be an increasing nonempty list")
    origin = to_mpf(seed, 40)
    prev = {0: origin, 1: origin}
    chains: dict[int, list[tuple[int, RootRecord]]] = {0: [], 1: []}
    gaps: list[tuple[int, mpf]] = []
    stop = None if opts.gap_stop is None else abs(to_mpf(opts.gap_stop, 40))
    for dim in dims:
        for d in (0, 1):
            spec = HankelSpec(dim, d, s)
            for attempt in (0, 1):
                rec, cause = None, None
                try:
                    cand = find_root_near(pot, spec, prev[d], opts)
                except (ConvergenceError, PrecisionError) as exc:
                    reason = f"lost the d={d} chain at dimension {dim}: {exc}"
                    cause = exc
                else:
                    window = _continuation_window(opts, prev[d])
                    if abs(cand.root - prev[d]) <= window:
                        rec = cand
                        break
                    reason = (
                        f"d={d} root left the continuation window at dimension {dim}"
                    )
                if not chains[d]:
                    break
                # same provisional rule as track_sequence: a single-record
                # chain may have latched onto a root mid-travel, so retry
                # this dimension from the original seed before giving up
                if len(chains[d]) == 1 and attempt == 0:
                    chains[d].clear()
                    prev[d] = origin
                    continue
                raise ContinuationLostError(reason) from cause
            if rec is None:
                continue
            chains[d].append((dim, rec))
            prev[d] = rec.root
        if chains[0] and chains[1] and chains[0][-1][0] == dim == chains[1][-1][0]:
            with mp.workdps(60):
                gap = chains[1][-1][1].root - chains[0][-1][1].root
            gaps.append((dim, gap))
            if stop is not None and abs(gap) < stop * max(mpf(1), abs(prev[0])):
                break
    if not chains[0] or not chains[1]:
        raise ConvergenceError(
            f"bracketing failed: found {len(chains[0])} lower and "
            f"{len(chains[1])} upper roots near {to_mpf(seed, 20)}"
        )
    lower = RootSequence(pot, s, 0, tuple(chains[0]))
    upper = RootSequence(pot, s, 1, tuple(chains[1]))
    return BoundsResult(lower, upper, tuple(gaps))


def scaling_limit(det_poly, weight_num: int = 1, weight_den: int = 3):
    """Infinite-coupling limit of a bivariate determinant polynomial.

    For a term c * E^a * g^b of ``det_poly`` (a polynomial in E whose
    coefficients are polynomials in a parameter g), substituting
    E = W * g^(weight_num/weight_den) and letting g grow without bound
    keeps exactly the terms maximizing a*(weight_num/weight_den) + b.
    The result is the univariate polynomial in W they form; its positive
    real roots are the limits of g^(-weight_num/weight_den) * E(g) along
    the corresponding root branches.
    """
    if det_poly.is_zero:
        raise InputError("the zero polynomial has no scaling limit")
    if weight_den <= 0 or weight_num <= 0:
        raise InputError("scaling weights must be positive integers")
    best = None
    picks = {}
    for a, coeff in det_poly.terms():
        inner = coeff if isinstance(coeff, Poly) else Poly([coeff])
        for b, c in inner.terms():
            w = Fraction(a * weight_num, weight_den) + b
            if best is None or w > best:
                best = w
                picks = {a: c}
            elif w == best:
                picks[a] = c
    top = max(picks)
    return Poly([picks.get(k, Fraction(0)) for k in range(top + 1)])


def fit_rate(gap_points) -> RateFit:
    """Fit ln|gap| against D by least squares.

    ``gap_points`` is an iterable of (D, gap); zero gaps are rejected
    (nothing to fit on a log scale).  Two points make a line; more make a
    fit with a reported rms residual.
    """
    ds = []
    logs = []
    for dim, gap in gap_points:
        g = abs(to_mpf(gap, 40))
        if g == 0:
            raise InputError(f"gap at dimension {dim} is exactly zero; cannot fit")
        ds.append(float(dim))
        with mp.workdps(40):
            logs.append(float(mp.log(g)))
    if len(ds) < 2:
        raise InputError("need at least two (D, gap) points to fit a rate")
    slope, intercept = np.polyfit(np.array(ds), np.array(logs), 1)
    pred = slope * np.array(ds) + intercept
    resid = float(np.sqrt(np.mean((np.array(logs) - pred) ** 2)))
    return RateFit(
        amplitude=float(np.exp(intercept)),
        rate=float(-slope),
        log10_slope=float(slope / math.log(10)),
        residual=resid,
        points=len(ds),
    )

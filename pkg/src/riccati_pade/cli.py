"""Command-line front end.

Every command prints a JSON document (machine-friendly, stable key
order) or RFC-4180 CSV rows (plot-friendly) to stdout or ``--out``.
High-precision energies are always emitted as decimal strings with an
explicit significant-digit count, rounded half-even, so a number's
printed length is itself the accuracy claim.  Exit codes: 0 success,
2 a computation failed to converge, 3 the input was invalid.

Potentials are given in a small text language::

    harmonic | quartic | x2x4:lambda=<r> | dwell:beta=<r>
    | mpt:lambda=<r> | poly:<r1>,<r2>,...

with ``<r>`` an exact rational (``3``, ``-5/2``, ``0.25``).  For
``hankel-poly`` only, a parameter may be a bare identifier (e.g.
``x2x4:lambda=g``) to request the exact bivariate polynomial.

Wells with V(0) != 0 are shifted internally so the series recurrence
sees a zero constant term; reported energies always include the shift
again (done in exact rational arithmetic, never by rounding).
"""

from __future__ import annotations

import csv
import functools
import io
import json
import re
from dataclasses import replace
from fractions import Fraction
from importlib import metadata

import click
import numpy as np
from mpmath import mp, mpf

from .errors import (
    ContinuationLostError,
    ConvergenceError,
    IndeterminateError,
    InputError,
    NumericalError,
    PoleError,
    PrecisionError,
    RpmError,
)
from .hankel import HankelSpec, det_symbolic
from .numerics import format_significant, parse_rational, to_fraction, to_mpf
from .observables import expectation
from .oracle import oracle_eigenvalues
from .polynomials import format_poly
from .potential import parse_potential, series_coefficients, shift_constant
from .riccati import coeffs_numeric
from .solver import (
    SolveOptions,
    bounds,
    fit_rate,
    track_sequence,
    track_sequences_in_window,
    scan_roots,
)
from .wavefunction import (
    default_orders,
    eigenfunction_eval,
    pade_from_coeffs,
    residual_profile,
)

try:
    _VERSION = metadata.version("riccati-pade")
except metadata.PackageNotFoundError:  # editable checkout without metadata
    _VERSION = "0.0.0"

# A malformed command line is an input error for exit-code purposes.
click.UsageError.exit_code = 3


class _BadInput(click.ClickException):
    exit_code = 3


class _Failed(click.ClickException):
    exit_code = 2


def _guarded(f):
    @functools.wraps(f)
    def wrapper(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except InputError as exc:
            raise _BadInput(str(exc)) from exc
        except (
            ConvergenceError,
            PrecisionError,
            ContinuationLostError,
            IndeterminateError,
            NumericalError,
            PoleError,
        ) as exc:
            raise _Failed(str(exc)) from exc
        except RpmError as exc:
            raise _Failed(str(exc)) from exc

    return wrapper


def _configure(ctx, _param, path):
    """Eager ``--config`` callback: JSON file values become defaults,
    explicit flags still win."""
    if path is None:
        return
    try:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise click.UsageError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise click.UsageError(f"config {path} must be a JSON object")
    merged = dict(ctx.default_map or {})
    # config keys use the flag spelling; "format" is bound to the
    # parameter "fmt" to avoid shadowing the builtin
    alias = {"format": "fmt"}
    for key, value in data.items():
        name = str(key).replace("-", "_")
        merged[alias.get(name, name)] = value
    ctx.default_map = merged


def _output_options(f):
    f = click.option(
        "--config",
        type=click.Path(exists=True, dir_okay=False),
        callback=_configure,
        is_eager=True,
        expose_value=False,
        help="JSON file of option defaults (flags override).",
    )(f)
    f = click.option(
        "--out",
        type=click.Path(dir_okay=False, writable=True),
        default=None,
        help="Write to this file instead of stdout.",
    )(f)
    f = click.option(
        "--format",
        "fmt",
        type=click.Choice(["json", "csv"]),
        default="json",
        show_default=True,
        help="Output format.",
    )(f)
    return f


def _emit(fmt, out, inputs, rows, meta, columns):
    """Serialize and write. ``rows`` is a list of dicts; ``columns`` fixes
    the CSV column order (JSON sorts keys instead)."""
    if fmt == "json":
        text = json.dumps(
            {"inputs": inputs, "results": rows, "meta": meta},
            indent=2,
            sort_keys=True,
        ) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\r\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow(["" if row.get(c) is None else str(row.get(c)) for c in columns])
        text = buf.getvalue()
    if out:
        with open(out, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    else:
        click.echo(text, nl=False)


def _meta(precision, shift=Fraction(0), **extra):
    meta = {"version": _VERSION, "precision": precision}
    if shift:
        meta["constant_shift"] = _frac_str(shift)
    meta.update(extra)
    return meta


def _frac_str(fr: Fraction) -> str:
    return str(fr.numerator) if fr.denominator == 1 else f"{fr.numerator}/{fr.denominator}"


def _potential_for(text, d, dmax):
    """Parse the potential with enough series coefficients for H_dmax^d."""
    need = d + 2 * dmax + 9
    return parse_potential(text, order=max(64, need))


def _parse_window(text):
    lo, sep, hi = text.partition(":")
    if not sep:
        raise InputError(f"window must be LO:HI, got {text!r}")
    return parse_rational(lo.strip()), parse_rational(hi.strip())


def _options(digits, precision, precision_cap, **kw):
    return SolveOptions(
        target_digits=digits + 2,
        precision=precision,
        precision_cap=precision_cap,
        **kw,
    )


def _resolve_seed(pot, shift, parity, seed, window, state, dmin, d, opts):
    """Seed energy in shifted coordinates, as an exact Fraction.

    Priority: explicit --seed (total energy), then a window scan at the
    smallest dimension (``state`` picks the k-th lowest root found), then
    the independent grid oracle (``state`` is the index within the parity
    sector).
    """
    if seed is not None:
        return parse_rational(seed) - shift
    if window is not None:
        lo, hi = _parse_window(window)
        roots = scan_roots(
            pot, HankelSpec(dmin, d, parity), lo - shift, hi - shift, opts
        )
        if len(roots) <= state:
            raise ConvergenceError(
                f"window scan at D={dmin} found {len(roots)} roots; "
                f"state index {state} is out of range"
            )
        return to_fraction(roots[state])
    total = _oracle_seed(pot, shift, parity, state)
    return Fraction(total) - shift


def _oracle_seed(pot, shift, parity, state):
    """Oracle seed for the ``state``-th level of the given parity sector,
    as a total (un-shifted) energy in double precision."""
    full = replace(pot, v0=shift) if shift else pot
    result = oracle_eigenvalues(full, parity=parity, k_max=state)
    return result.eigenvalues[state]


def _total(record, shift) -> Fraction:
    """Exact un-shifted energy; float rounding here would silently eat
    the digits the solver certified."""
    return to_fraction(record.root) + shift


def _energy_str(record, shift, digits):
    shown = max(1, min(digits, record.certified_digits))
    return format_significant(_total(record, shift), shown)


def _residual_str(record):
    with mp.workdps(10):
        return mp.nstr(record.residual, 3)


def _sequence_rows(seq, shift, digits, branch=None):
    rows = []
    for dim, rec in seq.entries:
        row = {
            "D": dim,
            "d": seq.displacement,
            "root": _energy_str(rec, shift, digits),
            "certified_digits": rec.certified_digits,
            "residual": _residual_str(rec),
        }
        if branch is not None:
            row["branch"] = branch
        rows.append(row)
    return rows


def _max_precision(*sequences):
    return max(rec.precision for seq in sequences for _, rec in seq.entries)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(_VERSION, prog_name="rpm")
def cli():
    """High-precision bound states of -psi'' + V(x) psi = E psi for
    symmetric V, via Hankel determinants of the series of the regularized
    logarithmic derivative."""


def _potential_option(f):
    return click.option(
        "--potential", required=True, help="Potential text, e.g. 'x2x4:lambda=1/2'."
    )(f)


def _parity_option(f):
    return click.option(
        "--parity",
        type=click.IntRange(0, 1),
        default=0,
        show_default=True,
        help="0 = even states, 1 = odd states.",
    )(f)


def _precision_options(f):
    f = click.option(
        "--precision",
        type=click.IntRange(20, 10000),
        default=None,
        help="Starting working precision in digits (default scales with D).",
    )(f)
    f = click.option(
        "--precision-cap",
        type=click.IntRange(30, 100000),
        default=None,
        help="Ceiling for precision escalation (or env RPM_PRECISION_CAP).",
    )(f)
    return f


def _seeding_options(f):
    f = click.option("--seed", default=None, help="Seed energy (total, exact rational/decimal).")(f)
    f = click.option("--window", default=None, help="Scan window LO:HI for seeding.")(f)
    f = click.option(
        "--state",
        type=click.IntRange(0, 64),
        default=0,
        show_default=True,
        help="Level index within the parity sector (oracle/window seeding).",
    )(f)
    return f


@cli.command()
@_potential_option
@_parity_option
@click.option("--d", type=click.IntRange(0, 8), default=0, show_default=True, help="Determinant displacement (0 gives lower bounds, 1 upper).")
@click.option("--dmin", type=click.IntRange(2, 64), default=2, show_default=True)
@click.option("--dmax", type=click.IntRange(2, 64), default=11, show_default=True)
@click.option("--digits", type=click.IntRange(1, 200), default=20, show_default=True, help="Significant digits to certify and print.")
@_seeding_options
@_precision_options
@_output_options
@_guarded
def solve(potential, parity, d, dmin, dmax, digits, seed, window, state, precision, precision_cap, fmt, out):
    """Track one determinant-root sequence from DMIN to DMAX and report
    every step; the last row is the converged answer."""
    if dmin > dmax:
        raise InputError(f"--dmin {dmin} exceeds --dmax {dmax}")
    pot = _potential_for(potential, d, dmax)
    pot0, shift = shift_constant(pot)
    opts = _options(digits, precision, precision_cap)
    seed0 = _resolve_seed(pot0, shift, parity, seed, window, state, dmin, d, opts)
    seq = track_sequence(pot0, parity, d, range(dmin, dmax + 1), seed0, opts)
    rows = _sequence_rows(seq, shift, digits)
    inputs = {
        "command": "solve", "potential": potential, "parity": parity, "d": d,
        "dmin": dmin, "dmax": dmax, "digits": digits, "seed": seed,
        "window": window, "state": state,
    }
    _emit(fmt, out, inputs, rows, _meta(_max_precision(seq), shift),
          ["D", "d", "root", "certified_digits", "residual"])


@cli.command()
@_potential_option
@_parity_option
@click.option("--d", type=click.IntRange(0, 8), default=0, show_default=True)
@click.option("--dmin", type=click.IntRange(2, 64), default=2, show_default=True)
@click.option("--dmax", type=click.IntRange(2, 64), default=8, show_default=True)
@click.option("--digits", type=click.IntRange(1, 200), default=20, show_default=True)
@_seeding_options
@_precision_options
@_output_options
@_guarded
def sequence(potential, parity, d, dmin, dmax, digits, seed, window, state, precision, precision_cap, fmt, out):
    """Track root sequences; with --window, every sequence starting in
    the window is followed and labeled by ascending final energy."""
    if dmin > dmax:
        raise InputError(f"--dmin {dmin} exceeds --dmax {dmax}")
    pot = _potential_for(potential, d, dmax)
    pot0, shift = shift_constant(pot)
    opts = _options(digits, precision, precision_cap)
    dims = range(dmin, dmax + 1)
    if window is not None:
        lo, hi = _parse_window(window)
        seqs = track_sequences_in_window(pot0, parity, d, dims, lo - shift, hi - shift, opts)
        if not seqs:
            raise ConvergenceError(f"no root sequences start inside {window}")
    else:
        seed0 = _resolve_seed(pot0, shift, parity, seed, None, state, dmin, d, opts)
        seqs = [track_sequence(pot0, parity, d, dims, seed0, opts)]
    rows = []
    for k, seq in enumerate(seqs):
        rows.extend(_sequence_rows(seq, shift, digits, branch=k))
    inputs = {
        "command": "sequence", "potential": potential, "parity": parity, "d": d,
        "dmin": dmin, "dmax": dmax, "digits": digits, "seed": seed,
        "window": window, "state": state,
    }
    _emit(fmt, out, inputs, rows, _meta(_max_precision(*seqs), shift),
          ["branch", "D", "d", "root", "certified_digits", "residual"])


@cli.command("bounds")
@_potential_option
@_parity_option
@click.option("--dmin", type=click.IntRange(2, 64), default=2, show_default=True)
@click.option("--dmax", type=click.IntRange(2, 64), default=11, show_default=True)
@click.option("--digits", type=click.IntRange(1, 200), default=20, show_default=True)
@click.option("--gap-stop", default=None, help="Stop once the relative bracket width falls below this (decimal or fraction, e.g. 1e-12).")
@_seeding_options
@_precision_options
@_output_options
@_guarded
def bounds_cmd(potential, parity, dmin, dmax, digits, gap_stop, seed, window, state, precision, precision_cap, fmt, out):
    """Bracket one eigenvalue between the lower (d=0) and upper (d=1)
    root sequences, dimension by dimension."""
    if dmin > dmax:
        raise InputError(f"--dmin {dmin} exceeds --dmax {dmax}")
    pot = _potential_for(potential, 1, dmax)
    pot0, shift = shift_constant(pot)
    opts = _options(
        digits, precision, precision_cap,
        gap_stop=None if gap_stop is None else parse_rational(gap_stop),
    )
    seed0 = _resolve_seed(pot0, shift, parity, seed, window, state, dmin, 0, opts)
    result = bounds(pot0, parity, range(dmin, dmax + 1), seed0, opts)
    lower = dict(result.lower.entries)
    upper = dict(result.upper.entries)
    rows = []
    for dim, gap in result.gaps:
        with mp.workdps(15):
            rows.append({
                "D": dim,
                "lower": _energy_str(lower[dim], shift, digits),
                "upper": _energy_str(upper[dim], shift, digits),
                "gap": mp.nstr(gap, 6),
            })
    inputs = {
        "command": "bounds", "potential": potential, "parity": parity,
        "dmin": dmin, "dmax": dmax, "digits": digits, "gap_stop": gap_stop,
        "seed": seed, "window": window, "state": state,
    }
    _emit(fmt, out, inputs, rows, _meta(_max_precision(result.lower, result.upper), shift),
          ["D", "lower", "upper", "gap"])


@cli.command()
@_potential_option
@_parity_option
@click.option("--dmin", type=click.IntRange(2, 64), default=2, show_default=True)
@click.option("--dmax", type=click.IntRange(2, 64), default=11, show_default=True)
@click.option("--digits", type=click.IntRange(1, 200), default=24, show_default=True)
@_seeding_options
@_precision_options
@_output_options
@_guarded
def rate(potential, parity, dmin, dmax, digits, seed, window, state, precision, precision_cap, fmt, out):
    """Fit the exponential narrowing gap(D) = A*exp(-k*D) of the bounds
    bracket; reports A, k, the base-10 slope, and the fit residual."""
    if dmin > dmax:
        raise InputError(f"--dmin {dmin} exceeds --dmax {dmax}")
    pot = _potential_for(potential, 1, dmax)
    pot0, shift = shift_constant(pot)
    opts = _options(digits, precision, precision_cap)
    seed0 = _resolve_seed(pot0, shift, parity, seed, window, state, dmin, 0, opts)
    result = bounds(pot0, parity, range(dmin, dmax + 1), seed0, opts)
    fit = fit_rate(result.gaps)
    rows = [{
        "amplitude": f"{fit.amplitude:.6g}",
        "rate": f"{fit.rate:.6g}",
        "log10_slope": f"{fit.log10_slope:.6g}",
        "rms_residual": f"{fit.residual:.3g}",
        "points": fit.points,
    }]
    inputs = {
        "command": "rate", "potential": potential, "parity": parity,
        "dmin": dmin, "dmax": dmax, "digits": digits, "seed": seed,
        "window": window, "state": state,
    }
    _emit(fmt, out, inputs, rows, _meta(_max_precision(result.lower, result.upper), shift),
          ["amplitude", "rate", "log10_slope", "rms_residual", "points"])


_IDENT_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


def _symbolic_potential(text):
    """Split a potential string whose single parameter value is a bare
    identifier into (spec at parameter 0, parameter name, display symbol);
    returns None when the parameter is numeric."""
    head, sep, rest = text.strip().partition(":")
    if not sep or "=" not in rest or "," in rest:
        return None
    key, _, value = rest.partition("=")
    key, value = key.strip(), value.strip()
    if not _IDENT_RE.match(value):
        return None
    spec = series_coefficients(head.strip(), {key: 0}, order=64)
    if not spec.param_affine:
        raise InputError(
            f"{head.strip()!r} does not depend on {key!r} affinely; "
            "the exact bivariate determinant is unavailable"
        )
    return spec, key, value


@cli.command("hankel-poly")
@_potential_option
@_parity_option
@click.option("--dim", "--D", "dim", type=click.IntRange(2, 8), default=2, show_default=True, help="Determinant dimension D.")
@click.option("--d", type=click.IntRange(0, 4), default=0, show_default=True)
@click.option("--monic/--raw", default=False, show_default=True, help="Divide by the leading coefficient before printing.")
@_output_options
@_guarded
def hankel_poly(potential, parity, dim, d, monic, fmt, out):
    """Exact determinant polynomial H_D^d as a polynomial in E (and in
    the model parameter when it is left symbolic, e.g. x2x4:lambda=g)."""
    shift = Fraction(0)
    symbolic = _symbolic_potential(potential)
    if symbolic is not None:
        pot, param, display = symbolic
    else:
        pot, param, display = _potential_for(potential, d, dim), None, None
        if pot.v0 != 0:
            # the polynomial is then in E - V(0); meta records the shift
            pot, shift = shift_constant(pot)
    spec = HankelSpec(dim, d, parity)
    poly = det_symbolic(pot, spec, param=param)
    if monic:
        poly = poly.monic()
    text = format_poly(poly, "E", display)
    rows = [{"D": dim, "d": d, "monic": monic, "polynomial": text}]
    inputs = {
        "command": "hankel-poly", "potential": potential, "parity": parity,
        "D": dim, "d": d, "monic": monic,
    }
    _emit(fmt, out, inputs, rows, _meta(0, shift, parameter=display or None),
          ["D", "d", "monic", "polynomial"])


@cli.command()
@_potential_option
@_parity_option
@click.option("--observable", required=True, help="A_0,A_1,... of A(x) = A_0 + A_1 x^2 + A_2 x^4 + ...")
@click.option("--dim", "--D", "dim", type=click.IntRange(2, 64), default=11, show_default=True, help="Dimension at which to evaluate.")
@click.option("--d", type=click.IntRange(0, 8), default=0, show_default=True)
@click.option("--dmin", type=click.IntRange(2, 64), default=2, show_default=True)
@click.option("--digits", type=click.IntRange(1, 200), default=18, show_default=True)
@_seeding_options
@_precision_options
@_output_options
@_guarded
def expect(potential, parity, observable, dim, d, dmin, digits, seed, window, state, precision, precision_cap, fmt, out):
    """Expectation value of an even polynomial observable in the tracked
    eigenstate, from the exact parameter-derivative of the determinant."""
    if dmin > dim:
        raise InputError(f"--dmin {dmin} exceeds --dim {dim}")
    coeffs = [parse_rational(c) for c in observable.split(",")]
    pot = _potential_for(potential, d, dim)
    pot0, shift = shift_constant(pot)
    opts = _options(digits, precision, precision_cap)
    seed0 = _resolve_seed(pot0, shift, parity, seed, window, state, dmin, d, opts)
    seq = track_sequence(pot0, parity, d, range(dmin, dim + 1), seed0, opts)
    rec = seq.final
    if seq.entries[-1][0] != dim:
        raise ConvergenceError(f"the root sequence did not reach D={dim}")
    value = expectation(pot0, rec, coeffs, opts)
    shown = max(1, min(digits, value.certified_digits))
    rows = [{
        "D": dim, "d": d,
        "root": _energy_str(rec, shift, digits),
        "value": format_significant(value.value, shown),
        "certified_digits": value.certified_digits,
    }]
    inputs = {
        "command": "expect", "potential": potential, "parity": parity,
        "observable": observable, "D": dim, "d": d, "dmin": dmin,
        "digits": digits, "seed": seed, "window": window, "state": state,
    }
    _emit(fmt, out, inputs, rows, _meta(value.precision, shift),
          ["D", "d", "root", "value", "certified_digits"])


@cli.command()
@_potential_option
@_parity_option
@click.option("--dim", "--D", "dim", type=click.IntRange(2, 64), default=11, show_default=True)
@click.option("--d", type=click.IntRange(0, 8), default=0, show_default=True)
@click.option("--dmin", type=click.IntRange(2, 64), default=2, show_default=True)
@click.option("--energy", default=None, help="Use this total energy instead of solving.")
@click.option("--digits", type=click.IntRange(1, 200), default=20, show_default=True)
@click.option("--xmax", default="2", show_default=True, help="Largest |x| of the profile (exact rational).")
@click.option("--points", type=click.IntRange(1, 100000), default=40, show_default=True)
@click.option("--pade-m", type=int, default=None, help="Numerator order override.")
@click.option("--pade-n", type=int, default=None, help="Denominator order override.")
@_seeding_options
@_precision_options
@_output_options
@_guarded
def wavefunction(potential, parity, dim, d, dmin, energy, digits, xmax, points, pade_m, pade_n, seed, window, state, precision, precision_cap, fmt, out):
    """Rational-reconstruction eigenfunction profile: x, psi(x), and the
    pointwise equation residual |psi''/psi - V + E|."""
    pot = _potential_for(potential, d, dim)
    pot0, shift = shift_constant(pot)
    opts = _options(digits, precision, precision_cap)
    spec = HankelSpec(dim, d, parity)
    if energy is not None:
        total = parse_rational(energy)
        prec = opts.start_precision(dim) + 10
        root = to_mpf(total - shift, prec)
        certified = digits
    else:
        seed0 = _resolve_seed(pot0, shift, parity, seed, window, state, dmin, d, opts)
        seq = track_sequence(pot0, parity, d, range(dmin, dim + 1), seed0, opts)
        rec = seq.final
        total = _total(rec, shift)
        root, prec, certified = rec.root, rec.precision, rec.certified_digits
    m, n = default_orders(spec)
    m = pade_m if pade_m is not None else m
    n = pade_n if pade_n is not None else n
    series = coeffs_numeric(pot0, parity, root, m + n + 2, prec)
    approx = pade_from_coeffs(series, m, n, prec)
    xm = parse_rational(xmax)
    if xm <= 0:
        raise InputError(f"--xmax must be positive, got {xmax!r}")
    radius = approx.pole_radius
    xs = [xm * Fraction(k, points) for k in range(1, points + 1)]
    truncated = False
    if radius is not None:
        keep = []
        with mp.workdps(prec):
            for x in xs:
                if to_mpf(x, prec) < radius:
                    keep.append(x)
                else:
                    truncated = True
        xs = keep
    # residual compares against the full V and the total E (consistent
    # pair; the internal shift cancels out of psi''/psi)
    profile = residual_profile(pot, approx, parity, to_mpf(total, prec), xs, prec)
    rows = [{"x": "0", "psi": "1" if parity == 0 else "0", "residual": None}]
    with mp.workdps(prec):
        for x, res in profile:
            psi = eigenfunction_eval(approx, parity, x, prec)
            rows.append({
                "x": format_significant(to_fraction(x), 10),
                "psi": format_significant(psi, min(digits, max(1, certified))),
                "residual": mp.nstr(res, 4),
            })
    inputs = {
        "command": "wavefunction", "potential": potential, "parity": parity,
        "D": dim, "d": d, "energy": energy, "digits": digits, "xmax": xmax,
        "points": points, "pade_m": m, "pade_n": n, "seed": seed,
        "window": window, "state": state,
    }
    meta = _meta(prec, shift,
                 energy_used=format_significant(total, max(1, min(digits, certified))),
                 degenerate=approx.degenerate,
                 pole_radius=None if radius is None else mp.nstr(radius, 8),
                 truncated_at_pole=truncated)
    _emit(fmt, out, inputs, rows, meta, ["x", "psi", "residual"])


@cli.command()
@_potential_option
@click.option("--parity", type=click.IntRange(0, 1), default=None, help="Restrict to one parity sector (default: both).")
@click.option("--kmax", type=click.IntRange(0, 32), default=3, show_default=True, help="Highest level index to report.")
@_output_options
@_guarded
def oracle(potential, parity, kmax, fmt, out):
    """Independent double-precision eigenvalues from grid diagonalization
    with Richardson refinement (about 10 reliable digits); useful for
    seeding and cross-checks, shares nothing with the determinant path."""
    pot = _potential_for(potential, 1, 4)
    result = oracle_eigenvalues(pot, parity=parity, k_max=kmax)
    rows = [
        {"index": i, "parity": p, "energy": f"{e:.12g}"}
        for i, (e, p) in enumerate(zip(result.eigenvalues, result.parities))
    ]
    inputs = {"command": "oracle", "potential": potential, "parity": parity, "kmax": kmax}
    meta = {
        "version": _VERSION,
        "method": result.method,
        "box": f"{result.box:.6g}",
        "points": result.points,
        "drift": f"{result.drift:.3g}",
    }
    _emit(fmt, out, inputs, rows, meta, ["index", "parity", "energy"])


@cli.command()
@click.option("--name", type=click.Choice(["spurious", "dw-e0e1"]), required=True)
@click.option("--dmax", type=click.IntRange(2, 64), default=None, help="Override the preset's largest dimension.")
@click.option("--digits", type=click.IntRange(1, 200), default=20, show_default=True)
@click.option("--betas", default="-1,-5,-10,-15", show_default=True, help="dw-e0e1 only: well depths to include.")
@_precision_options
@_output_options
@_guarded
def table(name, dmax, digits, betas, precision, precision_cap, fmt, out):
    """Reference tables: 'spurious' follows the two root sequences of the
    sech-squared well at lambda=3 (one converges to the true ground state,
    one to a scaled companion problem's); 'dw-e0e1' brackets the lowest
    two double-well states per depth."""
    if name == "spurious":
        rows, meta = _table_spurious(dmax or 8, digits, precision, precision_cap)
        columns = ["D", "E0", "spurious"]
    else:
        rows, meta = _table_dw(dmax or 20, digits, betas, precision, precision_cap)
        columns = ["beta", "E0_lower", "E0_upper", "E1_lower", "E1_upper"]
    inputs = {"command": "table", "name": name, "dmax": dmax, "digits": digits}
    if name == "dw-e0e1":
        inputs["betas"] = betas
    _emit(fmt, out, inputs, rows, meta, columns)


def _table_spurious(dmax, digits, precision, precision_cap):
    pot = _potential_for("mpt:lambda=3", 0, dmax)
    pot0, shift = shift_constant(pot)
    opts = _options(digits, precision, precision_cap)
    seqs = track_sequences_in_window(
        pot0, 0, 0, range(2, dmax + 1), Fraction(-10) - shift, Fraction(-1) - shift, opts
    )
    survivors = [s for s in seqs if s.entries[-1][0] == dmax]
    if len(survivors) < 2:
        raise ConvergenceError(
            f"expected two sequences reaching D={dmax}, found {len(survivors)}"
        )
    main = max(survivors, key=lambda s: s.final.root)
    companion = min(survivors, key=lambda s: s.final.root)
    main_by_d = dict(main.entries)
    comp_by_d = dict(companion.entries)
    rows = []
    for dim in range(2, dmax + 1):
        rows.append({
            "D": dim,
            "E0": _energy_str(main_by_d[dim], shift, digits) if dim in main_by_d else None,
            "spurious": _energy_str(comp_by_d[dim], shift, digits) if dim in comp_by_d else None,
        })
    return rows, _meta(_max_precision(main, companion), shift)


def _table_dw(dmax, digits, betas, precision, precision_cap):
    rows = []
    top_prec = 0
    for beta_text in betas.split(","):
        beta = parse_rational(beta_text.strip())
        pot = parse_potential(f"dwell:beta={beta_text.strip()}", order=2 * dmax + 9)
        opts = _options(
            digits, precision, precision_cap, gap_stop=Fraction(1, 10 ** (digits + 2))
        )
        row = {"beta": _frac_str(beta)}
        for parity, label in ((0, "E0"), (1, "E1")):
            seed = Fraction(_oracle_seed(pot, Fraction(0), parity, 0))
            result = bounds(pot, parity, range(2, dmax + 1), seed, opts)
            lo_rec = result.lower.final
            up_rec = result.upper.final
            row[f"{label}_lower"] = _energy_str(lo_rec, Fraction(0), digits)
            row[f"{label}_upper"] = _energy_str(up_rec, Fraction(0), digits)
            top_prec = max(top_prec, _max_precision(result.lower, result.upper))
        rows.append(row)
    return rows, _meta(top_prec)


_PRESETS = ["anal", "logUBLB_0", "sequences", "exval", "DWH20", "DWH21", "DWLOG"]


@cli.command("figure-data")
@click.option("--preset", type=click.Choice(_PRESETS), required=True)
@click.option("--lambdas", default="1/100,1/50,1/20,1/10,1/5,1/2,1,2,5,10,20,50,100", show_default=True, help="anal only.")
@click.option("--betas", default=None, help="DWH20/DWH21 grid or DWLOG depths (preset-specific default).")
@click.option("--dmin", type=click.IntRange(2, 64), default=2, show_default=True)
@click.option("--dmax", type=click.IntRange(2, 64), default=None, help="Preset-specific default.")
@click.option("--digits", type=click.IntRange(1, 200), default=24, show_default=True)
@_precision_options
@_output_options
@_guarded
def figure_data(preset, lambdas, betas, dmin, dmax, digits, precision, precision_cap, fmt, out):
    """Plot-ready data series.

    anal: D=2 bounds vs coupling for x^2 + g x^4, with oracle energies.
    logUBLB_0: quartic ground-state bracket width vs D (log10).
    sequences: all quartic d=0 roots near the ground state per D.
    exval: <x^2> of the quartic ground state from both bound sequences.
    DWH20/DWH21: double-well D=2 root branches vs depth, with oracle.
    DWLOG: double-well bracket width vs D per depth (log10).
    """
    builders = {
        "anal": _fig_anal,
        "logUBLB_0": _fig_logublb0,
        "sequences": _fig_sequences,
        "exval": _fig_exval,
        "DWH20": lambda *a: _fig_dwpoints(0, *a),
        "DWH21": lambda *a: _fig_dwpoints(1, *a),
        "DWLOG": _fig_dwlog,
    }
    rows, columns, meta = builders[preset](lambdas, betas, dmin, dmax, digits, precision, precision_cap)
    inputs = {
        "command": "figure-data", "preset": preset, "lambdas": lambdas,
        "betas": betas, "dmin": dmin, "dmax": dmax, "digits": digits,
    }
    _emit(fmt, out, inputs, rows, meta, columns)


def _real_roots_at(poly, value):
    """Real roots of a bivariate determinant polynomial with its
    parameter pinned to an exact rational; float precision is plenty for
    plot data."""
    coeffs = []
    for k in range(poly.degree + 1):
        c = poly.coefficient(k)
        coeffs.append(float(c.evaluate(value)) if hasattr(c, "evaluate") else float(c))
    while coeffs and coeffs[-1] == 0.0:
        coeffs.pop()
    if len(coeffs) < 2:
        return []
    roots = np.roots(list(reversed(coeffs)))
    return sorted(float(r.real) for r in roots if abs(r.imag) <= 1e-9 * max(1.0, abs(r)))


def _fig_anal(lambdas, _betas, _dmin, _dmax, _digits, _precision, _precision_cap):
    values = [parse_rational(s.strip()) for s in lambdas.split(",")]
    if not values or sorted(values) != values or values[0] <= 0:
        raise InputError("--lambdas must be positive and ascending")
    sym = series_coefficients("x2x4", {"lambda": 0}, order=16)
    h20 = det_symbolic(sym, HankelSpec(2, 0, 0), param="lambda").monic()
    h21 = det_symbolic(sym, HankelSpec(2, 1, 0), param="lambda").monic()
    rows = []
    prev_lo = 1.0  # harmonic limit of the ground state
    for lam in values:
        lows = _real_roots_at(h20, lam)
        ups = _real_roots_at(h21, lam)
        if not lows or not ups:
            raise NumericalError(f"no real root branch at coupling {lam}")
        lo = min(lows, key=lambda r: abs(r - prev_lo))
        prev_lo = lo
        # the d=1 branch for the same state never falls below the d=0
        # root; picking the smallest root obeying that skips the
        # companion branch that splits off the degenerate zero-coupling
        # root just below it
        above = [r for r in ups if r >= lo]
        if not above:
            raise NumericalError(f"no upper branch above {lo:.6g} at coupling {lam}")
        up = min(above)
        spec = series_coefficients("x2x4", {"lambda": lam}, order=16)
        e0 = oracle_eigenvalues(spec, parity=0, k_max=0).eigenvalues[0]
        rows.append({
            "lambda": _frac_str(lam),
            "lower_D2": f"{lo:.12g}",
            "upper_D2": f"{up:.12g}",
            "oracle_E0": f"{e0:.12g}",
        })
    return rows, ["lambda", "lower_D2", "upper_D2", "oracle_E0"], {"version": _VERSION}


def _fig_logublb0(_lambdas, _betas, dmin, dmax, digits, precision, precision_cap):
    dmax = dmax or 11
    pot = parse_potential("quartic")
    opts = _options(digits, precision, precision_cap)
    seed = Fraction(_oracle_seed(pot, Fraction(0), 0, 0))
    result = bounds(pot, 0, range(dmin, dmax + 1), seed, opts)
    rows = []
    for dim, gap in result.gaps:
        with mp.workdps(30):
            rows.append({
                "D": dim,
                "gap": mp.nstr(abs(gap), 6),
                "log10_gap": f"{float(mp.log10(abs(gap))):.6f}" if gap != 0 else None,
            })
    return rows, ["D", "gap", "log10_gap"], _meta(_max_precision(result.lower, result.upper))


def _fig_sequences(_lambdas, _betas, dmin, dmax, digits, precision, precision_cap):
    dmax = dmax or 11
    pot = parse_potential("quartic")
    opts = _options(digits, precision, precision_cap)
    seed = Fraction(_oracle_seed(pot, Fraction(0), 0, 0))
    main = track_sequence(pot, 0, 0, range(dmin, dmax + 1), seed, opts)
    main_by_d = {dim: rec.root for dim, rec in main.entries}
    ref = main.final.root
    rows = []
    dense = replace(opts, grid_points=max(opts.grid_points, 600))
    for dim in range(dmin, dmax + 1):
        spec = HankelSpec(dim, 0, 0)
        anchor = main_by_d.get(dim, ref)
        found = []
        # neighbouring roots cluster ever closer to the tracked one as D
        # grows, so a single coarse grid drops pairs that share a cell;
        # layered windows around the tracked root keep them apart
        with mp.workdps(40):
            windows = [
                (ref - mpf("0.6"), ref + mpf("0.6")),
                (anchor - mpf("0.02"), anchor + mpf("0.02")),
                (anchor - mpf("1e-3"), anchor + mpf("1e-3")),
                (anchor - mpf("1e-7"), anchor + mpf("1e-7")),
            ]
        for lo, hi in windows:
            found.extend(scan_roots(pot, spec, lo, hi, dense))
        if dim in main_by_d:
            found.append(main_by_d[dim])
        with mp.workdps(max(40, opts.target_digits + 10)):
            uniq = []
            for root in sorted(found):
                if not uniq or abs(root - uniq[-1]) > mpf("1e-18") * max(mpf(1), abs(root)):
                    uniq.append(root)
            for root in uniq:
                diff = abs(root - ref)
                is_main = dim in main_by_d and abs(root - main_by_d[dim]) <= mpf("1e-18")
                rows.append({
                    "D": dim,
                    "root": format_significant(root, digits),
                    "log10_abs_err": f"{float(mp.log10(diff)):.4f}" if diff != 0 else None,
                    "branch": "main" if is_main else "parallel",
                })
    return rows, ["D", "root", "log10_abs_err", "branch"], _meta(main.final.precision)


def _fig_exval(_lambdas, _betas, dmin, dmax, digits, precision, precision_cap):
    dmax = dmax or 12
    pot = parse_potential("quartic")
    opts = _options(digits, precision, precision_cap)
    seed = Fraction(_oracle_seed(pot, Fraction(0), 0, 0))
    chains = {
        d: track_sequence(pot, 0, d, range(dmin, dmax + 1), seed, opts)
        for d in (0, 1)
    }
    by_d = {d: dict(chains[d].entries) for d in (0, 1)}
    rows = []
    observable = [Fraction(0), Fraction(1)]
    top_prec = 0
    for dim in range(dmin, dmax + 1):
        row = {"D": dim, "from_lower": None, "from_upper": None}
        for d, label in ((0, "from_lower"), (1, "from_upper")):
            if dim not in by_d[d]:
                continue
            value = expectation(pot, by_d[d][dim], observable, opts)
            shown = max(1, min(digits, value.certified_digits))
            row[label] = format_significant(value.value, shown)
            top_prec = max(top_prec, value.precision)
        rows.append(row)
    return rows, ["D", "from_lower", "from_upper"], _meta(top_prec)


def _fig_dwpoints(d, _lambdas, betas, _dmin, _dmax, _digits, _precision, _precision_cap):
    grid = betas or ",".join(_frac_str(Fraction(k, 2)) for k in range(-20, 5))
    values = [parse_rational(s.strip()) for s in grid.split(",")]
    sym = series_coefficients("dwell", {"beta": 0}, order=16)
    poly = det_symbolic(sym, HankelSpec(2, d, 0), param="beta").monic()
    rows = []
    for beta in values:
        for k, root in enumerate(_real_roots_at(poly, beta)):
            rows.append({
                "beta": _frac_str(beta),
                "series": f"root_{k}",
                "value": f"{root:.12g}",
            })
        if beta.denominator == 1:
            spec = series_coefficients("dwell", {"beta": beta}, order=16)
            for parity, label in ((0, "oracle_E0"), (1, "oracle_E1")):
                e = oracle_eigenvalues(spec, parity=parity, k_max=0).eigenvalues[0]
                rows.append({
                    "beta": _frac_str(beta), "series": label, "value": f"{e:.12g}",
                })
    return rows, ["beta", "series", "value"], {"version": _VERSION}


def _fig_dwlog(_lambdas, betas, dmin, dmax, digits, precision, precision_cap):
    dmax = dmax or 10
    depth_list = [parse_rational(s.strip()) for s in (betas or "-1,-5").split(",")]
    rows = []
    top_prec = 0
    for beta in depth_list:
        pot = series_coefficients("dwell", {"beta": beta}, order=2 * dmax + 9)
        opts = _options(digits, precision, precision_cap)
        seed = Fraction(_oracle_seed(pot, Fraction(0), 0, 0))
        result = bounds(pot, 0, range(dmin, dmax + 1), seed, opts)
        top_prec = max(top_prec, _max_precision(result.lower, result.upper))
        for dim, gap in result.gaps:
            with mp.workdps(30):
                rows.append({
                    "beta": _frac_str(beta),
                    "D": dim,
                    "gap": mp.nstr(abs(gap), 6),
                    "log10_gap": f"{float(mp.log10(abs(gap))):.6f}" if gap != 0 else None,
                })
    return rows, ["beta", "D", "gap", "log10_gap"], _meta(top_prec)


def main(argv=None):
    return cli.main(args=argv, standalone_mode=True)


if __name__ == "__main__":
    main()

"""Convergence-radius estimation for the Fourier generator series.

Two deliberately independent methods:

* the root test fits the decay rate of the exact generator coefficients
  (only the modified equation is consulted);
* the zero search locates the complex zero of the symbol S nearest the
  origin (only the symbol is consulted) -- S is entire, so the principal
  logarithm is obstructed exactly at zeros of S.

Disagreement between the two flags a bug.  Exact Bernoulli numbers and
Euler-polynomial values are provided as an arithmetic cross-check for the
heat-scheme closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np
from mpmath import mp

from .derivation import ModifiedEq
from .schemes import SchemeSpec, catalog_scheme
from .spectra import eval_symbol, symbol_derivative

__all__ = [
    "RadiusDiagnostics",
    "RadiusEstimate",
    "ZeroSearchError",
    "bernoulli",
    "euler_poly_at_zero",
    "radius_root_test",
    "radius_zero_search",
    "heat_closed_form_radius",
]

Number = Union[int, float, Fraction]


class ZeroSearchError(RuntimeError):
    """The zero search neither converged nor certified the absence of zeros."""


@dataclass(frozen=True)
class RadiusDiagnostics:
    """How a radius estimate was obtained."""

    coefficients_used: int
    residual: float
    zero: Optional[complex] = None
    all_coefficients_zero: bool = False
    polynomial_tail: bool = False

    def to_json_dict(self) -> dict:
        return {
            "coefficients_used": self.coefficients_used,
            "residual": self.residual,
            "zero": None
            if self.zero is None
            else {"re": self.zero.real, "im": self.zero.imag},
            "all_coefficients_zero": self.all_coefficients_zero,
            "polynomial_tail": self.polynomial_tail,
        }


@dataclass(frozen=True)
class RadiusEstimate:
    value: float  # > 0, possibly math.inf
    method: str   # "root_test" | "zero_search" | "closed_form"
    diagnostics: RadiusDiagnostics

    def to_json_dict(self) -> dict:
        return {
            "value": "inf" if math.isinf(self.value) else self.value,
            "method": self.method,
            "diagnostics": self.diagnostics.to_json_dict(),
        }


# ---------------------------------------------------------------------------
# Bernoulli numbers and Euler polynomial values, exact
# ---------------------------------------------------------------------------

_BERNOULLI: list[Fraction] = [Fraction(1)]
_EULER_AT_ZERO: list[Fraction] = [Fraction(1)]


def bernoulli(n: int) -> Fraction:
    """Exact Bernoulli number B_n (convention B_1 = -1/2), from the
    recurrence sum_{k=0}^{n} C(n+1, k) B_k = 0."""
    if n < 0:
        raise ValueError("n must be >= 0")
    while len(_BERNOULLI) <= n:
        m = len(_BERNOULLI)
        acc = Fraction(0)
        for k in range(m):
            acc += math.comb(m + 1, k) * _BERNOULLI[k]
        _BERNOULLI.append(-acc / (m + 1))
    return _BERNOULLI[n]


def euler_poly_at_zero(n: int) -> Fraction:
    """Exact value E_n(0) of the n-th Euler polynomial at zero, from the
    generating function 2/(e^t + 1): E_m(0) = -(1/2) sum_{k<m} C(m,k) E_k(0)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    while len(_EULER_AT_ZERO) <= n:
        m = len(_EULER_AT_ZERO)
        acc = Fraction(0)
        for k in range(m):
            acc += math.comb(m, k) * _EULER_AT_ZERO[k]
        _EULER_AT_ZERO.append(-acc / 2)
    return _EULER_AT_ZERO[n]


# ---------------------------------------------------------------------------
# Root test
# ---------------------------------------------------------------------------

def _log_fraction(x: Fraction) -> float:
    """log of a positive rational, robust to huge numerators/denominators."""
    num, den = x.numerator, x.denominator
    return (num.bit_length() - den.bit_length()) * math.log(2) + math.log(
        num / (1 << num.bit_length())
    ) - math.log(den / (1 << den.bit_length()))


def radius_root_test(modeq: ModifiedEq, lam: Union[int, Fraction]) -> RadiusEstimate:
    """Radius from the decay of the generator coefficients g_p(lambda).

    |g_p|^(1/p) -> 1/R, so log|g_p| is fitted against p by least squares
    over the top third of the available nonzero coefficients (zero
    coefficients are skipped but keep their true index).  Magnitudes are
    computed from exact rationals before any float conversion.
    """
    if modeq.order < 16:
        raise ValueError("root test needs a modified equation of order >= 16")
    lam = Fraction(lam)
    indices: list[int] = []
    logs: list[float] = []
    for p in range(1, modeq.order + 1):
        g = modeq.g_coeff(p, lam)
        if g.is_zero:
            continue
        indices.append(p)
        logs.append(0.5 * _log_fraction(g.norm2()))
    if not indices:
        return RadiusEstimate(
            value=math.inf,
            method="root_test",
            diagnostics=RadiusDiagnostics(
                coefficients_used=0, residual=0.0, all_coefficients_zero=True
            ),
        )
    if indices[-1] <= modeq.order // 2:
        # the series terminates: the generator is a polynomial, radius infinite
        return RadiusEstimate(
            value=math.inf,
            method="root_test",
            diagnostics=RadiusDiagnostics(
                coefficients_used=len(indices), residual=0.0, polynomial_tail=True
            ),
        )
    used = max(4, len(indices) // 3)
    ps = np.array(indices[-used:], dtype=float)
    ys = np.array(logs[-used:])
    slope, intercept = np.polyfit(ps, ys, 1)
    fit = slope * ps + intercept
    residual = float(np.sqrt(np.mean((fit - ys) ** 2)))
    return RadiusEstimate(
        value=math.exp(-slope),
        method="root_test",
        diagnostics=RadiusDiagnostics(coefficients_used=used, residual=residual),
    )


# ---------------------------------------------------------------------------
# Zero search
# ---------------------------------------------------------------------------

_SEARCH_RE = 2 * math.pi
_SEARCH_IM = 6.0
# trial points beyond this box are hopeless and risk exp overflow
_BOX_RE = 8 * math.pi
_BOX_IM = 40.0


def _safe_abs(z: complex) -> float:
    try:
        return abs(z)
    except OverflowError:
        return math.inf


def _newton_zero(scheme: SchemeSpec, lam: Number, z0: complex) -> Optional[complex]:
    """Damped Newton iteration on S, then a multiple-root-safe polish on
    S/S'.  Returns a zero with |S(z)| <= 1e-10, or None."""

    def s(z: complex) -> complex:
        return eval_symbol(scheme, lam, z)

    def s1(z: complex) -> complex:
        return symbol_derivative(scheme, lam, z, 1)

    def s2(z: complex) -> complex:
        return symbol_derivative(scheme, lam, z, 2)

    z = z0
    fz = s(z)
    for _ in range(80):
        d1 = s1(z)
        if _safe_abs(d1) < 1e-30:
            return None
        step = -fz / d1
        t = 1.0
        for _ in range(24):
            zn = z + t * step
            if abs(zn.real) > _BOX_RE or abs(zn.imag) > _BOX_IM:
                t *= 0.5
                continue
            fn = s(zn)
            if _safe_abs(fn) < _safe_abs(fz):
                break
            t *= 0.5
        else:
            break
        z, fz = zn, fn
        if _safe_abs(step) * t < 1e-12:
            break
    # Newton on S/S' converges quadratically even at multiple zeros
    for _ in range(60):
        f = s(z)
        d1 = s1(z)
        denom = d1 * d1 - f * s2(z)
        if denom == 0:
            break
        dz = f * d1 / denom
        zn = z - dz
        if abs(zn.real) > _BOX_RE or abs(zn.imag) > _BOX_IM:
            break
        z = zn
        if _safe_abs(dz) < 1e-15:
            break
    if _safe_abs(s(z)) <= 1e-8:
        return z
    return None


def _mp_fraction(x: Fraction):
    return mp.mpf(x.numerator) / mp.mpf(x.denominator)


def _polish_zero_mp(scheme: SchemeSpec, lam: Number, z0: complex) -> Optional[complex]:
    """High-precision Newton (on S/S', safe at multiple zeros) to remove the
    double-precision cancellation floor near a zero of the symbol."""
    with mp.workdps(50):
        lam_mp = _mp_fraction(Fraction(lam)) if isinstance(lam, (int, Fraction)) \
            else mp.mpf(float(lam))
        weights = []
        for p, w in scheme.stencil:
            acc = mp.mpc(0)
            for c in reversed(w.coeffs):
                acc = acc * lam_mp + mp.mpc(_mp_fraction(c.re), _mp_fraction(c.im))
            weights.append((p, acc))

        def eval_s(z, order: int):
            acc = mp.mpc(0)
            for p, w in weights:
                acc += w * (mp.mpc(0, p) ** order) * mp.exp(mp.mpc(0, p) * z)
            value = lam_mp * acc
            return value + 1 if order == 0 else value

        z = mp.mpc(z0)
        for _ in range(30):
            f = eval_s(z, 0)
            d1 = eval_s(z, 1)
            denom = d1 * d1 - f * eval_s(z, 2)
            if denom == 0:
                break
            dz = f * d1 / denom
            z = z - dz
            if abs(dz) < mp.mpf(10) ** (-40):
                break
        if abs(eval_s(z, 0)) > mp.mpf(1e-10):
            return None
        return complex(float(z.real), float(z.imag))


def _rectangle_boundary_min(scheme: SchemeSpec, lam: Number, n: int = 512) -> float:
    ts = np.linspace(-1.0, 1.0, n)
    edges = [
        ts * _SEARCH_RE + 1j * _SEARCH_IM,
        ts * _SEARCH_RE - 1j * _SEARCH_IM,
        _SEARCH_RE + 1j * ts * _SEARCH_IM,
        -_SEARCH_RE + 1j * ts * _SEARCH_IM,
    ]
    return float(
        min(np.min(np.abs(eval_symbol(scheme, lam, edge))) for edge in edges)
    )


def radius_zero_search(scheme: SchemeSpec, lam: Number) -> RadiusEstimate:
    """Radius as the modulus of the symbol zero nearest the origin.

    Damped Newton from a grid of starts over [-2pi, 2pi] x [-6i, 6i]; when
    no zero is found and |S| is bounded away from zero on the rectangle
    boundary the radius is reported as infinite.
    """
    if float(lam) <= 0:
        raise ValueError("lambda must be positive")
    candidates: list[complex] = []
    with np.errstate(over="ignore", invalid="ignore"):
        for re0 in np.linspace(-_SEARCH_RE, _SEARCH_RE, 17):
            for im0 in np.linspace(-_SEARCH_IM, _SEARCH_IM, 13):
                z = _newton_zero(scheme, lam, complex(re0, im0))
                if z is None:
                    continue
                if abs(z.real) > _SEARCH_RE + 1e-4 or abs(z.imag) > _SEARCH_IM + 1e-4:
                    continue
                if all(abs(z - w) > 1e-5 for w in candidates):
                    candidates.append(z)
    # double precision cannot pin a (possibly multiple) zero much below
    # sqrt(eps); finish the few distinct candidates in high precision
    zeros: list[complex] = []
    for z0 in candidates:
        z = _polish_zero_mp(scheme, lam, z0)
        if z is None:
            continue
        if abs(z.real) > _SEARCH_RE + 1e-6 or abs(z.imag) > _SEARCH_IM + 1e-6:
            continue
        if all(abs(z - w) > 1e-7 for w in zeros):
            zeros.append(z)
    if not zeros:
        boundary_min = _rectangle_boundary_min(scheme, lam)
        if boundary_min > 1e-6:
            return RadiusEstimate(
                value=math.inf,
                method="zero_search",
                diagnostics=RadiusDiagnostics(
                    coefficients_used=0, residual=boundary_min
                ),
            )
        raise ZeroSearchError(
            "no zero converged and |S| is not bounded away from zero on the "
            "search boundary"
        )
    # deterministic selection: smallest modulus, then real part, then imaginary
    best = min(zeros, key=lambda z: (round(abs(z) / 1e-9), z.real, z.imag))
    residual = abs(eval_symbol(scheme, lam, best))
    return RadiusEstimate(
        value=abs(best),
        method="zero_search",
        diagnostics=RadiusDiagnostics(
            coefficients_used=len(zeros), residual=residual, zero=best
        ),
    )


def heat_closed_form_radius(lam: Number) -> RadiusEstimate:
    """Closed-form radius for the centered heat scheme.

    For lambda >= 1/4 the symbol 1 - 4 lambda sin^2(theta/2) has a real zero
    at 2 asin(1/(2 sqrt(lambda))), which is the radius.  Below 1/4 the zeros
    move off the real axis and the numeric zero search takes over.
    """
    lam_f = float(lam)
    if lam_f <= 0:
        raise ValueError("lambda must be positive")
    if lam_f < 0.25:
        return radius_zero_search(catalog_scheme("heat_centered"), lam)
    value = 2.0 * math.asin(1.0 / (2.0 * math.sqrt(lam_f)))
    return RadiusEstimate(
        value=value,
        method="closed_form",
        diagnostics=RadiusDiagnostics(
            coefficients_used=0, residual=0.0, zero=complex(value, 0.0)
        ),
    )

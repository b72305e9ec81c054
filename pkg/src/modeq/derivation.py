"""Modified-equation derivation.

Two independent engines produce the modified equation of a scheme:

* ``derive_log`` expands the principal logarithm of the one-step symbol
  S(theta) and divides out the mesh ratio;
* ``derive_elimination`` solves exp(D) = S order by order for the series
  D = dt * G, mirroring the classical elimination of time derivatives.

Both return the coefficients c_p of

    u_t = sum_p c_p(lambda) dx^(p-q) d^p u / dx^p

with dx normalized to 1 in the symbolic computation; the dx-dependence is
carried by the integer grading p - q.  No floating point enters this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .exactalg import (
    LP_ZERO,
    GaussianRational,
    InexactDivisionError,
    LambdaPoly,
    ThetaSeries,
    i_power,
    series_log,
    series_mul,
)
from .schemes import SchemeSpec

__all__ = [
    "ModifiedEq",
    "ConsistencyFailure",
    "ConsistencyReport",
    "CrossCheckError",
    "symbol_series",
    "derive_log",
    "derive_elimination",
    "consistency_report",
]


class CrossCheckError(RuntimeError):
    """An internal mathematical invariant failed; indicates a bug upstream."""


@dataclass(frozen=True)
class ModifiedEq:
    """Modified-equation coefficients of a scheme up to order N.

    ``coeffs[p-1]`` is the lambda-polynomial c_p; the physical coefficient of
    d^p u/dx^p is c_p(lambda) * dx^(p-q).  The Fourier-space generator G of
    the equation has theta-coefficients c_p(lambda) * i^p at dx = 1, and the
    one-step symbol satisfies ln S = lambda * sum_p c_p i^p theta^p.
    """

    scheme_name: str
    q: int
    coeffs: tuple  # (LambdaPoly, ...) for p = 1..N

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def coeff(self, p: int) -> LambdaPoly:
        """c_p for 1 <= p <= N."""
        if not 1 <= p <= self.order:
            raise ValueError(f"order p={p} outside 1..{self.order}")
        return self.coeffs[p - 1]

    def grading(self, p: int) -> int:
        """Power of dx multiplying c_p in the physical coefficient."""
        return p - self.q

    def mu(self, p: int, lam: Union[int, Fraction], dx: Union[int, Fraction] = 1) -> GaussianRational:
        """Physical coefficient c_p(lambda) * dx^(p-q), exactly."""
        scale = Fraction(dx) ** self.grading(p)
        return self.coeff(p)(lam).scale(scale)

    def g_poly(self, p: int) -> LambdaPoly:
        """theta^p coefficient of the generator G at dx = 1, as a polynomial."""
        return self.coeff(p).scale(i_power(p))

    def g_coeff(self, p: int, lam: Union[int, Fraction]) -> GaussianRational:
        """theta^p coefficient of G at dx = 1, evaluated exactly."""
        return self.coeff(p)(lam) * i_power(p)

    def log_coeff(self, p: int, lam: Union[int, Fraction]) -> GaussianRational:
        """theta^p coefficient of ln S, i.e. lambda times ``g_coeff``."""
        return self.g_coeff(p, lam).scale(Fraction(lam))

    def dt_g_series(self, order: Optional[int] = None) -> ThetaSeries:
        """The series dt*G = ln S as a ThetaSeries (lambda symbolic)."""
        n = self.order if order is None else order
        if n > self.order:
            raise ValueError(f"requested order {n} exceeds stored order {self.order}")
        coeffs = [LP_ZERO]
        for p in range(1, n + 1):
            coeffs.append(self.g_poly(p).shift_up(1))
        return ThetaSeries(tuple(coeffs))

    def to_json_dict(self) -> dict:
        return {
            "scheme": self.scheme_name,
            "N": self.order,
            "q": self.q,
            "terms": [
                {
                    "p": p,
                    "grading": self.grading(p),
                    "coeff": self.coeff(p).to_string(),
                }
                for p in range(1, self.order + 1)
            ],
        }


def symbol_series(scheme: SchemeSpec, order: int) -> ThetaSeries:
    """Taylor expansion in theta of the one-step symbol
    S = 1 + lambda * sum_p B_p(lambda) e^{i p theta}.

    The theta^0 coefficient is exactly 1 because the weights sum to zero;
    the theta^r coefficient is lambda * sum_p B_p(lambda) (ip)^r / r!.
    """
    if order < 1:
        raise ValueError(f"series order must be >= 1, got {order}")
    coeffs = [LambdaPoly.one()]
    for r in range(1, order + 1):
        total = LP_ZERO
        for p, w in scheme.stencil:
            if p == 0 or w.is_zero:
                continue
            total = total + w.scale(Fraction(p**r, math.factorial(r)))
        coeffs.append(total.scale(i_power(r)).shift_up(1))
    return ThetaSeries(tuple(coeffs))


def _normalize(scheme: SchemeSpec, dt_g_coeffs: list, engine: str) -> ModifiedEq:
    """Convert theta-coefficients of dt*G into modified-equation c_p."""
    out = []
    for p, poly in enumerate(dt_g_coeffs, start=1):
        try:
            c = poly.divide_by_lambda().scale(i_power(-p))
        except InexactDivisionError as exc:
            raise CrossCheckError(
                f"{engine}: theta^{p} coefficient not divisible by lambda; "
                f"the consistency invariant is broken upstream"
            ) from exc
        out.append(c)
    if scheme.has_real_stencil:
        for p, c in enumerate(out, start=1):
            if not c.is_real:
                raise CrossCheckError(
                    f"{engine}: c_{p} = {c} has nonzero imaginary part "
                    f"for a real-stencil scheme"
                )
    return ModifiedEq(scheme_name=scheme.name, q=scheme.q, coeffs=tuple(out))


def derive_log(scheme: SchemeSpec, order: int) -> ModifiedEq:
    """Modified equation via the principal logarithm of the symbol."""
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    log_s = series_log(symbol_series(scheme, order))
    return _normalize(scheme, list(log_s.coeffs[1:]), "derive_log")


def derive_elimination(scheme: SchemeSpec, order: int) -> ModifiedEq:
    """Modified equation via order-by-order elimination.

    Solves sum_{m>=1} D^m/m! = S - 1 for D = sum_p d_p theta^p: at each
    order p the unknown d_p appears only in the m = 1 term, so

        d_p = [theta^p](S - 1) - [theta^p] sum_{m>=2} D_<p^m / m!

    where D_<p collects the already-determined d_1..d_{p-1}.  This engine
    never takes a logarithm; it only multiplies series.
    """
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    s = symbol_series(scheme, order)
    q_coeffs = s.coeffs  # [theta^p](S - 1) = s.coeffs[p] for p >= 1
    d = [LP_ZERO] * (order + 1)
    for p in range(1, order + 1):
        partial = ThetaSeries(tuple(d))
        correction = LP_ZERO
        power = partial
        fact = 1
        for m in range(2, p + 1):
            power = series_mul(power, partial)
            if power.is_zero:
                break
            fact *= m
            correction = correction + power.coeffs[p].scale(Fraction(1, fact))
        d[p] = q_coeffs[p] - correction
    return _normalize(scheme, d[1:], "derive_elimination")


@dataclass(frozen=True)
class ConsistencyFailure:
    p: int
    residual: LambdaPoly
    message: str


@dataclass(frozen=True)
class ConsistencyReport:
    """Outcome of checking a modified equation against its target PDE."""

    scheme_name: str
    ok: bool
    failures: tuple
    matched_orders: tuple
    leading_error_order: Optional[int]

    def to_json_dict(self) -> dict:
        return {
            "scheme": self.scheme_name,
            "ok": self.ok,
            "failures": [
                {"p": f.p, "residual": f.residual.to_string(), "message": f.message}
                for f in self.failures
            ],
            "matched_orders": list(self.matched_orders),
            "leading_error_order": self.leading_error_order,
        }


def consistency_report(scheme: SchemeSpec, modeq: ModifiedEq) -> ConsistencyReport:
    """Check that the modified equation reproduces the declared PDE.

    Requires c_p = 0 for every p with negative grading, and c_q = -A_q as a
    lambda-independent polynomial identity.  The leading numerical-error
    order is the smallest positive grading among the remaining nonzero terms.
    """
    if modeq.order < scheme.pde_order:
        raise ValueError(
            f"modified equation order {modeq.order} is below the PDE order "
            f"{scheme.pde_order}"
        )
    failures: list[ConsistencyFailure] = []
    matched: list[int] = []
    q = scheme.q

    for p in range(1, q):
        c = modeq.coeff(p)
        if not c.is_zero:
            failures.append(
                ConsistencyFailure(
                    p=p,
                    residual=c,
                    message=f"c_{p} must vanish (grading {p - q} < 0)",
                )
            )

    declared = scheme.pde_map()
    target = LambdaPoly.const(-declared.get(q, Fraction(0)))
    residual = modeq.coeff(q) - target
    if residual.is_zero:
        matched.append(q)
    else:
        failures.append(
            ConsistencyFailure(
                p=q,
                residual=residual,
                message=f"c_{q} != -A_{q}",
            )
        )

    for order, a in sorted(declared.items()):
        if order == q or a == 0:
            continue
        c = modeq.coeff(order) if order <= modeq.order else LP_ZERO
        failures.append(
            ConsistencyFailure(
                p=order,
                residual=c + LambdaPoly.const(a),
                message=(
                    f"A_{order} declared but the scheme term has grading "
                    f"{order - q} != 0"
                ),
            )
        )

    leading: Optional[int] = None
    for p in range(q + 1, modeq.order + 1):
        if not modeq.coeff(p).is_zero:
            leading = p - q
            break

    return ConsistencyReport(
        scheme_name=scheme.name,
        ok=not failures,
        failures=tuple(failures),
        matched_orders=tuple(matched),
        leading_error_order=leading,
    )

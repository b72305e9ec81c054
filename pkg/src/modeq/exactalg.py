"""Exact arithmetic kernel: Gaussian rationals, polynomials in the mesh
ratio lambda, and power series in the Fourier angle theta truncated at a
fixed order.

Everything here is exact.  Floating point enters only through the explicit
conversion helpers (``complex(...)``, ``eval_complex``); all arithmetic is
carried out over arbitrary-precision rationals so that polynomial identities
can be tested by literal equality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

__all__ = [
    "Rational",
    "GaussianRational",
    "LambdaPoly",
    "ThetaSeries",
    "OrderMismatchError",
    "SeriesPreconditionError",
    "InexactDivisionError",
    "i_power",
    "series_mul",
    "series_add",
    "series_sub",
    "series_log",
    "series_exp",
]

# Arbitrary-precision rational with gcd-reduced numerator/denominator and a
# positive denominator -- Fraction guarantees exactly these invariants.
Rational = Fraction

ScalarLike = Union[int, Fraction, "GaussianRational"]


class OrderMismatchError(ValueError):
    """Arithmetic attempted on series of different truncation orders."""


class SeriesPreconditionError(ValueError):
    """A series operation was called outside its admissible domain."""


class InexactDivisionError(ArithmeticError):
    """An exact division had a nonzero remainder."""


def _as_fraction(x: Union[int, Fraction]) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True, slots=True)
class GaussianRational:
    """Complex number with exact rational real and imaginary parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "re", _as_fraction(self.re))
        object.__setattr__(self, "im", _as_fraction(self.im))

    @property
    def is_zero(self) -> bool:
        return not self.re and not self.im

    @property
    def is_real(self) -> bool:
        return not self.im

    def __bool__(self) -> bool:
        return not self.is_zero

    def __add__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other: "GaussianRational") -> "GaussianRational":
        if not self.im and not other.im:
            return GaussianRational(self.re * other.re)
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def scale(self, factor: Union[int, Fraction]) -> "GaussianRational":
        f = _as_fraction(factor)
        return GaussianRational(self.re * f, self.im * f)

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm2(self) -> Fraction:
        """Exact squared modulus re**2 + im**2."""
        return self.re * self.re + self.im * self.im

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __str__(self) -> str:
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}*i"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}*i)"


GR_ZERO = GaussianRational()
GR_ONE = GaussianRational(Fraction(1))
GR_I = GaussianRational(Fraction(0), Fraction(1))

_I_CYCLE = (
    GR_ONE,
    GR_I,
    GaussianRational(Fraction(-1)),
    GaussianRational(Fraction(0), Fraction(-1)),
)


def i_power(k: int) -> GaussianRational:
    """The exact Gaussian rational i**k for any integer k."""
    return _I_CYCLE[k % 4]


def _as_gaussian(x: ScalarLike) -> GaussianRational:
    if isinstance(x, GaussianRational):
        return x
    return GaussianRational(_as_fraction(x))


@dataclass(frozen=True, slots=True)
class LambdaPoly:
    """Univariate polynomial in the mesh ratio lambda, with GaussianRational
    coefficients stored by increasing power and trailing zeros trimmed."""

    coeffs: tuple = ()

    def __post_init__(self) -> None:
        cs = [_as_gaussian(c) for c in self.coeffs]
        while cs and cs[-1].is_zero:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def zero(cls) -> "LambdaPoly":
        return cls(())

    @classmethod
    def one(cls) -> "LambdaPoly":
        return cls((GR_ONE,))

    @classmethod
    def const(cls, value: ScalarLike) -> "LambdaPoly":
        return cls((_as_gaussian(value),))

    @classmethod
    def lam(cls) -> "LambdaPoly":
        """The monomial lambda."""
        return cls((GR_ZERO, GR_ONE))

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_real(self) -> bool:
        return all(c.is_real for c in self.coeffs)

    @property
    def degree(self) -> int:
        """Degree of the polynomial; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def __bool__(self) -> bool:
        return not self.is_zero

    def __add__(self, other: "LambdaPoly") -> "LambdaPoly":
        if not other:
            return self
        if not self:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] = out[k] + c
        return LambdaPoly(out)

    def __sub__(self, other: "LambdaPoly") -> "LambdaPoly":
        return self + (-other)

    def __neg__(self) -> "LambdaPoly":
        return LambdaPoly(tuple(-c for c in self.coeffs))

    def __mul__(self, other: "LambdaPoly") -> "LambdaPoly":
        if not self or not other:
            return LambdaPoly.zero()
        out = [GR_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for j, a in enumerate(self.coeffs):
            if a.is_zero:
                continue
            for k, b in enumerate(other.coeffs):
                if b.is_zero:
                    continue
                out[j + k] = out[j + k] + a * b
        return LambdaPoly(out)

    def scale(self, factor: ScalarLike) -> "LambdaPoly":
        g = _as_gaussian(factor)
        if g.is_zero:
            return LambdaPoly.zero()
        return LambdaPoly(tuple(c * g for c in self.coeffs))

    def shift_up(self, k: int = 1) -> "LambdaPoly":
        """Multiply by lambda**k."""
        if not self:
            return self
        return LambdaPoly((GR_ZERO,) * k + self.coeffs)

    def divide_by_lambda(self) -> "LambdaPoly":
        """Exact division by lambda; the constant term must vanish."""
        if not self:
            return self
        if not self.coeffs[0].is_zero:
            raise InexactDivisionError(
                f"polynomial {self} has nonzero constant term, not divisible by lambda"
            )
        return LambdaPoly(self.coeffs[1:])

    def __call__(self, lam: Union[int, Fraction, GaussianRational]) -> GaussianRational:
        """Exact evaluation at a rational (or Gaussian rational) point."""
        x = _as_gaussian(lam)
        acc = GR_ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_complex(self, lam: Union[float, complex]) -> complex:
        """Floating-point Horner evaluation."""
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * lam + complex(c)
        return acc

    def __str__(self) -> str:
        return self.to_string()

    def to_string(self, var: str = "lambda") -> str:
        """Canonical rendering over a common integer denominator,
        e.g. ``(1-6*lambda)/12``."""
        if self.is_zero:
            return "0"
        denom = 1
        for c in self.coeffs:
            denom = math.lcm(denom, c.re.denominator, c.im.denominator)
        parts: list[str] = []
        for k, c in enumerate(self.coeffs):
            a = int(c.re * denom)
            b = int(c.im * denom)
            if a == 0 and b == 0:
                continue
            if b == 0:
                negative, coeff = a < 0, str(abs(a))
            elif a == 0:
                negative, coeff = b < 0, ("i" if abs(b) == 1 else f"{abs(b)}*i")
            else:
                sign = "+" if b > 0 else "-"
                negative, coeff = False, f"({a}{sign}{abs(b)}*i)"
            if k == 0:
                term = coeff
            else:
                power = var if k == 1 else f"{var}^{k}"
                term = power if coeff == "1" else f"{coeff}*{power}"
            parts.append(("-" if negative else "+") + term)
        body = "".join(parts).lstrip("+")
        if denom == 1:
            return body
        if len(parts) > 1:
            body = f"({body})"
        return f"{body}/{denom}"


LP_ZERO = LambdaPoly.zero()
LP_ONE = LambdaPoly.one()
LP_LAMBDA = LambdaPoly.lam()


@dataclass(frozen=True, slots=True)
class ThetaSeries:
    """Power series in theta truncated at a fixed order N.

    ``coeffs[p]`` is the LambdaPoly multiplying theta**p; the tuple always
    has length N+1.  Arithmetic closes over the order: products are Cauchy
    products with terms beyond theta**N discarded, and operands of different
    orders are rejected rather than silently extended.
    """

    coeffs: tuple

    def __post_init__(self) -> None:
        cs = tuple(c if isinstance(c, LambdaPoly) else LambdaPoly.const(c) for c in self.coeffs)
        if not cs:
            raise ValueError("a series needs at least the constant coefficient")
        object.__setattr__(self, "coeffs", cs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def zero(cls, order: int) -> "ThetaSeries":
        return cls((LP_ZERO,) * (order + 1))

    @classmethod
    def one(cls, order: int) -> "ThetaSeries":
        return cls((LP_ONE,) + (LP_ZERO,) * order)

    @classmethod
    def from_coeffs(cls, coeffs: Iterable, order: int) -> "ThetaSeries":
        """Build a series of the given order, padding with zeros."""
        cs = list(coeffs)
        if len(cs) > order + 1:
            raise ValueError(f"{len(cs)} coefficients exceed order {order}")
        cs += [LP_ZERO] * (order + 1 - len(cs))
        return cls(tuple(cs))

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.coeffs)

    def scale(self, factor: ScalarLike) -> "ThetaSeries":
        g = _as_gaussian(factor)
        return ThetaSeries(tuple(c.scale(g) for c in self.coeffs))

    def scale_poly(self, poly: LambdaPoly) -> "ThetaSeries":
        return ThetaSeries(tuple(c * poly for c in self.coeffs))

    def __add__(self, other: "ThetaSeries") -> "ThetaSeries":
        return series_add(self, other)

    def __sub__(self, other: "ThetaSeries") -> "ThetaSeries":
        return series_sub(self, other)

    def __mul__(self, other: "ThetaSeries") -> "ThetaSeries":
        return series_mul(self, other)

    def __str__(self) -> str:
        parts = []
        for p, c in enumerate(self.coeffs):
            if c.is_zero:
                continue
            body = c.to_string()
            if p == 0:
                parts.append(body)
            else:
                power = "theta" if p == 1 else f"theta^{p}"
                parts.append(power if body == "1" else f"({body})*{power}")
        return " + ".join(parts) if parts else "0"


def _check_orders(a: ThetaSeries, b: ThetaSeries) -> None:
    if a.order != b.order:
        raise OrderMismatchError(f"series orders differ: {a.order} vs {b.order}")


def series_add(a: ThetaSeries, b: ThetaSeries) -> ThetaSeries:
    _check_orders(a, b)
    return ThetaSeries(tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))


def series_sub(a: ThetaSeries, b: ThetaSeries) -> ThetaSeries:
    _check_orders(a, b)
    return ThetaSeries(tuple(x - y for x, y in zip(a.coeffs, b.coeffs)))


def series_mul(a: ThetaSeries, b: ThetaSeries) -> ThetaSeries:
    """Cauchy product truncated at the common order."""
    _check_orders(a, b)
    n = a.order
    out = [LP_ZERO] * (n + 1)
    for j, x in enumerate(a.coeffs):
        if x.is_zero:
            continue
        for k in range(n + 1 - j):
            y = b.coeffs[k]
            if y.is_zero:
                continue
            out[j + k] = out[j + k] + x * y
    return ThetaSeries(tuple(out))


def series_log(s: ThetaSeries) -> ThetaSeries:
    """Logarithm of a series with constant term 1.

    Computed as -sum_{m=1..N} (1-s)**m / m, which is exact at order N
    because (1-s)**m contributes only to theta-orders >= m.
    """
    if s.coeffs[0] != LP_ONE:
        raise SeriesPreconditionError("series_log requires constant term 1")
    n = s.order
    u = series_sub(ThetaSeries.one(n), s)
    total = ThetaSeries.zero(n)
    power = None
    for m in range(1, n + 1):
        power = u if power is None else series_mul(power, u)
        if power.is_zero:
            break
        total = series_add(total, power.scale(Fraction(1, m)))
    return ThetaSeries(tuple(-c for c in total.coeffs))


def series_exp(s: ThetaSeries) -> ThetaSeries:
    """Exponential of a series with constant term 0, summed exactly
    through order N."""
    if not s.coeffs[0].is_zero:
        raise SeriesPreconditionError("series_exp requires constant term 0")
    n = s.order
    total = ThetaSeries.one(n)
    power = ThetaSeries.one(n)
    fact = 1
    for m in range(1, n + 1):
        power = series_mul(power, s)
        if power.is_zero:
            break
        fact *= m
        total = series_add(total, power.scale(Fraction(1, fact)))
    return total

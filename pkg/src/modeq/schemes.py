"""Scheme model, text-format parser/renderer, and the builtin catalog.

A scheme is the explicit one-step update

    u_j^{n+1} = u_j^n + lambda * sum_p B_p(lambda) u_{j+p}^n

for the mesh ratio lambda = dt/dx^q, together with the target PDE

    u_t + sum_p A_p d^p u/dx^p = 0.

Stencil weights are lambda-polynomials so that schemes whose coefficients
depend on the mesh ratio (Lax-Wendroff) fit the same form.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Union

from .exactalg import LP_ZERO, GaussianRational, LambdaPoly

__all__ = [
    "SchemeSpec",
    "CatalogEntry",
    "GoldenData",
    "SchemeError",
    "SchemeParseError",
    "SchemeConsistencyError",
    "parse_scheme",
    "render_scheme",
    "builtin_catalog",
    "catalog_entry",
    "catalog_scheme",
]


class SchemeError(ValueError):
    """Invalid scheme input (syntax or semantic)."""


class SchemeParseError(SchemeError):
    """Syntax error in a scheme file, with 1-based line/column position."""

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class SchemeConsistencyError(SchemeError):
    """The stencil violates a structural invariant (e.g. sum B_p != 0)."""


@dataclass(frozen=True)
class SchemeSpec:
    """Validated scheme: name, exponent q, stencil weights and target PDE.

    ``stencil`` and ``pde`` may be passed as mappings; they are normalized
    to sorted tuples so the value is immutable and hashable.
    """

    name: str
    q: int
    stencil: tuple  # ((offset, LambdaPoly), ...) sorted by offset
    pde: tuple      # ((order, Fraction), ...) sorted by order

    def __post_init__(self) -> None:
        if isinstance(self.stencil, Mapping):
            object.__setattr__(
                self, "stencil", tuple(sorted(self.stencil.items()))
            )
        if isinstance(self.pde, Mapping):
            object.__setattr__(self, "pde", tuple(sorted(self.pde.items())))
        stencil = tuple(
            (int(p), w if isinstance(w, LambdaPoly) else LambdaPoly.const(w))
            for p, w in self.stencil
        )
        pde = tuple((int(p), Fraction(a)) for p, a in self.pde)
        object.__setattr__(self, "stencil", stencil)
        object.__setattr__(self, "pde", pde)
        self._validate()

    def _validate(self) -> None:
        if not isinstance(self.q, int) or self.q < 1:
            raise SchemeError(f"q must be a positive integer, got {self.q!r}")
        if not self.stencil:
            raise SchemeError("stencil is empty")
        offsets = [p for p, _ in self.stencil]
        if len(set(offsets)) != len(offsets):
            raise SchemeError("duplicate stencil offset")
        if all(w.is_zero for _, w in self.stencil):
            raise SchemeError("stencil has no nonzero weight")
        if not self.pde:
            raise SchemeError("no target PDE coefficient declared")
        if any(p < 1 for p, _ in self.pde):
            raise SchemeError("PDE derivative orders must be >= 1")
        total = LP_ZERO
        for _, w in self.stencil:
            total = total + w
        if not total.is_zero:
            raise SchemeConsistencyError(
                f"stencil weights must sum to zero, got {total}"
            )

    @property
    def offsets(self) -> tuple:
        return tuple(p for p, _ in self.stencil)

    def weight(self, offset: int) -> LambdaPoly:
        for p, w in self.stencil:
            if p == offset:
                return w
        return LP_ZERO

    def stencil_map(self) -> dict:
        return dict(self.stencil)

    def pde_map(self) -> dict:
        return dict(self.pde)

    def pde_coeff(self, order: int) -> Fraction:
        for p, a in self.pde:
            if p == order:
                return a
        return Fraction(0)

    @property
    def pde_order(self) -> int:
        return max(p for p, _ in self.pde)

    @property
    def n_left(self) -> int:
        return max(0, -min(self.offsets))

    @property
    def n_right(self) -> int:
        return max(0, max(self.offsets))

    @property
    def has_real_stencil(self) -> bool:
        return all(w.is_real for _, w in self.stencil)


@dataclass(frozen=True)
class GoldenData:
    """Reference values for a scheme whose analysis is known in closed form."""

    mu_table: tuple = ()            # ((p, LambdaPoly), ...)
    stability_bound: Optional[Fraction] = None    # von Neumann: lambda <= bound
    contraction_bound: Optional[Fraction] = None  # |1 - S| < 1: lambda <= bound


@dataclass(frozen=True)
class CatalogEntry:
    scheme: SchemeSpec
    expected: Optional[GoldenData] = None


# ---------------------------------------------------------------------------
# Text format
#
#   scheme <identifier>
#   q = <positive integer>
#   pde A[<order>] = <rational>          (repeatable)
#   stencil B[<offset>] = <poly>         (repeatable)
#
# <poly> is a sum of terms  <rational>, <rational>*lambda[^k], lambda[^k];
# '#' starts a comment; rationals are "a/b" or integers.
# ---------------------------------------------------------------------------

_RAT = r"-?\d+(?:/\d+)?"
_LINE_PATTERNS = {
    "scheme": re.compile(r"scheme\s+([A-Za-z_][A-Za-z0-9_]*)\s*$"),
    "q": re.compile(r"q\s*=\s*(-?\d+)\s*$"),
    "pde": re.compile(rf"pde\s+A\[(-?\d+)\]\s*=\s*({_RAT})\s*$"),
    "stencil": re.compile(r"stencil\s+B\[(-?\d+)\]\s*=\s*(.+?)\s*$"),
}

_POLY_TOKEN = re.compile(
    r"\s*(?:(?P<rat>\d+(?:/\d+)?)|(?P<lam>lambda)|(?P<op>[-+*^]))"
)


def _parse_poly(text: str, line_no: int, col0: int) -> LambdaPoly:
    """Parse a stencil polynomial; col0 is the 1-based column of its start."""
    tokens: list[tuple[str, str, int]] = []
    pos = 0
    while pos < len(text):
        m = _POLY_TOKEN.match(text, pos)
        if not m:
            skip = len(text[pos:]) - len(text[pos:].lstrip())
            raise SchemeParseError(
                f"unexpected character {text[pos + skip]!r} in polynomial",
                line_no,
                col0 + pos + skip,
            )
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), col0 + m.start(kind)))
        pos = m.end()

    poly = LP_ZERO
    i = 0
    first = True
    while i < len(tokens):
        sign = 1
        # optional sign before the first term, mandatory between terms
        if tokens[i][0] == "op" and tokens[i][1] in "+-":
            sign = -1 if tokens[i][1] == "-" else 1
            i += 1
        elif not first:
            raise SchemeParseError(
                "expected '+' or '-' between terms", line_no, tokens[i][2]
            )
        first = False
        if i >= len(tokens):
            raise SchemeParseError("dangling sign in polynomial", line_no, col0)

        coeff = Fraction(1)
        power = 0
        kind, value, col = tokens[i]
        if kind == "rat":
            coeff = Fraction(value)
            i += 1
            if i < len(tokens) and tokens[i][:2] == ("op", "*"):
                i += 1
                if i >= len(tokens) or tokens[i][0] != "lam":
                    raise SchemeParseError(
                        "expected 'lambda' after '*'", line_no, tokens[i - 1][2]
                    )
                kind, value, col = tokens[i]
        if i < len(tokens) and tokens[i][0] == "lam":
            power = 1
            i += 1
            if i < len(tokens) and tokens[i][:2] == ("op", "^"):
                i += 1
                if i >= len(tokens) or tokens[i][0] != "rat" or "/" in tokens[i][1]:
                    raise SchemeParseError(
                        "expected integer exponent after '^'", line_no, col
                    )
                power = int(tokens[i][1])
                if power < 0:
                    raise SchemeParseError(
                        "exponent must be nonnegative", line_no, tokens[i][2]
                    )
                i += 1
        elif kind != "rat":
            raise SchemeParseError(
                f"unexpected token {value!r} in polynomial", line_no, col
            )
        term = LambdaPoly.const(coeff * sign).shift_up(power) if power else \
            LambdaPoly.const(coeff * sign)
        poly = poly + term
    if first:
        raise SchemeParseError("empty polynomial", line_no, col0)
    return poly


def parse_scheme(text: str) -> SchemeSpec:
    """Parse and validate a scheme description in the line-oriented format."""
    name: Optional[str] = None
    q: Optional[int] = None
    stencil: dict[int, LambdaPoly] = {}
    pde: dict[int, Fraction] = {}

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        indent = len(line) - len(stripped) + 1
        keyword = stripped.split(None, 1)[0]
        pattern = _LINE_PATTERNS.get(keyword)
        if pattern is None:
            raise SchemeParseError(f"unknown directive {keyword!r}", line_no, indent)
        m = pattern.match(stripped)
        if not m:
            raise SchemeParseError(
                f"malformed {keyword!r} directive", line_no, indent
            )
        if keyword == "scheme":
            if name is not None:
                raise SchemeParseError("duplicate 'scheme' line", line_no, indent)
            name = m.group(1)
        elif keyword == "q":
            if q is not None:
                raise SchemeParseError("duplicate 'q' line", line_no, indent)
            q = int(m.group(1))
            if q < 1:
                raise SchemeParseError("q must be >= 1", line_no, indent)
        elif keyword == "pde":
            order = int(m.group(1))
            if order < 1:
                raise SchemeParseError("PDE order must be >= 1", line_no, indent)
            if order in pde:
                raise SchemeParseError(
                    f"duplicate PDE order {order}", line_no, indent
                )
            pde[order] = Fraction(m.group(2))
        else:  # stencil
            offset = int(m.group(1))
            if offset in stencil:
                raise SchemeParseError(
                    f"duplicate stencil offset {offset}", line_no, indent
                )
            poly_text = m.group(2)
            poly_col = indent + stripped.index(poly_text, len("stencil"))
            stencil[offset] = _parse_poly(poly_text, line_no, poly_col)

    if name is None:
        raise SchemeParseError("missing 'scheme' line", 1)
    if q is None:
        raise SchemeParseError("missing 'q' line", 1)
    if not stencil:
        raise SchemeParseError("no stencil entries", 1)
    if not pde:
        raise SchemeParseError("no pde entries", 1)
    return SchemeSpec(name=name, q=q, stencil=stencil, pde=pde)


def _render_rational(x: Fraction) -> str:
    return str(x)


def _render_stencil_poly(poly: LambdaPoly) -> str:
    if poly.is_zero:
        return "0"
    if not poly.is_real:
        raise SchemeError("stencil file format carries rational coefficients only")
    parts = []
    for k, c in enumerate(poly.coeffs):
        r = c.re
        if not r:
            continue
        mag = _render_rational(abs(r))
        if k == 0:
            term = mag
        elif k == 1:
            term = "lambda" if mag == "1" else f"{mag}*lambda"
        else:
            term = f"lambda^{k}" if mag == "1" else f"{mag}*lambda^{k}"
        parts.append(("-" if r < 0 else "+") + term)
    return "".join(parts).lstrip("+")


def render_scheme(spec: SchemeSpec) -> str:
    """Render a SchemeSpec back to the text format (parse/render round trip)."""
    lines = [f"scheme {spec.name}", f"q = {spec.q}"]
    for order, a in spec.pde:
        lines.append(f"pde A[{order}] = {_render_rational(a)}")
    for offset, w in spec.stencil:
        lines.append(f"stencil B[{offset}] = {_render_stencil_poly(w)}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Builtin catalog
# ---------------------------------------------------------------------------

def _poly(*rationals: Union[int, str, Fraction]) -> LambdaPoly:
    return LambdaPoly(tuple(GaussianRational(Fraction(r)) for r in rationals))


def _heat_centered() -> CatalogEntry:
    scheme = SchemeSpec(
        name="heat_centered",
        q=2,
        stencil={-1: _poly(1), 0: _poly(-2), 1: _poly(1)},
        pde={2: Fraction(-1)},
    )
    golden = GoldenData(
        mu_table=(
            (2, _poly(1)),
            (4, _poly("1/12", "-1/2")),
            (6, _poly("1/360", "-1/12", "1/3")),
            (8, _poly("1/20160", "-1/160", "1/12", "-1/4")),
        ),
        stability_bound=Fraction(1, 2),
        contraction_bound=Fraction(1, 4),
    )
    return CatalogEntry(scheme=scheme, expected=golden)


def _upwind_euler() -> CatalogEntry:
    scheme = SchemeSpec(
        name="upwind_euler",
        q=1,
        stencil={-1: _poly(1), 0: _poly(-1)},
        pde={1: Fraction(1)},
    )
    golden = GoldenData(
        mu_table=(
            (1, _poly(-1)),
            (2, _poly("1/2", "-1/2")),
            (3, _poly("-1/6", "1/2", "-1/3")),
            (4, _poly("1/24", "-7/24", "1/2", "-1/4")),
        ),
        stability_bound=Fraction(1),
        contraction_bound=Fraction(1, 2),
    )
    return CatalogEntry(scheme=scheme, expected=golden)


def _lax_wendroff() -> CatalogEntry:
    # lambda-dependent stencil stress case; no closed-form reference data
    scheme = SchemeSpec(
        name="lax_wendroff",
        q=1,
        stencil={
            -1: _poly("1/2", "1/2"),
            0: _poly(0, -1),
            1: _poly("-1/2", "1/2"),
        },
        pde={1: Fraction(1)},
    )
    return CatalogEntry(scheme=scheme, expected=None)


def builtin_catalog() -> list[CatalogEntry]:
    """The builtin schemes, in a fixed order."""
    return [_heat_centered(), _upwind_euler(), _lax_wendroff()]


def catalog_entry(name: str) -> CatalogEntry:
    for entry in builtin_catalog():
        if entry.scheme.name == name:
            return entry
    known = ", ".join(e.scheme.name for e in builtin_catalog())
    raise SchemeError(f"unknown catalog scheme {name!r} (known: {known})")


def catalog_scheme(name: str) -> SchemeSpec:
    return catalog_entry(name).scheme

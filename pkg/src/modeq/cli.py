"""Command-line front end.

Subcommands: ``modeq`` (modified-equation table), ``regions`` (stability and
contraction scan), ``radius`` (convergence-radius estimates), ``figures``
(amplification-curve and mode-evolution CSV data), ``certify``
(finite-horizon truncation certificate), ``symmetry`` (upwind mirror check).

Exit codes: 0 success, 1 input/validation error, 2 internal cross-check
failure.  Outputs are deterministic: fixed key order, floats rendered with
up to 17 significant digits.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import empirics, radius, spectra
from .derivation import CrossCheckError, consistency_report, derive_elimination, derive_log
from .schemes import SchemeError, catalog_scheme, parse_scheme

DEFAULT_MAX_ORDER = 64
DEFAULT_ROOT_TEST_ORDER = 40


class UsageError(ValueError):
    """Bad command-line input; maps to exit code 1."""


def _max_order() -> int:
    raw = os.environ.get("MODEQ_MAX_ORDER", str(DEFAULT_MAX_ORDER))
    try:
        value = int(raw)
    except ValueError as exc:
        raise UsageError(f"MODEQ_MAX_ORDER must be an integer, got {raw!r}") from exc
    if value < 1:
        raise UsageError(f"MODEQ_MAX_ORDER must be >= 1, got {value}")
    return value


def _check_order(n: int) -> int:
    cap = _max_order()
    if n > cap:
        raise UsageError(f"series order {n} exceeds MODEQ_MAX_ORDER = {cap}")
    if n < 1:
        raise UsageError(f"series order must be >= 1, got {n}")
    return n


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return format(value, ".17g")
    return str(value)


def _load_scheme(args: argparse.Namespace):
    if args.catalog and args.file:
        raise UsageError("give exactly one of --catalog or --file")
    if args.catalog:
        return catalog_scheme(args.catalog)
    if args.file:
        try:
            text = Path(args.file).read_text(encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"cannot read {args.file}: {exc}") from exc
        return parse_scheme(text)
    raise UsageError("a scheme source is required: --catalog NAME or --file PATH")


def _parse_orders(raw: Optional[str], default: Optional[Sequence[int]] = None) -> tuple:
    if raw is None:
        if default is None:
            raise UsageError("-N is required for this subcommand")
        return tuple(default)
    try:
        orders = tuple(int(tok) for tok in raw.split(",") if tok)
    except ValueError as exc:
        raise UsageError(f"-N expects a comma-separated integer list, got {raw!r}") from exc
    if not orders:
        raise UsageError("-N list is empty")
    for n in orders:
        _check_order(n)
    return orders


def _parse_lambdas(args: argparse.Namespace) -> list[Fraction]:
    if not args.lambdas:
        raise UsageError("--lambdas is required for this subcommand")
    values = []
    for tok in args.lambdas.split(","):
        tok = tok.strip()
        if not tok:
            continue
        try:
            values.append(Fraction(tok))
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"bad lambda value {tok!r}") from exc
    if not values:
        raise UsageError("--lambdas list is empty")
    return values


def _parse_range(raw: str) -> tuple:
    try:
        lo, hi, count = raw.split(":")
        return (float(lo), float(hi), int(count))
    except ValueError as exc:
        raise UsageError(
            f"--lambda-range expects LO:HI:COUNT, got {raw!r}"
        ) from exc


def _emit_json(obj, args: argparse.Namespace, filename: str) -> None:
    text = json.dumps(obj, indent=2) + "\n"
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / filename).write_text(text, encoding="utf-8")
        print(f"wrote {out_dir / filename}")
    else:
        sys.stdout.write(text)


def _write_csv(path: Path, header: Sequence[str], rows) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
    print(f"wrote {path}")


def _require_json_format(args: argparse.Namespace) -> None:
    if args.format == "csv":
        raise UsageError(
            "csv output is only available for curve data; this report is JSON"
        )


def _lambda_tag(lam) -> str:
    return format(float(lam), "g")


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_modeq(args: argparse.Namespace) -> int:
    _require_json_format(args)
    scheme = _load_scheme(args)
    orders = _parse_orders(args.orders, default=(8,))
    if len(orders) != 1:
        raise UsageError("the modeq subcommand takes a single -N value")
    order = orders[0]
    modeq = derive_log(scheme, order)
    if args.verify:
        other = derive_elimination(scheme, order)
        if other != modeq:
            bad = [
                p
                for p in range(1, order + 1)
                if modeq.coeff(p) != other.coeff(p)
            ]
            raise CrossCheckError(
                f"log and elimination engines disagree at theta-orders {bad}"
            )
    payload = modeq.to_json_dict()
    payload["consistency"] = consistency_report(scheme, modeq).to_json_dict()
    _emit_json(payload, args, f"{scheme.name}_modeq.json")
    return 0


def cmd_regions(args: argparse.Namespace) -> int:
    scheme = _load_scheme(args)
    if not args.lambda_range:
        raise UsageError("--lambda-range LO:HI:COUNT is required")
    lambda_range = _parse_range(args.lambda_range)
    orders = _parse_orders(args.orders, default=())
    report = spectra.region_scan(
        scheme, lambda_range, grid=args.grid, orders=orders
    )
    out_dir = Path(args.out or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    json_path = out_dir / f"{scheme.name}_regions.json"
    json_path.write_text(
        json.dumps(report.to_json_dict(), indent=2) + "\n", encoding="utf-8"
    )
    print(f"wrote {json_path}")
    header = [
        "lambda",
        "max_abs_S",
        "max_abs_one_minus_S",
        "theta_m",
        "in_Rs",
        "in_Omega_c",
    ] + [f"trunc_stable_N{n}" for n in report.orders]
    rows = (
        [
            s.lam,
            s.max_abs_s,
            s.max_abs_one_minus_s,
            s.theta_m,
            s.in_rs,
            s.in_omega_c,
        ]
        + [s.trunc_stable[n] for n in report.orders]
        for s in report.samples
    )
    _write_csv(out_dir / f"{scheme.name}_regions.csv", header, rows)
    rs = report.rs_boundary()
    oc = report.omega_c_boundary()
    print(f"R_s boundary: {'none' if rs is None else _fmt(rs)}")
    print(f"Omega_c boundary: {'none' if oc is None else _fmt(oc)}")
    return 0


def cmd_radius(args: argparse.Namespace) -> int:
    _require_json_format(args)
    scheme = _load_scheme(args)
    lambdas = _parse_lambdas(args)
    orders = _parse_orders(args.orders, default=(DEFAULT_ROOT_TEST_ORDER,))
    order = max(orders)
    _check_order(order)
    modeq = derive_log(scheme, order)
    results = []
    for lam in lambdas:
        entry = {
            "lambda": str(lam),
            "root_test": radius.radius_root_test(modeq, lam).to_json_dict(),
            "zero_search": radius.radius_zero_search(scheme, lam).to_json_dict(),
        }
        if scheme.name == "heat_centered" and lam >= Fraction(1, 4):
            entry["closed_form"] = radius.heat_closed_form_radius(lam).to_json_dict()
        else:
            entry["closed_form"] = None
        results.append(entry)
    _emit_json({"scheme": scheme.name, "estimates": results}, args,
               f"{scheme.name}_radius.json")
    return 0


def cmd_figures(args: argparse.Namespace) -> int:
    scheme = _load_scheme(args)
    lambdas = _parse_lambdas(args)
    orders = _parse_orders(args.orders, default=None)
    out_dir = Path(args.out or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    modeq = derive_log(scheme, max(orders))
    tables = spectra.figure_data(
        scheme, lambdas, orders, grid=args.grid, modeq=modeq
    )
    for table in tables:
        path = out_dir / f"{scheme.name}_lambda{_lambda_tag(table.lam)}.csv"
        _write_csv(path, table.csv_header(), table.csv_rows())
    for lam in lambdas:
        evo = empirics.evolve_and_compare(
            scheme, modeq, lam, max(orders), args.steps, args.gridsize
        )
        path = out_dir / f"{scheme.name}_evolve_lambda{_lambda_tag(lam)}.csv"
        _write_csv(path, evo.CSV_HEADER, evo.csv_rows())
    return 0


def cmd_certify(args: argparse.Namespace) -> int:
    _require_json_format(args)
    scheme = _load_scheme(args)
    lambdas = _parse_lambdas(args)
    orders = _parse_orders(args.orders, default=(4,))
    reference = args.reference_order or 4 * max(orders)
    _check_order(reference)
    modeq = derive_log(scheme, reference)
    certificates = []
    for lam in lambdas:
        for order in orders:
            cert = spectra.truncation_certificate(
                scheme,
                modeq,
                lam,
                order,
                support_m=args.support_m,
                horizon_t=args.horizon_t,
                reference_order=reference,
                grid=args.grid,
            )
            certificates.append(cert.to_json_dict())
    _emit_json({"scheme": scheme.name, "certificates": certificates}, args,
               f"{scheme.name}_certify.json")
    return 0


def cmd_symmetry(args: argparse.Namespace) -> int:
    _require_json_format(args)
    lambdas = _parse_lambdas(args)
    orders = _parse_orders(args.orders, default=(8,))
    order = max(orders)
    reports = []
    failed = False
    modeq = derive_log(catalog_scheme("upwind_euler"), order)
    for lam in lambdas:
        report = spectra.upwind_symmetry_check(
            lam, order, grid=args.grid, modeq=modeq
        )
        reports.append(report.to_json_dict())
        failed = failed or not report.ok
    _emit_json({"scheme": "upwind_euler", "reports": reports}, args,
               "upwind_euler_symmetry.json")
    if failed:
        print("symmetry identity violated; see report", file=sys.stderr)
        return 2
    return 0


# ---------------------------------------------------------------------------
# Argument plumbing
# ---------------------------------------------------------------------------

def _add_common(parser: argparse.ArgumentParser, scheme_source: bool = True) -> None:
    if scheme_source:
        parser.add_argument("--catalog", metavar="NAME", help="builtin scheme name")
        parser.add_argument("--file", metavar="PATH", help="scheme description file")
    parser.add_argument("-N", dest="orders", metavar="LIST",
                        help="comma-separated truncation orders")
    parser.add_argument("--lambdas", metavar="LIST",
                        help="comma-separated mesh ratios (rationals or decimals)")
    parser.add_argument("--lambda-range", metavar="LO:HI:COUNT",
                        help="uniform mesh-ratio sweep")
    parser.add_argument("--grid", type=int, default=spectra.DEFAULT_GRID,
                        help="theta grid size on [0, pi] (default %(default)s)")
    parser.add_argument("--out", metavar="DIR", help="output directory")
    parser.add_argument("--format", choices=("csv", "json"), default="json",
                        help="report format where a choice exists")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modeq",
        description="Modified-equation and von Neumann stability analysis "
                    "of explicit linear finite-difference schemes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("modeq", help="derive the modified-equation table")
    _add_common(p)
    p.add_argument("--verify", action="store_true",
                   help="cross-check the log engine against elimination")
    p.set_defaults(func=cmd_modeq)

    p = sub.add_parser("regions", help="scan stability/contraction regions")
    _add_common(p)
    p.set_defaults(func=cmd_regions)

    p = sub.add_parser("radius", help="estimate the generator series radius")
    _add_common(p)
    p.set_defaults(func=cmd_radius)

    p = sub.add_parser("figures", help="emit |S| vs |S_N| curve data")
    _add_common(p)
    p.add_argument("--steps", type=int, default=100,
                   help="evolution steps for the mode-decay table")
    p.add_argument("--gridsize", type=int, default=64,
                   help="periodic grid size for the mode-decay table")
    p.set_defaults(func=cmd_figures)

    p = sub.add_parser("certify", help="finite-horizon truncation certificate")
    _add_common(p)
    p.add_argument("--support-M", dest="support_m", type=float, default=math.pi,
                   help="frequency support bound (default pi)")
    p.add_argument("--horizon-T", dest="horizon_t", type=float, default=1.0,
                   help="time horizon (default 1.0)")
    p.add_argument("--reference-order", type=int, default=None,
                   help="partial-sum order for the tail estimate (default 4N)")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("symmetry", help="upwind mirror-symmetry check")
    _add_common(p, scheme_source=False)
    p.set_defaults(func=cmd_symmetry)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, SchemeError, spectra.CertificateRefusal, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (CrossCheckError, radius.ZeroSearchError) as exc:
        print(f"cross-check failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Batch command-line front-end.

Subcommands:

* ``eval``      -- single special-function evaluations;
* ``integrate`` -- finite-part integration of the named built-in integrands;
* ``table``     -- closed form vs quadrature sweeps over parameter grids (CSV);
* ``verify``    -- named verification suites (exit code 2 on any failure);
* ``sigma``     -- self-energy table over a dimension range;
* ``green``     -- kernel values along a geodesic (CSV).

Output is deterministic for a fixed invocation: floats are printed with 17
significant digits and sampled grids derive from a fixed seed.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import Iterable, Sequence

import numpy as np

from . import closedforms, genquad, pointgreen, verify
from . import specfun
from .errors import NumericsError

DEFAULT_RTOL = float(os.environ.get("GENINT_RTOL", "1e-10"))


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _parse_complex(text: str) -> complex:
    cleaned = text.strip().replace("i", "j")
    if cleaned.endswith("j") and cleaned[:-1].lstrip("+-").replace(".", "").isdigit() is False:
        pass
    try:
        return complex(cleaned)
    except ValueError as exc:
        raise NumericsError(f"cli: cannot parse complex value {text!r}") from exc


def _parse_grid(text: str) -> list[float]:
    """'start:stop:count' -> linspace; a bare number -> singleton."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise NumericsError(f"cli: grid spec must be start:stop:count, got {text!r}")
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
        if n < 1:
            raise NumericsError("cli: grid count must be positive")
        return [float(v) for v in np.linspace(lo, hi, n)]
    return [float(text)]


def _emit(lines: Iterable[str]) -> None:
    out = sys.stdout
    for line in lines:
        out.write(line + "\n")


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(1)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_eval(args) -> int:
    fn = args.fn
    if fn == "gamma":
        value = specfun.gamma(_maybe_complex(args.z))
    elif fn == "digamma":
        value = specfun.digamma(_maybe_complex(args.z))
    elif fn == "pochhammer":
        value = specfun.pochhammer(_maybe_complex(args.z), args.n)
    elif fn == "bessel-k":
        value = specfun.bessel_k(args.alpha, args.x)
    elif fn == "gegenbauer-s":
        value = specfun.gegenbauer_s(args.alpha, _parse_complex(args.lam), args.w)
    elif fn == "gegenbauer-z":
        value = specfun.gegenbauer_z(args.alpha, _parse_complex(args.lam).real, args.w)
    else:
        raise NumericsError(f"cli: unknown function {fn!r}")
    record: dict = {"fn": fn}
    if isinstance(value, complex):
        record["value"] = float(value.real)
        record["value_imag"] = float(value.imag)
    else:
        record["value"] = float(value)
    _emit([json.dumps(record)])
    return 0


def _maybe_complex(text: str):
    z = _parse_complex(text)
    return z if z.imag != 0.0 else z.real


def _cmd_integrate(args) -> int:
    if args.fn == "bessel-product":
        integrand = genquad.bessel_product_integrand(args.alpha, args.a, args.b)
    elif args.fn == "gegenbauer-z":
        integrand = genquad.gegenbauer_integrand("Z", args.alpha, args.l1, args.l2)
    elif args.fn == "gegenbauer-s":
        integrand = genquad.gegenbauer_integrand("S", args.alpha, args.beta1, args.beta2)
    elif args.fn == "gamma-power":
        integrand = genquad.gamma_power_integrand(args.p)
    else:
        raise NumericsError(f"cli: unknown integrand {args.fn!r}")
    res = genquad.gen_integrate(integrand, split=args.split, rtol=args.rtol)
    _emit([json.dumps({
        "value": float(res.value),
        "anomaly": float(res.anomaly),
        "tolerance_achieved": float(res.tol_achieved),
    })])
    return 0


def _table_rows(args):
    formula = args.formula
    if formula in ("mac-bilinear", "mac-square"):
        alphas = _parse_grid(args.alpha)
        avals = _parse_grid(args.a) if formula == "mac-bilinear" else [None]
        bvals = _parse_grid(args.b)
        header = ("alpha,a,b,closed_form,quadrature,rel_diff"
                  if formula == "mac-bilinear" else
                  "alpha,b,closed_form,quadrature,rel_diff")
        yield header
        for alpha in alphas:
            for a in avals:
                for b in bvals:
                    if formula == "mac-bilinear":
                        closed = closedforms.mac_bilinear_closed(alpha, a, b)
                        numeric = (verify.mac_bilinear_quadrature(alpha, a, b)
                                   if abs(alpha) < 1.0 and alpha != round(alpha)
                                   else genquad.gen_bilinear_macdonald(alpha, a, b))
                        cells = [alpha, a, b, closed, numeric]
                    else:
                        closed = closedforms.mac_square_closed(alpha, b)
                        numeric = (verify.mac_square_quadrature(alpha, b)
                                   if abs(alpha) < 1.0 and alpha != round(alpha)
                                   else genquad.gen_bilinear_macdonald(alpha, b, b))
                        cells = [alpha, b, closed, numeric]
                    rel = abs(closed - numeric) / max(abs(closed), 1e-300)
                    yield ",".join(_fmt(c) for c in cells + [rel])
    elif formula == "geg-s":
        yield "alpha,beta1,beta2,closed_form,quadrature,rel_diff"
        for alpha in _parse_grid(args.alpha):
            for b1 in _parse_grid(args.beta1):
                for b2 in _parse_grid(args.beta2):
                    closed = closedforms.geg_s_bilinear_closed(alpha, b1, b2)
                    numeric = (verify.geg_s_quadrature(alpha, b1, b2)
                               if abs(alpha) < 1.0
                               else genquad.gen_bilinear_gegenbauer("S", alpha, b1, b2))
                    rel = abs(closed - numeric) / max(abs(closed), 1e-300)
                    yield ",".join(_fmt(c) for c in (alpha, b1, b2, closed, numeric, rel))
    elif formula == "geg-z":
        yield "alpha,l1,l2,closed_form,quadrature,rel_diff"
        for alpha in _parse_grid(args.alpha):
            for l1 in _parse_grid(args.l1):
                for l2 in _parse_grid(args.l2):
                    closed = closedforms.geg_z_bilinear_closed(alpha, l1, l2)
                    numeric = (verify.geg_z_quadrature(alpha, l1, l2)
                               if abs(alpha) < 1.0
                               else genquad.gen_bilinear_gegenbauer("Z", alpha, l1, l2))
                    rel = abs(closed - numeric) / max(abs(closed), 1e-300)
                    yield ",".join(_fmt(c) for c in (alpha, l1, l2, closed, numeric, rel))
    else:
        raise NumericsError(f"cli: unknown formula {formula!r}")


def _cmd_table(args) -> int:
    _emit(_table_rows(args))
    return 0


def _cmd_verify(args) -> int:
    rows = verify.run_suite(args.suite, seed=args.seed)
    if args.format == "csv":
        lines = ["suite,name,value,reference,rel_err,tol,status"]
        for r in rows:
            lines.append(",".join([
                r.suite, r.name.replace(",", ";"), _fmt(r.value), _fmt(r.reference),
                _fmt(r.error), _fmt(r.tol), "pass" if r.passed else "FAIL",
            ]))
    else:
        lines = [json.dumps({
            "suite": r.suite, "name": r.name, "value": float(r.value),
            "reference": float(r.reference), "rel_err": float(r.error),
            "tol": float(r.tol), "passed": bool(r.passed),
        }) for r in rows]
    _emit(lines)
    return 0 if all(r.passed for r in rows) else 2


def _cmd_sigma(args) -> int:
    text = args.dim_range
    if ".." in text:
        lo, hi = text.split("..")
        dims = range(int(lo), int(hi) + 1)
    else:
        dims = [int(text)]
    lines = ["d,sigma,dsigma_lhs,dsigma_rhs,rel_diff"]
    for d in dims:
        val = pointgreen.sigma(d, args.beta)
        lhs, rhs = pointgreen.sigma_derivative_check(d, args.beta)
        rel = abs(lhs - rhs) / max(abs(rhs), 1e-300)
        lines.append(",".join([str(d)] + [_fmt(v) for v in (val, lhs, rhs, rel)]))
    _emit(lines)
    return 0


def _cmd_green(args) -> int:
    geometry = pointgreen.Geometry(args.geometry, args.dim)
    gamma = math.inf if args.gamma.strip().lower() in ("inf", "infinity") \
        else float(args.gamma)
    spec = pointgreen.KreinKernelSpec(geometry, args.beta, gamma)
    y = pointgreen.geodesic_point(geometry, args.at)
    lines = ["arclength,kernel"]
    for s in _parse_grid(args.along):
        x = pointgreen.geodesic_point(geometry, s)
        val = pointgreen.krein_green(spec, x, y)
        lines.append(f"{_fmt(s)},{_fmt(val)}")
    _emit(lines)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> _Parser:
    p = _Parser(prog="genint",
                description="Finite-part integrals, Macdonald/Gegenbauer "
                            "functions, and point-interaction Green functions.")
    sub = p.add_subparsers(dest="command", required=True)

    pe = sub.add_parser("eval", help="evaluate a special function")
    pe.add_argument("--fn", required=True,
                    choices=["gamma", "digamma", "pochhammer", "bessel-k",
                             "gegenbauer-s", "gegenbauer-z"])
    pe.add_argument("--z", default="1.0", help="argument (gamma family)")
    pe.add_argument("--n", type=int, default=0, help="pochhammer order")
    pe.add_argument("--alpha", type=float, default=0.0)
    pe.add_argument("--lam", "--lambda", dest="lam", default="1.0",
                    help="degree; accepts forms like 0.7, 0.7i")
    pe.add_argument("--w", type=float, default=1.5)
    pe.add_argument("--x", type=float, default=1.0)
    pe.set_defaults(handler=_cmd_eval)

    pi = sub.add_parser("integrate", help="finite-part integration of a built-in")
    pi.add_argument("--fn", required=True,
                    choices=["bessel-product", "gegenbauer-s", "gegenbauer-z",
                             "gamma-power"])
    pi.add_argument("--alpha", type=float, default=0.5)
    pi.add_argument("--a", type=float, default=1.0)
    pi.add_argument("--b", type=float, default=1.0)
    pi.add_argument("--l1", type=float, default=1.0)
    pi.add_argument("--l2", type=float, default=1.0)
    pi.add_argument("--beta1", type=float, default=1.0)
    pi.add_argument("--beta2", type=float, default=1.0)
    pi.add_argument("--p", type=float, default=-0.5, help="gamma-power exponent")
    pi.add_argument("--split", type=float, default=1.0)
    pi.add_argument("--rtol", type=float, default=DEFAULT_RTOL)
    pi.set_defaults(handler=_cmd_integrate)

    pt = sub.add_parser("table", help="closed form vs quadrature sweep (CSV)")
    pt.add_argument("--formula", required=True,
                    choices=["mac-bilinear", "mac-square", "geg-s", "geg-z"])
    pt.add_argument("--alpha", default="0.5", help="value or start:stop:count")
    pt.add_argument("--a", default="2.0", help="value or start:stop:count")
    pt.add_argument("--b", default="1.0", help="value or start:stop:count")
    pt.add_argument("--l1", default="2.0")
    pt.add_argument("--l2", default="1.0")
    pt.add_argument("--beta1", default="0.5")
    pt.add_argument("--beta2", default="1.0")
    pt.set_defaults(handler=_cmd_table)

    pv = sub.add_parser("verify", help="run a verification suite")
    pv.add_argument("--suite", default="all",
                    choices=sorted(verify.SUITES) + ["all"])
    pv.add_argument("--seed", type=int, default=verify.DEFAULT_SEED)
    pv.add_argument("--format", default="csv", choices=["csv", "jsonl"])
    pv.set_defaults(handler=_cmd_verify)

    ps = sub.add_parser("sigma", help="self-energy table over dimensions")
    ps.add_argument("--dim-range", default="1..6", help="e.g. 1..8 or 3")
    ps.add_argument("--beta", type=float, default=1.0)
    ps.set_defaults(handler=_cmd_sigma)

    pg = sub.add_parser("green", help="kernel values along a geodesic (CSV)")
    pg.add_argument("--geometry", default="euclidean",
                    choices=["euclidean", "hyperbolic", "spherical"])
    pg.add_argument("--dim", type=int, default=3)
    pg.add_argument("--beta", type=float, default=1.0)
    pg.add_argument("--gamma", default="inf", help="coupling, or 'inf'")
    pg.add_argument("--along", default="0.2:2.0:10", help="start:stop:count")
    pg.add_argument("--at", type=float, default=1.0,
                    help="arclength of the second kernel argument")
    pg.set_defaults(handler=_cmd_green)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except NumericsError as exc:
        sys.stderr.write(f"error [{type(exc).__name__}/{exc.code}]: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())

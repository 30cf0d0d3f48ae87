"""Command-line front end: ``cmray {field-info,rayclass,invariant,verify}``.

Exit codes: 0 when everything passed, 1 when a verification check failed,
2 for invalid input or configuration.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

import mpmath

from .errors import CMRayError
from .invariants import fricke_invariant
from .qfield import embed, make_field
from .rayclass import RayClassGroup, characters, hilbert_subgroup, make_modulus, ring_subgroup
from .suite import SUITES, report_passed, run_suite

PREC_ENV = "CMRAY_PREC_BITS"
DEFAULT_PREC = 256


class UsageError(Exception):
    pass


def _prec(args) -> int:
    if args.prec is not None:
        prec = args.prec
    else:
        raw = os.environ.get(PREC_ENV, str(DEFAULT_PREC))
        try:
            prec = int(raw)
        except ValueError:
            raise UsageError(f"{PREC_ENV} must be an integer, got {raw!r}")
    if prec < 64:
        raise UsageError("precision must be at least 64 bits")
    return prec


def _emit(args, doc: dict, lines: list[str]):
    print("\n".join(lines))
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")


def _table(rows: list[list[str]], header: list[str]) -> list[str]:
    widths = [max(len(str(r[i])) for r in rows + [header]) for i in range(len(header))]
    fmt = "  ".join("{:<%d}" % w for w in widths)
    out = [fmt.format(*header), fmt.format(*("-" * w for w in widths))]
    out += [fmt.format(*map(str, r)) for r in rows]
    return out


def cmd_field_info(args) -> int:
    f = make_field(args.disc)
    p1, p0 = f.tau_min_poly
    doc = {
        "field_disc": f.disc,
        "tau": f"({f.disc} + sqrt({f.disc}))/2",
        "tau_min_poly": f"x^2 + ({p1})x + ({p0})",
        "tau_numeric": mpmath.nstr(embed(f, f.tau, 64).z, 15),
        "unit_count": f.unit_count,
        "class_number": f.class_number,
    }
    lines = [f"{k:>14}: {v}" for k, v in doc.items()]
    _emit(args, doc, lines)
    return 0


def _group(args) -> RayClassGroup:
    if args.N is None:
        raise UsageError("--N is required")
    return RayClassGroup(make_modulus(make_field(args.disc), args.N))


def cmd_rayclass(args) -> int:
    g = _group(args)
    doc = {
        "field_disc": args.disc,
        "modulus_N": args.N,
        "order": g.order,
        "invariant_factors": list(g.structure),
        "ring_subgroup_order": ring_subgroup(g).order,
        "hilbert_subgroup_order": hilbert_subgroup(g).order,
        "character_count": len(characters(g)),
    }
    lines = [f"{k:>22}: {v}" for k, v in doc.items()]
    _emit(args, doc, lines)
    return 0


def cmd_invariant(args) -> int:
    g = _group(args)
    prec = _prec(args)
    rows, entries = [], []
    for C in g.elements:
        inv = fricke_invariant(g, C, args.family, prec)
        val = mpmath.nstr(inv.value.z, args.digits)
        rows.append([str(C), str(g.rep(C)), str(inv.label), val])
        entries.append({"class": list(C), "rep": str(g.rep(C)), "label": str(inv.label),
                        "omega": mpmath.nstr(inv.omega.z, args.digits), "value": val,
                        "error_radius": mpmath.nstr(inv.value.err, 3)})
    doc = {"field_disc": args.disc, "modulus_N": args.N, "family": args.family,
           "prec_bits": prec, "invariants": entries}
    _emit(args, doc, _table(rows, ["class", "representative", "label", "value"]))
    return 0


def cmd_verify(args) -> int:
    if args.N is None:
        raise UsageError("--N is required")
    prec = _prec(args)
    report = run_suite(args.disc, args.N, args.suite, prec, args.trunc, args.tol)
    rows = [[c["name"], c["status"], c["residual"], c["margin"]] for c in report["checks"]]
    lines = _table(rows, ["check", "status", "residual", "margin"])
    for s in report["skipped"]:
        lines.append(f"skipped {s['name']}: {s['reason']}")
    ok = report_passed(report)
    lines.append(f"{sum(c['status'] == 'pass' for c in report['checks'])}/{len(report['checks'])} checks passed")
    _emit(args, report, lines)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cmray", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, need_n=False):
        p.add_argument("--disc", type=int, required=True, help="fundamental discriminant d_K < 0")
        p.add_argument("--N", type=int, default=None, required=need_n, help="modulus N (f = N O_K)")
        p.add_argument("--prec", type=int, default=None, help=f"bits (default ${PREC_ENV} or 256)")
        p.add_argument("--json", default=None, help="write a JSON document to this path")

    p = sub.add_parser("field-info", help="tau_K, its minimal polynomial, units, class number")
    common(p)
    p.set_defaults(func=cmd_field_info)

    p = sub.add_parser("rayclass", help="structure of Cl(N O_K)")
    common(p, need_n=True)
    p.set_defaults(func=cmd_rayclass)

    p = sub.add_parser("invariant", help="Fricke or Siegel-Ramachandra invariants of every class")
    common(p, need_n=True)
    p.add_argument("--family", choices=["fricke", "siegel"], default="fricke")
    p.add_argument("--digits", type=int, default=20)
    p.set_defaults(func=cmd_invariant)

    p = sub.add_parser("verify", help="run a verification suite")
    common(p, need_n=True)
    p.add_argument("--suite", choices=SUITES, default="all")
    p.add_argument("--trunc", type=int, default=100_000, help="L-series norm bound B")
    p.add_argument("--tol", type=float, default=1e-3, help="limit formula residual tolerance")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CMRayError, UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

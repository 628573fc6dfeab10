"""Command-line front end.

Exit codes: 0 success, 1 validation or usage error, 2 numeric-contract failure
(a verified inequality or identity did not hold, or a numerical guard tripped).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .discrepancy import DEFAULT_CORNER_CAP, build_quadrature, default_resolution, star_discrepancy
from .errors import (
    CandidateSetTooLarge,
    CharDiscError,
    NumericalInconsistency,
    SamplerStall,
    WeightSystemTooLarge,
)
from .et_bound import constant_CG, verify
from .kernel_lab import (
    KernelParams,
    integral_operator_residual,
    kernel_mass_inner,
    kernel_tail,
)
from .polynomial import parse_poly
from .pushforward import density_F, push_point
from .root_system import DEFAULT_NODE_CAP, SUPPORTED_GROUPS, build_tables
from .sampling import (
    constant_sequence,
    default_kronecker_direction,
    kronecker_sequence,
    read_csv,
    sample_haar,
    sample_uniform_torus,
    write_csv,
)
from .torus_chars import TWO_PI, character_value

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC = 0, 1, 2
SCHEMA_VERSION = 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit with status 2, which we reserve
        raise UsageError(f"{self.prog}: {message}")


def _int_list(text: str) -> list[int]:
    try:
        out = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not out or min(out) < 1:
        raise argparse.ArgumentTypeError("values must be positive integers")
    return out


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _resolution(args, t):
    if args.resolution is None:
        return default_resolution(t)
    res = args.resolution
    if len(res) == 1:
        return tuple(res) * t.r
    if len(res) != t.r:
        raise UsageError(f"--resolution needs 1 or {t.r} values for {t.group}")
    return tuple(res)


def _provenance(args, t, **extra) -> dict:
    out = {
        "library": "chardisc",
        "version": __version__,
        "schema": SCHEMA_VERSION,
        "group": t.group,
        "threads": args.threads,
        "caps": {"corner_evaluations": getattr(args, "corner_cap", DEFAULT_CORNER_CAP),
                 "weight_nodes": DEFAULT_NODE_CAP},
    }
    out.update(extra)
    return out


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_json(args, payload: dict) -> None:
    _emit(args, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _load_seq(args, t):
    return read_csv(args.seq, group=t.group)


# commands -----------------------------------------------------------------


def cmd_list_groups(args) -> int:
    rows = []
    for g in SUPPORTED_GROUPS:
        t = build_tables(g)
        rows.append({
            "group": g, "r": t.r, "r1": t.r1, "r2": t.r2, "M": t.M,
            "dimG": t.dim_g, "|W|": len(t.weyl), "C_G": constant_CG(t),
        })
    if args.json:
        _emit_json(args, {"groups": rows, "version": __version__})
        return EXIT_OK
    buf = io.StringIO()
    header = ["group", "r", "r1", "r2", "M", "dimG", "|W|", "C_G"]
    buf.write("".join(f"{h:>8}" for h in header[:-1]) + f"{'C_G':>16}\n")
    for row in rows:
        buf.write("".join(f"{row[h]!s:>8}" for h in header[:-1]) + f"{row['C_G']:>16.6e}\n")
    _emit(args, buf.getvalue())
    return EXIT_OK


def cmd_sample(args) -> int:
    t = build_tables(args.group)
    if args.n < 1:
        raise UsageError("--n must be positive")
    if args.kind == "haar":
        seq = sample_haar(t, args.n, args.seed)
    elif args.kind == "uniform_torus":
        seq = sample_uniform_torus(t, args.n, args.seed)
    elif args.kind == "kronecker":
        v = args.direction or default_kronecker_direction(t.r).tolist()
        if len(v) != t.r:
            raise UsageError(f"--direction needs {t.r} values")
        seq = kronecker_sequence(t, args.n, v)
    else:
        if args.theta is None or len(args.theta) != t.r:
            raise UsageError(f"--theta with {t.r} values is required for a constant sequence")
        seq = constant_sequence(t, args.n, args.theta)
    _emit(args, write_csv(seq))
    return EXIT_OK


def cmd_density(args) -> int:
    t = build_tables(args.group)
    n = args.points
    if n < 2:
        raise UsageError("--points must be at least 2")
    axes = [np.arange(n) * (TWO_PI / n)] * t.r
    theta = np.stack([g.ravel() for g in np.meshgrid(*axes, indexing="ij")], axis=-1)
    p = push_point(t, theta)
    f = density_F(t, theta)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"theta{j + 1}" for j in range(t.r)] + [f"P{j + 1}" for j in range(t.r)] + ["F"])
    for th, pp, ff in zip(theta, p, np.atleast_1d(f)):
        w.writerow([format(x, ".17g") for x in (*th, *pp, ff)])
    _emit(args, buf.getvalue())
    return EXIT_OK


def cmd_chars(args) -> int:
    t = build_tables(args.group)
    lam = tuple(args.weight)
    if len(lam) != t.r:
        raise UsageError(f"--weight needs {t.r} entries")
    n = args.points
    axes = [np.arange(n) * (TWO_PI / n)] * t.r
    theta = np.stack([g.ravel() for g in np.meshgrid(*axes, indexing="ij")], axis=-1)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"m{j + 1}" for j in range(t.r)] + [f"theta{j + 1}" for j in range(t.r)]
               + ["re", "im", "method"])
    for th in theta:
        cv = character_value(t, lam, th)
        w.writerow([*lam, *(format(x, ".17g") for x in th),
                    format(cv.value.real, ".17g"), format(cv.value.imag, ".17g"), cv.method])
    _emit(args, buf.getvalue())
    return EXIT_OK


def cmd_discrepancy(args) -> int:
    t = build_tables(args.group)
    seq = _load_seq(args, t)
    grid = build_quadrature(t, _resolution(args, t))
    rep = star_discrepancy(grid, seq, corner_cap=args.corner_cap)
    _emit_json(args, {
        "provenance": _provenance(args, t, seed=seq.seed, resolution=list(grid.resolution),
                                  sequence=seq.provenance),
        "report": rep.to_dict(),
    })
    return EXIT_OK


def cmd_verify(args) -> int:
    t = build_tables(args.group)
    seq = _load_seq(args, t)
    grid = build_quadrature(t, _resolution(args, t))
    rep = verify(t, seq, args.k, grid)
    _emit_json(args, {
        "provenance": _provenance(args, t, seed=seq.seed, resolution=list(grid.resolution),
                                  sequence=seq.provenance),
        "report": rep.to_dict(),
    })
    return EXIT_OK if rep.holds else EXIT_NUMERIC


def cmd_bound_table(args) -> int:
    t = build_tables(args.group)
    seq = _load_seq(args, t)
    grid = build_quadrature(t, _resolution(args, t))
    reports = [verify(t, seq, k, grid) for k in args.k_list]
    buf = io.StringIO()
    fields = ["group", "n", "k", "degree", "char_count", "moment_sum", "c_g", "rhs",
              "d_star", "d_upper", "margin", "holds"]
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n", extrasaction="ignore")
    w.writeheader()
    for rep in reports:
        w.writerow(rep.to_dict())
    _emit(args, buf.getvalue())
    return EXIT_OK if all(r.holds for r in reports) else EXIT_NUMERIC


def cmd_kernel_check(args) -> int:
    t = build_tables(args.group)
    rows = []
    ok = True
    for k in args.k:
        if k % 2 == 0:
            raise UsageError(f"kernel degrees must be odd, got {k}")
        p = KernelParams(t.r, t.M, k)
        for cf in args.c_factors:
            inner = kernel_mass_inner(p, cf * p.m_sqrt_r)
            rows.append({"kind": "sandwich", "k": k, "c": cf * p.m_sqrt_r, **inner.to_dict()})
            ok &= inner.holds
        tail = kernel_tail(p, p.m_sqrt_r / k)
        rows.append({"kind": "tail", "k": k, "t": p.m_sqrt_r / k, **tail.to_dict()})
        ok &= tail.holds
    _emit_json(args, {"provenance": _provenance(args, t), "checks": rows, "all_hold": bool(ok)})
    return EXIT_OK if ok else EXIT_NUMERIC


def cmd_intop_check(args) -> int:
    t = build_tables(args.group)
    seq = _load_seq(args, t)
    h = parse_poly(args.poly, t.r)
    grid = build_quadrature(t, _resolution(args, t))
    res = integral_operator_residual(t, grid, seq, h, x_resolution=args.x_resolution)
    tol = args.tol if args.tol is not None else (1e-3 if t.r == 1 else 5e-3)
    ok = res.residual <= tol
    _emit_json(args, {
        "provenance": _provenance(args, t, seed=seq.seed, resolution=list(grid.resolution),
                                  sequence=seq.provenance),
        "poly": str(h),
        "report": {**res.to_dict(), "tol": tol, "holds": bool(ok)},
    })
    return EXIT_OK if ok else EXIT_NUMERIC


def cmd_selftest(args) -> int:
    from .selftest import run_selftest

    results = run_selftest(args.group)
    for name, passed, detail in results:
        print(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")
    return EXIT_OK if all(p for _, p, _ in results) else EXIT_NUMERIC


# parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=1, help="worker cap (recorded in provenance)")
    common.add_argument("--out", help="write output here instead of stdout")

    grp = argparse.ArgumentParser(add_help=False)
    grp.add_argument("--group", required=True, choices=SUPPORTED_GROUPS)

    seqp = argparse.ArgumentParser(add_help=False)
    seqp.add_argument("--seq", required=True, help="sequence CSV written by 'sample'")

    resp = argparse.ArgumentParser(add_help=False)
    resp.add_argument("--resolution", type=_int_list, help="torus grid points per axis (one value or r values)")

    parser = _Parser(prog="chardisc", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"chardisc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("list-groups", parents=[common], help="root-system summary per group")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_list_groups)

    p = sub.add_parser("sample", parents=[common, grp], help="write a class sequence as CSV")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--kind", choices=("haar", "uniform_torus", "kronecker", "constant"), default="haar")
    p.add_argument("--direction", type=_float_list, help="Kronecker direction (radians)")
    p.add_argument("--theta", type=_float_list, help="torus point for a constant sequence")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("density", parents=[common, grp], help="CSV of (theta, P(theta), F) on a torus grid")
    p.add_argument("--points", type=int, default=64, help="grid points per torus axis")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("chars", parents=[common, grp], help="CSV of one character on a torus grid")
    p.add_argument("--weight", type=lambda s: [int(x) for x in s.split(",")], required=True)
    p.add_argument("--points", type=int, default=16)
    p.set_defaults(func=cmd_chars)

    p = sub.add_parser("discrepancy", parents=[common, grp, seqp, resp], help="star-discrepancy report")
    p.add_argument("--corner-cap", type=int, default=DEFAULT_CORNER_CAP)
    p.set_defaults(func=cmd_discrepancy)

    p = sub.add_parser("verify", parents=[common, grp, seqp, resp], help="check the discrepancy bound for one k")
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bound-table", parents=[common, grp, seqp, resp], help="bound reports for several k")
    p.add_argument("--k-list", type=_int_list, default=[1, 3, 5, 9])
    p.set_defaults(func=cmd_bound_table)

    p = sub.add_parser("kernel-check", parents=[common, grp], help="kernel concentration and tail bounds")
    p.add_argument("--k", type=_int_list, default=[3, 5, 9])
    p.add_argument("--c-factors", type=_float_list, default=[0.5, 1.0, 1.2],
                   help="ball radii as multiples of M sqrt(r)")
    p.set_defaults(func=cmd_kernel_check)

    p = sub.add_parser("intop-check", parents=[common, grp, seqp, resp], help="integral-operator identity residual")
    p.add_argument("--poly", required=True, help='e.g. "x1^2" or "x1*x2 + 3"')
    p.add_argument("--x-resolution", type=int, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(func=cmd_intop_check)

    p = sub.add_parser("selftest", parents=[common], help="quick acceptance subset for one group")
    p.add_argument("--group", default="A1", choices=SUPPORTED_GROUPS)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.threads < 1:
            raise UsageError("--threads must be positive")
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (NumericalInconsistency, SamplerStall) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (CandidateSetTooLarge, WeightSystemTooLarge) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (CharDiscError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())

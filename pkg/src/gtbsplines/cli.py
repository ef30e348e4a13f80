"""Batch command-line front end.

Verbs
-----
build   CONFIG OUT       -- space summary (dimensions, knot vectors, triples)
sample  CONFIG --csv OUT -- uniform basis/derivative samples as CSV
demo    NAME OUTDIR      -- reproduce the bundled demo spaces/curves
verify  CONFIG           -- run the invariant checks, one PASS/FAIL line each
insert  CONFIG --at X OUT -- refined-space summary plus the transfer map

Exit codes: 0 success, 1 runtime or degeneracy failure, 2 validation error.
All numeric output uses 17 significant digits so values round-trip exactly.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .config import SpaceConfig, conic_profile_demo_config, mixed_family_demo_config
from .errors import BasisNonexistenceError, ConfigError, GTBError, InvalidFamilyError
from .oracle import cox_de_boor_basis, cox_de_boor_knots, local_recurrence_eval
from .sections import PolynomialFamily
from .space import (
    SplineCurve,
    build_space,
    eval_basis,
    insert_knot,
    jump_vector,
    unit_integral_scaling,
)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_VALIDATION = 2


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _fmt_row(values) -> str:
    return " ".join(_fmt(v) for v in values)


def _space_summary(space) -> str:
    kv = space.knots
    lines = [
        f"N {space.n_basis}",
        f"M {space.n_bernstein}",
        f"O {space.n_constraints}",
        "breakpoints " + _fmt_row(space.partition.breakpoints),
        "degrees " + " ".join(str(p) for p in space.degrees),
        "smoothness " + " ".join(str(r) for r in space.smoothness),
        "u " + _fmt_row(kv.u),
        "v " + _fmt_row(kv.v),
        "k u_k v_k r_u r_v",
    ]
    for k in range(1, space.n_basis + 1):
        r_u, r_v = space.supersmoothness(k)
        lines.append(f"{k} {_fmt(kv.u[k - 1])} {_fmt(kv.v[k - 1])} {r_u} {r_v}")
    if space.n_constraints == 0:
        lines.append("extraction identity")
    return "\n".join(lines) + "\n"


def _write(path: str, text: str) -> None:
    with open(path, "w") as fh:
        fh.write(text)


def _sample_csv(space, n: int, deriv: int) -> str:
    a, b = space.domain
    xs = np.linspace(a, b, n)
    header = ["x"]
    for d in range(deriv + 1):
        prefix = "" if d == 0 else ("d" if d == 1 else f"d{d}")
        header.extend(f"{prefix}B{k}" for k in range(1, space.n_basis + 1))
    rows = [",".join(header)]
    for x in xs:
        table = eval_basis(space, float(x), deriv)
        cells = [_fmt(x)]
        for d in range(deriv + 1):
            cells.extend(_fmt(v) for v in table[:, d])
        rows.append(",".join(cells))
    return "\n".join(rows) + "\n"


def cmd_build(args) -> int:
    config = SpaceConfig.from_json_file(args.config)
    space = build_space(config)
    _write(args.out, _space_summary(space))
    return EXIT_OK


def cmd_sample(args) -> int:
    if args.n < 2:
        raise ConfigError("need at least 2 samples")
    config = SpaceConfig.from_json_file(args.config)
    space = build_space(config)
    max_deriv = min(space.degrees)
    if not (0 <= args.deriv <= max_deriv):
        raise ConfigError(f"--deriv must lie in [0, {max_deriv}] for this space")
    _write(args.csv, _sample_csv(space, args.n, args.deriv))
    return EXIT_OK


def cmd_demo(args) -> int:
    outdir = args.outdir.rstrip("/")
    os.makedirs(outdir, exist_ok=True)
    if args.name == "example1":
        for r in (-1, 0, 1, 2):
            space = build_space(mixed_family_demo_config((r, r)))
            text = _sample_csv(space, args.n, 2)
            _write(f"{outdir}/example1_r{r}.csv", text)
            _write(f"{outdir}/example1_r{r}_summary.txt", _space_summary(space))
        return EXIT_OK
    if args.name == "example2":
        config = conic_profile_demo_config()
        space = build_space(config)
        curve = SplineCurve(space, config.control_points)
        a, b = space.domain
        xs = np.linspace(a, b, args.n)
        rows = ["x,X,Y"]
        for x in xs:
            pt = curve(float(x))
            rows.append(f"{_fmt(x)},{_fmt(pt[0])},{_fmt(pt[1])}")
        _write(f"{outdir}/example2_curve.csv", "\n".join(rows) + "\n")
        rows = ["X,Y"]
        for pt in curve.control:
            rows.append(f"{_fmt(pt[0])},{_fmt(pt[1])}")
        _write(f"{outdir}/example2_control_polygon.csv", "\n".join(rows) + "\n")
        _write(f"{outdir}/example2_residuals.csv", _profile_residuals(curve, args.n))
        _write(f"{outdir}/example2_summary.txt", _space_summary(space))
        return EXIT_OK
    raise ConfigError(f"unknown demo {args.name!r} (choose example1 or example2)")


def _profile_residuals(curve: SplineCurve, n: int) -> str:
    """Per-segment geometric residuals of the conic demo profile: distance to
    the circle equations on the arc segments, to the line on the middle one."""
    bp = curve.space.partition.breakpoints
    rows = ["x,segment,residual"]
    for seg in range(3):
        xs = np.linspace(bp[seg], bp[seg + 1], n)
        for x in xs:
            X, Y = curve(float(x))
            if seg == 0:
                res = (X - 2.0) ** 2 + Y**2 - 1.0
            elif seg == 1:
                res = Y - 1.0
            else:
                res = X**2 + (Y - 3.0) ** 2 - 4.0
            rows.append(f"{_fmt(x)},{seg + 1},{_fmt(res)}")
    return "\n".join(rows) + "\n"


def _check(name: str, ok: bool, detail: str = "") -> bool:
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail and not ok else ""
    print(f"{status} {name}{suffix}")
    return ok


def cmd_verify(args) -> int:
    config = SpaceConfig.from_json_file(args.config)
    space = build_space(config)
    a, b = space.domain
    ok = True

    xs = np.linspace(a, b, 400)
    pou = max(abs(eval_basis(space, float(x))[:, 0].sum() - 1.0) for x in xs)
    ok &= _check("partition-of-unity", pou <= 1e-12, f"max deviation {pou:.3g}")

    kv = space.knots
    support_err = 0.0
    for k in range(space.n_basis):
        for x in xs:
            if kv.u[k] <= x <= kv.v[k]:
                continue
            support_err = max(support_err, abs(eval_basis(space, float(x))[k, 0]))
    ok &= _check("local-support", support_err <= 1e-13, f"max leak {support_err:.3g}")

    jump_err = 0.0
    for i in range(1, space.partition.num_intervals):
        for order in range(space.smoothness[i] + 1):
            jump_err = max(jump_err, np.max(np.abs(jump_vector(space, i, order))))
    ok &= _check("smoothness-jumps", jump_err <= 1e-9, f"max jump {jump_err:.3g}")

    c = space.operator
    col_err = np.max(np.abs(c.sum(axis=0) - 1.0)) if c.size else 0.0
    neg = -min(c.min(), 0.0) if c.size else 0.0
    ok &= _check("extraction-column-sums", col_err <= 1e-12, f"max {col_err:.3g}")
    ok &= _check("extraction-nonnegative", neg <= 1e-14, f"min entry {-neg:.3g}")

    scalings = unit_integral_scaling(space)
    total = float(np.sum(1.0 / scalings))
    ok &= _check(
        "unit-integral-total", abs(total - (b - a)) <= 1e-10, f"sum {total:.17g}"
    )

    uniform_poly = all(
        isinstance(s, PolynomialFamily) for s in config.sections
    ) and len(set(config.degrees)) == 1
    probe = np.linspace(a, b, 37)
    if uniform_poly:
        p = config.degrees[0]
        knots = cox_de_boor_knots(config.breakpoints, p, config.smoothness)
        err = 0.0
        for x in probe:
            ours = eval_basis(space, float(x), min(1, p))
            ref = cox_de_boor_basis(knots, p, float(x), min(1, p))
            err = max(err, float(np.max(np.abs(ours - ref))))
        ok &= _check("oracle-cox-de-boor", err <= 1e-12, f"max dev {err:.3g}")
    else:
        err = 0.0
        for x in probe[::2]:
            vals = eval_basis(space, float(x))[:, 0]
            for k in range(1, space.n_basis + 1):
                err = max(err, abs(vals[k - 1] - local_recurrence_eval(space, k, float(x))))
        ok &= _check("oracle-integral-recurrence", err <= 1e-7, f"max dev {err:.3g}")

    return EXIT_OK if ok else EXIT_RUNTIME


def cmd_insert(args) -> int:
    config = SpaceConfig.from_json_file(args.config)
    space = build_space(config)
    refined, transfer = insert_knot(space, args.at)
    lines = [_space_summary(refined).rstrip("\n"), "transfer"]
    for row in transfer:
        lines.append(_fmt_row(row))
    _write(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gtbspline",
        description="Build, sample, and verify Tchebycheffian B-spline spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="write a space summary")
    p.add_argument("config")
    p.add_argument("out")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("sample", help="write uniform basis samples as CSV")
    p.add_argument("config")
    p.add_argument("--n", type=int, default=401)
    p.add_argument("--deriv", type=int, default=0)
    p.add_argument("--csv", required=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("demo", help="reproduce a bundled demo")
    p.add_argument("name", choices=["example1", "example2"])
    p.add_argument("outdir")
    p.add_argument("--n", type=int, default=401)
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("verify", help="run invariant checks")
    p.add_argument("config")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("insert", help="insert a knot and write the transfer map")
    p.add_argument("config")
    p.add_argument("--at", type=float, required=True)
    p.add_argument("out")
    p.set_defaults(func=cmd_insert)

    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, InvalidFamilyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (BasisNonexistenceError, GTBError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())

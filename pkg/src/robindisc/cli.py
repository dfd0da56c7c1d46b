"""Command-line front end.

Exit codes: 0 success, 2 usage error, 3 numeric failure, 4 config error.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import asymptotics as asy
from . import fdsolver
from .diamag import (DiscOptions, FiberCache, fiber_window, find_nonmonotone_witness,
                     fiber_branches, lambda1_disc, scan_b)
from .errors import ConfigError, NumericFailure
from .fiber import FiberParams, SolverOptions, solve_fiber_fd, solve_fiber_ground
from .littleparks import kappa_of, little_parks_curve, load_config

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3
EXIT_CONFIG = 4


@dataclass
class CsvTable:
    header: list
    rows: list

    def __post_init__(self):
        for i, row in enumerate(self.rows):
            if len(row) != len(self.header):
                raise ValueError(f"row {i} has {len(row)} fields, header has {len(self.header)}")


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".12g")
    return str(x)


def write_csv(table: CsvTable, path=None) -> None:
    """Write ``table`` to ``path`` (stdout when None) with ``\\n`` line endings."""
    if path is None:
        _write_rows(sys.stdout, table)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        _write_rows(fh, table)


def _write_rows(fh, table):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(table.header)
    for row in table.rows:
        w.writerow([_fmt(x) for x in row])


def _solver_options(args) -> SolverOptions:
    n = getattr(args, "n", None)
    if n is None:
        return SolverOptions()
    return SolverOptions(cert_cells=n)


def _print_eig(res) -> None:
    print(f"lambda={_fmt(res.lam)} m={res.m} method={res.method.value} "
          f"residual={res.residual:.3e} certified={res.certified} b={_fmt(res.b)} gamma={_fmt(res.gamma)}")


def cmd_eig(args) -> int:
    opts = _solver_options(args)
    n = args.n or fdsolver.DEFAULT_CERT_CELLS
    if args.m is not None:
        p = FiberParams(args.m, args.b, args.gamma)
        res = solve_fiber_fd(p, n) if args.method == "fd" else solve_fiber_ground(p, opts)
    elif args.method == "fd":
        if not args.gamma < 0:
            raise ValueError("disc eigenvalue needs gamma < 0")
        window = range(-asy.m_truncation_bound(args.b) - 2, asy.m_truncation_bound(args.b) + 3)
        res = min((solve_fiber_fd(FiberParams(m, args.b, args.gamma), n) for m in window),
                  key=lambda r: (r.lam, r.m))
    else:
        res = lambda1_disc(args.b, args.gamma, DiscOptions(solver=opts))
    _print_eig(res)
    return EXIT_OK


def cmd_scan(args) -> int:
    rows = scan_b(args.gamma, args.b_min, args.b_max, args.steps, workers=args.workers)
    table = CsvTable(["b", "lambda1", "m_star", "prediction", "gap"],
                     [[r.b, r.lambda1, r.m_star, r.prediction, r.gap] for r in rows])
    write_csv(table, args.out)
    return EXIT_OK


def cmd_witness(args) -> int:
    w = find_nonmonotone_witness(args.gamma, args.A)
    print(f"n0={w.n0} b1={_fmt(w.b1)} b2={_fmt(w.b2)} b3={_fmt(w.b3)}")
    print(f"v1={_fmt(w.v1)} v2={_fmt(w.v2)} v3={_fmt(w.v3)}")
    print(f"v2-v1={_fmt(w.v2 - w.v1)} v2-v3={_fmt(w.v2 - w.v3)} holds={w.holds}")
    return EXIT_OK


def cmd_asym(args) -> int:
    pred = asy.lambda1_prediction(args.b, args.gamma)
    res = lambda1_disc(args.b, args.gamma)
    t = pred.terms
    print(f"b={_fmt(args.b)} gamma={_fmt(args.gamma)}")
    print(f"prediction={_fmt(pred.value)} (leading={_fmt(t.leading)} boundary={_fmt(t.boundary)} "
          f"oscillatory={_fmt(t.oscillatory)} constant={_fmt(t.constant)})")
    print(f"lambda1={_fmt(res.lam)} m_star={res.m} gap={_fmt(res.lam - pred.value)}")
    return EXIT_OK


def cmd_semiclassical(args) -> int:
    if (args.m is None) != (args.b is None):
        raise ValueError("--m and --b must be given together")
    ap = fdsolver.AnnulusParams(args.h, args.rho, args.m, args.b)
    n = args.n or fdsolver.DEFAULT_CERT_CELLS
    lam1, lam2 = fdsolver.lowest_eigenvalues(fdsolver.build_annulus_system(ap, n, False), 2)
    h = args.h
    print(f"h={_fmt(h)} rho={_fmt(args.rho)} delta={_fmt(ap.delta)} n={n}")
    print(f"lambda1(H_h)={_fmt(lam1)} expansion={_fmt(asy.hh_expansion(h))} "
          f"(lambda1+1+sqrt(h))/h={_fmt((lam1 + 1 + math.sqrt(h)) / h)} lambda2(H_h)={_fmt(lam2)}")
    if args.m is not None:
        lam_m = fdsolver.lowest_eigenvalues(fdsolver.build_annulus_system(ap, n, True), 1)[0]
        shift = (lam_m - lam1) / h
        print(f"lambda1(H_m)={_fmt(lam_m)} (lambda1(H_m)-lambda1(H_h))/h={_fmt(shift)} "
              f"(m-b/2)^2={_fmt((args.m - args.b / 2) ** 2)} "
              f"expansion={_fmt(asy.fiber_family_expansion(args.b, abs(args.m), h))}")
    return EXIT_OK


def cmd_little_parks(args) -> int:
    cfg = load_config(args.config)
    if cfg.physical is not None:
        print(f"# kappa={_fmt(kappa_of(cfg))}", file=sys.stderr)
    rows = little_parks_curve(cfg)
    table = CsvTable(["b", "lambda1", "Tc_exact", "Tc_asym"],
                     [[r.b, r.lambda1, r.Tc_exact, r.Tc_asym] for r in rows])
    write_csv(table, args.out)
    return EXIT_OK


def figure1_table(gamma: float, b_max: float, steps: int) -> CsvTable:
    """Per-m branches, the envelope and the three-term curve on ``(0, b_max]``."""
    bs = [float(b) for b in np.linspace(b_max / steps, b_max, steps)]
    cache = FiberCache()
    ms = range(-1, asy.m_truncation_bound(b_max) + 2)
    rows = []
    for m, lams in fiber_branches(gamma, bs, ms, cache=cache).items():
        rows.extend(["branch", b, m, lam] for b, lam in zip(bs, lams))
    for b in bs:
        best = lambda1_disc(b, gamma, cache=cache)
        rows.append(["envelope", b, best.m, best.lam])
    for b in bs:
        pred = asy.lambda1_prediction(b, gamma)
        rows.append(["asymptotic", b, asy.e_inf(b)[1], pred.value])
    return CsvTable(["section", "b", "m", "lambda"], rows)


def cmd_figure1(args) -> int:
    write_csv(figure1_table(args.gamma, args.b_max, args.steps), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="robindisc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eig", help="lowest eigenvalue of the disc or of one fiber")
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--m", type=int)
    p.add_argument("--method", choices=("analytic", "fd"), default="analytic")
    p.add_argument("--n", type=int, help="finite-element cells (certification / fd)")
    p.set_defaults(func=cmd_eig)

    p = sub.add_parser("scan", help="lambda1 over a uniform b grid (CSV)")
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--b-min", type=float, required=True)
    p.add_argument("--b-max", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("witness", help="non-monotonicity triple")
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--A", type=float, required=True)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("asym", help="three-term prediction vs computed lambda1")
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.set_defaults(func=cmd_asym)

    p = sub.add_parser("semiclassical", help="boundary-layer operators vs their expansions")
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--m", type=int)
    p.add_argument("--b", type=float)
    p.add_argument("--n", type=int)
    p.set_defaults(func=cmd_semiclassical)

    p = sub.add_parser("little-parks", help="critical temperature curve (CSV)")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_little_parks)

    p = sub.add_parser("figure1", help="branches, envelope and asymptotic curve (CSV)")
    p.add_argument("--gamma", type=float, default=-20.0)
    p.add_argument("--b-max", type=float, default=16.0)
    p.add_argument("--steps", type=int, default=320)
    p.add_argument("--out")
    p.set_defaults(func=cmd_figure1)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericFailure as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())

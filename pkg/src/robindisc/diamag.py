"""Disc ground energy as a minimum over fibers, field scans and the
non-monotonicity witness.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .asymptotics import lambda1_prediction, m_truncation_bound
from .errors import NumericFailure
from .fiber import DEFAULT_OPTIONS, EigResult, FiberParams, SolverOptions, solve_fiber_ground

__all__ = [
    "DiscOptions",
    "FiberCache",
    "ScanRow",
    "Witness",
    "DiamagReport",
    "fiber_window",
    "disc_fibers",
    "lambda1_disc",
    "tied_minimizers",
    "scan_b",
    "fiber_branches",
    "find_nonmonotone_witness",
    "check_diamagnetic",
]


@dataclass(frozen=True)
class DiscOptions:
    solver: SolverOptions = DEFAULT_OPTIONS
    margin: int = 2
    paranoid: bool = False
    paranoid_tol: float = 1e-9


DEFAULT_DISC_OPTIONS = DiscOptions()


class FiberCache:
    """Memo of fiber ground states keyed by ``(m, b, gamma)``."""

    def __init__(self, solver: SolverOptions = DEFAULT_OPTIONS):
        self.solver = solver
        self._store = {}

    def __len__(self):
        return len(self._store)

    def __contains__(self, key):
        return key in self._store

    def get(self, m: int, b: float, gamma: float) -> EigResult:
        key = (int(m), float(b), float(gamma))
        res = self._store.get(key)
        if res is None:
            res = _solve_annotated(key[0], key[1], key[2], self.solver)
            self._store[key] = res
        return res

    def items(self):
        return self._store.items()


def _solve_annotated(m, b, gamma, solver):
    try:
        return solve_fiber_ground(FiberParams(m, b, gamma), solver)
    except NumericFailure as exc:
        if f"m={m}" in str(exc):
            raise
        raise type(exc)(f"fiber m={m}, b={b}, gamma={gamma}: {exc}") from exc


def fiber_window(b: float, margin: int = 2) -> range:
    bound = m_truncation_bound(b) + margin
    return range(-bound, bound + 1)


def disc_fibers(b: float, gamma: float, opts: DiscOptions = DEFAULT_DISC_OPTIONS, cache=None) -> dict:
    """Ground states of every fiber in the truncation window, keyed by ``m``."""
    if not gamma < 0:
        raise ValueError(f"gamma must be negative, got {gamma}")
    if not b >= 0:
        raise ValueError(f"b must be >= 0, got {b}")
    cache = cache if cache is not None else FiberCache(opts.solver)
    return {m: cache.get(m, b, gamma) for m in fiber_window(b, opts.margin)}


def _argmin(fibers: dict) -> EigResult:
    return min(fibers.values(), key=lambda r: (r.lam, r.m))


def lambda1_disc(b: float, gamma: float, opts: DiscOptions = DEFAULT_DISC_OPTIONS, cache=None) -> EigResult:
    """Lowest eigenvalue of the disc: the minimising fiber's result."""
    cache = cache if cache is not None else FiberCache(opts.solver)
    best = _argmin(disc_fibers(b, gamma, opts, cache))
    if opts.paranoid:
        wider = DiscOptions(opts.solver, opts.margin + 2, False)
        check = _argmin(disc_fibers(b, gamma, wider, cache))
        if abs(check.lam - best.lam) > opts.paranoid_tol:
            raise NumericFailure(
                f"fiber truncation not converged at b={b}, gamma={gamma}: "
                f"{best.lam!r} (m={best.m}) vs {check.lam!r} (m={check.m})"
            )
    return best


def tied_minimizers(b: float, gamma: float, tol: float = 1e-6, opts: DiscOptions = DEFAULT_DISC_OPTIONS, cache=None) -> list:
    """Every fiber whose energy is within ``tol`` of the disc minimum."""
    fibers = disc_fibers(b, gamma, opts, cache)
    low = _argmin(fibers).lam
    return sorted((r for r in fibers.values() if r.lam - low <= tol), key=lambda r: r.m)


@dataclass(frozen=True)
class ScanRow:
    b: float
    lambda1: float
    m_star: int
    prediction: float
    gap: float


def _scan_row(args) -> ScanRow:
    b, gamma, opts = args
    res = lambda1_disc(b, gamma, opts)
    pred = lambda1_prediction(b, gamma).value
    return ScanRow(b, res.lam, res.m, pred, res.lam - pred)


def b_grid(b_min: float, b_max: float, steps: int) -> np.ndarray:
    if steps < 2:
        raise ValueError("steps must be >= 2")
    if not 0 <= b_min < b_max:
        raise ValueError(f"need 0 <= b_min < b_max, got {b_min}, {b_max}")
    return np.linspace(b_min, b_max, steps)


def scan_b(gamma: float, b_min: float, b_max: float, steps: int,
           opts: DiscOptions = DEFAULT_DISC_OPTIONS, workers: int = 1) -> list:
    """``lambda1_disc`` and its three-term prediction on a uniform b grid."""
    grid = b_grid(b_min, b_max, steps)
    jobs = [(float(b), float(gamma), opts) for b in grid]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_scan_row, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        rows = [_scan_row(j) for j in jobs]
    drops = [(a.b, a.m_star, c.m_star) for a, c in zip(rows, rows[1:]) if c.m_star < a.m_star]
    if drops:
        warnings.warn(f"minimising angular momentum decreased along the scan at {drops}", RuntimeWarning)
    return rows


def fiber_branches(gamma: float, b_values, m_values, solver: SolverOptions = DEFAULT_OPTIONS, cache=None) -> dict:
    """Per-fiber energies ``{m: [lam(b) for b in b_values]}``."""
    cache = cache if cache is not None else FiberCache(solver)
    return {m: [cache.get(m, float(b), gamma).lam for b in b_values] for m in m_values}


@dataclass(frozen=True)
class Witness:
    n0: int
    b1: float
    b2: float
    b3: float
    v1: float
    v2: float
    v3: float
    holds: bool


def find_nonmonotone_witness(gamma: float, A: float, opts: DiscOptions = DEFAULT_DISC_OPTIONS) -> Witness:
    """Evaluate the triple ``(2 n0, 2 n0 + 1, 2 n0 + 3/2)``, ``n0`` the least integer above ``A``.

    ``holds`` is False when the dip is absent at this ``gamma``; that is a
    result, not an error.
    """
    if not gamma < 0:
        raise ValueError(f"gamma must be negative, got {gamma}")
    if not A > 0:
        raise ValueError(f"A must be positive, got {A}")
    n0 = math.floor(A) + 1
    bs = (2.0 * n0, 2.0 * n0 + 1.0, 2.0 * n0 + 1.5)
    cache = FiberCache(opts.solver)
    v1, v2, v3 = (lambda1_disc(b, gamma, opts, cache).lam for b in bs)
    return Witness(n0, *bs, v1, v2, v3, holds=(v1 < v2) and (v2 > v3))


@dataclass(frozen=True)
class DiamagReport:
    gamma: float
    lambda0: float
    b: tuple
    margins: tuple
    slack: float = 1e-7
    holds: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "holds", all(mg >= -self.slack for mg in self.margins))


def check_diamagnetic(gamma: float, b_list, opts: DiscOptions = DEFAULT_DISC_OPTIONS, cache=None) -> DiamagReport:
    """Margins ``lambda1(b) - lambda1(0)``; the inequality asks them to be >= 0."""
    cache = cache if cache is not None else FiberCache(opts.solver)
    lam0 = lambda1_disc(0.0, gamma, opts, cache).lam
    bs = tuple(float(b) for b in b_list)
    margins = tuple(lambda1_disc(b, gamma, opts, cache).lam - lam0 for b in bs)
    return DiamagReport(gamma, lam0, bs, margins)

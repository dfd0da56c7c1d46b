"""Analytic solution of a single angular-momentum fiber on the unit disc.

For angular momentum ``m`` the radial equation is

    -u'' - u'/r + (m/r - b r/2)^2 u = lam u,   u'(1) + gamma u(1) = 0.

For ``b > 0`` the solution regular at the origin is

    u(r) = r^|m| exp(-b r^2/4) M(a, |m| + 1, b r^2/2),
    a = (|m| - m + 1)/2 - lam/(2b),

and for ``b = 0``, ``lam < 0`` it is ``I_|m|(sqrt(-lam) r)``.  Eigenvalues
are the zeros of the secular function ``S(lam) = u'(1) + gamma u(1)``.
The root search is seeded and certified by the finite-element pencils of
:mod:`robindisc.fdsolver`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from scipy.optimize import brentq

from . import fdsolver
from .errors import BracketFailure, CertificationFailure, UnsupportedBranch
from .specfun import DEFAULT_ACCURACY, SeriesAccuracy, bessel_i, bessel_i_prime, kummer_m, kummer_m_dz

__all__ = [
    "FiberParams",
    "Method",
    "EigResult",
    "SolverOptions",
    "radial_solution",
    "boundary_values",
    "secular_value",
    "solve_fiber_ground",
    "solve_fiber_fd",
]


@dataclass(frozen=True)
class FiberParams:
    m: int
    b: float
    gamma: float

    def __post_init__(self):
        if int(self.m) != self.m:
            raise ValueError(f"angular momentum must be an integer, got {self.m}")
        if not self.b >= 0:
            raise ValueError(f"field intensity b must be >= 0, got {self.b}")
        if not self.gamma <= 0:
            raise ValueError(f"Robin parameter gamma must be <= 0, got {self.gamma}")
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "gamma", float(self.gamma))


class Method(enum.Enum):
    ANALYTIC = "Analytic"
    FINITE_DIFFERENCE = "FiniteDifference"


@dataclass(frozen=True)
class EigResult:
    """Lowest eigenvalue of one fiber.

    ``residual`` is scale free: for the analytic method it is
    ``|S(lam)| / max(|u(1)|, |u'(1)|)``; for the finite-element method it is
    the bisection bracket width.
    """

    lam: float
    m: int
    method: Method
    residual: float
    certified: bool
    b: float = float("nan")
    gamma: float = float("nan")


@dataclass(frozen=True)
class SolverOptions:
    seed_cells: int = fdsolver.DEFAULT_SCAN_CELLS
    seed_tol: float = 1e-8
    cert_cells: int = fdsolver.DEFAULT_CERT_CELLS
    root_tol: float = 1e-10
    bracket_min: float = 1.0
    bracket_rel: float = 0.1
    max_widen: int = 3
    # certification window: root +/- (cert_abs + cert_rel*|root|)
    cert_abs: float = 1e-3
    cert_rel: float = 1e-4
    # b = 0 seeds above -zero_margin are left to the finite-element solver
    zero_margin: float = 1e-6
    accuracy: SeriesAccuracy = DEFAULT_ACCURACY


DEFAULT_OPTIONS = SolverOptions()


def _kummer_a(m: int, b: float, lam: float) -> float:
    return 0.5 * (abs(m) - m + 1) - lam / (2.0 * b)


def radial_solution(p: FiberParams, lam: float, r: float, acc: SeriesAccuracy = DEFAULT_ACCURACY):
    """Regular radial solution and its r-derivative at ``r`` (requires ``b > 0``)."""
    if not p.b > 0:
        raise UnsupportedBranch("radial_solution needs b > 0; use the Bessel branch or fdsolver")
    if not 0.0 < r <= 1.0:
        raise ValueError(f"r must lie in (0, 1], got {r}")
    am = abs(p.m)
    a = _kummer_a(p.m, p.b, lam)
    c = am + 1.0
    z = 0.5 * p.b * r * r
    big_m = kummer_m(a, c, z, acc)
    dm = kummer_m_dz(a, c, z, acc)
    f = r**am * math.exp(-0.25 * p.b * r * r)
    value = f * big_m
    derivative = f * ((am / r - 0.5 * p.b * r) * big_m + p.b * r * dm)
    return value, derivative


def boundary_values(p: FiberParams, lam: float, acc: SeriesAccuracy = DEFAULT_ACCURACY):
    """``(u(1), u'(1))`` on the branch appropriate for ``p`` and ``lam``."""
    if p.b > 0:
        return radial_solution(p, lam, 1.0, acc)
    if lam < 0:
        k = math.sqrt(-lam)
        n = abs(p.m)
        return bessel_i(n, k, acc), k * bessel_i_prime(n, k, acc)
    raise UnsupportedBranch(f"b = 0 with lam = {lam} >= 0 has no analytic branch; use fdsolver")


def secular_value(p: FiberParams, lam: float, acc: SeriesAccuracy = DEFAULT_ACCURACY) -> float:
    """Robin secular function ``S(lam) = u'(1) + gamma u(1)``."""
    u, du = boundary_values(p, lam, acc)
    return du + p.gamma * u


def _certify(p: FiberParams, root: float, opts: SolverOptions):
    pencil = fdsolver.build_disc_fiber_system(p, opts.cert_cells)
    eta = opts.cert_abs + opts.cert_rel * abs(root)
    below = fdsolver.inertia(pencil, root - eta)
    upto = fdsolver.inertia(pencil, root + eta)
    return pencil, below, upto


def solve_fiber_fd(p: FiberParams, n_cells: int = fdsolver.DEFAULT_CERT_CELLS, tol: float = fdsolver.DEFAULT_TOL) -> EigResult:
    """Lowest fiber eigenvalue from the finite-element pencil alone.

    The bisection value is polished by the Rayleigh quotient of the inverse
    iteration vector, which is far less sensitive to pivot roundoff.
    """
    pencil = fdsolver.build_disc_fiber_system(p, n_cells)
    lam = fdsolver.lowest_eigenvalues(pencil, 1, tol)[0]
    certified = fdsolver.inertia(pencil, lam + tol) == 1
    vec = fdsolver.ground_vector(pencil, lam)
    polished = fdsolver.rayleigh_quotient(pencil, vec)
    if abs(polished - lam) <= max(1e-6, 1e-8 * abs(lam)):
        lam = polished
    return EigResult(lam, p.m, Method.FINITE_DIFFERENCE, tol, certified, p.b, p.gamma)


def solve_fiber_ground(p: FiberParams, opts: SolverOptions = DEFAULT_OPTIONS) -> EigResult:
    """Certified lowest eigenvalue of the fiber ``p``.

    A coarse finite-element eigenvalue seeds a bracket for the secular
    function, whose root is refined and then checked: the fine pencil must
    have no eigenvalue below ``root - eta`` and exactly one below
    ``root + eta``.  ``b = 0`` problems whose ground state is not negative
    are answered by the finite-element solver directly.
    """
    seed_pencil = fdsolver.build_disc_fiber_system(p, opts.seed_cells)
    lam_fd = fdsolver.lowest_eigenvalues(seed_pencil, 1, opts.seed_tol)[0]

    if p.b == 0 and lam_fd >= -opts.zero_margin:
        res = solve_fiber_fd(p, opts.cert_cells, opts.root_tol)
        if not res.certified:
            raise CertificationFailure(
                f"finite-element ground state not isolated for m={p.m}, b={p.b}, gamma={p.gamma}",
                root=res.lam, fd_value=res.lam,
            )
        return res

    def s(lam):
        return secular_value(p, lam, opts.accuracy)

    delta = max(opts.bracket_min, opts.bracket_rel * abs(lam_fd))
    for _ in range(opts.max_widen + 1):
        lo, hi = lam_fd - delta, lam_fd + delta
        if p.b == 0 and hi >= 0:
            hi = 0.5 * lam_fd
        s_lo, s_hi = s(lo), s(hi)
        if s_lo == 0.0 or s_hi == 0.0 or (s_lo < 0) != (s_hi < 0):
            break
        delta *= 2.0
    else:
        raise BracketFailure(
            f"no sign change of the secular function around lam_fd={lam_fd:.12g} "
            f"for m={p.m}, b={p.b}, gamma={p.gamma}"
        )

    if s_lo == 0.0:
        root = lo
    elif s_hi == 0.0:
        root = hi
    else:
        root = brentq(s, lo, hi, xtol=opts.root_tol, rtol=1e-15, maxiter=500)

    pencil, below, upto = _certify(p, root, opts)
    if below != 0 or upto != 1:
        fd_value = fdsolver.lowest_eigenvalues(pencil, 1, opts.root_tol)[0]
        raise CertificationFailure(
            f"secular root {root:.12g} not confirmed by the finite-element inertia "
            f"(count below root-eta={below}, up to root+eta={upto}, lam_fd={fd_value:.12g}) "
            f"for m={p.m}, b={p.b}, gamma={p.gamma}",
            root=root, fd_value=fd_value, count=upto,
        )

    u, du = boundary_values(p, root, opts.accuracy)
    scale = max(abs(u), abs(du))
    residual = abs(du + p.gamma * u) / scale if scale > 0 else 0.0
    return EigResult(root, p.m, Method.ANALYTIC, residual, True, p.b, p.gamma)

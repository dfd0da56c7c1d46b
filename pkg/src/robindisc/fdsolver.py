"""Weighted P1 finite-element pencils and Sturm-bisection eigen-extraction.

Two families of one-dimensional Sturm-Liouville forms are discretised with
piecewise-linear elements on a uniform mesh:

* the radial fiber of the disc, weight ``r`` on ``(0, 1)``, Robin term
  ``gamma |u(1)|^2``;
* the boundary-layer operators in the scaled distance ``tau`` on
  ``(0, delta)``, weight ``1 - sqrt(h) tau``, Robin term ``-|u(0)|^2`` and
  Dirichlet at ``tau = delta``.

Weight and potential are frozen at each element midpoint and the products
of hat functions are integrated exactly, so both the stiffness and mass
matrices stay symmetric tridiagonal.  Eigenvalues are extracted by bisection
on the inertia of ``K - lam*M`` (negative LDL^T pivots).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Optional

import numpy as np
from scipy.linalg import LinAlgError, solve_banded

from . import _kernels
from .errors import NoConvergence, PivotBreakdown, ZeroVector

if TYPE_CHECKING:
    from .fiber import FiberParams

__all__ = [
    "WeightTag",
    "TridiagonalPencil",
    "AnnulusParams",
    "build_disc_fiber_system",
    "build_annulus_system",
    "inertia",
    "lowest_eigenvalues",
    "ground_vector",
    "rayleigh_quotient",
    "agmon_mass",
    "DEFAULT_SCAN_CELLS",
    "DEFAULT_CERT_CELLS",
    "DEFAULT_TOL",
]

DEFAULT_SCAN_CELLS = 2000
DEFAULT_CERT_CELLS = 8000
DEFAULT_TOL = 1e-10


class WeightTag(enum.Enum):
    DISC_RADIAL = "DiscRadial"
    ANNULUS_WEIGHT = "AnnulusWeight"


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=np.float64)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class TridiagonalPencil:
    """Symmetric tridiagonal pair (K, M); immutable once built."""

    stiff_diag: np.ndarray
    stiff_off: np.ndarray
    mass_diag: np.ndarray
    mass_off: np.ndarray
    grid: np.ndarray
    weight_tag: WeightTag

    def __post_init__(self):
        for name in ("stiff_diag", "stiff_off", "mass_diag", "mass_off", "grid"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))
        n = self.stiff_diag.shape[0]
        if n < 1:
            raise ValueError("empty pencil")
        if self.mass_diag.shape != (n,) or self.grid.shape != (n,):
            raise ValueError("diagonal / grid lengths disagree")
        if self.stiff_off.shape != (n - 1,) or self.mass_off.shape != (n - 1,):
            raise ValueError("off-diagonal lengths must be n - 1")
        if not self.mass_is_positive_definite():
            raise ValueError("mass matrix is not positive definite")

    @property
    def size(self) -> int:
        return self.stiff_diag.shape[0]

    def mass_is_positive_definite(self) -> bool:
        # inertia of (M, 0) at lam = 0 counts negative pivots of M itself
        zeros_d = np.zeros_like(self.mass_diag)
        zeros_o = np.zeros_like(self.mass_off)
        c = _kernels.negative_pivots(self.mass_diag, self.mass_off, zeros_d, zeros_o, 0.0)
        return c == 0

    def apply_stiffness(self, v) -> np.ndarray:
        return _tridiag_matvec(self.stiff_diag, self.stiff_off, v)

    def apply_mass(self, v) -> np.ndarray:
        return _tridiag_matvec(self.mass_diag, self.mass_off, v)


def _tridiag_matvec(d, o, v) -> np.ndarray:
    v = np.asarray(v, dtype=np.float64)
    out = d * v
    out[:-1] += o * v[1:]
    out[1:] += o * v[:-1]
    return out


def _assemble(nodes, weight_mid, potential_mid):
    """Assemble P1 stiffness/mass on ``nodes`` with midpoint-frozen coefficients.

    ``weight_mid`` and ``potential_mid`` are per-element values (length
    ``len(nodes) - 1``).  Returns full (unconstrained) diagonals.
    """
    hh = np.diff(nodes)
    wm = weight_mid * hh
    grad = weight_mid / hh
    pot = potential_mid * wm

    n = nodes.shape[0]
    kd = np.zeros(n)
    md = np.zeros(n)
    kd[:-1] += grad + pot / 3.0
    kd[1:] += grad + pot / 3.0
    md[:-1] += wm / 3.0
    md[1:] += wm / 3.0
    ko = -grad + pot / 6.0
    mo = wm / 6.0
    return kd, ko, md, mo


def build_disc_fiber_system(p: "FiberParams", n_cells: int, r_inner: float = 0.0) -> TridiagonalPencil:
    """P1 pencil for one angular-momentum fiber of the disc.

    The form is ``int (|u'|^2 + (m/r - b r/2)^2 |u|^2) r dr + gamma |u(1)|^2``
    with mass ``int |u|^2 r dr`` on ``(r_inner, 1)``.  With ``r_inner = 0``
    the origin node is free for ``m = 0`` and pinned to zero otherwise; a
    positive ``r_inner`` imposes Dirichlet there (thin-ring restriction).
    """
    if n_cells < 16:
        raise ValueError(f"n_cells must be >= 16, got {n_cells}")
    if not 0.0 <= r_inner < 1.0:
        raise ValueError(f"r_inner must lie in [0, 1), got {r_inner}")
    m, b, gamma = int(p.m), float(p.b), float(p.gamma)

    nodes = np.linspace(r_inner, 1.0, n_cells + 1)
    mid = 0.5 * (nodes[:-1] + nodes[1:])
    potential = (m / mid - 0.5 * b * mid) ** 2
    kd, ko, md, mo = _assemble(nodes, mid, potential)
    kd[-1] += gamma

    if r_inner > 0.0 or m != 0:
        kd, ko, md, mo, nodes = kd[1:], ko[1:], md[1:], mo[1:], nodes[1:]
    return TridiagonalPencil(kd, ko, md, mo, nodes, WeightTag.DISC_RADIAL)


@dataclass(frozen=True)
class AnnulusParams:
    """Semiclassical parameters of the boundary-layer operators.

    ``delta = h**(rho - 1/2)`` is the length of the scaled interval.
    """

    h: float
    rho: float
    m: Optional[int] = None
    b: Optional[float] = None
    delta: float = field(init=False)

    def __post_init__(self):
        if not 0.0 < self.h < 1.0:
            raise ValueError(f"h must lie in (0, 1), got {self.h}")
        if not 0.25 < self.rho < 0.5:
            raise ValueError(f"rho must lie in (1/4, 1/2), got {self.rho}")
        if not self.h ** (0.5 - self.rho) < 1.0 / 3.0:
            raise ValueError(
                f"h^(1/2 - rho) = {self.h ** (0.5 - self.rho):.4g} must be < 1/3"
            )
        object.__setattr__(self, "delta", self.h ** (self.rho - 0.5))


def build_annulus_system(ap: AnnulusParams, n_cells: int, include_potential: bool) -> TridiagonalPencil:
    """P1 pencil for the weighted boundary-layer operator on ``(0, delta)``.

    Without the potential this is the weighted Robin Laplacian; with it, the
    fiber operator indexed by ``(ap.m, ap.b)``.
    """
    if n_cells < 16:
        raise ValueError(f"n_cells must be >= 16, got {n_cells}")
    sqrt_h = math.sqrt(ap.h)
    nodes = np.linspace(0.0, ap.delta, n_cells + 1)
    mid = 0.5 * (nodes[:-1] + nodes[1:])
    w = 1.0 - sqrt_h * mid
    if include_potential:
        if ap.m is None or ap.b is None:
            raise ValueError("include_potential requires AnnulusParams.m and .b")
        potential = ap.h / w**2 * (ap.m - 0.5 * ap.b * w**2) ** 2
    else:
        potential = np.zeros_like(mid)
    kd, ko, md, mo = _assemble(nodes, w, potential)
    kd[0] -= 1.0
    # Dirichlet at tau = delta
    kd, ko, md, mo, nodes = kd[:-1], ko[:-1], md[:-1], mo[:-1], nodes[:-1]
    return TridiagonalPencil(kd, ko, md, mo, nodes, WeightTag.ANNULUS_WEIGHT)


def inertia(pencil: TridiagonalPencil, lam: float) -> int:
    """Number of eigenvalues of (K, M) strictly below ``lam``."""
    args = (pencil.stiff_diag, pencil.stiff_off, pencil.mass_diag, pencil.mass_off)
    c = _kernels.negative_pivots(*args, float(lam))
    if c < 0:
        c = _kernels.negative_pivots(*args, float(lam) + 1e-13 * (1.0 + abs(lam)))
        if c < 0:
            raise PivotBreakdown(f"exact zero pivot persists at lam={lam!r}")
    return c


def _spectrum_lower_bracket(pencil: TridiagonalPencil, k: int):
    ratio = pencil.stiff_diag / pencil.mass_diag
    lo = float(ratio.min()) - 1.0
    step = abs(lo) + 1.0
    while inertia(pencil, lo) > 0:
        lo -= step
        step *= 2.0
    hi = lo + 1.0
    step = 1.0
    while inertia(pencil, hi) < k:
        hi += step
        step *= 2.0
    return lo, hi


def lowest_eigenvalues(pencil: TridiagonalPencil, k: int = 1, tol: float = DEFAULT_TOL) -> list:
    """The ``k`` smallest generalized eigenvalues, each bracketed to width ``tol``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if not tol > 0:
        raise ValueError("tol must be positive")
    if k > pencil.size:
        raise ValueError(f"pencil has only {pencil.size} eigenvalues")
    lo, hi = _spectrum_lower_bracket(pencil, k)
    args = (pencil.stiff_diag, pencil.stiff_off, pencil.mass_diag, pencil.mass_off)
    out = []
    for j in range(1, k + 1):
        lam = _kernels.bisect_kth(*args, j, lo, hi, tol)
        if math.isnan(lam):
            raise PivotBreakdown(f"zero pivot persisted while bisecting eigenvalue {j}")
        out.append(lam)
        lo = lam - tol
    return out


def ground_vector(pencil: TridiagonalPencil, lam: float, tol: float = 1e-10, max_iter: int = 50) -> np.ndarray:
    """Eigenvector for ``lam`` by shifted inverse iteration, M-normalised.

    The sign is fixed so that the entry of largest magnitude is positive.
    """
    n = pencil.size
    shift = lam - 1e-9 * (1.0 + abs(lam))
    ab = np.zeros((3, n))
    ab[0, 1:] = pencil.stiff_off - shift * pencil.mass_off
    ab[1] = pencil.stiff_diag - shift * pencil.mass_diag
    ab[2, :-1] = ab[0, 1:]

    v = np.ones(n) / math.sqrt(n)
    for _ in range(max_iter):
        try:
            w = solve_banded((1, 1), ab, pencil.apply_mass(v), check_finite=False)
        except LinAlgError:
            shift -= 1e-7 * (1.0 + abs(lam))
            ab[1] = pencil.stiff_diag - shift * pencil.mass_diag
            ab[0, 1:] = pencil.stiff_off - shift * pencil.mass_off
            ab[2, :-1] = ab[0, 1:]
            continue
        w /= math.sqrt(float(w @ pencil.apply_mass(w)))
        if w[np.argmax(np.abs(w))] < 0:
            w = -w
        diff = w - v
        if math.sqrt(abs(float(diff @ pencil.apply_mass(diff)))) <= tol:
            return w
        v = w
    raise NoConvergence(f"inverse iteration at lam={lam} did not converge in {max_iter} steps")


def _quadratic_form(d, o, v) -> float:
    # fsum keeps the cancellation in K*const (Neumann null vector) at roundoff level
    return math.fsum(np.concatenate((d * v * v, 2.0 * o * v[:-1] * v[1:])))


def rayleigh_quotient(pencil: TridiagonalPencil, v) -> float:
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (pencil.size,):
        raise ValueError(f"vector length {v.shape} does not match pencil size {pencil.size}")
    if not np.any(v):
        raise ZeroVector("Rayleigh quotient of the zero vector")
    denom = _quadratic_form(pencil.mass_diag, pencil.mass_off, v)
    return _quadratic_form(pencil.stiff_diag, pencil.stiff_off, v) / denom


def agmon_mass(pencil: TridiagonalPencil, v, h: float, alpha: float) -> float:
    """Discrete weighted mass ``int |v|^2 exp(2 alpha (1 - r)/sqrt(h)) r dr``.

    The exponential weight is folded into the vector and the consistent
    mass matrix is applied, so ``alpha = 0`` gives back the plain M-norm.
    """
    r = pencil.grid
    y = np.asarray(v, dtype=np.float64) * np.exp(alpha * (1.0 - r) / math.sqrt(h))
    return float(y @ pencil.apply_mass(y))

"""Closed-form large-|gamma| predictions and the trial-state machinery.

All disc-level quantities are in the natural eigenvalue units of the
magnetic Robin Laplacian; the semiclassical parameter is ``h = gamma**-2``
and ``mu = h**2 * lam``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import QuadratureUnderResolved

__all__ = [
    "PredictionTerms",
    "AsymptoticPrediction",
    "TrialState",
    "e_inf",
    "beta_hat",
    "lambda1_prediction",
    "mu1_prediction",
    "hh_expansion",
    "fiber_family_expansion",
    "m_truncation_bound",
    "smooth_cutoff",
    "u0",
    "u2",
    "trial_function",
    "trial_residual",
]

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class PredictionTerms:
    leading: float
    boundary: float
    oscillatory: float
    constant: float

    def total(self) -> float:
        return self.leading + self.boundary + self.oscillatory + self.constant


@dataclass(frozen=True)
class AsymptoticPrediction:
    b: float
    gamma_or_h: float
    value: float
    terms: PredictionTerms


def e_inf(b: float):
    """Oscillatory term ``min_m (m - b/2)^2`` and its minimiser.

    Ties (``b/2`` a half-integer) resolve to the smaller integer.
    """
    half = 0.5 * b
    m_star = math.ceil(half - 0.5)
    return (m_star - half) ** 2, int(m_star)


def beta_hat(b: float, A: float) -> float:
    """``min over |m| <= A`` of ``(m - b/2)^2``."""
    if A < 0:
        raise ValueError(f"A must be >= 0, got {A}")
    cap = math.floor(A)
    _, m_star = e_inf(b)
    m = min(max(m_star, -cap), cap)
    return (m - 0.5 * b) ** 2


def lambda1_prediction(b: float, gamma: float) -> AsymptoticPrediction:
    """Three-term asymptotics ``-gamma^2 + gamma + e(b) - 1/2``."""
    if not gamma < 0:
        raise ValueError(f"gamma must be negative, got {gamma}")
    terms = PredictionTerms(-gamma * gamma, gamma, e_inf(b)[0], -0.5)
    return AsymptoticPrediction(b, gamma, terms.total(), terms)


def mu1_prediction(b: float, h: float) -> float:
    if not h > 0:
        raise ValueError(f"h must be positive, got {h}")
    return -h - h**1.5 + (e_inf(b)[0] - 0.5) * h * h


def hh_expansion(h: float) -> float:
    """Ground energy of the weighted Robin Laplacian through order h."""
    return -1.0 - math.sqrt(h) - 0.5 * h


def fiber_family_expansion(b: float, A: float, h: float) -> float:
    """Lowest energy over the fibers ``|m| <= A``: ``-1 - sqrt(h) + (beta_hat - 1/2) h``."""
    return -1.0 - math.sqrt(h) + (beta_hat(b, A) - 0.5) * h


def m_truncation_bound(b: float) -> int:
    """Largest ``|m|`` that can still minimise over fibers at field ``b``."""
    return int(math.floor((1.0 + SQRT2) * b / 2.0))


def smooth_cutoff(s):
    """C^2 quintic step: 1 on [0, 1/4], 0 on [1/2, inf).

    Returns ``(chi, chi', chi'')`` evaluated at ``s``.
    """
    s = np.asarray(s, dtype=np.float64)
    t = np.clip(4.0 * s - 1.0, 0.0, 1.0)
    step = t**3 * (10.0 - 15.0 * t + 6.0 * t * t)
    dstep = 30.0 * t * t * (1.0 - t) ** 2
    ddstep = 60.0 * t * (1.0 - t) * (1.0 - 2.0 * t)
    return 1.0 - step, -4.0 * dstep, -16.0 * ddstep


def u0(tau):
    """Robin half-line ground state ``sqrt(2) exp(-tau)`` with two derivatives."""
    tau = np.asarray(tau, dtype=np.float64)
    v = SQRT2 * np.exp(-tau)
    return v, -v, v


def u2(tau):
    """Second-order corrector ``(tau^2/4 - 1/8) u0`` with two derivatives."""
    tau = np.asarray(tau, dtype=np.float64)
    base = SQRT2 * np.exp(-tau)
    poly = 0.25 * tau * tau - 0.125
    dpoly = 0.5 * tau - poly
    ddpoly = 0.25 * tau * tau - tau + 0.375
    return poly * base, dpoly * base, ddpoly * base


@dataclass(frozen=True)
class TrialState:
    h: float
    rho: float
    quadrature_nodes: int = 400

    def __post_init__(self):
        if not 0.0 < self.h < 1.0:
            raise ValueError(f"h must lie in (0, 1), got {self.h}")
        if not 0.25 < self.rho < 0.5:
            raise ValueError(f"rho must lie in (1/4, 1/2), got {self.rho}")
        if self.quadrature_nodes < 1:
            raise ValueError("quadrature_nodes must be >= 1")

    @property
    def delta(self) -> float:
        return self.h ** (self.rho - 0.5)


def trial_function(ts: TrialState, tau):
    """``f = chi(tau/delta) (u0 + h u2)`` and its first two derivatives."""
    delta = ts.delta
    chi, dchi, ddchi = smooth_cutoff(np.asarray(tau) / delta)
    a0, a1, a2 = u0(tau)
    c0, c1, c2 = u2(tau)
    g, dg, ddg = a0 + ts.h * c0, a1 + ts.h * c1, a2 + ts.h * c2
    f = chi * g
    df = dchi / delta * g + chi * dg
    ddf = ddchi / delta**2 * g + 2.0 * dchi / delta * dg + chi * ddg
    return f, df, ddf


def _residual_norm(ts: TrialState, panels: int) -> float:
    sqrt_h = math.sqrt(ts.h)
    energy = hh_expansion(ts.h)
    x, w = np.polynomial.legendre.leggauss(8)
    # f vanishes beyond delta/2
    edges = np.linspace(0.0, 0.5 * ts.delta, panels + 1)
    half = 0.5 * np.diff(edges)
    centre = 0.5 * (edges[:-1] + edges[1:])
    tau = (centre[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    f, df, ddf = trial_function(ts, tau)
    radial = 1.0 - sqrt_h * tau
    resid = -ddf + sqrt_h / radial * df - energy * f
    return math.sqrt(float(np.sum(weights * radial * resid * resid)))


def trial_residual(ts: TrialState) -> float:
    """Weighted L2 norm of ``(H_h - (-1 - sqrt(h) - h/2)) f``.

    Composite 8-point Gauss-Legendre on ``ts.quadrature_nodes`` panels; the
    result must agree with the doubled rule to 1%.
    """
    coarse = _residual_norm(ts, ts.quadrature_nodes)
    fine = _residual_norm(ts, 2 * ts.quadrature_nodes)
    if abs(fine - coarse) > 0.01 * abs(fine):
        raise QuadratureUnderResolved(
            f"trial residual changed from {coarse:.6g} to {fine:.6g} on doubling the panels"
        )
    return fine

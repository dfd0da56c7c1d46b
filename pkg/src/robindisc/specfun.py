"""Ascending-series special functions used by the radial fiber problem.

Only the regime that the disc solver needs is covered: real parameters and
a moderate real argument (z = b r^2 / 2 <= 32 for b <= 64).  Everything is
plain float64 arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NoConvergence, PoleParameter

__all__ = [
    "SeriesAccuracy",
    "DEFAULT_ACCURACY",
    "kummer_m",
    "kummer_m_dz",
    "kummer_series",
    "bessel_i",
    "bessel_i_prime",
]

# number of consecutive small terms required before declaring convergence
_STREAK = 10


@dataclass(frozen=True)
class SeriesAccuracy:
    rel_tol: float = 1e-14
    max_terms: int = 5000

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError(f"rel_tol must be positive, got {self.rel_tol}")
        if self.max_terms < 10:
            raise ValueError(f"max_terms must be >= 10, got {self.max_terms}")


DEFAULT_ACCURACY = SeriesAccuracy()


def _is_pole(c: float) -> bool:
    return c <= 0 and float(c).is_integer()


def kummer_series(a: float, c: float, z: float, acc: SeriesAccuracy = DEFAULT_ACCURACY):
    """Sum M(a, c, z) and report how many nonzero terms were used.

    Returns ``(value, n_terms)``.  When ``a`` is a non-positive integer the
    series is a polynomial and ``n_terms`` is exactly ``1 - a``.
    """
    if _is_pole(c):
        raise PoleParameter(f"Kummer M undefined for c={c} (non-positive integer)")
    term = 1.0
    total = 1.0
    n_terms = 1
    streak = 0
    for k in range(acc.max_terms):
        term *= (a + k) / (c + k) * z / (k + 1)
        if term == 0.0:
            # terminating (polynomial) series, or z == 0
            return total, n_terms
        total += term
        n_terms += 1
        if abs(term) <= acc.rel_tol * abs(total):
            streak += 1
            if streak >= _STREAK:
                return total, n_terms
        else:
            streak = 0
    raise NoConvergence(
        f"Kummer series M({a}, {c}, {z}) did not converge in {acc.max_terms} terms"
    )


def kummer_m(a: float, c: float, z: float, acc: SeriesAccuracy = DEFAULT_ACCURACY) -> float:
    """Confluent hypergeometric function M(a, c, z) = 1F1(a; c; z)."""
    return kummer_series(a, c, z, acc)[0]


def kummer_m_dz(a: float, c: float, z: float, acc: SeriesAccuracy = DEFAULT_ACCURACY) -> float:
    """dM/dz via the contiguous relation dM/dz = (a/c) M(a+1, c+1, z)."""
    if _is_pole(c):
        raise PoleParameter(f"Kummer M undefined for c={c} (non-positive integer)")
    if a == 0:
        return 0.0
    return a / c * kummer_m(a + 1.0, c + 1.0, z, acc)


def bessel_i(order: int, x: float, acc: SeriesAccuracy = DEFAULT_ACCURACY) -> float:
    """Modified Bessel function I_n(x) of integer order n >= 0 by ascending series."""
    n = int(order)
    if n != order or n < 0:
        raise ValueError(f"bessel_i supports integer orders >= 0, got {order}")
    if x < 0:
        raise ValueError(f"bessel_i requires x >= 0, got {x}")
    half = 0.5 * x
    term = half**n / math.factorial(n)
    if term == 0.0:
        return 0.0
    total = term
    q = half * half
    streak = 0
    for k in range(1, acc.max_terms):
        term *= q / (k * (k + n))
        total += term
        if term <= acc.rel_tol * total:
            streak += 1
            if streak >= _STREAK:
                return total
        else:
            streak = 0
    raise NoConvergence(f"Bessel series I_{n}({x}) did not converge in {acc.max_terms} terms")


def bessel_i_prime(order: int, x: float, acc: SeriesAccuracy = DEFAULT_ACCURACY) -> float:
    """Derivative I_n'(x) = (I_{n-1}(x) + I_{n+1}(x)) / 2, with I_{-1} = I_1."""
    n = int(order)
    lower = bessel_i(abs(n - 1), x, acc)
    return 0.5 * (lower + bessel_i(n + 1, x, acc))

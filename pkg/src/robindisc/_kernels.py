"""Compiled inner loops for tridiagonal pencils.

numba is used when available; the pure-Python fallback has identical
semantics and is only slower.
"""

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - exercised only without numba
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


@njit(cache=True)
def negative_pivots(kd, ko, md, mo, lam):
    """Number of negative LDL^T pivots of K - lam*M.

    Returns -1 when an exact zero pivot would be divided by.  A zero final
    pivot only says that ``lam`` is itself an eigenvalue, and is not counted.
    """
    n = kd.shape[0]
    d = kd[0] - lam * md[0]
    if d == 0.0 and n > 1:
        return -1
    count = 1 if d < 0.0 else 0
    for i in range(1, n):
        e = ko[i - 1] - lam * mo[i - 1]
        d = kd[i] - lam * md[i] - e * e / d
        if d == 0.0 and i < n - 1:
            return -1
        if d < 0.0:
            count += 1
    return count


@njit(cache=True)
def bisect_kth(kd, ko, md, mo, k, lo, hi, tol):
    """Bisect for the k-th eigenvalue (1-based) given count(lo) < k <= count(hi).

    Exact zero pivots are side-stepped by a relative nudge of the probe.
    Returns the midpoint of the final bracket.
    """
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        c = negative_pivots(kd, ko, md, mo, mid)
        if c < 0:
            c = negative_pivots(kd, ko, md, mo, mid + 1e-13 * (1.0 + abs(mid)))
            if c < 0:
                return np.nan
        if c >= k:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)

"""Length surgery: which multisets of norms can belong to a tight frame.

A multiset a_1..a_k is a tight frame set for an n-dimensional space iff
n * max a_i^2 <= sum a_i^2.  Lengths are given as plain sequences of
positive numbers; comparisons carry a relative tolerance on the energy.
"""
from __future__ import annotations

import numpy as np

from .errors import ContractError
from .numerics import DEFAULT_TOL, Tolerance


def _squares(lengths, allow_empty=False) -> np.ndarray:
    a = np.asarray(lengths, dtype=float).ravel()
    if not allow_empty and a.size == 0:
        raise ContractError("need at least one length")
    if np.any(~np.isfinite(a)) or np.any(a <= 0):
        raise ContractError("lengths must be positive and finite")
    return a * a


def _check_dim(n):
    if int(n) != n or n < 1:
        raise ContractError(f"dimension must be a positive integer, got {n}")


def _dominated(top: float, total: float, factor: float, tol: Tolerance) -> bool:
    """top * factor <= total within a relative tolerance."""
    return bool(top * factor <= total * (1 + tol.rel_eps))


def tight_frame_set_check(lengths, n: int, tol: Tolerance = None) -> bool:
    """The fundamental inequality max a_i^2 <= (1/n) sum a_i^2."""
    tol = tol or DEFAULT_TOL
    _check_dim(n)
    sq = _squares(lengths)
    return _dominated(sq.max(), sq.sum(), n, tol)


def mq_bound_check(lengths, n: int, q: int, tol: Tolerance = None) -> bool:
    """max_{i>q} a_i^2 <= sum_{i>q} a_i^2 / (n - q), dropping the first q lengths.

    Holds for every tight frame set; callers order the lengths so the first
    q are the ones set aside.
    """
    tol = tol or DEFAULT_TOL
    _check_dim(n)
    sq = _squares(lengths)
    if q >= n:
        raise ContractError(f"q={q} must be smaller than n={n}")
    if q < 1 or q > len(sq) - 1:
        raise ContractError(f"q must lie in 1..{len(sq) - 1}")
    rest = sq[q:]
    return _dominated(rest.max(), rest.sum(), n - q, tol)


def replace_one_interval(lengths, n: int):
    """Admissible values of b^2 when b replaces the first length.

    Returns ``(lo, hi)``: {b, a_2, ..., a_k} is a tight frame set iff
    lo <= b^2 <= hi, where lo = max(0, n m - s), hi = s / (n - 1), with
    m = max_{i>=2} a_i^2 and s = sum_{i>=2} a_i^2.
    """
    _check_dim(n)
    if n < 2:
        raise ContractError("replace-one interval needs n >= 2")
    sq = _squares(lengths)
    if len(sq) < 2:
        raise ContractError("need at least two lengths")
    rest = sq[1:]
    m, s = rest.max(), rest.sum()
    lo, hi = max(0.0, n * m - s), s / (n - 1)
    if lo > hi * (1 + DEFAULT_TOL.rel_eps):
        raise ContractError("no replacement makes these lengths a tight frame set")
    return float(lo), float(hi)


def length_surgery_feasible(lengths, n: int, p: int, q: int, tol: Tolerance = None):
    """Decide (p, q)-length surgery resulting in a tight frame set.

    Returns ``(feasible, kept)`` where ``kept`` are 0-based indices of the
    k - p lengths that stay.  For q < n some kept subset must satisfy
    (n - q) max b^2 <= sum b^2; the subset with the largest slack
    sum b^2 - (n - q) max b^2 is reported.  For q >= n any subset works,
    since q copies of the largest kept length always restore the inequality.
    """
    tol = tol or DEFAULT_TOL
    _check_dim(n)
    sq = _squares(lengths)
    k = len(sq)
    if not (0 <= p <= k) or q < 0:
        raise ContractError(f"need 0 <= p <= {k} and q >= 0")
    size = k - p
    # descending by value, stable in index
    order = sorted(range(k), key=lambda i: (-sq[i], i))
    if q >= n:
        return True, tuple(sorted(order[:size]))
    if size == 0:
        return False, None
    # with the largest kept value fixed, the next-largest values maximize the sum
    best, best_slack = None, None
    for start in range(k - size + 1):
        window = order[start:start + size]
        top, total = sq[window[0]], sq[window].sum()
        if _dominated(top, total, n - q, tol):
            slack = total - (n - q) * top
            if best is None or slack > best_slack:
                best, best_slack = window, slack
    if best is None:
        return False, None
    return True, tuple(sorted(best))

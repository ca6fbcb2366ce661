"""Weak compositions and hyperedge-type bookkeeping.

A weak composition of ``m`` into ``k`` parts is a k-tuple of nonnegative
integers summing to m.  Compositions index the collapsed symmetric edge
probabilities: an edge's type is the count of its members per community.
The canonical iteration order everywhere in this package is lexicographic
descending, e.g. for m=2, k=2: (2,0), (1,1), (0,2).
"""

from functools import lru_cache
from math import comb, factorial

import numpy as np


@lru_cache(maxsize=None)
def weak_compositions(m: int, k: int) -> tuple:
    """All weak compositions of m into k parts, lexicographically descending.

    The number of compositions returned is C(m+k-1, k-1).
    """
    if k < 1:
        raise ValueError(f"need at least one part, got k={k}")
    if m < 0:
        raise ValueError(f"order must be nonnegative, got m={m}")
    if k == 1:
        return ((m,),)
    out = []
    for first in range(m, -1, -1):
        for rest in weak_compositions(m - first, k - 1):
            out.append((first,) + rest)
    return tuple(out)


def num_weak_compositions(m: int, k: int) -> int:
    """Count of weak compositions of m into k parts: C(m+k-1, k-1)."""
    if k < 1:
        raise ValueError(f"need at least one part, got k={k}")
    return comb(m + k - 1, k - 1)


@lru_cache(maxsize=None)
def composition_index(m: int, k: int) -> dict:
    """Map composition tuple -> its position in the canonical order."""
    return {w: i for i, w in enumerate(weak_compositions(m, k))}


def add_member(w: tuple, label: int) -> tuple:
    """Composition w with one extra member of community ``label`` (0-based).

    This is the edge type seen from a vertex of that community: the counts
    of the other members plus the vertex itself.
    """
    if not 0 <= label < len(w):
        raise ValueError(f"label {label} out of range for {len(w)} communities")
    return w[:label] + (w[label] + 1,) + w[label + 1:]


@lru_cache(maxsize=None)
def member_lift_table(m: int, k: int) -> np.ndarray:
    """Index table lifting order-(m-1) types to order-m types.

    Entry [label, i] is the canonical index (within weak_compositions(m, k))
    of add_member(w_i, label), where w_i is the i-th composition of m-1.
    Precomputed so per-vertex likelihood sums reduce to array gathers.
    """
    lower = weak_compositions(m - 1, k)
    upper = composition_index(m, k)
    table = np.empty((k, len(lower)), dtype=np.int64)
    for label in range(k):
        for i, w in enumerate(lower):
            table[label, i] = upper[add_member(w, label)]
    return table


def capacity(w: tuple, sizes) -> int:
    """Number of distinct edges of type w given per-community vertex counts.

    Product over communities of C(sizes[l], w[l]); zero whenever some part
    exceeds its community size.  Exact integer arithmetic.
    """
    total = 1
    for s, c in zip(sizes, w):
        total *= comb(int(s), int(c))
        if total == 0:
            return 0
    return total


def expected_capacity(w: tuple, alpha, n: int) -> int:
    """Capacity of type w under idealized community sizes floor(alpha_l * n)."""
    return capacity(w, [int(a * n) for a in alpha])


def expected_capacity_vector(m: int, k: int, alpha, n: int) -> np.ndarray:
    """expected_capacity for every composition of m into k parts, as floats."""
    sizes = [int(a * n) for a in alpha]
    return np.array([float(capacity(w, sizes)) for w in weak_compositions(m, k)])


def multinomial_weight_vector(m: int, k: int, alpha) -> np.ndarray:
    """Large-n limit of expected_capacity_vector(m,...)/C(n-1, m) per type.

    For composition w this is m!/(prod w_l!) * prod alpha_l^w_l, the
    probability that m iid draws from alpha realize the type w.
    """
    alpha = np.asarray(alpha, dtype=float)
    out = []
    for w in weak_compositions(m, k):
        coeff = factorial(m)
        for c in w:
            coeff //= factorial(c)
        out.append(coeff * np.prod(alpha ** np.array(w)))
    return np.array(out)

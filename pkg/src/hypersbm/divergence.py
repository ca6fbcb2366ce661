"""Information quantities that locate the exact-recovery phase transition.

The central object is a Chernoff–Hellinger style divergence between two
communities: the best exponential-tilting separation of their degree
profiles, aggregated over all edge orders and membership types.  Exact
recovery of the planted partition is impossible below 1 and efficiently
achievable above 1, so the minimum over community pairs acts as the
threshold of the model.
"""

import math
from dataclasses import dataclass

import numpy as np

from .compositions import (
    expected_capacity_vector,
    member_lift_table,
    multinomial_weight_vector,
)
from .model import ProbabilityTensors, max_expected_degree, validate_prior

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def kl_bernoulli(y: float, q: float) -> float:
    """KL divergence between Bernoulli(y) and Bernoulli(q), with 0 log 0 = 0.

    q must lie strictly inside (0, 1); callers clamp empirical estimates.
    """
    if not 0.0 <= y <= 1.0:
        raise ValueError(f"mean y={y} outside [0, 1]")
    if not 0.0 < q < 1.0:
        raise ValueError(f"reference mean q={q} must be in (0, 1)")
    total = 0.0
    if y > 0.0:
        total += y * math.log(y / q)
    if y < 1.0:
        total += (1.0 - y) * math.log((1.0 - y) / (1.0 - q))
    return total


def maximize_concave(f, lo: float = 0.0, hi: float = 1.0, tol: float = 1e-9):
    """Golden-section maximum of a concave function on [lo, hi].

    Returns (argmax, max).  Both endpoints are evaluated explicitly.
    """
    a, b = lo, hi
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    best = max([(lo, f(lo)), (x, f(x)), (hi, f(hi))], key=lambda p: p[1])
    return best


def _coefficient_arrays(coefficients) -> dict:
    if isinstance(coefficients, ProbabilityTensors):
        return {m: coefficients.unscaled(m) for m in coefficients.orders}
    return {m: np.asarray(v, dtype=float) for m, v in coefficients.items()}


def _pair_layers(j: int, k: int, alpha, coefficients: dict, n: int, weights: str):
    """Per-order (weight, coeff_j, coeff_k) arrays over types of m-1 members.

    ``weights``: "finite" uses the capacity ratio at this n; "asymptotic"
    uses its large-n limit (a multinomial law over types).
    """
    alpha = validate_prior(alpha)
    num_communities = len(alpha)
    layers = []
    for m, coeff in sorted(coefficients.items()):
        if weights == "finite":
            if n < m + 1:
                raise ValueError(f"need n >= {m + 1} for order {m}")
            wts = expected_capacity_vector(m - 1, num_communities, alpha, n)
            wts = wts / float(math.comb(n - 1, m - 1))
        elif weights == "asymptotic":
            wts = multinomial_weight_vector(m - 1, num_communities, alpha)
        else:
            raise ValueError(f"unknown weights mode {weights!r}")
        lift = member_lift_table(m, num_communities)
        layers.append((wts, coeff[lift[j]], coeff[lift[k]]))
    return layers


def pair_objective(j: int, k: int, alpha, coefficients, n: int, weights: str = "finite"):
    """The tilting objective t -> sum over layers and types of
    weight * (t*cj + (1-t)*ck - cj^t * ck^(1-t)).

    Nonnegative by the AM-GM inequality, zero at both endpoints, concave
    in t.  Zero coefficients follow the limit convention 0^t = 0 for t > 0
    and 0^0 = 1, which keeps the objective continuous on (0, 1].
    """
    layers = _pair_layers(j, k, alpha, _coefficient_arrays(coefficients), n, weights)

    def objective(t: float) -> float:
        total = 0.0
        for wts, cj, ck in layers:
            total += float(wts @ (t * cj + (1.0 - t) * ck - cj**t * ck**(1.0 - t)))
        return total

    return objective


@dataclass(frozen=True)
class PairDivergence:
    j: int
    k: int
    value: float
    t_star: float


@dataclass(frozen=True)
class DivergenceReport:
    """Pairwise divergences, their minimum, and the minimizing pair."""

    pairs: tuple
    value: float
    argmin: tuple

    def pair(self, j: int, k: int) -> PairDivergence:
        j, k = min(j, k), max(j, k)
        for p in self.pairs:
            if (p.j, p.k) == (j, k):
                return p
        raise KeyError((j, k))


def chernoff_hellinger_pair(j: int, k: int, alpha, coefficients, n: int,
                            weights: str = "finite", tol: float = 1e-9) -> PairDivergence:
    """Best tilting separation between communities j and k.

    ``coefficients`` holds the unscaled per-type rates (tensors built via
    ``from_unscaled`` are accepted directly).
    """
    if j == k:
        raise ValueError("communities must be distinct")
    f = pair_objective(j, k, alpha, coefficients, n, weights)
    t_star, value = maximize_concave(f, tol=tol)
    return PairDivergence(j=j, k=k, value=value, t_star=t_star)


def chernoff_hellinger(alpha, coefficients, n: int, weights: str = "finite",
                       tol: float = 1e-9) -> DivergenceReport:
    """Divergence for every community pair and the overall minimum."""
    alpha = validate_prior(alpha)
    num_communities = len(alpha)
    if num_communities < 2:
        raise ValueError("need at least two communities")
    pairs = []
    for j in range(num_communities):
        for k in range(j + 1, num_communities):
            pairs.append(chernoff_hellinger_pair(j, k, alpha, coefficients, n,
                                                 weights=weights, tol=tol))
    best = min(pairs, key=lambda p: p.value)
    return DivergenceReport(pairs=tuple(pairs), value=best.value,
                            argmin=(best.j, best.k))


# ---------------------------------------------------------------------------
# KL form of the separation
# ---------------------------------------------------------------------------

def _bernoulli_balance_point(qj: float, qk: float) -> float:
    """Mean y where KL(y||qj) = KL(y||qk); lies between the two means."""
    num = math.log((1.0 - qj) / (1.0 - qk))
    den = math.log(qk / qj) + num
    return num / den


def minimax_kl_pair(j: int, k: int, tensors: ProbabilityTensors, alpha, n: int) -> float:
    """Capacity-weighted minimax KL separation of communities j and k.

    For each order and type, the smallest worst-case KL divergence from a
    single degree-rate to the two communities' edge probabilities; the
    minimization splits per type and is solved exactly at the mean where
    the two divergences balance.  In the sparse regime this equals the
    tilting divergence times log(n).
    """
    if j == k:
        raise ValueError("communities must be distinct")
    alpha = validate_prior(alpha)
    num_communities = len(alpha)
    total = 0.0
    for m in tensors.orders:
        caps = expected_capacity_vector(m - 1, num_communities, alpha, n)
        lift = member_lift_table(m, num_communities)
        qj = tensors.q[m][lift[j]]
        qk = tensors.q[m][lift[k]]
        for cap, a, b in zip(caps, qj, qk):
            if cap == 0.0 or a == b:
                continue
            if a == 0.0 or b == 0.0:
                q = max(a, b)
                term = -math.log(1.0 - q) if q < 1.0 else math.inf
            elif a == 1.0 or b == 1.0:
                term = -math.log(min(a, b))
            else:
                y = _bernoulli_balance_point(a, b)
                term = kl_bernoulli(y, a)
            total += cap * term
    return total


# ---------------------------------------------------------------------------
# Regime classification and model assumptions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RegimeVerdict:
    value: float
    label: str  # "impossible" | "critical" | "achievable"


def classify_regime(value: float, tol: float = 1e-3) -> RegimeVerdict:
    """Place a divergence value relative to the unit threshold."""
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    if value > 1.0 + tol:
        label = "achievable"
    elif value < 1.0 - tol:
        label = "impossible"
    else:
        label = "critical"
    return RegimeVerdict(value=float(value), label=label)


def center_separation_table(tensors: ProbabilityTensors, alpha, n: int,
                            eps: float = 0.1) -> np.ndarray:
    """For each community pair, whether some third community distinguishes
    their expected adjacency rows at the model's degree scale.

    Entry (j, k) is True when there exists l with
    (n / rho) * | sum over orders and (m-2)-types of
    capacity * (Q[j+l+w] - Q[k+l+w]) | >= eps,
    where rho is the maximum expected degree.  Spectral initialization
    needs this separation; the refinement stages do not.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    alpha = validate_prior(alpha)
    num_communities = tensors.k
    rho = max_expected_degree(tensors, alpha, n)
    if rho == 0:
        raise ValueError("model has zero expected degree")
    table = np.ones((num_communities, num_communities), dtype=bool)
    # Lift per (community, type of m-2 members) to rows of the order-m tensor.
    for j in range(num_communities):
        for k in range(j + 1, num_communities):
            best = 0.0
            for l in range(num_communities):
                acc = 0.0
                for m in tensors.orders:
                    if m < 2:
                        continue
                    caps = expected_capacity_vector(m - 2, num_communities, alpha, n)
                    lift_m = member_lift_table(m, num_communities)
                    lift_low = member_lift_table(m - 1, num_communities)
                    idx_j = lift_m[j][lift_low[l]]
                    idx_k = lift_m[k][lift_low[l]]
                    acc += float(caps @ (tensors.q[m][idx_j] - tensors.q[m][idx_k]))
                best = max(best, abs(acc) * n / rho)
            table[j, k] = table[k, j] = best >= eps
    return table


def probability_ratio_bound(tensors: ProbabilityTensors) -> float:
    """Largest within-order ratio of edge probabilities across types.

    Expected degrees are proportional up to this constant; the agnostic
    refinement's estimator accuracy depends on it being O(1).  Any zero
    entry makes the bound infinite.
    """
    worst = 1.0
    for m in tensors.orders:
        vals = tensors.q[m]
        lo = float(vals.min())
        hi = float(vals.max())
        if lo == 0.0:
            return math.inf
        worst = max(worst, hi / lo)
    return worst

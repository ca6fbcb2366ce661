"""End-to-end recovery pipelines, evaluation, and community counting.

Two routes to exact recovery: the agnostic pipeline (mean-degree trimming,
ball-peeling initialization, iterative likelihood refinement with estimated
probabilities) and the known-parameter pipeline (edge splitting, degree-cap
trimming, initialization on one part, MAP correction on the other).
"""

import math
from dataclasses import dataclass
from itertools import permutations

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import DegenerateDegreeError
from .model import (
    Hypergraph,
    ProbabilityTensors,
    adjacency_matrix,
    max_expected_degree,
    validate_prior,
)
from .refinement import agnostic_refine, map_correct, split
from .spectral import (
    default_radius,
    keep_by_degree_cap,
    keep_by_mean_degree,
    prior_degree_cap,
    radius_from_degree_scale,
    rank_k_approx,
    spectral_init,
    trim,
)


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

def confusion_matrix(truth, estimate, k: int) -> np.ndarray:
    truth = np.asarray(truth, dtype=np.int64)
    estimate = np.asarray(estimate, dtype=np.int64)
    out = np.zeros((k, k), dtype=np.int64)
    np.add.at(out, (truth, estimate), 1)
    return out


def mismatch_ratio(truth, estimate, k: int = None):
    """Fraction of misclassified vertices under the best label permutation.

    Solved exactly as an assignment problem on the confusion matrix.
    Returns (ratio, permutation) where permutation[a] is the estimate label
    matched to truth label a.
    """
    truth = np.asarray(truth, dtype=np.int64)
    estimate = np.asarray(estimate, dtype=np.int64)
    if truth.shape != estimate.shape:
        raise ValueError("membership vectors must have equal length")
    if k is None:
        k = int(max(truth.max(), estimate.max())) + 1
    conf = confusion_matrix(truth, estimate, k)
    rows, cols = linear_sum_assignment(conf, maximize=True)
    perm = np.empty(k, dtype=np.int64)
    perm[rows] = cols
    matched = conf[rows, cols].sum()
    return 1.0 - matched / len(truth), perm


def mismatch_ratio_bruteforce(truth, estimate, k: int) -> float:
    """Exhaustive minimum over all k! label permutations (test oracle)."""
    conf = confusion_matrix(truth, estimate, k)
    n = len(np.asarray(truth))
    best = 0
    for perm in permutations(range(k)):
        best = max(best, sum(conf[a, perm[a]] for a in range(k)))
    return 1.0 - best / n


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RecoveryReport:
    """Outcome of a recovery pipeline with stagewise diagnostics."""

    labels: np.ndarray
    stage1_labels: np.ndarray
    kept: int                # vertices surviving the trimming stage
    iterations: int          # refinement rounds run (0 for the MAP route)
    eta: float = None        # mismatch ratio vs truth, when truth was given
    eta_stage1: float = None
    permutation: np.ndarray = None


def _finish_report(truth, k, labels, stage1, kept, iterations) -> RecoveryReport:
    if truth is None:
        return RecoveryReport(labels=labels, stage1_labels=stage1, kept=kept,
                              iterations=iterations)
    eta, perm = mismatch_ratio(truth, labels, k)
    eta1, _ = mismatch_ratio(truth, stage1, k)
    return RecoveryReport(labels=labels, stage1_labels=stage1, kept=kept,
                          iterations=iterations, eta=eta, eta_stage1=eta1,
                          permutation=perm)


# ---------------------------------------------------------------------------
# Pipelines
# ---------------------------------------------------------------------------

def agnostic_partition(h: Hypergraph, k: int, seed: int = 0, truth=None,
                       radius: float = None) -> RecoveryReport:
    """Recover communities without knowing the edge probabilities.

    Trims by mean degree, initializes by ball peeling (radius from the
    untrimmed mean degree unless supplied), then refines with estimated
    probabilities.
    """
    if k < 1:
        raise ValueError("need k >= 1")
    degrees = h.degrees()
    a = adjacency_matrix(h)
    keep = keep_by_mean_degree(degrees)
    a_kept = trim(a, keep)
    if radius is None:
        radius = default_radius(degrees)
    stage1 = spectral_init(a_kept, keep, k, radius, seed=[seed, 1])
    labels, rounds = agnostic_refine(h, stage1, k, seed=seed)
    return _finish_report(truth, k, labels, stage1, int(keep.sum()), rounds)


def partition_with_prior(h: Hypergraph, k: int, tensors: ProbabilityTensors,
                         alpha, seed: int = 0, truth=None,
                         split_adjust: bool = True) -> RecoveryReport:
    """Recover communities with known probabilities and prior.

    Splits edges with retention loglog(n)/log(n), trims the first part by
    the known degree cap, initializes there, and MAP-corrects every vertex
    on the second part.  ``split_adjust`` rescales the probabilities fed to
    the correction by the fraction of edges it actually sees (the
    distributionally correct likelihood); disable to score with the raw
    model probabilities instead.
    """
    if k < 1:
        raise ValueError("need k >= 1")
    if h.n < 16:
        raise ValueError(f"known-parameter pipeline needs n >= 16, got {h.n}")
    alpha = validate_prior(alpha)
    theta = math.log(math.log(h.n))
    parts = split(h, theta, seed=[seed, 3])

    tensors0 = tensors.scaled_by(parts.probability)
    cap = prior_degree_cap(tensors0, h.n)
    degrees0 = parts.first.degrees()
    keep = keep_by_degree_cap(degrees0, cap)
    a_kept = trim(adjacency_matrix(parts.first), keep)
    rho0 = max_expected_degree(tensors0, alpha, h.n)
    radius = radius_from_degree_scale(rho0, h.n)
    stage1 = spectral_init(a_kept, keep, k, radius, seed=[seed, 1])

    tensors1 = tensors.scaled_by(1.0 - parts.probability) if split_adjust else tensors
    labels = map_correct(parts.second, stage1, tensors1, alpha)
    return _finish_report(truth, k, labels, stage1, int(keep.sum()), 0)


# ---------------------------------------------------------------------------
# Number of communities
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CommunityCountEstimate:
    """Eigenvalue-threshold estimate of the number of communities.

    ``k_hat`` counts the adjacency eigenvalues above max_degree^(3/4);
    the spectrum and threshold are kept so borderline gaps can be audited.
    """

    k_hat: int
    eigenvalues: np.ndarray
    threshold: float

    @property
    def gap(self) -> float:
        """Ratio of the last accepted eigenvalue to the threshold."""
        if self.k_hat == 0:
            return 0.0
        return float(self.eigenvalues[self.k_hat - 1] / self.threshold)


def estimate_num_communities(h: Hypergraph, num_eigenvalues: int = None,
                             full_spectrum: bool = False) -> CommunityCountEstimate:
    """Count communities as the eigenvalues of the adjacency matrix larger
    than the 3/4 power of the maximum degree.

    By default only the top ceil(log n) + 5 eigenvalues are computed; pass
    ``full_spectrum`` (n <= 200) or ``num_eigenvalues`` to widen the search.
    If every computed eigenvalue clears the threshold the count returned is
    the number computed (a lower bound).
    """
    degrees = h.degrees()
    d_tilde = int(degrees.max())
    if d_tilde == 0:
        raise DegenerateDegreeError("empty hypergraph: maximum degree is zero")
    threshold = d_tilde ** 0.75
    a = adjacency_matrix(h)
    if full_spectrum:
        if h.n > 200:
            raise ValueError("full spectrum supported only for n <= 200")
        num = h.n
    elif num_eigenvalues is None:
        num = min(h.n, math.ceil(math.log(h.n)) + 5)
    else:
        num = min(h.n, num_eigenvalues)
    vals = rank_k_approx(a, num).values
    below = np.flatnonzero(vals <= threshold)
    k_hat = int(below[0]) if len(below) else len(vals)
    return CommunityCountEstimate(k_hat=k_hat, eigenvalues=vals, threshold=threshold)

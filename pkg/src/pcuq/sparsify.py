"""Sparse sub-basis selection by coefficient thresholding.

Dropping the basis polynomials outside a subset J leaves, by Parseval,
a relative L2 error computable from the coefficients alone:

    E(t; J) = sqrt( sum_{i not in J} w_i(t)^2 / sum_i w_i(t)^2 ).

The smallest J with E < eps at one time is a prefix of the
sort-by-magnitude order, and a union over snapshot times gives a
single subset valid for the whole trajectory.
"""

from dataclasses import dataclass

import numpy as np

from .collocation import CoefficientTrajectory
from .errors import DegenerateColumnError


def sparsity_error(traj: CoefficientTrajectory, J, t_index) -> float:
    """Relative L2 error of keeping only the rows in J at one snapshot."""
    col = traj.coeffs[:, t_index]
    total = float(col @ col)
    if total == 0.0:
        raise DegenerateColumnError(f"all coefficients vanish at time index {t_index}")
    keep = np.zeros(traj.m, dtype=bool)
    J = np.asarray(list(J), dtype=np.intp)
    if J.size:
        keep[J] = True
    dropped = float(col[~keep] @ col[~keep])
    return float(np.sqrt(dropped / total))


def optimal_set(traj: CoefficientTrajectory, t_index, eps) -> np.ndarray:
    """Minimum-cardinality subset with sparsity_error < eps at one time.

    Sorting |w_i| descending and taking the shortest prefix whose
    excluded tail meets the bound is provably optimal for this
    separable objective.  Ties in magnitude are broken toward the
    smaller linear index, which makes the argmin deterministic.
    Returns the kept linear indices, sorted ascending.
    """
    if eps <= 0:
        raise ValueError("tolerance must be positive")
    col = traj.coeffs[:, t_index]
    total = float(col @ col)
    if total == 0.0:
        raise DegenerateColumnError(f"all coefficients vanish at time index {t_index}")
    # stable sort on -|w| keeps smaller linear indices first among ties
    order = np.argsort(-np.abs(col), kind="stable")
    kept_energy = np.cumsum(col[order] ** 2)
    tail = np.sqrt(np.maximum(total - kept_energy, 0.0) / total)
    ok = tail < eps
    if eps > 1.0:
        return np.empty(0, dtype=np.intp)
    n_keep = int(np.argmax(ok)) + 1 if ok.any() else traj.m
    return np.sort(order[:n_keep])


@dataclass
class SparsityReport:
    tolerance: float
    pointwise_sets: list                 # kept-index arrays, one per retained snapshot
    global_set: np.ndarray               # union, sorted ascending
    max_pointwise: int
    skipped_columns: int = 0

    @property
    def global_cardinality(self):
        return len(self.global_set)


def global_set(traj: CoefficientTrajectory, eps) -> SparsityReport:
    """Union of the pointwise-optimal subsets over all snapshot times.

    All-zero columns (e.g. the initial instant under zero initial
    conditions) admit no relative error; they are skipped and counted
    rather than forcing the full basis.
    """
    sets = []
    skipped = 0
    union = np.zeros(traj.m, dtype=bool)
    for t in range(traj.k):
        try:
            Jt = optimal_set(traj, t, eps)
        except DegenerateColumnError:
            skipped += 1
            continue
        sets.append(Jt)
        union[Jt] = True
    max_pointwise = max((len(Jt) for Jt in sets), default=0)
    return SparsityReport(tolerance=float(eps), pointwise_sets=sets,
                          global_set=np.flatnonzero(union),
                          max_pointwise=max_pointwise, skipped_columns=skipped)


def sweep(traj: CoefficientTrajectory, tolerances):
    """(eps, max_t |J_t|, |union|) triples for a tolerance ladder."""
    return [(float(eps), rep.max_pointwise, rep.global_cardinality)
            for eps, rep in ((e, global_set(traj, e)) for e in tolerances)]

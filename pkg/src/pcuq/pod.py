"""Proper orthogonal decomposition of coefficient trajectories.

The snapshot matrix W collects the chaos coefficient vectors at every
time point, column by column.  Its leading left singular vectors span
the best r-dimensional subspace in the least-squares sense, and
rotating the polynomial basis by those vectors yields a small
orthonormal family that carries almost all of the trajectory.
"""

from dataclasses import dataclass

import numpy as np

from .basis import IndexSet, eval_basis
from .collocation import CoefficientTrajectory
from .space import ParameterSpace


@dataclass
class PodBasis:
    """Orthogonal projection onto the leading left singular subspace.

    Attributes
    ----------
    projection : ndarray
        m x r column-orthogonal matrix (u_1 ... u_r).
    singular_values : ndarray
        Full nonincreasing list, length min(m, k).
    r : int
        Reduced dimension.
    """

    projection: np.ndarray
    singular_values: np.ndarray
    r: int


@dataclass
class ReducedTrajectory:
    """Coordinates of the snapshots in the reduced basis, r x k."""

    times: np.ndarray
    reduced: np.ndarray


def _thin_svd(W):
    try:
        U, S, Vt = np.linalg.svd(W, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(
            f"SVD failed on {W.shape} snapshot matrix, "
            f"|W|_max={np.abs(W).max():.3e}, finite={np.all(np.isfinite(W))}") from exc
    # fix each direction so its largest-magnitude entry is positive;
    # reproducible across LAPACK builds
    for j in range(U.shape[1]):
        i = int(np.argmax(np.abs(U[:, j])))
        if U[i, j] < 0:
            U[:, j] = -U[:, j]
            Vt[j, :] = -Vt[j, :]
    return U, S, Vt


def pod(traj: CoefficientTrajectory, r: int):
    """Reduce the coefficient trajectory to r POD modes.

    Returns the basis and the reduced coordinates; the reconstruction
    is projection @ reduced.
    """
    W = traj.coeffs
    rmax = min(W.shape)
    if not 1 <= r <= rmax:
        raise ValueError(f"reduced dimension {r} outside [1, {rmax}]")
    U, S, _ = _thin_svd(W)
    P = U[:, :r].copy()
    basis = PodBasis(projection=P, singular_values=S, r=r)
    reduced = ReducedTrajectory(times=traj.times, reduced=P.T @ W)
    return basis, reduced


def rotated_basis_eval(basis: PodBasis, iset: IndexSet, p, space: ParameterSpace):
    """Evaluate the r rotated polynomials at a physical point.

    psi_j(p) = sum_i projection[i, j] * Phi_i(reference(p)); the family
    inherits orthonormality from the column-orthogonal rotation.
    """
    phi = eval_basis(iset, space.to_reference(p))
    return basis.projection.T @ phi


def pod_error_curve(traj: CoefficientTrajectory, r_list):
    """Worst-case relative L2 reduction error for each candidate rank.

    For rank r the error at time t is |w(t) - P_r P_r^T w(t)| / |w(t)|;
    columns with zero norm are skipped.  Returns (r, max error) pairs.
    """
    W = traj.coeffs
    U, _, _ = _thin_svd(W)
    colnorm2 = np.sum(W * W, axis=0)
    nz = colnorm2 > 0.0
    C2 = (U.T @ W) ** 2                       # squared coordinates, (rmax, k)
    kept = np.cumsum(C2, axis=0)
    out = []
    for r in r_list:
        r = int(r)
        if not 1 <= r <= min(W.shape):
            raise ValueError(f"reduced dimension {r} outside [1, {min(W.shape)}]")
        res2 = np.maximum(colnorm2[nz] - kept[r - 1, nz], 0.0)
        err = np.sqrt(res2 / colnorm2[nz]).max() if nz.any() else 0.0
        out.append((r, float(err)))
    return out

"""Stochastic collocation: drive a parametric model at cubature nodes
and project the outputs onto a chaos basis.

The expensive part is the node solves; the projection is a cheap
deterministic reduction.  Node outputs are therefore stored as an
s x k matrix and can be re-projected onto any index set without
touching the model again.
"""

import multiprocessing
from dataclasses import dataclass
from typing import Protocol

import numpy as np

from .basis import IndexSet, basis_matrix, eval_basis
from .errors import NodeSolveError, ShapeError
from .quadrature import CubatureRule
from .space import ParameterSpace


class ParametricModel(Protocol):
    """Anything that maps a physical parameter point to a trajectory.

    ``times`` is the shared snapshot grid; ``solve(p)`` returns the
    quantity of interest at those times.  Evaluations at different
    points must not share mutable state.
    """

    times: np.ndarray

    def solve(self, p) -> np.ndarray: ...


@dataclass
class NodeSolutions:
    """Model outputs at every cubature node: outputs[j] = y(times, p_j)."""

    times: np.ndarray
    outputs: np.ndarray        # (s, k)
    rule_fingerprint: str

    def save(self, path, extra=None):
        meta = dict(extra or {})
        np.savez_compressed(path, times=self.times, outputs=self.outputs,
                            rule_fingerprint=np.str_(self.rule_fingerprint),
                            **{f"meta_{k}": np.str_(v) for k, v in meta.items()})

    @classmethod
    def load(cls, path):
        with np.load(path) as z:
            obj = cls(times=z["times"], outputs=z["outputs"],
                      rule_fingerprint=str(z["rule_fingerprint"]))
            meta = {k[5:]: str(z[k]) for k in z.files if k.startswith("meta_")}
        return obj, meta


@dataclass
class CoefficientTrajectory:
    """Chaos coefficients over time: coeffs[i, j] = w_i(times[j])."""

    index_set: IndexSet
    times: np.ndarray
    coeffs: np.ndarray         # (m, k)

    def __post_init__(self):
        m, k = self.coeffs.shape
        if m != len(self.index_set):
            raise ShapeError(f"coefficient rows {m} != index set size {len(self.index_set)}")
        if k != len(self.times):
            raise ShapeError(f"coefficient columns {k} != time count {len(self.times)}")
        if not np.all(np.isfinite(self.coeffs)):
            raise ValueError("non-finite chaos coefficients")

    @property
    def m(self):
        return self.coeffs.shape[0]

    @property
    def k(self):
        return self.coeffs.shape[1]


_worker_model = None


def _init_worker(model):
    global _worker_model
    _worker_model = model


def _solve_one(arg):
    j, p = arg
    try:
        return j, np.asarray(_worker_model.solve(p), dtype=float)
    except Exception as exc:    # noqa: BLE001 - reported with node context by the caller
        return j, exc


def solve_at_nodes(model, rule: CubatureRule, space: ParameterSpace,
                   workers: int = 1) -> NodeSolutions:
    """Evaluate the model at the physical image of every rule node.

    Node evaluations are independent and may run in a process pool;
    outputs are always assembled in node order, so the result does not
    depend on the worker count.  A failure at any node aborts the run:
    the quadrature weights presuppose the full node set, so dropping
    nodes silently would bias every coefficient.
    """
    points = space.map_nodes(rule.nodes)
    k = len(model.times)
    outputs = np.empty((rule.s, k))
    jobs = list(enumerate(points))
    if workers <= 1:
        results = map(_solve_one, jobs)
        _init_worker(model)
    else:
        pool = multiprocessing.Pool(workers, initializer=_init_worker, initargs=(model,))
        results = pool.imap_unordered(_solve_one, jobs)
    try:
        for j, res in results:
            if isinstance(res, Exception):
                raise NodeSolveError(
                    f"model failed at node {j}, p={np.array2string(points[j], precision=8)}: {res}",
                    node_index=j, point=points[j]) from res
            if res.shape != (k,):
                raise NodeSolveError(
                    f"model returned shape {res.shape} at node {j}, expected ({k},)",
                    node_index=j, point=points[j])
            outputs[j] = res
    finally:
        if workers > 1:
            pool.close()
            pool.join()
    return NodeSolutions(times=np.asarray(model.times, dtype=float),
                         outputs=outputs, rule_fingerprint=rule.fingerprint())


def project(solutions: NodeSolutions, rule: CubatureRule, iset: IndexSet) -> CoefficientTrajectory:
    """Weighted projection of stored node outputs onto the basis.

    coeffs[i, t] = sum_j gamma_j * y(t, p_j) * Phi_i(x_j), accumulated
    in fixed node order.
    """
    if solutions.rule_fingerprint != rule.fingerprint():
        raise ValueError("node solutions were produced under a different cubature rule")
    B = basis_matrix(iset, rule.nodes)            # (s, m)
    coeffs = (B * rule.weights[:, None]).T @ solutions.outputs
    return CoefficientTrajectory(index_set=iset, times=solutions.times, coeffs=coeffs)


def collocate(model, rule: CubatureRule, iset: IndexSet, space: ParameterSpace,
              workers: int = 1) -> CoefficientTrajectory:
    """Solve at all nodes, then project.  Exactly s model evaluations."""
    return project(solve_at_nodes(model, rule, space, workers=workers), rule, iset)


def surrogate_eval(traj: CoefficientTrajectory, t_index: int, p, space: ParameterSpace):
    """Truncated chaos expansion at one snapshot time and physical point."""
    if not 0 <= t_index < traj.k:
        raise IndexError(f"time index {t_index} out of range [0, {traj.k})")
    phi = eval_basis(traj.index_set, space.to_reference(p))
    return float(traj.coeffs[:, t_index] @ phi)

import numpy as np
import pytest

from pcuq import (NodeSolutions, NodeSolveError, ParameterSpace, collocate,
                  project, solve_at_nodes, stroud5, surrogate_eval,
                  tensor_gauss, total_degree_set)
from pcuq.models import AffineModel, BasisModel, ConstantModel, MixedModel

TIMES = np.linspace(0.0, 1.0, 5)


def _space(q):
    return ParameterSpace.uniform_box(np.arange(1.0, q + 1.0), 0.2)


def test_constant_model_recovery():
    sp = _space(3)
    iset = total_degree_set(3, 2)
    traj = collocate(ConstantModel(TIMES, 2.5), stroud5(3), iset, sp)
    assert np.allclose(traj.coeffs[0], 2.5, atol=1e-13)
    assert np.max(np.abs(traj.coeffs[1:])) < 1e-13


def test_single_basis_function_recovery():
    # degree <= 2 polynomials sit inside the exactness range of the
    # degree-5 rule, so each coefficient must come back exactly
    sp = _space(3)
    iset = total_degree_set(3, 2)
    rule = stroud5(3)
    for j in range(len(iset)):
        traj = collocate(BasisModel(TIMES, sp, iset, j), rule, iset, sp)
        err = traj.coeffs.copy()
        err[j] -= 1.0
        assert np.max(np.abs(err)) < 1e-12, f"index {j}"


def test_mixed_model_recovery(rng):
    sp = _space(2)
    iset = total_degree_set(2, 2)
    comps = {0: rng.normal(size=5), 2: rng.normal(size=5), 5: rng.normal(size=5)}
    traj = collocate(MixedModel(TIMES, sp, iset, comps), tensor_gauss(2, 4), iset, sp)
    want = np.zeros_like(traj.coeffs)
    for i, a in comps.items():
        want[i] = a
    assert np.max(np.abs(traj.coeffs - want)) < 1e-12


def test_projection_is_linear(rng):
    sp = _space(2)
    iset = total_degree_set(2, 2)
    rule = stroud5(2)
    c1 = {0: rng.normal(size=5), 1: rng.normal(size=5)}
    c2 = {3: rng.normal(size=5), 4: rng.normal(size=5)}
    s1 = solve_at_nodes(MixedModel(TIMES, sp, iset, c1), rule, sp)
    s2 = solve_at_nodes(MixedModel(TIMES, sp, iset, c2), rule, sp)
    combo = NodeSolutions(times=s1.times,
                          outputs=2.0 * s1.outputs - 3.0 * s2.outputs,
                          rule_fingerprint=s1.rule_fingerprint)
    w1 = project(s1, rule, iset).coeffs
    w2 = project(s2, rule, iset).coeffs
    wc = project(combo, rule, iset).coeffs
    assert np.allclose(wc, 2.0 * w1 - 3.0 * w2, atol=1e-13)


def test_parseval_within_exactness(rng):
    # sum_i w_i(t)^2 equals E[y(t)^2] when y is a polynomial the rule
    # integrates exactly; both sides computed through different code
    sp = _space(2)
    iset = total_degree_set(2, 2)
    rule = tensor_gauss(2, 4)
    comps = {1: rng.normal(size=5), 4: rng.normal(size=5)}
    model = MixedModel(TIMES, sp, iset, comps)
    traj = collocate(model, rule, iset, sp)
    for t in range(5):
        second_moment = sp.expectation(lambda p: model.solve(p)[t] ** 2, rule)
        assert np.sum(traj.coeffs[:, t] ** 2) == pytest.approx(second_moment, abs=1e-12)


def test_exact_node_count():
    calls = []

    class Counting:
        times = TIMES

        def solve(self, p):
            calls.append(1)
            return np.zeros(5)

    rule = stroud5(4)
    solve_at_nodes(Counting(), rule, _space(4))
    assert len(calls) == rule.s == 33


def test_fingerprint_mismatch_rejected():
    sp = _space(2)
    iset = total_degree_set(2, 1)
    sols = solve_at_nodes(AffineModel(TIMES), stroud5(2), sp)
    with pytest.raises(ValueError, match="different cubature rule"):
        project(sols, tensor_gauss(2, 3), iset)


def test_save_load_roundtrip(tmp_path):
    sp = _space(2)
    sols = solve_at_nodes(AffineModel(TIMES), stroud5(2), sp)
    path = tmp_path / "cache.npz"
    sols.save(path, extra={"solve_key": "abc", "config_hash": "def"})
    back, meta = NodeSolutions.load(path)
    assert np.array_equal(back.times, sols.times)
    assert np.array_equal(back.outputs, sols.outputs)
    assert back.rule_fingerprint == sols.rule_fingerprint
    assert meta["solve_key"] == "abc"
    assert meta["config_hash"] == "def"


def test_worker_count_does_not_change_bits():
    sp = _space(2)
    iset = total_degree_set(2, 2)
    rule = stroud5(2)
    model = MixedModel(TIMES, sp, iset, {1: np.sin(TIMES + 1.0)})
    a = solve_at_nodes(model, rule, sp, workers=1)
    b = solve_at_nodes(model, rule, sp, workers=3)
    assert np.array_equal(a.outputs, b.outputs)
    wa = project(a, rule, iset).coeffs
    wb = project(b, rule, iset).coeffs
    assert np.array_equal(wa, wb)


class FailsAtNode:
    times = TIMES

    def __init__(self, bad):
        self.bad = bad
        self.count = 0

    def solve(self, p):
        self.count += 1
        if self.count - 1 == self.bad:
            raise RuntimeError("synthetic blowup")
        return np.zeros(5)


def test_node_failure_aborts_with_context():
    with pytest.raises(NodeSolveError) as info:
        solve_at_nodes(FailsAtNode(5), stroud5(2), _space(2))
    assert info.value.node_index == 5
    assert info.value.point.shape == (2,)
    assert "blowup" in str(info.value)


def test_wrong_output_shape_rejected():
    class Short:
        times = TIMES

        def solve(self, p):
            return np.zeros(3)

    with pytest.raises(NodeSolveError, match="shape"):
        solve_at_nodes(Short(), stroud5(2), _space(2))


def test_surrogate_eval_matches_model(rng):
    sp = _space(2)
    iset = total_degree_set(2, 2)
    comps = {0: rng.normal(size=5), 3: rng.normal(size=5)}
    model = MixedModel(TIMES, sp, iset, comps)
    traj = collocate(model, stroud5(2), iset, sp)
    for _ in range(5):
        p = rng.uniform(sp.lo, sp.hi)
        want = model.solve(p)
        for t in (0, 2, 4):
            assert surrogate_eval(traj, t, p, sp) == pytest.approx(want[t], abs=1e-11)
    with pytest.raises(IndexError):
        surrogate_eval(traj, 99, sp.means, sp)

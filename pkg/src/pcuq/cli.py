"""Command-line pipeline: solve, project, sparsify, pod, pipeline.

Exit codes: 0 success, 1 configuration error, 2 model/solver failure,
3 stale or missing node-solution cache.
"""

import argparse
import os
import sys

import numpy as np

from . import figures, report
from .basis import total_degree_set
from .collocation import NodeSolutions, project, solve_at_nodes
from .config import WORKERS_ENV, build_model, load_config
from .errors import (ConfigError, NodeSolveError, PcuqError, SolverError,
                     StaleCacheError)
from .pod import pod, pod_error_curve
from .quadrature import make_rule
from .space import ParameterSpace
from .sparsify import global_set, sweep

CACHE_NAME = "nodes_cache.npz"

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_SOLVER = 2
EXIT_STALE = 3


def _space_and_rule(cfg):
    space = ParameterSpace.uniform_box(cfg.means, cfg.halfwidth)
    rule = make_rule(cfg.rule, cfg.q)
    return space, rule


def _cache_path(cfg):
    return os.path.join(cfg.outdir, CACHE_NAME)


def cmd_solve(cfg):
    """Run the model at every cubature node, or reuse a valid cache."""
    report.ensure_outdir(cfg.outdir)
    space, rule = _space_and_rule(cfg)
    path = _cache_path(cfg)
    if os.path.exists(path):
        try:
            _, meta = NodeSolutions.load(path)
        except Exception:
            meta = {}
        if meta.get("solve_key") == cfg.solve_key():
            print(f"solve: cache hit ({path}), 0 model solves")
            return EXIT_OK
        print("solve: cache present but stale, re-solving")
    model = build_model(cfg)
    rule.to_csv(os.path.join(cfg.outdir, "rule.csv"))
    if hasattr(model, "field"):
        model.field.mesh.export(os.path.join(cfg.outdir, "mesh.txt"))
    print(f"solve: {rule.s} nodes, {cfg.workers} worker(s)")
    try:
        sols = solve_at_nodes(model, rule, space, workers=cfg.workers)
    except NodeSolveError as err:
        diag = os.path.join(cfg.outdir, "solve_diagnostics.txt")
        with open(diag, "w") as fh:
            fh.write(f"node index: {err.node_index}\n")
            fh.write("physical point: "
                     + ",".join("%.17g" % v for v in np.atleast_1d(err.point)) + "\n")
            fh.write(f"error: {err}\n")
        print(f"solve: failed at node {err.node_index}, diagnostics in {diag}",
              file=sys.stderr)
        raise
    sols.save(path, extra={"solve_key": cfg.solve_key(),
                           "config_hash": cfg.config_hash()})
    print(f"solve: wrote {path}")
    return EXIT_OK


def _load_cache(cfg):
    path = _cache_path(cfg)
    if not os.path.exists(path):
        raise StaleCacheError(f"no node-solution cache at {path}; run solve first")
    try:
        sols, meta = NodeSolutions.load(path)
    except Exception as exc:
        raise StaleCacheError(f"cannot read cache at {path}: {exc}") from None
    if meta.get("solve_key") != cfg.solve_key():
        raise StaleCacheError(
            f"cache at {path} was produced under a different solve configuration "
            f"({meta.get('solve_key')} vs {cfg.solve_key()}); rerun solve")
    _, rule = _space_and_rule(cfg)
    if sols.rule_fingerprint != rule.fingerprint():
        raise StaleCacheError(
            f"cache at {path} holds solutions for different cubature nodes; rerun solve")
    return sols, rule


def _trajectory(cfg):
    sols, rule = _load_cache(cfg)
    iset = total_degree_set(cfg.q, cfg.degree)
    return project(sols, rule, iset)


def cmd_project(cfg):
    """Project cached node solutions onto the chaos basis."""
    traj = _trajectory(cfg)
    h = cfg.config_hash()
    out = cfg.outdir
    report.write_coefficients(os.path.join(out, "coefficients.csv"), traj, h)
    report.write_magnitudes(os.path.join(out, "coefficient_magnitudes.csv"),
                            traj, h, sort=False)
    report.write_magnitudes(os.path.join(out, "coefficient_magnitudes_sorted.csv"),
                            traj, h, sort=True)
    figures.render_coefficients(os.path.join(out, "coefficients.png"), traj)
    figures.render_trajectory(os.path.join(out, "mean_trajectory.png"),
                              traj.times, traj.coeffs[0])
    print(f"project: {traj.m} coefficients at {traj.k} times -> {out}")
    return EXIT_OK


def cmd_sparsify(cfg):
    """Pick minimal basis subsets for each sparsification tolerance."""
    traj = _trajectory(cfg)
    h = cfg.config_hash()
    out = cfg.outdir
    rows = sweep(traj, cfg.tolerances)
    report.write_sparsity_sweep(os.path.join(out, "sparsity_sweep.csv"), rows, h)
    for eps in cfg.tolerances:
        rep = global_set(traj, eps)
        name = f"sparse_set_{report.eps_label(eps)}.csv"
        report.write_sparse_set(os.path.join(out, name), rep, traj.index_set, h)
    figures.render_sparsity(os.path.join(out, "sparsity.png"), rows)
    print(f"sparsify: {len(cfg.tolerances)} tolerances -> {out}")
    return EXIT_OK


def cmd_pod(cfg):
    """Compute the rotated low-rank basis and its error curve."""
    traj = _trajectory(cfg)
    h = cfg.config_hash()
    out = cfg.outdir
    curve = pod_error_curve(traj, cfg.r_list)
    report.write_pod_error(os.path.join(out, "pod_error.csv"), curve, h)
    basis, _ = pod(traj, max(cfg.r_list))
    report.write_pod_basis(os.path.join(out, "pod_basis.csv"), basis, traj.index_set, h)
    report.write_singular_values(os.path.join(out, "pod_singular_values.csv"), basis, h)
    figures.render_pod_error(os.path.join(out, "pod_error.png"), curve)
    print(f"pod: ranks {min(cfg.r_list)}..{max(cfg.r_list)} -> {out}")
    return EXIT_OK


def cmd_pipeline(cfg):
    """Run solve, project, sparsify and pod in sequence."""
    for stage in (cmd_solve, cmd_project, cmd_sparsify, cmd_pod):
        code = stage(cfg)
        if code != EXIT_OK:
            return code
    return EXIT_OK


COMMANDS = {
    "solve": cmd_solve,
    "project": cmd_project,
    "sparsify": cmd_sparsify,
    "pod": cmd_pod,
    "pipeline": cmd_pipeline,
}


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors; that code belongs
    # to solver failures here, so route usage problems through the
    # configuration-error path instead.
    def error(self, message):
        raise ConfigError(message)


def build_parser():
    parser = _Parser(prog="pcuq",
                     description="Polynomial-chaos uncertainty quantification pipeline")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in COMMANDS.items():
        p = sub.add_parser(name, help=fn.__doc__)
        p.add_argument("-c", "--config", default=None,
                       help="INI configuration file (defaults apply if omitted)")
        p.add_argument("-o", "--outdir", default=None, help="output directory")
        p.add_argument("-w", "--workers", type=int, default=None,
                       help=f"worker processes (overrides {WORKERS_ENV} and the file)")
    return parser


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        cfg = load_config(args.config, {"outdir": args.outdir, "workers": args.workers})
        return COMMANDS[args.command](cfg)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except StaleCacheError as err:
        print(f"stale cache: {err}", file=sys.stderr)
        return EXIT_STALE
    except SolverError as err:
        print(f"solver failure: {err}", file=sys.stderr)
        return EXIT_SOLVER
    except PcuqError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

"""Result files.

Every CSV starts with a comment line carrying the configuration digest,
then a header row.  Floats are written with %.17g so a value survives
the round trip exactly and reruns produce byte-identical files.
"""

import os

import numpy as np

from .basis import IndexSet
from .collocation import CoefficientTrajectory
from .pod import PodBasis
from .sparsify import SparsityReport

FLOAT_FMT = "%.17g"


def _open_out(path, config_hash):
    fh = open(path, "w")
    fh.write(f"# config={config_hash}\n")
    return fh


def _fmt(values):
    return ",".join(FLOAT_FMT % v for v in values)


def _index_columns(q):
    return ",".join(f"i{j + 1}" for j in range(q))


def write_coefficients(path, traj: CoefficientTrajectory, config_hash):
    """One row per multi-index: linear index, exponents, then the
    coefficient at every snapshot time (the header row lists the times).
    Linear indices are 1-based in files."""
    iset = traj.index_set
    with _open_out(path, config_hash) as fh:
        fh.write("linear_index," + _index_columns(iset.q) + ","
                 + ",".join("t=" + FLOAT_FMT % t for t in traj.times) + "\n")
        for i in range(traj.m):
            fh.write("%d,%s,%s\n" % (i + 1,
                                     ",".join(str(e) for e in iset[i]),
                                     _fmt(traj.coeffs[i])))


def write_magnitudes(path, traj: CoefficientTrajectory, config_hash, sort=False):
    """Max-over-time coefficient magnitude per basis polynomial.

    Unsorted (linear order) and sorted (descending magnitude) variants
    are the two standard views of the decay.
    """
    iset = traj.index_set
    mags = np.abs(traj.coeffs).max(axis=1)
    order = np.arange(traj.m)
    if sort:
        order = np.argsort(-mags, kind="stable")
    with _open_out(path, config_hash) as fh:
        fh.write("rank,linear_index," + _index_columns(iset.q) + ",degree,max_abs_coeff\n")
        degrees = iset.total_degrees()
        for rank, i in enumerate(order, start=1):
            fh.write("%d,%d,%s,%d,%s\n" % (rank, i + 1,
                                           ",".join(str(e) for e in iset[i]),
                                           degrees[i], FLOAT_FMT % mags[i]))


def write_sparsity_sweep(path, rows, config_hash):
    """rows: (eps, max_t |J_t|, |union|) triples."""
    with _open_out(path, config_hash) as fh:
        fh.write("tolerance,max_pointwise_cardinality,global_cardinality\n")
        for eps, maxpt, glob in rows:
            fh.write("%s,%d,%d\n" % (FLOAT_FMT % eps, maxpt, glob))


def write_sparse_set(path, report: SparsityReport, iset: IndexSet, config_hash):
    with _open_out(path, config_hash) as fh:
        fh.write("# tolerance=%s max_pointwise=%d global_cardinality=%d skipped_columns=%d\n"
                 % (FLOAT_FMT % report.tolerance, report.max_pointwise,
                    report.global_cardinality, report.skipped_columns))
        fh.write("linear_index," + _index_columns(iset.q) + "\n")
        for i in report.global_set:
            fh.write("%d,%s\n" % (i + 1, ",".join(str(e) for e in iset[int(i)])))


def eps_label(eps):
    return ("%.0e" % eps).replace("e-0", "e-").replace("e+0", "e+")


def write_pod_error(path, curve, config_hash):
    with _open_out(path, config_hash) as fh:
        fh.write("r,max_relative_error\n")
        for r, err in curve:
            fh.write("%d,%s\n" % (r, FLOAT_FMT % err))


def write_pod_basis(path, basis: PodBasis, iset: IndexSet, config_hash):
    """Projection columns, one file row per basis polynomial."""
    with _open_out(path, config_hash) as fh:
        fh.write("linear_index," + _index_columns(iset.q) + ","
                 + ",".join(f"u{j + 1}" for j in range(basis.r)) + "\n")
        for i in range(basis.projection.shape[0]):
            fh.write("%d,%s,%s\n" % (i + 1, ",".join(str(e) for e in iset[i]),
                                     _fmt(basis.projection[i])))


def write_singular_values(path, basis: PodBasis, config_hash):
    with _open_out(path, config_hash) as fh:
        fh.write("j,sigma\n")
        for j, s in enumerate(basis.singular_values, start=1):
            fh.write("%d,%s\n" % (j, FLOAT_FMT % s))


def ensure_outdir(outdir):
    os.makedirs(outdir, exist_ok=True)
    return outdir

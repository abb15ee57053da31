"""Normalized Legendre polynomials, multi-indices, and tensor-product bases.

The 1d family is normalized against the uniform probability density on
[-1, 1] (density 1/2), so E[phi_l^2] = 1 and the tensor products
Phi_i(x) = phi_{i1}(x_1) * ... * phi_{iq}(x_q) form an orthonormal
system in q dimensions.
"""

from math import comb

import numpy as np

from .errors import ShapeError, SizeError

# Index sets beyond this row count serve no purpose here and only
# exhaust memory.
MAX_SET_SIZE = 10_000_000


def legendre_1d(ell, x):
    """Evaluate the degree-ell normalized Legendre polynomial.

    Parameters
    ----------
    ell : int
        Polynomial degree, >= 0.
    x : float or ndarray
        Evaluation points in [-1, 1].

    Returns
    -------
    float or ndarray
        sqrt(2*ell + 1) * P_ell(x), so that the second moment under the
        density 1/2 equals one.
    """
    ell = int(ell)
    if ell < 0:
        raise ValueError("degree must be nonnegative")
    return legendre_table(x, ell)[ell]


def legendre_table(x, dmax):
    """All normalized Legendre values of degree 0..dmax at x.

    Returns an array of shape (dmax + 1,) + shape(x), computed by the
    three-term recurrence (numerically stable to high degree).
    """
    x = np.asarray(x, dtype=float)
    out = np.empty((dmax + 1,) + x.shape)
    out[0] = 1.0
    if dmax >= 1:
        out[1] = x
    for n in range(1, dmax):
        out[n + 1] = ((2 * n + 1) * x * out[n] - n * out[n - 1]) / (n + 1)
    scale = np.sqrt(2 * np.arange(dmax + 1) + 1)
    return out * scale.reshape((-1,) + (1,) * x.ndim)


class IndexSet:
    """Ordered collection of exponent multi-indices.

    The linear order is graded lexicographic: ascending total degree,
    ties broken by lexicographic comparison of the exponent tuples.
    That order is the i <-> (i1, ..., iq) bijection used everywhere,
    and it is deterministic across runs.
    """

    def __init__(self, exponents):
        exponents = np.asarray(exponents, dtype=np.int64)
        if exponents.ndim != 2:
            raise ShapeError("exponents must be a 2d array (m, q)")
        if np.any(exponents < 0):
            raise ValueError("exponents must be nonnegative")
        self.exponents = exponents
        self.exponents.setflags(write=False)

    @property
    def q(self):
        return self.exponents.shape[1]

    def __len__(self):
        return self.exponents.shape[0]

    def __getitem__(self, i):
        return tuple(int(v) for v in self.exponents[i])

    def total_degrees(self):
        return self.exponents.sum(axis=1)

    def __eq__(self, other):
        return (isinstance(other, IndexSet)
                and self.exponents.shape == other.exponents.shape
                and bool(np.all(self.exponents == other.exponents)))

    def __repr__(self):
        return f"IndexSet(m={len(self)}, q={self.q}, max_degree={int(self.total_degrees().max(initial=0))})"


def _compositions(q, degree):
    # exponent tuples of fixed total degree, ascending lexicographic
    if q == 1:
        yield (degree,)
        return
    for head in range(degree + 1):
        for tail in _compositions(q - 1, degree - head):
            yield (head,) + tail


def total_degree_set(q, d):
    """All multi-indices of total degree <= d in q dimensions.

    The result has exactly comb(d + q, q) entries in graded-lex order;
    the first entry is the zero multi-index.
    """
    if q < 1:
        raise ValueError("dimension must be >= 1")
    if d < 0:
        raise ValueError("degree must be >= 0")
    m = comb(d + q, q)
    if m > MAX_SET_SIZE:
        raise SizeError(f"index set would hold {m} entries (limit {MAX_SET_SIZE})")
    rows = []
    for degree in range(d + 1):
        rows.extend(_compositions(q, degree))
    return IndexSet(np.array(rows, dtype=np.int64))


def eval_basis(iset: IndexSet, x):
    """Evaluate every tensor-product basis polynomial at one point.

    Component i is the product over dimensions of the 1d evaluations
    prescribed by multi-index i; the zero index always gives exactly 1.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (iset.q,):
        raise ShapeError(f"expected point of dimension {iset.q}, got shape {x.shape}")
    return basis_matrix(iset, x[None, :])[0]


def basis_matrix(iset: IndexSet, points):
    """Matrix of basis values, shape (npoints, m)."""
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or points.shape[1] != iset.q:
        raise ShapeError(f"expected points of shape (n, {iset.q}), got {points.shape}")
    dmax = int(iset.total_degrees().max(initial=0))
    table = legendre_table(points, dmax)      # (dmax+1, n, q)
    out = np.ones((points.shape[0], len(iset)))
    for k in range(iset.q):
        out *= table[iset.exponents[:, k], :, k].T
    return out


def gram_matrix(iset: IndexSet, rule):
    """Gram matrix of the basis under a cubature rule on the reference cube."""
    B = basis_matrix(iset, rule.nodes)
    return (B * rule.weights[:, None]).T @ B

"""Cubature rules on the reference cube [-1, 1]^q with uniform density.

Weights always sum to one: the rules approximate expected values, not
raw integrals.  Two families are provided, a degree-5 rule with
2q^2 + 1 nodes for production runs and tensor Gauss-Legendre grids as
the high-exactness reference.
"""

import hashlib
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, SizeError


@dataclass(frozen=True)
class CubatureRule:
    name: str
    nodes: np.ndarray          # (s, q), inside the closed cube
    weights: np.ndarray        # (s,), sum to 1
    exactness_degree: int

    def __post_init__(self):
        nodes = np.ascontiguousarray(np.asarray(self.nodes, dtype=float))
        weights = np.ascontiguousarray(np.asarray(self.weights, dtype=float))
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @property
    def s(self):
        return len(self.weights)

    @property
    def q(self):
        return self.nodes.shape[1]

    @property
    def has_negative_weights(self):
        return bool(np.any(self.weights < 0))

    def describe(self):
        neg = ", includes negative weights" if self.has_negative_weights else ""
        return (f"{self.name}: s={self.s} nodes in dimension {self.q}, "
                f"exact to total degree {self.exactness_degree}{neg}")

    def fingerprint(self):
        """Stable hash of nodes and weights, for cache validation."""
        h = hashlib.sha256()
        h.update(np.ascontiguousarray(self.nodes).tobytes())
        h.update(np.ascontiguousarray(self.weights).tobytes())
        return h.hexdigest()

    def to_csv(self, path):
        q = self.q
        with open(path, "w") as fh:
            fh.write(f"# {self.describe()}\n")
            fh.write("weight," + ",".join(f"x{j+1}" for j in range(q)) + "\n")
            for w, p in zip(self.weights, self.nodes):
                fh.write(",".join("%.17g" % v for v in [w, *p]) + "\n")


def _gauss_nodes(n):
    """Raw nodes and weights of the n-point Gauss-Legendre rule."""
    if n < 1:
        raise ValueError("need at least one point")
    if n == 1:
        return np.zeros(1), np.ones(1)
    k = np.arange(n)
    x = np.cos(np.pi * (k + 0.75) / (n + 0.5))
    for _ in range(100):
        p0 = np.ones_like(x)
        p1 = x.copy()
        for m in range(1, n):
            p0, p1 = p1, ((2 * m + 1) * x * p1 - m * p0) / (m + 1)
        dp = n * (x * p1 - p0) / (x * x - 1.0)
        dx = p1 / dp
        x = x - dx
        if np.abs(dx).max() < 1e-15:
            break
    p0 = np.ones_like(x)
    p1 = x.copy()
    for m in range(1, n):
        p0, p1 = p1, ((2 * m + 1) * x * p1 - m * p0) / (m + 1)
    dp = n * (x * p1 - p0) / (x * x - 1.0)
    w = 1.0 / ((1.0 - x * x) * dp * dp)     # = classical weight / 2
    order = np.argsort(x)
    return x[order], w[order]


def gauss_legendre_1d(n):
    """The n-point Gauss-Legendre rule on [-1, 1] as a CubatureRule.

    Nodes are the roots of P_n found by Newton iteration from the
    Chebyshev initial guess (tolerance 1e-15); weights are normalized
    to the density-1/2 convention, so they sum to one.
    """
    x, w = _gauss_nodes(n)
    return CubatureRule(f"gauss_legendre(n={n})", x[:, None], w, 2 * n - 1)


def tensor_gauss(q, n):
    """Tensor product of 1d Gauss-Legendre rules, n points per dimension.

    Exact for every monomial of degree <= 2n - 1 in each dimension
    separately, hence for all polynomials of total degree <= 2n - 1.
    """
    if q < 1:
        raise ValueError("dimension must be >= 1")
    if n ** q > 10_000_000:
        raise SizeError(f"tensor grid would hold {n}^{q} nodes")
    x1, w1 = _gauss_nodes(n)
    grids = np.meshgrid(*([x1] * q), indexing="ij")
    nodes = np.column_stack([g.ravel() for g in grids])
    wgrids = np.meshgrid(*([w1] * q), indexing="ij")
    weights = np.ones(n ** q)
    for g in wgrids:
        weights *= g.ravel()
    return CubatureRule(f"tensor_gauss(n={n})", nodes, weights, 2 * n - 1)


def stroud5(q):
    """Degree-5 cubature on the cube with s = 2q^2 + 1 nodes.

    Fully symmetric construction: the center, the 2q axis points
    (+-1, 0, ..., 0), and the 2q(q-1) pair points (+-s, +-s, 0, ..., 0)
    with s^2 = 5(q-1)/(5q+1).  Moment matching on the monomials x^2,
    x^4 and x^2 y^2 fixes the three weights.  The axis weight turns
    negative for q >= 3; that is allowed, and flagged by the rule's
    ``has_negative_weights`` metadata.

    For q = 1 the 3-point Gauss-Legendre rule is returned, which is
    already exact to degree 5.
    """
    if q < 1:
        raise ValueError("dimension must be >= 1")
    if q == 1:
        x, w = _gauss_nodes(3)
        return CubatureRule("stroud5(q=1: gauss-legendre 3)", x[:, None], w, 5)
    s2 = 5.0 * (q - 1) / (5.0 * q + 1.0)
    w2 = (5.0 * q + 1.0) ** 2 / (900.0 * (q - 1) ** 2)
    w1 = (14.0 - 5.0 * q) / 90.0
    w0 = 1.0 - 2 * q * w1 - 2 * q * (q - 1) * w2
    nodes = [np.zeros(q)]
    weights = [w0]
    for i in range(q):
        for sign in (1.0, -1.0):
            e = np.zeros(q)
            e[i] = sign
            nodes.append(e)
            weights.append(w1)
    r = np.sqrt(s2)
    for i in range(q):
        for j in range(i + 1, q):
            for si in (1.0, -1.0):
                for sj in (1.0, -1.0):
                    e = np.zeros(q)
                    e[i] = si * r
                    e[j] = sj * r
                    nodes.append(e)
                    weights.append(w2)
    return CubatureRule("stroud5", np.array(nodes), np.array(weights), 5)


def make_rule(spec_str, q):
    """Rule from a config string: 'stroud5' or 'tensor:<n>'."""
    s = spec_str.strip().lower()
    if s == "stroud5":
        return stroud5(q)
    if s.startswith("tensor:"):
        try:
            n = int(s.split(":", 1)[1])
        except ValueError:
            raise ConfigError(f"cannot parse tensor rule order in {spec_str!r}") from None
        return tensor_gauss(q, n)
    raise ConfigError(f"unknown cubature rule {spec_str!r}")

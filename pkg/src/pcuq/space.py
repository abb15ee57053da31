"""Random parameter domain: a q-dimensional box with uniform density.

All basis polynomials and cubature rules live on the reference cube
[-1, 1]^q; models receive physical points.  The affine map between the
two is owned by :class:`ParameterSpace`.
"""

import numpy as np

from .errors import DomainError, ShapeError


class ParameterSpace:
    """Box [lo, hi] in R^q carrying the uniform probability density.

    Parameters
    ----------
    lo, hi : array_like
        Per-dimension bounds, lo[j] < hi[j].
    """

    def __init__(self, lo, hi):
        lo = np.atleast_1d(np.asarray(lo, dtype=float))
        hi = np.atleast_1d(np.asarray(hi, dtype=float))
        if lo.ndim != 1 or lo.shape != hi.shape:
            raise ShapeError("lo and hi must be 1d arrays of equal length")
        if not np.all(lo < hi):
            j = int(np.argmin(hi - lo))
            raise DomainError(f"empty interval in dimension {j}: [{lo[j]}, {hi[j]}]")
        self.lo = lo
        self.hi = hi
        self.lo.setflags(write=False)
        self.hi.setflags(write=False)

    @property
    def q(self):
        return len(self.lo)

    @property
    def means(self):
        return 0.5 * (self.lo + self.hi)

    @classmethod
    def uniform_box(cls, means, relative_halfwidth=0.20):
        """Box of +/- relative_halfwidth around each mean value.

        The halfwidth is interpreted on |mean|, so negative means are
        allowed; a zero mean would collapse the interval and is rejected.
        """
        means = np.atleast_1d(np.asarray(means, dtype=float))
        if np.any(means == 0.0):
            j = int(np.argmin(np.abs(means)))
            raise DomainError(f"zero mean in dimension {j}: relative box is degenerate")
        half = relative_halfwidth * np.abs(means)
        return cls(means - half, means + half)

    def _check_inside(self, p):
        p = np.asarray(p, dtype=float)
        if p.shape != (self.q,):
            raise ShapeError(f"expected point of dimension {self.q}, got shape {p.shape}")
        tol = 1e-12 * (self.hi - self.lo)
        bad = (p < self.lo - tol) | (p > self.hi + tol)
        if np.any(bad):
            j = int(np.argmax(bad))
            raise DomainError(
                f"component {j} out of box: {p[j]} not in [{self.lo[j]}, {self.hi[j]}]")
        return p

    def contains(self, p):
        try:
            self._check_inside(p)
        except (DomainError, ShapeError):
            return False
        return True

    def to_reference(self, p):
        """Map a physical point into [-1, 1]^q."""
        p = self._check_inside(p)
        return (2.0 * p - (self.lo + self.hi)) / (self.hi - self.lo)

    def to_physical(self, x):
        """Map a reference point back into the box."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.q,):
            raise ShapeError(f"expected point of dimension {self.q}, got shape {x.shape}")
        return self.lo + 0.5 * (x + 1.0) * (self.hi - self.lo)

    def map_nodes(self, nodes):
        """Map an (s, q) array of reference nodes to physical points."""
        nodes = np.asarray(nodes, dtype=float)
        return self.lo + 0.5 * (nodes + 1.0) * (self.hi - self.lo)

    def expectation(self, f, rule):
        """Expected value of f over the box, by cubature.

        f is evaluated at the physical image of every rule node; scalar
        or array outputs are both fine.  Exact whenever f is a
        polynomial within the rule's exactness degree.
        """
        vals = [np.asarray(f(p), dtype=float) for p in self.map_nodes(rule.nodes)]
        acc = rule.weights[0] * vals[0]
        for w, v in zip(rule.weights[1:], vals[1:]):
            acc = acc + w * v
        return acc

    def inner_product(self, f, g, rule):
        return self.expectation(lambda p: np.asarray(f(p)) * np.asarray(g(p)), rule)

    def __repr__(self):
        return f"ParameterSpace(q={self.q}, lo={self.lo!r}, hi={self.hi!r})"

"""Synthetic parametric models with known chaos expansions.

These are cheap stand-ins for the benchmark: polynomial maps whose
exact coefficients follow from orthonormality, so collocation,
sparsification and reduction can be checked end to end in milliseconds.
"""

import numpy as np

from .basis import IndexSet, eval_basis
from .errors import ConfigError
from .space import ParameterSpace


class ConstantModel:
    """y(t, p) = c.  Only the degree-0 coefficient survives."""

    def __init__(self, times, c=1.0):
        self.times = np.asarray(times, dtype=float)
        self.c = float(c)

    def solve(self, p):
        return np.full(len(self.times), self.c)


class AffineModel:
    """y(t, p) = t * p[0], affine in the first physical parameter."""

    def __init__(self, times):
        self.times = np.asarray(times, dtype=float)

    def solve(self, p):
        return self.times * float(np.asarray(p)[0])


class BasisModel:
    """y(t, p) = a(t) * Phi_i(reference(p)) for one chosen multi-index."""

    def __init__(self, times, space: ParameterSpace, iset: IndexSet,
                 linear_index, amplitude=None):
        self.times = np.asarray(times, dtype=float)
        self.space = space
        self.iset = iset
        self.linear_index = int(linear_index)
        self.amplitude = amplitude if amplitude is not None else np.ones(len(self.times))

    def solve(self, p):
        phi = eval_basis(self.iset, self.space.to_reference(p))
        return self.amplitude * phi[self.linear_index]


class MixedModel:
    """Finite chaos expansion with prescribed coefficient trajectories.

    ``components`` maps linear index -> coefficient array over times;
    the model is their Phi-weighted sum, so the collocated coefficients
    must reproduce the components exactly (up to rule exactness).
    """

    def __init__(self, times, space: ParameterSpace, iset: IndexSet, components):
        self.times = np.asarray(times, dtype=float)
        self.space = space
        self.iset = iset
        self.components = {int(i): np.asarray(a, dtype=float) for i, a in components.items()}

    def solve(self, p):
        phi = eval_basis(self.iset, self.space.to_reference(p))
        out = np.zeros(len(self.times))
        for i, amp in self.components.items():
            out += amp * phi[i]
        return out


def make_synthetic(name, space: ParameterSpace, times):
    """Registry for the command-line model choice 'synthetic:<name>'."""
    from .basis import total_degree_set

    name = name.strip().lower()
    if name == "constant":
        return ConstantModel(times)
    if name == "affine":
        return AffineModel(times)
    if name in ("quadratic", "mixed"):
        d = 2
        iset = total_degree_set(space.q, d)
        t = np.asarray(times, dtype=float)
        tn = t / t[-1] if t[-1] != 0 else t
        components = {0: 1.0 + 0.5 * np.sin(2 * np.pi * tn),
                      1: 0.3 * np.cos(2 * np.pi * tn)}
        if name == "quadratic":
            # last entry of the degree-2 block
            components[len(iset) - 1] = 0.05 * tn
        return MixedModel(times, space, iset, components)
    raise ConfigError(f"unknown synthetic model {name!r}")

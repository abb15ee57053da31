"""Coupled circuit / magnetoquasistatic field benchmark model."""

from .benchmark import (DEFAULT_MEANS, PARAM_NAMES, PROFILES, BenchmarkConfig,
                        RectifierModel, benchmark_config, build_field,
                        build_netlist, default_space)
from .circuit import CompiledNetlist, Netlist, shockley
from .coupled import (CoupledSystem, TransientResult, has_quadratic_contraction)
from .fem import (MU0, NU_AIR, MagneticField, Mesh, brauer_nu, elements_in_rect,
                  rectangle_mesh)

__all__ = [
    "BenchmarkConfig",
    "CompiledNetlist",
    "CoupledSystem",
    "DEFAULT_MEANS",
    "MU0",
    "MagneticField",
    "Mesh",
    "NU_AIR",
    "Netlist",
    "PARAM_NAMES",
    "PROFILES",
    "RectifierModel",
    "TransientResult",
    "benchmark_config",
    "brauer_nu",
    "build_field",
    "build_netlist",
    "default_space",
    "elements_in_rect",
    "has_quadratic_contraction",
    "rectangle_mesh",
    "shockley",
]

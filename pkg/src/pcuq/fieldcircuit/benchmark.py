"""The rectifier benchmark: transformer bridge rectifier as a
parametric model.

A sinusoidal source drives the primary winding of a 2D FEM transformer
through a small series resistance; the secondary feeds a Shockley-diode
bridge with a smoothing capacitor across the load.  The quantity of
interest is the load voltage over two source periods.

Eleven parameters are uncertain: (I_S, U_TH) of the four diodes and the
three reluctivity constants of the iron core.  Their mean values are
conventional literature numbers, not fitted to any particular device.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from ..space import ParameterSpace
from .circuit import Netlist
from .coupled import CoupledSystem
from .fem import (REGION_IRON, MagneticField, elements_in_rect, rectangle_mesh)

#: parameter means: [I_S1, U_TH1, ..., I_S4, U_TH4, kappa1, kappa2, kappa3]
DEFAULT_MEANS = np.array([1e-6, 0.02585] * 4 + [0.3774, 2.97, 388.33])

PARAM_NAMES = [f"{name}{k}" for k in range(1, 5) for name in ("i_s", "u_th")] \
    + ["kappa1", "kappa2", "kappa3"]


@dataclass(frozen=True)
class BenchmarkConfig:
    """Geometry, circuit values and discretization of the benchmark."""

    # discretization
    mesh_h: float = 0.0025
    dt: float = 1e-4
    # domain and core geometry (m)
    domain: float = 0.12
    core: tuple = (0.03, 0.09, 0.03, 0.09)
    window: tuple = (0.05, 0.07, 0.05, 0.07)
    primary_go: tuple = (0.05, 0.06, 0.05, 0.07)
    primary_ret: tuple = (0.02, 0.03, 0.05, 0.07)
    secondary_go: tuple = (0.06, 0.07, 0.05, 0.07)
    secondary_ret: tuple = (0.09, 0.10, 0.05, 0.07)
    turns_primary: int = 70
    turns_secondary: int = 70
    depth: float = 0.02
    # circuit values
    amplitude: float = 10.0
    period: float = 0.02
    r_primary: float = 0.5
    r_secondary: float = 0.5
    r_load: float = 100.0
    c_load: float = 100e-6
    # horizon: two source periods by default
    t_end: float = 0.04

    def times(self):
        n = int(round(self.t_end / self.dt))
        return np.linspace(0.0, self.t_end, n + 1)


#: mesh and step sizes for the two standard run profiles
PROFILES = {
    "benchmark": dict(mesh_h=0.0025, dt=1e-4),
    "fast": dict(mesh_h=0.005, dt=2e-4),
    "coarse": dict(mesh_h=0.01, dt=1e-3),
}


def benchmark_config(profile="benchmark", **overrides):
    if profile not in PROFILES:
        raise ValueError(f"unknown profile {profile!r}, choose from {sorted(PROFILES)}")
    return replace(BenchmarkConfig(), **{**PROFILES[profile], **overrides})


def build_field(cfg: BenchmarkConfig):
    mesh = rectangle_mesh(cfg.domain, cfg.domain, cfg.mesh_h)
    iron = elements_in_rect(mesh, cfg.core) & ~elements_in_rect(mesh, cfg.window)
    mesh.regions[iron] = REGION_IRON
    windings = [
        [(cfg.primary_go, cfg.turns_primary, +1), (cfg.primary_ret, cfg.turns_primary, -1)],
        [(cfg.secondary_go, cfg.turns_secondary, +1), (cfg.secondary_ret, cfg.turns_secondary, -1)],
    ]
    return MagneticField(mesh, windings, cfg.depth)


def build_netlist(cfg: BenchmarkConfig):
    """Source, primary loop, secondary loop, diode bridge, load."""
    net = Netlist()
    omega = 2.0 * np.pi / cfg.period
    amp = cfg.amplitude
    net.add_vsource("src", "gnd", _Sine(amp, omega))
    net.add_resistor("src", "pri", cfg.r_primary)
    net.add_winding("pri", "gnd")
    net.add_winding("ac1", "sec")
    net.add_resistor("sec", "ac2", cfg.r_secondary)
    net.add_diode("ac1", "out")
    net.add_diode("ac2", "out")
    net.add_diode("gnd", "ac1")
    net.add_diode("gnd", "ac2")
    net.add_capacitor("out", "gnd", cfg.c_load)
    net.add_resistor("out", "gnd", cfg.r_load)
    return net


class _Sine:
    """Picklable sinusoidal waveform a*sin(omega*t)."""

    def __init__(self, a, omega):
        self.a = a
        self.omega = omega

    def __call__(self, t):
        return self.a * np.sin(self.omega * t)


class RectifierModel:
    """ParametricModel interface around the coupled benchmark.

    ``solve(p)`` takes the 11 physical parameters and returns the load
    voltage at every grid time.  Instances share only immutable data
    and can be handed to worker processes as-is.
    """

    def __init__(self, config: BenchmarkConfig = None):
        self.config = config if config is not None else benchmark_config()
        self.times = self.config.times()
        net = build_netlist(self.config)
        self.field = build_field(self.config)
        self.netlist = net.compile()
        self.system = CoupledSystem(self.netlist, self.field)
        self._out = self.netlist.node_names.index("out")
        self.last_histories = None

    def solve(self, p):
        p = np.asarray(p, dtype=float)
        if p.shape != (11,):
            raise ValueError(f"expected 11 parameters, got shape {p.shape}")
        diode_params = p[:8].reshape(4, 2)
        brauer = tuple(p[8:])
        result = self.system.solve_transient(self.times, diode_params, brauer)
        self.last_histories = result.histories
        return result.node_voltage(self._out)


def default_space(halfwidth=0.20) -> ParameterSpace:
    """Uniform box of +-20% around the benchmark parameter means."""
    return ParameterSpace.uniform_box(DEFAULT_MEANS, halfwidth)

"""Circuit description for modified nodal analysis.

A netlist collects branches between named nodes; compiling it produces
one incidence matrix per element kind (node x branch, entries in
{-1, 0, +1}, ground row dropped).  The MNA unknowns are the node
voltages plus the branch currents of inductors, voltage sources and
transformer windings.
"""

import numpy as np

from ..errors import ConfigError

GROUND_NAMES = ("0", "gnd", "ground")


def shockley(u_drop, i_s, u_th):
    """Diode current and conductance for a voltage drop.

    j = I_S (exp(u/U_TH) - 1).  The exponent is clamped at u/U_TH = 40
    and continued linearly (C1) beyond, which keeps Newton iterates
    finite without touching the physical operating region.
    Vectorized over drops.
    """
    u_drop = np.asarray(u_drop, dtype=float)
    i_s = np.asarray(i_s, dtype=float)
    u_th = np.asarray(u_th, dtype=float)
    z = u_drop / u_th
    zc = np.minimum(z, 40.0)
    ex = np.exp(zc)
    over = z > 40.0
    e40 = np.exp(40.0)
    j = np.where(over, i_s * (e40 * (1.0 + (z - 40.0)) - 1.0), i_s * (ex - 1.0))
    g = np.where(over, i_s / u_th * e40, i_s / u_th * ex)
    return j, g


class Netlist:
    """Branch collector with named nodes; ground is '0', 'gnd' or 'ground'."""

    def __init__(self):
        self._nodes = {}
        self.resistors = []      # (n+, n-, ohms)
        self.capacitors = []     # (n+, n-, farad)
        self.inductors = []      # (n+, n-, henry)
        self.vsources = []       # (n+, n-, waveform v(t))
        self.isources = []       # (n+, n-, waveform i(t))
        self.diodes = []         # (anode, cathode)
        self.windings = []       # (n+, n-)

    def _node(self, name):
        name = str(name).lower()
        if name in GROUND_NAMES:
            return -1
        if name not in self._nodes:
            self._nodes[name] = len(self._nodes)
        return self._nodes[name]

    def node_index(self, name):
        name = str(name).lower()
        if name in GROUND_NAMES:
            return -1
        try:
            return self._nodes[name]
        except KeyError:
            raise ConfigError(f"unknown circuit node {name!r}") from None

    def add_resistor(self, npos, nneg, ohms):
        if ohms <= 0:
            raise ConfigError(f"resistance must be positive, got {ohms}")
        self.resistors.append((self._node(npos), self._node(nneg), float(ohms)))

    def add_capacitor(self, npos, nneg, farad):
        if farad <= 0:
            raise ConfigError(f"capacitance must be positive, got {farad}")
        self.capacitors.append((self._node(npos), self._node(nneg), float(farad)))

    def add_inductor(self, npos, nneg, henry):
        if henry <= 0:
            raise ConfigError(f"inductance must be positive, got {henry}")
        self.inductors.append((self._node(npos), self._node(nneg), float(henry)))

    def add_vsource(self, npos, nneg, waveform):
        self.vsources.append((self._node(npos), self._node(nneg), waveform))

    def add_isource(self, npos, nneg, waveform):
        self.isources.append((self._node(npos), self._node(nneg), waveform))

    def add_diode(self, anode, cathode):
        self.diodes.append((self._node(anode), self._node(cathode)))

    def add_winding(self, npos, nneg):
        """Transformer winding branch; pair order must match the field's
        winding regions."""
        self.windings.append((self._node(npos), self._node(nneg)))

    @property
    def n_nodes(self):
        return len(self._nodes)

    def compile(self):
        return CompiledNetlist(self)


def _incidence(n_nodes, branches):
    A = np.zeros((n_nodes, len(branches)))
    for b, (np_, nn_) in enumerate(branches):
        if np_ >= 0:
            A[np_, b] = 1.0
        if nn_ >= 0:
            A[nn_, b] = -1.0
    return A


class CompiledNetlist:
    """Incidence matrices and element value vectors of a netlist."""

    def __init__(self, net: Netlist):
        n = net.n_nodes
        if n == 0:
            raise ConfigError("netlist has no ungrounded nodes")
        self.n_nodes = n
        self.node_names = sorted(net._nodes, key=net._nodes.get)
        self.A_R = _incidence(n, [(a, b) for a, b, _ in net.resistors])
        self.A_C = _incidence(n, [(a, b) for a, b, _ in net.capacitors])
        self.A_L = _incidence(n, [(a, b) for a, b, _ in net.inductors])
        self.A_V = _incidence(n, [(a, b) for a, b, _ in net.vsources])
        self.A_I = _incidence(n, [(a, b) for a, b, _ in net.isources])
        self.A_D = _incidence(n, net.diodes)
        self.A_M = _incidence(n, net.windings)
        self.R = np.array([r for _, _, r in net.resistors])
        self.C = np.array([c for _, _, c in net.capacitors])
        self.L = np.array([l for _, _, l in net.inductors])
        self.v_waveforms = [w for _, _, w in net.vsources]
        self.i_waveforms = [w for _, _, w in net.isources]
        self.n_L = self.A_L.shape[1]
        self.n_V = self.A_V.shape[1]
        self.n_M = self.A_M.shape[1]
        self.n_D = self.A_D.shape[1]

    def v_values(self, t):
        return np.array([w(t) for w in self.v_waveforms])

    def i_values(self, t):
        if not self.i_waveforms:
            return np.zeros(0)
        return np.array([w(t) for w in self.i_waveforms])

    def conductance_matrix(self):
        """Constant resistive part A_R diag(1/R) A_R^T of the KCL block."""
        if self.R.size == 0:
            return np.zeros((self.n_nodes, self.n_nodes))
        return (self.A_R / self.R) @ self.A_R.T

    def capacitance_matrix(self):
        if self.C.size == 0:
            return np.zeros((self.n_nodes, self.n_nodes))
        return (self.A_C * self.C) @ self.A_C.T

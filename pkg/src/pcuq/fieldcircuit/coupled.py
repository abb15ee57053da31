"""Monolithic coupling of the circuit DAE with the magnetostatic field.

One flat state vector x = [u, j_L, j_V, j_M, A] collects node voltages,
inductor currents, source currents, winding currents and interior FEM
dofs.  Time integration is implicit Euler; every step solves the
nonlinear residual with a damped Newton iteration on the exact coupled
Jacobian.
"""

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from ..errors import DivergenceError, NewtonError
from .circuit import CompiledNetlist, shockley
from .fem import MagneticField

NEWTON_TOL = 1e-10
NEWTON_MAXIT = 50
# Tiny diagonal shift of the iteration matrix only.  When every diode
# is reverse-biased the bridge nodes float: their conductance to the
# rest of the circuit underflows and the Jacobian becomes numerically
# singular, so a direct solve parks hundreds of volts of null-space
# noise on them.  The shift bounds that mode; the converged state still
# satisfies the unshifted residual to NEWTON_TOL.
JACOBIAN_SHIFT = 1e-9


class CoupledSystem:
    """Circuit + field problem with a fixed structure.

    Diode and reluctivity parameters vary per solve; everything else
    (netlist, mesh, winding layout) is immutable and shared.
    """

    def __init__(self, netlist: CompiledNetlist, field: MagneticField = None):
        self.net = netlist
        self.field = field
        n_M_field = field.n_windings if field is not None else 0
        if netlist.n_M != n_M_field:
            raise ValueError(
                f"netlist has {netlist.n_M} winding branches, field provides {n_M_field}")
        self.n_u = netlist.n_nodes
        self.n_L = netlist.n_L
        self.n_V = netlist.n_V
        self.n_M = netlist.n_M
        self.n_A = field.n_dofs if field is not None else 0
        self.n_x = self.n_u + self.n_L + self.n_V + self.n_M + self.n_A
        o = self.n_u
        self.sl_u = slice(0, o)
        self.sl_L = slice(o, o + self.n_L); o += self.n_L
        self.sl_V = slice(o, o + self.n_V); o += self.n_V
        self.sl_M = slice(o, o + self.n_M); o += self.n_M
        self.sl_A = slice(o, o + self.n_A)
        self._G = netlist.conductance_matrix()
        self._Cmat = netlist.capacitance_matrix()

    def residual(self, x, xp, t, dt, diode_params, brauer):
        """Implicit-Euler residual at time t with previous state xp."""
        net = self.net
        u = x[self.sl_u]
        up = xp[self.sl_u]
        jL = x[self.sl_L]
        jV = x[self.sl_V]
        jM = x[self.sl_M]
        F = np.empty(self.n_x)

        kcl = self._Cmat @ ((u - up) / dt) + self._G @ u
        kcl += net.A_L @ jL + net.A_V @ jV + net.A_M @ jM
        if net.n_D:
            drops = net.A_D.T @ u
            jD, _ = shockley(drops, diode_params[:, 0], diode_params[:, 1])
            kcl += net.A_D @ jD
        if net.A_I.shape[1]:
            kcl -= net.A_I @ net.i_values(t)
        F[self.sl_u] = kcl

        if self.n_L:
            F[self.sl_L] = net.L * (jL - xp[self.sl_L]) / dt - net.A_L.T @ u
        if self.n_V:
            F[self.sl_V] = net.A_V.T @ u - net.v_values(t)

        if self.field is not None:
            A = x[self.sl_A]
            lam = self.field.X.T @ A
            lamp = self.field.X.T @ xp[self.sl_A]
            F[self.sl_M] = (lam - lamp) / dt - net.A_M.T @ u
            F[self.sl_A] = self.field.assemble(A, jM, brauer, tangent=False)
        if not np.all(np.isfinite(F)):
            row = int(np.argmax(~np.isfinite(F)))
            raise DivergenceError(f"non-finite residual in row {row} at t={t}", row=row)
        return F

    def jacobian(self, x, xp, t, dt, diode_params, brauer):
        net = self.net
        u = x[self.sl_u]
        nc = self.n_u + self.n_L + self.n_V + self.n_M
        Jc = np.zeros((nc, nc))

        # KCL rows
        Juu = self._Cmat / dt + self._G
        if net.n_D:
            drops = net.A_D.T @ u
            _, gD = shockley(drops, diode_params[:, 0], diode_params[:, 1])
            Juu = Juu + (net.A_D * gD) @ net.A_D.T
        Jc[self.sl_u, self.sl_u] = Juu
        Jc[self.sl_u, self.sl_L] = net.A_L
        Jc[self.sl_u, self.sl_V] = net.A_V
        Jc[self.sl_u, self.sl_M] = net.A_M
        # inductor rows
        if self.n_L:
            Jc[self.sl_L, self.sl_L] = np.diag(net.L / dt)
            Jc[self.sl_L, self.sl_u] = -net.A_L.T
        # source rows
        if self.n_V:
            Jc[self.sl_V, self.sl_u] = net.A_V.T
        # winding rows, voltage part
        if self.n_M:
            Jc[self.sl_M, self.sl_u] = -net.A_M.T

        if self.field is None:
            return sp.csc_matrix(Jc)
        A = x[self.sl_A]
        _, K = self.field.assemble(A, x[self.sl_M], brauer, tangent=True)
        top = sp.hstack([sp.csr_matrix(Jc),
                         sp.vstack([sp.csr_matrix((nc - self.n_M, self.n_A)),
                                    sp.csr_matrix(self.field.X.T / dt)])])
        bot = sp.hstack([sp.csr_matrix((self.n_A, nc - self.n_M)),
                         sp.csr_matrix(-self.field.X), K])
        return sp.vstack([top, bot]).tocsc()

    def _newton_step(self, x, xp, t, dt, diode_params, brauer):
        """One backward-Euler step; returns the new state and the
        residual-norm history."""
        history = []
        shift = JACOBIAN_SHIFT * sp.identity(self.n_x, format="csc")
        scale = 1.0
        for it in range(NEWTON_MAXIT):
            F = self.residual(x, xp, t, dt, diode_params, brauer)
            nrm = float(np.abs(F).max())
            history.append(nrm)
            if it == 0:
                scale = max(1.0, nrm)
            if nrm < NEWTON_TOL * scale:
                return x, history
            J = self.jacobian(x, xp, t, dt, diode_params, brauer) + shift
            dx = spla.spsolve(J, -F)
            # halving line search; keep the best candidate seen so a
            # wild step can never be accepted over a milder one
            lam = 1.0
            best_x, best_nrm = None, np.inf
            for _ in range(25):
                xn = x + lam * dx
                fn = float(np.abs(self.residual(xn, xp, t, dt, diode_params, brauer)).max())
                if fn < best_nrm:
                    best_x, best_nrm = xn, fn
                if fn < nrm:
                    break
                lam *= 0.5
            x = best_x
        F = self.residual(x, xp, t, dt, diode_params, brauer)
        nrm = float(np.abs(F).max())
        history.append(nrm)
        if nrm < NEWTON_TOL * scale:
            return x, history
        raise NewtonError(
            f"Newton stalled at t={t:.6g}: residual {nrm:.3e} after {NEWTON_MAXIT} iterations",
            time=t, history=history)

    def solve_transient(self, times, diode_params=None, brauer=None, x0=None):
        """Integrate from a zero (or given) initial state over the grid.

        ``times`` must be strictly increasing with t[0] = 0; one
        backward-Euler step is taken between consecutive grid points.
        Returns a :class:`TransientResult` holding every state and the
        per-step Newton residual histories.
        """
        times = np.asarray(times, dtype=float)
        if times.ndim != 1 or len(times) < 2 or np.any(np.diff(times) <= 0):
            raise ValueError("need a strictly increasing time grid")
        if diode_params is None:
            diode_params = np.zeros((self.net.n_D, 2))
            if self.net.n_D:
                raise ValueError("netlist has diodes but no diode parameters given")
        diode_params = np.asarray(diode_params, dtype=float)
        if brauer is None:
            brauer = (0.0, 0.0, 0.0)
        x = np.zeros(self.n_x) if x0 is None else np.asarray(x0, dtype=float).copy()
        states = np.empty((len(times), self.n_x))
        states[0] = x
        histories = []
        for n in range(1, len(times)):
            dt = times[n] - times[n - 1]
            try:
                x, hist = self._newton_step(x.copy(), states[n - 1], times[n], dt,
                                            diode_params, brauer)
            except NewtonError as err:
                raise NewtonError(
                    f"step {n} ({err})", time=err.time, history=err.history) from None
            states[n] = x
            histories.append(hist)
        return TransientResult(times=times, states=states, histories=histories, system=self)


class TransientResult:
    """States over time plus Newton diagnostics."""

    def __init__(self, times, states, histories, system):
        self.times = times
        self.states = states
        self.histories = histories
        self.system = system

    def node_voltage(self, node_index):
        """Voltage trajectory of one ungrounded node (ground is 0)."""
        if node_index < 0:
            return np.zeros(len(self.times))
        return self.states[:, node_index]

    def winding_currents(self):
        return self.states[:, self.system.sl_M]

    def field_dofs(self):
        return self.states[:, self.system.sl_A]


def has_quadratic_contraction(histories, C=10.0, floor=0.0):
    """True if some step shows the r_next <= C * r^2 signature.

    A consecutive triple (a, b, c) qualifies when b <= C*a^2 and either
    c <= C*b^2 or c already sits below the convergence floor (the
    iteration stopped before the second contraction could complete).
    """
    for hist in histories:
        for a, b, c in zip(hist, hist[1:], hist[2:]):
            if a <= 0 or a >= 1.0:
                continue
            if b <= C * a * a and (c <= C * b * b or c <= floor):
                return True
    return False

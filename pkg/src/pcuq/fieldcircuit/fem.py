"""2D magnetostatic finite elements on a structured triangle mesh.

The vector potential A_z is discretized with linear triangles; the
field magnitude B = |grad A| is element-constant, so the nonlinear
reluctivity is evaluated once per element.  Lumped winding currents
enter through a piecewise-constant winding density chi, and the same
chi integrates the flux linkage back out of the field.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from ..errors import MeshError, ShapeError

MU0 = 4e-7 * np.pi
NU_AIR = 1.0 / MU0

REGION_AIR = 0
REGION_IRON = 1
# winding regions: 10 + 2*w for the go strip of winding w, 11 + 2*w for return


def brauer_nu(B, k1, k2, k3):
    """Reluctivity nu(B) = k1*exp(k2*B^2) + k3 and its B^2-derivative.

    The exponent k2*B^2 is clamped at 30 with a linear (C1)
    continuation, so Newton stays finite far outside the saturation
    range the model is fitted for.  Vectorized over B.
    """
    B = np.asarray(B, dtype=float)
    z = k2 * B * B
    zc = np.minimum(z, 30.0)
    E = np.exp(zc)
    over = z > 30.0
    e30 = np.exp(30.0)
    nu = np.where(over, k1 * e30 * (1.0 + (z - 30.0)) + k3, k1 * E + k3)
    dnu_dB2 = np.where(over, k1 * k2 * e30, k1 * k2 * E)
    return nu, dnu_dB2


@dataclass
class Mesh:
    nodes: np.ndarray        # (nn, 2) coordinates
    triangles: np.ndarray    # (ne, 3) node indices, positively oriented
    regions: np.ndarray      # (ne,) integer tags
    grads: np.ndarray        # (ne, 2, 3) hat-function gradients
    areas: np.ndarray        # (ne,)
    centroids: np.ndarray    # (ne, 2)
    boundary: np.ndarray     # (nn,) bool, outer Dirichlet boundary

    @property
    def n_nodes(self):
        return len(self.nodes)

    @property
    def n_elements(self):
        return len(self.triangles)

    def export(self, path):
        """Plain-text dump: nodes, triangles, region tags."""
        with open(path, "w") as fh:
            fh.write(f"nodes {self.n_nodes}\n")
            for x, y in self.nodes:
                fh.write("%.17g %.17g\n" % (x, y))
            fh.write(f"triangles {self.n_elements}\n")
            for tri in self.triangles:
                fh.write("%d %d %d\n" % tuple(tri))
            fh.write(f"region-tags {self.n_elements}\n")
            for tag in self.regions:
                fh.write("%d\n" % tag)


def rectangle_mesh(lx, ly, h):
    """Structured triangulation of [0, lx] x [0, ly] with target step h.

    Each grid cell is split into two triangles.  Region tags start at
    air everywhere; callers paint rectangles afterwards.
    """
    if h <= 0 or lx <= 0 or ly <= 0:
        raise MeshError(f"mesh dimensions must be positive, got lx={lx} ly={ly} h={h}")
    nx = max(1, int(round(lx / h)))
    ny = max(1, int(round(ly / h)))
    xs = np.linspace(0.0, lx, nx + 1)
    ys = np.linspace(0.0, ly, ny + 1)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    nodes = np.column_stack([X.ravel(), Y.ravel()])
    nid = np.arange((nx + 1) * (ny + 1)).reshape(nx + 1, ny + 1)
    v00 = nid[:-1, :-1].ravel()
    v10 = nid[1:, :-1].ravel()
    v01 = nid[:-1, 1:].ravel()
    v11 = nid[1:, 1:].ravel()
    tris = np.empty((2 * nx * ny, 3), dtype=np.int64)
    tris[0::2] = np.column_stack([v00, v10, v11])
    tris[1::2] = np.column_stack([v00, v11, v01])
    p = nodes[tris]
    e1 = p[:, 1] - p[:, 0]
    e2 = p[:, 2] - p[:, 0]
    areas = 0.5 * (e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])
    if np.any(areas <= 1e-14 * lx * ly):
        raise MeshError("degenerate element in structured mesh")
    b = np.stack([p[:, 1, 1] - p[:, 2, 1], p[:, 2, 1] - p[:, 0, 1], p[:, 0, 1] - p[:, 1, 1]], axis=1)
    c = np.stack([p[:, 2, 0] - p[:, 1, 0], p[:, 0, 0] - p[:, 2, 0], p[:, 1, 0] - p[:, 0, 0]], axis=1)
    grads = np.stack([b, c], axis=1) / (2.0 * areas[:, None, None])
    cent = p.mean(axis=1)
    bnd = ((nodes[:, 0] == 0.0) | (nodes[:, 0] == lx)
           | (nodes[:, 1] == 0.0) | (nodes[:, 1] == ly))
    return Mesh(nodes=nodes, triangles=tris, regions=np.zeros(len(tris), dtype=np.int64),
                grads=grads, areas=areas, centroids=cent, boundary=bnd)


def elements_in_rect(mesh: Mesh, rect):
    """Element mask by centroid: rect = (x0, x1, y0, y1)."""
    c = mesh.centroids
    x0, x1, y0, y1 = rect
    return (c[:, 0] > x0) & (c[:, 0] < x1) & (c[:, 1] > y0) & (c[:, 1] < y1)


class MagneticField:
    """Assembled magnetostatic field problem on a tagged mesh.

    Parameters
    ----------
    mesh : Mesh
        Tagged triangulation; REGION_IRON elements carry the nonlinear
        reluctivity, everything else the constant ``nu_air``.
    windings : list
        Per winding, a list of (rect, turns, orientation) strips; the
        winding density is turns/area on each strip, signed by
        orientation, normalized by the meshed strip area so the total
        ampere-turns are exact on any grid.
    depth : float
        Out-of-plane length (m).
    """

    def __init__(self, mesh: Mesh, windings, depth, nu_air=NU_AIR):
        self.mesh = mesh
        self.depth = float(depth)
        self.nu_air = float(nu_air)
        self.iron = mesh.regions == REGION_IRON
        tris = mesh.triangles

        # element matrices for unit reluctivity: depth * area * grad.grad
        self.G = (np.einsum("eki,ekj->eij", mesh.grads, mesh.grads)
                  * (mesh.areas * self.depth)[:, None, None])

        chi = np.zeros((mesh.n_elements, len(windings)))
        for w, strips in enumerate(windings):
            for rect, turns, orient in strips:
                mask = elements_in_rect(mesh, rect)
                strip_area = mesh.areas[mask].sum()
                if strip_area <= 0:
                    raise MeshError(f"winding {w} strip {rect} covers no elements")
                chi[mask, w] = orient * turns / strip_area
                tag = (10 + 2 * w) if orient > 0 else (11 + 2 * w)
                mesh.regions[mask] = tag
        self.chi = chi
        self.n_windings = len(windings)

        # coupling matrix X: integral of chi against nodal hats, times depth
        Xfull = np.zeros((mesh.n_nodes, self.n_windings))
        for w in range(self.n_windings):
            np.add.at(Xfull[:, w], tris.ravel(),
                      np.repeat(self.depth * chi[:, w] * mesh.areas / 3.0, 3))

        self.interior = np.flatnonzero(~mesh.boundary)
        self.n_dofs = len(self.interior)
        self.X = Xfull[self.interior]

        # scatter pattern for sparse assembly
        self._rows = np.repeat(tris, 3, axis=1).ravel()
        self._cols = np.tile(tris, (1, 3)).ravel()

    def _full(self, A):
        if A.shape != (self.n_dofs,):
            raise ShapeError(f"expected {self.n_dofs} interior dofs, got {A.shape}")
        Afull = np.zeros(self.mesh.n_nodes)
        Afull[self.interior] = A
        return Afull

    def element_B(self, A):
        """Element-constant flux density magnitude |grad A|."""
        Afull = self._full(np.asarray(A, dtype=float))
        g = np.einsum("ekj,ej->ek", self.mesh.grads, Afull[self.mesh.triangles])
        return np.sqrt((g * g).sum(axis=1))

    def reluctivity(self, A, brauer):
        k1, k2, k3 = brauer
        B = self.element_B(np.asarray(A, dtype=float))
        nu = np.full(self.mesh.n_elements, self.nu_air)
        dnu = np.zeros(self.mesh.n_elements)
        nu_i, dnu_i = brauer_nu(B[self.iron], k1, k2, k3)
        nu[self.iron] = nu_i
        dnu[self.iron] = dnu_i
        return nu, dnu

    def assemble(self, A, j_M, brauer, tangent=True):
        """Residual K(A) A - X j_M on interior dofs, optionally with the
        consistent tangent.

        The tangent adds the chain-rule term
        (2 dnu/dB^2 / (area*depth)) (G_e A_e)(G_e A_e)^T per element, so
        Newton sees the exact derivative of the nonlinear reluctivity.
        """
        A = np.asarray(A, dtype=float)
        j_M = np.asarray(j_M, dtype=float)
        Afull = self._full(A)
        Ae = Afull[self.mesh.triangles]
        nu, dnu = self.reluctivity(A, brauer)
        Ke = nu[:, None, None] * self.G
        r_el = np.einsum("eij,ej->ei", Ke, Ae)
        resid_full = np.zeros(self.mesh.n_nodes)
        np.add.at(resid_full, self.mesh.triangles.ravel(), r_el.ravel())
        resid = resid_full[self.interior] - self.X @ j_M
        if not tangent:
            return resid
        GA = np.einsum("eij,ej->ei", self.G, Ae)
        scale = 2.0 * dnu / (self.mesh.areas * self.depth)
        Te = Ke + scale[:, None, None] * np.einsum("ei,ej->eij", GA, GA)
        K = sp.coo_matrix((Te.ravel(), (self._rows, self._cols)),
                          shape=(self.mesh.n_nodes,) * 2).tocsr()
        return resid, K[self.interior][:, self.interior]

    def magnetic_energy(self, A, brauer):
        """(1/2) A^T K(A) A; nonnegative whenever nu > 0."""
        A = np.asarray(A, dtype=float)
        KA = self.assemble(A, np.zeros(self.n_windings), brauer, tangent=False)
        return 0.5 * float(A @ KA)

    def flux_linkages(self, A):
        return self.X.T @ np.asarray(A, dtype=float)

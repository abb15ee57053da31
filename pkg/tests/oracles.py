"""Independent reference implementations used to generate expected values.

Everything here is computed by a different route than the package uses:
explicit polynomial coefficients instead of recurrences, closed-form
integrals instead of quadrature, exhaustive subset search instead of
greedy selection, separation-of-variables series instead of finite
elements. Tests compare package output against these.
"""

import itertools
import math

import numpy as np

# Legendre polynomials written out in the monomial basis (constant term
# first), taken from the standard closed forms.
LEGENDRE_MONOMIAL = {
    0: (1.0,),
    1: (0.0, 1.0),
    2: (-0.5, 0.0, 1.5),
    3: (0.0, -1.5, 0.0, 2.5),
    4: (3 / 8, 0.0, -30 / 8, 0.0, 35 / 8),
    5: (0.0, 15 / 8, 0.0, -70 / 8, 0.0, 63 / 8),
    6: (-5 / 16, 0.0, 105 / 16, 0.0, -315 / 16, 0.0, 231 / 16),
}


def legendre_explicit(ell, x):
    """Normalized Legendre value sqrt(2l+1) P_l(x) via explicit coefficients."""
    coeffs = LEGENDRE_MONOMIAL[ell]
    acc = np.zeros_like(np.asarray(x, dtype=float))
    for k, c in enumerate(coeffs):
        acc = acc + c * np.asarray(x, dtype=float) ** k
    return math.sqrt(2 * ell + 1) * acc


def monomial_expectation(exponents):
    """E[prod x_i^{e_i}] for x uniform on [-1, 1]^q: prod 1/(e_i+1), even only."""
    val = 1.0
    for e in exponents:
        if e % 2 == 1:
            return 0.0
        val *= 1.0 / (e + 1)
    return val


def all_monomials(q, max_degree):
    """Every exponent tuple of length q with total degree <= max_degree."""
    out = []
    for deg in range(max_degree + 1):
        for combo in itertools.combinations_with_replacement(range(q), deg):
            e = [0] * q
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return out


def brute_force_optimal_set(column, eps):
    """Exhaustive minimal subset with relative truncation error < eps.

    Among subsets of minimal cardinality the one with the largest kept
    energy wins; exact ties go to the lexicographically smallest index
    tuple. Uses fsum so the result does not depend on summation order.
    """
    col = np.asarray(column, dtype=float)
    m = col.size
    sq = [float(v) * float(v) for v in col]
    total = math.fsum(sq)
    for card in range(m + 1):
        best_kept = None
        best_set = None
        for keep in itertools.combinations(range(m), card):
            kept = math.fsum(sq[i] for i in keep)
            err = math.sqrt(max(total - kept, 0.0) / total)
            if err < eps and (best_kept is None or kept > best_kept):
                best_kept = kept
                best_set = keep
        if best_set is not None:
            return np.array(best_set, dtype=int)
    return np.arange(m)


def central_jacobian(f, x, step=1e-6):
    """Dense Jacobian of f at x by central differences."""
    x = np.asarray(x, dtype=float)
    f0 = np.asarray(f(x), dtype=float)
    jac = np.empty((f0.size, x.size))
    for j in range(x.size):
        h = step * max(1.0, abs(x[j]))
        xp = x.copy()
        xm = x.copy()
        xp[j] += h
        xm[j] -= h
        jac[:, j] = (np.asarray(f(xp), dtype=float)
                     - np.asarray(f(xm), dtype=float)) / (2 * h)
    return jac


def fourier_strip_inductance(go, ret, turns, depth, nu, kmax=400):
    """Inductance of a go/return strip pair on the unit square.

    Poisson problem -div(nu grad A) = j_density with A = 0 on the
    boundary, solved by sine-series separation of variables. The strips
    are axis-aligned rectangles (x0, x1, y0, y1) carrying uniform turns
    density; inductance is flux linkage per unit current.
    """
    kk = np.arange(1, kmax + 1)
    lam = np.pi ** 2 * (kk[:, None] ** 2 + kk[None, :] ** 2)
    chat = np.zeros((kmax, kmax))
    for (x0, x1, y0, y1), sign in ((go, 1.0), (ret, -1.0)):
        area = (x1 - x0) * (y1 - y0)
        sx = (np.cos(kk * np.pi * x0) - np.cos(kk * np.pi * x1)) / (kk * np.pi)
        sy = (np.cos(kk * np.pi * y0) - np.cos(kk * np.pi * y1)) / (kk * np.pi)
        chat += sign * (turns / area) * 2.0 * np.outer(sx, sy)
    return depth / nu * float(np.sum(chat ** 2 / lam))


def rl_sine_current(t, amplitude, r, ell, omega):
    """Closed-form current of a series RL circuit driven by A sin(wt), i(0)=0."""
    t = np.asarray(t, dtype=float)
    denom = r ** 2 + (omega * ell) ** 2
    return amplitude / denom * (r * np.sin(omega * t)
                                - omega * ell * np.cos(omega * t)
                                + omega * ell * np.exp(-r * t / ell))

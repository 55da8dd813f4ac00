"""Pointwise nonlinearity r(u) of the reduced system, its Taylor forms, and the potential V.

Species data enter through g_s = (a l_s, b k_s) and b_s = (mu, nu (beta_s, d));
with dw_s = g_s . u at a node,

    r(u) = sum_s q_s [A_s(w0_s + dw_s) - A_s(w0_s) - A_s'(w0_s) dw_s] b_s,

and the degree-i Taylor form is sum_s (q_s / i!) A_s^(i)(w0_s) dw_s^i b_s.
"""

from math import factorial

import numpy as np

from .linear import species_terms


class PointwiseNonlinearity:
    def __init__(self, species, profiles, trivial, params, beta=None):
        self.species = tuple(species)
        self.profiles = tuple(profiles)
        self.trivial = trivial
        self.params = params
        self.g, self.w0, self.p = species_terms(species, profiles, trivial, params, beta)
        self.q = np.array([s.q for s in species])
        self.l = np.array([s.l for s in species])
        self.bvec = np.column_stack([np.full(len(species), params.mu_coeff),
                                     params.nu_coeff * self.p])
        self.a_w0 = np.array([[float(prof.derivative(w, k)) for k in range(4)]
                              for prof, w in zip(self.profiles, self.w0)])

    def shifts(self, u1, u2):
        return [gs[0] * u1 + gs[1] * u2 for gs in self.g]

    def densities(self, u1, u2):
        """A_s(w0_s + dw_s) for each species."""
        return [prof(w + dw) for prof, w, dw in zip(self.profiles, self.w0, self.shifts(u1, u2))]

    def residual(self, u1, u2):
        r1 = np.zeros_like(np.asarray(u1, dtype=float))
        r2 = np.zeros_like(r1)
        for s, (prof, w, dw) in enumerate(zip(self.profiles, self.w0, self.shifts(u1, u2))):
            val = self.q[s] * (prof(w + dw) - self.a_w0[s, 0] - self.a_w0[s, 1] * dw)
            r1 = r1 + val * self.bvec[s, 0]
            r2 = r2 + val * self.bvec[s, 1]
        return r1, r2

    def jacobian(self, u1, u2):
        """Pointwise 2x2 blocks (j11, j12, j21, j22) of r'(u)."""
        out = [np.zeros_like(np.asarray(u1, dtype=float)) for _ in range(4)]
        for s, (prof, w, dw) in enumerate(zip(self.profiles, self.w0, self.shifts(u1, u2))):
            d1 = self.q[s] * (prof.derivative(w + dw, 1) - self.a_w0[s, 1])
            for r in range(2):
                for c in range(2):
                    out[2 * r + c] = out[2 * r + c] + d1 * self.bvec[s, r] * self.g[s, c]
        return tuple(out)

    def taylor(self, u1, u2, order):
        """Homogeneous degree-``order`` part of r (order >= 2)."""
        r1 = np.zeros_like(np.asarray(u1, dtype=float))
        r2 = np.zeros_like(r1)
        for s, (prof, w, dw) in enumerate(zip(self.profiles, self.w0, self.shifts(u1, u2))):
            coef = self.q[s] / factorial(order) * _deriv(prof, w, order)
            val = coef * dw**order
            r1 = r1 + val * self.bvec[s, 0]
            r2 = r2 + val * self.bvec[s, 1]
        return r1, r2

    def taylor_jacobian(self, u1, u2, order):
        out = [np.zeros_like(np.asarray(u1, dtype=float)) for _ in range(4)]
        for s, (prof, w, dw) in enumerate(zip(self.profiles, self.w0, self.shifts(u1, u2))):
            d1 = self.q[s] / factorial(order - 1) * _deriv(prof, w, order) * dw ** (order - 1)
            for r in range(2):
                for c in range(2):
                    out[2 * r + c] = out[2 * r + c] + d1 * self.bvec[s, r] * self.g[s, c]
        return tuple(out)

    def lowest_order(self, tol=1e-14, limit=3):
        """Smallest i >= 2 with a nonzero Taylor coefficient among the species."""
        return min(prof.lowest_nonlinear_order(w, tol=tol, limit=limit)
                   for prof, w in zip(self.profiles, self.w0))


def _deriv(prof, w, k):
    return float(prof.derivative(w, k))


def simpson(func, lo, hi, panels=64):
    """Composite Simpson rule on [lo, hi]; ``lo`` and ``hi`` may be arrays of equal shape."""
    if panels % 2:
        raise ValueError("Simpson needs an even number of panels")
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    t = np.linspace(0.0, 1.0, panels + 1)
    w = np.ones(panels + 1)
    w[1:-1:2] = 4
    w[2:-1:2] = 2
    span = hi - lo
    total = np.zeros(np.broadcast(lo, hi).shape)
    for tj, wj in zip(t, w):
        total = total + wj * func(lo + tj * span)
    return total * span / (3 * panels)


def potential_density(nl, phi, psi, panels=64):
    """V(phi, psi) = sum_k (q_k / l_k) int_0^{a l_k phi + b k_k psi} A_k(s) ds, pointwise."""
    phi = np.asarray(phi, dtype=float)
    psi = np.asarray(psi, dtype=float)
    total = np.zeros(np.broadcast(phi, psi).shape)
    for s, prof in enumerate(nl.profiles):
        upper = nl.g[s, 0] * phi + nl.g[s, 1] * psi
        total = total + nl.q[s] / nl.l[s] * simpson(prof, np.zeros_like(upper), upper, panels)
    return total


def potential_gradient(nl, phi, psi):
    """(dV/dphi, dV/dpsi) = (a sum q_k A_k, sum (q_k / l_k) b k_k A_k)."""
    gphi = np.zeros(np.broadcast(np.asarray(phi), np.asarray(psi)).shape)
    gpsi = np.zeros_like(gphi)
    for s, prof in enumerate(nl.profiles):
        val = prof(nl.g[s, 0] * phi + nl.g[s, 1] * psi)
        gphi = gphi + nl.q[s] / nl.l[s] * nl.g[s, 0] * val
        gpsi = gpsi + nl.q[s] / nl.l[s] * nl.g[s, 1] * val
    return gphi, gpsi


def potential_coefficients(params):
    """(a1, a2) with Delta phi = lambda a1 dV/dphi and Delta psi = lambda a2 dV/dpsi."""
    return params.mu_coeff / params.a, params.nu_coeff * params.d2 / (2 * params.a * params.alpha)


def potential_V(nl, grid, phi, psi, panels=64):
    """Grid functional sum_nodes w V(phi, psi) and its pointwise gradient fields."""
    dens = potential_density(nl, phi, psi, panels)
    return grid.weight * float(np.sum(dens)), potential_gradient(nl, phi, psi)

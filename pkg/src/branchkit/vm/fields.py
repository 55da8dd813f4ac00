"""Electromagnetic fields, potentials and plasma densities from a solution (phi, psi).

The drift d is taken along z, so the fields depend on (x, y) only. Fields are
returned on the full node set (boundary included), shape (nx + 2, ny + 2).
"""

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import RegularGridInterpolator


def gradient(grid, field):
    """Second-order central differences (one-sided at the edges) of a padded field."""
    return tuple(np.gradient(field, grid.hx, grid.hy, edge_order=2))


@dataclass(frozen=True)
class FieldSet:
    E: np.ndarray          # (3, nx+2, ny+2)
    B: np.ndarray          # (3, nx+2, ny+2)
    U: np.ndarray          # scalar potential
    A: np.ndarray          # (3, nx+2, ny+2) vector potential
    rho: np.ndarray        # charge density
    j: np.ndarray          # (3, nx+2, ny+2) current density
    species_densities: tuple


def _drift_unit(params):
    d = params.drift
    if np.linalg.norm(d[:2]) > 1e-12 * np.linalg.norm(d):
        raise ValueError("field reconstruction assumes the reference drift along z")
    return d


def plasma_densities(nl, phi, psi, lam, beta=None):
    """Species densities lam A_k, charge density and current density on padded fields."""
    params = nl.params
    dens = tuple(lam * a for a in nl.densities(phi - nl.trivial.phi0, psi - nl.trivial.psi0))
    rho = sum(s.q * dk for s, dk in zip(nl.species, dens))
    j = np.zeros((3,) + np.shape(phi))
    for idx, (s, dk) in enumerate(zip(nl.species, dens)):
        bv = params.beta(s) if beta is None else np.asarray(beta[idx], dtype=float)
        for c in range(3):
            j[c] = j[c] + s.q * bv[c] * dk
    return dens, rho, j


def ray_integral(grid, current, d, panels=64):
    """int_0^1 (d x J(t r), r) dt at every node, by Simpson along rays from the origin."""
    xs, ys = grid.full_axes()
    interp = [RegularGridInterpolator((xs, ys), current[c], method="linear") for c in range(3)]
    xx, yy = np.meshgrid(xs, ys, indexing="ij")
    pts = np.stack([xx.ravel(), yy.ravel()], axis=1)

    def integrand(t):
        jt = np.stack([f(pts * t[:, None]) for f in interp], axis=1)
        cross = np.cross(d, jt)
        return cross[:, 0] * pts[:, 0] + cross[:, 1] * pts[:, 1]

    t = np.linspace(0.0, 1.0, panels + 1)
    w = np.ones(panels + 1)
    w[1:-1:2] = 4
    w[2:-1:2] = 2
    total = np.zeros(len(pts))
    for tj, wj in zip(t, w):
        total += wj * integrand(np.full(len(pts), tj))
    return (total / (3 * panels)).reshape(xx.shape)


def reconstruct_fields(grid, phi, psi, nl, lam, beta_const=0.0, beta=None, panels=64):
    """E, B, U, A and plasma densities from padded potentials ``phi``, ``psi``."""
    params = nl.params
    d = _drift_unit(params)
    d2 = params.d2
    q, m, alpha = params.q, params.m, params.alpha
    c = params.c
    phi = np.asarray(phi, dtype=float)
    psi = np.asarray(psi, dtype=float)
    px, py = gradient(grid, phi)
    sx, sy = gradient(grid, psi)
    ef = m / (2 * alpha * q)
    E = np.stack([ef * px, ef * py, np.zeros_like(px)])
    dens, rho, j = plasma_densities(nl, phi, psi, lam, beta)
    current = 4 * np.pi / c * j
    ray = ray_integral(grid, current, d, panels)
    grad_psi = np.stack([sx, sy, np.zeros_like(sx)])
    cross = np.cross(d[:, None, None], grad_psi, axis=0)
    B = (d[:, None, None] / d2) * (beta_const + ray)[None] - (m * c / (q * d2)) * cross
    U = -ef * phi
    xs, ys = grid.full_axes()
    xx, yy = np.meshgrid(xs, ys, indexing="ij")
    r = np.stack([xx, yy, np.zeros_like(xx)])
    a1 = beta_const / (2 * d2) * np.cross(d[:, None, None], r, axis=0)
    A = (m * c / (q * d2)) * psi[None] * d[:, None, None] + a1
    return FieldSet(E, B, U, A, rho, j, dens)


def trivial_fields(grid, nl, lam, beta_const=0.0, beta=None):
    shape = (grid.nx + 2, grid.ny + 2)
    phi = np.full(shape, nl.trivial.phi0)
    psi = np.full(shape, nl.trivial.psi0)
    return reconstruct_fields(grid, phi, psi, nl, lam, beta_const, beta)


def curl_z(grid, vec):
    """z-component of the discrete curl of an in-plane field."""
    _, dyx = np.gradient(vec[0], grid.hx, grid.hy, edge_order=2)
    dxy, _ = np.gradient(vec[1], grid.hx, grid.hy, edge_order=2)
    return dxy - dyx


def divergence(grid, vec):
    dxx, _ = np.gradient(vec[0], grid.hx, grid.hy, edge_order=2)
    _, dyy = np.gradient(vec[1], grid.hx, grid.hy, edge_order=2)
    return dxx + dyy


def truncation_estimate(grid, field, margin=2):
    """Richardson-type estimate max |grad_h f - grad_2h f| over the even nodes.

    For a smooth field this is the leading truncation error of the centred
    gradient (up to a factor 3) and decays like h^2. The outer ``margin``
    rings of coarse nodes are skipped: there the one-sided edge formulas,
    applied to fields that are themselves differences, only decay like h.
    """
    fine = gradient(grid, field)
    coarse_field = field[::2, ::2]
    coarse = np.gradient(coarse_field, 2 * grid.hx, 2 * grid.hy, edge_order=2)
    inner = (slice(margin, coarse_field.shape[0] - margin),
             slice(margin, coarse_field.shape[1] - margin))
    return float(max(np.max(np.abs(f[::2, ::2][inner] - c[inner]))
                     for f, c in zip(fine, coarse)))


def observed_order(coarse_error, fine_error, ratio=2.0):
    return float(np.log(coarse_error / fine_error) / np.log(ratio))


def l2_norm(grid, arr):
    arr = np.asarray(arr, dtype=float)
    return float(np.sqrt(grid.weight * np.sum(arr**2)))


def definition1_witness(grid, fields, fields0):
    """||E - E0|| + ||B - B0|| + ||n - n0|| with the species densities standing in for f."""
    de = l2_norm(grid, fields.E - fields0.E)
    db = l2_norm(grid, fields.B - fields0.B)
    df = sum(l2_norm(grid, a - b) for a, b in zip(fields.species_densities,
                                                 fields0.species_densities))
    return de + db + df, (de, db, df)


def boundary_values(arr):
    """Values of a padded field on the outer ring of nodes."""
    arr = np.asarray(arr)
    return np.concatenate([arr[0, :], arr[-1, :], arr[1:-1, 0], arr[1:-1, -1]])

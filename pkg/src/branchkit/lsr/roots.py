"""Nontrivial roots of the branching equation at fixed eps."""

import numpy as np

from ..deflation import DeflationOperator, deflated_newton
from ..errors import NoConvergence


def solve_beq_branches(bmap, eps, seeds, rtol=1e-10, dedup=1e-6, zero_tol=1e-10,
                       max_iter=40, power=2.0, shift=1.0, radius=None):
    """Deflated Newton on L(xi, eps) = 0 from each seed; returns distinct nonzero roots.

    The zero root is always deflated. Seeds at the origin are ignored. An empty
    list means no nontrivial root converged, which is a valid answer on the
    non-bifurcating side. Iterates leaving the ball of ``radius`` (default ten
    times the largest seed) are abandoned.
    """
    n = bmap.n
    roots = []
    seeds = [np.atleast_1d(np.asarray(s, dtype=float)) for s in seeds]
    seeds = [s for s in seeds if s.shape == (n,) and np.linalg.norm(s) > zero_tol]
    if not seeds:
        return roots
    if radius is None:
        radius = 10 * max(np.linalg.norm(s) for s in seeds)
    cache = {}

    def residual(xi):
        if np.linalg.norm(xi) > radius:
            raise NoConvergence("iterate left the search ball")
        val, sol = _eval(bmap, xi, eps)
        cache.clear()
        cache["state"] = sol
        return val

    def jac(xi):
        if "a" not in cache:
            cache["a"] = bmap.jacobian(xi, eps, x=getattr(cache["state"], "x", None))
        return cache["a"]

    def solve_step(xi, f):
        # a[i, k] = dL_k/dxi_i, so the Jacobian of L is a^T
        return np.linalg.solve(jac(xi).T, -f)

    def converged(xi, f):
        scale = np.linalg.norm(xi)
        if scale <= zero_tol:
            return False
        return np.linalg.norm(f) <= rtol * max(np.linalg.norm(jac(xi), 2) * scale, 1e-300)

    for seed in seeds:
        defl = DeflationOperator(power=power, shift=shift)
        defl.add_solution(np.zeros(n))
        for r in roots:
            defl.add_solution(r)
        try:
            xi = deflated_newton(residual, solve_step, seed, defl, converged, max_iter=max_iter,
                                 max_step=np.linalg.norm(seed))
        except (NoConvergence, np.linalg.LinAlgError):
            continue
        if np.linalg.norm(xi) <= zero_tol:
            continue
        if all(np.linalg.norm(xi - r) > dedup * max(np.linalg.norm(r), 1e-300) for r in roots):
            roots.append(xi)
    return roots


def _eval(bmap, xi, eps):
    return bmap.evaluate_with_state(xi, eps)


def seed_directions(n):
    """Axis directions (+/-) and normalized pairwise diagonals (e_i +/- e_j)."""
    dirs = []
    eye = np.eye(n)
    for i in range(n):
        dirs.append(eye[i])
        dirs.append(-eye[i])
    for i in range(n):
        for j in range(i + 1, n):
            dirs.append((eye[i] + eye[j]) / np.sqrt(2))
            dirs.append((eye[i] - eye[j]) / np.sqrt(2))
    return dirs

"""Independent oracle: roots of the full discretized system by deflated Newton.

No reduction is involved; seeds come from the eigenvectors of the linearization
at the trivial state whose eigenvalues are closest to zero.
"""

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from ..deflation import DeflationOperator, deflated_newton
from ..errors import NoConvergence


def seed_vectors(jac0, count=2, symmetric_form=None):
    """Eigenvectors of the trivial-state Jacobian with the smallest |eigenvalue|.

    ``symmetric_form`` (a matrix M with M jac0 symmetric) lets a symmetric
    solver be used; otherwise a dense nonsymmetric solve is done.
    """
    if symmetric_form is not None:
        a = (symmetric_form @ jac0).toarray() if sp.issparse(jac0) else symmetric_form @ jac0
        vals, vecs = sla.eigh(0.5 * (a + a.T))
    else:
        a = jac0.toarray() if sp.issparse(jac0) else np.asarray(jac0)
        vals, vecs = sla.eig(a)
        vals, vecs = vals.real, vecs.real
    order = np.argsort(np.abs(vals))[:count]
    return [vecs[:, i] / np.max(np.abs(vecs[:, i])) for i in order]


def direct_roots(residual, jacobian, dim, seeds, amplitudes, tol=1e-11, zero_tol=1e-9,
                 radius=np.inf, dedup=1e-7, max_iter=80):
    """Deflated Newton from +/- amplitude * seed combinations; distinct nonzero roots.

    ``residual(x)`` and ``jacobian(x)`` evaluate the full system at fixed lambda.
    Roots with sup-norm above ``radius`` are discarded.
    """
    roots = []

    def converged(x, f):
        return np.max(np.abs(x)) > zero_tol and np.max(np.abs(f)) <= tol

    def step(x, f):
        return spla.spsolve(sp.csc_matrix(jacobian(x)), -f)

    starts = []
    for v in seeds:
        for amp in amplitudes:
            starts.append(amp * v)
            starts.append(-amp * v)
    if len(seeds) > 1:
        for i in range(len(seeds)):
            for j in range(i + 1, len(seeds)):
                for amp in amplitudes:
                    for si in (1, -1):
                        starts.append(amp * (seeds[i] + si * seeds[j]) / 2)
                        starts.append(-amp * (seeds[i] + si * seeds[j]) / 2)
    for x0 in starts:
        defl = DeflationOperator(power=2.0, shift=1.0)
        defl.add_solution(np.zeros(dim))
        for r in roots:
            defl.add_solution(r)
        try:
            x = deflated_newton(residual, step, x0, defl, converged, max_iter=max_iter,
                                max_step=2 * np.max(np.abs(x0)))
        except NoConvergence:
            continue
        if np.max(np.abs(x)) > radius or np.max(np.abs(x)) <= zero_tol:
            continue
        if all(np.max(np.abs(x - r)) > dedup * max(np.max(np.abs(r)), 1e-300) for r in roots):
            roots.append(x)
    return roots


def vm_direct_roots(problem, eps, amplitudes, radius=np.inf, tol=None):
    """Roots of (L0 - lam L1) x - lam r(x) = 0 at lam = lambda0 + eps."""
    lam = problem.lambda0 + eps
    dim = 2 * problem.size
    jac0 = problem.full_jacobian(np.zeros(dim), lam)
    seeds = seed_vectors(jac0, count=problem.n, symmetric_form=problem.M)
    if tol is None:
        tol = 1e-10 * abs(problem.L0).sum(axis=1).max() * max(amplitudes) * 1e-2
    return direct_roots(lambda x: problem.full_residual(x, lam),
                        lambda x: problem.full_jacobian(x, lam), dim, seeds, amplitudes,
                        tol=tol, radius=radius)

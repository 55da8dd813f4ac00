"""Scalar pitchfork oracle Delta u + lam (u + u^3) = 0 with zero Dirichlet data."""

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.optimize import brentq

from ..elliptic import assemble_laplacian
from ..lsr import FredholmSystem


def nearest_eigenvalue(mat, sigma=0.0):
    """Eigenvalue of a symmetric sparse matrix closest to ``sigma``."""
    dim = mat.shape[0]
    if dim <= 400:
        vals = np.linalg.eigvalsh(mat.toarray() if sp.issparse(mat) else mat)
    else:
        vals = spla.eigsh(sp.csc_matrix(mat), k=1, sigma=sigma, which="LM", v0=np.ones(dim),
                          return_eigenvectors=False)
    return float(vals[np.argmin(np.abs(vals - sigma))])


def locate_lambda0(jac0, bracket, xtol=1e-13):
    """Root of the near-zero eigenvalue of the trivial-state Jacobian ``jac0(lam)`` in ``bracket``."""
    f = lambda lam: nearest_eigenvalue(jac0(lam))  # noqa: E731
    return brentq(f, *bracket, xtol=xtol, rtol=4 * np.finfo(float).eps)


class PitchforkModel:
    """F(u, lam) = Delta_h u + lam (u + u^3) on a Dirichlet grid."""

    def __init__(self, grid):
        self.grid = grid
        self.laplacian = assemble_laplacian(grid)
        self.lap = self.laplacian.matrix.tocsr()
        self.eye = sp.identity(grid.size, format="csr")

    @property
    def size(self):
        return self.grid.size

    def residual(self, u, lam):
        return self.lap @ u + lam * (u + u**3)

    def jac_x(self, u, lam):
        return (self.lap + lam * sp.diags(1 + 3 * u**2)).tocsc()

    def jac_lam(self, u, lam):
        return u + u**3

    def trivial_jacobian(self, lam):
        return (self.lap + lam * self.eye).tocsr()

    def locate_lambda0(self, bracket=None):
        if bracket is None:
            # bracket the lowest eigenvalue of the continuous rectangle
            mu = np.pi**2 * (1 / self.grid.lx**2 + 1 / self.grid.ly**2)
            bracket = (0.8 * mu, 1.2 * mu)
        return locate_lambda0(self.trivial_jacobian, bracket)

    def fredholm_system(self, lambda0):
        """B x = R(x, eps) with B = Delta_h + lambda0 I and R = -eps x - (lambda0 + eps) x^3."""
        b = (self.lap + lambda0 * self.eye).tocsr()

        def nonlinearity(x, eps):
            return -eps * x - (lambda0 + eps) * x**3

        def jacobian(x, eps):
            return (-eps * self.eye - 3 * (lambda0 + eps) * sp.diags(x**2)).tocsc()

        return FredholmSystem(b, nonlinearity, jacobian)

    def amplitude(self, u):
        return self.grid.norm(u)

    def full_residual(self, u, lam):
        return self.residual(u, lam)


def pitchfork_analysis(grid, delta=0.05, samples=11, branch=True, steps=20, step_size=None,
                       kernel_tol=1e-4, seed_amplitudes=(0.1, 1.0)):
    """Locate lambda0, reduce, detect, and trace both pitchfork arms."""
    from ..lsr import BranchingMap, compute_kernel, detect_bifurcation_sign
    from .classify import BifurcationReport, detector_path
    from .continuation import Branch, BranchPoint, classify_direction, initial_tangent
    from .continuation import pseudo_arclength

    model = PitchforkModel(grid)
    lam0 = model.locate_lambda0()
    system = model.fredholm_system(lam0)
    kernel = compute_kernel(system, tol=kernel_tol)
    bmap = BranchingMap(system, kernel)
    path = detector_path(delta, samples)
    verdict = detect_bifurcation_sign(bmap.jacobian_at_zero, path)
    report = BifurcationReport(lam0, kernel.n, [verdict], None, [], {}, verdict.fires,
                               "pitchfork", {"mu_first": lam0})
    if not branch or kernel.n != 1:
        return report
    from ..lsr import solve_beq_branches
    w = grid.weight
    step_size = step_size or delta
    for eps in (delta, -delta):
        seeds = [a * s for s in (1.0, -1.0) for a in seed_amplitudes]
        roots = solve_beq_branches(bmap, eps, [np.array([s]) for s in seeds], max_iter=25)
        for xi in roots:
            x0 = bmap.solve(xi, eps).x
            lam = lam0 + eps
            tx, tl = initial_tangent(model.jac_x(x0, lam), model.jac_lam(x0, lam),
                                     x0 / np.sqrt(w * np.dot(x0, x0)), 0.0, w)
            pts = pseudo_arclength(model.residual, model.jac_x, model.jac_lam, x0, lam,
                                   (tx, tl), step_size, steps, tol=1e-10, weight=w)
            sign = float(np.sign(kernel.psi[:, 0] @ x0))
            points = [BranchPoint(float(l), model.amplitude(x), sign * model.amplitude(x),
                                  float(np.max(np.abs(r))) if np.ndim(r) else float(r), x)
                      for x, l, r in pts]
            report.branches.append(Branch(points, lam0, classify_direction(
                [p.lam for p in points], [p.amplitude for p in points], lam0),
                "plus" if sign > 0 else "minus"))
    return report

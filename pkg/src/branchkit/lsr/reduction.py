"""Lyapunov-Schmidt reduction to the branching equation L(xi, eps) = 0.

The bordered form used throughout is

    B~ x = R(x, eps) + sum_s xi_s z_s,        x = sum_s xi_s phi_s + Gamma R(x, eps),

whose small solution x(xi, eps) turns the original equation into the n
equations L_k(xi, eps) = <R(x(xi, eps), eps), psi_k> = 0.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import NeumannDivergence, NoConvergence, SolverFailure
from ..linalg import power_norm_estimate
from .system import BorderedSolver, FredholmSystem, KernelBasis, border


@dataclass(frozen=True)
class ImplicitSolution:
    x: np.ndarray
    U: np.ndarray
    xi: np.ndarray
    eps: float
    iterations: int
    residual: float

    def projections(self, kernel):
        """<U, gamma_s>; these coincide with L_s(xi, eps) and vanish on branch points."""
        return kernel.gamma.T @ self.U


def solve_implicit(bordered, system, xi, eps, x0=None, rtol=1e-10, atol=1e-15,
                   max_iter=40, blowup=1e6):
    """Newton solve of the bordered equation for x = sum xi_s phi_s + U(xi, eps).

    Raises NoConvergence when Newton stalls or runs away, which means (xi, eps)
    is outside the neighbourhood where the reduction is valid.
    """
    kernel = bordered.kernel
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    if xi.shape != (kernel.n,):
        raise ValueError(f"xi must have length {kernel.n}")
    lin = kernel.phi @ xi
    rhs0 = kernel.z @ xi
    if not np.any(xi) and x0 is None:
        # R(0, eps) = 0, so x = 0 solves exactly
        zero = np.zeros(system.dimension)
        return ImplicitSolution(zero, zero.copy(), xi, eps, 0, 0.0)
    x = lin.copy() if x0 is None else np.array(x0, dtype=float)
    scale = max(np.max(np.abs(rhs0), initial=0.0), np.max(np.abs(lin), initial=0.0), 1e-300)
    res = np.inf
    for it in range(1, max_iter + 1):
        f = bordered.apply(x) - system.nonlinearity(x, eps) - rhs0
        res = float(np.max(np.abs(f)))
        if not np.isfinite(res) or res > blowup * scale:
            raise NoConvergence(f"bordered Newton diverged at |xi|={np.linalg.norm(xi):.3e}, eps={eps}")
        if res <= atol:
            break
        try:
            dx = bordered.shifted(system.nonlinearity_jacobian(x, eps)).solve(-f)
        except SolverFailure as exc:
            raise NoConvergence(str(exc)) from exc
        x = x + dx
        if np.max(np.abs(dx)) <= rtol * max(np.max(np.abs(x)), 1e-300):
            f = bordered.apply(x) - system.nonlinearity(x, eps) - rhs0
            res = float(np.max(np.abs(f)))
            break
    else:
        raise NoConvergence(f"bordered Newton hit max_iter={max_iter} (residual {res:.3e})")
    return ImplicitSolution(x, x - lin, xi, eps, it, res)


def eval_beq(bordered, system, xi, eps, return_solution=False, x0=None):
    """Branching-equation coordinates L_k = <R(x(xi, eps), eps), psi_k>."""
    sol = solve_implicit(bordered, system, xi, eps, x0=x0)
    val = bordered.kernel.psi.T @ system.nonlinearity(sol.x, eps)
    return (val, sol) if return_solution else val


def neumann_norm(bordered, k):
    """Power-iteration estimate of ||Gamma K||_2."""
    dim = bordered.linear_part.shape[0]
    return power_norm_estimate(
        lambda v: bordered.solve(k @ v),
        lambda w: k.T @ bordered.solve(w, trans=True),
        dim,
    )


def _jacobian_at(bordered, system, x, eps):
    """Matrix a[i, k] = dL_k/dxi_i = <R_x (I - Gamma R_x)^{-1} phi_i, psi_k> at state x."""
    kernel = bordered.kernel
    if kernel.n == 0:
        return np.zeros((0, 0))
    k = system.nonlinearity_jacobian(x, eps)
    # (I - Gamma K)^{-1} phi = (B~ - K)^{-1} B~ phi
    rhs = np.column_stack([bordered.apply(kernel.phi[:, i]) for i in range(kernel.n)])
    y = bordered.shifted(k).solve(rhs)
    return (kernel.psi.T @ (k @ y)).T


def beq_jacobian0(bordered, system, eps, safety=0.9, check_norm=True):
    """a_ik(eps) = dL_k/dxi_i at xi = 0 (row i, column k).

    The Neumann-series condition ||Gamma R_x(0, eps)|| < 1 is checked with a
    power-iteration estimate that must stay below ``safety``.
    """
    zero = np.zeros(system.dimension)
    if check_norm:
        k = system.nonlinearity_jacobian(zero, eps)
        est = neumann_norm(bordered, k)
        if est >= safety:
            raise NeumannDivergence(f"||Gamma R_x(0,{eps})|| ~ {est:.3f} >= {safety}")
    return _jacobian_at(bordered, system, zero, eps)


class BranchingMap:
    """The reduced map L(xi, eps) of a Fredholm system with a given kernel basis."""

    def __init__(self, system, kernel, truncation_order=None, check_norm=True):
        self.system = system
        self.kernel = kernel
        self.bordered = border(system, kernel)
        self.truncation_order = truncation_order
        self.check_norm = check_norm

    @property
    def n(self):
        return self.kernel.n

    def evaluate(self, xi, eps, x0=None):
        return eval_beq(self.bordered, self.system, xi, eps, x0=x0)

    def evaluate_with_state(self, xi, eps, x0=None):
        """(L(xi, eps), implicit solution) in one solve."""
        return eval_beq(self.bordered, self.system, xi, eps, return_solution=True, x0=x0)

    def solve(self, xi, eps, x0=None):
        return solve_implicit(self.bordered, self.system, xi, eps, x0=x0)

    def jacobian_at_zero(self, eps):
        return beq_jacobian0(self.bordered, self.system, eps, check_norm=self.check_norm)

    def jacobian(self, xi, eps, x=None):
        """a[i, k] = dL_k/dxi_i at a general xi (uses the implicit solution)."""
        if x is None:
            x = self.solve(xi, eps).x
        return _jacobian_at(self.bordered, self.system, x, eps)

    def xi_matrices(self, x, eps, m_max=3):
        """The matrices [<R_x (Gamma R_x)^m phi_i, psi_k>] for m = 0..m_max (row i, column k)."""
        k = self.system.nonlinearity_jacobian(x, eps)
        v = self.kernel.phi.copy()
        mats = []
        for _ in range(m_max + 1):
            kv = k @ v
            mats.append((self.kernel.psi.T @ kv).T)
            v = self.bordered.solve(kv)
        return mats


def reduce(system, kernel, **kw):
    return BranchingMap(system, kernel, **kw)


def relative_asymmetry(a):
    a = np.asarray(a, dtype=float)
    scale = np.linalg.norm(a)
    if scale <= 1e-300 * max(a.size, 1):
        return 0.0
    return float(np.linalg.norm(a - a.T) / scale)


@dataclass(frozen=True)
class PotentialityReport:
    is_potential_evidence: bool
    max_asymmetry: float
    xi_asymmetry: float
    jacobian_asymmetry: float
    samples: int


def potentiality_check(bmap, samples, xi_samples=(), m_max=3, tol=1e-6):
    """Symmetry diagnostics behind the potentiality of the branching equation.

    ``samples`` is an iterable of (x, eps) states near (0, 0); ``xi_samples`` an
    iterable of (xi, eps) at which the full BEq Jacobian is checked as well.
    """
    if bmap.n <= 1:
        return PotentialityReport(True, 0.0, 0.0, 0.0, 0)
    worst_xi = 0.0
    count = 0
    for x, eps in samples:
        for mat in bmap.xi_matrices(np.asarray(x, dtype=float), eps, m_max=m_max):
            worst_xi = max(worst_xi, relative_asymmetry(mat))
        count += 1
    worst_jac = 0.0
    for xi, eps in xi_samples:
        worst_jac = max(worst_jac, relative_asymmetry(bmap.jacobian(xi, eps)))
        count += 1
    worst = max(worst_xi, worst_jac)
    return PotentialityReport(worst < tol, worst, worst_xi, worst_jac, count)


__all__ = [
    "BorderedSolver", "BranchingMap", "FredholmSystem", "ImplicitSolution", "KernelBasis",
    "PotentialityReport", "beq_jacobian0", "eval_beq", "neumann_norm", "potentiality_check",
    "reduce", "relative_asymmetry", "solve_implicit",
]

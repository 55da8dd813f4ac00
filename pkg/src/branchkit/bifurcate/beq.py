"""Branching equation specialized to the symmetrized VM system.

With B~ = B + sum <., gamma_i> gamma_i, gamma_i = B1 e_i and Gamma gamma_i = e_i,
the small solutions satisfy

    u = xi.e / (1 - eps) + v,   (B~ - eps B1) v = (lambda0 + eps) Mr(u),

and the branching equation is

    L^i = eps / (1 - eps) xi_i + (lambda0 + eps) / (1 - eps) <Mr(u), e_i>.

This path solves for the correction v and evaluates L through the displayed
formula, independently of the generic reduction.
"""

from functools import lru_cache

import numpy as np

from ..errors import NoConvergence, SolverFailure
from ..linalg import BorderedFactor
from ..lsr import BranchingMap, ImplicitSolution


class VMBranchingMap:
    def __init__(self, problem, truncation_order=None, check_norm=True):
        self.problem = problem
        self.kernel = problem.kernel
        self.system = problem.fredholm_system()
        self.generic = BranchingMap(self.system, self.kernel, check_norm=check_norm)
        self.order = problem.nl.lowest_order() if truncation_order is None else truncation_order
        self.truncation_order = self.order + 1
        self._shifted = lru_cache(maxsize=16)(self._factor_shifted)

    @property
    def n(self):
        return self.kernel.n

    @property
    def lambda0(self):
        return self.problem.lambda0

    def _mr(self, x):
        return self.problem.M @ self.problem.r(x)

    def _mr_jac(self, x):
        return self.problem.M @ self.problem.r_jacobian(x)

    def _factor_shifted(self, eps):
        """Factorization of B~ - eps B1."""
        a = (self.problem.B - eps * self.problem.B1).tocsc()
        return BorderedFactor(a, self.kernel.z, self.kernel.gamma)

    def _inner_e(self, vec):
        """Discrete L2 products <vec, e_i>."""
        return self.kernel.psi.T @ vec

    def leading(self, xi, eps):
        return eps / (1 - eps) * np.asarray(xi, dtype=float)

    def solve(self, xi, eps, x0=None, rtol=1e-10, atol=1e-15, max_iter=40):
        """Newton on (B~ - eps B1) v - (lambda0 + eps) Mr(u1 + v) = 0."""
        xi = np.atleast_1d(np.asarray(xi, dtype=float))
        lam = self.lambda0 + eps
        u1 = self.kernel.phi @ xi / (1 - eps)
        if not np.any(xi) and x0 is None:
            zero = np.zeros_like(u1)
            return ImplicitSolution(zero, zero.copy(), xi, eps, 0, 0.0)
        a_shift = (self.problem.B - eps * self.problem.B1).tocsc()
        v = np.zeros_like(u1) if x0 is None else np.asarray(x0, dtype=float) - u1
        scale = max(np.max(np.abs(u1)), 1e-300)
        res = np.inf
        for it in range(1, max_iter + 1):
            u = u1 + v
            f = a_shift @ v + self.kernel.z @ (self.kernel.gamma.T @ v) - lam * self._mr(u)
            res = float(np.max(np.abs(f)))
            if not np.isfinite(res) or res > 1e6 * scale * max(1.0, abs(lam)):
                raise NoConvergence(f"VM bordered Newton diverged at |xi|={np.linalg.norm(xi):.3e}")
            if res <= atol:
                break
            jac = (a_shift - lam * self._mr_jac(u)).tocsc()
            try:
                dv = BorderedFactor(jac, self.kernel.z, self.kernel.gamma).solve(-f)
            except SolverFailure as exc:
                raise NoConvergence(str(exc)) from exc
            v = v + dv
            if np.max(np.abs(dv)) <= rtol * max(np.max(np.abs(u1 + v)), 1e-300):
                u = u1 + v
                f = a_shift @ v + self.kernel.z @ (self.kernel.gamma.T @ v) - lam * self._mr(u)
                res = float(np.max(np.abs(f)))
                break
        else:
            raise NoConvergence(f"VM bordered Newton hit max_iter={max_iter}")
        x = u1 + v
        return ImplicitSolution(x, x - self.kernel.phi @ xi, xi, eps, it, res)

    def evaluate_with_state(self, xi, eps, x0=None):
        sol = self.solve(xi, eps, x0=x0)
        val = self.leading(xi, eps) + (self.lambda0 + eps) / (1 - eps) * self._inner_e(
            self._mr(sol.x))
        return val, sol

    def evaluate(self, xi, eps, x0=None):
        return self.evaluate_with_state(xi, eps, x0=x0)[0]

    def jacobian(self, xi, eps, x=None):
        """a[i, k] = dL^k / dxi_i."""
        if x is None:
            x = self.solve(xi, eps).x
        lam = self.lambda0 + eps
        k = lam * self._mr_jac(x)
        a_shift = (self.problem.B - eps * self.problem.B1).tocsc()
        y = BorderedFactor((a_shift - k).tocsc(), self.kernel.z, self.kernel.gamma).solve(
            self.kernel.z)
        corr = self._inner_e(k @ y) / (1 - eps)
        return eps / (1 - eps) * np.eye(self.n) + corr.T

    def jacobian_at_zero(self, eps):
        return self.jacobian(np.zeros(self.n), eps, x=np.zeros(self.problem.size * 2))

    def neumann_norm(self, eps):
        from ..lsr import neumann_norm
        zero = np.zeros(self.system.dimension)
        return neumann_norm(self.generic.bordered, self.system.nonlinearity_jacobian(zero, eps))

    # --- truncated form -----------------------------------------------------

    def truncated(self, xi, eps):
        """Orders l and l + 1 of the branching equation, plus the l = 2 correction.

        For l = 2 the correction is
        (lambda0 + eps)^2 / (1 - eps)^4 <Mr_2'(xi.e) (B~ - eps B1)^{-1} Mr_2(xi.e), e_i>.
        """
        xi = np.atleast_1d(np.asarray(xi, dtype=float))
        l = self.order
        lam = self.lambda0 + eps
        xe = self.kernel.phi @ xi
        m = self.problem.M
        out = self.leading(xi, eps)
        r_l = self._inner_e(m @ self.problem.taylor(xe, l))
        r_l1 = self._inner_e(m @ self.problem.taylor(xe, l + 1))
        out = out + lam / (1 - eps) ** (l + 1) * (r_l + r_l1 / (1 - eps))
        if l == 2:
            rhs = m @ self.problem.taylor(xe, 2)
            w = self._shifted(float(eps)).solve(rhs)
            jac2 = m @ self.problem.taylor_jacobian(xe, 2)
            out = out + lam**2 / (1 - eps) ** 4 * self._inner_e(jac2 @ w)
        return out

    def scalar_coefficients(self, eps):
        """For n = 1: coefficients c[k] of xi^k in the truncated form (k = 0..l+1)."""
        if self.n != 1:
            raise ValueError("scalar coefficients need a one-dimensional kernel")
        deg = self.order + 1
        xs = np.linspace(-1.0, 1.0, deg + 3)
        vals = np.array([self.truncated([x], eps)[0] for x in xs])
        coef = np.polynomial.polynomial.polyfit(xs, vals, deg)
        coef[0] = 0.0
        coef[1] = eps / (1 - eps)
        return coef


def build_beq_vm(problem, eps=None, truncation_order=None, check_norm=True):
    """VM-specialized branching map; ``eps`` (if given) is validated against the Neumann bound."""
    bmap = VMBranchingMap(problem, truncation_order=truncation_order, check_norm=check_norm)
    if eps is not None and check_norm:
        bmap.generic.jacobian_at_zero(eps)
    return bmap


__all__ = ["VMBranchingMap", "build_beq_vm"]

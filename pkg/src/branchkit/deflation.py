"""Deflated Newton iteration for finding several roots of one nonlinear system.

Known roots r_j are removed by the multiplicative operator
m(u) = prod_j (||u - r_j||^-p + shift); Newton on m(u) F(u) keeps the
undeflated direction and only rescales the step.
"""

import numpy as np

from .errors import NoConvergence, SolverFailure


class DeflationOperator:
    def __init__(self, power=2.0, shift=1.0, norm=None):
        self.power = power
        self.shift = shift
        self.solutions = []
        self._norm2 = norm or (lambda v: float(np.dot(v, v)))

    def add_solution(self, u):
        self.solutions.append(np.array(u, dtype=float))

    def log_gradient(self, u):
        """Return (m(u), grad m(u) / m(u))."""
        m = 1.0
        g = np.zeros_like(u)
        for r in self.solutions:
            d = u - r
            d2 = self._norm2(d)
            if d2 == 0.0:
                return np.inf, g
            f = d2 ** (-self.power / 2) + self.shift
            m *= f
            g += -self.power * d2 ** (-self.power / 2 - 1) * d / f
        return m, g


def deflated_newton(residual, solve_step, u0, deflation, tol, max_iter=60, step_tol=1e-13,
                    max_step=None):
    """Newton iteration on m(u) F(u) = 0.

    ``solve_step(u, f)`` returns the undeflated Newton update d with F'(u) d = -f.
    ``tol(u, f)`` decides convergence of the undeflated residual.
    """
    u = np.array(u0, dtype=float)
    for _ in range(max_iter):
        f = residual(u)
        if not np.all(np.isfinite(f)):
            raise NoConvergence("non-finite residual")
        if tol(u, f):
            return u
        try:
            d = solve_step(u, f)
        except (SolverFailure, NoConvergence) as exc:
            raise NoConvergence(str(exc)) from exc
        m, g = deflation.log_gradient(u)
        if not np.isfinite(m):
            raise NoConvergence("iterate landed on a deflated root")
        denom = 1.0 - float(np.dot(g, d))
        tau = 1.0 / denom if abs(denom) > 1e-12 else 1.0
        step = tau * d
        if max_step is not None:
            size = np.max(np.abs(step))
            if size > max_step:
                step *= max_step / size
        u = u + step
        if np.max(np.abs(step)) <= step_tol * max(np.max(np.abs(u)), 1e-300):
            f = residual(u)
            if tol(u, f):
                return u
    raise NoConvergence("deflated Newton hit max_iter")

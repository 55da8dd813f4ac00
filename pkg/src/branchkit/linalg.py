"""Small helpers that let the solvers treat dense and sparse matrices alike."""

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import SingularBordered, SolverFailure


def is_sparse(a):
    return sp.issparse(a)


def to_dense(a):
    return a.toarray() if sp.issparse(a) else np.asarray(a, dtype=float)


def add(a, b):
    """Sum of two matrices that may be dense or sparse (result sparse if both are)."""
    if sp.issparse(a) and sp.issparse(b):
        return (a + b).tocsc()
    return to_dense(a) + to_dense(b)


def matmul(a, x):
    return a @ x


class Factorized:
    """LU factorization of a square matrix with plain and transposed solves."""

    def __init__(self, a, error=SolverFailure):
        self.shape = a.shape
        self.sparse = sp.issparse(a)
        try:
            if self.sparse:
                self._lu = spla.splu(sp.csc_matrix(a))
            else:
                a = np.asarray(a, dtype=float)
                with np.errstate(all="raise"):
                    self._lu = sla.lu_factor(a, check_finite=True)
                if np.min(np.abs(np.diag(self._lu[0]))) == 0.0:
                    raise np.linalg.LinAlgError("exactly singular")
        except (RuntimeError, np.linalg.LinAlgError, ValueError, FloatingPointError) as exc:
            raise error(f"factorization failed: {exc}") from exc
        except sla.LinAlgWarning as exc:  # pragma: no cover
            raise error(str(exc)) from exc

    def solve(self, b, trans=False):
        b = np.asarray(b, dtype=float)
        if self.sparse:
            x = self._lu.solve(b, trans="T" if trans else "N")
        else:
            x = sla.lu_solve(self._lu, b, trans=1 if trans else 0)
        if not np.all(np.isfinite(x)):
            raise SolverFailure("non-finite solution from LU solve")
        return x


def augmented(a, z, gamma, sparse=None):
    """Assemble the bordered block matrix [[A, Z], [gamma^T, -I]].

    Solving it with right-hand side (b, 0) yields x with (A + Z gamma^T) x = b,
    without ever forming the rank-n update densely.
    """
    n = z.shape[1]
    if sparse is None:
        sparse = sp.issparse(a)
    if sparse:
        return sp.bmat(
            [[sp.csc_matrix(a), sp.csc_matrix(z)],
             [sp.csc_matrix(gamma.T), -sp.identity(n, format="csc")]],
            format="csc",
        )
    a = to_dense(a)
    top = np.hstack([a, z])
    bottom = np.hstack([gamma.T, -np.eye(n)])
    return np.vstack([top, bottom])


class BorderedFactor:
    """Solver for (A + Z gamma^T) x = b through the augmented block system."""

    def __init__(self, a, z, gamma):
        self.dim = a.shape[0]
        self.n = z.shape[1]
        if self.n == 0:
            self._lu = Factorized(a, error=SingularBordered)
        else:
            self._lu = Factorized(augmented(a, z, gamma), error=SingularBordered)

    def solve(self, b, trans=False):
        b = np.asarray(b, dtype=float)
        if self.n == 0:
            return self._lu.solve(b, trans=trans)
        pad = np.zeros((self.n,) + b.shape[1:])
        x = self._lu.solve(np.concatenate([b, pad]), trans=trans)
        return x[: self.dim]


def power_norm_estimate(apply, apply_t, dim, iters=60, rtol=1e-6, seed=0):
    """Estimate the spectral norm of a linear map by power iteration on A^T A."""
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(dim)
    v /= np.linalg.norm(v)
    est = 0.0
    for _ in range(iters):
        w = apply(v)
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        v = apply_t(w)
        nv = np.linalg.norm(v)
        new = np.sqrt(nv)
        v /= nv
        if abs(new - est) <= rtol * new:
            est = new
            break
        est = new
    return float(est)

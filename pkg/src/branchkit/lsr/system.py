"""Discretized Fredholm systems ``B x = R(x, eps)``, their kernels and bordering."""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from ..errors import AmbiguousKernel, SingularBordered
from ..linalg import BorderedFactor, to_dense

# dense SVD is used below this size; sparse symmetric matrices above it go to ARPACK
DENSE_LIMIT = 2500


@dataclass(frozen=True)
class FredholmSystem:
    """Operator equation ``B x = R(x, eps)`` after discretization.

    ``nonlinearity(x, eps)`` returns the residual vector R and
    ``nonlinearity_jacobian(x, eps)`` the matrix R_x (dense or sparse).
    R(0, eps) = 0 and R_x(0, 0) = 0 are expected; see :meth:`check`.
    """

    linear_part: object
    nonlinearity: Callable
    nonlinearity_jacobian: Callable
    parameter_dim: int = 1

    @property
    def dimension(self):
        return self.linear_part.shape[0]

    def residual(self, x, eps):
        return self.linear_part @ x - self.nonlinearity(x, eps)

    def check(self, eps_samples=(-0.05, 0.0, 0.05), tol=1e-10):
        """Return the worst violation of R(0, eps) = 0 and of R_x(0, 0) = 0."""
        zero = np.zeros(self.dimension)
        worst_r = max(np.max(np.abs(self.nonlinearity(zero, e)), initial=0.0) for e in eps_samples)
        rx = to_dense(self.nonlinearity_jacobian(zero, 0.0)) if self.dimension <= DENSE_LIMIT else None
        worst_rx = 0.0 if rx is None else float(np.max(np.abs(rx), initial=0.0))
        return {"R(0,eps)": worst_r, "R_x(0,0)": worst_rx,
                "ok": worst_r <= tol and worst_rx <= tol}


@dataclass(frozen=True)
class KernelBasis:
    """Kernel/cokernel bases with biorthogonal systems, stored column-wise.

    ``phi`` spans N(B), ``psi`` spans N(B^T); ``gamma`` and ``z`` satisfy
    ``phi^T gamma = I`` and ``z^T psi = I`` (Euclidean pairing). Inner products
    with other weights are absorbed into the stored vectors.
    """

    phi: np.ndarray
    psi: np.ndarray
    gamma: np.ndarray
    z: np.ndarray
    singular_values: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @property
    def n(self):
        return self.phi.shape[1]

    def biorthogonality_error(self):
        n = self.n
        if n == 0:
            return 0.0
        e1 = np.max(np.abs(self.phi.T @ self.gamma - np.eye(n)))
        e2 = np.max(np.abs(self.z.T @ self.psi - np.eye(n)))
        return float(max(e1, e2))

    def kernel_residual(self, b):
        if self.n == 0:
            return 0.0
        r1 = np.max(np.abs(b @ self.phi))
        r2 = np.max(np.abs(b.T @ self.psi))
        return float(max(r1, r2))


def biorthogonalize(basis, candidates):
    """Gram-correct ``candidates`` so that ``basis^T result = I``."""
    g = basis.T @ candidates
    return candidates @ np.linalg.inv(g).T


def _empty(dim):
    e = np.zeros((dim, 0))
    return KernelBasis(e, e.copy(), e.copy(), e.copy())


def _smallest_singular(b, tol, gap_ratio):
    """Return (values, right vectors, left vectors) for singular values up to gap_ratio*tol."""
    dim = b.shape[0]
    symmetric = sp.issparse(b) and abs(b - b.T).max() == 0.0
    if dim <= DENSE_LIMIT or not symmetric:
        u, s, vt = sla.svd(to_dense(b))
        order = np.argsort(s)
        return s[order], vt[order].T, u[:, order]
    # symmetric sparse: |eigenvalues| are the singular values
    sigma = -0.731 * tol
    k = min(8, dim - 2)
    while True:
        vals, vecs = spla.eigsh(b.tocsc(), k=k, sigma=sigma, which="LM",
                                v0=np.ones(dim))
        s = np.abs(vals)
        order = np.argsort(s)
        s, vecs = s[order], vecs[:, order]
        if s[-1] > gap_ratio * tol or k >= dim - 2:
            break
        k = min(2 * k, dim - 2)
    return s, vecs, vecs * np.sign(vals[order])


def compute_kernel(system, tol=1e-8, gap_ratio=10.0):
    """Numerical kernel of the linear part with a singular-value gap test.

    Singular values below ``tol`` count as kernel; any value inside
    ``(tol / gap_ratio, tol * gap_ratio)`` makes the dimension undecidable.
    """
    b = system.linear_part if isinstance(system, FredholmSystem) else system
    dim = b.shape[0]
    s, right, left = _smallest_singular(b, tol, gap_ratio)
    near = (s > tol / gap_ratio) & (s < tol * gap_ratio)
    if np.any(near):
        raise AmbiguousKernel(
            f"singular value {s[near][0]:.3e} within a factor {gap_ratio:g} of tol={tol:.3e}")
    n = int(np.sum(s <= tol))
    if n == 0:
        out = _empty(dim)
        return KernelBasis(out.phi, out.psi, out.gamma, out.z, singular_values=s)
    phi = right[:, :n]
    psi = left[:, :n]
    phi = _canonical_signs(np.linalg.qr(phi)[0])
    psi = _canonical_signs(np.linalg.qr(psi)[0])
    gamma = biorthogonalize(phi, phi.copy())
    z = biorthogonalize(psi, psi.copy())
    return KernelBasis(phi, psi, gamma, z, singular_values=s[:n])


def _canonical_signs(q):
    """Flip columns so that the entry of largest modulus is positive."""
    idx = np.argmax(np.abs(q), axis=0)
    signs = np.sign(q[idx, np.arange(q.shape[1])])
    signs[signs == 0] = 1.0
    return q * signs


@dataclass(frozen=True)
class BorderedSolver:
    """The invertible operator ``B + sum_s <., gamma_s> z_s`` and its inverse Gamma."""

    linear_part: object
    kernel: KernelBasis

    @cached_property
    def _factor(self):
        return BorderedFactor(self.linear_part, self.kernel.z, self.kernel.gamma)

    @property
    def bordered_matrix(self):
        """Dense B-tilde; only sensible for small systems."""
        return to_dense(self.linear_part) + self.kernel.z @ self.kernel.gamma.T

    def apply(self, x):
        return self.linear_part @ x + self.kernel.z @ (self.kernel.gamma.T @ x)

    def solve(self, b, trans=False):
        """Apply Gamma (or Gamma^T) to ``b``."""
        return self._factor.solve(b, trans=trans)

    @cached_property
    def gamma_images(self):
        return self.solve(self.kernel.gamma)

    def shifted(self, k):
        """Factorization of ``B-tilde - K`` for a perturbation matrix K."""
        a = self.linear_part - k if (sp.issparse(self.linear_part) and sp.issparse(k)) \
            else to_dense(self.linear_part) - to_dense(k)
        return BorderedFactor(a, self.kernel.z, self.kernel.gamma)

    def condition_number(self):
        return float(np.linalg.cond(self.bordered_matrix))


def border(system, kernel):
    """Build the bordered solver; raises SingularBordered when it cannot be factorized."""
    b = system.linear_part if isinstance(system, FredholmSystem) else system
    if kernel.n and kernel.biorthogonality_error() > 1e-8:
        raise SingularBordered("kernel systems are not biorthogonal")
    solver = BorderedSolver(b, kernel)
    solver._factor  # noqa: B018 - factorize eagerly so failures surface here
    return solver

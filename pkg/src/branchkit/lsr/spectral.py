"""Small eigenvalues of B - R_x(0, eps) and block-asymptotic eigenvalue terms."""

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from ..errors import ConditionBViolated, WindowAmbiguity
from ..linalg import add, to_dense

DENSE_LIMIT = 800


def _window_check(vals, window, margin):
    mags = np.abs(vals)
    if np.any((mags > (1 - margin) * window) & (mags < (1 + margin) * window)):
        raise WindowAmbiguity(f"eigenvalue within {margin:.0%} of the window {window:g}")


def small_eigs(a, window, margin=0.1, symmetric=None):
    """All eigenvalues of ``a`` with modulus below ``window``, sorted by modulus."""
    dim = a.shape[0]
    if symmetric is None:
        symmetric = abs(a - a.T).max() <= 1e-13 * max(abs(a).max(), 1.0) if sp.issparse(a) \
            else np.allclose(a, a.T, rtol=0, atol=1e-13 * max(np.abs(a).max(), 1.0))
    if dim <= DENSE_LIMIT or not symmetric:
        d = to_dense(a)
        vals = sla.eigvalsh(0.5 * (d + d.T)) if symmetric else sla.eigvals(d)
        if not symmetric and np.all(np.abs(vals.imag) <= 1e-12 * max(np.abs(vals).max(), 1.0)):
            vals = vals.real
    else:
        # shift-invert around a point just off zero, widening k until the window is covered
        sigma = -0.0137 * window
        k = min(6, dim - 2)
        a = sp.csc_matrix(a)
        while True:
            vals = spla.eigsh(a, k=k, sigma=sigma, which="LM", v0=np.ones(dim),
                              return_eigenvectors=False)
            if np.max(np.abs(vals - sigma)) > abs(sigma) + (1 + margin) * window or k >= dim - 2:
                break
            k = min(2 * k, dim - 2)
    _window_check(vals, window, margin)
    vals = vals[np.abs(vals) < window]
    return vals[np.argsort(np.abs(vals))]


def small_operator_eigs(system, eps, count_window, margin=0.1):
    """Small eigenvalues nu_i(eps) of B - R_x(0, eps).

    Meant for symmetric B without generalized Jordan chains (root number k = n);
    for other operators the values are diagnostics only.
    """
    zero = np.zeros(system.dimension)
    k = system.nonlinearity_jacobian(zero, eps)
    op = add(system.linear_part, -k)
    return small_eigs(op, count_window, margin=margin)


@dataclass(frozen=True)
class BlockAsymptotics:
    exponents: np.ndarray
    coefficients: list
    det_exponent: float
    det_coefficient: float
    triangle: str

    def principal_eigenvalues(self, eps):
        """Leading terms eps^r_i * C_i for every block, concatenated."""
        return np.concatenate([eps ** r * np.asarray(c) for r, c in
                               zip(self.exponents, self.coefficients)])

    def det_leading(self, eps):
        return eps ** self.det_exponent * self.det_coefficient


def block_asymptotic_eigs(blocks, exponents):
    """Principal terms of the eigenvalues of a(eps) ~ [eps^r_ik A0_ik].

    ``blocks`` is an l x l nested list of arrays; ``exponents`` an l x l array
    (``inf`` for identically zero blocks). Raises ConditionBViolated naming the
    failing structural requirement.
    """
    r = np.asarray(exponents, dtype=float)
    nb = r.shape[0]
    if r.shape != (nb, nb) or len(blocks) != nb:
        raise ValueError("blocks and exponents must both be l x l")
    diag = np.diag(r)
    for i in range(nb):
        if np.min(r[i]) < diag[i]:
            raise ConditionBViolated(f"row {i}: minimum exponent is not attained on the diagonal")
    upper = all(r[i, k] > diag[i] for i in range(nb) for k in range(i + 1, nb))
    lower = all(r[i, k] > diag[i] for i in range(nb) for k in range(i))
    if not (upper or lower):
        raise ConditionBViolated("off-diagonal exponents are not strictly larger on either triangle")
    dets = []
    coeffs = []
    sizes = []
    for i in range(nb):
        a0 = np.atleast_2d(np.asarray(blocks[i][i], dtype=float))
        if a0.shape[0] != a0.shape[1]:
            raise ConditionBViolated(f"diagonal block {i} is not square")
        dets.append(np.linalg.det(a0))
        w = np.linalg.eigvals(a0)
        coeffs.append(np.real_if_close(w[np.argsort(-np.abs(w))]))
        sizes.append(a0.shape[0])
    if np.prod(dets) == 0:
        raise ConditionBViolated("product of det A0_ii vanishes")
    return BlockAsymptotics(diag, coeffs, float(np.dot(sizes, diag)), float(np.prod(dets)),
                            "upper" if upper else "lower")


def assemble_block_matrix(blocks, exponents, eps):
    """Dense a(eps) = [eps^r_ik A0_ik] (zero blocks where the exponent is inf)."""
    r = np.asarray(exponents, dtype=float)
    rows = []
    for i, row in enumerate(blocks):
        parts = []
        for k, blk in enumerate(row):
            blk = np.atleast_2d(np.asarray(blk, dtype=float))
            parts.append(np.zeros_like(blk) if np.isinf(r[i, k]) else eps ** r[i, k] * blk)
        rows.append(np.hstack(parts))
    return np.vstack(rows)

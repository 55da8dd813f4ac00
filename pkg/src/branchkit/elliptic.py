"""Rectangular grids, the five-point Dirichlet Laplacian, Poisson solves and eigenpairs.

Fields live on interior nodes only and are flattened in C order from arrays of
shape ``(nx, ny)`` indexed ``[i, j]`` at ``(x_i, y_j) = ((i+1) hx, (j+1) hy)``.
The discrete L2 inner product carries the cell weight ``hx * hy``.
"""

import csv
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import SolverFailure


@dataclass(frozen=True)
class Grid2D:
    lx: float
    ly: float
    nx: int
    ny: int

    def __post_init__(self):
        if self.nx < 1 or self.ny < 1:
            raise ValueError("grid needs at least one interior node per direction")
        if self.lx <= 0 or self.ly <= 0:
            raise ValueError("side lengths must be positive")

    @property
    def hx(self):
        return self.lx / (self.nx + 1)

    @property
    def hy(self):
        return self.ly / (self.ny + 1)

    @property
    def size(self):
        return self.nx * self.ny

    @property
    def weight(self):
        return self.hx * self.hy

    @property
    def x(self):
        return self.hx * np.arange(1, self.nx + 1)

    @property
    def y(self):
        return self.hy * np.arange(1, self.ny + 1)

    def mesh(self):
        return np.meshgrid(self.x, self.y, indexing="ij")

    def full_axes(self):
        """Node coordinates including the boundary."""
        return (self.hx * np.arange(self.nx + 2), self.hy * np.arange(self.ny + 2))

    def sample(self, func):
        xx, yy = self.mesh()
        return np.asarray(func(xx, yy), dtype=float).ravel()

    def inner(self, u, v):
        return self.weight * float(np.dot(u, v))

    def norm(self, u):
        return np.sqrt(self.inner(u, u))

    def as_array(self, u):
        return np.asarray(u).reshape(self.nx, self.ny)

    def pad(self, u, value=0.0):
        """Interior field -> (nx+2, ny+2) array with constant boundary ``value``."""
        out = np.full((self.nx + 2, self.ny + 2), float(value))
        out[1:-1, 1:-1] = self.as_array(u)
        return out

    def refined(self):
        """Grid with half the spacing (2n + 1 interior nodes)."""
        return Grid2D(self.lx, self.ly, 2 * self.nx + 1, 2 * self.ny + 1)


def _second_difference(n, h):
    e = np.ones(n)
    return sp.diags([e[:-1], -2 * e, e[:-1]], [-1, 0, 1], format="csr") / h**2


@dataclass(frozen=True)
class DirichletLaplacian:
    """Five-point approximation of the Laplacian with zero boundary trace (negative definite)."""

    grid: Grid2D
    matrix: sp.csr_matrix

    @cached_property
    def _lu(self):
        return spla.splu(self.matrix.tocsc())

    def apply(self, u):
        return self.matrix @ u


def assemble_laplacian(grid):
    dxx = _second_difference(grid.nx, grid.hx)
    dyy = _second_difference(grid.ny, grid.hy)
    mat = sp.kron(dxx, sp.identity(grid.ny)) + sp.kron(sp.identity(grid.nx), dyy)
    return DirichletLaplacian(grid, sp.csr_matrix(mat))


def poisson_solve(lap, rhs, rtol=1e-10):
    """Solve Delta_h u = rhs with zero boundary values."""
    rhs = np.asarray(rhs, dtype=float)
    if not np.any(rhs):
        return np.zeros_like(rhs)
    u = lap._lu.solve(rhs)
    res = np.linalg.norm(lap.matrix @ u - rhs)
    if not np.isfinite(res) or res > rtol * np.linalg.norm(rhs):
        raise SolverFailure(f"Poisson residual {res:.3e}")
    return u


@dataclass(frozen=True)
class EigenPair:
    mu: float
    e: np.ndarray
    multiplicity_group: int


def dirichlet_eigenpairs(lap, count, rel_gap=1e-3, tol=1e-9):
    """The ``count`` smallest eigenvalues of -Delta_h with unit discrete-L2 eigenvectors.

    Eigenvalues whose relative spacing is below ``rel_gap`` share a
    multiplicity group; vectors inside a group are orthonormalized.
    """
    grid = lap.grid
    dim = grid.size
    if count < 1:
        raise ValueError("count must be >= 1")
    if count > dim:
        raise ValueError("count exceeds the number of unknowns")
    neg = -lap.matrix
    extra = count + 4
    if dim <= max(400, extra + 2):
        vals, vecs = np.linalg.eigh(neg.toarray())
    else:
        try:
            vals, vecs = spla.eigsh(neg.tocsc(), k=extra, sigma=0.0, which="LM",
                                    v0=np.ones(dim), tol=0.0)
        except spla.ArpackError as exc:
            raise SolverFailure(str(exc)) from exc
    order = np.argsort(vals)
    vals, vecs = vals[order], vecs[:, order]
    groups = np.zeros(len(vals), dtype=int)
    for i in range(1, len(vals)):
        same = abs(vals[i] - vals[i - 1]) <= rel_gap * abs(vals[i])
        groups[i] = groups[i - 1] if same else groups[i - 1] + 1
    vecs = vecs / np.sqrt(grid.weight)
    for g in np.unique(groups):
        idx = np.where(groups == g)[0]
        q, _ = np.linalg.qr(vecs[:, idx] * np.sqrt(grid.weight))
        vecs[:, idx] = q / np.sqrt(grid.weight)
    pairs = []
    for i in range(count):
        e = vecs[:, i]
        k = np.argmax(np.abs(e))
        if e[k] < 0:
            e = -e
        res = np.linalg.norm(neg @ e - vals[i] * e) * np.sqrt(grid.weight)
        if res > max(tol, 1e-7) * vals[i]:
            raise SolverFailure(f"eigenpair {i} residual {res:.3e}")
        pairs.append(EigenPair(float(vals[i]), e, int(groups[i])))
    return pairs


def group_of(pairs, index):
    """All eigenpairs sharing the multiplicity group of ``pairs[index]``."""
    g = pairs[index].multiplicity_group
    return [p for p in pairs if p.multiplicity_group == g]


def eigenvalue_table(pairs):
    return [(i, p.mu, p.multiplicity_group) for i, p in enumerate(pairs)]


def analytic_dirichlet_eigenvalues(lx, ly, count, modes=20):
    """Exact eigenvalues pi^2 (j^2/lx^2 + k^2/ly^2) of the continuous rectangle, ascending."""
    j, k = np.meshgrid(np.arange(1, modes + 1), np.arange(1, modes + 1))
    vals = np.sort((np.pi**2 * (j**2 / lx**2 + k**2 / ly**2)).ravel())
    return vals[:count]


def write_field_csv(path, grid, field):
    """CSV with header ``nx,ny,lx,ly``, one metadata row, then nx rows of ny values."""
    arr = grid.as_array(field)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["nx", "ny", "lx", "ly"])
        w.writerow([grid.nx, grid.ny, f"{grid.lx:.17g}", f"{grid.ly:.17g}"])
        for row in arr:
            w.writerow([f"{v:.17g}" for v in row])


def read_field_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if rows[0] != ["nx", "ny", "lx", "ly"]:
        raise ValueError("not a field CSV")
    nx, ny = int(rows[1][0]), int(rows[1][1])
    grid = Grid2D(float(rows[1][2]), float(rows[1][3]), nx, ny)
    data = np.array([[float(v) for v in r] for r in rows[2:]])
    if data.shape != (nx, ny):
        raise ValueError(f"field shape {data.shape} does not match header ({nx}, {ny})")
    return grid, data.ravel()

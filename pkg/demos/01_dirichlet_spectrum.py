"""
Dirichlet spectrum of the five-point Laplacian
==============================================

The linear part of every problem in branchkit is built from the discrete
Dirichlet Laplacian. Here we compare its lowest eigenvalues with separation of
variables on a square and a rectangle, and watch the 5 pi^2 pair get grouped
into one cluster of multiplicity two.
"""

import numpy as np

from branchkit.elliptic import (Grid2D, analytic_dirichlet_eigenvalues, assemble_laplacian,
                                dirichlet_eigenpairs, group_of)

# unit square, 64 interior nodes per side
lap = assemble_laplacian(Grid2D(1.0, 1.0, 64, 64))
pairs = dirichlet_eigenpairs(lap, 6)
exact = analytic_dirichlet_eigenvalues(1.0, 1.0, 6)
print(" k   discrete      analytic     rel. error  group")
for k, (p, mu) in enumerate(zip(pairs, exact)):
    print(f"{k:2d}  {p.mu:11.6f}  {mu:11.6f}  {abs(p.mu / mu - 1):10.2e}  {p.multiplicity_group}")

# the second eigenvalue belongs to a two-dimensional cluster
cluster = group_of(pairs, 1)
print("\ncluster of index 1 has", len(cluster), "members")

# halving h divides the error of the first eigenvalue by about four
errs = []
for n in (15, 31, 63):
    mu = dirichlet_eigenpairs(assemble_laplacian(Grid2D(1.0, 1.0, n, n)), 1)[0].mu
    errs.append(abs(mu - 2 * np.pi**2))
print("observed orders:", np.round(np.log2(np.array(errs[:-1]) / errs[1:]), 3))

# a 1 x 2 rectangle: first eigenvalue pi^2 (1 + 1/4)
rect = dirichlet_eigenpairs(assemble_laplacian(Grid2D(1.0, 2.0, 31, 63)), 1)[0].mu
print(f"rectangle: {rect:.5f} vs {np.pi**2 * 1.25:.5f}")

"""
Three-species plasma equilibrium
================================

An electron population and two ion populations drifting along z. The script
walks the pipeline one stage at a time: coupling constants, neutral densities,
the linear blocks T, the 2 x 2 operator L1, the candidate lambda0, both
detectors, and finally one branch point with its electromagnetic fields.
"""

import numpy as np

from branchkit.bifurcate import (BifurcationProblem, VMBranchingMap, branch_roots, classify,
                                 reconstruct_solution, witness)
from branchkit.elliptic import Grid2D
from branchkit.vm import (VMParameters, curl_z, divergence, maxwellian_profile,
                          neutral_density_scales, species_set, truncation_estimate)

species = species_set([(-1.0, 1.0, 1.0, (0, 0, 1.0)),
                       (1.0, 1.0, 1.0, (0, 0, 0.5)),
                       (1.0, 1.0, 1.0, (0, 0, 2.0))], ["e", "i-slow", "i-fast"])
for s in species:
    print(f"{s.name:7s} l = {s.l:+.3f}  k = {s.k:+.3f}")

params = VMParameters.from_species(species, eps_rel=0.1)
base = [maxwellian_profile(s) for s in species]
scales = neutral_density_scales(species, base, 0.0, 0.0, params)
profiles = [p.scaled(f) for p, f in zip(base, scales)]
print("density factors for neutrality:", np.round(scales, 6))

problem = BifurcationProblem(Grid2D(1.0, 1.0, 20, 20), species, profiles, params)
T = problem.blocks
print(f"T = ({T.T1:.4f}, {T.T2:.4f}, {T.T3:.4f}, {T.T4:.4f}),  T1T4 - T2T3 = {T.delta:.4f}")
sp = problem.spectrum
print(f"chi+ = {sp.chi_plus:.5f}, chi- = {sp.chi_minus:.6f}, a~ = {problem.symmetrizer.a_tilde:.4f}")
print(f"mu = {problem.mu_dirichlet:.5f}, lambda0 = -mu/chi- = {problem.lambda0:.5f}")
for gate, info in problem.diagnostics.gates.items():
    print(f"  gate {gate:14s} {'ok' if info['ok'] else 'FAILED'}  {info['detail']}")

report = classify(problem)
print("bifurcation:", report.bifurcation, [v.kind for v in report.firing])

bmap = VMBranchingMap(problem)
eps = 0.05
xi = branch_roots(bmap, eps)[0]
x, residual, fields = reconstruct_solution(problem, bmap, xi, eps)
g = problem.grid
print(f"\nbranch point at eps = {eps}: xi = {xi[0]:.6f}, residual {residual:.1e}")
print(f"witness ||E-E0|| + ||B-B0|| + ||n-n0|| = {witness(problem, fields, problem.lambda0 + eps)[0]:.4f}")
tau = max(truncation_estimate(g, c) for c in fields.E[:2])
print(f"max |curl E| = {np.abs(curl_z(g, fields.E)).max():.1e}  (truncation estimate {tau:.1e})")
print(f"max |div B|  = {np.abs(divergence(g, fields.B)).max():.1e}")

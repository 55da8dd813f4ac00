"""
Lyapunov-Schmidt reduction on a four-dimensional toy
====================================================

B = diag(0, 0, 1, 2) has a two-dimensional kernel. With R(x, eps) = eps C x + x^3
the branching equation is two-dimensional, its Jacobian at zero is fixed by the
2 x 2 block of C on the kernel, and its symmetry decides whether the reduced
problem is potential.
"""

import numpy as np

from branchkit.lsr import (BranchingMap, FredholmSystem, PathSpec, compute_kernel,
                           detect_bifurcation_morse, detect_bifurcation_sign, potentiality_check,
                           seed_directions, solve_beq_branches)


def toy(block):
    b = np.diag([0.0, 0.0, 1.0, 2.0])
    c = np.zeros((4, 4))
    c[:2, :2] = block
    c[2:, :2] = 0.3
    return FredholmSystem(b, lambda x, e: e * (c @ x) - x**3,
                          lambda x, e: e * c - np.diag(3 * x**2))


system = toy([[1.0, 0.5], [0.5, 2.0]])
kernel = compute_kernel(system)
bmap = BranchingMap(system, kernel)
print("kernel dimension:", kernel.n)
print("a(0, 0.05) =\n", np.round(bmap.jacobian_at_zero(0.05), 6))

# symmetric block: potential; skewed block: not
for name, block in (("symmetric", [[1.0, 0.5], [0.5, 2.0]]), ("skewed", [[1.0, 2.0], [0.0, 1.0]])):
    s = toy(block)
    rep = potentiality_check(BranchingMap(s, compute_kernel(s)),
                             [(np.zeros(4), e) for e in (-0.05, 0.05)])
    print(f"{name:9s} asymmetry {rep.max_asymmetry:.2e}")

# n = 2 is even, so the determinant sign cannot change; the Morse index can
path = PathSpec.linear(0.0, 0.05, 11)
print("sign detector :", detect_bifurcation_sign(bmap.jacobian_at_zero, path).kind)
morse = detect_bifurcation_morse(bmap.jacobian_at_zero, path)
print("morse detector:", morse.kind, (morse.evidence["nu1"], morse.evidence["nu2"]))

# small solutions at eps = 0.04 from a ring of seeds
seeds = [a * d for d in seed_directions(2) for a in (0.05, 0.2)]
for xi in solve_beq_branches(bmap, 0.04, seeds):
    print("root xi =", np.round(xi, 6), " |L| =", f"{np.abs(bmap.evaluate(xi, 0.04)).max():.1e}")

"""Finite-dimensional Lyapunov-Schmidt reduction engine."""

from .detect import (INCONCLUSIVE, MORSE, SIGN, PathSpec, Verdict, detect_bifurcation_morse,
                     detect_bifurcation_sign)
from .reduction import (BranchingMap, ImplicitSolution, PotentialityReport, beq_jacobian0,
                        eval_beq, neumann_norm, potentiality_check, reduce, relative_asymmetry,
                        solve_implicit)
from .roots import seed_directions, solve_beq_branches
from .spectral import (BlockAsymptotics, assemble_block_matrix, block_asymptotic_eigs,
                       small_eigs, small_operator_eigs)
from .system import (BorderedSolver, FredholmSystem, KernelBasis, biorthogonalize, border,
                     compute_kernel)

__all__ = [
    "INCONCLUSIVE", "MORSE", "SIGN", "BlockAsymptotics", "BorderedSolver", "BranchingMap",
    "FredholmSystem", "ImplicitSolution", "KernelBasis", "PathSpec", "PotentialityReport",
    "Verdict", "assemble_block_matrix", "beq_jacobian0", "biorthogonalize",
    "block_asymptotic_eigs", "border", "compute_kernel", "detect_bifurcation_morse",
    "detect_bifurcation_sign", "eval_beq", "neumann_norm", "potentiality_check", "reduce",
    "relative_asymmetry", "seed_directions", "small_eigs", "small_operator_eigs",
    "solve_beq_branches", "solve_implicit",
]

"""End-to-end bifurcation pipeline for the symmetrized VM system."""

from .beq import VMBranchingMap, build_beq_vm
from .classify import (BifurcationReport, analyze, branch_roots, classify, continue_branch,
                       detector_path, gate_failure_report, reconstruct_solution, run_detectors,
                       trace_vm_branches, witness)
from .continuation import (Branch, BranchPoint, classify_direction, fit_exponent,
                           initial_tangent, pseudo_arclength, trivial_branch)
from .direct import direct_roots, seed_vectors, vm_direct_roots
from .models import PitchforkModel, locate_lambda0, pitchfork_analysis
from .problem import (BifurcationProblem, Diagnostics, Lambda0, build_problem,
                      candidate_lambda0)
from .report import (dumps, read_branch_csv, report_to_dict, write_branch_csv, write_json,
                     write_report)

__all__ = [
    "BifurcationProblem", "BifurcationReport", "Branch", "BranchPoint", "Diagnostics",
    "Lambda0", "PitchforkModel", "VMBranchingMap", "analyze", "branch_roots", "build_beq_vm",
    "build_problem", "candidate_lambda0", "classify", "classify_direction", "continue_branch",
    "detector_path", "direct_roots", "dumps", "fit_exponent", "gate_failure_report", "initial_tangent",
    "locate_lambda0", "pitchfork_analysis", "pseudo_arclength", "read_branch_csv", "reconstruct_solution",
    "report_to_dict", "run_detectors", "seed_vectors", "trace_vm_branches", "trivial_branch",
    "vm_direct_roots", "witness", "write_branch_csv", "write_json", "write_report",
]

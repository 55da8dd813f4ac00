"""Detection, classification and branch tracing for the reduced VM problem."""

from dataclasses import dataclass, field

import numpy as np

from ..errors import GateFailure, NeumannDivergence, NoConvergence, NotPotential, StepFailure
from ..lsr import (INCONCLUSIVE, PathSpec, Verdict, detect_bifurcation_morse,
                   detect_bifurcation_sign, potentiality_check, seed_directions,
                   solve_beq_branches)
from ..vm import definition1_witness, reconstruct_fields, trivial_fields
from .beq import VMBranchingMap
from .continuation import (Branch, BranchPoint, classify_direction, initial_tangent,
                           pseudo_arclength, trivial_branch)


@dataclass
class BifurcationReport:
    lambda0: object
    n: int
    verdicts: list = field(default_factory=list)
    potentiality: object = None
    branches: list = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)
    bifurcation: bool = False
    model: str = "vm"
    extra: dict = field(default_factory=dict)

    @property
    def firing(self):
        return [v for v in self.verdicts if v.fires]


def detector_path(delta=0.05, samples=11):
    if not 0 < delta < 0.5:
        raise ValueError("delta must lie in (0, 0.5)")
    return PathSpec.linear(0.0, delta, samples)


def potentiality_samples(bmap, eps_values, amps=(1e-3, 1e-2)):
    """States x near zero and BEq arguments xi used by the symmetry diagnostics."""
    states, xis = [], []
    for eps in eps_values:
        for amp in amps:
            for direction in seed_directions(bmap.n):
                xi = amp * direction
                try:
                    sol = bmap.solve(xi, eps)
                except NoConvergence:
                    continue
                states.append((sol.x, eps))
                xis.append((xi, eps))
    return states, xis


def run_detectors(bmap, path, potential_family=True, asym_tol=1e-6):
    """Sign detector always; Morse detector when the branching equation is potential."""
    verdicts = [detect_bifurcation_sign(bmap.jacobian_at_zero, path)]
    eps_vals = [e for t, e in path.samples if t != 0][:: max(1, path.resolution // 4)]
    states, xis = potentiality_samples(bmap, eps_vals)
    pot = potentiality_check(bmap.generic, states, xis, tol=asym_tol)
    if pot.is_potential_evidence and potential_family:
        try:
            verdicts.append(detect_bifurcation_morse(bmap.jacobian_at_zero, path, asym_tol))
        except NotPotential as exc:
            verdicts.append(Verdict(INCONCLUSIVE, path.epsilon0, {"error": str(exc)}))
    return verdicts, pot


def classify(problem, delta=0.05, samples=11, bmap=None):
    """Run both detectors on the symmetric path [-delta, delta] around lambda0."""
    path = detector_path(delta, samples)
    bmap = bmap or VMBranchingMap(problem)
    diag = problem.diagnostics.as_dict()
    try:
        bmap.generic.jacobian_at_zero(delta)
        bmap.generic.jacobian_at_zero(-delta)
        diag["neumann"] = {"ok": True, "norm_at_delta": bmap.neumann_norm(delta)}
    except NeumannDivergence as exc:
        diag["neumann"] = {"ok": False, "detail": str(exc)}
    verdicts, pot = run_detectors(bmap, path)
    n = problem.n
    sign_fires = any(v.kind == "bifurcation_by_sign" for v in verdicts)
    morse_fires = any(v.kind == "bifurcation_by_morse_jump" for v in verdicts)
    bif = bool((n % 2 == 1 and sign_fires) or (pot.is_potential_evidence and morse_fires))
    extra = {
        "mu_dirichlet": problem.mu_dirichlet,
        "chi_minus": problem.spectrum.chi_minus,
        "chi_plus": problem.spectrum.chi_plus,
        "a_tilde": problem.symmetrizer.a_tilde,
        "T": [problem.blocks.T1, problem.blocks.T2, problem.blocks.T3, problem.blocks.T4],
        "kernel_residual": problem.kernel_residual(),
        "beq_order": bmap.order,
    }
    return BifurcationReport(problem.lambda0, n, verdicts, pot, [], diag, bif, "vm", extra)


def gate_failure_report(exc, diagnostics=None):
    diag = diagnostics.as_dict() if diagnostics is not None else {}
    diag["failed"] = exc.gate
    diag["message"] = exc.reason
    return BifurcationReport(None, 0, [], None, [], diag, False, "vm")


def branch_roots(bmap, eps, amplitudes=(1e-3, 1e-2, 1e-1, 0.3)):
    seeds = [a * d for d in seed_directions(bmap.n) for a in amplitudes]
    return solve_beq_branches(bmap, eps, seeds)


def reconstruct_solution(problem, bmap, xi, eps):
    """Full state, residual and fields for a root xi of the branching equation."""
    lam = problem.lambda0 + eps
    x = bmap.solve(xi, eps).x if np.any(xi) else np.zeros(2 * problem.size)
    res = float(np.max(np.abs(problem.full_residual(x, lam))))
    phi, psi = problem.padded(x)
    fields = reconstruct_fields(problem.grid, phi, psi, problem.nl, lam, problem.beta_const,
                                problem.beta)
    return x, res, fields


def witness(problem, fields, lam):
    base = trivial_fields(problem.grid, problem.nl, lam, problem.beta_const, problem.beta)
    return definition1_witness(problem.grid, fields, base)


def _signed(problem, x):
    proj = problem.kernel.psi.T @ x
    s = np.sign(proj[np.argmax(np.abs(proj))]) if proj.size else 1.0
    return (s or 1.0) * problem.amplitude(x)


def continue_branch(problem, x0, lam, steps=10, step_size=0.01, tol=1e-9, with_fields=False,
                    label=""):
    """Pseudo-arclength continuation of the full discrete system from (x0, lam).

    A zero seed has no direction away from the trivial branch, so it returns
    the trivial branch sampled at ``steps + 1`` values of lambda. On StepFailure
    the points gathered so far are kept, provided the seed itself converged.
    """
    x0 = np.asarray(x0, dtype=float)
    w = problem.grid.weight
    lam0 = problem.lambda0

    def res(x, l):
        return problem.full_residual(x, l)

    def jl(x, l):
        return problem.full_lambda_derivative(x)

    if not np.any(x0):
        lams = lam + step_size * np.arange(steps + 1)
        return trivial_branch(lams, x0.size, lam0, res)
    tx, tl = initial_tangent(problem.full_jacobian(x0, lam), jl(x0, lam),
                             x0 / np.sqrt(w * np.dot(x0, x0)), 0.0, w)
    # point away from the trivial branch: amplitude should grow
    if np.dot(tx, x0) < 0:
        tx, tl = -tx, -tl
    kept = []
    try:
        pts = pseudo_arclength(res, problem.full_jacobian, jl, x0, lam, (tx, tl), step_size,
                               steps, tol=tol, weight=w, callback=lambda x, l: kept.append((x, l)))
    except StepFailure:
        if np.max(np.abs(res(x0, lam))) > tol:
            raise
        pts = [(x, l, None) for x, l in [(x0, lam)] + kept]
    points = []
    for x, l, _ in pts:
        flds = None
        if with_fields:
            phi, psi = problem.padded(x)
            flds = reconstruct_fields(problem.grid, phi, psi, problem.nl, l, problem.beta_const,
                                      problem.beta)
        points.append(BranchPoint(float(l), problem.amplitude(x), _signed(problem, x),
                                  float(np.max(np.abs(res(x, l)))), x, flds))
    direction = classify_direction([p.lam for p in points], [p.amplitude for p in points], lam0)
    return Branch(points, lam0, direction, label)


def trace_vm_branches(problem, bmap, delta=0.05, steps=10, step_size=0.01, tol=1e-9,
                      with_fields=False):
    """Roots at eps = +/- delta continued away from lambda0 by pseudo-arclength."""
    branches = []
    for eps in (delta, -delta):
        for k, xi in enumerate(branch_roots(bmap, eps)):
            x0 = bmap.solve(xi, eps).x
            label = f"{'plus' if eps > 0 else 'minus'}-{k}"
            try:
                branches.append(continue_branch(problem, x0, problem.lambda0 + eps, steps,
                                                step_size, tol, with_fields, label))
            except StepFailure:
                continue
    return branches


def analyze(problem, delta=0.05, samples=11, branch=False, steps=10, step_size=0.01,
            with_fields=False):
    """classify + optional branch tracing; gate failures should be caught by the caller."""
    bmap = VMBranchingMap(problem)
    report = classify(problem, delta, samples, bmap=bmap)
    if branch:
        report.branches = trace_vm_branches(problem, bmap, delta, steps, step_size,
                                            with_fields=with_fields)
    return report


__all__ = ["BifurcationReport", "GateFailure", "analyze", "branch_roots", "classify",
           "continue_branch",
           "detector_path", "gate_failure_report", "reconstruct_solution", "run_detectors",
           "trace_vm_branches", "witness"]

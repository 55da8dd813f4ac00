import json
from types import SimpleNamespace

import numpy as np
import pytest

from branchkit.bifurcate import (BifurcationProblem, Branch, BranchPoint, Diagnostics,
                                 analyze, build_beq_vm, candidate_lambda0, classify,
                                 classify_direction, continue_branch, dumps,
                                 gate_failure_report, pitchfork_analysis, read_branch_csv,
                                 reconstruct_solution, report_to_dict, witness,
                                 write_branch_csv)
from branchkit.elliptic import Grid2D
from branchkit.errors import GateFailure, PositivityViolation
from branchkit.lsr import beq_jacobian0, seed_directions, solve_beq_branches
from branchkit.vm import (LinearBlocks, VMParameters, l1_spectrum, maxwellian_profile,
                          neutral_density_scales, species_set, trivial_fields)
from branchkit.vm.fields import boundary_values

from conftest import THREE_SPECIES, vm_map, vm_problem


# --- the candidate point ------------------------------------------------------

def test_candidate_lambda0_arithmetic():
    spec = l1_spectrum(LinearBlocks(-1.0, 1.0, 1.0, -2.0), -1.0, 0.01)
    mu = 2 * np.pi**2
    lam = candidate_lambda0(mu, spec)
    assert lam.lambda0 == pytest.approx(mu / 0.0101, rel=1e-4)
    assert lam.decoupled_ok
    lead = SimpleNamespace(chi_minus=-0.01, chi_plus=1.0)
    assert candidate_lambda0(mu, lead).lambda0 == pytest.approx(1973.92, abs=5e-3)
    with pytest.raises(PositivityViolation):
        candidate_lambda0(mu, SimpleNamespace(chi_minus=0.01, chi_plus=1.0))


def test_problem_kernel_matches_multiplicity():
    for idx, n in ((0, 1), (1, 2)):
        pb = vm_problem(16, idx)
        assert pb.n == n
        assert pb.lambda0 == pytest.approx(-pb.mu_dirichlet / pb.spectrum.chi_minus)
        assert pb.lam.decoupled_ok and pb.lambda0 > 0
        assert pb.kernel_residual() < 1e-8


def test_gates_recorded_in_order(problem):
    gates = problem.diagnostics.gates
    assert list(gates)[:5] == ["N>=3", "C", "D", "I", "II"]
    assert all(g["ok"] for g in gates.values())


def _violating_condition_II():
    species = species_set(THREE_SPECIES)
    params = VMParameters.from_species(species, 0.1)
    # decreasing densities flip the sign of T1
    base = [maxwellian_profile(s).scaled(-1.0) for s in species]
    scales = neutral_density_scales(species, base, 0.0, 0.0, params)
    return species, [p.scaled(f) for p, f in zip(base, scales)], params


def test_condition_II_failure_names_the_gate():
    species, profiles, params = _violating_condition_II()
    diag = Diagnostics()
    with pytest.raises(GateFailure) as info:
        BifurcationProblem(Grid2D(1.0, 1.0, 8, 8), species, profiles, params, diagnostics=diag)
    assert info.value.gate == "II"
    report = gate_failure_report(info.value, diag)
    assert report.verdicts == [] and not report.bifurcation
    assert report.diagnostics["failed"] == "II"


def test_two_species_fail_the_first_gate():
    species = species_set(THREE_SPECIES[:2])
    params = VMParameters.from_species(species, 0.1)
    with pytest.raises(GateFailure, match="bifurcation impossible") as info:
        BifurcationProblem(Grid2D(1.0, 1.0, 8, 8), species,
                           [maxwellian_profile(s) for s in species], params)
    assert info.value.gate == "N>=3"


# --- branching equation -----------------------------------------------------------

def test_beq_vanishes_at_zero(bmap):
    for eps in (-0.05, 0.0, 0.05):
        assert not np.any(bmap.evaluate(np.zeros(1), eps))


@pytest.mark.parametrize("idx", [0, 1])
def test_beq_jacobian_at_zero_is_scalar(idx):
    bm = vm_map(16, idx)
    for eps in (-0.05, 0.03):
        want = eps / (1 - eps) * np.eye(bm.n)
        assert np.max(np.abs(bm.jacobian_at_zero(eps) - want)) <= 1e-10 * abs(want[0, 0])
        generic = beq_jacobian0(bm.generic.bordered, bm.system, eps)
        assert np.max(np.abs(generic - want)) <= 1e-10 * abs(want[0, 0])


@pytest.mark.parametrize("idx", [0, 1])
def test_dual_path_agreement(idx, rng):
    bm = vm_map(16, idx)
    for eps in (-0.04, 0.05):
        for amp in (0.01, 0.1):
            xi = amp * rng.standard_normal(bm.n)
            a = bm.evaluate(xi, eps)
            b = bm.generic.evaluate(xi, eps)
            assert np.max(np.abs(a - b)) <= 1e-8 * max(np.max(np.abs(a)), 1e-300)


def test_truncated_form_error_is_higher_order(bmap):
    eps = 0.03
    errs = []
    xis = (0.04, 0.02, 0.01)
    for x in xis:
        errs.append(abs(bmap.evaluate([x], eps)[0] - bmap.truncated([x], eps)[0]))
    # the remainder is o(xi^{l+1}) with l = 2
    ratios = [e / x**3 for e, x in zip(errs, xis)]
    assert ratios[0] > ratios[1] > ratios[2]


def test_build_beq_vm_checks_the_neumann_bound(problem):
    bm = build_beq_vm(problem, eps=0.05)
    assert bm.n == 1 and bm.order == 2


# --- solutions and fields ---------------------------------------------------------

def test_zero_root_reconstructs_the_trivial_state(problem, bmap):
    x, res, f = reconstruct_solution(problem, bmap, np.zeros(1), 0.05)
    assert not np.any(x) and res == 0.0
    base = trivial_fields(problem.grid, problem.nl, problem.lambda0 + 0.05)
    assert np.array_equal(f.E, base.E) and np.array_equal(f.B, base.B)
    assert witness(problem, f, problem.lambda0 + 0.05)[0] == 0.0


def test_branch_point_residual_and_witness(problem, bmap):
    eps = 0.05
    roots = solve_beq_branches(bmap, eps, [a * d for d in seed_directions(1) for a in (0.1, 0.3)])
    assert roots
    for xi in roots:
        x, res, f = reconstruct_solution(problem, bmap, xi, eps)
        assert res < 1e-8
        assert witness(problem, f, problem.lambda0 + eps)[0] > 1e-3
        assert np.max(np.abs(boundary_values(f.rho))) < 1e-6
        assert max(np.max(np.abs(boundary_values(c))) for c in f.j) < 1e-6
        phi, psi = problem.padded(x)
        assert np.all(boundary_values(phi) == problem.trivial.phi0)


def test_cubic_mode_branches_on_one_side_only():
    # the (2, 2) mode kills every quadratic coupling, so the cubic sign decides
    pb = vm_problem(16, 3)
    bm = vm_map(16, 3)
    assert pb.n == 1
    seeds = [a * d for d in seed_directions(1) for a in (0.1, 0.3)]
    c3 = {}
    for eps in (0.02, -0.02):
        coef = bm.scalar_coefficients(eps)
        assert abs(coef[2]) < 1e-10 * abs(coef[3])
        c3[eps] = coef[3]
        roots = solve_beq_branches(bm, eps, seeds)
        predicted = -eps / (1 - eps) / coef[3]
        if predicted < 0:
            assert roots == []
        else:
            assert sorted(r[0] for r in roots) == pytest.approx(
                [-np.sqrt(predicted), np.sqrt(predicted)], rel=0.1)
    assert np.sign(c3[0.02]) == np.sign(c3[-0.02])


def test_zero_seed_continues_along_trivial_branch(problem):
    br = continue_branch(problem, np.zeros(2 * problem.size), problem.lambda0 - 0.1, steps=4,
                         step_size=0.05)
    assert len(br.points) == 5
    assert all(p.amplitude == 0.0 for p in br.points)


def test_continue_branch_from_root(problem, bmap):
    eps = 0.05
    xi = solve_beq_branches(bmap, eps, [np.array([0.1])])[0]
    x0 = bmap.solve(xi, eps).x
    br = continue_branch(problem, x0, problem.lambda0 + eps, steps=3, step_size=0.01)
    assert len(br.points) == 4
    assert all(p.residual < 1e-9 for p in br.points)
    amps = br.amplitudes()
    assert np.all(amps > 0) and amps[-1] > amps[0]


# --- classification ---------------------------------------------------------------

def test_classify_simple_and_double_kernels():
    rep = classify(vm_problem(16, 0))
    kinds = {v.kind for v in rep.firing}
    assert "bifurcation_by_sign" in kinds and rep.bifurcation
    rep2 = classify(vm_problem(16, 1))
    morse = [v for v in rep2.firing if v.kind == "bifurcation_by_morse_jump"]
    assert morse and (morse[0].evidence["nu1"], morse[0].evidence["nu2"]) == (2, 0)
    assert rep2.potentiality.is_potential_evidence and rep2.bifurcation
    assert not any(v.kind == "bifurcation_by_sign" for v in rep2.verdicts if v.fires)


def test_direction_classifier():
    lam0 = 10.0
    amps = np.linspace(0.1, 0.5, 5)
    assert classify_direction(lam0 + amps**2, amps, lam0) == "supercritical"
    assert classify_direction(lam0 - amps**2, amps, lam0) == "subcritical"
    assert classify_direction([lam0], [0.0], lam0) == "undetermined"


# --- persistence ------------------------------------------------------------------

@pytest.fixture(scope="module")
def pitchfork_report():
    return pitchfork_analysis(Grid2D(1.0, 1.0, 11, 11), delta=0.02, steps=5, step_size=0.01)


def test_pitchfork_arms_are_mirror_images(pitchfork_report):
    rep = pitchfork_report
    assert rep.n == 1 and rep.bifurcation
    assert len(rep.branches) == 2
    plus, minus = sorted(rep.branches, key=lambda b: b.label, reverse=True)
    assert plus.signed_amplitudes() == pytest.approx(-minus.signed_amplitudes(), rel=1e-8)
    assert {b.direction for b in rep.branches} == {"subcritical"}


def test_report_json_is_deterministic_and_strict(pitchfork_report):
    text = dumps(report_to_dict(pitchfork_report))
    assert text == dumps(report_to_dict(pitchfork_report))
    data = json.loads(text)
    assert set(data) >= {"lambda0", "n", "verdicts", "diagnostics", "branches"}
    pts = data["branches"][0]["points"]
    assert set(pts[0]) >= {"lambda", "amplitude", "residual"}
    assert "NaN" not in text


def test_branch_csv_round_trip(tmp_path, pitchfork_report):
    path = write_branch_csv(tmp_path / "b.csv", pitchfork_report.branches)
    rows = read_branch_csv(path)
    flat = [p for b in pitchfork_report.branches for p in b.points]
    assert [r["lambda"] for r in rows] == [p.lam for p in flat]
    assert [r["amplitude"] for r in rows] == [p.amplitude for p in flat]
    assert path.read_bytes().splitlines()[0] == b"lambda,amplitude,residual,direction"
    assert b"\r" not in path.read_bytes()


def test_report_skips_state_vectors():
    pt = BranchPoint(1.0, 0.5, -0.5, 1e-12, np.arange(3.0))
    rep = SimpleNamespace(model="vm", lambda0=1.0, n=1, bifurcation=True, verdicts=[],
                          potentiality=None, diagnostics={}, extra={"x": np.float64(np.inf)},
                          branches=[Branch([pt], 1.0, "supercritical", "p")])
    data = report_to_dict(rep)
    assert "x" not in data["branches"][0]["points"][0]
    assert data["extra"]["x"] is None


def test_analyze_with_branches_small_grid():
    pb = vm_problem(10, 0)
    rep = analyze(pb, delta=0.05, branch=True, steps=2, step_size=0.01)
    assert rep.bifurcation and rep.branches
    for b in rep.branches:
        assert all(p.residual < 1e-9 for p in b.points)

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from branchkit.deflation import DeflationOperator, deflated_newton
from branchkit.errors import ConditionBViolated, NoConvergence, NotPotential, WindowAmbiguity
from branchkit.lsr import (INCONCLUSIVE, MORSE, SIGN, PathSpec, assemble_block_matrix,
                           block_asymptotic_eigs, detect_bifurcation_morse,
                           detect_bifurcation_sign, seed_directions, small_eigs,
                           solve_beq_branches)

PATH = PathSpec.linear(0.0, 0.1, 11)


def test_path_validation():
    with pytest.raises(ValueError):
        PathSpec(((0.0, 0.0), (1.0, 0.1), (2.0, 0.2)))
    with pytest.raises(ValueError):
        PathSpec(((-1.0, 0.0), (1.0, 0.1), (0.0, 0.2)))
    assert PATH.epsilon0 == 0.0
    assert PathSpec.linear(0.3, 0.1, 4).resolution == 5


def test_sign_detector_on_oracles():
    v = detect_bifurcation_sign(lambda e: [[e / (1 - e)]], PATH)
    assert v.kind == SIGN and v.fires
    alphas = np.array(v.evidence["alpha"])
    ts = np.array(v.evidence["t"])
    assert np.all(alphas[ts < 0] < 0) and np.all(alphas[ts > 0] > 0)
    assert detect_bifurcation_sign(lambda e: [[e**2]], PATH).kind == INCONCLUSIVE
    assert detect_bifurcation_sign(lambda e: np.diag([e, -e]), PATH).kind == INCONCLUSIVE


def test_sign_detector_ignores_roundoff_sign_flips():
    # det flips sign at 1e-20, far below the floor set by the unit entry
    noise = lambda e: np.diag([1.0, 1e-20 * np.sign(e)])  # noqa: E731
    assert detect_bifurcation_sign(noise, PATH).kind == INCONCLUSIVE


@given(st.integers(1, 5), st.floats(0.01, 0.3))
def test_sign_detector_fires_iff_odd_dimension(n, delta):
    path = PathSpec.linear(0.0, delta, 7)
    v = detect_bifurcation_sign(lambda e: e / (1 - e) * np.eye(n), path)
    assert v.fires == (n % 2 == 1)


def test_morse_detector():
    v = detect_bifurcation_morse(lambda e: e / (1 - e) * np.eye(2), PATH)
    assert v.kind == MORSE
    assert (v.evidence["nu1"], v.evidence["nu2"]) == (2, 0)
    assert detect_bifurcation_morse(lambda e: np.diag([e, -e]), PATH).kind == INCONCLUSIVE
    # definite for eps > 0, negative definite for eps < 0
    spd = np.array([[2.0, 1.0], [1.0, 3.0]])
    assert detect_bifurcation_morse(lambda e: e * spd, PATH).kind == MORSE


def test_morse_refuses_nonsymmetric_family():
    with pytest.raises(NotPotential):
        detect_bifurcation_morse(lambda e: e * np.array([[1.0, 1.0], [0.0, 1.0]]), PATH)


def test_block_asymptotics_two_blocks():
    blocks = [[np.array([[2.0]]), np.array([[1.0]])], [np.array([[1.0]]), np.array([[-3.0]])]]
    r = np.array([[1.0, 3.0], [3.0, 2.0]])
    res = block_asymptotic_eigs(blocks, r)
    assert res.exponents.tolist() == [1.0, 2.0]
    ev = {}
    for eps in (1e-3, 1e-4):
        w = np.linalg.eigvals(assemble_block_matrix(blocks, r, eps)).real
        ev[eps] = w[np.argsort(-np.abs(w))]
    slopes = np.log(np.abs(ev[1e-3] / ev[1e-4])) / np.log(10.0)
    assert slopes == pytest.approx([1.0, 2.0], abs=0.01)
    assert ev[1e-4] / np.array([1e-4, 1e-8]) == pytest.approx([2.0, -3.0], rel=0.01)
    for eps in (1e-2, 1e-3, 1e-4):
        det = np.linalg.det(assemble_block_matrix(blocks, r, eps))
        assert det / res.det_leading(eps) == pytest.approx(1.0, abs=10 * eps)


def test_block_asymptotics_single_block_scaling():
    a0 = np.array([[1.0, 2.0], [0.5, -1.0]])
    res = block_asymptotic_eigs([[a0]], [[2.0]])
    exact = np.sort(np.linalg.eigvals(1e-3**2 * a0).real)
    assert np.sort(res.principal_eigenvalues(1e-3).real) == pytest.approx(exact)


def test_condition_b_violations_are_named():
    one = np.array([[1.0]])
    with pytest.raises(ConditionBViolated, match="diagonal"):
        block_asymptotic_eigs([[one, one], [one, one]], [[2.0, 1.0], [3.0, 2.0]])
    with pytest.raises(ConditionBViolated, match="det"):
        block_asymptotic_eigs([[np.zeros((1, 1))]], [[1.0]])
    with pytest.raises(ConditionBViolated, match="triangle"):
        block_asymptotic_eigs([[one, one], [one, one]], [[1.0, 1.0], [1.0, 1.0]])


def test_small_eigs_window():
    a = np.diag([1e-3, -2e-3, 5.0, 7.0])
    assert small_eigs(a, 1.0) == pytest.approx([1e-3, -2e-3])
    with pytest.raises(WindowAmbiguity):
        small_eigs(a, 5.2)


class ScalarMap:
    """L(xi, eps) = eps xi - c xi^3, with the interface solve_beq_branches expects."""

    n = 1

    def __init__(self, c):
        self.c = c

    def evaluate_with_state(self, xi, eps):
        return eps * xi - self.c * xi**3, None

    def jacobian(self, xi, eps, x=None):
        return np.array([[eps - 3 * self.c * xi[0] ** 2]])


def seeds(n, amps=(0.1, 1.0)):
    return [a * d for d in seed_directions(n) for a in amps]


def test_scalar_pitchfork_roots():
    roots = solve_beq_branches(ScalarMap(2.0), 0.08, seeds(1))
    assert sorted(r[0] for r in roots) == pytest.approx([-0.2, 0.2], rel=1e-10)
    assert solve_beq_branches(ScalarMap(2.0), -0.08, seeds(1)) == []
    assert solve_beq_branches(ScalarMap(2.0), 0.08, [np.zeros(1)]) == []


def test_seed_directions_count():
    for n in (1, 2, 3):
        assert len(seed_directions(n)) == 2 * n + n * (n - 1)


def test_deflation_finds_both_roots():
    f = lambda u: np.array([(u[0] - 1) * (u[0] + 2)])  # noqa: E731
    step = lambda u, r: np.array([-r[0] / (2 * u[0] + 1)])  # noqa: E731
    ok = lambda u, r: abs(r[0]) < 1e-12  # noqa: E731
    defl = DeflationOperator(power=2.0, shift=1.0)
    first = deflated_newton(f, step, np.array([0.8]), defl, ok)
    defl.add_solution(first)
    second = deflated_newton(f, step, np.array([0.8]), defl, ok)
    assert sorted([first[0], second[0]]) == pytest.approx([-2.0, 1.0])
    defl.add_solution(second)
    with pytest.raises(NoConvergence):
        deflated_newton(f, step, np.array([0.8]), defl, ok, max_iter=30)

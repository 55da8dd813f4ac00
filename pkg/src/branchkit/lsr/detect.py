"""Bifurcation detectors working on the BEq Jacobian a_ik(eps) along a parameter path."""

from dataclasses import dataclass, field

import numpy as np

from ..errors import NotPotential
from .reduction import relative_asymmetry

SIGN = "bifurcation_by_sign"
MORSE = "bifurcation_by_morse_jump"
INCONCLUSIVE = "inconclusive"
NOISE_FACTOR = 1e3


@dataclass(frozen=True)
class PathSpec:
    """Samples (t, eps(t)) of a path through eps0 = eps(0); t strictly increasing."""

    samples: tuple

    def __post_init__(self):
        ts = np.array([t for t, _ in self.samples], dtype=float)
        if ts.size < 3 or np.any(np.diff(ts) <= 0):
            raise ValueError("path parameter t must be strictly increasing with >= 3 samples")
        if not (np.any(ts < 0) and np.any(ts == 0) and np.any(ts > 0)):
            raise ValueError("path must contain samples with t < 0, t = 0 and t > 0")

    @classmethod
    def linear(cls, eps0=0.0, delta=0.05, samples=11):
        """Symmetric straight path eps(t) = eps0 + delta * t, t in [-1, 1]."""
        if samples % 2 == 0:
            samples += 1
        ts = np.linspace(-1.0, 1.0, samples)
        ts[samples // 2] = 0.0
        return cls(tuple((float(t), eps0 + delta * float(t)) for t in ts))

    @property
    def resolution(self):
        return len(self.samples)

    @property
    def epsilon0(self):
        return dict(self.samples)[0.0]


@dataclass(frozen=True)
class Verdict:
    kind: str
    epsilon0: object
    evidence: dict = field(default_factory=dict)

    @property
    def fires(self):
        return self.kind != INCONCLUSIVE


def noise_floor(a):
    a = np.atleast_2d(a)
    return NOISE_FACTOR * np.finfo(float).eps * max(np.linalg.norm(a, 2), 1e-300)


def _matrices(jacobian, path):
    return [(t, eps, np.atleast_2d(np.asarray(jacobian(eps), dtype=float)))
            for t, eps in path.samples]


def detect_bifurcation_sign(jacobian, path):
    """Determinant sign-change test along the path.

    ``jacobian`` maps eps to the matrix a_ik(eps). Fires when alpha(t) = det a
    keeps one strict sign for t < 0 and the opposite strict sign for t > 0.
    """
    alphas, floors, ts = [], [], []
    for t, eps, a in _matrices(jacobian, path):
        n = a.shape[0]
        alphas.append(float(np.linalg.det(a)) if n else 0.0)
        floors.append(noise_floor(a) * max(np.linalg.norm(a, 2), 1e-300) ** max(n - 1, 0))
        ts.append(t)
    alphas, floors, ts = map(np.asarray, (alphas, floors, ts))
    evidence = {"t": ts.tolist(), "alpha": alphas.tolist()}
    off = ts != 0
    significant = np.abs(alphas) > floors
    kind = INCONCLUSIVE
    if np.all(significant[off]):
        neg = np.sign(alphas[ts < 0])
        pos = np.sign(alphas[ts > 0])
        if np.all(neg == neg[0]) and np.all(pos == pos[0]) and neg[0] == -pos[0]:
            kind = SIGN
    return Verdict(kind, path.epsilon0, evidence)


def detect_bifurcation_morse(jacobian, path, asym_tol=1e-6):
    """Morse-index jump test for a potential branching equation.

    Counts positive eigenvalues of the (symmetrized) a_ik on both sides of t = 0
    and fires when the counts differ. Raises NotPotential if the matrices are
    not symmetric within ``asym_tol``.
    """
    counts = {}
    worst = 0.0
    degenerate = False
    for t, eps, a in _matrices(jacobian, path):
        asym = relative_asymmetry(a)
        worst = max(worst, asym)
        if asym > asym_tol:
            raise NotPotential(f"relative asymmetry {asym:.2e} at eps={eps} exceeds {asym_tol:.0e}")
        if t == 0:
            continue
        sym = 0.5 * (a + a.T)
        w = np.linalg.eigvalsh(sym)
        floor = noise_floor(sym)
        if np.any(np.abs(w) <= floor):
            degenerate = True
        counts.setdefault(t > 0, []).append(int(np.sum(w > floor)))
    plus, minus = counts.get(True, []), counts.get(False, [])
    evidence = {"nu_plus_counts": plus, "nu_minus_counts": minus, "max_asymmetry": worst}
    kind = INCONCLUSIVE
    if plus and minus and len(set(plus)) == 1 and len(set(minus)) == 1 and not degenerate:
        evidence["nu1"], evidence["nu2"] = plus[0], minus[0]
        if plus[0] != minus[0]:
            kind = MORSE
    return Verdict(kind, path.epsilon0, evidence)

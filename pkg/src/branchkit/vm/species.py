"""Plasma species, the coupling relations between them, and derived coefficients.

Gaussian units throughout. Species 0 is the reference species (by default the
electron, q < 0); its charge, mass and spread parameter define q, m, alpha.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Species:
    q: float
    m: float
    alpha: float
    d: tuple
    l: float
    k: float
    c1: float = 0.0
    c2: float = 0.0
    name: str = ""

    @property
    def drift(self):
        return np.asarray(self.d, dtype=float)


def species_set(params, names=None):
    """Build a consistent species list from (q, m, alpha, d) tuples.

    The couplings l_i, k_i are computed from the reference species so that
    l_i = m_1 alpha_i q_i / (alpha_1 q_1 m_i) and k_i (q_1/m_1) d_1 = (q_i/m_i) d_i.
    Every drift must be parallel to the reference drift.
    """
    q1, m1, a1, d1 = params[0]
    d1 = np.asarray(d1, dtype=float)
    out = []
    for idx, (q, m, alpha, d) in enumerate(params):
        d = np.asarray(d, dtype=float)
        l_i = m1 * alpha * q / (a1 * q1 * m)
        # k_i (q1/m1) d1 = (q/m) d  ->  k_i = (q/m) (d . d1) / ((q1/m1) |d1|^2)
        k_i = (q / m) * np.dot(d, d1) / ((q1 / m1) * np.dot(d1, d1))
        if np.linalg.norm(np.cross(d, d1)) > 1e-12 * np.linalg.norm(d) * np.linalg.norm(d1):
            raise ValueError(f"drift of species {idx} is not parallel to the reference drift")
        name = names[idx] if names else f"s{idx}"
        out.append(Species(float(q), float(m), float(alpha), tuple(d.tolist()), float(l_i),
                           float(k_i), name=name))
    return out


@dataclass(frozen=True)
class SpeciesDiagnostics:
    ok: bool
    failures: tuple

    def __bool__(self):
        return self.ok


def validate_species(species, rtol=1e-12):
    """Check the coupling relations, N >= 3, and that k_i / l_i is not constant."""
    failures = []
    if not species:
        return SpeciesDiagnostics(False, ("empty species list",))
    ref = species[0]
    if abs(ref.l - 1) > rtol or abs(ref.k - 1) > rtol:
        failures.append("coupling: k_1 = l_1 = 1 violated")
    for i, s in enumerate(species):
        if np.linalg.norm(s.drift) == 0:
            failures.append(f"species {i}: |d| = 0")
            continue
        l_exp = ref.m * s.alpha * s.q / (ref.alpha * ref.q * s.m)
        if abs(s.l - l_exp) > rtol * max(abs(l_exp), 1.0):
            failures.append(f"coupling: l_{i + 1} = {s.l:g} but relation gives {l_exp:g}")
        lhs = s.k * ref.q / ref.m * ref.drift
        rhs = s.q / s.m * s.drift
        if np.linalg.norm(lhs - rhs) > rtol * max(np.linalg.norm(rhs), 1.0):
            failures.append(f"coupling: k_{i + 1} q_1 d_1 / m_1 != q_{i + 1} d_{i + 1} / m_{i + 1}")
        if s.alpha < 0:
            failures.append(f"species {i}: alpha < 0")
    if len(species) < 3:
        failures.append(f"N = {len(species)} < 3: bifurcation impossible "
                        "(the system collapses to one equation)")
    else:
        ratios = np.array([s.k / s.l for s in species if s.l != 0])
        if ratios.size and np.ptp(ratios) <= 1e-12 * max(np.max(np.abs(ratios)), 1.0):
            failures.append("k_i / l_i is constant across species: bifurcation impossible")
    return SpeciesDiagnostics(not failures, tuple(failures))


@dataclass(frozen=True)
class VMParameters:
    """Coefficients of the reduced elliptic system.

    ``mu_coeff`` = 8 pi alpha q / m and ``nu_coeff`` = -4 pi q eps_rel / m, with
    ``eps_rel`` = 1/c^2. ``nu_coeff`` is unrelated to the small operator
    eigenvalues that other modules call ``small_eigs``.
    """

    q: float
    m: float
    alpha: float
    d: tuple
    eps_rel: float
    a: float = 1.0
    b: float = 1.0

    @classmethod
    def from_species(cls, species, eps_rel, a=1.0, b=1.0):
        ref = species[0]
        return cls(ref.q, ref.m, ref.alpha, ref.d, float(eps_rel), float(a), float(b))

    @property
    def c(self):
        return 1.0 / np.sqrt(self.eps_rel)

    @property
    def mu_coeff(self):
        return 8 * np.pi * self.alpha * self.q / self.m

    @property
    def nu_coeff(self):
        return -4 * np.pi * self.q * self.eps_rel / self.m

    @property
    def eta(self):
        return 4 * np.pi * abs(self.q) / self.m

    @property
    def drift(self):
        return np.asarray(self.d, dtype=float)

    @property
    def d2(self):
        return float(np.dot(self.drift, self.drift))

    def beta(self, s):
        """Default drift-to-density vector beta_s = (b / 2 alpha_s a) d_s."""
        return self.b / (2 * s.alpha * self.a) * s.drift

    def beta_dot(self, s, beta=None):
        vec = self.beta(s) if beta is None else np.asarray(beta, dtype=float)
        return float(np.dot(vec, self.drift))

    def check(self):
        problems = []
        if not self.eta > 0:
            problems.append("eta <= 0")
        if self.q < 0:
            if not np.isclose(self.nu_coeff, self.eta * self.eps_rel, rtol=1e-12):
                problems.append("nu_coeff != eta * eps_rel")
            if not self.mu_coeff < 0:
                problems.append("mu_coeff >= 0 for q < 0")
        return problems

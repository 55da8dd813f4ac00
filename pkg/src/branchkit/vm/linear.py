"""Linearization of the reduced system at the trivial state.

With u = (phi - phi0, psi - psi0) the reduced equations read
(L0 - lambda L1) u - lambda r(u) = 0, where L0 = diag(Delta, Delta) and
L1 = [[mu T1, mu T2], [nu T3, nu T4]] is a constant 2x2 matrix.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateL1, NotSymmetrizable


@dataclass(frozen=True)
class LinearBlocks:
    T1: float
    T2: float
    T3: float
    T4: float

    @property
    def delta(self):
        """T1 T4 - T2 T3."""
        return self.T1 * self.T4 - self.T2 * self.T3

    def as_array(self):
        return np.array([[self.T1, self.T2], [self.T3, self.T4]])


def species_terms(species, profiles, trivial, params, beta=None):
    """Per-species data at the trivial state.

    Returns (g, w0, p) with g[s] = (a l_s, b k_s), w0[s] = a l_s phi0 + b k_s psi0
    and p[s] = (beta_s, d).
    """
    a, b = params.a, params.b
    g = np.array([[a * s.l, b * s.k] for s in species])
    w0 = g @ np.array([trivial.phi0, trivial.psi0])
    if beta is None:
        p = np.array([params.beta_dot(s) for s in species])
    else:
        p = np.array([float(np.dot(bv, params.drift)) for bv in beta])
    return g, w0, p


def assemble_T(species, profiles, trivial, params, beta=None):
    """T1 = sum q_s a l_s A_s', T2 = sum q_s b k_s A_s', T3, T4 the same weighted by (beta_s, d)."""
    g, w0, p = species_terms(species, profiles, trivial, params, beta)
    q = np.array([s.q for s in species])
    a1 = np.array([float(prof.derivative(w, 1)) for prof, w in zip(profiles, w0)])
    qa = q * a1
    return LinearBlocks(
        float(np.sum(qa * g[:, 0])),
        float(np.sum(qa * g[:, 1])),
        float(np.sum(qa * g[:, 0] * p)),
        float(np.sum(qa * g[:, 1] * p)),
    )


def lemma5_pairwise(species, profiles, trivial, params, beta=None):
    """sum_{i>j} a_i a_j (l_j k_i - k_j l_i)(beta_i - beta_j, d) (b/a), a_i = q_i dA_i/dx.

    Equals T1 T4 - T2 T3 identically.
    """
    g, w0, p = species_terms(species, profiles, trivial, params, beta)
    ai = np.array([s.q * params.a * float(prof.derivative(w, 1))
                   for s, prof, w in zip(species, profiles, w0)])
    ls = np.array([s.l for s in species])
    ks = np.array([s.k for s in species])
    total = 0.0
    for i in range(len(species)):
        for j in range(i):
            total += ai[i] * ai[j] * (ls[j] * ks[i] - ks[j] * ls[i]) * (p[i] - p[j])
    return total * params.b / params.a


@dataclass(frozen=True)
class ConditionII:
    ok: bool
    delta: float
    T1: float

    def __bool__(self):
        return self.ok


def check_condition_II(blocks):
    return ConditionII(bool(blocks.delta > 0 and blocks.T1 < 0), blocks.delta, blocks.T1)


def l1_matrix(blocks, mu, nu):
    return np.array([[mu * blocks.T1, mu * blocks.T2], [nu * blocks.T3, nu * blocks.T4]])


def _f_factor(blocks, mu, nu):
    if blocks.T2 == 0 and blocks.T3 == 0:
        return 1.0
    if blocks.T2 == 0 or blocks.T3 == 0:
        raise NotSymmetrizable("exactly one of T2, T3 vanishes; the pencil cannot be symmetrized")
    return mu * blocks.T2 / (nu * blocks.T3)


@dataclass(frozen=True)
class L1Spectrum:
    matrix: np.ndarray
    chi_plus: float
    chi_minus: float
    c_plus: np.ndarray
    c_minus: np.ndarray
    c_minus_left: np.ndarray
    F: float
    chi_plus_leading: float
    chi_minus_leading: float
    normalized: bool


def l1_spectrum(blocks, mu, nu, eta=None, eps=None):
    """Exact eigen-decomposition of L1 plus the small-eps predictions.

    ``c_minus`` is scaled so that chi_- (c1^2 + F c2^2) = 1 with F = mu T2 / (nu T3);
    when that quadratic form is negative the magnitude is normalized instead and
    ``normalized`` is False. Its sign makes the second component nonnegative
    (the left eigenvector tends to (0, 1) as eps -> 0). ``eta`` and ``eps``
    (= 1/c^2, so nu = eta eps for q < 0) feed only the leading-order terms.
    """
    mat = l1_matrix(blocks, mu, nu)
    vals, vecs = np.linalg.eig(mat)
    if np.iscomplexobj(vals) and np.any(np.abs(vals.imag) > 0):
        raise DegenerateL1("L1 has complex eigenvalues")
    vals, vecs = vals.real, vecs.real
    floor = 1e3 * np.finfo(float).eps * max(np.linalg.norm(mat), 1e-300)
    if abs(vals[0] - vals[1]) <= floor:
        raise DegenerateL1("eigenvalues of L1 coincide")
    i_minus = int(np.argmin(vals))
    i_plus = 1 - i_minus
    chi_m, chi_p = float(vals[i_minus]), float(vals[i_plus])
    c_m = vecs[:, i_minus].copy()
    c_p = vecs[:, i_plus] / np.linalg.norm(vecs[:, i_plus])
    wl, vl = np.linalg.eig(mat.T)
    left = vl[:, int(np.argmin(np.abs(wl.real - chi_m)))].real
    left = left / np.linalg.norm(left)
    if left[1] < 0 or (left[1] == 0 and left[0] < 0):
        left = -left
    try:
        f = _f_factor(blocks, mu, nu)
    except NotSymmetrizable:
        f = np.nan
    form = chi_m * (c_m[0] ** 2 + f * c_m[1] ** 2) if np.isfinite(f) else np.nan
    normalized = bool(np.isfinite(form) and form > 0)
    if normalized:
        c_m = c_m / np.sqrt(form)
    elif np.isfinite(form) and form != 0:
        c_m = c_m / np.sqrt(abs(form))
    else:
        c_m = c_m / np.linalg.norm(c_m)
    if c_m[1] < 0 or (c_m[1] == 0 and c_m[0] < 0):
        c_m = -c_m
    lead_m = np.nan
    if eta is not None and eps is not None and blocks.T1 != 0:
        lead_m = eta * blocks.delta / blocks.T1 * eps
    return L1Spectrum(mat, chi_p, chi_m, c_p, c_m, left, float(f), mu * blocks.T1,
                      float(lead_m), normalized)


@dataclass(frozen=True)
class Symmetrizer:
    a_tilde: float

    @property
    def matrix(self):
        return np.diag([1.0, self.a_tilde])

    def is_symmetric(self, mat, rtol=1e-12):
        sym = self.matrix @ mat
        return bool(abs(sym[0, 1] - sym[1, 0]) <= rtol * max(np.abs(sym).max(), 1e-300))


def symmetrize(blocks, mu, nu):
    """M = diag(1, a~) with a~ = mu T2 / (nu T3), or a~ = 1 when T2 = T3 = 0.

    M L1 is then symmetric, and so is M (L0 - lambda L1) for every lambda.
    """
    sym = Symmetrizer(float(_f_factor(blocks, mu, nu)))
    if not sym.is_symmetric(l1_matrix(blocks, mu, nu)):
        raise NotSymmetrizable("M L1 is not symmetric")
    return sym

"""Assembly of the discretized reduced VM problem around a candidate lambda0.

Unknowns are stacked as x = (u1, u2) on the interior grid (length 2 N). The
discrete system is (L0 - lambda L1) x - lambda r(x) = 0 and, after the
symmetrizer M, with lambda = lambda0 + eps,

    B x = eps B1 x + (lambda0 + eps) M r(x),   B = M (L0 - lambda0 L1),  B1 = M L1.
"""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from ..elliptic import assemble_laplacian, dirichlet_eigenpairs, group_of
from ..errors import (DegenerateL1, GateFailure, NeutralityError, NotSymmetrizable,
                      PositivityViolation)
from ..lsr import FredholmSystem, KernelBasis
from ..vm import (PointwiseNonlinearity, assemble_T, check_condition_II, l1_spectrum,
                  neutrality_check, symmetrize, trivial_state, validate_species)


@dataclass(frozen=True)
class Lambda0:
    lambda0: float
    mu: float
    chi_minus: float
    chi_plus: float
    n: int
    decoupled_ok: bool


def candidate_lambda0(mu, spectrum, n=1):
    """lambda0 = -mu / chi_minus for the Dirichlet eigenvalue ``mu`` of multiplicity ``n``.

    The kernel of M (L0 - lambda0 L1) splits into Delta U1 + mu U1 = 0 and
    Delta U2 - lambda0 chi_plus U2 = 0; the second has only the zero solution
    when lambda0 chi_plus > 0, so dim N(B) = n.
    """
    chi_m = spectrum.chi_minus
    if not chi_m < 0:
        raise PositivityViolation(f"chi_minus = {chi_m:g} is not negative")
    lam0 = -mu / chi_m
    if not lam0 > 0:
        raise PositivityViolation(f"lambda0 = {lam0:g} is not positive")
    return Lambda0(float(lam0), float(mu), float(chi_m), float(spectrum.chi_plus), int(n),
                   bool(lam0 * spectrum.chi_plus > 0))


@dataclass
class Diagnostics:
    gates: dict = field(default_factory=dict)
    failed: str = ""
    message: str = ""

    def record(self, gate, ok, detail=""):
        self.gates[gate] = {"ok": bool(ok), "detail": detail}

    def as_dict(self):
        return {"gates": self.gates, "failed": self.failed, "message": self.message}


class BifurcationProblem:
    """Everything needed to reduce the VM system at one Dirichlet eigenvalue."""

    def __init__(self, grid, species, profiles, params, u01=0.0, u02=0.0, eigen_index=0,
                 beta=None, beta_const=0.0, rel_gap=1e-3, diagnostics=None):
        self.grid = grid
        self.species = tuple(species)
        self.profiles = tuple(profiles)
        self.params = params
        self.beta = beta
        self.beta_const = float(beta_const)
        self.eigen_index = int(eigen_index)
        self.diagnostics = diagnostics if diagnostics is not None else Diagnostics()
        diag = self.diagnostics

        report = validate_species(self.species)
        n_ok = len(self.species) >= 3
        diag.record("N>=3", n_ok, f"N = {len(self.species)}")
        if not n_ok:
            self._fail("N>=3", "; ".join(report.failures))
        diag.record("C", bool(report), "; ".join(report.failures))
        if not report:
            self._fail("C", "; ".join(report.failures))
        diag.record("D", True, "beta_s = (b / 2 alpha_s a) d_s" if beta is None
                    else "explicit beta vectors")
        try:
            self.trivial = trivial_state(u01, u02, params, self.species, self.profiles, beta)
        except NeutralityError as exc:
            diag.record("I", False, str(exc))
            self._fail("I", str(exc))
        neut = neutrality_check(self.trivial, self.species, self.profiles, params, beta)
        diag.record("I", True, f"charge {neut.charge:.3e}, current {neut.current:.3e}")
        self.blocks = assemble_T(self.species, self.profiles, self.trivial, params, beta)
        cond = check_condition_II(self.blocks)
        diag.record("II", bool(cond), f"T1 = {cond.T1:.6g}, T1T4 - T2T3 = {cond.delta:.6g}")
        if not cond:
            self._fail("II", f"T1 = {cond.T1:.6g}, T1T4 - T2T3 = {cond.delta:.6g}")
        mu, nu = params.mu_coeff, params.nu_coeff
        try:
            self.symmetrizer = symmetrize(self.blocks, mu, nu)
            self.spectrum = l1_spectrum(self.blocks, mu, nu, params.eta, params.eps_rel)
        except (NotSymmetrizable, DegenerateL1) as exc:
            diag.record("symmetrizable", False, str(exc))
            self._fail("symmetrizable", str(exc))
        diag.record("symmetrizable", True, f"a~ = {self.symmetrizer.a_tilde:.6g}")
        lemma7 = self.spectrum.chi_plus > 0 and mu * self.blocks.T1 > 0
        diag.record("L1 signs", lemma7, f"chi+ = {self.spectrum.chi_plus:.6g}, "
                    f"chi- = {self.spectrum.chi_minus:.6g}")
        if not lemma7:
            self._fail("L1 signs", "chi_plus must be positive with mu T1 > 0")
        if not self.spectrum.normalized:
            self._fail("L1 signs", "chi_- (c1^2 + F c2^2) <= 0; B1 e cannot be biorthogonal")

        self.laplacian = assemble_laplacian(grid)
        count = min(grid.size, self.eigen_index + 6)
        pairs = dirichlet_eigenpairs(self.laplacian, count, rel_gap=rel_gap)
        self.cluster = group_of(pairs, self.eigen_index)
        self.mu_dirichlet = float(np.mean([p.mu for p in self.cluster]))
        try:
            self.lam = candidate_lambda0(self.mu_dirichlet, self.spectrum, len(self.cluster))
        except PositivityViolation as exc:
            diag.record("lambda0>0", False, str(exc))
            self._fail("lambda0>0", str(exc))
        diag.record("lambda0>0", True, f"lambda0 = {self.lam.lambda0:.10g}")
        self.nl = PointwiseNonlinearity(self.species, self.profiles, self.trivial, params, beta)

    def _fail(self, gate, message):
        self.diagnostics.failed = gate
        self.diagnostics.message = message
        raise GateFailure(gate, message)

    # --- discrete operators -------------------------------------------------

    @property
    def lambda0(self):
        return self.lam.lambda0

    @property
    def n(self):
        return len(self.cluster)

    @property
    def size(self):
        return self.grid.size

    def split(self, x):
        return x[: self.size], x[self.size:]

    def join(self, u1, u2):
        return np.concatenate([u1, u2])

    @cached_property
    def L0(self):
        lap = self.laplacian.matrix
        return sp.block_diag([lap, lap], format="csr")

    @cached_property
    def L1(self):
        return sp.kron(sp.csr_matrix(self.spectrum.matrix), sp.identity(self.size), format="csr")

    @cached_property
    def M(self):
        return sp.kron(sp.csr_matrix(self.symmetrizer.matrix), sp.identity(self.size),
                       format="csr")

    @cached_property
    def B(self):
        return (self.M @ (self.L0 - self.lambda0 * self.L1)).tocsr()

    @cached_property
    def B1(self):
        return (self.M @ self.L1).tocsr()

    def r(self, x):
        u1, u2 = self.split(x)
        return self.join(*self.nl.residual(u1, u2))

    def r_jacobian(self, x):
        u1, u2 = self.split(x)
        return _blocks_to_sparse(self.nl.jacobian(u1, u2))

    def taylor(self, x, order):
        u1, u2 = self.split(x)
        return self.join(*self.nl.taylor(u1, u2, order))

    def taylor_jacobian(self, x, order):
        u1, u2 = self.split(x)
        return _blocks_to_sparse(self.nl.taylor_jacobian(u1, u2, order))

    def full_residual(self, x, lam):
        """(L0 - lam L1) x - lam r(x), the unsymmetrized discrete equation."""
        return self.L0 @ x - lam * (self.L1 @ x) - lam * self.r(x)

    def full_jacobian(self, x, lam):
        return (self.L0 - lam * self.L1 - lam * self.r_jacobian(x)).tocsc()

    def full_lambda_derivative(self, x):
        return -(self.L1 @ x) - self.r(x)

    def fredholm_system(self):
        lam0, B1, M = self.lambda0, self.B1, self.M

        def nonlinearity(x, eps):
            return eps * (B1 @ x) + (lam0 + eps) * (M @ self.r(x))

        def jacobian(x, eps):
            return (eps * B1 + (lam0 + eps) * (M @ self.r_jacobian(x))).tocsc()

        return FredholmSystem(self.B, nonlinearity, jacobian)

    # --- kernel -------------------------------------------------------------

    @cached_property
    def kernel(self):
        """phi = e_i = c_- (x) e_i, psi = w e_i, z = B1 e_i, gamma = w B1 e_i."""
        c = self.spectrum.c_minus
        w = self.grid.weight
        phi = np.column_stack([np.concatenate([c[0] * p.e, c[1] * p.e]) for p in self.cluster])
        z = self.B1 @ phi
        return KernelBasis(phi, w * phi, w * z, z, singular_values=np.zeros(self.n))

    def kernel_residual(self):
        """Relative size of B e_i, which vanishes up to the Dirichlet eigen-solve accuracy."""
        res = self.B @ self.kernel.phi
        scale = abs(self.B).sum(axis=1).max() * np.abs(self.kernel.phi).max()
        return float(np.abs(res).max() / scale)

    def padded(self, x):
        """Full-grid potentials (phi, psi) including boundary nodes."""
        u1, u2 = self.split(x)
        phi = self.grid.pad(u1 + self.trivial.phi0, self.trivial.phi0)
        psi = self.grid.pad(u2 + self.trivial.psi0, self.trivial.psi0)
        return phi, psi

    def amplitude(self, x):
        """Discrete L2 norm of u = (u1, u2)."""
        return float(np.sqrt(self.grid.weight * np.dot(x, x)))


def _blocks_to_sparse(blocks):
    j11, j12, j21, j22 = (sp.diags(b) for b in blocks)
    return sp.bmat([[j11, j12], [j21, j22]], format="csr")


def build_problem(grid, species, profiles, params, **kw):
    return BifurcationProblem(grid, species, profiles, params, **kw)

"""Exception hierarchy shared by all branchkit modules."""


class BranchkitError(Exception):
    """Base class for every error raised by branchkit."""


class AmbiguousKernel(BranchkitError):
    """A singular value sits too close to the kernel threshold to decide n."""


class SingularBordered(BranchkitError):
    """The bordered operator could not be factorized."""


class NoConvergence(BranchkitError):
    """A Newton or fixed-point iteration failed to converge."""


class NeumannDivergence(BranchkitError):
    """The estimate of ||Gamma R_x(0, eps)|| is not safely below one."""


class NotPotential(BranchkitError):
    """A symmetric-matrix argument was requested for a non-symmetric family."""


class WindowAmbiguity(BranchkitError):
    """Eigenvalues straddle the counting window boundary."""


class ConditionBViolated(BranchkitError):
    """The block-asymptotic structure required for eigenvalue asymptotics fails."""


class SolverFailure(BranchkitError):
    """A linear or eigen solve did not meet its residual tolerance."""


class DegenerateL1(BranchkitError):
    """The 2x2 linearization block has (numerically) coinciding eigenvalues."""


class NotSymmetrizable(BranchkitError):
    """Exactly one of T2, T3 vanishes, so no diagonal symmetrizer exists."""


class PositivityViolation(BranchkitError):
    """chi_minus >= 0 or lambda0 <= 0."""


class NeutralityError(BranchkitError):
    """Charge or current density of the trivial state does not vanish."""


class GateFailure(BranchkitError):
    """An admissibility gate (C, D, I, II, N >= 3) rejected the configuration."""

    def __init__(self, gate, message):
        super().__init__(f"gate {gate} failed: {message}")
        self.gate = gate
        self.reason = message


class StepFailure(BranchkitError):
    """Continuation could not take a step; carries the last converged point."""

    def __init__(self, message, last_good=None):
        super().__init__(message)
        self.last_good = last_good


class ConfigError(BranchkitError):
    """Run configuration failed validation."""

"""Trivial state (constant potentials) and the charge/current neutrality it requires."""

from dataclasses import dataclass

import numpy as np

from ..errors import NeutralityError


@dataclass(frozen=True)
class TrivialState:
    phi0: float
    psi0: float
    u01: float
    u02: float
    species_densities: tuple = ()


def boundary_potentials(u01, u02, params):
    """phi0 = -(2 alpha q / m) u01 and psi0 = (q / (m c)) u02."""
    phi0 = -2 * params.alpha * params.q / params.m * u01
    psi0 = params.q / (params.m * params.c) * u02
    return float(phi0), float(psi0)


def _densities(species, profiles, phi0, psi0, params):
    return tuple(float(prof(params.a * s.l * phi0 + params.b * s.k * psi0))
                 for s, prof in zip(species, profiles))


@dataclass(frozen=True)
class NeutralityReport:
    ok: bool
    charge: float
    current: float
    scale: float

    def __bool__(self):
        return self.ok


def neutrality_sums(species, densities, params, beta=None):
    """(sum q_k A_k, sum q_k (beta_k, d) A_k, scale) at the given densities."""
    q = np.array([s.q for s in species])
    dens = np.asarray(densities, dtype=float)
    if beta is None:
        p = np.array([params.beta_dot(s) for s in species])
    else:
        p = np.array([float(np.dot(bv, params.drift)) for bv in beta])
    scale = float(np.sum(np.abs(q * dens)) + np.sum(np.abs(q * p * dens)))
    return float(np.sum(q * dens)), float(np.sum(q * p * dens)), scale


def neutrality_check(trivial, species, profiles, params, beta=None, rtol=1e-10):
    dens = trivial.species_densities or _densities(species, profiles, trivial.phi0,
                                                   trivial.psi0, params)
    charge, current, scale = neutrality_sums(species, dens, params, beta)
    tol = rtol * max(scale, 1e-300)
    ok = abs(charge) <= tol and abs(current) <= tol
    return NeutralityReport(bool(ok), charge, current, scale)


def trivial_state(u01, u02, params, species=None, profiles=None, beta=None, check=True):
    """Constant solution fixed by the boundary data; raises NeutralityError if it is not neutral."""
    phi0, psi0 = boundary_potentials(u01, u02, params)
    dens = ()
    if species is not None and profiles is not None:
        dens = _densities(species, profiles, phi0, psi0, params)
    state = TrivialState(phi0, psi0, float(u01), float(u02), dens)
    if check and dens:
        rep = neutrality_check(state, species, profiles, params, beta)
        if not rep:
            raise NeutralityError(f"charge sum {rep.charge:.3e}, current sum {rep.current:.3e} "
                                  f"(scale {rep.scale:.3e})")
    return state


def neutral_density_scales(species, profiles, trivial_phi0, trivial_psi0, params, beta=None):
    """Factors n_k (n_1 = 1) so that the scaled profiles n_k A_k are neutral at the trivial state.

    Solves the two neutrality equations for the remaining factors; with more
    than three species the minimum-norm correction about n_k = 1 is returned.
    """
    dens = np.array(_densities(species, profiles, trivial_phi0, trivial_psi0, params))
    q = np.array([s.q for s in species])
    if beta is None:
        p = np.array([params.beta_dot(s) for s in species])
    else:
        p = np.array([float(np.dot(bv, params.drift)) for bv in beta])
    rows = np.vstack([q * dens, q * p * dens])
    rhs = -rows[:, 0]
    sub = rows[:, 1:]
    if sub.shape[1] < 2:
        raise NeutralityError("need at least three species to balance charge and current")
    base = np.ones(sub.shape[1])
    corr, *_ = np.linalg.lstsq(sub, rhs - sub @ base, rcond=None)
    scales = np.concatenate([[1.0], base + corr])
    if np.linalg.norm(rows @ scales) > 1e-10 * np.abs(rows).sum():
        raise NeutralityError("neutrality equations are inconsistent for these species")
    if np.any(scales <= 0):
        raise NeutralityError(f"neutral densities need a nonpositive scale: {scales}")
    return scales

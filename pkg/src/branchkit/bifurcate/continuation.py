"""Pseudo-arclength continuation of F(x, lam) = 0 with a bordered sparse Newton corrector."""

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from ..errors import StepFailure


@dataclass(frozen=True)
class BranchPoint:
    lam: float
    amplitude: float
    signed_amplitude: float
    residual: float
    x: np.ndarray = field(repr=False)
    fields: object = field(default=None, repr=False)


@dataclass
class Branch:
    points: list
    origin: float
    direction: str = "undetermined"
    label: str = ""

    def lambdas(self):
        return np.array([p.lam for p in self.points])

    def amplitudes(self):
        return np.array([p.amplitude for p in self.points])

    def signed_amplitudes(self):
        return np.array([p.signed_amplitude for p in self.points])


def classify_direction(lams, amps, origin, count=5):
    """Sign of d(lam)/d(amp^2) from a least-squares fit through the origin over the first points."""
    lams = np.asarray(lams, dtype=float)[:count]
    amps = np.asarray(amps, dtype=float)[:count]
    a2 = amps**2
    if lams.size == 0 or not np.any(a2 > 0):
        return "undetermined"
    kappa = float(np.dot(a2, lams - origin) / np.dot(a2, a2))
    if kappa > 0:
        return "supercritical"
    if kappa < 0:
        return "subcritical"
    return "undetermined"


def fit_exponent(branch, origin=None, decades=1.0):
    """Slope of log(amplitude) against log|lam - origin| over the first ``decades`` of distance."""
    origin = branch.origin if origin is None else origin
    dist = np.abs(branch.lambdas() - origin)
    amps = branch.amplitudes()
    keep = (dist > 0) & (amps > 0)
    dist, amps = dist[keep], amps[keep]
    if dist.size < 2:
        raise ValueError("need at least two off-origin points to fit an exponent")
    window = dist <= dist.min() * 10**decades
    if window.sum() < 2:
        raise ValueError("fewer than two points inside the fit window")
    return float(np.polyfit(np.log(dist[window]), np.log(amps[window]), 1)[0])


def _bordered(jx, jl, tx, tl, w):
    n = jx.shape[0]
    top = sp.hstack([sp.csc_matrix(jx), sp.csc_matrix(jl.reshape(n, 1))])
    bottom = sp.csc_matrix(np.concatenate([w * tx, [tl]]).reshape(1, n + 1))
    return sp.vstack([top, bottom], format="csc")


def _tnorm(tx, tl, w):
    return np.sqrt(w * np.dot(tx, tx) + tl * tl)


def initial_tangent(jx, jl, c_x, c_l, w=1.0):
    """Null vector of [F_x F_lam] fixed by the bordering row (w c_x, c_l)."""
    n = jx.shape[0]
    mat = _bordered(jx, jl, c_x, c_l, w)
    rhs = np.zeros(n + 1)
    rhs[-1] = 1.0
    sol = spla.splu(mat).solve(rhs)
    tx, tl = sol[:n], sol[n]
    nrm = _tnorm(tx, tl, w)
    return tx / nrm, tl / nrm


def newton_point(residual, jac_x, x0, lam, tol, max_iter=30):
    """Plain Newton in x at fixed lam; returns (x, residual norm)."""
    x = np.array(x0, dtype=float)
    for _ in range(max_iter):
        f = residual(x, lam)
        res = float(np.max(np.abs(f)))
        if res <= tol:
            return x, res
        x = x + spla.spsolve(sp.csc_matrix(jac_x(x, lam)), -f)
    f = residual(x, lam)
    res = float(np.max(np.abs(f)))
    if res <= tol:
        return x, res
    raise StepFailure(f"Newton at fixed lambda did not converge (residual {res:.3e})")


def pseudo_arclength(residual, jac_x, jac_lam, x0, lam0, tangent, ds, steps, tol=1e-10,
                     weight=1.0, ds_min=None, ds_max=None, max_iter=12, callback=None):
    """March ``steps`` points along the solution curve through (x0, lam0).

    ``tangent`` = (tx, tl) sets the initial direction. The step length is
    halved on corrector failure and grown after easy steps; StepFailure is
    raised (with the last converged point) when it falls below ``ds_min``.
    Returns a list of (x, lam, residual) including the start point.
    """
    ds_min = ds * 1e-4 if ds_min is None else ds_min
    ds_max = ds * 4 if ds_max is None else ds_max
    x, lam = np.array(x0, dtype=float), float(lam0)
    tx, tl = tangent
    nrm = _tnorm(tx, tl, weight)
    tx, tl = tx / nrm, tl / nrm
    f0 = residual(x, lam)
    out = [(x.copy(), lam, float(np.max(np.abs(f0))))]
    h = ds
    n = x.size
    while len(out) <= steps:
        xp, lp = x + h * tx, lam + h * tl
        ok = False
        for it in range(max_iter):
            f = residual(xp, lp)
            arc = weight * np.dot(tx, xp - x) + tl * (lp - lam) - h
            res = float(np.max(np.abs(f)))
            if not np.isfinite(res):
                break
            if res <= tol and abs(arc) <= tol * max(1.0, h):
                ok = True
                break
            mat = _bordered(jac_x(xp, lp), jac_lam(xp, lp), tx, tl, weight)
            try:
                d = spla.splu(mat).solve(-np.concatenate([f, [arc]]))
            except RuntimeError:
                break
            xp, lp = xp + d[:n], lp + d[n]
        if not ok:
            h *= 0.5
            if h < ds_min:
                raise StepFailure(f"step length fell below {ds_min:.3e} at lambda={lam:.6g}",
                                  last_good=(x, lam))
            continue
        # new tangent from the bordered system at the accepted point, keeping orientation
        mat = _bordered(jac_x(xp, lp), jac_lam(xp, lp), tx, tl, weight)
        rhs = np.zeros(n + 1)
        rhs[-1] = 1.0
        t = spla.splu(mat).solve(rhs)
        ntx, ntl = t[:n], t[n]
        nrm = _tnorm(ntx, ntl, weight)
        ntx, ntl = ntx / nrm, ntl / nrm
        if weight * np.dot(ntx, tx) + ntl * tl < 0:
            ntx, ntl = -ntx, -ntl
        x, lam, tx, tl = xp, lp, ntx, ntl
        out.append((x.copy(), lam, res))
        if callback is not None:
            callback(x, lam)
        if it <= 3:
            h = min(h * 1.5, ds_max)
    return out


def trivial_branch(lams, size, origin, residual):
    """Points of the trivial branch (amplitude zero) at the given lambdas."""
    pts = []
    for lam in lams:
        x = np.zeros(size)
        res = float(np.max(np.abs(residual(x, lam))))
        pts.append(BranchPoint(float(lam), 0.0, 0.0, res, x))
    return Branch(pts, origin, "trivial", "trivial")

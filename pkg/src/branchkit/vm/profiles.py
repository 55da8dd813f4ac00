"""Velocity-integrated densities A(s) as functions of the scalar ansatz argument.

Every profile exposes ``derivative(s, k)`` (k = 0 is the value). Users supply
A directly; the Maxwellian helper gives the closed form for a Gaussian f.
"""

import csv
from dataclasses import dataclass
from math import factorial

import numpy as np
from scipy.interpolate import CubicHermiteSpline


class DensityProfile:
    kind = "abstract"
    max_order = 3

    def __call__(self, s):
        return self.derivative(s, 0)

    def derivative(self, s, k):
        raise NotImplementedError

    def lowest_nonlinear_order(self, s0, tol=1e-14, limit=None):
        """Smallest i >= 2 with A^(i)(s0) != 0 (``limit + 1`` if none up to ``limit``)."""
        limit = self.max_order if limit is None else limit
        scale = max(abs(float(self.derivative(s0, 1))), abs(float(self.derivative(s0, 0))), 1.0)
        for i in range(2, limit + 1):
            if abs(float(self.derivative(s0, i))) > tol * scale:
                return i
        return limit + 1

    def is_increasing(self, s):
        return bool(np.all(np.asarray(self.derivative(s, 1)) > 0))

    def scaled(self, factor):
        return _Scaled(self, factor)


@dataclass(frozen=True)
class ExponentialProfile(DensityProfile):
    """A(s) = scale * exp(s)."""

    scale: float = 1.0
    kind = "exponential"
    max_order = 64

    def derivative(self, s, k):
        return self.scale * np.exp(s)


@dataclass(frozen=True)
class PolynomialProfile(DensityProfile):
    """A(s) = sum_j taylor[j] (s - center)^j / j!  (taylor[j] is the j-th derivative at center)."""

    center: float
    taylor: tuple
    kind = "polynomial"

    @property
    def max_order(self):
        return max(len(self.taylor) - 1, 3)

    def derivative(self, s, k):
        s = np.asarray(s, dtype=float) - self.center
        out = np.zeros_like(s)
        for j in range(k, len(self.taylor)):
            out = out + self.taylor[j] * s ** (j - k) / factorial(j - k)
        return out


class TabulatedProfile(DensityProfile):
    """Table of (s, A, A', A'', A''') interpolated with cubic Hermite splines."""

    kind = "tabulated-with-derivatives"

    def __init__(self, s, a0, a1, a2, a3):
        self.table = tuple(np.asarray(v, dtype=float) for v in (s, a0, a1, a2, a3))
        s = self.table[0]
        if np.any(np.diff(s) <= 0):
            raise ValueError("tabulated s must be strictly increasing")
        self._splines = [CubicHermiteSpline(s, self.table[i + 1], self.table[i + 2])
                         for i in range(3)]

    @classmethod
    def from_csv(cls, path):
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
        cols = {key: np.array([float(r[key]) for r in rows]) for key in ("s", "A", "A1", "A2", "A3")}
        return cls(cols["s"], cols["A"], cols["A1"], cols["A2"], cols["A3"])

    def derivative(self, s, k):
        s_tab = self.table[0]
        s = np.asarray(s, dtype=float)
        if np.any((s < s_tab[0]) | (s > s_tab[-1])):
            raise ValueError("argument outside the tabulated range")
        if k < 3:
            return self._splines[k](s)
        if k == 3:
            return np.interp(s, s_tab, self.table[4])
        return np.zeros_like(s)


@dataclass(frozen=True)
class _Scaled(DensityProfile):
    base: DensityProfile
    factor: float

    @property
    def kind(self):
        return self.base.kind

    @property
    def max_order(self):
        return self.base.max_order

    def derivative(self, s, k):
        return self.factor * self.base.derivative(s, k)


def maxwellian_profile(species, a=1.0, b=1.0, density=1.0):
    """Exponential profile of f = density * exp(a(-alpha v^2 + phi) + b(d.v + psi)).

    Integrating the Gaussian over velocity gives
    A(s) = density (pi / (a alpha))^(3/2) exp(b^2 |d|^2 / (4 a alpha)) e^s.
    """
    aa = a * species.alpha
    if aa <= 0:
        raise ValueError("a * alpha must be positive for a normalizable Maxwellian")
    d2 = float(np.dot(species.drift, species.drift))
    const = (np.pi / aa) ** 1.5 * np.exp(b * b * d2 / (4 * aa))
    return ExponentialProfile(density * const)


def cubic_profile(center, value, slope, third):
    """Profile with A''(center) = 0, so the lowest nonlinear order is 3."""
    return PolynomialProfile(float(center), (float(value), float(slope), 0.0, float(third)))


def profile_from_config(spec, center=0.0, base_dir=None):
    """Build a profile from a config mapping (``kind`` plus parameters)."""
    kind = spec.get("kind", "exponential")
    if kind == "exponential":
        return ExponentialProfile(float(spec.get("scale", 1.0)))
    if kind == "polynomial":
        return PolynomialProfile(float(spec.get("center", center)),
                                 tuple(float(v) for v in spec["taylor"]))
    if kind == "tabulated-with-derivatives":
        import os
        path = spec["file"]
        if base_dir and not os.path.isabs(path):
            path = os.path.join(base_dir, path)
        return TabulatedProfile.from_csv(path)
    raise ValueError(f"unknown profile kind {kind!r}")

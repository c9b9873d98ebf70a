"""Slowly-varying perturbations appearing in the quantile representations.

The workhorse family is parametric, ``c * u**beta`` with beta > 0: its sup
over (0, x] and the representation integral over t are closed forms, which
makes the second-order conditions computable exactly.  Arbitrary callables are
accepted behind the same interface with grid/quadrature numerics.
"""

from __future__ import annotations

import numpy as np
from scipy.integrate import quad

from .errors import DomainError


class SlowVaryFn:
    """Vanishing perturbation p(u) -> 0 as u -> 0."""

    is_zero = False

    def __call__(self, u):
        raise NotImplementedError

    def value_from_log(self, log_u):
        """p(u) evaluated from log(u); safe for u underflowing float64."""
        raise NotImplementedError

    def sup_abs(self, x: float) -> float:
        """sup of |p(u)| over 0 < u <= x."""
        raise NotImplementedError

    def integral_over_t(self, u, log_u=None):
        """Integral of p(t)/t for t from u to 1."""
        raise NotImplementedError


class PowerPerturbation(SlowVaryFn):
    """p(u) = c * u**beta, beta > 0.

    sup_{0<u<=x} |p(u)| = |c| x**beta and the integral of p(t)/t over [u, 1]
    is c (1 - u**beta) / beta.
    """

    def __init__(self, c: float, beta: float = 1.0):
        beta = float(beta)
        if not np.isfinite(beta) or beta <= 0.0:
            raise DomainError(f"perturbation exponent beta must be > 0, got {beta}")
        self.c = float(c)
        self.beta = beta
        self.is_zero = self.c == 0.0

    def __call__(self, u):
        return self.c * np.power(u, self.beta)

    def value_from_log(self, log_u):
        return self.c * np.exp(self.beta * np.asarray(log_u, dtype=np.float64))

    def sup_abs(self, x: float) -> float:
        if x < 0.0:
            raise DomainError("sup endpoint must be >= 0")
        return abs(self.c) * x**self.beta

    def integral_over_t(self, u, log_u=None):
        if log_u is not None:
            ub = np.exp(self.beta * np.asarray(log_u, dtype=np.float64))
        else:
            ub = np.power(u, self.beta)
        return self.c * (1.0 - ub) / self.beta

    def __repr__(self):
        return f"PowerPerturbation(c={self.c:g}, beta={self.beta:g})"


#: the exact-representation case p == 0
ZERO = PowerPerturbation(0.0, 1.0)


class CallablePerturbation(SlowVaryFn):
    """Wrap an arbitrary vanishing callable; sup and integral are numeric.

    The sup is taken over a 512-point logarithmic grid down to u = 1e-12,
    the integral by adaptive quadrature.  Use PowerPerturbation when closed
    forms matter.
    """

    _GRID = 512

    def __init__(self, fn, name: str = "callable"):
        self.fn = fn
        self.name = name

    def __call__(self, u):
        u = np.asarray(u, dtype=np.float64)
        return np.vectorize(self.fn, otypes=[np.float64])(u) if u.ndim else float(self.fn(float(u)))

    def value_from_log(self, log_u):
        return self(np.exp(np.asarray(log_u, dtype=np.float64)))

    def sup_abs(self, x: float) -> float:
        if x <= 0.0:
            return 0.0
        grid = np.exp(np.linspace(np.log(1e-12), np.log(x), self._GRID))
        return float(np.max(np.abs(self(grid))))

    def integral_over_t(self, u, log_u=None):
        scalar = np.isscalar(u)
        uu = np.atleast_1d(np.asarray(u, dtype=np.float64))
        out = np.empty_like(uu)
        for i, ui in enumerate(uu):
            out[i] = quad(lambda t: self.fn(t) / t, ui, 1.0, epsrel=1e-10, limit=200)[0]
        return float(out[0]) if scalar else out

"""Quantile-representation models of the log-data distribution.

Each model describes G^{-1}(1 - u) = log F^{-1}(1 - u), the upper quantile of
the logs, through the classical representations of the three extremal
domains:

* heavy tails (Frechet):  log c + log(1 + p(u)) - gamma log u + I_b(u)
* light tails (Gumbel):   d - s(u) + integral_u^1 s(t)/t dt,
                          s(u) = c (1 + p(u)) exp(I_b(u))
* bounded tails (Weibull): y0 - c (1 + p(u)) u^gamma exp(I_b(u))
* generalized Pareto with shape gamma

where I_b(u) is the integral of b(t)/t over [u, 1] and p, b vanish at 0.
Setting p = b = 0, c = 1 in the Frechet model gives the exact Pareto case
G^{-1}(1 - u) = -gamma log u, the calibration anchor for all Monte Carlo
gates.

Also here: the exact samplers (iid logs, bottom uniform order statistics via
exponential spacings, Malmquist spacings) and the key=value model-spec parser
shared with the CLI.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.integrate import quad

from .errors import ConfigError, DataError, DomainError, ModelValidityError
from .rng import as_generator
from .varying import ZERO, PowerPerturbation, SlowVaryFn

_VALIDATION_GRID = np.exp(np.linspace(np.log(1e-12), np.log(0.999999), 257))


def _validate_perturbation(p: SlowVaryFn, what: str):
    vals = np.asarray(p(_VALIDATION_GRID), dtype=np.float64)
    if np.any(~np.isfinite(vals)) or np.any(np.abs(vals) >= 1.0):
        raise ModelValidityError(
            f"|{what}(u)| must stay below 1 on (0, 1) so log(1 + {what}(u)) exists"
        )


def _as_u_arrays(u, log_u):
    """Normalize (u, log_u) input; u may underflow to 0 when log_u is given."""
    if log_u is not None:
        log_u = np.asarray(log_u, dtype=np.float64)
        if np.any(log_u >= 0.0):
            raise DomainError("log_u must be negative (u in (0,1))")
        return np.exp(log_u), log_u
    u = np.asarray(u, dtype=np.float64)
    if np.any(u <= 0.0) or np.any(u >= 1.0):
        raise DomainError("u must lie strictly inside (0, 1)")
    return u, np.log(u)


@dataclass(frozen=True)
class FrechetKaramata:
    """Heavy-tail representation with index gamma > 0."""

    gamma: float
    c: float = 1.0
    p: SlowVaryFn = field(default=ZERO)
    b: SlowVaryFn = field(default=ZERO)

    domain = "frechet"

    def __post_init__(self):
        if self.gamma <= 0.0:
            raise ModelValidityError(f"frechet model needs gamma > 0, got {self.gamma}")
        if self.c <= 0.0:
            raise ModelValidityError(f"frechet model needs c > 0, got {self.c}")
        _validate_perturbation(self.p, "p")

    def quantile_logf(self, u=None, log_u=None):
        u, log_u = _as_u_arrays(u, log_u)
        pu = self.p.value_from_log(log_u)
        if np.any(1.0 + pu <= 0.0):
            raise ModelValidityError("1 + p(u) <= 0 at a requested quantile")
        return (np.log(self.c) + np.log1p(pu)
                - self.gamma * log_u
                + self.b.integral_over_t(u, log_u=log_u))

    def oracle_scale(self, n: int, k: int) -> float:
        return self.gamma

    def spec_string(self) -> str:
        return _spec_string("frechet", gamma=self.gamma, c=self.c, p=self.p, b=self.b)


@dataclass(frozen=True)
class GumbelDeHaan:
    """Light-tail representation; the auxiliary scale s(u) has its own
    Karamata form and s(k/n) is the oracle studentization scale."""

    d: float
    c: float = 1.0
    p: SlowVaryFn = field(default=ZERO)
    b: SlowVaryFn = field(default=ZERO)

    domain = "gumbel"

    def __post_init__(self):
        if self.c <= 0.0:
            raise ModelValidityError(f"gumbel model needs c > 0, got {self.c}")
        _validate_perturbation(self.p, "p")

    def s(self, u, log_u=None):
        if log_u is None:
            u, log_u = _as_u_arrays(u, None)
        pu = self.p.value_from_log(log_u)
        return self.c * (1.0 + pu) * np.exp(self.b.integral_over_t(u, log_u=log_u))

    def _s_integral(self, u, log_u):
        """integral of s(t)/t over [u, 1]."""
        if getattr(self.b, "is_zero", False):
            # s(t) = c (1 + p(t)): the integral splits into -c log u plus the
            # perturbation integral, both closed-form for the power family
            base = -self.c * log_u
            if self.p.is_zero:
                return base
            return base + self.c * self.p.integral_over_t(u, log_u=log_u)
        scalar = np.ndim(u) == 0
        uu = np.atleast_1d(u)
        out = np.empty(uu.shape, dtype=np.float64)
        for i, ui in enumerate(uu.ravel()):
            if ui <= 0.0:
                raise DomainError("de Haan integral needs u > 0 when s varies")
            out.ravel()[i] = quad(lambda t: float(self.s(np.asarray(t))) / t,
                                  ui, 1.0, epsrel=1e-10, limit=500)[0]
        return out[0] if scalar else out

    def quantile_logf(self, u=None, log_u=None):
        u, log_u = _as_u_arrays(u, log_u)
        return self.d - self.s(u, log_u=log_u) + self._s_integral(u, log_u)

    def oracle_scale(self, n: int, k: int) -> float:
        return float(self.s(np.float64(k / n)))

    def spec_string(self) -> str:
        return _spec_string("gumbel", d=self.d, c=self.c, p=self.p, b=self.b)


@dataclass(frozen=True)
class WeibullKaramata:
    """Bounded-tail representation with upper endpoint y0 for the logs."""

    gamma: float
    y0: float = 0.0
    c: float = 1.0
    p: SlowVaryFn = field(default=ZERO)
    b: SlowVaryFn = field(default=ZERO)

    domain = "weibull"

    def __post_init__(self):
        if self.gamma <= 0.0:
            raise ModelValidityError(f"weibull model needs gamma > 0, got {self.gamma}")
        if self.c <= 0.0:
            raise ModelValidityError(f"weibull model needs c > 0, got {self.c}")
        _validate_perturbation(self.p, "p")

    def quantile_logf(self, u=None, log_u=None):
        u, log_u = _as_u_arrays(u, log_u)
        pu = self.p.value_from_log(log_u)
        if np.any(1.0 + pu <= 0.0):
            raise ModelValidityError("1 + p(u) <= 0 at a requested quantile")
        gap = (self.c * (1.0 + pu) * np.exp(self.gamma * log_u)
               * np.exp(self.b.integral_over_t(u, log_u=log_u)))
        return self.y0 - gap

    def oracle_scale(self, n: int, k: int):
        return None  # studentization theory covers heavy/light tails only

    def spec_string(self) -> str:
        return _spec_string("weibull", gamma=self.gamma, y0=self.y0, c=self.c,
                            p=self.p, b=self.b)


def gpd_quantile(gamma: float, q) -> np.ndarray:
    """Quantile of the generalized Pareto law exp(-(1 + gamma x)^(-1/gamma)).

    gamma = 0 is read as the exponent degenerating to exp(-x) (Gumbel), whose
    quantile is -log(-log q).
    """
    q = np.asarray(q, dtype=np.float64)
    if np.any(q <= 0.0) or np.any(q >= 1.0):
        raise DomainError("GPD quantile needs q strictly inside (0, 1)")
    ell = -np.log(q)
    if gamma == 0.0:
        out = -np.log(ell)
    else:
        out = (np.power(ell, -gamma) - 1.0) / gamma
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class GpdModel:
    """The log data follow the generalized Pareto law itself.

    Useful as an exactly-invertible sampling family.  Only gamma = 0 yields
    data in a covered estimation domain (light tails, auxiliary scale -> 1);
    for gamma > 0 the logs are already heavy-tailed, putting the data beyond
    the heavy-tail domain, so the studentization theory does not apply.
    """

    gamma: float

    @property
    def domain(self) -> Optional[str]:
        return "gumbel" if self.gamma == 0.0 else None

    def quantile_logf(self, u=None, log_u=None):
        u, log_u = _as_u_arrays(u, log_u)
        # q = 1 - u; for gamma != 0 the quantile needs (-log(1-u))^(-gamma)
        ell = -np.log1p(-u)
        if self.gamma == 0.0:
            return -np.log(ell)
        return (np.power(ell, -self.gamma) - 1.0) / self.gamma

    def oracle_scale(self, n: int, k: int):
        if self.gamma == 0.0:
            # exact auxiliary scale of the Gumbel quantile at u = k/n
            u = k / n
            return u / ((1.0 - u) * (-math.log1p(-u)))
        return None

    def spec_string(self) -> str:
        return f"model=gpd gamma={self.gamma:g}"


TailModel = (FrechetKaramata, GumbelDeHaan, WeibullKaramata, GpdModel)


def quantile_logF(model, u=None, log_u=None):
    """G^{-1}(1 - u) for any model; pass log_u for u below float64 range."""
    return model.quantile_logf(u=u, log_u=log_u)


# ---------------------------------------------------------------------------
# samplers
# ---------------------------------------------------------------------------

def sample_iid(model, n: int, rng) -> np.ndarray:
    """n iid draws of Y = log X through the uniform representation."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    gen = as_generator(rng)
    u = gen.random(n)
    # keep u strictly inside (0, 1); random() can return exactly 0
    tiny = np.finfo(np.float64).tiny
    np.maximum(u, tiny, out=u)
    return np.asarray(model.quantile_logf(u=u), dtype=np.float64)


def sample_top_uniform_order_stats(n: int, k: int, rng) -> np.ndarray:
    """Bottom k+1 uniform order statistics U_{1,n} < ... < U_{k+1,n}.

    Renyi construction: with Gamma_j the running sum of iid standard
    exponentials, (Gamma_1, ..., Gamma_{k+1}) / Gamma_{n+1} has the joint law
    of the bottom order statistics, and the remaining n - k exponentials
    collapse into a single gamma(n - k) draw.  O(k) work per call.
    """
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    if k + 1 > n:
        raise DomainError(f"need k + 1 <= n, got k={k}, n={n}")
    gen = as_generator(rng)
    walk = np.cumsum(gen.standard_exponential(k + 1))
    total = walk[-1] + gen.standard_gamma(n - k)
    return walk / total


def malmquist_spacings(uniform_order_stats, k: int) -> np.ndarray:
    """s_j = j log(U_{j+1,n} / U_{j,n}) for j = 1..k: iid standard exponentials.

    This identity is what turns every spacing statistic here into a weighted
    sum of independent exponentials.
    """
    u = np.asarray(uniform_order_stats, dtype=np.float64)
    if u.ndim != 1 or u.size < k + 1:
        raise DataError(f"need at least k+1={k + 1} order statistics, got {u.size}")
    if np.any(u <= 0.0) or np.any(u >= 1.0):
        raise DataError("order statistics must lie in (0, 1)")
    head = u[:k + 1]
    if np.any(np.diff(head) <= 0.0):
        raise DataError("order statistics must be strictly ascending")
    j = np.arange(1, k + 1, dtype=np.float64)
    return j * np.diff(np.log(head))


# ---------------------------------------------------------------------------
# model-spec grammar (shared with the CLI)
# ---------------------------------------------------------------------------

def _spec_string(kind, p=None, b=None, **params) -> str:
    parts = [f"model={kind}"]
    for key, val in params.items():
        parts.append(f"{key}={val:g}")
    for tag, pert in (("p", p), ("b", b)):
        if isinstance(pert, PowerPerturbation):
            parts.append(f"{tag}.c={pert.c:g}")
            parts.append(f"{tag}.beta={pert.beta:g}")
        elif pert is not None:
            parts.append(f"{tag}=<callable>")
    return " ".join(parts)


def parse_model_spec(text: str):
    """Build a model from the flat key=value grammar.

    Example: ``model=frechet gamma=0.5 c=1 p.c=0 p.beta=1 b.c=0 b.beta=1``.
    """
    fields = {}
    for token in text.split():
        if "=" not in token:
            raise ConfigError(f"model spec token {token!r} is not key=value")
        key, _, val = token.partition("=")
        fields[key.strip()] = val.strip()
    kind = fields.pop("model", None)
    if kind is None:
        raise ConfigError("model spec must name a variant: model=frechet|gumbel|weibull|gpd")

    def fnum(key, default=None):
        if key not in fields:
            if default is None:
                raise ConfigError(f"model spec for {kind!r} is missing {key}=")
            return default
        try:
            return float(fields.pop(key))
        except ValueError as exc:
            raise ConfigError(f"bad numeric value for {key}: {exc}") from None

    def pert(tag):
        c = fnum(f"{tag}.c", 0.0)
        beta = fnum(f"{tag}.beta", 1.0)
        return PowerPerturbation(c, beta)

    try:
        if kind == "frechet":
            model = FrechetKaramata(gamma=fnum("gamma"), c=fnum("c", 1.0),
                                    p=pert("p"), b=pert("b"))
        elif kind == "gumbel":
            model = GumbelDeHaan(d=fnum("d", 0.0), c=fnum("c", 1.0),
                                 p=pert("p"), b=pert("b"))
        elif kind == "weibull":
            model = WeibullKaramata(gamma=fnum("gamma"), y0=fnum("y0", 0.0),
                                    c=fnum("c", 1.0), p=pert("p"), b=pert("b"))
        elif kind == "gpd":
            model = GpdModel(gamma=fnum("gamma"))
        else:
            raise ConfigError(f"unknown model variant {kind!r}")
    except (DomainError, ModelValidityError) as exc:
        raise ConfigError(f"invalid model spec: {exc}") from exc
    if fields:
        raise ConfigError(f"unknown model spec keys: {sorted(fields)}")
    return model

"""The weighted spacing statistic and its studentized forms.

The statistic is T_n(f) = sum_{j=1}^{k} f(j) (Y_{n-j+1,n} - Y_{n-j,n}) over
the log order statistics Y of the data, j = 1 pairing the two largest
values.  f(j) = j divided by k is the Hill estimator.  Studentizations:

* gumbel domain:  (T_n - a_n s) / (sigma_n s)   with s the auxiliary scale
* frechet domain: (a_n / sigma_n) (T_n / a_n - gamma)

which converge to N(0,1) / N(0, gamma^2) when the sup-ratio vanishes and to
the series law (gamma times it) when sum (f(j)/j)^2 converges.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DataError, DomainError, InsufficientDataError, PositivityError
from .norms import NormalizationSet, a_n, normalization_set, sigma_n
from .weights import PowerWeight, WeightFunction

_HILL = PowerWeight(1.0)


@dataclass(frozen=True)
class OrderedSample:
    """Top k+1 log order statistics of a batch, descending."""

    n: int
    k: int
    y_top: np.ndarray  # length k+1, nonincreasing

    def __post_init__(self):
        y = np.asarray(self.y_top, dtype=np.float64)
        if y.shape != (self.k + 1,):
            raise DataError(f"y_top must have length k+1={self.k + 1}, got {y.shape}")
        if not np.all(np.isfinite(y)):
            raise DataError("y_top contains non-finite values")
        if np.any(np.diff(y) > 0.0):
            raise DataError("y_top must be nonincreasing")
        object.__setattr__(self, "y_top", y)

    def spacings(self) -> np.ndarray:
        """Nonnegative log spacings, index j = 1..k (largest pair first)."""
        return -np.diff(self.y_top)


def order_statistics(data: Sequence[float], k: int) -> OrderedSample:
    """Select the top k+1 data values and take logs.

    Ties are kept (their spacings are exactly zero); values <= 0 among the
    top k+1 are rejected since the statistic lives on log scale.
    """
    x = np.asarray(data, dtype=np.float64)
    if x.ndim != 1:
        raise DataError("data must be one-dimensional")
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    if x.size < k + 1:
        raise InsufficientDataError(
            f"need at least k+1={k + 1} observations, got {x.size}"
        )
    top = np.partition(x, x.size - (k + 1))[x.size - (k + 1):]
    top.sort()
    top = top[::-1]
    bad = int(np.sum(top <= 0.0))
    if bad:
        raise PositivityError(
            f"{bad} of the top {k + 1} values are <= 0; log spacings undefined"
        )
    return OrderedSample(n=x.size, k=k, y_top=np.log(top))


def sample_ordered(model, n: int, k: int, rng) -> OrderedSample:
    """Draw the top k+1 log order statistics of a virtual size-n sample.

    Uses the O(k) order-statistic construction and the model quantile, so the
    Monte Carlo harness never materializes n draws.
    """
    from .models import sample_top_uniform_order_stats

    u = sample_top_uniform_order_stats(n, k, rng)
    y = np.asarray(model.quantile_logf(u=u), dtype=np.float64)
    # u ascending => quantile nonincreasing; tolerate zero-length float wobble
    return OrderedSample(n=n, k=k, y_top=y)


def t_n(f: WeightFunction, os: OrderedSample) -> float:
    """The weighted spacing statistic; nonnegative for positive weights."""
    j = np.arange(1, os.k + 1, dtype=np.float64)
    return float(np.dot(f.values(j), os.spacings()))


def hill(os: OrderedSample) -> float:
    """Hill estimator: T_n with weight j, divided by k."""
    return t_n(_HILL, os) / os.k


def studentize(t: float, f: WeightFunction, k: int, domain: str, scale: float) -> float:
    """Center and scale T_n(f) so a pivotal limit emerges.

    scale is the true auxiliary value in simulations (s(k/n) or gamma) or a
    plug-in on data.
    """
    if scale <= 0.0:
        raise DomainError(f"studentization scale must be > 0, got {scale}")
    an, sn = a_n(f, k), sigma_n(f, k)
    if domain == "gumbel":
        return (t - an * scale) / (sn * scale)
    if domain == "frechet":
        return (an / sn) * (t / an - scale)
    raise DomainError(f"unknown studentization domain {domain!r}")


def plugin_scale(os: OrderedSample, domain: str) -> float:
    """Hill plug-in for the unknown studentization scale.

    For heavy tails this is the standard gamma estimate; for the light-tail
    branch the same value targets s(k/n) because the Hill weight has
    a_n = k, matching the centering a_n(f) s(k/n).
    """
    if domain not in ("gumbel", "frechet"):
        raise DomainError(f"unknown studentization domain {domain!r}")
    h = hill(os)
    if h <= 0.0:
        raise DataError("degenerate data: Hill value is zero (all top values tied)")
    return h


def weibull_transform(data: Sequence[float], x0: float) -> np.ndarray:
    """Map a bounded-tail sample to a heavy-tail one: z = 1 / (x0 - x).

    With x0 the upper endpoint, the transformed sample has the same index
    gamma on the heavy-tail side, so the usual estimators apply unchanged.
    """
    x = np.asarray(data, dtype=np.float64)
    if x.size and x0 < float(np.max(x)):
        raise DomainError(f"endpoint x0={x0} is below the sample maximum {np.max(x)}")
    if np.any(x == x0):
        raise DomainError("sample touches the endpoint x0; transform undefined there")
    return 1.0 / (x0 - x)


def process_eval(f_list: Sequence[WeightFunction], os: OrderedSample,
                 domain: str, scale: float) -> np.ndarray:
    """Studentize T_n(f) for a whole weight family in one spacing pass."""
    if len(f_list) == 0:
        return np.empty(0, dtype=np.float64)
    j = np.arange(1, os.k + 1, dtype=np.float64)
    fmat = np.stack([f.values(j) for f in f_list])
    ts = fmat @ os.spacings()
    return np.array([studentize(float(t), f, os.k, domain, scale)
                     for f, t in zip(f_list, ts)])


@dataclass(frozen=True)
class GhpResult:
    """One evaluation of the statistic with its normalizations."""

    t_n: float
    norms: NormalizationSet
    v_gumbel: Optional[float] = None
    v_frechet: Optional[float] = None
    scale_used: Optional[float] = None


def evaluate(f: WeightFunction, os: OrderedSample, domain: Optional[str] = None,
             scale: Optional[float] = None) -> GhpResult:
    """Assemble T_n(f), its constants, and (optionally) studentized values."""
    t = t_n(f, os)
    norms = normalization_set(f, os.k)
    vg = vf = None
    if domain is not None:
        if scale is None:
            scale = plugin_scale(os, domain)
        if domain == "gumbel":
            vg = studentize(t, f, os.k, "gumbel", scale)
        else:
            vf = studentize(t, f, os.k, "frechet", scale)
    return GhpResult(t_n=t, norms=norms, v_gumbel=vg, v_frechet=vf, scale_used=scale)

"""Normalization constants, infinite-series values, and limit covariances.

Everything downstream consumes these: the centering a_n(f) = sum f(j)/j, the
scale sigma_n(f)^2 = sum (f(j)/j)^2, the sup-ratio b_nf that decides between
the Gaussian and the series limit, the infinite sums A(m, f) = sum (f(j)/j)^m,
and the finite-k covariance Gamma_n(f1, f2) with its closed-form power-class
limit.

Summation policy: ascending j, compensated (the compiled kernel uses Neumaier
compensation, the numpy fallback pairwise chunk sums combined with math.fsum).
Ratios f(j)/j are powered directly so intermediates never exceed the result;
this keeps k <= 1e8 with tau <= 16 inside float64 range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .errors import DomainError, DivergentSeriesError, NumericError, UnsupportedWeightError
from .varying import SlowVaryFn
from .weights import PowerWeight, ScaledWeight, TabulatedWeight, WeightFunction, power_exponent

_CHUNK = 1 << 20


def _check_k(k: int) -> int:
    if int(k) != k or k < 1:
        raise DomainError(f"k must be a positive integer, got {k}")
    return int(k)


def _chunked_sum(term_fn, k: int, start: int = 1) -> float:
    """sum_{j=start}^{k} term_fn(j) for vectorized term_fn, compensated."""
    partials = []
    j0 = start
    while j0 <= k:
        j1 = min(j0 + _CHUNK - 1, k)
        j = np.arange(j0, j1 + 1, dtype=np.float64)
        partials.append(float(np.sum(term_fn(j))))
        j0 = j1 + 1
    return math.fsum(partials)


def _ratio_power_sum(f: WeightFunction, k: int, m: float, start: int = 1) -> float:
    """sum_{j=start}^{k} (f(j)/j)**m."""
    tau = power_exponent(f)
    if tau is not None:
        coeff = f(1)  # scale factor; f(j) = coeff * j**tau
        return coeff**m * kernels.power_sum(m * (tau - 1.0), k, start)
    return _chunked_sum(lambda j: np.power(f.values(j) / j, m), k, start)


def weight_sum(f: WeightFunction, k: int) -> float:
    """sum_{j<=k} f(j) (appears in the second-order condition products)."""
    k = _check_k(k)
    tau = power_exponent(f)
    if tau is not None:
        return f(1) * kernels.power_sum(tau, k)
    return _chunked_sum(lambda j: f.values(j), k)


def a_n(f: WeightFunction, k: int) -> float:
    """Centering constant sum_{j<=k} f(j)/j."""
    k = _check_k(k)
    return _ratio_power_sum(f, k, 1.0)


def sigma_n(f: WeightFunction, k: int) -> float:
    """Scale constant sqrt(sum_{j<=k} (f(j)/j)^2)."""
    k = _check_k(k)
    s2 = _ratio_power_sum(f, k, 2.0)
    if not np.isfinite(s2):
        raise NumericError(f"sigma_n overflow for {f.name} at k={k}")
    return math.sqrt(s2)


def max_ratio(f: WeightFunction, k: int) -> float:
    """max_{j<=k} f(j)/j."""
    k = _check_k(k)
    tau = power_exponent(f)
    if tau is not None:
        # j**(tau-1) is monotone: extremum sits at an endpoint
        return f(1) * max(1.0, float(k) ** (tau - 1.0))
    best = -np.inf
    j0 = 1
    while j0 <= k:
        j1 = min(j0 + _CHUNK - 1, k)
        j = np.arange(j0, j1 + 1, dtype=np.float64)
        best = max(best, float(np.max(f.values(j) / j)))
        j0 = j1 + 1
    return best


def b_nf(f: WeightFunction, k: int) -> float:
    """max_{j<=k}(f(j)/j) / sigma_n(f, k); vanishing iff the Gaussian limit rules."""
    return max_ratio(f, k) / sigma_n(f, k)


@dataclass(frozen=True)
class NormalizationSet:
    """The constants attached to one (f, k) pair."""

    k: int
    a_n: float
    sigma_n: float
    b_nf: float


def normalization_set(f: WeightFunction, k: int) -> NormalizationSet:
    k = _check_k(k)
    s = sigma_n(f, k)
    return NormalizationSet(k=k, a_n=a_n(f, k), sigma_n=s, b_nf=max_ratio(f, k) / s)


# ---------------------------------------------------------------------------
# infinite series A(m, f) = sum_{j>=1} (f(j)/j)^m
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SeriesValue:
    """Certified value of an infinite series, or a divergence flag."""

    divergent: bool
    value: Optional[float] = None
    error_bound: Optional[float] = None
    terms_used: Optional[int] = None


def _tail_power_form(f: WeightFunction):
    """(coeff, tau, start) when f(j) == coeff * j**tau exactly for j >= start.

    This exact tail structure is what certifies the integral bounds; weights
    without it (finite tables with no rule, pointwise sums) are unsupported
    for infinite series.
    """
    if isinstance(f, PowerWeight):
        return 1.0, f.tau, 1
    if isinstance(f, ScaledWeight):
        form = _tail_power_form(f.base)
        if form is None:
            return None
        c, tau, start = form
        return f.c * c, tau, start
    if isinstance(f, TabulatedWeight):
        if f.extend == "hold":
            return float(f.table[-1]), 0.0, f.table.size
        return None
    return None


def _integral_tail_bounds(coeff_m: float, s: float, J: int):
    """Bounds on coeff_m * sum_{j>J} j**(-s) from the integral test (s > 1)."""
    hi = coeff_m * J ** (1.0 - s) / (s - 1.0)
    lo = coeff_m * (J + 1.0) ** (1.0 - s) / (s - 1.0)
    return lo, hi


def tail_ratio_moment(f: WeightFunction, m: float, start: int, tol: float = 1e-12) -> SeriesValue:
    """Certified sum_{j>start} (f(j)/j)^m, finite case.

    Partial sums are extended until the integral-test window is narrower than
    tol; the midpoint of the window is the returned tail estimate.
    """
    form = _tail_power_form(f)
    if form is None:
        raise UnsupportedWeightError(
            f"infinite series over '{f.name}' needs a power or held tail"
        )
    coeff, tau, js = form
    s = m * (1.0 - tau)
    if s <= 1.0:
        return SeriesValue(divergent=True)
    coeff_m = coeff**m
    J = max(int(start), js, 1024)
    head = _ratio_power_sum(f, J, m, start=start + 1)
    while True:
        lo, hi = _integral_tail_bounds(coeff_m, s, J)
        half = 0.5 * (hi - lo)
        if half <= tol or J >= (1 << 27):
            if half > tol:
                raise NumericError(
                    f"series tolerance {tol} unreachable within J={J} terms "
                    f"(achieved {half:.3e}); loosen tol"
                )
            return SeriesValue(divergent=False, value=head + 0.5 * (lo + hi),
                               error_bound=half, terms_used=J)
        head += _ratio_power_sum(f, 2 * J, m, start=J + 1)
        J *= 2


def A_m(f: WeightFunction, m: float, tol: float = 1e-9) -> SeriesValue:
    """A(m, f) = sum_{j>=1} (f(j)/j)^m, or the divergence flag.

    For power weights this is coeff^m * zeta(m (1 - tau)), finite exactly when
    m (1 - tau) > 1.
    """
    if m < 2:
        raise DomainError(f"series order m must be >= 2, got {m}")
    form = _tail_power_form(f)
    if form is None:
        raise UnsupportedWeightError(
            f"A(m, f) for '{f.name}' requires a declared extension rule"
        )
    _, tau, _ = form
    if m * (1.0 - tau) <= 1.0:
        return SeriesValue(divergent=True)
    tail = tail_ratio_moment(f, m, start=0, tol=tol)
    return tail


def A_2(f: WeightFunction, tol: float = 1e-9) -> float:
    """A(2, f) as a float; raises if divergent (condition for the series law)."""
    res = A_m(f, 2, tol=tol)
    if res.divergent:
        raise DivergentSeriesError(
            f"A(2, {f.name}) diverges: the series limit law is undefined "
            f"(Gaussian regime applies instead)"
        )
    return float(res.value)


# ---------------------------------------------------------------------------
# limit covariance and semimetrics
# ---------------------------------------------------------------------------

def gamma_power(tau1: float, tau2: float) -> float:
    """Closed-form power-class covariance sqrt((2 t1 - 1)(2 t2 - 1)) / (t1 + t2 - 1).

    Defined for tau > 1/2 only: at tau = 1/2 the normalized cross sum grows
    like (log k) * k**(tau2 - 1/2) instead of converging, and below 1/2 the
    process leaves the Gaussian regime.
    """
    for t in (tau1, tau2):
        if t < 0.5:
            raise DomainError(f"gamma_power needs tau > 1/2, got {t}")
        if t == 0.5:
            raise DomainError(
                "tau = 1/2 is degenerate: the cross term grows like "
                "sqrt(2*tau2 - 1) * log(k) * k**((2*tau2-1)/2) and no finite "
                "covariance limit exists"
            )
    return math.sqrt((2.0 * tau1 - 1.0) * (2.0 * tau2 - 1.0)) / (tau1 + tau2 - 1.0)


def cross_sum(f1: WeightFunction, f2: WeightFunction, k: int) -> float:
    """sum_{j<=k} f1(j) f2(j) / j^2."""
    k = _check_k(k)
    t1, t2 = power_exponent(f1), power_exponent(f2)
    if t1 is not None and t2 is not None:
        return f1(1) * f2(1) * kernels.power_sum(t1 + t2 - 2.0, k)
    return _chunked_sum(lambda j: (f1.values(j) / j) * (f2.values(j) / j), k)


def gamma_numeric(f1: WeightFunction, f2: WeightFunction, k: int) -> float:
    """Finite-k covariance Gamma_n(f1, f2); Cauchy-Schwarz keeps it in (0, 1]."""
    k = _check_k(k)
    val = cross_sum(f1, f2, k) / (sigma_n(f1, k) * sigma_n(f2, k))
    if not (0.0 < val <= 1.0 + 1e-12):
        raise NumericError(f"covariance {val} escaped (0, 1]; numerical failure")
    return min(val, 1.0)


def rho_n_sq(f1: WeightFunction, f2: WeightFunction, k: int) -> float:
    """Expected squared distance of the normalized summand processes.

    Equals 2 - 2 Gamma_n(f1, f2) because each normalized process has unit
    variance at every k.
    """
    return 2.0 - 2.0 * gamma_numeric(f1, f2, k)


def d_n_sq_random(f1: WeightFunction, f2: WeightFunction, k: int,
                  exp_draws: Sequence[float]) -> float:
    """Random semimetric: sum_j (w1_j - w2_j)^2 (e_j - 1)^2 with w = f(j)/(j sigma_n).

    Its expectation over fresh standard exponentials is rho_n_sq(f1, f2, k).
    """
    k = _check_k(k)
    e = np.asarray(exp_draws, dtype=np.float64)
    if e.shape != (k,):
        raise DomainError(f"exp_draws must have length k={k}, got {e.shape}")
    if np.any(e < 0.0):
        raise DomainError("exp_draws must be nonnegative")
    j = np.arange(1, k + 1, dtype=np.float64)
    w1 = f1.values(j) / (j * sigma_n(f1, k))
    w2 = f2.values(j) / (j * sigma_n(f2, k))
    return float(np.sum((w1 - w2) ** 2 * (e - 1.0) ** 2))


# ---------------------------------------------------------------------------
# second-order condition evaluators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConditionReport:
    """Values of the vanishing products controlling the perturbation terms.

    g1 and g2 are the sups of |p| and |b| over (0, lambda k / n]; d combines
    them with the log k inflation of the de Haan remainder.  Each ratio_c* is
    the corresponding g multiplied by sum_{j<=k} f(j) / sigma_n(f); the
    second and third use the same normalization as the first (the printed
    extra k**tau factor in the source conditions is a power-class leftover,
    see the project notes).
    """

    g1: float
    g2: float
    d: float
    ratio_c1: float
    ratio_c2: float
    ratio_c3: float


def check_conditions(p: SlowVaryFn, b: SlowVaryFn, f: WeightFunction,
                     n: int, k: int, lam: float) -> ConditionReport:
    k = _check_k(k)
    if k > n:
        raise DomainError(f"k={k} exceeds n={n}")
    if lam <= 1.0:
        raise DomainError(f"lambda must be > 1, got {lam}")
    x = lam * k / n
    if x > 1.0:
        raise DomainError(f"lambda*k/n = {x} exceeds 1; sup window leaves (0, 1]")
    g1 = p.sup_abs(x)
    g2 = b.sup_abs(x)
    d = max(g1, g2 * math.log(k))
    base = weight_sum(f, k) / sigma_n(f, k)
    return ConditionReport(
        g1=g1, g2=g2, d=d,
        ratio_c1=g1 * base,
        ratio_c2=g2 * base,
        ratio_c3=d * base,
    )

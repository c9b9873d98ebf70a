"""Monte Carlo harness turning the convergence statements into runnable checks.

Every run is keyed by an explicit seed: replicate r consumes stream (seed, r)
and auxiliary draws (limit-law comparison samples) live on reserved stream
ids, so a report is a pure function of its configuration.  Replicates are
reduced in index order; results are bit-identical however the work is
scheduled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.special import ndtr

from . import kernels
from .errors import ConfigError, DataError, DomainError, NumericError
from .estimators import plugin_scale, process_eval, sample_ordered
from .limitlaws import make_limit_spec, sample_limit_L
from .models import malmquist_spacings, sample_top_uniform_order_stats
from .norms import A_m, gamma_power, rho_n_sq
from .rng import AUX_STREAM, LIMIT_LAW_STREAM, RngStream
from .weights import WeightFunction, power_exponent


# ---------------------------------------------------------------------------
# Kolmogorov-Smirnov distances (the verification instrument)
# ---------------------------------------------------------------------------

def _exp1_cdf(x):
    return np.where(x > 0.0, -np.expm1(-np.asarray(x, dtype=np.float64)), 0.0)


_NAMED_CDFS = {"standard_normal": ndtr, "exp1": _exp1_cdf}


def ks_one_sample(draws, cdf) -> float:
    """sup |ECDF - F| against a named law, a callable CDF, or (two-sample)
    a reference sample."""
    x = np.sort(np.asarray(draws, dtype=np.float64))
    if x.size == 0:
        raise DataError("KS distance needs a nonempty sample")
    if isinstance(cdf, str):
        try:
            cdf = _NAMED_CDFS[cdf]
        except KeyError:
            raise ConfigError(f"unknown reference cdf {cdf!r}") from None
    elif isinstance(cdf, (np.ndarray, list, tuple)):
        return ks_two_sample(x, cdf)
    fx = np.asarray(cdf(x), dtype=np.float64)
    n = x.size
    grid = np.arange(1, n + 1, dtype=np.float64) / n
    return float(max(np.max(grid - fx), np.max(fx - (grid - 1.0 / n))))


def ks_two_sample(a, b) -> float:
    """sup distance between two empirical CDFs on the merged grid."""
    a = np.sort(np.asarray(a, dtype=np.float64))
    b = np.sort(np.asarray(b, dtype=np.float64))
    if a.size == 0 or b.size == 0:
        raise DataError("KS distance needs nonempty samples")
    grid = np.concatenate([a, b])
    ca = np.searchsorted(a, grid, side="right") / a.size
    cb = np.searchsorted(b, grid, side="right") / b.size
    return float(np.max(np.abs(ca - cb)))


# ---------------------------------------------------------------------------
# report container
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GateResult:
    name: str
    value: float
    threshold: float
    passed: bool


@dataclass
class MonteCarloReport:
    """Replication summaries plus the raw per-replicate statistics."""

    config: dict
    per_weight: list = field(default_factory=list)
    ks_vs_normal: Optional[float] = None
    ks_vs_limit_law: Optional[float] = None
    empirical_corr: Optional[np.ndarray] = None
    rho_trace: Optional[list] = None
    gates: list = field(default_factory=list)
    values: Optional[np.ndarray] = None  # (R, n_weights) normalized statistics

    @property
    def all_gates_pass(self) -> bool:
        return all(g.passed for g in self.gates)

    def add_gate(self, name: str, value: float, threshold: float):
        self.gates.append(GateResult(name, float(value), float(threshold),
                                     bool(value <= threshold)))

    def to_text(self) -> str:
        lines = ["# ghill report"]
        for key in sorted(self.config):
            lines.append(f"config.{key}={self.config[key]}")
        for i, wstats in enumerate(self.per_weight):
            for key, val in wstats.items():
                lines.append(f"weight.{i}.{key}={_fmt(val)}")
        lines.append(f"ks_vs_normal={_fmt(self.ks_vs_normal)}")
        lines.append(f"ks_vs_limit_law={_fmt(self.ks_vs_limit_law)}")
        if self.empirical_corr is not None:
            m = self.empirical_corr.shape[0]
            for a in range(m):
                for b in range(m):
                    lines.append(f"empirical_corr.{a}.{b}={_fmt(self.empirical_corr[a, b])}")
        if self.rho_trace is not None:
            for i, (k, rho2, limit) in enumerate(self.rho_trace):
                lines.append(f"rho_trace.{i}={k},{_fmt(rho2)},{_fmt(limit)}")
        for g in self.gates:
            lines.append(f"gate.{g.name}.value={_fmt(g.value)}")
            lines.append(f"gate.{g.name}.threshold={_fmt(g.threshold)}")
            lines.append(f"gate.{g.name}.pass={str(g.passed).lower()}")
        return "\n".join(lines) + "\n"


def _fmt(v) -> str:
    if v is None:
        return "none"
    if isinstance(v, float):
        return f"{v:.10g}"
    return str(v)


def _moments(x: np.ndarray) -> dict:
    mean = float(np.mean(x))
    cen = x - mean
    m2 = float(np.mean(cen**2))
    m3 = float(np.mean(cen**3))
    skew = m3 / m2**1.5 if m2 > 0.0 else 0.0
    return {"mean": mean, "variance": m2, "skewness": skew}


# ---------------------------------------------------------------------------
# studentized-statistic Monte Carlo
# ---------------------------------------------------------------------------

def mc_studentized(model, f_list: Sequence[WeightFunction], n: int, k: int,
                   R: int, seed: int, scale_mode: str = "oracle",
                   compare_limit: bool = True, limit_tol: float = 1e-6,
                   limit_head_cap: Optional[int] = None) -> MonteCarloReport:
    """R replicates of the studentized process over f_list.

    Reported statistics are normalized to a unit-scale limit: the light-tail
    studentization directly, the heavy-tail one after division by the scale
    (its raw limit is N(0, gamma^2) or gamma times the series law).  In
    plug-in mode each replicate uses its own Hill value and the report flags
    it; validation gates are only meaningful against oracle scaling.
    """
    domain = getattr(model, "domain", None)
    if domain not in ("gumbel", "frechet"):
        raise ConfigError(f"studentized Monte Carlo needs a heavy- or light-tail "
                          f"model, got domain {domain!r}")
    if scale_mode not in ("oracle", "plugin"):
        raise ConfigError(f"unknown scale_mode {scale_mode!r}")
    if R < 2:
        raise ConfigError(f"need R >= 2 replicates, got {R}")
    if k + 1 > n:
        raise DomainError(f"need k + 1 <= n, got k={k}, n={n}")

    oracle = None
    if scale_mode == "oracle":
        oracle = model.oracle_scale(n, k)
        if oracle is None or oracle <= 0.0:
            raise ConfigError("oracle scale unavailable for this model")

    m = len(f_list)
    vals = np.empty((R, m), dtype=np.float64)
    for r in range(R):
        osample = sample_ordered(model, n, k, RngStream(seed, r))
        scale = oracle if oracle is not None else plugin_scale(osample, domain)
        row = process_eval(f_list, osample, domain, scale)
        if domain == "frechet":
            row = row / scale
        vals[r] = row

    config = {
        "model": model.spec_string(), "n": n, "k": k, "reps": R, "seed": seed,
        "scale_mode": scale_mode, "weights": ",".join(f.name for f in f_list),
        "backend": kernels.BACKEND,
    }
    report = MonteCarloReport(config=config, values=vals)

    for i, f in enumerate(f_list):
        stats = _moments(vals[:, i])
        stats["name"] = f.name
        stats["ks_vs_normal"] = ks_one_sample(vals[:, i], "standard_normal")
        stats["ks_vs_limit_law"] = None
        if compare_limit and not A_m(f, 2).divergent:
            spec = make_limit_spec(f, tol=limit_tol,
                                   **({"head_cap": limit_head_cap}
                                      if limit_head_cap else {}))
            ldraws = sample_limit_L(spec, RngStream(seed, LIMIT_LAW_STREAM + i), R)
            stats["ks_vs_limit_law"] = ks_two_sample(vals[:, i], ldraws)
        report.per_weight.append(stats)

    report.ks_vs_normal = report.per_weight[0]["ks_vs_normal"] if m else None
    report.ks_vs_limit_law = report.per_weight[0]["ks_vs_limit_law"] if m else None
    if m >= 2:
        report.empirical_corr = np.corrcoef(vals.T)
    return report


def empirical_cov(model, f1: WeightFunction, f2: WeightFunction, n: int, k: int,
                  R: int, seed: int, scale_mode: str = "oracle") -> float:
    """Pearson correlation of the paired studentized statistics."""
    if R < 30:
        raise ConfigError(f"need R >= 30 for a stable correlation, got {R}")
    report = mc_studentized(model, [f1, f2], n, k, R, seed,
                            scale_mode=scale_mode, compare_limit=False)
    x, y = report.values[:, 0], report.values[:, 1]
    if float(np.var(x)) == 0.0 or float(np.var(y)) == 0.0:
        raise NumericError("degenerate replicates: zero variance in a coordinate")
    return float(np.corrcoef(x, y)[0, 1])


def rho_convergence_trace(f1: WeightFunction, f2: WeightFunction,
                          k_grid: Sequence[int]) -> list:
    """(k, rho_k^2, limit) rows; the limit column is the closed power-class
    form 2 (1 - Gamma(f1, f2))."""
    if len(k_grid) == 0:
        raise DomainError("k_grid must be nonempty")
    t1, t2 = power_exponent(f1), power_exponent(f2)
    if t1 is None or t2 is None:
        raise DomainError("closed-form limit column needs power weights")
    limit = 2.0 * (1.0 - gamma_power(t1, t2))
    return [(int(k), rho_n_sq(f1, f2, int(k)), limit) for k in k_grid]


def malmquist_pooled(n: int, k: int, reps: int, seed: int) -> np.ndarray:
    """reps * k pooled spacing values j log(U_{j+1,n}/U_{j,n})."""
    out = np.empty((reps, k), dtype=np.float64)
    for r in range(reps):
        u = sample_top_uniform_order_stats(n, k, RngStream(seed, r))
        out[r] = malmquist_spacings(u, k)
    return out.ravel()


def dn_expectation_check(f1: WeightFunction, f2: WeightFunction, k: int,
                         reps: int, seed: int):
    """Monte Carlo mean of the random semimetric vs its expectation rho_n^2.

    Returns (mc_mean, rho2, standard_error).
    """
    from .norms import d_n_sq_random

    gen = RngStream(seed, AUX_STREAM).generator()
    draws = np.empty(reps, dtype=np.float64)
    for r in range(reps):
        draws[r] = d_n_sq_random(f1, f2, k, gen.standard_exponential(k))
    rho2 = rho_n_sq(f1, f2, k)
    se = float(np.std(draws, ddof=1) / math.sqrt(reps))
    return float(np.mean(draws)), rho2, se

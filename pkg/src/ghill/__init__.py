"""Functional generalized Hill process toolkit.

A library and CLI for the weighted log-spacing statistic
T_n(f) = sum_j f(j) (log X_{n-j+1,n} - log X_{n-j,n}), its studentized forms
for the heavy- and light-tail domains, exact constructions of its limit laws
(finite-dimensional Gaussians with the normalized-cross-sum covariance, and
the centered exponential series law), and a reproducible Monte Carlo harness
that checks every convergence statement at desk scale.
"""

from .errors import (ConfigError, DataError, DivergentSeriesError, DomainError,
                     GateFailure, GhillError, InsufficientDataError,
                     ModelValidityError, NumericError, PositivityError,
                     UnsupportedWeightError)
from .estimators import (GhpResult, OrderedSample, evaluate, hill,
                         order_statistics, plugin_scale, process_eval,
                         sample_ordered, studentize, t_n, weibull_transform)
from .diagnostics import (MonteCarloReport, dn_expectation_check, empirical_cov,
                          ks_one_sample, ks_two_sample, malmquist_pooled,
                          mc_studentized, rho_convergence_trace)
from .kernels import BACKEND
from .limitlaws import (LimitLawSpec, cumulant_L, gaussian_fidi_sample,
                        make_limit_spec, mgf_L_joint, sample_limit_L)
from .models import (FrechetKaramata, GpdModel, GumbelDeHaan, WeibullKaramata,
                     gpd_quantile, malmquist_spacings, parse_model_spec,
                     quantile_logF, sample_iid, sample_top_uniform_order_stats)
from .norms import (ConditionReport, NormalizationSet, SeriesValue, A_2, A_m,
                    a_n, b_nf, check_conditions, gamma_numeric, gamma_power,
                    normalization_set, rho_n_sq, d_n_sq_random, sigma_n,
                    weight_sum)
from .rng import RngStream
from .varying import CallablePerturbation, PowerPerturbation, SlowVaryFn, ZERO
from .weights import (PowerWeight, ScaledWeight, SumWeight, TabulatedWeight,
                      WeightFunction)

__version__ = "0.1.0"

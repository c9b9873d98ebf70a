"""Positive weight functions on {1, 2, ...} used to index the estimator process.

Three families are representable: pure powers ``j**tau``, finite tables with a
declared extension rule, and composites built from scalar multiples and
pointwise sums.  Every weight evaluates vectorized over integer arrays and is
strictly positive.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError, UnsupportedWeightError


@dataclass(frozen=True)
class TailEnvelope:
    """Asymptotic bound f(j) <= coeff * j**power for j >= start.

    ``tight`` means the bound is also an asymptotic lower envelope (up to a
    constant), so divergence decisions based on ``power`` are exact.
    """

    coeff: float
    power: float
    start: int = 1
    tight: bool = True


class WeightFunction:
    """Base class.  Subclasses implement :meth:`values` for 1-based indices."""

    name: str = "weight"

    def values(self, j: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, j):
        arr = np.asarray(j)
        out = self.values(arr.astype(np.float64))
        if arr.ndim == 0:
            return float(out)
        return out

    def tail_envelope(self) -> Optional[TailEnvelope]:
        """Envelope for infinite-series work; None if no extension rule exists."""
        return None

    def __mul__(self, c):
        return ScaledWeight(float(c), self)

    __rmul__ = __mul__

    def __add__(self, other):
        if not isinstance(other, WeightFunction):
            return NotImplemented
        return SumWeight(self, other)

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


class PowerWeight(WeightFunction):
    """f(j) = j**tau with tau >= 0.

    tau = 0 is the constant weight; tau = 1 recovers the Hill estimator after
    dividing the statistic by k.
    """

    def __init__(self, tau: float):
        tau = float(tau)
        if not np.isfinite(tau) or tau < 0.0:
            raise DomainError(f"power weight needs tau >= 0, got {tau}")
        self.tau = tau
        self.name = f"pow:{tau:g}"

    def values(self, j: np.ndarray) -> np.ndarray:
        return np.power(j, self.tau)

    def tail_envelope(self) -> TailEnvelope:
        return TailEnvelope(coeff=1.0, power=self.tau, start=1, tight=True)


class TabulatedWeight(WeightFunction):
    """Finite table of positive values for j = 1..len(values).

    extend:
      * None    -- evaluation beyond the table is an error; infinite series
                   over this weight are unsupported.
      * "hold"  -- f(j) = values[-1] for j beyond the table.
    """

    def __init__(self, values: Sequence[float], extend: Optional[str] = None, name: str = "tab"):
        vals = np.asarray(values, dtype=np.float64)
        if vals.ndim != 1 or vals.size == 0:
            raise DomainError("tabulated weight needs a nonempty 1-d value sequence")
        if not np.all(np.isfinite(vals)) or np.any(vals <= 0.0):
            raise DomainError("tabulated weight values must be finite and > 0")
        if extend not in (None, "hold"):
            raise DomainError(f"unknown extension rule {extend!r}")
        self.table = vals
        self.extend = extend
        self.name = name

    def values(self, j: np.ndarray) -> np.ndarray:
        jj = np.asarray(j)
        idx = np.rint(jj).astype(np.int64)
        m = self.table.size
        if self.extend is None:
            if np.any(idx > m):
                raise UnsupportedWeightError(
                    f"tabulated weight '{self.name}' has {m} values and no extension rule"
                )
            return self.table[idx - 1]
        return self.table[np.minimum(idx, m) - 1]

    def tail_envelope(self) -> Optional[TailEnvelope]:
        if self.extend is None:
            return None
        return TailEnvelope(coeff=float(self.table[-1]), power=0.0,
                            start=self.table.size, tight=True)


class ScaledWeight(WeightFunction):
    """c * f with c > 0 (keeps positivity)."""

    def __init__(self, c: float, base: WeightFunction):
        if not np.isfinite(c) or c <= 0.0:
            raise DomainError(f"scale factor must be > 0, got {c}")
        self.c = float(c)
        self.base = base
        self.name = f"{c:g}*{base.name}"

    def values(self, j: np.ndarray) -> np.ndarray:
        return self.c * self.base.values(j)

    def tail_envelope(self) -> Optional[TailEnvelope]:
        env = self.base.tail_envelope()
        if env is None:
            return None
        return TailEnvelope(self.c * env.coeff, env.power, env.start, env.tight)


class SumWeight(WeightFunction):
    """Pointwise sum of two weights."""

    def __init__(self, a: WeightFunction, b: WeightFunction):
        self.a = a
        self.b = b
        self.name = f"{a.name}+{b.name}"

    def values(self, j: np.ndarray) -> np.ndarray:
        return self.a.values(j) + self.b.values(j)

    def tail_envelope(self) -> Optional[TailEnvelope]:
        ea, eb = self.a.tail_envelope(), self.b.tail_envelope()
        if ea is None or eb is None:
            return None
        # upper envelope is exact; tightness inherited from the dominant term
        hi, lo = (ea, eb) if ea.power >= eb.power else (eb, ea)
        return TailEnvelope(ea.coeff + eb.coeff, hi.power,
                            max(ea.start, eb.start), hi.tight)


def power_exponent(f: WeightFunction) -> Optional[float]:
    """tau if f is (a positive multiple of) a pure power weight, else None."""
    if isinstance(f, PowerWeight):
        return f.tau
    if isinstance(f, ScaledWeight):
        return power_exponent(f.base)
    return None

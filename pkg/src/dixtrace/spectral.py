"""Spectral data model and certified power sums.

A positive compact operator enters the package as its singular value sequence
mu_1 >= mu_2 >= ... > 0, optionally paired with an eigenbasis enumeration
(lambda_m in enumeration order) when that order differs from the sorted one.
Diagonal observables are bounded complex sequences indexed by the same
enumeration. Everything downstream (log averages, zeta curves, residues)
reduces to certified sums of mu_n^s and diag(m) * lambda_m^s.

Certification near s = 1 is the delicate part: a bare head-plus-comparison
bound loses the race long before s - 1 reaches 2^-20, so each sequence kind
carries structural tail knowledge: an Euler-Maclaurin closed form for power
laws, an exact run-geometric form for the dyadic block law, and a relative
slack power model (integral sandwich) for enumerated spectra.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

import numpy as np

from ._backend import kernels
from .errors import (
    DomainError,
    InsufficientDataError,
    InvariantViolation,
    UnachievableToleranceError,
)

__all__ = [
    "TailModel",
    "EigenvalueSequence",
    "ExplicitSequence",
    "PowerLaw",
    "DyadicBlockLaw",
    "ScaledSequence",
    "LimitModel",
    "DiagonalObservable",
    "ZetaSamples",
    "mu",
    "log_average",
    "l1inf_norm_estimate",
    "zeta",
    "load_operator",
    "load_observable",
]

_MONOTONE_SLOP = 1e-12


# ---------------------------------------------------------------------------
# tail models
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TailModel:
    """Relative-slack power model for a sorted tail.

    Claims mu_n = coef * n**(-power) * (1 + eps_n) with
    |eps_n| <= slack_coef * n**(-slack_power) for all n >= start.
    """

    coef: float
    power: float
    slack_coef: float = 0.0
    slack_power: float = 0.0
    start: int = 1

    def __post_init__(self):
        if self.coef <= 0 or self.power <= 0:
            raise DomainError("tail model requires positive coef and power")
        if self.slack_coef < 0 or self.slack_power < 0:
            raise DomainError("tail model slack must be nonnegative")

    def slack_at(self, n: int) -> float:
        return self.slack_coef * n ** (-self.slack_power)

    def power_sum_tail(self, s: float, n: int) -> tuple[float, float]:
        """Certified enclosure of sum_{m > n} mu_m^s via the integral sandwich."""
        if n < self.start:
            raise DomainError(f"tail model valid from n >= {self.start}")
        ps = self.power * s
        if ps <= 1.0:
            raise DomainError("tail power sum diverges: power * s <= 1")
        r = self.slack_at(n)
        if r >= 1.0:
            raise UnachievableToleranceError(
                "tail slack exceeds 1; cannot certify", value=None, error=math.inf
            )
        cs = self.coef**s
        integral = n ** (1.0 - ps) / (ps - 1.0)
        hi = cs * (1.0 + r) ** s * integral
        lo = cs * (1.0 - r) ** s * max(integral - n ** (-ps), 0.0)
        return 0.5 * (hi + lo), 0.5 * (hi - lo)


def _em_tail_power(q: float, n: int) -> tuple[float, float]:
    """sum_{m > n} m^-q by Euler-Maclaurin with a certified remainder.

    Valid for q > 1; the error bound is the magnitude of the first omitted
    term, legitimate because x^-q is completely monotone.
    """
    if q <= 1.0:
        raise DomainError("power sum tail diverges: exponent <= 1")
    est = (
        n ** (1.0 - q) / (q - 1.0)
        - 0.5 * n ** (-q)
        + (q / 12.0) * n ** (-q - 1.0)
    )
    err = (q * (q + 1.0) * (q + 2.0) / 720.0) * n ** (-q - 3.0)
    return est, err


# ---------------------------------------------------------------------------
# eigenvalue sequences
# ---------------------------------------------------------------------------


class EigenvalueSequence:
    """Base class: sorted singular values plus optional enumeration pairing."""

    name: str = "operator"

    # -- required surface -------------------------------------------------

    def mu_window(self, lo: int, hi: int) -> np.ndarray:
        """Sorted values mu_lo .. mu_hi inclusive (1-based)."""
        raise NotImplementedError

    def head_limit(self) -> int:
        """Largest index the sorted window can reach."""
        raise NotImplementedError

    def supports_tail(self) -> bool:
        return False

    def tail_power_sum(self, s: float, n: int) -> tuple[float, float]:
        """Certified (estimate, error) for sum_{m > n} mu_m^s."""
        raise UnachievableToleranceError(
            f"{self.name}: no tail descriptor; only finite-window operations apply"
        )

    # -- enumeration pairing ----------------------------------------------

    def enumeration_sorted(self) -> bool:
        return True

    def lam_window(self, lo: int, hi: int) -> np.ndarray:
        """Eigenvalues lambda_lo .. lambda_hi in enumeration order."""
        return self.mu_window(lo, hi)

    def enum_sup_beyond(self, m: int) -> float:
        """Upper bound on lambda over enumeration indices > m."""
        if self.enumeration_sorted():
            idx = min(m + 1, self.head_limit())
            return float(self.mu_window(idx, idx)[0])
        raise UnachievableToleranceError(
            f"{self.name}: no bound on eigenvalues beyond the enumeration head"
        )

    # -- generic machinery -------------------------------------------------

    def _check_monotone(self, vals: np.ndarray, prev_last: float | None):
        if len(vals) == 0:
            return
        if np.any(np.diff(vals) > _MONOTONE_SLOP):
            raise InvariantViolation(f"{self.name}: sorted values are not nonincreasing")
        if np.any(vals < -_MONOTONE_SLOP):
            raise InvariantViolation(f"{self.name}: negative singular value")
        if prev_last is not None and vals[0] > prev_last + _MONOTONE_SLOP:
            raise InvariantViolation(f"{self.name}: nonincreasing order broken across windows")

    def mu_chunks(self, n_max: int, chunk: int) -> Iterator[np.ndarray]:
        prev = None
        lo = 1
        while lo <= n_max:
            hi = min(lo + chunk - 1, n_max)
            vals = self.mu_window(lo, hi)
            self._check_monotone(vals, prev)
            prev = float(vals[-1]) if len(vals) else prev
            yield vals
            lo = hi + 1

    def prefix_sums(self, checkpoints: Sequence[int], chunk: int = 1 << 20) -> np.ndarray:
        """Compensated partial sums sum_{n<=N} mu_n at the given checkpoints."""
        cps = np.asarray(sorted(set(int(c) for c in checkpoints)), dtype=np.int64)
        if len(cps) == 0:
            return np.zeros(0)
        n_max = int(cps[-1])
        if n_max > self.head_limit():
            raise InsufficientDataError(
                f"{self.name}: insufficient spectral data for N={n_max}"
            )
        out = np.empty(len(cps), dtype=np.float64)
        state = kernels.new_state()
        k0 = 0
        ci = 0
        for vals in self.mu_chunks(n_max, chunk):
            pref = kernels.kahan_cumsum(np.ascontiguousarray(vals), state)
            hi = k0 + len(vals)
            while ci < len(cps) and cps[ci] <= hi:
                out[ci] = pref[int(cps[ci]) - k0 - 1]
                ci += 1
            k0 = hi
        return out

    def prefix_sum(self, n: int, chunk: int = 1 << 20) -> float:
        return float(self.prefix_sums([n], chunk)[0])

    def zeta_power_sum(
        self, s: float, head: int, chunk: int = 1 << 20
    ) -> tuple[float, float]:
        """Certified sum_n mu_n^s = head sum + tail enclosure."""
        head = min(head, self.head_limit())
        total = 0.0
        for vals in self.mu_chunks(head, chunk):
            total += kernels.pow_sum(np.ascontiguousarray(vals), s)
        t_est, t_err = self.tail_power_sum(s, head)
        round_err = 1e-15 * (abs(total) + abs(t_est))
        return total + t_est, t_err + round_err

    def preferred_head(self, default: int) -> int:
        return min(default, self.head_limit())


class ExplicitSequence(EigenvalueSequence):
    """Finite spectral data.

    finite_rank=True declares the list complete (the operator's remaining
    singular values are exactly zero); finite_rank=False marks a truncated
    prefix, and any access past the data raises.
    """

    def __init__(self, values, finite_rank: bool = True, name: str = "explicit"):
        vals = np.asarray(values, dtype=np.float64)
        if vals.ndim != 1 or len(vals) == 0:
            raise DomainError("explicit spectrum must be a nonempty 1-d list")
        if np.any(np.diff(vals) > _MONOTONE_SLOP):
            raise InvariantViolation("explicit spectrum must be nonincreasing")
        if np.any(vals < 0):
            raise InvariantViolation("explicit spectrum must be nonnegative")
        self.values = vals
        self.finite_rank = finite_rank
        self.name = name

    def head_limit(self) -> int:
        return (1 << 62) if self.finite_rank else len(self.values)

    def rank(self) -> int:
        return len(self.values)

    def mu_window(self, lo: int, hi: int) -> np.ndarray:
        if lo < 1 or hi < lo:
            raise DomainError("window must satisfy 1 <= lo <= hi")
        if hi > len(self.values):
            if not self.finite_rank:
                raise InsufficientDataError(
                    f"{self.name}: insufficient spectral data beyond n={len(self.values)}"
                )
            out = np.zeros(hi - lo + 1)
            avail = max(0, len(self.values) - lo + 1)
            if avail:
                out[:avail] = self.values[lo - 1 : lo - 1 + avail]
            return out
        return self.values[lo - 1 : hi].copy()

    def supports_tail(self) -> bool:
        return self.finite_rank

    def tail_power_sum(self, s: float, n: int) -> tuple[float, float]:
        if not self.finite_rank:
            return super().tail_power_sum(s, n)
        if n >= len(self.values):
            return 0.0, 0.0
        rest = self.values[n:]
        rest = rest[rest > 0.0]
        return float(np.sum(rest**s)), 1e-15 * float(np.sum(rest**s))

    def preferred_head(self, default: int) -> int:
        return len(self.values)


class PowerLaw(EigenvalueSequence):
    """mu_n = coef * n**(-power); the workhorse law.

    power = 1 gives the harmonic model (weak trace one per unit coef);
    power > 1 is trace class.
    """

    def __init__(self, coef: float = 1.0, power: float = 1.0):
        if coef <= 0 or power <= 0:
            raise DomainError("power law requires coef > 0 and power > 0")
        self.coef = float(coef)
        self.power = float(power)
        self.name = f"power(c={coef:g},p={power:g})"

    def head_limit(self) -> int:
        return 1 << 62

    def mu_window(self, lo: int, hi: int) -> np.ndarray:
        ns = np.arange(lo, hi + 1, dtype=np.float64)
        return self.coef * ns ** (-self.power)

    def supports_tail(self) -> bool:
        return True

    def tail_power_sum(self, s: float, n: int) -> tuple[float, float]:
        est, err = _em_tail_power(self.power * s, n)
        cs = self.coef**s
        return cs * est, cs * err


class DyadicBlockLaw(EigenvalueSequence):
    """Two-scale block-oscillating spectrum.

    Levels j = 0, 1, 2, ...: level 0 is the single value 1; level j >= 1
    holds the value 2^-j with multiplicity 2^(j-1) (thin) or 3 * 2^(j-1)
    (fat). Levels are grouped into runs delimited at j = 3 * 2^(r-1); run r
    is fat when sign(r) = +1. The sign pattern alternates every run through
    r = 4 (shallow oscillation, visible to partial-sum ladders up to ~2^24)
    and then in blocks of eight runs (deep oscillation, visible to the zeta
    kernel, which smooths over about five runs and cancels faster patterns).

    The log-average of this sequence provably stays inside a band of positive
    width on both evaluation routes; it is the package's reference
    non-measurable operator. Zeta sums are exact run-geometric series.
    """

    slow_period = 8
    fast_until = 4

    def __init__(self):
        self.name = "dyadic"
        self._level_count = np.array([1], dtype=np.int64)  # cumulative counts
        self._level_sum = np.array([1.0])  # cumulative sums of mu over levels
        self._extend_levels(40)

    @classmethod
    def sign(cls, r: int) -> int:
        if r <= cls.fast_until:
            return 1 if r % 2 == 0 else -1
        block = (r - cls.fast_until - 1) // cls.slow_period
        return -1 if block % 2 == 0 else 1

    @staticmethod
    def run_of(j: int) -> int:
        if j < 3:
            return 0
        r = 1
        while 3 * (1 << r) <= j:
            r += 1
        return r

    @classmethod
    def multiplicity(cls, j: int) -> int:
        if j == 0:
            return 1
        fat = cls.sign(cls.run_of(j)) > 0
        return (3 if fat else 1) * (1 << (j - 1))

    def _extend_levels(self, jmax: int):
        j0 = len(self._level_count)
        if j0 > jmax:
            return
        counts = list(self._level_count)
        sums = list(self._level_sum)
        for j in range(j0, jmax + 1):
            m = self.multiplicity(j)
            counts.append(counts[-1] + m)
            sums.append(sums[-1] + m * 2.0 ** (-j))
        self._level_count = np.array(counts, dtype=np.int64)
        self._level_sum = np.array(sums)

    def _ensure_count(self, n: int):
        while self._level_count[-1] < n:
            self._extend_levels(len(self._level_count) + 8)

    def head_limit(self) -> int:
        return 1 << 62

    def mu_window(self, lo: int, hi: int) -> np.ndarray:
        self._ensure_count(hi)
        ns = np.arange(lo, hi + 1, dtype=np.int64)
        j = np.searchsorted(self._level_count, ns, side="left")
        return 2.0 ** (-j.astype(np.float64))

    def prefix_sums(self, checkpoints, chunk: int = 1 << 20) -> np.ndarray:
        cps = sorted(set(int(c) for c in checkpoints))
        out = np.empty(len(cps))
        for i, n in enumerate(cps):
            self._ensure_count(n)
            j = int(np.searchsorted(self._level_count, n, side="left"))
            below = self._level_sum[j - 1] if j else 0.0
            used = n - (self._level_count[j - 1] if j else 0)
            out[i] = below + used * 2.0 ** (-j)
        return out

    def supports_tail(self) -> bool:
        return True

    def tail_power_sum(self, s: float, n: int) -> tuple[float, float]:
        """Exact tail: remainder of the current level plus run-geometric sums."""
        if s <= 1.0:
            raise DomainError("tail power sum diverges: s <= 1")
        self._ensure_count(n + 1)
        j0 = int(np.searchsorted(self._level_count, n, side="left"))
        left_in_level = int(self._level_count[j0]) - n
        total = left_in_level * 2.0 ** (-j0 * s)
        q = 2.0 ** (1.0 - s)
        r = self.run_of(j0 + 1)
        j_next = j0 + 1
        while True:
            run_end = 3 * (1 << r)  # first level of the next run
            lo, hi = j_next, run_end
            fat = self.sign(r) > 0
            c = 3.0 if fat else 1.0
            # sum_{j=lo}^{hi-1} m_j 2^{-js} with m_j = c/ (well) * 2^{j-1}
            total += (c / 2.0) * (q**lo) * (1.0 - q ** (hi - lo)) / (1.0 - q)
            rest = (1.5) * (q**hi) / (1.0 - q)
            if rest < 1e-17 * max(total, 1e-300):
                break
            j_next = run_end
            r += 1
            if r > 4000:
                break
        return total, 1e-14 * total

    def preferred_head(self, default: int) -> int:
        return min(default, 4096)


class ScaledSequence(EigenvalueSequence):
    """c * T for c > 0; used by the log-average route for constant diagonals."""

    def __init__(self, base: EigenvalueSequence, c: float):
        if c <= 0:
            raise DomainError("scale factor must be positive")
        self.base = base
        self.c = float(c)
        self.name = f"{base.name}*{c:g}"

    def head_limit(self) -> int:
        return self.base.head_limit()

    def mu_window(self, lo: int, hi: int) -> np.ndarray:
        return self.c * self.base.mu_window(lo, hi)

    def enumeration_sorted(self) -> bool:
        return self.base.enumeration_sorted()

    def lam_window(self, lo: int, hi: int) -> np.ndarray:
        return self.c * self.base.lam_window(lo, hi)

    def supports_tail(self) -> bool:
        return self.base.supports_tail()

    def tail_power_sum(self, s: float, n: int) -> tuple[float, float]:
        est, err = self.base.tail_power_sum(s, n)
        cs = self.c**s
        return cs * est, cs * err

    def prefix_sums(self, checkpoints, chunk: int = 1 << 20) -> np.ndarray:
        return self.c * self.base.prefix_sums(checkpoints, chunk)

    def preferred_head(self, default: int) -> int:
        return self.base.preferred_head(default)


# ---------------------------------------------------------------------------
# diagonal observables
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LimitModel:
    """Asserted convergence of a diagonal: |diag(m) - value| <= dev_coef * m**-dev_power
    for m >= start. dev_power = 0 encodes a plain deviation bound."""

    value: complex
    dev_coef: float
    dev_power: float = 0.0
    start: int = 1

    def deviation_at(self, m: int) -> float:
        if m < self.start:
            raise DomainError(f"limit model valid from m >= {self.start}")
        return self.dev_coef * m ** (-self.dev_power)


class DiagonalObservable:
    """Bounded complex sequence over the eigenbasis enumeration."""

    def __init__(
        self,
        rule: Callable[[np.ndarray], np.ndarray],
        bound: float,
        limit: LimitModel | None = None,
        name: str = "observable",
        constant: complex | None = None,
    ):
        if bound < 0:
            raise DomainError("observable bound must be nonnegative")
        self.rule = rule
        self.bound = float(bound)
        self.limit = limit
        self.name = name
        self.constant = constant

    @staticmethod
    def const(c: complex, name: str | None = None) -> "DiagonalObservable":
        c = complex(c)
        return DiagonalObservable(
            rule=lambda m, c=c: np.full(len(m), c),
            bound=abs(c),
            limit=LimitModel(value=c, dev_coef=0.0),
            name=name or f"const({c:g})" if c.imag else (name or f"const({c.real:g})"),
            constant=c,
        )

    @staticmethod
    def from_values(values, name: str = "diag-list") -> "DiagonalObservable":
        """Finitely supported diagonal; zero beyond the data."""
        vals = np.asarray(values, dtype=np.complex128)

        def rule(m: np.ndarray, vals=vals) -> np.ndarray:
            out = np.zeros(len(m), dtype=np.complex128)
            inside = m <= len(vals)
            out[inside] = vals[m[inside] - 1]
            return out

        bound = float(np.max(np.abs(vals))) if len(vals) else 0.0
        return DiagonalObservable(
            rule=rule,
            bound=bound,
            limit=LimitModel(value=0.0, dev_coef=0.0, start=len(vals) + 1),
            name=name,
        )

    def window(self, lo: int, hi: int) -> np.ndarray:
        ms = np.arange(lo, hi + 1, dtype=np.int64)
        vals = np.asarray(self.rule(ms))
        if len(vals) != len(ms):
            raise InvariantViolation(f"{self.name}: rule returned wrong window length")
        if np.any(np.abs(vals) > self.bound * (1 + 1e-9) + 1e-300):
            raise InvariantViolation(f"{self.name}: |diag| exceeds declared bound")
        return vals

    def tail_deviation(self, m: int) -> tuple[complex, float]:
        """(limit value, certified sup deviation beyond m)."""
        if self.limit is None:
            return 0.0 + 0.0j, self.bound
        start = max(m, self.limit.start)
        return self.limit.value, self.limit.deviation_at(start)

    def is_real_nonneg(self, probe: int = 4096) -> bool:
        w = self.window(1, probe)
        if np.any(np.abs(np.imag(w)) > 1e-12):
            return False
        if np.any(np.real(w) < -1e-12):
            return False
        if self.limit is not None:
            lv = complex(self.limit.value)
            if abs(lv.imag) > 1e-12 or lv.real < -1e-12:
                return False
        return True

    def scale(self, c: complex) -> "DiagonalObservable":
        c = complex(c)
        limit = None
        if self.limit is not None:
            limit = LimitModel(
                value=c * self.limit.value,
                dev_coef=abs(c) * self.limit.dev_coef,
                dev_power=self.limit.dev_power,
                start=self.limit.start,
            )
        return DiagonalObservable(
            rule=lambda m, r=self.rule: c * np.asarray(r(m)),
            bound=abs(c) * self.bound,
            limit=limit,
            name=f"{c:g}*{self.name}",
            constant=None if self.constant is None else c * self.constant,
        )

    def add(self, other: "DiagonalObservable") -> "DiagonalObservable":
        limit = None
        if self.limit is not None and other.limit is not None:
            limit = LimitModel(
                value=self.limit.value + other.limit.value,
                dev_coef=self.limit.dev_coef + other.limit.dev_coef,
                dev_power=min(self.limit.dev_power, other.limit.dev_power),
                start=max(self.limit.start, other.limit.start),
            )
        return DiagonalObservable(
            rule=lambda m, r1=self.rule, r2=other.rule: np.asarray(r1(m)) + np.asarray(r2(m)),
            bound=self.bound + other.bound,
            limit=limit,
            name=f"{self.name}+{other.name}",
        )


# ---------------------------------------------------------------------------
# zeta samples
# ---------------------------------------------------------------------------


@dataclass
class ZetaSamples:
    """Evaluations of s -> Tr(diag * T^s) with certified errors.

    Points are sorted with s descending toward 1.
    """

    s: np.ndarray
    values: np.ndarray
    errors: np.ndarray

    def __post_init__(self):
        self.s = np.asarray(self.s, dtype=np.float64)
        self.values = np.asarray(self.values, dtype=np.complex128)
        self.errors = np.asarray(self.errors, dtype=np.float64)
        if not (len(self.s) == len(self.values) == len(self.errors)):
            raise DomainError("zeta samples: mismatched lengths")
        if np.any(self.s <= 1.0):
            raise DomainError("zeta samples require s > 1")
        if np.any(np.diff(self.s) > 0):
            raise DomainError("zeta samples must be sorted with s descending")
        if np.any(self.errors < 0):
            raise DomainError("zeta samples: negative error")


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------


def mu(T: EigenvalueSequence, n: int) -> float:
    """n-th largest singular value (1-based)."""
    if n < 1:
        raise DomainError("mu index must be >= 1")
    return float(T.mu_window(n, n)[0])


def log_average(T: EigenvalueSequence, n: int, chunk: int = 1 << 20) -> float:
    """Partial sum of mu through n divided by log(1 + n)."""
    if n < 1:
        raise DomainError("log_average requires n >= 1")
    return T.prefix_sum(n, chunk) / math.log1p(n)


def l1inf_norm_estimate(T: EigenvalueSequence, n_max: int, chunk: int = 1 << 20) -> float:
    """Finite-window sup of the log-average; a lower bound for the true norm."""
    if n_max < 1:
        raise DomainError("l1inf_norm_estimate requires n_max >= 1")
    n_max = min(n_max, T.head_limit())
    best = 0.0
    state = kernels.new_state()
    k0 = 0
    for vals in T.mu_chunks(n_max, chunk):
        pref = kernels.kahan_cumsum(np.ascontiguousarray(vals), state)
        ks = np.arange(k0 + 1, k0 + len(vals) + 1, dtype=np.float64)
        best = max(best, float(np.max(pref / np.log1p(ks))))
        k0 += len(vals)
    return best


def zeta(
    A: DiagonalObservable,
    T: EigenvalueSequence,
    s: float,
    tol: float | None = None,
    head: int = 20_000,
    chunk: int = 1 << 20,
) -> tuple[complex, float]:
    """Certified value of sum_m diag(m) * lambda_m^s.

    The head is summed term by term in enumeration order; the tail splits
    diag into its asserted limit plus a deviation bounded by the limit model
    (or by the bare observable bound when no model is declared). With
    tol=None the head budget is used as given; otherwise the head doubles
    until the certified error is below tol, and failure raises with the best
    achieved value attached.
    """
    if s <= 1.0:
        raise DomainError("zeta requires s > 1")
    head = max(16, min(head, T.head_limit()))

    def attempt(m_head: int) -> tuple[complex, float]:
        acc_re = 0.0
        acc_im = 0.0
        lam_pow_sum = 0.0
        lo = 1
        while lo <= m_head:
            hi = min(lo + chunk - 1, m_head)
            lam = np.ascontiguousarray(T.lam_window(lo, hi))
            w = A.window(lo, hi)
            wr = np.ascontiguousarray(np.real(w), dtype=np.float64)
            acc_re += kernels.weighted_pow_sum(lam, s, wr)
            if np.iscomplexobj(w) and np.any(np.imag(w) != 0.0):
                wi = np.ascontiguousarray(np.imag(w), dtype=np.float64)
                acc_im += kernels.weighted_pow_sum(lam, s, wi)
            lam_pow_sum += kernels.pow_sum(lam, s)
            lo = hi + 1
        if T.supports_tail():
            if T.enumeration_sorted():
                t_est, t_err = T.tail_power_sum(s, m_head)
            else:
                z_est, z_err = T.zeta_power_sum(s, T.preferred_head(m_head), chunk)
                t_est = max(z_est - lam_pow_sum, 0.0)
                t_err = z_err
        else:
            raise UnachievableToleranceError(
                f"{T.name}: no tail descriptor; zeta cannot be certified",
                value=complex(acc_re, acc_im),
            )
        d_inf, dev = A.tail_deviation(m_head + 1)
        value = complex(acc_re, acc_im) + complex(d_inf) * t_est
        err = abs(complex(d_inf)) * t_err + dev * (t_est + t_err)
        err += 1e-15 * (abs(value) + lam_pow_sum * A.bound)
        return value, err

    m_head = head
    value, err = attempt(m_head)
    if tol is not None:
        while err > tol and m_head < T.head_limit() and m_head < (1 << 26):
            m_head = min(2 * m_head, T.head_limit(), 1 << 26)
            value, err = attempt(m_head)
        if err > tol:
            raise UnachievableToleranceError(
                f"unachievable tolerance: certified error {err:.3e} > tol {tol:.3e}",
                value=value,
                error=err,
            )
    return value, err


# ---------------------------------------------------------------------------
# ingestion
# ---------------------------------------------------------------------------

_LAW_NAMES = ("power", "dyadic")


def load_operator(obj: dict) -> EigenvalueSequence:
    """Build an eigenvalue sequence from its JSON object form.

    Schema: {"kind": "law"|"list"|"enum", ...} with
      law:  {"name": "power", "coef": c, "power": p} or {"name": "dyadic"}
      list: [mu_1, mu_2, ...] plus optional "finite_rank": false
      enum: {"name": "torus"} or {"name": "nctorus", "theta": t, ...}
      tail: optional relative-slack override
            {"coef", "power", "slack_coef", "slack_power", "start"}
    """
    if not isinstance(obj, dict):
        raise DomainError("operator spec must be a JSON object")
    kind = obj.get("kind")
    if kind not in ("law", "list", "enum"):
        raise DomainError('operator spec field "kind" must be "law", "list", or "enum"')
    if kind == "list":
        data = obj.get("list")
        if not isinstance(data, list) or not data:
            raise DomainError('operator spec field "list" must be a nonempty array')
        return ExplicitSequence(data, finite_rank=bool(obj.get("finite_rank", True)))
    if kind == "law":
        law = obj.get("law")
        if not isinstance(law, dict) or law.get("name") not in _LAW_NAMES:
            raise DomainError(
                f'operator spec field "law.name" must be one of {list(_LAW_NAMES)}'
            )
        if law["name"] == "power":
            seq: EigenvalueSequence = PowerLaw(
                coef=float(law.get("coef", 1.0)), power=float(law.get("power", 1.0))
            )
        else:
            seq = DyadicBlockLaw()
        tail = obj.get("tail")
        if tail is not None:
            try:
                model = TailModel(**tail)
            except TypeError as exc:
                raise DomainError(f'operator spec field "tail" is malformed: {exc}') from exc
            seq.tail_power_sum = model.power_sum_tail  # type: ignore[method-assign]
        return seq
    # enum kind dispatches into the bundled models
    from . import models as _models

    enum = obj.get("enum")
    if not isinstance(enum, dict) or "name" not in enum:
        raise DomainError('operator spec field "enum" must be an object with "name"')
    return _models.model_operator(enum)


def load_observable(obj: dict) -> DiagonalObservable:
    """Build a diagonal observable from its JSON object form.

    Schema: {"kind": "const"|"list"|"decay", ...} with
      const: {"re": x, "im": y} or plain "value": x
      list:  [values...] finitely supported
      decay: {"value": limit, "dev_coef": c, "dev_power": q} meaning
             diag(m) = value + c * m**-q (a concrete convergent diagonal)
    """
    if not isinstance(obj, dict):
        raise DomainError("observable spec must be a JSON object")
    kind = obj.get("kind")
    if kind == "const":
        if "value" in obj:
            if not isinstance(obj["value"], (int, float)):
                raise DomainError(
                    'observable spec field "value" must be a number; '
                    'use "re"/"im" for a complex constant'
                )
            return DiagonalObservable.const(obj["value"])
        return DiagonalObservable.const(complex(obj.get("re", 0.0), obj.get("im", 0.0)))
    if kind == "list":
        data = obj.get("list")
        if not isinstance(data, list):
            raise DomainError('observable spec field "list" must be an array')
        return DiagonalObservable.from_values(data)
    if kind == "decay":
        value = obj.get("value")
        if value is None:
            raise DomainError('observable spec field "value" is required for kind "decay"')
        c = float(obj.get("dev_coef", 0.0))
        q = float(obj.get("dev_power", 1.0))
        if q <= 0:
            raise DomainError('observable spec field "dev_power" must be positive')
        v = float(value)

        def rule(m: np.ndarray, v=v, c=c, q=q) -> np.ndarray:
            return v + c * m.astype(np.float64) ** (-q)

        return DiagonalObservable(
            rule=rule,
            bound=abs(v) + abs(c),
            limit=LimitModel(value=v, dev_coef=abs(c), dev_power=q),
            name=f"decay({v:g},{c:g},{q:g})",
        )
    raise DomainError('observable spec field "kind" must be "const", "list", or "decay"')

"""Sequence transforms and empirical limit estimation.

A generalized limit is a positive shift- and dilation-invariant extension of
the ordinary limit to bounded sequences. None of them is computable, but
their common value on a convergent sequence is, and the transforms they must
respect (shift, dilation, Cesaro averaging, the floor lift to step functions
and the exponential substitution) are all concrete. This module implements
those transforms exactly and estimates limits numerically, reporting either
a converged value with an error bar or an honest enclosing band.

The estimator never claims convergence from smoothing alone: iterated Cesaro
means must settle AND the reported value is clipped into the true envelope of
the raw tail, so a sequence oscillating in [a, b] forever can at best yield
the band [a, b].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np

from ._backend import kernels
from .config import LadderPlan, RunConfig
from .errors import DomainError, InsufficientDataError, InvariantViolation

__all__ = [
    "BoundedSequence",
    "LimitEstimate",
    "StepFunction",
    "ExplicitStep",
    "IntegerLift",
    "ExpSubstituted",
    "shift",
    "dilate",
    "cesaro",
    "limit_estimate",
    "limit_estimate_sampled",
    "average_window",
    "floor_lift",
    "exp_substitute",
    "calL_sequence",
]


# ---------------------------------------------------------------------------
# bounded sequences
# ---------------------------------------------------------------------------


class BoundedSequence:
    """Real sequence a_1, a_2, ... with a declared sup bound.

    The rule receives an int64 index array and must return float64 values.
    max_index None means unbounded data; otherwise access past it raises.
    """

    def __init__(
        self,
        rule: Callable[[np.ndarray], np.ndarray],
        bound: float,
        name: str = "sequence",
        max_index: int | None = None,
    ):
        if not math.isfinite(bound) or bound < 0:
            raise DomainError("sequence bound must be finite and nonnegative")
        self.rule = rule
        self.bound = float(bound)
        self.name = name
        self.max_index = max_index

    @staticmethod
    def from_values(values, pad_zero: bool = False, name: str = "list") -> "BoundedSequence":
        vals = np.asarray(values, dtype=np.float64)
        if vals.ndim != 1 or len(vals) == 0:
            raise DomainError("sequence data must be a nonempty 1-d list")

        if pad_zero:

            def rule(k: np.ndarray, vals=vals) -> np.ndarray:
                out = np.zeros(len(k))
                inside = k <= len(vals)
                out[inside] = vals[k[inside] - 1]
                return out

            max_index = None
        else:

            def rule(k: np.ndarray, vals=vals) -> np.ndarray:
                return vals[k - 1]

            max_index = len(vals)
        bound = float(np.max(np.abs(vals))) if len(vals) else 0.0
        return BoundedSequence(rule, bound, name=name, max_index=max_index)

    def window(self, lo: int, hi: int) -> np.ndarray:
        if lo < 1 or hi < lo:
            raise DomainError("window must satisfy 1 <= lo <= hi")
        if self.max_index is not None and hi > self.max_index:
            raise InsufficientDataError(
                f"{self.name}: insufficient sequence data beyond k={self.max_index}"
            )
        ks = np.arange(lo, hi + 1, dtype=np.int64)
        vals = np.asarray(self.rule(ks), dtype=np.float64)
        if len(vals) != len(ks):
            raise InvariantViolation(f"{self.name}: rule returned wrong window length")
        if np.any(np.abs(vals) > self.bound * (1 + 1e-9) + 1e-300):
            raise InvariantViolation(f"{self.name}: values exceed declared bound")
        return vals

    def value(self, k: int) -> float:
        return float(self.window(k, k)[0])

    def chunks(self, n_max: int, chunk: int) -> Iterator[tuple[int, np.ndarray]]:
        lo = 1
        while lo <= n_max:
            hi = min(lo + chunk - 1, n_max)
            yield lo, self.window(lo, hi)
            lo = hi + 1


def shift(a: BoundedSequence, j: int) -> BoundedSequence:
    """k -> a(k + j); discards the first j terms."""
    if j < 0:
        raise DomainError("shift amount must be nonnegative")
    if j == 0:
        return a
    max_index = None if a.max_index is None else max(a.max_index - j, 0)
    if max_index == 0:
        raise InsufficientDataError(f"{a.name}: shift by {j} exhausts the data")
    return BoundedSequence(
        rule=lambda k, r=a.rule, j=j: np.asarray(r(k + j), dtype=np.float64),
        bound=a.bound,
        name=f"shift({a.name},{j})",
        max_index=max_index,
    )


def dilate(a: BoundedSequence, j: int) -> BoundedSequence:
    """k -> a(ceil(k / j)); repeats each term j times."""
    if j < 1:
        raise DomainError("dilation factor must be a positive integer")
    if j == 1:
        return a
    max_index = None if a.max_index is None else a.max_index * j

    def rule(k: np.ndarray, r=a.rule, j=j) -> np.ndarray:
        return np.asarray(r((k + j - 1) // j), dtype=np.float64)

    return BoundedSequence(rule, a.bound, name=f"dilate({a.name},{j})", max_index=max_index)


def cesaro(a: BoundedSequence, n: int, order: int = 1, chunk: int = 1 << 20) -> float:
    """Iterated arithmetic mean of a_1..a_n, applied `order` times."""
    if order not in (1, 2, 3):
        raise DomainError("cesaro order must be 1, 2, or 3")
    if n < 1:
        raise DomainError("cesaro requires n >= 1")
    state = kernels.new_state()
    cps = np.array([n], dtype=np.int64)
    cp_mean = np.zeros(1)
    cp_raw = np.zeros(1)
    k0 = 0
    ci = 0
    for lo, vals in a.chunks(n, chunk):
        k0, ci = kernels.cesaro_update(
            np.ascontiguousarray(vals), k0, order, n + 1, state, cps, ci, cp_mean, cp_raw
        )
    return float(cp_mean[0])


# ---------------------------------------------------------------------------
# limit estimates
# ---------------------------------------------------------------------------


@dataclass
class LimitEstimate:
    """Outcome of a numerical limit evaluation.

    status "converged": value +- error. status "band": the data stayed inside
    [lo, hi] without settling; value holds the band midpoint for convenience.
    """

    status: str
    value: float
    error: float
    lo: float
    hi: float
    method: str = ""
    detail: dict = field(default_factory=dict)

    @staticmethod
    def converged(value: float, error: float, method: str, **detail) -> "LimitEstimate":
        return LimitEstimate(
            status="converged",
            value=float(value),
            error=float(error),
            lo=float(value - error),
            hi=float(value + error),
            method=method,
            detail=detail,
        )

    @staticmethod
    def band(lo: float, hi: float, method: str, **detail) -> "LimitEstimate":
        if hi < lo:
            lo, hi = hi, lo
        return LimitEstimate(
            status="band",
            value=0.5 * (lo + hi),
            error=0.5 * (hi - lo),
            lo=float(lo),
            hi=float(hi),
            method=method,
            detail=detail,
        )

    @property
    def is_converged(self) -> bool:
        return self.status == "converged"

    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, x: float, slop: float = 0.0) -> bool:
        return self.lo - slop <= x <= self.hi + slop

    def to_dict(self) -> dict:
        out = {
            "status": self.status,
            "value": self.value,
            "error": self.error,
            "lo": self.lo,
            "hi": self.hi,
            "method": self.method,
        }
        if self.detail:
            out["detail"] = {
                k: (v if isinstance(v, (int, float, str, bool, list, dict)) else str(v))
                for k, v in self.detail.items()
            }
        return out


def _verdict_from_checkpoints(
    cp_ns: np.ndarray,
    cp_mean: np.ndarray,
    cp_raw: np.ndarray,
    env_lo: float,
    env_hi: float,
    threshold: float,
    method: str,
) -> LimitEstimate:
    """Shared convergence verdict.

    Convergence is drift of the tail Cesaro means below threshold; the value
    is the final mean clipped into the raw envelope (raw tail checkpoint
    values united with the dense tail envelope when one was scanned). A
    failed drift test reports that raw envelope as the band: it encloses
    every limit point the data can speak for, while the means range alone
    can lag outside it or collapse inside one oscillation phase.
    """
    m = len(cp_mean)
    tail = cp_mean[m // 2 :]
    tail_raw = cp_raw[m // 2 :]
    raw_lo = min(env_lo, float(np.min(tail_raw)))
    raw_hi = max(env_hi, float(np.max(tail_raw)))
    scale = max(1.0, float(np.median(np.abs(tail))))
    drift = float(np.max(tail) - np.min(tail))
    thr = threshold * scale
    if drift <= thr:
        raw = float(tail[-1])
        val = min(max(raw, raw_lo), raw_hi)
        err = drift + 0.5 * thr + abs(raw - val)
        return LimitEstimate.converged(
            val, err, method, drift=drift, checkpoints=m, envelope=[raw_lo, raw_hi]
        )
    return LimitEstimate.band(
        raw_lo,
        raw_hi,
        method,
        drift=drift,
        checkpoints=m,
        means_band=[float(np.min(tail)), float(np.max(tail))],
    )


def _dense_checkpoints(n_min: int, n_max: int, points_per_octave: int) -> np.ndarray:
    if n_min < 1 or n_max < n_min:
        raise DomainError("ladder requires 1 <= n_min <= n_max")
    n_oct = math.log2(n_max / n_min) if n_max > n_min else 0.0
    count = max(2, int(round(n_oct * points_per_octave)) + 1)
    grid = np.unique(
        np.round(n_min * (n_max / n_min) ** np.linspace(0.0, 1.0, count)).astype(np.int64)
    )
    grid = grid[grid >= 1]
    if grid[-1] != n_max:
        grid = np.append(grid, n_max)
    return grid


def limit_estimate(
    a: BoundedSequence,
    plan: LadderPlan | None = None,
    order: int = 1,
    threshold: float = 1e-3,
    points_per_octave: int = 4,
    chunk: int = 1 << 20,
) -> LimitEstimate:
    """Dense-streaming limit estimate of a bounded sequence.

    Every term up to plan.n_max is consumed: iterated Cesaro means are
    recorded at geometric checkpoints and the raw min/max over the final
    half-range forms the envelope. Convergence means the means drifted by
    at most threshold (relative to scale) across the last half of the
    checkpoints; otherwise the result is the band the tail means covered,
    clipped into the envelope.
    """
    plan = plan or LadderPlan()
    if a.max_index is not None and plan.n_max > a.max_index:
        raise InsufficientDataError(
            f"{a.name}: insufficient sequence data for n_max={plan.n_max}"
        )
    cps = _dense_checkpoints(plan.n_min, plan.n_max, points_per_octave)
    tail_start = plan.n_max // 2
    cp_mean = np.zeros(len(cps))
    cp_raw = np.zeros(len(cps))
    state = kernels.new_state()
    k0 = 0
    ci = 0
    for lo, vals in a.chunks(plan.n_max, chunk):
        k0, ci = kernels.cesaro_update(
            np.ascontiguousarray(vals), k0, order, tail_start, state, cps, ci, cp_mean, cp_raw
        )
    env_lo, env_hi = kernels.envelope(state)
    return _verdict_from_checkpoints(
        cps, cp_mean, cp_raw, env_lo, env_hi, threshold, method=f"dense-cesaro-{order}"
    )


def limit_estimate_sampled(
    ns: np.ndarray,
    values: np.ndarray,
    threshold: float = 1e-3,
    errors: np.ndarray | None = None,
    method: str = "sampled",
) -> LimitEstimate:
    """Limit estimate from checkpoint samples of an expensive sequence.

    Running means are taken over the sample sequence itself (geometric
    checkpoints of the underlying index), the envelope over the sampled
    tail values, widened by their certified errors when given.
    """
    ns = np.asarray(ns, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    if len(ns) != len(values) or len(ns) < 4:
        raise InsufficientDataError("sampled limit needs at least 4 aligned samples")
    means = np.cumsum(values) / np.arange(1, len(values) + 1)
    half = len(values) // 2
    errs = np.zeros(len(values)) if errors is None else np.asarray(errors, dtype=np.float64)
    env_lo = float(np.min(values[half:] - errs[half:]))
    env_hi = float(np.max(values[half:] + errs[half:]))
    est = _verdict_from_checkpoints(
        ns, means, values, env_lo, env_hi, threshold, method=method
    )
    if est.is_converged and errors is not None:
        tail_err = float(np.max(errs[half:]))
        est.error += tail_err
        est.lo = est.value - est.error
        est.hi = est.value + est.error
    return est


# ---------------------------------------------------------------------------
# step functions on the half line
# ---------------------------------------------------------------------------


class StepFunction:
    """Right-continuous piecewise-constant function on [domain_start, inf)."""

    domain_start: float = 0.0
    name: str = "step"

    def value(self, t: float) -> float:
        raise NotImplementedError

    def cuts(self, lo: float, hi: float) -> np.ndarray:
        """Discontinuity points strictly inside (lo, hi), ascending."""
        raise NotImplementedError

    def pieces(self, lo: float, hi: float) -> list[tuple[float, float, float]]:
        """Constant pieces (a, b, value) tiling [lo, hi)."""
        if hi <= lo:
            raise DomainError("pieces require lo < hi")
        if lo < self.domain_start - 1e-12:
            raise DomainError(
                f"{self.name}: domain starts at {self.domain_start:g}, got lo={lo:g}"
            )
        pts = np.concatenate(([lo], self.cuts(lo, hi), [hi]))
        return [
            (float(a), float(b), self.value(float(a)))
            for a, b in zip(pts[:-1], pts[1:])
            if b > a
        ]

    def integrate(self, lo: float, hi: float) -> float:
        if hi == lo:
            return 0.0
        return math.fsum(v * (b - a) for a, b, v in self.pieces(lo, hi))


class ExplicitStep(StepFunction):
    """Breakpoints b_0 < ... < b_P with values on [b_i, b_{i+1});
    an optional tail value extends the final piece to infinity."""

    def __init__(self, breakpoints, values, tail_value: float | None = None, name: str = "step"):
        bp = np.asarray(breakpoints, dtype=np.float64)
        vv = np.asarray(values, dtype=np.float64)
        if bp.ndim != 1 or len(bp) < 2 or np.any(np.diff(bp) <= 0):
            raise DomainError("breakpoints must be strictly increasing, length >= 2")
        if len(vv) != len(bp) - 1:
            raise DomainError("need exactly one value per interval")
        self.breakpoints = bp
        self.values_arr = vv
        self.tail_value = tail_value
        self.domain_start = float(bp[0])
        self.name = name

    def value(self, t: float) -> float:
        bp = self.breakpoints
        if t < bp[0]:
            raise DomainError(f"{self.name}: t={t:g} below domain start {bp[0]:g}")
        if t >= bp[-1]:
            if self.tail_value is None:
                raise InsufficientDataError(f"{self.name}: no data at t={t:g}")
            return self.tail_value
        i = int(np.searchsorted(bp, t, side="right")) - 1
        return float(self.values_arr[i])

    def cuts(self, lo: float, hi: float) -> np.ndarray:
        bp = self.breakpoints[1:]
        return bp[(bp > lo) & (bp < hi)]


class IntegerLift(StepFunction):
    """t -> a(floor(t)) for t >= 1; the canonical embedding of sequences."""

    def __init__(self, a: BoundedSequence):
        self.seq = a
        self.domain_start = 1.0
        self.name = f"lift({a.name})"

    def value(self, t: float) -> float:
        if t < 1.0:
            raise DomainError(f"{self.name}: t={t:g} below domain start 1")
        return self.seq.value(int(math.floor(t)))

    def cuts(self, lo: float, hi: float) -> np.ndarray:
        first = math.floor(lo) + 1
        last = math.ceil(hi) - 1
        if last < first:
            return np.zeros(0)
        return np.arange(first, last + 1, dtype=np.float64)


class ExpSubstituted(StepFunction):
    """t -> f(e^t); turns dilation-scale structure into shift-scale structure.

    Requires the inner domain to start at 1 or later so the substituted
    domain stays inside [0, inf).
    """

    def __init__(self, inner: StepFunction):
        if inner.domain_start < 1.0 - 1e-12:
            raise DomainError(
                f"{inner.name}: exp substitution needs domain start >= 1, "
                f"got {inner.domain_start:g}"
            )
        self.inner = inner
        self.domain_start = math.log(max(inner.domain_start, 1.0))
        self.name = f"expsub({inner.name})"

    def value(self, t: float) -> float:
        return self.inner.value(math.exp(t))

    def cuts(self, lo: float, hi: float) -> np.ndarray:
        inner_cuts = self.inner.cuts(math.exp(lo), math.exp(hi))
        return np.log(inner_cuts) if len(inner_cuts) else inner_cuts


def floor_lift(a: BoundedSequence) -> IntegerLift:
    """Embed a sequence as the step function t -> a(floor(t))."""
    return IntegerLift(a)


def exp_substitute(f: StepFunction) -> ExpSubstituted:
    """Precompose a step function with e^t."""
    return ExpSubstituted(f)


def average_window(f: StepFunction, k: int) -> float:
    """Exact integral of f over [k-1, k); the unit-window averaging operator."""
    if k < 1:
        raise DomainError("averaging window index must be >= 1")
    lo = float(k - 1)
    if lo < f.domain_start - 1e-12:
        lo = f.domain_start
        if lo >= k:
            raise DomainError(f"{f.name}: window [{k-1},{k}) misses the domain")
    return f.integrate(lo, float(k))


def calL_sequence(a: BoundedSequence, k: int) -> float:
    """k-th term of the dilation-to-shift transport of a.

    Computed exactly: lift a to a step function, substitute e^t, and average
    over [k-1, k). Term k reads a up to index floor(e^k), so explicit data
    must reach that far.
    """
    if k < 1:
        raise DomainError("transport index must be >= 1")
    need = int(math.floor(math.exp(k)))
    if a.max_index is not None and a.max_index < need:
        raise InsufficientDataError(
            f"{a.name}: insufficient sequence data (need index {need} for k={k})"
        )
    return average_window(exp_substitute(floor_lift(a)), k)

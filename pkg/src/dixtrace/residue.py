"""Weak-trace functionals by two independent routes.

Route one (residue): sample s -> (s - 1) * Tr(diag * T^s) along s = 1 + 1/k
and extrapolate the curve to s = 1. Route two (log average): form the sorted
products diag * lambda, take partial sums over log(1 + N), and extrapolate in
1 / log(1 + N). When an operator pair is measurable the routes agree on one
number; when it is not, both routes report honest enclosing bands and the
diagnostic says so. The routes are deliberately kept independent: they share
no smoothing, no fit, and no tail model plumbing beyond the certified zeta
engine itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._backend import backend_name, kernels
from .config import RunConfig
from .errors import (
    DomainError,
    ExtrapolationUnreliableError,
    RouteUnavailableError,
)
from .genlimits import (
    LimitEstimate,
    _dense_checkpoints,
    _verdict_from_checkpoints,
    limit_estimate_sampled,
)
from .spectral import (
    DiagonalObservable,
    EigenvalueSequence,
    ExplicitSequence,
    ScaledSequence,
    zeta,
)

__all__ = [
    "ResidueCurve",
    "residue_curve",
    "richardson_extrapolate",
    "dixmier_residue",
    "dixmier_log_average",
    "measurability_diagnostic",
]


# ---------------------------------------------------------------------------
# residue route
# ---------------------------------------------------------------------------


@dataclass
class ResidueCurve:
    """Samples of (s - 1) * zeta at s = 1 + 1/k, with certified errors."""

    ks: np.ndarray
    s: np.ndarray
    values: np.ndarray
    errors: np.ndarray

    def __len__(self) -> int:
        return len(self.ks)

    def imag_scale(self) -> float:
        return float(np.max(np.abs(self.values.imag))) if len(self.values) else 0.0

    def is_real(self, tol: float = 1e-9) -> bool:
        scale = max(1.0, float(np.max(np.abs(self.values)))) if len(self.values) else 1.0
        return self.imag_scale() <= tol * scale + float(np.max(self.errors, initial=0.0))

    def csv_rows(self) -> list[tuple]:
        return [
            (int(k), float(s), float(v.real), float(e))
            for k, s, v, e in zip(self.ks, self.s, self.values, self.errors)
        ]


def residue_curve(
    A: DiagonalObservable, T: EigenvalueSequence, config: RunConfig | None = None
) -> ResidueCurve:
    """Evaluate the weighted zeta residue curve along the configured ladder."""
    config = config or RunConfig()
    ks = np.asarray(config.ladder.checkpoints(), dtype=np.int64)
    ss = 1.0 + 1.0 / ks.astype(np.float64)
    head = T.preferred_head(config.zeta_head)
    values = np.empty(len(ks), dtype=np.complex128)
    errors = np.empty(len(ks), dtype=np.float64)
    for i, s in enumerate(ss):
        v, e = zeta(A, T, float(s), tol=None, head=head, chunk=config.chunk)
        x = float(s) - 1.0
        values[i] = x * v
        errors[i] = x * e
    return ResidueCurve(ks=ks, s=ss, values=values, errors=errors)


def richardson_extrapolate(
    s: np.ndarray,
    values: np.ndarray,
    errors: np.ndarray | None = None,
    order: int = 2,
) -> tuple[float, float, dict]:
    """Extrapolate real curve samples to s = 1 by a least-squares polynomial
    in (s - 1).

    Returns (intercept, error, diagnostics). Raises when the polynomial
    model demonstrably does not describe the data (residual far above the
    certified sample errors), which is exactly what happens for
    non-measurable operators; callers then fall back to band reporting.
    """
    s = np.asarray(s, dtype=np.float64)
    y = np.asarray(values, dtype=np.float64)
    if len(s) != len(y) or len(s) < order + 2:
        raise DomainError(f"extrapolation needs at least {order + 2} samples")
    if order < 1 or order > 6:
        raise DomainError("extrapolation order must be in 1..6")
    errs = np.zeros(len(y)) if errors is None else np.asarray(errors, dtype=np.float64)
    x = s - 1.0
    x_scale = float(np.max(np.abs(x)))
    if x_scale <= 0:
        raise DomainError("degenerate sample abscissae")
    design = np.vander(x / x_scale, order + 1, increasing=True)
    coef, _, rank, sv = np.linalg.lstsq(design, y, rcond=None)
    cond = float(sv[0] / sv[-1]) if sv[-1] > 0 else math.inf
    fitted = design @ coef
    residual_rms = float(np.sqrt(np.mean((y - fitted) ** 2)))
    b0 = float(coef[0])
    med_err = float(np.median(errs))
    scale = max(1.0, abs(b0))
    diagnostics = {
        "order": order,
        "residual_rms": residual_rms,
        "condition": cond,
        "median_point_error": med_err,
        "intercept": b0,
        "samples": int(len(y)),
    }
    if rank < order + 1 or cond > 1e10:
        raise ExtrapolationUnreliableError(
            f"extrapolation ill conditioned (cond={cond:.2e})", diagnostics=diagnostics
        )
    model_tol = max(5.0 * med_err, 2e-4 * scale)
    if residual_rms > model_tol:
        raise ExtrapolationUnreliableError(
            f"polynomial model rejected: residual {residual_rms:.3e} "
            f"exceeds tolerance {model_tol:.3e}",
            diagnostics=diagnostics,
        )
    # truncation proxy: intercept movement when the order drops by one
    if order >= 2:
        coef1, *_ = np.linalg.lstsq(design[:, :order], y, rcond=None)
        trunc = abs(b0 - float(coef1[0]))
    else:
        trunc = residual_rms
    err = 2.0 * residual_rms + trunc + 2.0 * med_err
    diagnostics["truncation_proxy"] = trunc
    return b0, err, diagnostics


def _estimate_from_curve(
    ks: np.ndarray,
    values: np.ndarray,
    errors: np.ndarray,
    config: RunConfig,
    method: str,
) -> LimitEstimate:
    try:
        b0, err, diag = richardson_extrapolate(
            1.0 + 1.0 / ks.astype(np.float64),
            values,
            errors,
            order=config.extrapolation_order,
        )
        err = max(err, config.error_floor)
        est = LimitEstimate.converged(b0, err, method=f"{method}-extrapolated", **diag)
    except ExtrapolationUnreliableError as exc:
        est = limit_estimate_sampled(
            ks.astype(np.float64),
            values,
            threshold=config.threshold,
            errors=errors,
            method=f"{method}-band",
        )
        est.detail["extrapolation_rejected"] = str(exc)
    return est


def dixmier_residue(
    A: DiagonalObservable, T: EigenvalueSequence, config: RunConfig | None = None
) -> LimitEstimate:
    """Residue-route value of the weak trace pairing.

    Converged results come from polynomial extrapolation of the residue
    curve; when the curve oscillates too much for any polynomial the result
    degrades to the band its tail occupies. Complex diagonals are handled
    componentwise and must converge in both components.
    """
    config = config or RunConfig()
    curve = residue_curve(A, T, config)
    re_vals = curve.values.real.copy()
    if curve.is_real():
        est = _estimate_from_curve(curve.ks, re_vals, curve.errors, config, "residue")
    else:
        est = _estimate_from_curve(curve.ks, re_vals, curve.errors, config, "residue")
        im = _estimate_from_curve(
            curve.ks, curve.values.imag.copy(), curve.errors, config, "residue-imag"
        )
        if est.is_converged and im.is_converged:
            est.detail["value_im"] = im.value
            est.detail["error_im"] = im.error
        else:
            # component bands cannot be merged into one complex statement;
            # degrade to the real-part band and flag it
            est = (
                est
                if not est.is_converged
                else limit_estimate_sampled(
                    curve.ks.astype(np.float64),
                    re_vals,
                    threshold=config.threshold,
                    errors=curve.errors,
                    method="residue-band",
                )
            )
            est.detail["imag_unresolved"] = True
    est.detail["curve"] = {
        "k": [int(k) for k in curve.ks],
        "s": [float(v) for v in curve.s],
        "value": [float(v) for v in re_vals],
        "value_im": [float(v) for v in curve.values.imag],
        "error": [float(e) for e in curve.errors],
    }
    return est


# ---------------------------------------------------------------------------
# log-average route
# ---------------------------------------------------------------------------


def _sorted_products(
    A: DiagonalObservable, T: EigenvalueSequence, need: int, config: RunConfig
) -> ExplicitSequence:
    """Materialize the top `need` values of diag(m) * lambda_m, certified.

    Every product not materialized is bounded by A.bound times the largest
    eigenvalue beyond the enumeration head; sorted entries above that bound
    are provably the true top of the product spectrum.
    """
    m_head = min(T.head_limit(), config.enum_budget)
    if need > m_head:
        raise RouteUnavailableError(
            f"log-average route needs {need} certified products; "
            f"enumeration budget is {m_head}"
        )
    lam = np.empty(m_head, dtype=np.float64)
    dvals = np.empty(m_head, dtype=np.float64)
    lo = 1
    while lo <= m_head:
        hi = min(lo + config.chunk - 1, m_head)
        lam[lo - 1 : hi] = T.lam_window(lo, hi)
        dvals[lo - 1 : hi] = np.real(A.window(lo, hi))
        lo = hi + 1
    if np.any(dvals < -1e-12):
        raise RouteUnavailableError("log-average route requires a nonnegative diagonal")
    prod = lam * np.maximum(dvals, 0.0)
    prod[::-1].sort()  # descending
    beyond = A.bound * T.enum_sup_beyond(m_head)
    certified = int(np.searchsorted(-prod, -beyond, side="left"))
    if certified < need:
        raise RouteUnavailableError(
            f"cannot certify product ordering to depth {need}: only {certified} "
            f"entries dominate the un-enumerated bound {beyond:.3e}"
        )
    return ExplicitSequence(prod[:need], finite_rank=False, name="products")


def _gamma_checkpoints(
    P: EigenvalueSequence, cps: np.ndarray, chunk: int
) -> np.ndarray:
    sums = P.prefix_sums(cps, chunk)
    return sums / np.log1p(cps.astype(np.float64))


def _gamma_dense_band(
    P: EigenvalueSequence, config: RunConfig, order: int
) -> LimitEstimate:
    """Dense Cesaro scan of the whole log-average sequence."""
    n_max = min(config.ladder.n_max, P.head_limit())
    cps = _dense_checkpoints(config.ladder.n_min, n_max, config.points_per_octave)
    tail_start = n_max // 2
    cp_mean = np.zeros(len(cps))
    cp_raw = np.zeros(len(cps))
    sum_state = kernels.new_state()
    ces_state = kernels.new_state()
    k0 = 0
    ci = 0
    for vals in P.mu_chunks(n_max, config.chunk):
        pref = kernels.kahan_cumsum(np.ascontiguousarray(vals), sum_state)
        ns = np.arange(k0 + 1, k0 + len(vals) + 1, dtype=np.float64)
        gam = np.ascontiguousarray(pref / np.log1p(ns))
        k0, ci = kernels.cesaro_update(
            gam, k0, order, tail_start, ces_state, cps, ci, cp_mean, cp_raw
        )
    env_lo, env_hi = kernels.envelope(ces_state)
    return _verdict_from_checkpoints(
        cps, cp_mean, cp_raw, env_lo, env_hi, config.threshold, method="log-average-band"
    )


def dixmier_log_average(
    A: DiagonalObservable, T: EigenvalueSequence, config: RunConfig | None = None
) -> LimitEstimate:
    """Log-average route of the weak trace pairing.

    Only defined for real nonnegative diagonals (the route evaluates the
    trace of the positive operator obtained by absorbing diag into T). The
    partial-sum-over-log sequence is fit affinely with curvature in
    1 / log(1 + N); a rejected fit falls back to the dense Cesaro band of
    the same sequence.
    """
    config = config or RunConfig()
    if not A.is_real_nonneg():
        raise RouteUnavailableError(
            "log-average route unavailable: diagonal is not real nonnegative"
        )
    cps = np.asarray(config.ladder.checkpoints(), dtype=np.int64)
    if A.constant is not None:
        c = complex(A.constant).real
        if c == 0.0:
            est = LimitEstimate.converged(
                0.0, config.error_floor, method="log-average-zero"
            )
            est.detail["gamma"] = {
                "N": [int(n) for n in cps],
                "gamma": [0.0] * len(cps),
            }
            return est
        P: EigenvalueSequence = ScaledSequence(T, c) if c != 1.0 else T
    else:
        P = _sorted_products(A, T, int(cps[-1]), config)
    gam = _gamma_checkpoints(P, cps, config.chunk)
    est = _fit_gamma(cps, gam, P, config)
    est.detail["gamma"] = {
        "N": [int(n) for n in cps],
        "gamma": [float(g) for g in gam],
    }
    return est


def _fit_gamma(
    cps: np.ndarray, gam: np.ndarray, P: EigenvalueSequence, config: RunConfig
) -> LimitEstimate:
    x = 1.0 / np.log1p(cps.astype(np.float64))
    design = np.vander(x / x[0], 3, increasing=True)
    coef, _, _, sv = np.linalg.lstsq(design, gam, rcond=None)
    fitted = design @ coef
    residual_rms = float(np.sqrt(np.mean((gam - fitted) ** 2)))
    b0 = float(coef[0])
    scale = max(1.0, abs(b0))
    fit_ok = residual_rms <= 1e-3 * scale and (sv[-1] > 0 and sv[0] / sv[-1] < 1e10)
    if fit_ok:
        half = len(cps) // 2
        coef_h, *_ = np.linalg.lstsq(design[half:], gam[half:], rcond=None)
        drift = abs(b0 - float(coef_h[0]))
        coef_1, *_ = np.linalg.lstsq(design[:, :2], gam, rcond=None)
        trunc = abs(b0 - float(coef_1[0]))
        value = b0
        clip = 0.0
        if value < 0.0:
            clip = -value
            value = 0.0
        err = 2.0 * residual_rms + drift + trunc + clip + config.error_floor
        return LimitEstimate.converged(
            value,
            err,
            method="log-average-fit",
            residual_rms=residual_rms,
            drift=drift,
            truncation_proxy=trunc,
            intercept=b0,
        )
    est = _gamma_dense_band(P, config, config.cesaro_order)
    est.detail["fit_rejected"] = {
        "residual_rms": residual_rms,
        "intercept": b0,
    }
    return est


# ---------------------------------------------------------------------------
# cross-check
# ---------------------------------------------------------------------------


def _json_value(est: LimitEstimate):
    if "value_im" in est.detail:
        return [est.value, est.detail["value_im"]]
    return est.value


def measurability_diagnostic(
    A: DiagonalObservable, T: EigenvalueSequence, config: RunConfig | None = None
) -> dict:
    """Run both routes and classify the pair.

    measurable: both routes converge and agree within the configured
    tolerance (or only the residue route applies and converges).
    non-measurable: both routes report overlapping bands much wider than
    the numerical error budget.
    inconclusive: anything else, with all route output attached.
    """
    config = config or RunConfig()
    res = dixmier_residue(A, T, config)
    log_est: LimitEstimate | None
    try:
        log_est = dixmier_log_average(A, T, config)
        log_reason = None
    except RouteUnavailableError as exc:
        log_est = None
        log_reason = str(exc)

    scale = max(1.0, abs(res.value))
    budget = config.band_budget_factor * max(
        config.threshold * scale,
        float(np.median(res.detail["curve"]["error"])) if "curve" in res.detail else 0.0,
    )
    report: dict = {
        "verdict": "inconclusive",
        "routes": {
            "residue": res.to_dict(),
            "log_average": log_est.to_dict() if log_est is not None else None,
        },
        "config_echo": {**config.to_dict(), "backend": backend_name()},
    }
    if log_reason is not None:
        report["routes"]["log_average_unavailable"] = log_reason

    if res.is_converged and log_est is None:
        report["verdict"] = "measurable"
        report["value"] = _json_value(res)
        report["error"] = res.error
        return report
    if log_est is None:
        report["band"] = [res.lo, res.hi]
        return report
    if res.is_converged and log_est.is_converged:
        gap = abs(res.value - log_est.value)
        tol = config.agreement_tol * scale + res.error + log_est.error
        report["agreement_gap"] = gap
        report["agreement_tolerance"] = tol
        if gap <= tol:
            report["verdict"] = "measurable"
            report["value"] = _json_value(res)
            report["error"] = max(res.error, gap)
        return report
    if not res.is_converged and not log_est.is_converged:
        lo = max(res.lo, log_est.lo)
        hi = min(res.hi, log_est.hi)
        report["band_overlap"] = [lo, hi] if hi >= lo else None
        widths_ok = min(res.width(), log_est.width()) >= budget
        if hi >= lo and widths_ok:
            report["verdict"] = "non-measurable"
            report["band"] = [lo, hi]
        return report
    return report

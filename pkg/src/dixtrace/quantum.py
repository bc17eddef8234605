"""Vector-state structure of the normalized weak trace.

Normalizing the weak trace of T to one turns A -> trace(diag * T) / trace(T)
into a state on bounded diagonals. The structural fact realized here
numerically: that state is a generalized limit of the diagonal sequence
itself, so whenever diag(m) actually converges, the normalized pairing must
reproduce the ordinary limit, whatever the underlying operator. The
structure check runs the two computations by disjoint code paths (residue
curve versus dense Cesaro scan) and reports their agreement.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import RunConfig
from .errors import IllPosedError
from .genlimits import BoundedSequence, LimitEstimate, limit_estimate
from .residue import dixmier_residue
from .spectral import DiagonalObservable, EigenvalueSequence

__all__ = [
    "NormalizedIntegral",
    "theta_pairing",
    "phi",
    "diagonal_limit",
    "structure_check",
]


@dataclass
class NormalizedIntegral:
    """An operator together with its certified weak-trace normalization."""

    T: EigenvalueSequence
    normalization: LimitEstimate
    config: RunConfig

    @staticmethod
    def build(T: EigenvalueSequence, config: RunConfig | None = None) -> "NormalizedIntegral":
        config = config or RunConfig()
        one = DiagonalObservable.const(1.0, name="one")
        norm = dixmier_residue(one, T, config)
        if not norm.is_converged:
            raise IllPosedError(
                "normalization is not well posed: the weak trace of the operator "
                f"did not converge (band [{norm.lo:.4g}, {norm.hi:.4g}])"
            )
        if norm.value - norm.error <= 0.0:
            raise IllPosedError(
                "normalization is not well posed: weak trace "
                f"{norm.value:.4g} +- {norm.error:.4g} is not certified positive"
            )
        return NormalizedIntegral(T=T, normalization=norm, config=config)


def theta_pairing(I: NormalizedIntegral, A: DiagonalObservable) -> LimitEstimate:
    """Unnormalized pairing: the residue-route weak trace of diag * T."""
    return dixmier_residue(A, I.T, I.config)


def _interval_divide(num: LimitEstimate, den: LimitEstimate) -> tuple[float, float, float]:
    """(value, lo, hi) of num / den for a certified-positive denominator."""
    cands = [
        num.lo / den.lo,
        num.lo / den.hi,
        num.hi / den.lo,
        num.hi / den.hi,
    ]
    return num.value / den.value, min(cands), max(cands)


def phi(I: NormalizedIntegral, A: DiagonalObservable) -> LimitEstimate:
    """Normalized pairing phi(A) = trace(diag * T) / trace(T), with interval
    division absorbing both routes' certified errors."""
    num = theta_pairing(I, A)
    den = I.normalization
    value, lo, hi = _interval_divide(num, den)
    if num.is_converged:
        est = LimitEstimate.converged(
            value,
            max(hi - value, value - lo),
            method="phi",
            numerator=num.value,
            normalization=den.value,
        )
        if "value_im" in num.detail:
            est.detail["value_im"] = num.detail["value_im"] / den.value
            est.detail["error_im"] = (
                num.detail["error_im"] / den.value
                + abs(est.detail["value_im"]) * den.error / den.value
            )
    else:
        est = LimitEstimate.band(lo, hi, method="phi-band", normalization=den.value)
    est.detail["numerator_status"] = num.status
    if "curve" in num.detail:
        est.detail["curve"] = num.detail["curve"]
    return est


def diagonal_limit(
    A: DiagonalObservable,
    config: RunConfig | None = None,
    threshold: float | None = None,
) -> LimitEstimate:
    """Dense Cesaro limit estimate of the diagonal sequence itself."""
    config = config or RunConfig()

    def rule(k: np.ndarray) -> np.ndarray:
        return np.real(A.rule(k)).astype(np.float64)

    seq = BoundedSequence(rule, bound=A.bound, name=f"diag({A.name})")
    return limit_estimate(
        seq,
        plan=config.dense_ladder,
        order=config.cesaro_order,
        threshold=config.threshold if threshold is None else threshold,
        points_per_octave=config.points_per_octave,
        chunk=config.chunk,
    )


def structure_check(
    A: DiagonalObservable,
    I: NormalizedIntegral,
    config: RunConfig | None = None,
) -> dict:
    """Compare phi(A) against the limit of the diagonal sequence.

    Agreement for a convergent diagonal is the numerical trace of the
    eigenvector characterization; the report also carries the sampled
    diagonal for plotting.
    """
    config = config or I.config
    p = phi(I, A)
    dl = diagonal_limit(A, config, threshold=config.agreement_tol)
    scale = max(1.0, abs(p.value), abs(dl.value))
    if p.is_converged and dl.is_converged:
        gap = abs(p.value - dl.value)
        tol = config.agreement_tol * scale + p.error + dl.error
        agreement = {
            "kind": "value",
            "gap": gap,
            "tolerance": tol,
            "agree": bool(gap <= tol),
        }
    else:
        lo = max(p.lo, dl.lo)
        hi = min(p.hi, dl.hi)
        agreement = {
            "kind": "overlap",
            "overlap": [lo, hi] if hi >= lo else None,
            "agree": bool(hi >= lo),
        }
    ns = np.asarray(config.dense_ladder.checkpoints(), dtype=np.int64)
    diag_samples = np.real(A.window(1, int(min(4096, ns[-1]))))
    report = {
        "phi": p.to_dict(),
        "diagonal_limit": dl.to_dict(),
        "agreement": agreement,
        "diag_head": {
            "m": [int(i) for i in range(1, len(diag_samples) + 1)],
            "value": [float(v) for v in diag_samples],
        },
    }
    return report

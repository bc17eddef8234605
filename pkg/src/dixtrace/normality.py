"""Domination witnesses and monotone convergence for the normalized pairing.

Normality of a state shows up in two finitary ways this module makes
checkable. First, domination: a family of mode profiles is dominated by a
single profile, either literally (sampled profiles on a shared grid, compared
pointwise) or through the algebra (a probe element close to a projection
clips every basis mode to the same length as the reference mode, verified
through the twisted product on finite supports). Second, monotone
convergence: truncating a nonnegative diagonal from above by an increasing
sequence of levels must push the normalized pairing monotonically up to its
untruncated value.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import RunConfig
from .errors import DomainError, InvariantViolation
from .models import (
    FourierElement,
    gns_norm,
    nct_involution,
    nct_product,
    nct_tau0,
)
from .quantum import NormalizedIntegral, phi
from .spectral import DiagonalObservable, LimitModel

__all__ = [
    "GridProfileWitness",
    "ProjectionProfileWitness",
    "approximate_projection",
    "dominated_check",
    "truncate_observable",
    "monotone_convergence_check",
]


# ---------------------------------------------------------------------------
# witnesses
# ---------------------------------------------------------------------------


@dataclass
class GridProfileWitness:
    """Mode profiles sampled on a shared grid. encoding = "grid"."""

    grid: np.ndarray
    rows: np.ndarray  # shape (modes, len(grid))
    labels: list = field(default_factory=list)
    encoding: str = "grid"

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=np.float64)
        self.rows = np.atleast_2d(np.asarray(self.rows, dtype=np.float64))
        if self.rows.shape[1] != len(self.grid):
            raise DomainError("profile rows must match the grid length")
        if not self.labels:
            self.labels = [f"mode{i}" for i in range(self.rows.shape[0])]
        if len(self.labels) != self.rows.shape[0]:
            raise DomainError("need one label per profile row")


@dataclass
class ProjectionProfileWitness:
    """Lengths of basis modes clipped by a probe element. encoding = "projection".

    The profile of mode (m, n) is the norm of p * u^m v^n in the coefficient
    space. Right multiplication by a unitary monomial only permutes and
    rephases coefficients, so for any probe these lengths all agree with the
    length of p itself; the check makes that concrete on finite supports.
    """

    element: FourierElement
    modes: list
    idempotency_defect: float = 0.0
    selfadjoint_defect: float = 0.0
    encoding: str = "projection"

    def with_modes(self, modes) -> "ProjectionProfileWitness":
        return ProjectionProfileWitness(
            element=self.element,
            modes=[(int(m), int(n)) for m, n in modes],
            idempotency_defect=self.idempotency_defect,
            selfadjoint_defect=self.selfadjoint_defect,
        )

    def mode_norms(self) -> np.ndarray:
        p = self.element
        out = np.empty(len(self.modes), dtype=np.float64)
        for i, (m, n) in enumerate(self.modes):
            h = FourierElement(p.theta, {(int(m), int(n)): 1.0 + 0.0j})
            out[i] = gns_norm(nct_product(p, h))
        return out


def _smooth_step(x: np.ndarray) -> np.ndarray:
    """Infinitely differentiable ramp: 0 at and below 0, 1 at and above 1."""
    x = np.clip(np.asarray(x, dtype=np.float64), 0.0, 1.0)
    a = np.zeros_like(x)
    b = np.zeros_like(x)
    pos = x > 0.0
    a[pos] = np.exp(-1.0 / x[pos])
    neg = x < 1.0
    b[neg] = np.exp(-1.0 / (1.0 - x[neg]))
    return a / (a + b)


def approximate_projection(
    theta: float,
    seed: int = 0,
    mode_cap: int = 288,
    grid: int = 1 << 12,
    tail_tol: float = 1e-9,
) -> ProjectionProfileWitness:
    """Randomized finite-Fourier element close to a self-adjoint idempotent.

    Draws a smooth plateau profile f of unit height and area theta on the
    circle (random position, random ramp width) plus the matching edge bump
    g = sqrt(f(1-f)) on the falling ramp, and assembles

        p = g(u) v* + f(u) + v g(u).

    The plateau identities f(t) + f(t - theta) = 1 on the bump and
    f(1-f) = g^2 + g(. + theta)^2 make p exactly idempotent at the function
    level, so the only defects come from clipping the Fourier series at a
    finite mode cap. The cap is grown until the clipped tail mass falls
    below tail_tol or the budget runs out. With probability one half the
    complement 1 - p is returned instead.
    """
    theta = float(theta)
    if not 0.0 < theta < 1.0:
        raise DomainError("rotation parameter must lie strictly between 0 and 1")
    margin = min(theta, 1.0 - theta)
    if margin < 1e-3:
        raise DomainError("rotation parameter too close to an integer for a plateau")
    rng = np.random.default_rng(seed)
    eps = (0.55 + 0.35 * rng.random()) * margin
    offset = rng.random()
    flip = bool(rng.random() < 0.5)

    t = (np.arange(grid) / grid - offset) % 1.0
    f = np.zeros(grid)
    rise = t < eps
    f[rise] = _smooth_step(t[rise] / eps)
    f[(t >= eps) & (t <= theta)] = 1.0
    fall = (t > theta) & (t < theta + eps)
    f[fall] = 1.0 - _smooth_step((t[fall] - theta) / eps)
    g = np.zeros(grid)
    g[fall] = np.sqrt(f[fall] * (1.0 - f[fall]))

    fc = np.fft.fft(f) / grid
    gc = np.fft.fft(g) / grid
    freqs = np.rint(np.fft.fftfreq(grid, d=1.0 / grid)).astype(np.int64)
    order = np.argsort(np.abs(freqs), kind="stable")
    csum = np.cumsum((np.abs(fc) ** 2 + np.abs(gc) ** 2)[order])
    af = np.abs(freqs)[order]
    total = float(csum[-1])
    cap = mode_cap
    for k in range(8, mode_cap + 1):
        kept = float(csum[np.searchsorted(af, k, side="right") - 1])
        if total - kept <= tail_tol * tail_tol:
            cap = k
            break

    lam = complex(np.exp(2j * np.pi * theta))
    coeffs: dict[tuple[int, int], complex] = {}
    for k in range(-cap, cap + 1):
        # enforce exact hermitian symmetry of the sampled coefficients
        fk = complex(0.5 * (fc[k % grid] + np.conj(fc[(-k) % grid])))
        gk = complex(0.5 * (gc[k % grid] + np.conj(gc[(-k) % grid])))
        if fk != 0.0:
            coeffs[(k, 0)] = fk
        if gk != 0.0:
            coeffs[(k, -1)] = gk
            coeffs[(k, 1)] = gk * lam**k
    if flip:
        coeffs = {key: -c for key, c in coeffs.items()}
        coeffs[(0, 0)] = 1.0 + coeffs.get((0, 0), 0.0)

    p = FourierElement(theta, coeffs)
    idem = gns_norm(nct_product(p, p) - p)
    sa = gns_norm(p - nct_involution(p))
    return ProjectionProfileWitness(
        element=p,
        modes=[],
        idempotency_defect=float(idem),
        selfadjoint_defect=float(sa),
    )


# ---------------------------------------------------------------------------
# domination check
# ---------------------------------------------------------------------------


def dominated_check(family, dominator, tol: float = 1e-9, defect_tol: float = 1e-6) -> dict:
    """Verify that every profile in `family` is dominated by `dominator`.

    Both witnesses must use the same encoding; mixing a grid witness with a
    projection witness is meaningless and raises. For the projection encoding
    the witnesses must share one probe element, the dominator names a single
    reference mode, and the probe's idempotency and self-adjointness defects
    must both sit below defect_tol for the verdict to pass.
    """
    if getattr(family, "encoding", None) != getattr(dominator, "encoding", None):
        raise DomainError(
            "incomparable profile encodings: "
            f"{getattr(family, 'encoding', '?')} vs {getattr(dominator, 'encoding', '?')}"
        )
    if family.encoding == "grid":
        if len(family.grid) != len(dominator.grid) or np.any(
            np.abs(family.grid - dominator.grid) > 1e-12
        ):
            raise DomainError("grid witnesses sample different grids; cannot compare")
        if dominator.rows.shape[0] != 1:
            raise DomainError("dominator witness must carry exactly one profile")
        dom = dominator.rows[0]
        excess = family.rows - dom[None, :]
        worst = float(np.max(excess))
        worst_idx = np.unravel_index(int(np.argmax(excess)), excess.shape)
        return {
            "encoding": "grid",
            "passed": bool(worst <= tol),
            "max_excess": worst,
            "worst_mode": str(family.labels[worst_idx[0]]),
            "worst_point": float(family.grid[worst_idx[1]]),
            "tolerance": tol,
            "modes": int(family.rows.shape[0]),
        }
    if family.encoding == "projection":
        if family.element.theta != dominator.element.theta:
            raise DomainError("projection witnesses use different rotation parameters")
        if gns_norm(family.element - dominator.element) > 1e-12:
            raise DomainError("projection witnesses probe different elements")
        if len(dominator.modes) != 1:
            raise DomainError("dominator witness must carry exactly one reference mode")
        ref = float(dominator.mode_norms()[0])
        lengths = family.mode_norms()
        excess = lengths - ref
        worst = float(np.max(excess)) if len(excess) else 0.0
        gap = float(np.max(np.abs(excess))) if len(excess) else 0.0
        idem = dominator.idempotency_defect
        sa = dominator.selfadjoint_defect
        passed = worst <= tol and idem <= defect_tol and sa <= defect_tol
        return {
            "encoding": "projection",
            "passed": bool(passed),
            "max_excess": worst,
            "max_equality_gap": gap,
            "reference_mode": [int(dominator.modes[0][0]), int(dominator.modes[0][1])],
            "reference_length": ref,
            "probe_trace": complex(nct_tau0(dominator.element)).real,
            "idempotency_defect": idem,
            "selfadjoint_defect": sa,
            "defect_tolerance": defect_tol,
            "tolerance": tol,
            "modes": len(family.modes),
        }
    raise DomainError(f"unknown profile encoding {family.encoding!r}")


# ---------------------------------------------------------------------------
# monotone convergence
# ---------------------------------------------------------------------------


def truncate_observable(A: DiagonalObservable, level: float) -> DiagonalObservable:
    """Pointwise min with a level; keeps the limit model honest."""
    if level < 0:
        raise DomainError("truncation level must be nonnegative")
    limit = None
    if A.limit is not None:
        lv = complex(A.limit.value)
        limit = LimitModel(
            value=min(lv.real, level),
            dev_coef=A.limit.dev_coef,
            dev_power=A.limit.dev_power,
            start=A.limit.start,
        )

    def rule(m: np.ndarray, r=A.rule, level=level) -> np.ndarray:
        return np.minimum(np.real(np.asarray(r(m))), level)

    return DiagonalObservable(
        rule=rule,
        bound=min(A.bound, level),
        limit=limit,
        name=f"min({A.name},{level:g})",
        constant=None
        if A.constant is None
        else min(complex(A.constant).real, level),
    )


def monotone_convergence_check(
    A: DiagonalObservable,
    I: NormalizedIntegral,
    levels,
    config: RunConfig | None = None,
    probe: int = 4096,
) -> dict:
    """Increasing truncations of a nonnegative diagonal must push the
    normalized pairing monotonically up to its full value.

    Checks three things: the truncated diagonals really are pointwise
    monotone (sampled), the phi values never decrease beyond error slack,
    and the final level reproduces phi(A) within the agreement tolerance.
    """
    config = config or I.config
    levels = [float(t) for t in levels]
    if len(levels) < 2 or any(b <= a for a, b in zip(levels, levels[1:])):
        raise DomainError("need at least two strictly increasing levels")
    if not A.is_real_nonneg(probe):
        raise DomainError("monotone convergence requires a real nonnegative diagonal")

    truncated = [truncate_observable(A, t) for t in levels]
    base = np.real(A.window(1, probe))
    prev = None
    for t, At in zip(levels, truncated):
        cur = np.real(At.window(1, probe))
        if np.any(cur > base + 1e-12):
            raise InvariantViolation("truncation exceeded the original diagonal")
        if prev is not None and np.any(cur < prev - 1e-12):
            raise InvariantViolation("truncation family is not pointwise monotone")
        prev = cur

    phis = [phi(I, At) for At in truncated]
    target = phi(I, A)
    values = [p.value for p in phis]
    errors = [p.error for p in phis]
    monotone_ok = all(
        values[i + 1] >= values[i] - (errors[i] + errors[i + 1])
        for i in range(len(values) - 1)
    )
    scale = max(1.0, abs(target.value))
    final_gap = abs(values[-1] - target.value)
    final_tol = config.agreement_tol * scale + errors[-1] + target.error
    passed = bool(monotone_ok and final_gap <= final_tol and target.is_converged)
    return {
        "passed": passed,
        "monotone": bool(monotone_ok),
        "levels": levels,
        "phi_values": [float(v) for v in values],
        "phi_errors": [float(e) for e in errors],
        "target": target.to_dict(),
        "final_gap": float(final_gap),
        "final_tolerance": float(final_tol),
    }

"""Worked operator models: the circle and the rotation algebra.

Both models pair an eigenvalue sequence with natural diagonal observables.
The circle model is the order (-1) pseudodifferential situation in one
dimension: eigenvalue 1/|k| at frequency k with the constant mode removed,
multiplication operators as observables. The rotation-algebra model is its
two dimensional noncommutative sibling: the inverse lattice Laplacian with
eigenvalues 1/(m^2 + n^2), observables given by algebra elements acting on
the canonical trace representation, where every basis vector sees exactly
the zero mode coefficient of the element.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, InsufficientDataError
from .spectral import (
    DiagonalObservable,
    EigenvalueSequence,
    LimitModel,
    TailModel,
    _em_tail_power,
)

__all__ = [
    "cantor_enum",
    "cantor_enum_array",
    "TorusFunction",
    "TorusInvLaplacian",
    "torus_multiplier_diag",
    "FourierElement",
    "nct_product",
    "nct_involution",
    "nct_tau0",
    "gns_norm",
    "nct_identity",
    "nct_unitary_u",
    "nct_unitary_v",
    "NctInvLaplacian",
    "nct_diag",
    "model_operator",
    "MODELS",
]


# ---------------------------------------------------------------------------
# square-spiral enumeration of the integer lattice
# ---------------------------------------------------------------------------


def _shell_of(k: int) -> int:
    """Shell index of spiral position k >= 2 (shell r spans
    (2r-1)^2 + 1 .. (2r+1)^2)."""
    r = max(1, int(math.ceil((math.sqrt(k) - 1.0) / 2.0)))
    # float sqrt can misround near shell boundaries; correct with exact ints
    while (2 * r + 1) ** 2 < k:
        r += 1
    while r > 1 and (2 * r - 1) ** 2 >= k:
        r -= 1
    return r


def cantor_enum(k: int) -> tuple[int, int]:
    """k-th lattice point (1-based) of the counterclockwise square spiral.

    k = 1 is the origin; shell r >= 1 covers indices (2r-1)^2 + 1 through
    (2r+1)^2, starting at (r, 0) and walking counterclockwise.
    """
    if k < 1:
        raise DomainError("enumeration index must be >= 1")
    if k == 1:
        return (0, 0)
    r = _shell_of(k)
    t = k - (2 * r - 1) ** 2 - 1  # position within the shell, 0 .. 8r-1
    if t <= r:
        return (r, t)
    if t <= 3 * r:
        return (r - (t - r), r)
    if t <= 5 * r:
        return (-r, r - (t - 3 * r))
    if t <= 7 * r:
        return (-r + (t - 5 * r), -r)
    return (r, -r + (t - 7 * r))


def cantor_enum_array(ks: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized square spiral; ks is int64, 1-based."""
    ks = np.asarray(ks, dtype=np.int64)
    if np.any(ks < 1):
        raise DomainError("enumeration index must be >= 1")
    m = np.zeros(len(ks), dtype=np.int64)
    n = np.zeros(len(ks), dtype=np.int64)
    big = ks > 1
    kb = ks[big]
    r = np.ceil((np.sqrt(kb.astype(np.float64)) - 1.0) / 2.0).astype(np.int64)
    r = np.maximum(r, 1)
    over = (2 * r - 1) ** 2 >= kb
    r[over] -= 1
    under = (2 * r + 1) ** 2 < kb
    r[under] += 1
    t = kb - (2 * r - 1) ** 2 - 1
    mm = np.empty(len(kb), dtype=np.int64)
    nn = np.empty(len(kb), dtype=np.int64)
    seg = t <= r
    mm[seg], nn[seg] = r[seg], t[seg]
    seg = (t > r) & (t <= 3 * r)
    mm[seg], nn[seg] = r[seg] - (t[seg] - r[seg]), r[seg]
    seg = (t > 3 * r) & (t <= 5 * r)
    mm[seg], nn[seg] = -r[seg], r[seg] - (t[seg] - 3 * r[seg])
    seg = (t > 5 * r) & (t <= 7 * r)
    mm[seg], nn[seg] = -r[seg] + (t[seg] - 5 * r[seg]), -r[seg]
    seg = t > 7 * r
    mm[seg], nn[seg] = r[seg], -r[seg] + (t[seg] - 7 * r[seg])
    m[big] = mm
    n[big] = nn
    return m, n


# ---------------------------------------------------------------------------
# circle model
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TorusFunction:
    """Finite Fourier polynomial on the circle: x -> sum_k c_k e^{ikx}."""

    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for k, c in self.coeffs.items():
            kk = int(k)
            cc = complex(c)
            if cc != 0:
                clean[kk] = cc
        object.__setattr__(self, "coeffs", clean)

    def mean(self) -> complex:
        """Zero-mode coefficient; the average value over the circle."""
        return self.coeffs.get(0, 0.0 + 0.0j)

    def is_real(self, tol: float = 1e-12) -> bool:
        for k, c in self.coeffs.items():
            if abs(c - self.coeffs.get(-k, 0.0 + 0.0j).conjugate()) > tol:
                return False
        return True

    def value(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        out = np.zeros(x.shape, dtype=np.complex128)
        for k, c in self.coeffs.items():
            out += c * np.exp(1j * k * x)
        return out

    def sup_bound(self) -> float:
        return float(sum(abs(c) for c in self.coeffs.values()))

    @staticmethod
    def from_json(obj: dict) -> "TorusFunction":
        terms = obj.get("coeffs")
        if not isinstance(terms, list):
            raise DomainError('function spec field "coeffs" must be an array')
        coeffs: dict[int, complex] = {}
        for i, term in enumerate(terms):
            if not isinstance(term, dict) or "k" not in term:
                raise DomainError(f'function spec "coeffs[{i}]" needs field "k"')
            k = int(term["k"])
            coeffs[k] = coeffs.get(k, 0.0) + complex(
                float(term.get("re", 0.0)), float(term.get("im", 0.0))
            )
        return TorusFunction(coeffs)


class TorusInvLaplacian(EigenvalueSequence):
    """Inverse square root Laplacian on the circle, constants removed.

    Eigenvalue 1/|k| at frequency k != 0; enumeration order
    +1, -1, +2, -2, ..., which is already nonincreasing: mu_n = 1/ceil(n/2).
    Tails pair up exactly into classical power sums.
    """

    def __init__(self):
        self.name = "torus"

    @staticmethod
    def frequency(m: int) -> int:
        """Frequency labeled by enumeration index m >= 1."""
        if m < 1:
            raise DomainError("enumeration index must be >= 1")
        half = (m + 1) // 2
        return half if m % 2 == 1 else -half

    def head_limit(self) -> int:
        return 1 << 62

    def mu_window(self, lo: int, hi: int) -> np.ndarray:
        ns = np.arange(lo, hi + 1, dtype=np.int64)
        return 1.0 / ((ns + 1) // 2).astype(np.float64)

    def supports_tail(self) -> bool:
        return True

    def tail_power_sum(self, s: float, n: int) -> tuple[float, float]:
        m_full, odd = divmod(n, 2)
        if odd:
            est, err = _em_tail_power(s, m_full + 1)
            leftover = (m_full + 1.0) ** (-s)
            return 2.0 * est + leftover, 2.0 * err
        est, err = _em_tail_power(s, max(m_full, 1))
        extra = 0.0
        if m_full == 0:
            # n = 0: the m = 1 pair is inside the EM tail from 1? it is not;
            # tail from m > 1 plus the pair at m = 1
            extra = 2.0
        return 2.0 * est + extra, 2.0 * err


def torus_multiplier_diag(f: TorusFunction) -> DiagonalObservable:
    """Diagonal of the multiplication operator by f over the exponential basis.

    With unit-normalized eigenfunctions every diagonal entry equals the mean
    of f, so the observable is constant. Off-diagonal structure is invisible
    to the trace pairing and is deliberately not modeled.
    """
    c = complex(f.mean())
    obs = DiagonalObservable.const(c, name="mult")
    return obs


# ---------------------------------------------------------------------------
# rotation algebra
# ---------------------------------------------------------------------------


class FourierElement:
    """Finitely supported element sum a_{m,n} u^m v^n of the rotation algebra.

    theta is the rotation parameter; the commutation phase is
    lam = exp(2 pi i theta). Products follow the twisted convolution
    (ab)_{r,s} = sum_{m,n} a_{r-m,n} lam^{mn} b_{m,s-n}, under which
    v u = lam u v.
    """

    __slots__ = ("theta", "coeffs")

    def __init__(self, theta: float, coeffs: dict | None = None):
        if not (0.0 <= theta < 1.0):
            raise DomainError("rotation parameter must lie in [0, 1)")
        self.theta = float(theta)
        self.coeffs: dict[tuple[int, int], complex] = {}
        if coeffs:
            for (m, n), c in coeffs.items():
                c = complex(c)
                if c != 0:
                    self.coeffs[(int(m), int(n))] = c

    def lam(self) -> complex:
        return complex(np.exp(2j * np.pi * self.theta))

    def get(self, m: int, n: int) -> complex:
        return self.coeffs.get((m, n), 0.0 + 0.0j)

    def support_radius(self) -> int:
        if not self.coeffs:
            return 0
        return max(max(abs(m), abs(n)) for m, n in self.coeffs)

    def copy(self) -> "FourierElement":
        return FourierElement(self.theta, dict(self.coeffs))

    def __add__(self, other: "FourierElement") -> "FourierElement":
        _check_same_theta(self, other)
        out = dict(self.coeffs)
        for key, c in other.coeffs.items():
            out[key] = out.get(key, 0.0) + c
        return FourierElement(self.theta, out)

    def __sub__(self, other: "FourierElement") -> "FourierElement":
        return self + (-1.0) * other

    def __rmul__(self, scalar: complex) -> "FourierElement":
        return FourierElement(
            self.theta, {key: scalar * c for key, c in self.coeffs.items()}
        )

    def __mul__(self, other: "FourierElement") -> "FourierElement":
        return nct_product(self, other)

    def to_json(self) -> dict:
        return {
            "theta": self.theta,
            "coeffs": [
                {"m": m, "n": n, "re": c.real, "im": c.imag}
                for (m, n), c in sorted(self.coeffs.items())
            ],
        }

    @staticmethod
    def from_json(obj: dict) -> "FourierElement":
        if "theta" not in obj:
            raise DomainError('element spec needs field "theta"')
        terms = obj.get("coeffs")
        if not isinstance(terms, list):
            raise DomainError('element spec field "coeffs" must be an array')
        coeffs: dict[tuple[int, int], complex] = {}
        for i, term in enumerate(terms):
            if not isinstance(term, dict) or "m" not in term or "n" not in term:
                raise DomainError(f'element spec "coeffs[{i}]" needs fields "m" and "n"')
            key = (int(term["m"]), int(term["n"]))
            coeffs[key] = coeffs.get(key, 0.0) + complex(
                float(term.get("re", 0.0)), float(term.get("im", 0.0))
            )
        return FourierElement(float(obj["theta"]), coeffs)


def _check_same_theta(a: FourierElement, b: FourierElement):
    if a.theta != b.theta:
        raise DomainError("rotation parameters differ; elements live in different algebras")


def nct_product(a: FourierElement, b: FourierElement) -> FourierElement:
    """Twisted convolution product of two elements."""
    _check_same_theta(a, b)
    lam = a.lam()
    out: dict[tuple[int, int], complex] = {}
    for (p, q), ca in a.coeffs.items():
        for (m, t), cb in b.coeffs.items():
            key = (p + m, q + t)
            out[key] = out.get(key, 0.0) + ca * cb * lam ** (m * q)
    return FourierElement(a.theta, out)


def nct_involution(a: FourierElement) -> FourierElement:
    """Adjoint: (a*)_{r,s} = lam^{rs} conj(a_{-r,-s})."""
    lam = a.lam()
    out = {}
    for (m, n), c in a.coeffs.items():
        out[(-m, -n)] = (lam ** (m * n)) * c.conjugate()
    return FourierElement(a.theta, out)


def nct_tau0(a: FourierElement) -> complex:
    """Canonical trace: the zero-mode coefficient."""
    return a.get(0, 0)


def gns_norm(a: FourierElement) -> float:
    """Hilbert norm sqrt(tau0(a* a)); equals the l2 norm of the coefficients."""
    return math.sqrt(sum(abs(c) ** 2 for c in a.coeffs.values()))


def nct_identity(theta: float) -> FourierElement:
    return FourierElement(theta, {(0, 0): 1.0})


def nct_unitary_u(theta: float) -> FourierElement:
    return FourierElement(theta, {(1, 0): 1.0})


def nct_unitary_v(theta: float) -> FourierElement:
    return FourierElement(theta, {(0, 1): 1.0})


class NctInvLaplacian(EigenvalueSequence):
    """Inverse lattice Laplacian of the rotation algebra's flat geometry.

    Eigenvalue 1/(m^2 + n^2) on the basis monomial labeled (m, n), zero mode
    removed; the enumeration walks the square spiral (skipping the origin).
    Sorted values follow pi / n with a certified relative slack of
    2.5 / sqrt(n), which is what lets zeta tails be certified near s = 1.
    """

    tail_model = TailModel(coef=math.pi, power=1.0, slack_coef=2.5, slack_power=0.5, start=4)

    def __init__(self, budget: int = 1 << 22):
        if budget < 1 << 10:
            raise DomainError("lattice budget must be at least 2^10")
        self.budget = int(budget)
        self.name = "nctorus"
        self._sorted_q: np.ndarray | None = None
        self._enum_lam: np.ndarray | None = None

    def head_limit(self) -> int:
        return self.budget

    def enumeration_sorted(self) -> bool:
        return False

    def lattice_point(self, m: int) -> tuple[int, int]:
        """Lattice label of eigenbasis index m >= 1 (origin skipped)."""
        return cantor_enum(m + 1)

    def _ensure_enum(self, count: int):
        if count > self.budget:
            raise InsufficientDataError(
                f"nctorus: enumeration budget {self.budget} exceeded (asked {count})"
            )
        if self._enum_lam is not None and len(self._enum_lam) >= count:
            return
        target = min(self.budget, max(count, 1 << 14))
        ks = np.arange(2, target + 2, dtype=np.int64)
        mm, nn = cantor_enum_array(ks)
        q = (mm * mm + nn * nn).astype(np.float64)
        self._enum_lam = 1.0 / q

    def lam_window(self, lo: int, hi: int) -> np.ndarray:
        self._ensure_enum(hi)
        return self._enum_lam[lo - 1 : hi]

    def _ensure_sorted(self, count: int):
        if count > self.budget:
            raise InsufficientDataError(
                f"nctorus: sorted budget {self.budget} exceeded (asked {count})"
            )
        if self._sorted_q is not None and len(self._sorted_q) >= count:
            return
        target = min(self.budget, max(count, 1 << 14))
        radius = int(math.ceil(math.sqrt(target / math.pi) * 1.05)) + 8
        while True:
            side = np.arange(-radius, radius + 1, dtype=np.int64)
            mm, nn = np.meshgrid(side, side, sparse=True)
            q = (mm * mm + nn * nn).ravel()
            q = q[(q > 0) & (q <= radius * radius)]
            if len(q) >= target:
                break
            radius = int(radius * 1.2) + 4
        q.sort()
        self._sorted_q = q.astype(np.float64)

    def mu_window(self, lo: int, hi: int) -> np.ndarray:
        self._ensure_sorted(hi)
        return 1.0 / self._sorted_q[lo - 1 : hi]

    def supports_tail(self) -> bool:
        return True

    def tail_power_sum(self, s: float, n: int) -> tuple[float, float]:
        return self.tail_model.power_sum_tail(s, n)

    def enum_sup_beyond(self, m: int) -> float:
        # every spiral point past index m + 1 sits on shell >= r, and shell r
        # never comes closer to the origin than distance r
        r = _shell_of(m + 2)
        return 1.0 / float(r * r)

    def preferred_head(self, default: int) -> int:
        return self.budget


def nct_diag(a: FourierElement) -> DiagonalObservable:
    """Diagonal of an algebra element over the monomial eigenbasis.

    Acting on any basis monomial, the element contributes exactly its
    zero-mode coefficient to the matching mode, with phases cancelling, so
    the diagonal is the constant tau0(a) at every index.
    """
    c = complex(nct_tau0(a))
    obs = DiagonalObservable(
        rule=lambda m, c=c: np.full(len(m), c, dtype=np.complex128),
        bound=abs(c),
        limit=LimitModel(value=c, dev_coef=0.0),
        name="nct-diag",
        constant=c,
    )
    return obs


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------

MODELS = {
    "torus": {
        "factory": lambda spec: TorusInvLaplacian(),
        "describe": "circle inverse-sqrt Laplacian, eigenvalue 1/|k|, constants removed",
    },
    "nctorus": {
        "factory": lambda spec: NctInvLaplacian(budget=int(spec.get("budget", 1 << 22))),
        "describe": "rotation-algebra inverse Laplacian, eigenvalue 1/(m^2+n^2), spiral order",
    },
}


def model_operator(spec: dict) -> EigenvalueSequence:
    name = spec.get("name")
    if name not in MODELS:
        raise DomainError(
            f'operator spec field "enum.name" must be one of {sorted(MODELS)}'
        )
    return MODELS[name]["factory"](spec)

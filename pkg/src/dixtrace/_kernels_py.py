"""Pure numpy kernels: fallback backend for the streaming hot paths.

Interface contract (shared with the compiled backend):

* state vectors are float64 arrays of length STATE_LEN owned by the caller;
* ``kahan_cumsum`` consumes one chunk and returns its prefix sums including
  the carried total from previous chunks;
* ``cesaro_update`` advances iterated running means of a streamed sequence,
  records order-r means and raw values at geometric checkpoints, and tracks
  the min/max envelope beyond a tail start index.

The fallback keeps compensation at chunk boundaries only (vectorized cumsum
inside a chunk); the compiled backend compensates every element. Both are
deterministic for a fixed chunk size; cross-backend agreement is at the
1e-12 relative level, not bit-exact.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"
STATE_LEN = 12

# state slots
_S, _SC = 0, 1          # running sum of a_k
_T1, _T1C = 2, 3        # running sum of first-order means
_T2, _T2C = 4, 5        # running sum of second-order means
_EMIN, _EMAX = 6, 7     # envelope over k > tail_start


def new_state() -> np.ndarray:
    st = np.zeros(STATE_LEN, dtype=np.float64)
    st[_EMIN] = np.inf
    st[_EMAX] = -np.inf
    return st


def _neumaier_add(total: float, comp: float, x: float) -> tuple[float, float]:
    t = total + x
    if abs(total) >= abs(x):
        comp += (total - t) + x
    else:
        comp += (x - t) + total
    return t, comp


def kahan_sum(x: np.ndarray) -> float:
    # chunk-free entry point; pairwise numpy sum is adequate here
    return float(np.sum(x, dtype=np.float64))


def kahan_cumsum(chunk: np.ndarray, state: np.ndarray) -> np.ndarray:
    """Prefix sums of the stream across chunks; carry kept compensated."""
    out = np.cumsum(chunk, dtype=np.float64)
    carry = state[_S] + state[_SC]
    if carry != 0.0:
        out = out + carry
    if len(chunk):
        state[_S], state[_SC] = _neumaier_add(state[_S], state[_SC], float(np.sum(chunk, dtype=np.float64)))
    return out


def pow_sum(x: np.ndarray, s: float) -> float:
    return float(np.sum(np.power(x, s), dtype=np.float64))


def weighted_pow_sum(lam: np.ndarray, s: float, w: np.ndarray) -> float:
    return float(np.sum(np.power(lam, s) * w, dtype=np.float64))


def cesaro_update(
    chunk: np.ndarray,
    k0: int,
    order: int,
    tail_start: int,
    state: np.ndarray,
    cps: np.ndarray,
    cp_i: int,
    cp_mean: np.ndarray,
    cp_raw: np.ndarray,
) -> tuple[int, int]:
    """Advance iterated running means over one chunk.

    chunk holds a_{k0+1} .. a_{k0+m}. cps is the sorted int64 checkpoint
    array; cp_i is the next checkpoint slot to fill. Returns (new_k0, new_cp_i).
    """
    m = len(chunk)
    if m == 0:
        return k0, cp_i
    ks = np.arange(k0 + 1, k0 + m + 1, dtype=np.float64)

    s_carry = state[_S] + state[_SC]
    c1 = (s_carry + np.cumsum(chunk, dtype=np.float64)) / ks
    state[_S], state[_SC] = _neumaier_add(state[_S], state[_SC], float(np.sum(chunk, dtype=np.float64)))
    level = c1
    if order >= 2:
        t1_carry = state[_T1] + state[_T1C]
        c2 = (t1_carry + np.cumsum(c1, dtype=np.float64)) / ks
        state[_T1], state[_T1C] = _neumaier_add(state[_T1], state[_T1C], float(np.sum(c1, dtype=np.float64)))
        level = c2
    if order >= 3:
        t2_carry = state[_T2] + state[_T2C]
        c3 = (t2_carry + np.cumsum(level, dtype=np.float64)) / ks
        state[_T2], state[_T2C] = _neumaier_add(state[_T2], state[_T2C], float(np.sum(level, dtype=np.float64)))
        level = c3

    hi = k0 + m
    if hi > tail_start:
        lo_idx = max(0, tail_start - k0)
        seg = chunk[lo_idx:]
        if len(seg):
            state[_EMIN] = min(state[_EMIN], float(seg.min()))
            state[_EMAX] = max(state[_EMAX], float(seg.max()))

    n_cp = len(cps)
    while cp_i < n_cp and cps[cp_i] <= hi:
        idx = int(cps[cp_i]) - k0 - 1
        if idx < 0:
            cp_i += 1
            continue
        cp_mean[cp_i] = level[idx]
        cp_raw[cp_i] = chunk[idx]
        cp_i += 1
    return hi, cp_i


def envelope(state: np.ndarray) -> tuple[float, float]:
    return float(state[_EMIN]), float(state[_EMAX])

"""Exhaustive censor best-response search over all 2^n blocking sets.

Two interchangeable backends: a numba ``@njit`` loop and a vectorized numpy
path. ``CENSORGAME_BACKEND=numpy`` forces the numpy path; otherwise numba is
used when importable. Both accumulate floats in the same order (protocol
index ascending) so they return bit-identical results.

Blocking-set sums are built by doubling (a mask's value is the value of the
mask without its highest bit plus that protocol's term), O(2^n) per strategy.
Blocking sets are ranked by ``sum(share[p] - d * cover[p])`` over blocked
``p`` (larger is better), which orders outcomes exactly like the censor
utility when c < 0. Ties go to smaller f, then fewer blocked protocols, then
smaller bitmask.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is an optional extra
    numba = None

HAVE_NUMBA = numba is not None
_NUMPY_CHUNK_CELLS = 1 << 22


def _requested_backend() -> str:
    name = os.environ.get("CENSORGAME_BACKEND", "").strip().lower()
    if name in ("", "auto"):
        return "numba" if HAVE_NUMBA else "numpy"
    if name not in ("numba", "numpy"):
        raise ValueError(f"CENSORGAME_BACKEND must be 'numba' or 'numpy', got {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise ImportError("CENSORGAME_BACKEND=numba but numba is not installed")
    return name


BACKEND = _requested_backend()


def mask_bits(n: int) -> np.ndarray:
    """Boolean matrix (2^n, n): row m holds the blocked flags of bitmask m."""
    masks = np.arange(1 << n, dtype=np.int64)
    return ((masks[:, None] >> np.arange(n, dtype=np.int64)) & 1).astype(bool)


def _subset_sums(values: np.ndarray) -> np.ndarray:
    """Sum of ``values[..., p]`` over the set bits of every mask, along a new last axis.

    Masks in [2^p, 2^(p+1)) have p as their highest bit, so each is the mask
    without p plus values[p]: terms are added in ascending index order.
    """
    n = values.shape[-1]
    out = np.zeros(values.shape[:-1] + (1 << n,))
    for p in range(n):
        lo = 1 << p
        out[..., lo:2 * lo] = out[..., :lo] + values[..., p, None]
    return out


def mask_cover_sums(covers: np.ndarray) -> np.ndarray:
    """Blocked cover per bitmask, summed in protocol index order."""
    return _subset_sums(np.asarray(covers, dtype=np.float64))


def best_responses_numpy(shares: np.ndarray, covers: np.ndarray, d: float):
    shares = np.ascontiguousarray(shares, dtype=np.int64)
    covers = np.ascontiguousarray(covers, dtype=np.float64)
    rows, n = shares.shape
    bits = mask_bits(n)
    counts = bits.sum(axis=1)
    f_mask = mask_cover_sums(covers)
    gains = shares - d * covers[None, :]

    out_mask = np.empty(rows, dtype=np.int64)
    step = max(1, _NUMPY_CHUNK_CELLS // len(bits))
    for lo in range(0, rows, step):
        score = _subset_sums(gains[lo:lo + step])
        cand = score == score.max(axis=1, keepdims=True)
        f_c = np.where(cand, f_mask[None, :], np.inf)
        cand &= f_c == f_c.min(axis=1, keepdims=True)
        k_c = np.where(cand, counts[None, :], n + 1)
        cand &= k_c == k_c.min(axis=1, keepdims=True)
        out_mask[lo:lo + step] = np.argmax(cand, axis=1)  # first True = smallest bitmask

    chosen = bits[out_mask]
    t = (shares * chosen).sum(axis=1).astype(np.int64)
    return out_mask, t, f_mask[out_mask]


if HAVE_NUMBA:

    @numba.njit(cache=True, nogil=True)
    def _best_responses_jit(shares, covers, d):
        rows, n = shares.shape
        size = 1 << n
        out_mask = np.zeros(rows, dtype=np.int64)
        out_t = np.zeros(rows, dtype=np.int64)
        out_f = np.zeros(rows, dtype=np.float64)
        # per-mask f and blocked count, built like the scores below
        f = np.zeros(size)
        cnt = np.zeros(size, dtype=np.int64)
        for p in range(n):
            lo = 1 << p
            for m in range(lo):
                f[lo + m] = f[m] + covers[p]
                cnt[lo + m] = cnt[m] + 1
        score = np.zeros(size)
        for r in range(rows):
            for p in range(n):
                lo = 1 << p
                g = shares[r, p] - d * covers[p]
                for m in range(lo):
                    score[lo + m] = score[m] + g
            best = 0
            for m in range(1, size):
                if score[m] > score[best] or (
                    score[m] == score[best]
                    and (f[m] < f[best] or (f[m] == f[best] and cnt[m] < cnt[best]))
                ):
                    best = m
            t = 0
            for p in range(n):
                if (best >> p) & 1:
                    t += shares[r, p]
            out_mask[r] = best
            out_t[r] = t
            out_f[r] = f[best]
        return out_mask, out_t, out_f

    def best_responses_numba(shares: np.ndarray, covers: np.ndarray, d: float):
        return _best_responses_jit(
            np.ascontiguousarray(shares, dtype=np.int64),
            np.ascontiguousarray(covers, dtype=np.float64),
            float(d),
        )

else:  # pragma: no cover
    best_responses_numba = None


def best_responses(shares, covers, d: float, workers: int = 1, backend: str | None = None):
    """Best response for every row of ``shares``.

    Returns ``(mask, t, f)`` arrays, one entry per row. ``workers > 1`` splits
    rows across threads; the result does not depend on the split.
    """
    backend = backend or BACKEND
    fn = best_responses_numba if backend == "numba" else best_responses_numpy
    if fn is None:
        raise ImportError("numba backend requested but numba is not installed")
    shares = np.asarray(shares, dtype=np.int64)
    if shares.ndim != 2:
        raise ValueError("shares must be a 2-D array (strategies x protocols)")
    if workers <= 1 or len(shares) < 2:
        return fn(shares, covers, d)
    chunks = np.array_split(shares, min(workers, len(shares)))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda c: fn(c, covers, d), chunks))
    return tuple(np.concatenate([p[i] for p in parts]) for i in range(3))

"""Integer enumeration kernels.

Every kernel exists twice: a numba ``@njit`` version and a pure-numpy
version with identical semantics. ``FROBCONE_DISABLE_NUMBA=1`` (or a missing
numba install) selects numpy. Both operate on int64 arrays; callers keep
all magnitudes far below 2**62.

Each kernel takes a half-open range ``[start, stop)`` on the first box
coordinate so callers can split the work across threads and merge the
partial results in chunk order.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

_FLAG = os.environ.get("FROBCONE_DISABLE_NUMBA", "").strip().lower()
try:
    if _FLAG in ("1", "true", "yes", "on"):
        raise ImportError("numba disabled by FROBCONE_DISABLE_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


BACKEND = "numba" if HAVE_NUMBA else "numpy"

_CHUNK = 1 << 16


# ---------------------------------------------------------------------------
# numba versions
# ---------------------------------------------------------------------------


@njit(cache=True, nogil=True)
def _signature_counts_nb(A, s, q, lo, widths, start, stop):
    f, d = A.shape
    size = 1
    for i in range(f):
        size *= widths[i]
    counts = np.zeros(size, dtype=np.int64)
    if start >= stop:
        return counts
    u = np.zeros(d, dtype=np.int64)
    u[0] = start
    while True:
        key = 0
        for i in range(f):
            x = s[i]
            for j in range(d):
                x -= A[i, j] * u[j]
            c = -((-x) // q)
            key = key * widths[i] + (c - lo[i])
        counts[key] += 1
        k = d - 1
        while k >= 0:
            u[k] += 1
            if k == 0:
                if u[0] < stop:
                    break
                return counts
            if u[k] < q:
                break
            u[k] = 0
            k -= 1
    return counts


@njit(cache=True, nogil=True)
def _accept(A, s, T, m):
    f, d = A.shape
    for i in range(f):
        x = 0
        for j in range(d):
            x += A[i, j] * m[j]
        if x < s[i]:
            return False
    for t in range(T.shape[0]):
        inside = True
        for i in range(f):
            x = 0
            for j in range(d):
                x += A[i, j] * m[j]
            if x < T[t, i]:
                inside = False
                break
        if inside:
            return False
    return True


@njit(cache=True, nogil=True)
def _region_count_nb(A, s, T, lo, hi, start, stop):
    d = lo.shape[0]
    if start >= stop:
        return 0
    for k in range(1, d):
        if lo[k] > hi[k]:
            return 0
    m = lo.copy()
    m[0] = start
    total = 0
    while True:
        if _accept(A, s, T, m):
            total += 1
        k = d - 1
        while k >= 0:
            m[k] += 1
            if k == 0:
                if m[0] < stop:
                    break
                return total
            if m[k] <= hi[k]:
                break
            m[k] = lo[k]
            k -= 1
    return total


@njit(cache=True, nogil=True)
def _region_points_nb(A, s, T, lo, hi, start, stop):
    d = lo.shape[0]
    n = _region_count_nb(A, s, T, lo, hi, start, stop)
    out = np.empty((n, d), dtype=np.int64)
    if n == 0:
        return out
    m = lo.copy()
    m[0] = start
    idx = 0
    while True:
        if _accept(A, s, T, m):
            for j in range(d):
                out[idx, j] = m[j]
            idx += 1
        k = d - 1
        while k >= 0:
            m[k] += 1
            if k == 0:
                if m[0] < stop:
                    break
                return out
            if m[k] <= hi[k]:
                break
            m[k] = lo[k]
            k -= 1
    return out


# ---------------------------------------------------------------------------
# numpy versions
# ---------------------------------------------------------------------------


def _box_chunks(lo, hi, start, stop):
    """Yield the box points with first coordinate in [start, stop), lex order."""
    lo = np.asarray(lo, dtype=np.int64).copy()
    hi = np.asarray(hi, dtype=np.int64).copy()
    lo[0], hi[0] = start, stop - 1
    shape = hi - lo + 1
    if np.any(shape <= 0):
        return
    total = int(np.prod(shape))
    for a in range(0, total, _CHUNK):
        flat = np.arange(a, min(a + _CHUNK, total), dtype=np.int64)
        yield np.stack(np.unravel_index(flat, tuple(shape)), axis=1).astype(np.int64) + lo


def _signature_counts_np(A, s, q, lo, widths, start, stop):
    size = int(np.prod(widths))
    counts = np.zeros(size, dtype=np.int64)
    d = A.shape[1]
    if start >= stop:
        return counts
    strides = np.ones(len(widths), dtype=np.int64)
    for i in range(len(widths) - 2, -1, -1):
        strides[i] = strides[i + 1] * widths[i + 1]
    for U in _box_chunks(np.zeros(d), np.full(d, q - 1), start, stop):
        x = s[None, :] - U @ A.T
        sig = -((-x) // q)
        keys = (sig - lo[None, :]) @ strides
        counts += np.bincount(keys, minlength=size)
    return counts


def _mask_np(A, s, T, M):
    AM = M @ A.T
    ok = np.all(AM >= s[None, :], axis=1)
    for t in range(T.shape[0]):
        ok &= ~np.all(AM >= T[t][None, :], axis=1)
    return ok


def _region_count_np(A, s, T, lo, hi, start, stop):
    total = 0
    for M in _box_chunks(lo, hi, start, stop):
        total += int(np.count_nonzero(_mask_np(A, s, T, M)))
    return total


def _region_points_np(A, s, T, lo, hi, start, stop):
    parts = [M[_mask_np(A, s, T, M)] for M in _box_chunks(lo, hi, start, stop)]
    if not parts:
        return np.empty((0, len(lo)), dtype=np.int64)
    return np.concatenate(parts, axis=0)


IMPLS = {
    "numpy": {
        "signature_counts": _signature_counts_np,
        "region_count": _region_count_np,
        "region_points": _region_points_np,
    }
}
if HAVE_NUMBA:
    IMPLS["numba"] = {
        "signature_counts": _signature_counts_nb,
        "region_count": _region_count_nb,
        "region_points": _region_points_nb,
    }


# ---------------------------------------------------------------------------
# chunked drivers
# ---------------------------------------------------------------------------


def _split(start, stop, parts):
    n = stop - start
    parts = max(1, min(parts, n)) if n > 0 else 1
    bounds = [start + (n * k) // parts for k in range(parts + 1)]
    return list(zip(bounds[:-1], bounds[1:]))


def _run(name, args, first_lo, first_hi_excl, threads, backend):
    fn = IMPLS[backend or BACKEND][name]
    ranges = _split(first_lo, first_hi_excl, threads or 1)
    if len(ranges) == 1:
        return [fn(*args, *ranges[0])]
    with ThreadPoolExecutor(max_workers=len(ranges)) as ex:
        return list(ex.map(lambda r: fn(*args, *r), ranges))


def _i64(x):
    return np.ascontiguousarray(np.asarray(x, dtype=np.int64))


def _shifts(T, f):
    T = _i64(T)
    return T.reshape(0, f) if T.size == 0 else T.reshape(-1, f)


def signature_counts(A, s, q, lo, widths, threads=1, backend=None):
    """Histogram of ``ceil((s - A u) / q)`` over ``u`` in ``{0..q-1}^d``.

    Signatures are encoded in mixed radix: component ``i`` contributes
    ``sig_i - lo[i]`` in base ``widths[i]`` (most significant first).
    """
    A, s, lo, widths = _i64(A), _i64(s), _i64(lo), _i64(widths)
    parts = _run("signature_counts", (A, s, np.int64(q), lo, widths), 0, q, threads, backend)
    return np.sum(parts, axis=0)


def region_count(A, s, T, lo, hi, threads=1, backend=None):
    """Count box points with ``A m >= s`` lying in none of ``{A m >= T[j]}``."""
    A, s, lo, hi = _i64(A), _i64(s), _i64(lo), _i64(hi)
    T = _shifts(T, A.shape[0])
    parts = _run("region_count", (A, s, T, lo, hi), int(lo[0]), int(hi[0]) + 1, threads, backend)
    return int(sum(parts))


def region_points(A, s, T, lo, hi, threads=1, backend=None):
    """Same filter as :func:`region_count`, returning the points in lex order."""
    A, s, lo, hi = _i64(A), _i64(s), _i64(lo), _i64(hi)
    T = _shifts(T, A.shape[0])
    parts = _run("region_points", (A, s, T, lo, hi), int(lo[0]), int(hi[0]) + 1, threads, backend)
    return np.concatenate(parts, axis=0) if parts else np.empty((0, len(lo)), dtype=np.int64)

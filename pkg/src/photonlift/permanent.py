"""Matrix permanents and the repeated-index submatrices used by Fock transitions.

The exact kernel is Ryser's inclusion-exclusion formula with subsets visited in
Gray-code order, so consecutive row-sum vectors differ by a single column.
Cost is O(2**k * k) against O(k! * k) for the permutation expansion, which is
kept here as :func:`naive_permanent` for cross-checking.

Relative rounding error of the Ryser sum grows roughly like ``2**k`` ulps.
"""

from __future__ import annotations

import itertools
from typing import Sequence

import numpy as np

from .errors import CapacityError, ShapeError, ValidationError

MAX_SIDE = 30
# below this side the Gray-code walk runs on Python complex scalars, which beats
# numpy's per-call overhead; above it subsets are processed in vectorised chunks
_SCALAR_SIDE = 4
_CHUNK_BITS = 14


def _as_square(a) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeError(f"permanent needs a square matrix, got shape {a.shape}")
    return a


def naive_permanent(a) -> complex:
    """Permutation-sum permanent.  Reference only: O(k! * k)."""
    a = _as_square(a)
    k = a.shape[0]
    total = 0j
    for sigma in itertools.permutations(range(k)):
        term = 1 + 0j
        for i, j in enumerate(sigma):
            term *= a[i, j]
        total += term
    return complex(total)


def _ryser_scalar(rows: list[list[complex]], k: int) -> complex:
    sums = [0j] * k
    total = 0j
    chosen = [False] * k
    sign = -1.0 if k % 2 else 1.0
    for t in range(1, 1 << k):
        j = (t & -t).bit_length() - 1
        chosen[j] = not chosen[j]
        if chosen[j]:
            for i in range(k):
                sums[i] += rows[i][j]
        else:
            for i in range(k):
                sums[i] -= rows[i][j]
        sign = -sign
        prod = sums[0]
        for i in range(1, k):
            prod *= sums[i]
        total += sign * prod
    return total


def _ryser_chunked(a: np.ndarray) -> complex:
    k = a.shape[0]
    n_sub = 1 << k
    chunk = min(n_sub, 1 << _CHUNK_BITS)
    bits = np.arange(k)
    total = 0j
    for start in range(0, n_sub, chunk):
        t = np.arange(start, start + chunk, dtype=np.int64)
        gray = t ^ (t >> 1)
        # row sums at the chunk's first subset, computed directly
        first = ((gray[0] >> bits) & 1).astype(float)
        base = a @ first
        # each later step toggles the lowest set bit of t
        step = t[1:]
        j = np.log2(step & -step).astype(np.int64)
        added = ((gray[1:] >> j) & 1).astype(float) * 2.0 - 1.0
        deltas = a[:, j].T * added[:, None]
        sums = np.empty((chunk, k), dtype=complex)
        sums[0] = base
        sums[1:] = base + np.cumsum(deltas, axis=0)
        parity = np.bitwise_count(gray.astype(np.uint64)) & 1
        signs = np.where(parity == (k & 1), 1.0, -1.0)
        total += complex(np.dot(signs, np.prod(sums, axis=1)))
    return total


def ryser_permanent(a) -> complex:
    """Permanent by Ryser's formula with Gray-code subset iteration."""
    a = _as_square(a)
    k = a.shape[0]
    if k > MAX_SIDE:
        raise CapacityError(f"permanent side {k} exceeds cap {MAX_SIDE}")
    if k == 0:
        return 1 + 0j
    if k <= _SCALAR_SIDE:
        return complex(_ryser_scalar(a.tolist(), k))
    return _ryser_chunked(a)


def permanent(a) -> complex:
    """Permanent of a square complex matrix.

    The 0x0 permanent is 1.  Matrices must be finite and at most
    ``MAX_SIDE`` on a side.

    Raises:
        ShapeError: ``a`` is not square.
        CapacityError: the side exceeds ``MAX_SIDE``.
        ValidationError: ``a`` contains NaN or infinity.
    """
    a = _as_square(a)
    if not np.all(np.isfinite(a)):
        raise ValidationError("permanent input contains non-finite entries")
    k = a.shape[0]
    if k == 1:
        return complex(a[0, 0])
    return ryser_permanent(a)


def repeat_indices(occ: Sequence[int]) -> list[int]:
    """Expand an occupation into the mode index list, e.g. (2, 0, 1) -> [0, 0, 2]."""
    return [i for i, c in enumerate(occ) for _ in range(c)]


def repeat_submatrix(s, out_occ: Sequence[int], in_occ: Sequence[int]) -> np.ndarray:
    """Submatrix of ``s`` with row i repeated out_occ[i] times and column j in_occ[j] times.

    Rows and columns keep ascending mode order.  The result is n x n where n is
    the common photon total.
    """
    s = np.asarray(s, dtype=complex)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise ShapeError(f"scattering matrix must be square, got shape {s.shape}")
    m = s.shape[0]
    if len(out_occ) != m or len(in_occ) != m:
        raise ShapeError(
            f"occupations of length {len(out_occ)} and {len(in_occ)} do not match m={m}"
        )
    if sum(out_occ) != sum(in_occ):
        raise ShapeError(f"photon totals differ: out={sum(out_occ)}, in={sum(in_occ)}")
    if any(c < 0 for c in out_occ) or any(c < 0 for c in in_occ):
        raise ShapeError("occupations must be non-negative")
    return s[np.ix_(repeat_indices(out_occ), repeat_indices(in_occ))]


def _subset_table(k: int) -> tuple[np.ndarray, np.ndarray]:
    masks = np.arange(1, 1 << k, dtype=np.int64)
    bits = ((masks[:, None] >> np.arange(k)) & 1).astype(float)
    signs = np.where((bits.sum(axis=1).astype(int) - k) % 2 == 0, 1.0, -1.0)
    return bits, signs


_SUBSETS: dict[int, tuple[np.ndarray, np.ndarray]] = {}
_BATCH_ELEMENTS = 1 << 22
MAX_BATCH_SIDE = 16


def batch_permanent(stack) -> np.ndarray:
    """Permanents of a stack of k x k matrices, shape (..., k, k) -> (...).

    Ryser's formula evaluated for all subsets at once per chunk of the stack.
    Meant for the many small permanents of a lifted unitary; single large
    matrices should go through :func:`permanent`.
    """
    a = np.asarray(stack, dtype=complex)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise ShapeError(f"batch_permanent needs shape (..., k, k), got {a.shape}")
    k = a.shape[-1]
    lead = a.shape[:-2]
    if k == 0:
        return np.ones(lead, dtype=complex)
    if k > MAX_BATCH_SIDE:
        raise CapacityError(f"batched permanent side {k} exceeds {MAX_BATCH_SIDE}")
    if k == 1:
        return a[..., 0, 0].copy()
    if k not in _SUBSETS:
        _SUBSETS[k] = _subset_table(k)
    bits, signs = _SUBSETS[k]
    flat = a.reshape(-1, k, k)
    out = np.empty(flat.shape[0], dtype=complex)
    step = max(1, _BATCH_ELEMENTS // (k * bits.shape[0]))
    for start in range(0, flat.shape[0], step):
        chunk = flat[start : start + step]
        # row sums for every subset: (batch, k rows, subsets)
        sums = chunk @ bits.T
        out[start : start + step] = np.prod(sums, axis=1) @ signs
    return out.reshape(lead)

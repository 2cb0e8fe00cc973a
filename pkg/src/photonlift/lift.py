"""Lifting an m-mode scattering matrix to the unitary on the n-photon Fock space.

The amplitude for ``in -> out`` is the permanent of the repeated-index
submatrix of S divided by ``sqrt(prod(out!) * prod(in!))``.  An independent
route, :func:`evolve_via_operators`, expands the transformed creation
operators as polynomials and is used to cross-check the permanent path.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import CapacityError, ShapeError, ValidationError
from .fock import FockBasis, Occupation, StateVector, as_occupation, dimension, enumerate_basis
from .linalg import UNITARY_ATOL, as_square_matrix, require_unitary, unitarity_error
from .permanent import batch_permanent, permanent, repeat_indices

MAX_LIFT_DIM = 10_000
MAX_EXPANSION_TERMS = 2_000_000
# complex entries of the repeated-index stack built per column block
_BLOCK_ELEMENTS = 1 << 20


@dataclass(frozen=True)
class LiftedUnitary:
    """An M x M unitary acting on the canonical Fock basis for (m, n)."""

    basis: FockBasis
    matrix: np.ndarray

    def __post_init__(self) -> None:
        mat = np.array(self.matrix, dtype=complex)
        if mat.shape != (self.basis.dim, self.basis.dim):
            raise ShapeError(f"matrix shape {mat.shape} does not match basis dimension {self.basis.dim}")
        if not np.all(np.isfinite(mat)):
            raise ValidationError("lifted matrix contains non-finite entries")
        mat.flags.writeable = False
        object.__setattr__(self, "matrix", mat)

    @property
    def m(self) -> int:
        return self.basis.m

    @property
    def n(self) -> int:
        return self.basis.n

    def unitarity_error(self) -> float:
        return unitarity_error(self.matrix)

    def is_unitary(self) -> bool:
        return self.unitarity_error() <= UNITARY_ATOL * self.basis.dim

    def apply(self, state: StateVector) -> StateVector:
        if state.basis.m != self.m or state.basis.n != self.n:
            raise ShapeError(
                f"state lives in (m={state.m}, n={state.n}), operator in (m={self.m}, n={self.n})"
            )
        return StateVector(self.basis, self.matrix @ state.amplitudes)


def _fact_norm(occ: Sequence[int]) -> float:
    return math.prod(math.factorial(c) for c in occ)


@lru_cache(maxsize=64)
def _plan(m: int, n: int):
    basis = enumerate_basis(m, n)
    idx = np.array([repeat_indices(s) for s in basis.states], dtype=np.intp).reshape(basis.dim, n)
    norms = np.sqrt(np.array([_fact_norm(s) for s in basis.states], dtype=float))
    return basis, idx, norms


def _check_lift_args(s, n: int, check_unitary: bool, atol: float) -> np.ndarray:
    s = require_unitary(s, atol, "S") if check_unitary else as_square_matrix(s, "S")
    if int(n) != n or n < 0:
        raise ValidationError(f"photon count must be a non-negative integer, got {n!r}")
    return s


def transition_amplitude(
    s,
    in_occ: Sequence[int],
    out_occ: Sequence[int],
    *,
    check_unitary: bool = True,
    atol: float = UNITARY_ATOL,
) -> complex:
    """Amplitude ``<out| U(S) |in>`` for Fock occupations ``in_occ`` and ``out_occ``.

    Args:
        s: m x m scattering matrix.
        in_occ: input photon counts per mode.
        out_occ: output photon counts per mode; must hold as many photons as ``in_occ``.
        check_unitary: validate that ``s`` is unitary within ``atol`` (disable for benchmarking).
        atol: unitarity tolerance.

    Raises:
        ValidationError: ``s`` is not unitary.
        ShapeError: occupation lengths differ from m or photon totals differ.
    """
    s = _check_lift_args(s, 0, check_unitary, atol)
    m = s.shape[0]
    in_occ = as_occupation(in_occ, m)
    out_occ = as_occupation(out_occ, m, sum(in_occ))
    sub = s[np.ix_(repeat_indices(out_occ), repeat_indices(in_occ))]
    return permanent(sub) / math.sqrt(_fact_norm(out_occ) * _fact_norm(in_occ))


def _columns(s: np.ndarray, idx: np.ndarray, norms: np.ndarray, cols) -> np.ndarray:
    """Lifted-unitary columns ``cols`` as an (M, len(cols)) array.

    ``s`` may also be a stack of shape (K, m, m), giving (K, M, len(cols)).
    """
    cols = np.asarray(cols, dtype=np.intp)
    # sub[..., r, c, i, j] = s[..., idx[r, i], idx[cols[c], j]]
    sub = s[..., idx[:, None, :, None], idx[cols][None, :, None, :]]
    return batch_permanent(sub) / np.outer(norms, norms[cols])


def _column(s: np.ndarray, idx: np.ndarray, norms: np.ndarray, col: int) -> np.ndarray:
    return _columns(s, idx, norms, [col])[:, 0]


def _column_blocks(size: int, n: int) -> list[range]:
    per_col = max(1, size * max(n, 1) ** 2)
    width = max(1, min(size, _BLOCK_ELEMENTS // per_col))
    return [range(c, min(c + width, size)) for c in range(0, size, width)]


def lift_column(s, n: int, in_occ: Sequence[int], *, check_unitary: bool = True) -> StateVector:
    """Output state ``U(S)|in>``, i.e. one column of :func:`lift`."""
    s = _check_lift_args(s, n, check_unitary, UNITARY_ATOL)
    basis, idx, norms = _plan(s.shape[0], int(n))
    col = basis.position(in_occ)
    return StateVector(basis, _column(s, idx, norms, col))


def lift(
    s,
    n: int,
    *,
    check_unitary: bool = True,
    atol: float = UNITARY_ATOL,
    workers: int | None = None,
) -> LiftedUnitary:
    """Unitary induced by ``s`` on the n-photon space, in canonical basis order.

    Columns are computed in independent blocks; ``workers > 1`` spreads the
    blocks over a thread pool.  Each entry is produced by the same arithmetic
    either way, so serial and parallel results agree.

    Raises:
        CapacityError: the Fock dimension exceeds ``MAX_LIFT_DIM``.
        ValidationError: ``s`` is not unitary within ``atol``.
    """
    s = _check_lift_args(s, n, check_unitary, atol)
    m = s.shape[0]
    try:
        size = dimension(m, int(n))
    except OverflowError as exc:
        raise CapacityError(str(exc)) from exc
    if size > MAX_LIFT_DIM:
        raise CapacityError(f"lifted dimension {size} for m={m}, n={n} exceeds {MAX_LIFT_DIM}")
    basis, idx, norms = _plan(m, int(n))
    u = np.empty((size, size), dtype=complex)
    blocks = _column_blocks(size, int(n))
    if workers is not None and workers > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda b: _columns(s, idx, norms, b), blocks))
    else:
        results = [_columns(s, idx, norms, b) for b in blocks]
    for block, values in zip(blocks, results):
        u[:, block.start : block.stop] = values
    return LiftedUnitary(basis, u)


def _multiply_linear(poly: dict[Occupation, complex], coeffs: np.ndarray) -> dict[Occupation, complex]:
    out: dict[Occupation, complex] = {}
    for mono, c in poly.items():
        for j, sj in enumerate(coeffs):
            if sj == 0:
                continue
            key = mono[:j] + (mono[j] + 1,) + mono[j + 1 :]
            out[key] = out.get(key, 0j) + c * sj
    return out


def evolve_via_operators(
    s, in_occ: Sequence[int], *, check_unitary: bool = True
) -> StateVector:
    """Evolve a Fock state by expanding transformed creation operators.

    Each input creation operator ``a_i^dagger`` becomes ``sum_j S[j, i] a_j^dagger``.
    The product of these linear forms (one per input photon) is expanded as a
    polynomial in commuting creation operators; a monomial with exponents k
    acting on vacuum gives ``sqrt(prod(k!)) |k>``.  No permanents are involved.
    """
    s = require_unitary(s, name="S") if check_unitary else as_square_matrix(s, "S")
    m = s.shape[0]
    in_occ = as_occupation(in_occ, m)
    n = sum(in_occ)
    if dimension(m, n) > MAX_EXPANSION_TERMS:
        raise CapacityError(f"operator expansion for m={m}, n={n} is too large")
    basis = enumerate_basis(m, n)
    poly: dict[Occupation, complex] = {(0,) * m: 1 + 0j}
    for i, count in enumerate(in_occ):
        for _ in range(count):
            poly = _multiply_linear(poly, s[:, i])
    amps = np.zeros(basis.dim, dtype=complex)
    scale = 1.0 / math.sqrt(_fact_norm(in_occ))
    for mono, c in poly.items():
        amps[basis.index[mono]] += c * math.sqrt(_fact_norm(mono)) * scale
    return StateVector(basis, amps)


def output_distribution(s, state: StateVector, *, atol: float = 1e-9) -> np.ndarray:
    """Outcome probabilities over the canonical basis after evolving ``state`` through ``s``.

    Raises:
        ShapeError: ``s`` is not sized to the state's mode count.
        ValidationError: ``state`` is not normalised within ``atol``.
    """
    s = require_unitary(s, name="S")
    if s.shape[0] != state.m:
        raise ShapeError(f"S is {s.shape[0]}x{s.shape[0]} but the state has m={state.m}")
    if abs(state.norm() - 1.0) > atol:
        raise ValidationError(f"input state is not normalised (norm {state.norm():.12g})")
    u = lift(s, state.n, check_unitary=False)
    return np.abs(u.matrix @ state.amplitudes) ** 2


def lifted_from_order(states: Sequence[Sequence[int]], matrix) -> LiftedUnitary:
    """Wrap a matrix written in the basis order ``states`` as a canonical LiftedUnitary.

    ``matrix[r, c]`` is taken as ``<states[r]| U |states[c]>``.  Used for
    matrices quoted in some other ordering, e.g. ``(2,0), (0,2), (1,1)``.
    """
    occs = [as_occupation(s) for s in states]
    if not occs:
        raise ShapeError("empty basis listing")
    m, n = len(occs[0]), sum(occs[0])
    basis = enumerate_basis(m, n)
    if len(occs) != basis.dim or set(occs) != set(basis.states):
        raise ValidationError(f"listing is not a permutation of the Fock basis for m={m}, n={n}")
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.shape != (basis.dim, basis.dim):
        raise ShapeError(f"matrix shape {matrix.shape} does not match basis dimension {basis.dim}")
    perm = [basis.index[s] for s in occs]
    canon = np.zeros_like(matrix)
    canon[np.ix_(perm, perm)] = matrix
    return LiftedUnitary(basis, canon)


def in_order(u: LiftedUnitary, states: Sequence[Sequence[int]]) -> np.ndarray:
    """Entries of ``u`` re-indexed to the basis order ``states``."""
    perm = [u.basis.position(s) for s in states]
    return u.matrix[np.ix_(perm, perm)]

"""Fock-space combinatorics for n photons distributed over m modes.

Basis states are tuples of photon counts.  The canonical order is produced
by assigning 0..n photons to the first mode (ascending) and recursing on the
remaining modes with the photons left over, so for (m, n) = (2, 2) the order
is ``(0, 2), (1, 1), (2, 0)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .errors import CapacityError, ShapeError, ValidationError

Occupation = tuple[int, ...]

INT64_MAX = 2**63 - 1
MAX_BASIS_SIZE = 5_000_000


def dimension(m: int, n: int) -> int:
    """Number of ways to place ``n`` indistinguishable photons in ``m`` modes.

    Evaluates binomial(m + n - 1, n) multiplicatively, dividing at every step
    so intermediates stay exact; results beyond the signed 64-bit range raise
    ``OverflowError`` instead of wrapping.
    """
    _check_mn(m, n)
    k = min(n, m - 1)
    top = m + n - 1
    result = 1
    for i in range(1, k + 1):
        # result * (top - k + i) is divisible by i at every step
        result = result * (top - k + i) // i
        if result > INT64_MAX:
            raise OverflowError(f"dimension({m}, {n}) exceeds 2**63 - 1")
    return result


def _check_mn(m: int, n: int) -> None:
    if int(m) != m or m < 1:
        raise ValidationError(f"mode count must be a positive integer, got {m!r}")
    if int(n) != n or n < 0:
        raise ValidationError(f"photon count must be a non-negative integer, got {n!r}")


def _occupations(m: int, n: int) -> Iterator[Occupation]:
    if m == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in _occupations(m - 1, n - first):
            yield (first,) + rest


def as_occupation(counts: Sequence[int], m: int | None = None, n: int | None = None) -> Occupation:
    """Validate ``counts`` and return it as a tuple of ints."""
    occ = tuple(int(c) for c in counts)
    if any(c != orig for c, orig in zip(occ, counts)):
        raise ValidationError(f"occupation entries must be integers: {list(counts)!r}")
    if any(c < 0 for c in occ):
        raise ValidationError(f"occupation entries must be non-negative: {occ!r}")
    if m is not None and len(occ) != m:
        raise ShapeError(f"occupation {occ!r} has length {len(occ)}, expected {m}")
    if n is not None and sum(occ) != n:
        raise ShapeError(f"occupation {occ!r} holds {sum(occ)} photons, expected {n}")
    return occ


@dataclass(frozen=True)
class FockBasis:
    """Canonically ordered Fock basis for fixed (m, n)."""

    m: int
    n: int
    states: tuple[Occupation, ...]
    index: dict[Occupation, int] = field(repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.states)

    def __iter__(self) -> Iterator[Occupation]:
        return iter(self.states)

    def __getitem__(self, k: int) -> Occupation:
        return self.states[k]

    @property
    def dim(self) -> int:
        return len(self.states)

    def position(self, occ: Sequence[int]) -> int:
        occ = as_occupation(occ, self.m, self.n)
        return self.index[occ]

    def basis_vector(self, occ: Sequence[int]) -> StateVector:
        amps = np.zeros(self.dim, dtype=complex)
        amps[self.position(occ)] = 1.0
        return StateVector(self, amps)


@lru_cache(maxsize=128)
def enumerate_basis(m: int, n: int) -> FockBasis:
    """Build the canonical :class:`FockBasis` for ``m`` modes and ``n`` photons.

    Raises:
        CapacityError: if the basis would hold more than ``MAX_BASIS_SIZE`` states.
    """
    try:
        size = dimension(m, n)
    except OverflowError as exc:
        raise CapacityError(str(exc)) from exc
    if size > MAX_BASIS_SIZE:
        raise CapacityError(f"basis for m={m}, n={n} has {size} states (limit {MAX_BASIS_SIZE})")
    states = tuple(_occupations(m, n))
    return FockBasis(m, n, states, {s: k for k, s in enumerate(states)})


@dataclass(frozen=True)
class StateVector:
    """Amplitudes over a :class:`FockBasis`, in canonical order."""

    basis: FockBasis
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.shape != (self.basis.dim,):
            raise ShapeError(
                f"expected {self.basis.dim} amplitudes for m={self.basis.m}, n={self.basis.n}, "
                f"got shape {amps.shape}"
            )
        if not np.all(np.isfinite(amps)):
            raise ValidationError("amplitudes must be finite")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @property
    def m(self) -> int:
        return self.basis.m

    @property
    def n(self) -> int:
        return self.basis.n

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def amplitude(self, occ: Sequence[int]) -> complex:
        return complex(self.amplitudes[self.basis.position(occ)])

    def as_dict(self, atol: float = 0.0) -> dict[Occupation, complex]:
        return {s: complex(a) for s, a in zip(self.basis.states, self.amplitudes) if abs(a) > atol}


def coherent_amplitudes(alpha: complex, cutoff: int) -> np.ndarray:
    """Number-state amplitudes of a coherent state, truncated at ``cutoff``.

    Returns ``exp(-|alpha|^2 / 2) * alpha**k / sqrt(k!)`` for ``k = 0..cutoff``
    without renormalising, so ``sum(abs(c)**2)`` measures the captured weight.
    """
    if int(cutoff) != cutoff or cutoff < 0:
        raise ValidationError(f"cutoff must be a non-negative integer, got {cutoff!r}")
    alpha = complex(alpha)
    if not cmath.isfinite(alpha):
        raise ValidationError("alpha must be finite")
    c0 = math.exp(-abs(alpha) ** 2 / 2)
    if c0 == 0.0 and alpha != 0:
        raise OverflowError(f"|alpha|={abs(alpha):g} underflows the vacuum amplitude")
    out = np.empty(int(cutoff) + 1, dtype=complex)
    c = complex(c0)
    for k in range(int(cutoff) + 1):
        out[k] = c
        c = c * alpha / math.sqrt(k + 1)
    if not np.all(np.isfinite(out)):
        raise OverflowError(f"coherent amplitudes overflow for |alpha|={abs(alpha):g}")
    return out

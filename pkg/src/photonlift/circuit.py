"""Beam splitters, phase shifters, and triangular decomposition of unitaries.

Mode indices are 1-based throughout.  A beam splitter on modes (a, b) acts on
that pair with the block::

    [[ cos(theta),                 exp(1j*phi) * sin(theta)],
     [-exp(-1j*phi) * sin(theta),  cos(theta)              ]]

Circuit elements are listed in the order light meets them, so the circuit
matrix is ``E_k @ ... @ E_2 @ E_1``.  The balanced (Hadamard) beam splitter
``[[1, 1], [1, -1]] / sqrt(2)`` is ``BS(1, 2, pi/4, 0)`` followed by
``PS(2, pi)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import ValidationError
from .linalg import UNITARY_ATOL, require_unitary


def _check_mode(m: int, mode: int) -> None:
    if int(m) != m or m < 1:
        raise ValidationError(f"mode count must be a positive integer, got {m!r}")
    if int(mode) != mode or not 1 <= mode <= m:
        raise ValidationError(f"mode index {mode!r} out of range [1, {m}]")


def _check_angle(*angles: float) -> None:
    if not all(math.isfinite(a) for a in angles):
        raise ValidationError(f"angles must be finite, got {angles!r}")


@dataclass(frozen=True)
class PhaseShifter:
    mode: int
    phi: float

    def matrix(self, m: int) -> np.ndarray:
        return phase_shifter(m, self.mode, self.phi)

    @property
    def modes(self) -> tuple[int, ...]:
        return (self.mode,)


@dataclass(frozen=True)
class BeamSplitter:
    mode_a: int
    mode_b: int
    theta: float
    phi: float = 0.0

    def matrix(self, m: int) -> np.ndarray:
        return beam_splitter(m, self.mode_a, self.mode_b, self.theta, self.phi)

    @property
    def modes(self) -> tuple[int, ...]:
        return (self.mode_a, self.mode_b)


CircuitElement = Union[PhaseShifter, BeamSplitter]


@dataclass(frozen=True)
class Circuit:
    m: int
    elements: tuple[CircuitElement, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        object.__setattr__(self, "elements", tuple(self.elements))
        for el in self.elements:
            for mode in el.modes:
                _check_mode(self.m, mode)
            if isinstance(el, BeamSplitter):
                if el.mode_a == el.mode_b:
                    raise ValidationError(f"beam splitter needs two distinct modes, got {el.modes}")
                _check_angle(el.theta, el.phi)
            else:
                _check_angle(el.phi)

    def __len__(self) -> int:
        return len(self.elements)

    def count(self, kind: type) -> int:
        return sum(isinstance(el, kind) for el in self.elements)

    def matrix(self) -> np.ndarray:
        return compose(self)


def phase_shifter(m: int, mode: int, phi: float) -> np.ndarray:
    """Identity on ``m`` modes with ``exp(1j*phi)`` on ``mode``."""
    _check_mode(m, mode)
    _check_angle(phi)
    s = np.eye(m, dtype=complex)
    s[mode - 1, mode - 1] = np.exp(1j * phi)
    return s


def beam_splitter(m: int, a: int, b: int, theta: float, phi: float = 0.0) -> np.ndarray:
    """Two-mode coupler on modes ``a`` and ``b`` embedded in the m-mode identity."""
    _check_mode(m, a)
    _check_mode(m, b)
    if a == b:
        raise ValidationError(f"beam splitter needs two distinct modes, got ({a}, {b})")
    _check_angle(theta, phi)
    c, s_ = math.cos(theta), math.sin(theta)
    out = np.eye(m, dtype=complex)
    i, j = a - 1, b - 1
    out[i, i] = c
    out[i, j] = np.exp(1j * phi) * s_
    out[j, i] = -np.exp(-1j * phi) * s_
    out[j, j] = c
    return out


def _apply_left(s: np.ndarray, el: CircuitElement) -> None:
    # in-place s <- E @ s, touching only the rows E acts on
    if isinstance(el, PhaseShifter):
        s[el.mode - 1, :] *= np.exp(1j * el.phi)
        return
    i, j = el.mode_a - 1, el.mode_b - 1
    c, sn = math.cos(el.theta), math.sin(el.theta)
    e = np.exp(1j * el.phi)
    ri, rj = s[i, :].copy(), s[j, :].copy()
    s[i, :] = c * ri + e * sn * rj
    s[j, :] = -np.conj(e) * sn * ri + c * rj


def compose(circuit: Circuit) -> np.ndarray:
    """Scattering matrix of ``circuit``; the first element acts first."""
    s = np.eye(circuit.m, dtype=complex)
    for el in circuit.elements:
        _apply_left(s, el)
    return s


def mesh_pairs(m: int) -> list[tuple[int, int]]:
    """Beam-splitter mode pairs of the triangular mesh, in nulling order.

    Column j (1-based) is cleared bottom-up with couplers on (i-1, i) for
    i = m .. j+1, giving m(m-1)/2 pairs in total.
    """
    return [(i - 1, i) for j in range(1, m) for i in range(m, j, -1)]


def reck_decompose(s, atol: float = UNITARY_ATOL) -> Circuit:
    """Factor a unitary into at most m(m-1)/2 beam splitters and m phase shifters.

    Sub-diagonal entries are nulled column by column with couplers acting on
    adjacent rows, ``G_K ... G_1 S = D`` with D diagonal.  Inverting gives
    ``S = G_1^dagger ... G_K^dagger D``, so the returned circuit applies the
    phase layer D first and then each inverted coupler in reverse order.
    Every residual phase of D is emitted as its own phase shifter.

    Raises:
        ValidationError: ``s`` is not unitary within ``atol``.
    """
    s = require_unitary(s, atol, "S").copy()
    m = s.shape[0]
    nulling: list[BeamSplitter] = []
    for j in range(m - 1):
        for r in range(m - 1, j, -1):
            x, y = s[r - 1, j], s[r, j]
            if y == 0:
                theta, phi = 0.0, 0.0
            else:
                theta = math.atan2(abs(y), abs(x))
                phi = float(np.angle(x) - np.angle(y))
            g = BeamSplitter(r, r + 1, theta, phi)
            _apply_left(s, g)
            s[r, j] = 0.0
            nulling.append(g)
    phases = [PhaseShifter(k + 1, float(np.angle(s[k, k]))) for k in range(m)]
    inverted = [BeamSplitter(g.mode_a, g.mode_b, -g.theta, g.phi) for g in reversed(nulling)]
    return Circuit(m, tuple(phases) + tuple(inverted))


def mesh_circuit(m: int, params: np.ndarray) -> Circuit:
    """Triangular-mesh circuit from a flat parameter vector of length m**2.

    Layout: ``m`` input phases, then (theta, phi) for each coupler of
    :func:`mesh_pairs` in the order light meets them.  This is the same
    element layout :func:`reck_decompose` emits, so every unitary is reachable.
    """
    params = np.asarray(params, dtype=float)
    if params.shape != (m * m,):
        raise ValidationError(f"mesh on {m} modes takes {m * m} parameters, got shape {params.shape}")
    elements: list[CircuitElement] = [PhaseShifter(k + 1, params[k]) for k in range(m)]
    pairs = list(reversed(mesh_pairs(m)))
    for idx, (a, b) in enumerate(pairs):
        theta, phi = params[m + 2 * idx], params[m + 2 * idx + 1]
        elements.append(BeamSplitter(a, b, float(theta), float(phi)))
    return Circuit(m, tuple(elements))


def mesh_matrix(m: int, params: np.ndarray) -> np.ndarray:
    """``compose(mesh_circuit(m, params))`` without building element objects."""
    params = np.asarray(params, dtype=float)
    s = np.diag(np.exp(1j * params[:m]))
    thetas = params[m::2]
    phis = params[m + 1 :: 2]
    cos, sin, eph = np.cos(thetas), np.sin(thetas), np.exp(1j * phis)
    for k, (a, b) in enumerate(reversed(mesh_pairs(m))):
        i, j = a - 1, b - 1
        ri, rj = s[i].copy(), s[j]
        s[i] = cos[k] * ri + eph[k] * sin[k] * rj
        s[j] = -eph[k].conjugate() * sin[k] * ri + cos[k] * rj
    return s


def mesh_matrices(m: int, params: np.ndarray) -> np.ndarray:
    """:func:`mesh_matrix` for a stack of parameter vectors, shape (K, m**2) -> (K, m, m)."""
    params = np.asarray(params, dtype=float)
    k = params.shape[0]
    s = np.zeros((k, m, m), dtype=complex)
    s[:, np.arange(m), np.arange(m)] = np.exp(1j * params[:, :m])
    cos, sin = np.cos(params[:, m::2]), np.sin(params[:, m::2])
    eph = np.exp(1j * params[:, m + 1 :: 2])
    for q, (a, b) in enumerate(reversed(mesh_pairs(m))):
        i, j = a - 1, b - 1
        ri, rj = s[:, i].copy(), s[:, j].copy()
        c, sn, e = cos[:, q, None], sin[:, q, None], eph[:, q, None]
        s[:, i] = c * ri + e * sn * rj
        s[:, j] = -e.conj() * sn * ri + c * rj
    return s


def mesh_parameters(circuit: Circuit) -> np.ndarray:
    """Inverse of :func:`mesh_circuit` for circuits with the mesh layout."""
    m = circuit.m
    els = circuit.elements
    if len(els) != m + m * (m - 1) // 2:
        raise ValidationError("circuit does not have the triangular-mesh layout")
    params = [el.phi for el in els[:m]]
    for el in els[m:]:
        params.extend([el.theta, el.phi])
    return np.array(params, dtype=float)


def haar_random_unitary(m: int, seed: int | np.random.Generator | None = None) -> np.ndarray:
    """Haar-distributed m x m unitary from QR of a complex Ginibre matrix.

    The diagonal of R is divided out so the distribution is exactly Haar.
    A fixed integer seed always yields the same matrix.
    """
    if int(m) != m or m < 1:
        raise ValidationError(f"mode count must be a positive integer, got {m!r}")
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))

"""Which (m, n) admit every Fock-space unitary, and how close the rest can get.

A multiport on m modes can realise every unitary on the n-photon space only
if m >= dimension(m, n).  That holds for n = 0, n = 1 and m = 1, and fails
for every m > 1, n > 1.  For the failing cases this module searches the
triangular-mesh parameters numerically for the best reachable overlap with a
target state, or the nearest lifted unitary to a target operator.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize

from .circuit import (
    Circuit,
    compose,
    haar_random_unitary,
    mesh_circuit,
    mesh_matrices,
    mesh_parameters,
    reck_decompose,
)
from .errors import ShapeError, ValidationError
from .fock import StateVector, _check_mn, as_occupation, dimension
from .lift import LiftedUnitary, _columns, _plan, lift
from .linalg import require_unitary

FD_STEP = 1e-6


class UniversalityTag(str, enum.Enum):
    VACUUM = "Vacuum"
    SINGLE_MODE = "SingleMode"
    SINGLE_PHOTON = "SinglePhoton"
    NOT_UNIVERSAL = "NotUniversal"


@dataclass(frozen=True)
class UniversalityClass:
    tag: UniversalityTag
    m: int
    n: int
    dim: int
    condition_met: bool

    @property
    def universal(self) -> bool:
        return self.tag is not UniversalityTag.NOT_UNIVERSAL


def necessary_condition(m: int, n: int) -> bool:
    """True iff m >= dimension(m, n), the degrees-of-freedom bound for universality."""
    _check_mn(m, n)
    # dimension(m, n) >= m for n >= 1, so large cases can skip the exact count
    if n >= 2 and m >= 2:
        return False
    return m >= dimension(m, n)


def classify(m: int, n: int) -> UniversalityClass:
    _check_mn(m, n)
    if n == 0:
        tag = UniversalityTag.VACUUM
    elif m == 1:
        tag = UniversalityTag.SINGLE_MODE
    elif n == 1:
        tag = UniversalityTag.SINGLE_PHOTON
    else:
        tag = UniversalityTag.NOT_UNIVERSAL
    return UniversalityClass(tag, m, n, dimension(m, n), necessary_condition(m, n))


@dataclass(frozen=True)
class OptimizerConfig:
    """Multi-start settings shared by both searches.

    ``value_tolerance`` is the gradient-norm stopping threshold handed to the
    local optimiser and ``step_tolerance`` its relative step threshold.
    """

    restarts: int = 16
    max_iterations: int = 500
    step_tolerance: float = 1e-10
    value_tolerance: float = 1e-9
    seed: int = 0

    def __post_init__(self) -> None:
        if int(self.restarts) != self.restarts or self.restarts < 1:
            raise ValidationError(f"restarts must be a positive integer, got {self.restarts!r}")
        if int(self.max_iterations) != self.max_iterations or self.max_iterations < 1:
            raise ValidationError(f"max_iterations must be a positive integer, got {self.max_iterations!r}")
        for name in ("step_tolerance", "value_tolerance"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValidationError(f"{name} must be positive and finite, got {v!r}")
        if int(self.seed) != self.seed:
            raise ValidationError(f"seed must be an integer, got {self.seed!r}")


@dataclass(frozen=True)
class SearchResult:
    best_value: float
    best_S: np.ndarray
    best_circuit: Circuit
    iterations_used: int
    converged: bool
    global_phase: float = 0.0


BatchLoss = Callable[[np.ndarray], np.ndarray]


def _fd_gradient(f: BatchLoss, x: np.ndarray, h: float = FD_STEP) -> np.ndarray:
    """Central differences; all 2*len(x) probes go through one batched call."""
    e = h * np.eye(x.size)
    values = f(np.concatenate([x + e, x - e]))
    return (values[: x.size] - values[x.size :]) / (2 * h)


def _starts(m: int, cfg: OptimizerConfig) -> np.ndarray:
    # mesh coordinates of Haar-random unitaries
    rng = np.random.default_rng(cfg.seed)
    return np.array(
        [mesh_parameters(reck_decompose(haar_random_unitary(m, rng))) for _ in range(cfg.restarts)]
    )


def _multistart(
    batch_loss: BatchLoss,
    starts: np.ndarray,
    cfg: OptimizerConfig,
    good_enough: float,
) -> tuple[np.ndarray, float, int, bool]:
    """Minimise ``batch_loss`` from each start in turn; ties keep the earliest restart.

    ``batch_loss`` maps a (K, d) stack of parameter vectors to K values.
    """

    def loss(x: np.ndarray) -> float:
        return float(batch_loss(x[None, :])[0])

    best_x, best_f = starts[0], math.inf
    iterations = 0
    converged = False
    for x0 in starts:
        res = minimize(
            loss,
            x0,
            jac=lambda x: _fd_gradient(batch_loss, x),
            method="BFGS",
            options={
                "gtol": cfg.value_tolerance,
                "xrtol": cfg.step_tolerance,
                "maxiter": cfg.max_iterations,
            },
        )
        iterations += int(res.nit)
        grad_ok = bool(np.max(np.abs(_fd_gradient(batch_loss, res.x)), initial=0.0) <= 10 * cfg.value_tolerance)
        converged = converged or bool(res.success) or grad_ok
        if res.fun < best_f:
            best_x, best_f = res.x, float(res.fun)
        if best_f <= good_enough:
            break
    return best_x, best_f, iterations, converged


def _normalised_target(target: StateVector, atol: float = 1e-9) -> np.ndarray:
    norm = target.norm()
    if norm == 0.0:
        raise ValidationError("target state has zero norm")
    if abs(norm - 1.0) > atol:
        raise ValidationError(f"target state is not normalised (norm {norm:.12g})")
    return target.amplitudes


def state_overlap(s, n: int, input_occ: Sequence[int], target: StateVector) -> float:
    """``|<target| U(S) |input>|**2`` evaluated through the full lifted unitary."""
    u = lift(s, n)
    col = u.basis.position(input_occ)
    return float(abs(np.vdot(target.amplitudes, u.matrix[:, col])) ** 2)


def max_state_overlap(
    m: int,
    n: int,
    input_occ: Sequence[int],
    target: StateVector,
    cfg: OptimizerConfig = OptimizerConfig(),
) -> SearchResult:
    """Best overlap ``max_S |<target| U(S) |input>|**2`` over m-mode multiports.

    S is parameterised by a full triangular mesh (m phases plus m(m-1)/2
    couplers with two angles each).  The reported value is re-evaluated at
    the returned S through :func:`lift`, so it is attained, hence a lower
    bound on the true maximum.
    """
    _check_mn(m, n)
    input_occ = as_occupation(input_occ, m, n)
    if target.m != m or target.n != n:
        raise ShapeError(f"target lives in (m={target.m}, n={target.n}), expected (m={m}, n={n})")
    t = _normalised_target(target)
    basis, idx, norms = _plan(m, n)
    col = basis.position(input_occ)

    def loss(xs: np.ndarray) -> np.ndarray:
        out = _columns(mesh_matrices(m, xs), idx, norms, [col])[..., 0]
        return -np.abs(out @ t.conj()) ** 2

    x, _, iters, converged = _multistart(loss, _starts(m, cfg), cfg, good_enough=-(1.0 - 1e-12))
    circuit = mesh_circuit(m, x)
    s = require_unitary(compose(circuit))
    value = state_overlap(s, n, input_occ, target)
    return SearchResult(value, s, circuit, iters, converged)


def lifted_distance(s, target: LiftedUnitary, phase: float = 0.0) -> float:
    """Frobenius distance ``||exp(1j*phase) U(S) - target||``."""
    u = lift(s, target.n)
    return float(np.linalg.norm(np.exp(1j * phase) * u.matrix - target.matrix))


def closest_lifted_unitary(
    target: LiftedUnitary, cfg: OptimizerConfig = OptimizerConfig()
) -> SearchResult:
    """Nearest lifted unitary to ``target`` up to a global phase.

    Minimises ``||exp(1j*gamma) U(S) - target||_F`` over the mesh parameters
    of S and the phase gamma.  For fixed S the best gamma is
    ``arg(tr(U^dagger target))``, so gamma is eliminated in closed form and the
    local optimiser works on the squared distance
    ``||U||^2 + ||target||^2 - 2 |tr(U^dagger target)|`` over S alone.
    """
    m, n = target.m, target.n
    if target.matrix.shape != (dimension(m, n),) * 2:
        raise ShapeError("target side does not match its basis dimension")
    basis, idx, norms = _plan(m, n)
    tm = np.asarray(target.matrix)
    t_norm2 = float(np.vdot(tm, tm).real)
    all_cols = np.arange(basis.dim)

    def loss(xs: np.ndarray) -> np.ndarray:
        u = _columns(mesh_matrices(m, xs), idx, norms, all_cols)
        sq = np.sum(u.real**2 + u.imag**2, axis=(1, 2))
        return sq + t_norm2 - 2 * np.abs(np.sum(u.conj() * tm, axis=(1, 2)))

    x, _, iters, converged = _multistart(loss, _starts(m, cfg), cfg, good_enough=1e-24)
    circuit = mesh_circuit(m, x)
    s = require_unitary(compose(circuit))
    gamma = float(np.mod(np.angle(np.vdot(lift(s, n).matrix, tm)), 2 * np.pi))
    value = lifted_distance(s, target, gamma)
    return SearchResult(value, s, circuit, iters, converged, gamma)

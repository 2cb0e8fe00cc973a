"""JSON interchange forms for matrices, states, lifted unitaries, circuits and results.

Complex numbers are written as ``[re, im]`` pairs.  ``*_to_json`` functions
return plain dicts/lists ready for :func:`json.dumps`; ``*_from_json`` parse
them back and raise :class:`~photonlift.errors.ValidationError` on bad input.
"""

from __future__ import annotations

import math
from typing import Any

import numpy as np

from .circuit import BeamSplitter, Circuit, PhaseShifter
from .errors import ShapeError, ValidationError
from .fock import Occupation, StateVector, as_occupation, enumerate_basis
from .lift import LiftedUnitary, lifted_from_order
from .universality import SearchResult, UniversalityClass


def round_sig(x: float, digits: int = 12) -> float:
    if x == 0 or not math.isfinite(x):
        return x
    return float(f"{x:.{digits}g}")


def rounded(obj: Any, digits: int = 12) -> Any:
    """Copy of a JSON-ready structure with every float cut to ``digits`` significant digits."""
    if isinstance(obj, float):
        return round_sig(obj, digits)
    if isinstance(obj, dict):
        return {k: rounded(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [rounded(v, digits) for v in obj]
    return obj


def _pairs(values) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in np.asarray(values, dtype=complex).ravel()]


def _complex_list(data, what: str) -> np.ndarray:
    if not isinstance(data, list):
        raise ValidationError(f"{what} must be a list of [re, im] pairs")
    out = np.empty(len(data), dtype=complex)
    for k, pair in enumerate(data):
        if (
            not isinstance(pair, (list, tuple))
            or len(pair) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in pair)
        ):
            raise ValidationError(f"{what}[{k}] must be a [re, im] pair of numbers, got {pair!r}")
        out[k] = complex(pair[0], pair[1])
    if not np.all(np.isfinite(out)):
        raise ValidationError(f"{what} contains non-finite values")
    return out


def _require(data, keys: tuple[str, ...], what: str) -> None:
    if not isinstance(data, dict):
        raise ValidationError(f"{what} must be a JSON object")
    missing = [k for k in keys if k not in data]
    if missing:
        raise ValidationError(f"{what} is missing field(s): {', '.join(missing)}")


def _int_field(data: dict, key: str, what: str, minimum: int = 0) -> int:
    v = data[key]
    if not isinstance(v, int) or isinstance(v, bool) or v < minimum:
        raise ValidationError(f"{what}.{key} must be an integer >= {minimum}, got {v!r}")
    return v


def occupation_to_json(occ: Occupation) -> list[int]:
    return [int(c) for c in occ]


def occupation_from_json(data) -> Occupation:
    if not isinstance(data, list) or not all(isinstance(c, int) and not isinstance(c, bool) for c in data):
        raise ValidationError(f"occupation must be a list of integers, got {data!r}")
    return as_occupation(data)


def matrix_to_json(a) -> dict:
    a = np.asarray(a, dtype=complex)
    return {"rows": int(a.shape[0]), "cols": int(a.shape[1]), "entries": _pairs(a)}


def matrix_from_json(data) -> np.ndarray:
    _require(data, ("rows", "cols", "entries"), "matrix")
    rows = _int_field(data, "rows", "matrix", 1)
    cols = _int_field(data, "cols", "matrix", 1)
    entries = _complex_list(data["entries"], "matrix.entries")
    if entries.size != rows * cols:
        raise ShapeError(f"matrix declares {rows}x{cols} but has {entries.size} entries")
    return entries.reshape(rows, cols)


def state_to_json(state: StateVector) -> dict:
    return {"m": state.m, "n": state.n, "amplitudes": _pairs(state.amplitudes)}


def state_from_json(data) -> StateVector:
    _require(data, ("m", "n", "amplitudes"), "state")
    m = _int_field(data, "m", "state", 1)
    n = _int_field(data, "n", "state", 0)
    return StateVector(enumerate_basis(m, n), _complex_list(data["amplitudes"], "state.amplitudes"))


def lifted_to_json(u: LiftedUnitary) -> dict:
    return {
        "m": u.m,
        "n": u.n,
        "basis": [occupation_to_json(s) for s in u.basis.states],
        "matrix": matrix_to_json(u.matrix),
    }


def lifted_from_json(data) -> LiftedUnitary:
    _require(data, ("m", "n", "matrix"), "lifted unitary")
    m = _int_field(data, "m", "lifted unitary", 1)
    n = _int_field(data, "n", "lifted unitary", 0)
    matrix = matrix_from_json(data["matrix"])
    if "basis" in data:
        if not isinstance(data["basis"], list):
            raise ValidationError("lifted unitary basis must be a list of occupations")
        states = [occupation_from_json(s) for s in data["basis"]]
    else:
        states = list(enumerate_basis(m, n).states)
    u = lifted_from_order(states, matrix)
    if (u.m, u.n) != (m, n):
        raise ValidationError(f"basis listing is for m={u.m}, n={u.n}, header says m={m}, n={n}")
    return u


def circuit_to_json(c: Circuit) -> dict:
    elements = []
    for el in c.elements:
        if isinstance(el, BeamSplitter):
            elements.append(
                {"kind": "bs", "modes": [el.mode_a, el.mode_b], "theta": float(el.theta), "phi": float(el.phi)}
            )
        else:
            elements.append({"kind": "ps", "modes": [el.mode], "phi": float(el.phi)})
    return {"m": c.m, "elements": elements}


def circuit_from_json(data) -> Circuit:
    _require(data, ("m", "elements"), "circuit")
    m = _int_field(data, "m", "circuit", 1)
    if not isinstance(data["elements"], list):
        raise ValidationError("circuit.elements must be a list")
    elements = []
    for k, el in enumerate(data["elements"]):
        what = f"circuit.elements[{k}]"
        _require(el, ("kind", "modes", "phi"), what)
        modes = el["modes"]
        if not isinstance(modes, list) or not all(isinstance(v, int) for v in modes):
            raise ValidationError(f"{what}.modes must be a list of integers")
        if el["kind"] == "ps":
            if len(modes) != 1:
                raise ValidationError(f"{what}: a phase shifter takes one mode")
            elements.append(PhaseShifter(modes[0], float(el["phi"])))
        elif el["kind"] == "bs":
            if len(modes) != 2 or "theta" not in el:
                raise ValidationError(f"{what}: a beam splitter takes two modes and theta")
            elements.append(BeamSplitter(modes[0], modes[1], float(el["theta"]), float(el["phi"])))
        else:
            raise ValidationError(f"{what}.kind must be 'bs' or 'ps', got {el['kind']!r}")
    return Circuit(m, tuple(elements))


def classification_to_json(c: UniversalityClass) -> dict:
    return {"m": c.m, "n": c.n, "M": c.dim, "class": c.tag.value, "condition_met": c.condition_met}


def search_result_to_json(r: SearchResult) -> dict:
    return {
        "value": float(r.best_value),
        "converged": bool(r.converged),
        "iterations": int(r.iterations_used),
        "global_phase": float(r.global_phase),
        "matrix": matrix_to_json(r.best_S),
        "circuit": circuit_to_json(r.best_circuit),
    }


def search_result_from_json(data) -> SearchResult:
    _require(data, ("value", "converged", "iterations", "matrix", "circuit"), "search result")
    return SearchResult(
        best_value=float(data["value"]),
        best_S=matrix_from_json(data["matrix"]),
        best_circuit=circuit_from_json(data["circuit"]),
        iterations_used=int(data["iterations"]),
        converged=bool(data["converged"]),
        global_phase=float(data.get("global_phase", 0.0)),
    )

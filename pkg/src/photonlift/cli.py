"""Command-line front end.

Results go to stdout (or ``--output``) as JSON, diagnostics to stderr.
Exit status: 0 on success, 1 on capacity or convergence failure, 2 on
invalid input (bad flags, malformed JSON, schema or precondition errors).
"""

from __future__ import annotations

import argparse
import contextlib
import json
import math
import os
import sys
from typing import Sequence, TextIO

import numpy as np

from . import serialize as ser
from .circuit import BeamSplitter, Circuit, PhaseShifter, compose, reck_decompose
from .errors import CapacityError, ConvergenceError, ShapeError, ValidationError
from .fock import StateVector, as_occupation, coherent_amplitudes, enumerate_basis
from .lift import evolve_via_operators, in_order, lift
from .linalg import unitarity_error
from .universality import OptimizerConfig, classify, closest_lifted_unitary, max_state_overlap

DIGITS = 12


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # keep argparse's exit 2, route text to stderr
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _fmt(x: float) -> str:
    return f"{x:.{DIGITS}g}"


def _fmt_c(z: complex) -> str:
    re, im = float(np.real(z)), float(np.imag(z))
    re = 0.0 if abs(re) < 1e-15 else re
    im = 0.0 if abs(im) < 1e-15 else im
    if im == 0.0:
        return _fmt(re)
    sign = "-" if im < 0 else "+"
    return f"{_fmt(re)}{sign}{_fmt(abs(im))}j"


def parse_occupation(text: str, m: int | None = None) -> tuple[int, ...]:
    """``"1,0,2"`` or, when every mode holds at most 9 photons, ``"102"``."""
    text = text.strip()
    try:
        if "," in text:
            counts = [int(t) for t in text.split(",")]
        else:
            counts = [int(ch) for ch in text]
    except ValueError:
        raise ValidationError(f"cannot parse occupation {text!r}; use e.g. 1,0,2") from None
    return as_occupation(counts, m)


def _load_json(path: str, stdin: TextIO):
    if path == "-":
        text, name = stdin.read(), "<stdin>"
    else:
        try:
            with open(path) as fh:
                text = fh.read()
        except OSError as exc:
            raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
        name = path
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{name}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _optimizer_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--restarts", type=int, default=16)
    p.add_argument("--max-iterations", type=int, default=500)
    p.add_argument("--step-tolerance", type=float, default=1e-10)
    p.add_argument("--value-tolerance", type=float, default=1e-9)
    p.add_argument("--seed", type=int, default=0)


def _config(args) -> OptimizerConfig:
    return OptimizerConfig(
        restarts=args.restarts,
        max_iterations=args.max_iterations,
        step_tolerance=args.step_tolerance,
        value_tolerance=args.value_tolerance,
        seed=args.seed,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="photonlift", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help)
        p.add_argument("-o", "--output", default="-", help="output file (default stdout)")
        return p

    p = add("lift", "lift an m x m scattering matrix to the n-photon unitary")
    p.add_argument("--matrix", default="-", help="matrix JSON file, '-' for stdin")
    p.add_argument("--n", type=int, required=True)

    p = add("evolve", "evolve a Fock state or superposition through S")
    p.add_argument("--matrix", default="-")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="input occupation, e.g. 1,1")
    src.add_argument("--state", help="input state JSON file")
    p.add_argument("--oracle", action="store_true", help="use the operator expansion instead of permanents")

    p = add("decompose", "factor a unitary into beam splitters and phase shifters")
    p.add_argument("--matrix", default="-")

    p = add("classify", "universality class of (m, n)")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)

    p = add("overlap", "best reachable overlap with a target state")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--input", required=True, help="input occupation")
    p.add_argument("--target", required=True, help="target occupation (e.g. 20) or state JSON file")
    _optimizer_args(p)

    p = add("approx-unitary", "closest lifted unitary to a target operator")
    p.add_argument("--target", required=True, help="lifted-unitary JSON file")
    _optimizer_args(p)

    p = add("coherent", "number-state amplitudes of a coherent state")
    p.add_argument("--alpha", type=complex, required=True, help="complex amplitude, e.g. 1+0.5j")
    p.add_argument("--cutoff", type=int, required=True)

    add("demo-hom", "Hong-Ou-Mandel walkthrough report")
    return parser


def _target_state(token: str, m: int, n: int, stdin: TextIO) -> StateVector:
    if token == "-" or token.endswith(".json") or os.path.exists(token):
        state = ser.state_from_json(_load_json(token, stdin))
        if (state.m, state.n) != (m, n):
            raise ShapeError(f"target state is for m={state.m}, n={state.n}, expected m={m}, n={n}")
        return state
    occ = parse_occupation(token, m)
    return enumerate_basis(m, n).basis_vector(occ)


def _run(args, stdin: TextIO) -> tuple[object, int]:
    cmd = args.command
    if cmd == "lift":
        s = ser.matrix_from_json(_load_json(args.matrix, stdin))
        return ser.lifted_to_json(lift(s, args.n)), 0
    if cmd == "evolve":
        s = ser.matrix_from_json(_load_json(args.matrix, stdin))
        m = s.shape[0]
        if args.input is not None:
            occ = parse_occupation(args.input, m)
            if args.oracle:
                return ser.state_to_json(evolve_via_operators(s, occ)), 0
            state = enumerate_basis(m, sum(occ)).basis_vector(occ)
        else:
            state = ser.state_from_json(_load_json(args.state, stdin))
            if state.m != m:
                raise ShapeError(f"state has m={state.m} but S is {m}x{m}")
            if args.oracle:
                amps = sum(
                    (a * evolve_via_operators(s, occ).amplitudes for occ, a in zip(state.basis, state.amplitudes)),
                    np.zeros(state.basis.dim, dtype=complex),
                )
                return ser.state_to_json(StateVector(state.basis, amps)), 0
        return ser.state_to_json(lift(s, state.n).apply(state)), 0
    if cmd == "decompose":
        s = ser.matrix_from_json(_load_json(args.matrix, stdin))
        return ser.circuit_to_json(reck_decompose(s)), 0
    if cmd == "classify":
        return ser.classification_to_json(classify(args.m, args.n)), 0
    if cmd == "overlap":
        cfg = _config(args)
        occ = parse_occupation(args.input, args.m)
        target = _target_state(args.target, args.m, args.n, stdin)
        result = max_state_overlap(args.m, args.n, occ, target, cfg)
        return ser.search_result_to_json(result), 0 if result.converged else 1
    if cmd == "approx-unitary":
        cfg = _config(args)
        target = ser.lifted_from_json(_load_json(args.target, stdin))
        result = closest_lifted_unitary(target, cfg)
        return ser.search_result_to_json(result), 0 if result.converged else 1
    if cmd == "coherent":
        amps = coherent_amplitudes(args.alpha, args.cutoff)
        return {
            "alpha": [args.alpha.real, args.alpha.imag],
            "cutoff": args.cutoff,
            "amplitudes": [[float(z.real), float(z.imag)] for z in amps],
            "captured_weight": float(np.sum(np.abs(amps) ** 2)),
        }, 0
    if cmd == "demo-hom":
        return demo_hom(), 0
    raise ValidationError(f"unknown command {cmd!r}")


# basis order used when quoting the two-photon, two-mode matrix by hand
HAND_ORDER = [(2, 0), (0, 2), (1, 1)]
_SYMBOLIC = [
    ["S11^2", "S12^2", "sqrt2*S11*S12"],
    ["S21^2", "S22^2", "sqrt2*S21*S22"],
    ["sqrt2*S11*S21", "sqrt2*S12*S22", "S11*S22+S12*S21"],
]


def closed_form_two_photon(s) -> np.ndarray:
    """Two-mode, two-photon unitary written out entry by entry, basis order (2,0), (0,2), (1,1)."""
    s11, s12, s21, s22 = s[0, 0], s[0, 1], s[1, 0], s[1, 1]
    r = math.sqrt(2)
    return np.array(
        [
            [s11**2, s12**2, r * s11 * s12],
            [s21**2, s22**2, r * s21 * s22],
            [r * s11 * s21, r * s12 * s22, s11 * s22 + s12 * s21],
        ]
    )


def demo_hom() -> str:
    """Plain-text Hong-Ou-Mandel report: S, its two-photon lift, and the |11> outcome."""
    circuit = Circuit(2, (BeamSplitter(1, 2, math.pi / 4, 0.0), PhaseShifter(2, math.pi)))
    s = compose(circuit)
    u = lift(s, 2)
    hand_u = in_order(u, HAND_ORDER)
    closed = closed_form_two_photon(s)
    out_state = u.apply(u.basis.basis_vector((1, 1)))
    probs = np.abs(out_state.amplitudes) ** 2
    lines = ["Hong-Ou-Mandel: two photons on a balanced beam splitter", ""]
    lines.append("Scattering matrix S = BS(1,2, theta=pi/4, phi=0) then PS(2, pi):")
    for row in s:
        lines.append("  [" + ", ".join(f"{_fmt_c(z):>16}" for z in row) + "]")
    lines.append("")
    lines.append("Lifted U on basis |20>, |02>, |11> (symbolic | closed form | permanent):")
    names = ["|20>", "|02>", "|11>"]
    for r in range(3):
        for c in range(3):
            lines.append(
                f"  <{names[r][1:3]}|U|{names[c][1:3]}>  {_SYMBOLIC[r][c]:<16} "
                f"{_fmt_c(closed[r, c]):>16}  {_fmt_c(hand_u[r, c]):>16}"
            )
    err = unitarity_error(u.matrix)
    lines.append(f"  max |U^dagger U - I| = {err:.3e}  ({'unitary' if err <= 1e-9 * 3 else 'NOT unitary'})")
    lines.append("")
    lines.append("Input |11>; output amplitudes and probabilities:")
    for occ in HAND_ORDER:
        k = u.basis.position(occ)
        label = "|" + "".join(map(str, occ)) + ">"
        lines.append(f"  {label}  amplitude {_fmt_c(out_state.amplitudes[k]):>16}  p = {_fmt_c(probs[k])}")
    lines.append("")
    lines.append("Coincidence probability p(1,1) = " + _fmt_c(probs[u.basis.position((1, 1))]))
    return "\n".join(lines) + "\n"


def main(argv: Sequence[str] | None = None, stdin: TextIO | None = None, stdout: TextIO | None = None,
         stderr: TextIO | None = None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stderr(stderr), contextlib.redirect_stdout(stdout):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        payload, status = _run(args, stdin)
    except (ValidationError, ShapeError) as exc:
        print(f"error: {exc}", file=stderr)
        return 2
    except (CapacityError, ConvergenceError, OverflowError) as exc:
        print(f"error: {exc}", file=stderr)
        return 1
    text = payload if isinstance(payload, str) else json.dumps(ser.rounded(payload, DIGITS)) + "\n"
    if args.output == "-":
        stdout.write(text)
    else:
        with open(args.output, "w") as fh:
            fh.write(text)
    if status == 1:
        print("error: optimizer did not converge on any restart; best point reported", file=stderr)
    return status

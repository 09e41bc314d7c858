"""Circuit IR, the line-oriented text format, and benchmark generators.

File format (UTF-8, '#' starts a comment, blank lines ignored):

    qubits <N>                         header, required first
    x|y|z|h|s|sdg|t|tdg <q>            single-qubit gates
    p <theta-radians> <q>              phase gate diag(1, e^{i*theta})
    rk <k> <q>                         diag(1, e^{2*pi*i/2^k})
    cx <c> <t>                         controlled X
    cp <k> <c> <t>                     controlled rk
    mcx <c1> .. <cm> <t>               multi-controlled X
    mcz <c1> .. <cm> <t>               multi-controlled Z
    measure <q>
    measure_all

Qubit 0 is the most significant qubit of a basis-state index.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .gates import GateKind, GateSpec


@dataclass(frozen=True)
class GateOp:
    spec: GateSpec


@dataclass(frozen=True)
class MeasureOp:
    qubit: int


@dataclass(frozen=True)
class MeasureAllOp:
    pass


CircuitOp = GateOp | MeasureOp | MeasureAllOp


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    ops: tuple[CircuitOp, ...] = ()
    name: str = "circuit"

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(self.ops))
        if self.n_qubits < 1:
            raise ValueError("circuit needs at least one qubit")
        for op in self.ops:
            if isinstance(op, GateOp):
                refs = {op.spec.target, *op.spec.controls}
            elif isinstance(op, MeasureOp):
                refs = {op.qubit}
            else:
                refs = set()
            bad = [q for q in refs if not 0 <= q < self.n_qubits]
            if bad:
                raise ValueError(f"qubit index {bad[0]} out of range "
                                 f"for {self.n_qubits} qubits")


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


_SINGLE = {k.value: k for k in (GateKind.X, GateKind.Y, GateKind.Z, GateKind.H,
                                GateKind.S, GateKind.SDG, GateKind.T,
                                GateKind.TDG)}


def _int_tok(tok: str, line: int, col: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected {what}, got {tok!r}", line, col) from None


def _float_tok(tok: str, line: int, col: int) -> float:
    try:
        return float(tok)
    except ValueError:
        raise ParseError(f"expected an angle, got {tok!r}", line, col) from None


def _rk_tok(tok: str, line: int, col: int) -> int:
    k = _int_tok(tok, line, col, "an integer k")
    if k < 1:
        raise ParseError(f"rk order must be >= 1, got {k}", line, col)
    return k


def parse(text: str, name: str = "circuit") -> Circuit:
    """Parse the text format above into a Circuit."""
    n_qubits: int | None = None
    ops: list[CircuitOp] = []
    last_line = 0

    def qubit(tok: str, line: int, col: int) -> int:
        q = _int_tok(tok, line, col, "a qubit index")
        if not 0 <= q < n_qubits:
            raise ParseError(f"qubit {q} out of range for {n_qubits} qubits",
                             line, col)
        return q

    for lineno, raw in enumerate(text.splitlines(), start=1):
        last_line = lineno
        toks = [(m.group(0), m.start() + 1)
                for m in re.finditer(r"\S+", raw.split("#", 1)[0])]
        if not toks:
            continue
        (word, col), args = toks[0], toks[1:]

        if n_qubits is None:
            if word != "qubits":
                raise ParseError("expected 'qubits <N>' header", lineno, col)
            if len(args) != 1:
                raise ParseError("'qubits' takes one count", lineno, col)
            n_qubits = _int_tok(args[0][0], lineno, args[0][1], "a qubit count")
            if n_qubits < 1:
                raise ParseError("qubit count must be positive",
                                 lineno, args[0][1])
            continue

        def need(count: int):
            if len(args) != count:
                raise ParseError(
                    f"'{word}' takes {count} argument{'s' if count != 1 else ''},"
                    f" got {len(args)}", lineno, col)

        if word == "qubits":
            raise ParseError("duplicate 'qubits' header", lineno, col)
        elif word in _SINGLE:
            need(1)
            ops.append(GateOp(GateSpec(_SINGLE[word],
                                       qubit(args[0][0], lineno, args[0][1]))))
        elif word == "p":
            need(2)
            theta = _float_tok(args[0][0], lineno, args[0][1])
            ops.append(GateOp(GateSpec(GateKind.PHASE,
                                       qubit(args[1][0], lineno, args[1][1]),
                                       param=theta)))
        elif word == "rk":
            need(2)
            k = _rk_tok(args[0][0], lineno, args[0][1])
            ops.append(GateOp(GateSpec(GateKind.RK,
                                       qubit(args[1][0], lineno, args[1][1]),
                                       param=k)))
        elif word == "cx":
            need(2)
            c = qubit(args[0][0], lineno, args[0][1])
            t = qubit(args[1][0], lineno, args[1][1])
            if c == t:
                raise ParseError("repeated qubit in gate", lineno, col)
            ops.append(GateOp(GateSpec(GateKind.X, t, frozenset({c}))))
        elif word == "cp":
            need(3)
            k = _rk_tok(args[0][0], lineno, args[0][1])
            c = qubit(args[1][0], lineno, args[1][1])
            t = qubit(args[2][0], lineno, args[2][1])
            if c == t:
                raise ParseError("repeated qubit in gate", lineno, col)
            ops.append(GateOp(GateSpec(GateKind.RK, t, frozenset({c}), param=k)))
        elif word in ("mcx", "mcz"):
            if len(args) < 2:
                raise ParseError(f"'{word}' needs at least one control and a"
                                 " target", lineno, col)
            qs = [qubit(tok, lineno, c_) for tok, c_ in args]
            controls, target = qs[:-1], qs[-1]
            if len(set(controls)) != len(controls) or target in controls:
                raise ParseError("repeated qubit in gate", lineno, col)
            kind = GateKind.X if word == "mcx" else GateKind.Z
            ops.append(GateOp(GateSpec(kind, target, frozenset(controls))))
        elif word == "measure":
            need(1)
            ops.append(MeasureOp(qubit(args[0][0], lineno, args[0][1])))
        elif word == "measure_all":
            need(0)
            ops.append(MeasureAllOp())
        else:
            raise ParseError(f"unknown instruction {word!r}", lineno, col)

    if n_qubits is None:
        raise ParseError("missing 'qubits <N>' header", last_line + 1, 1)
    return Circuit(n_qubits, tuple(ops), name)


def serialize(circuit: Circuit) -> str:
    """Inverse of parse for circuits expressible in the text format."""
    lines = [f"qubits {circuit.n_qubits}"]
    for op in circuit.ops:
        if isinstance(op, MeasureOp):
            lines.append(f"measure {op.qubit}")
        elif isinstance(op, MeasureAllOp):
            lines.append("measure_all")
        else:
            spec = op.spec
            cs = sorted(spec.controls)
            if not cs:
                if spec.kind is GateKind.PHASE:
                    lines.append(f"p {spec.param!r} {spec.target}")
                elif spec.kind is GateKind.RK:
                    lines.append(f"rk {spec.param} {spec.target}")
                else:
                    lines.append(f"{spec.kind.value} {spec.target}")
            elif spec.kind is GateKind.X:
                if len(cs) == 1:
                    lines.append(f"cx {cs[0]} {spec.target}")
                else:
                    lines.append(f"mcx {' '.join(map(str, cs))} {spec.target}")
            elif spec.kind is GateKind.Z:
                lines.append(f"mcz {' '.join(map(str, cs))} {spec.target}")
            elif spec.kind is GateKind.RK and len(cs) == 1:
                lines.append(f"cp {spec.param} {cs[0]} {spec.target}")
            else:
                raise ValueError(f"no text form for {spec!r}")
    return "\n".join(lines) + "\n"


# -- benchmark families ------------------------------------------------------

def gen_entangle(n: int) -> Circuit:
    """H then a CNOT chain: final state (|0...0> + |1...1>)/sqrt(2)."""
    ops: list[CircuitOp] = [GateOp(GateSpec(GateKind.H, 0))]
    for q in range(n - 1):
        ops.append(GateOp(GateSpec(GateKind.X, q + 1, frozenset({q}))))
    return Circuit(n, tuple(ops), f"entangle-{n}")


def gen_qft(n: int, bits: str) -> Circuit:
    """Fourier transform of the basis state |bits>.

    X-prep, then per target the H plus controlled-rk ladder (control on
    the less significant qubit, k = distance + 1), then qubit-reversal
    swaps spelled as CNOT triples so the output matches the DFT matrix
    column directly.
    """
    if len(bits) != n or any(b not in "01" for b in bits):
        raise ValueError(f"need a length-{n} bitstring, got {bits!r}")
    ops: list[CircuitOp] = []
    for q, b in enumerate(bits):
        if b == "1":
            ops.append(GateOp(GateSpec(GateKind.X, q)))
    for t in range(n):
        ops.append(GateOp(GateSpec(GateKind.H, t)))
        for c in range(t + 1, n):
            ops.append(GateOp(GateSpec(GateKind.RK, t, frozenset({c}),
                                       param=c - t + 1)))
    for a in range(n // 2):
        b = n - 1 - a
        for c, t in ((a, b), (b, a), (a, b)):
            ops.append(GateOp(GateSpec(GateKind.X, t, frozenset({c}))))
    return Circuit(n, tuple(ops), f"qft-{n}")


def grover_iterations(n: int) -> int:
    """floor(pi/4 * sqrt(2^n)) rounds; 0 for the degenerate n=1 case."""
    if n < 2:
        return 0
    return math.floor(math.pi / 4 * math.sqrt(2 ** n))


def gen_grover(n: int, marked: str) -> Circuit:
    """Amplitude amplification of |marked> with a phase oracle.

    Oracle: X-conjugated multi-controlled Z matching the marked pattern;
    diffusion: H layer, X layer, multi-controlled Z, X layer, H layer.
    No ancilla qubits.
    """
    if len(marked) != n or any(b not in "01" for b in marked):
        raise ValueError(f"need a length-{n} bitstring, got {marked!r}")
    ops: list[CircuitOp] = [GateOp(GateSpec(GateKind.H, q)) for q in range(n)]
    controls = frozenset(range(n - 1))

    def mcz():
        ops.append(GateOp(GateSpec(GateKind.Z, n - 1, controls)))

    def layer(kind: GateKind, pred=lambda q: True):
        for q in range(n):
            if pred(q):
                ops.append(GateOp(GateSpec(kind, q)))

    for _ in range(grover_iterations(n)):
        # oracle: phase flip on |marked>
        layer(GateKind.X, lambda q: marked[q] == "0")
        mcz()
        layer(GateKind.X, lambda q: marked[q] == "0")
        # diffusion: inversion about the mean
        layer(GateKind.H)
        layer(GateKind.X)
        mcz()
        layer(GateKind.X)
        layer(GateKind.H)
    return Circuit(n, tuple(ops), f"grover-{n}")

"""Standard gate set and O(n)-node diagram construction.

Gates are single-target with any number of positive controls (active on
|1>). Negative controls are expressible at the circuit layer by X
conjugation. Y is included for gate-set completeness even though the
core set is X/Z/H plus phases.

build_gate_dd assembles the n-qubit diagram bottom-up without ever
forming a dense matrix: below the target it carries the four quadrant
tracks of the base matrix (identity-extended at plain levels, gated into
the e11 quadrant at control levels, with the untouched identity chain in
e00), joins them at the target level, and wraps controls/identity above.
The result has at most 2n nodes regardless of the control count.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum

from .cvalue import SQRT2_INV
from .dd import MEdge, TERMINAL, Universe


class GateKind(Enum):
    X = "x"
    Y = "y"
    Z = "z"
    H = "h"
    S = "s"
    SDG = "sdg"
    T = "t"
    TDG = "tdg"
    PHASE = "p"     # diag(1, e^{i*theta}), theta in radians
    RK = "rk"       # diag(1, e^{2*pi*i / 2^k})


_PARAMLESS = frozenset(k for k in GateKind if k not in (GateKind.PHASE, GateKind.RK))


@dataclass(frozen=True)
class GateSpec:
    """One gate application: kind, target qubit, positive controls."""

    kind: GateKind
    target: int
    controls: frozenset[int] = field(default_factory=frozenset)
    param: float | int | None = None

    def __post_init__(self):
        object.__setattr__(self, "controls", frozenset(self.controls))
        if self.target in self.controls:
            raise ValueError(f"target {self.target} is also a control")
        if self.kind in _PARAMLESS:
            if self.param is not None:
                raise ValueError(f"{self.kind.name} takes no parameter")
        elif self.kind is GateKind.RK:
            if not isinstance(self.param, int) or self.param < 1:
                raise ValueError(f"RK needs an integer k >= 1, got {self.param!r}")
        elif self.param is None:
            raise ValueError(f"{self.kind.name} needs an angle parameter")


def base2x2(kind: GateKind, param: float | int | None = None):
    """The 2x2 unitary for a gate kind as nested tuples."""
    if kind is GateKind.X:
        return ((0j, 1 + 0j), (1 + 0j, 0j))
    if kind is GateKind.Y:
        return ((0j, -1j), (1j, 0j))
    if kind is GateKind.Z:
        return ((1 + 0j, 0j), (0j, -1 + 0j))
    if kind is GateKind.H:
        s = complex(SQRT2_INV)
        return ((s, s), (s, -s))
    if kind is GateKind.S:
        return ((1 + 0j, 0j), (0j, 1j))
    if kind is GateKind.SDG:
        return ((1 + 0j, 0j), (0j, -1j))
    if kind is GateKind.T:
        return ((1 + 0j, 0j), (0j, cmath.exp(1j * math.pi / 4)))
    if kind is GateKind.TDG:
        return ((1 + 0j, 0j), (0j, cmath.exp(-1j * math.pi / 4)))
    if kind is GateKind.PHASE:
        return ((1 + 0j, 0j), (0j, cmath.exp(1j * param)))
    if kind is GateKind.RK:
        return ((1 + 0j, 0j), (0j, cmath.exp(2j * math.pi / 2 ** param)))
    raise ValueError(f"unknown gate kind {kind!r}")


def identity_dd(uni: Universe, n: int) -> MEdge:
    """Identity over n qubits: a chain of n nodes."""
    if n < 0:
        raise ValueError("qubit count must be nonnegative")
    zero = uni.matrix_zero()
    e = MEdge(uni.ctab.one, TERMINAL)
    for level in range(n - 1, -1, -1):
        e = uni.make_matrix_node(level, e, zero, zero, e)
    return e


def build_gate_dd(uni: Universe, n: int, spec: GateSpec) -> MEdge:
    """n-qubit diagram of a controlled single-qubit gate."""
    if not 0 <= spec.target < n:
        raise ValueError(f"target {spec.target} out of range for n={n}")
    for c in spec.controls:
        if not 0 <= c < n:
            raise ValueError(f"control {c} out of range for n={n}")
    ct = uni.ctab
    zero = uni.matrix_zero()
    u = base2x2(spec.kind, spec.param)
    tracks = [MEdge(ct.intern(u[i][j].real, u[i][j].imag), TERMINAL)
              for i in (0, 1) for j in (0, 1)]
    ident = MEdge(ct.one, TERMINAL)
    e = None
    for level in range(n - 1, -1, -1):
        if level > spec.target:
            if level in spec.controls:
                # input/output 0 on a control: the gate never fires, so
                # the untouched identity chain sits in e00.
                tracks = [
                    uni.make_matrix_node(level, ident if i == j else zero,
                                         zero, zero, tracks[2 * i + j])
                    for i in (0, 1) for j in (0, 1)
                ]
            else:
                tracks = [uni.make_matrix_node(level, t, zero, zero, t)
                          for t in tracks]
        elif level == spec.target:
            e = uni.make_matrix_node(level, *tracks)
        else:
            if level in spec.controls:
                e = uni.make_matrix_node(level, ident, zero, zero, e)
            else:
                e = uni.make_matrix_node(level, e, zero, zero, e)
        ident = uni.make_matrix_node(level, ident, zero, zero, ident)
    return e

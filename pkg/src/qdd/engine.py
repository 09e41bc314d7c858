"""Circuit execution: gate application, measurement, statistics.

One run owns one Universe (and therefore one complex table, one unique
table, one compute cache); concurrent simulations need disjoint engines.
The state starts as |0...0>, every gate goes through a diagram
multiplication, and the squared norm is checked against 1 after each one.
Node statistics are sampled at op boundaries, where they are
well-defined, so identical configs reproduce identical stats (modulo
wall time).
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from .circuit import Circuit, GateOp, MeasureAllOp, MeasureOp
from .dd import MEdge, Universe, VEdge, count_nodes
from .gates import GateSpec, build_gate_dd
from .ops import (NormDriftError, PROB_TOL, measure_all, measure_qubit,
                  multiply, norm_squared)


@dataclass(frozen=True)
class EngineConfig:
    seed: int = 0
    shots: int = 1
    gate_dd_cache_enabled: bool = True
    gc_threshold: int = 1_000_000


@dataclass
class SimStats:
    n_qubits: int
    gates_applied: int = 0
    peak_vector_nodes: int = 0
    peak_unique_nodes: int = 0
    wall_time_ms: float = 0.0
    final_norm_deviation: float = 0.0
    histogram: dict[str, int] = field(default_factory=dict)


def gate_dd_for(uni: Universe, n: int, spec: GateSpec,
                cache: dict | None) -> MEdge:
    """Build (or fetch) the n-qubit diagram for one gate spec."""
    if cache is None:
        return build_gate_dd(uni, n, spec)
    edge = cache.get(spec)
    if edge is None:
        edge = build_gate_dd(uni, n, spec)
        cache[spec] = edge
    return edge


class _Simulation:
    """State of one circuit execution; reusable across shots."""

    def __init__(self, circuit: Circuit, config: EngineConfig,
                 uni: Universe | None = None, rng: random.Random | None = None,
                 gate_cache: dict | None = None):
        self.circuit = circuit
        self.config = config
        self.uni = uni if uni is not None else Universe()
        self.rng = rng if rng is not None else random.Random(config.seed)
        if gate_cache is not None:
            self.gate_cache = gate_cache
        else:
            self.gate_cache = {} if config.gate_dd_cache_enabled else None
        self.stats = SimStats(n_qubits=circuit.n_qubits)
        self.state: VEdge = self.uni.basis_state(circuit.n_qubits,
                                                 "0" * circuit.n_qubits)
        self._note_state()

    def _note_state(self) -> None:
        st = self.stats
        st.peak_vector_nodes = max(st.peak_vector_nodes, count_nodes(self.state))
        st.peak_unique_nodes = max(st.peak_unique_nodes, self.uni.live_nodes)

    def _apply(self, op, index: int) -> None:
        if isinstance(op, GateOp):
            gate = gate_dd_for(self.uni, self.circuit.n_qubits, op.spec,
                               self.gate_cache)
            self.state = multiply(self.uni, gate, self.state)
            self.stats.gates_applied += 1
            dev = abs(norm_squared(self.uni, self.state) - 1.0)
            if dev > PROB_TOL:
                raise NormDriftError(
                    f"norm drifted to deviation {dev:g} after op {index}"
                    f" ({op.spec.kind.name})", deviation=dev, op_index=index)
        else:
            try:
                if isinstance(op, MeasureOp):
                    _, self.state = measure_qubit(self.uni, self.state,
                                                  op.qubit, self.rng)
                elif isinstance(op, MeasureAllOp):
                    for q in range(self.circuit.n_qubits):
                        _, self.state = measure_qubit(self.uni, self.state, q,
                                                      self.rng)
            except NormDriftError as err:
                raise NormDriftError(f"{err} (op {index})",
                                     deviation=err.deviation,
                                     op_index=index) from None

    def _maybe_gc(self) -> None:
        if self.uni.live_nodes > self.config.gc_threshold:
            roots = [self.state]
            if self.gate_cache:
                roots.extend(self.gate_cache.values())
            self.uni.gc_collect(roots)

    def execute(self, on_op=None) -> VEdge:
        for index, op in enumerate(self.circuit.ops):
            self._apply(op, index)
            self._note_state()
            if on_op is not None:
                on_op(self.uni, self.state, index)
            self._maybe_gc()
        self.stats.final_norm_deviation = abs(
            norm_squared(self.uni, self.state) - 1.0)
        return self.state


def run(circuit: Circuit, config: EngineConfig | None = None,
        on_op=None) -> tuple[VEdge, SimStats]:
    """Execute the circuit once; returns (final state, stats).

    Measurement ops collapse the state in place. ``on_op(uni, state, i)``
    is called after each op, for instrumentation.
    """
    cfg = config if config is not None else EngineConfig()
    t0 = time.perf_counter()
    sim = _Simulation(circuit, cfg)
    sim.execute(on_op)
    sim.stats.wall_time_ms = (time.perf_counter() - t0) * 1e3
    return sim.state, sim.stats


def _trailing_measure_split(circuit: Circuit) -> int | None:
    """Index of the first measurement when no gate follows it, else None."""
    first = None
    for i, op in enumerate(circuit.ops):
        if isinstance(op, (MeasureOp, MeasureAllOp)):
            if first is None:
                first = i
        elif first is not None:
            return None
    return first if first is not None else len(circuit.ops)


def sample(circuit: Circuit, config: EngineConfig | None = None) -> SimStats:
    """Run with ``config.shots`` repetitions; histogram over full-register
    bitstrings.

    When every measurement sits at the end of the circuit (or there is
    none), the pre-measurement state is computed once and sampled per
    shot; a mid-circuit measurement forces a full re-simulation per shot.
    Either way each shot contributes one n-bit key.
    """
    cfg = config if config is not None else EngineConfig()
    t0 = time.perf_counter()
    histogram: dict[str, int] = {}
    split = _trailing_measure_split(circuit)
    if split is not None:
        prefix = Circuit(circuit.n_qubits, circuit.ops[:split], circuit.name)
        sim = _Simulation(prefix, cfg)
        state = sim.execute()
        stats = sim.stats
        for _ in range(cfg.shots):
            bits = measure_all(sim.uni, state, sim.rng)
            histogram[bits] = histogram.get(bits, 0) + 1
    else:
        uni = Universe()
        rng = random.Random(cfg.seed)
        gate_cache: dict | None = {} if cfg.gate_dd_cache_enabled else None
        stats = SimStats(n_qubits=circuit.n_qubits)
        for _ in range(cfg.shots):
            sim = _Simulation(circuit, cfg, uni=uni, rng=rng,
                              gate_cache=gate_cache)
            state = sim.execute()
            bits = measure_all(uni, state, rng)
            histogram[bits] = histogram.get(bits, 0) + 1
            stats.gates_applied = sim.stats.gates_applied
            stats.peak_vector_nodes = max(stats.peak_vector_nodes,
                                          sim.stats.peak_vector_nodes)
            stats.peak_unique_nodes = max(stats.peak_unique_nodes,
                                          sim.stats.peak_unique_nodes)
            stats.final_norm_deviation = sim.stats.final_norm_deviation
    stats.histogram = histogram
    stats.wall_time_ms = (time.perf_counter() - t0) * 1e3
    return stats

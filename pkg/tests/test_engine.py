import dataclasses
import math

import numpy as np
import pytest

import qdd.dense as dense
from qdd import (Circuit, EngineConfig, GateKind, GateOp, GateSpec,
                 MeasureAllOp, Universe, count_nodes, gate_dd_for,
                 gen_entangle, gen_qft, parse, run, sample)

from _util import dft_matrix, random_circuit

S = 1 / math.sqrt(2)

BELL_MEASURE = "qubits 2\nh 0\ncx 0 1\nmeasure 0\n"


def state_vector(circuit, config=None):
    """Run and read back the final amplitudes (test convenience)."""
    from qdd.engine import _Simulation
    sim = _Simulation(circuit, config or EngineConfig())
    state = sim.execute()
    return np.array(sim.uni.read_dense(state, circuit.n_qubits)), sim.stats


class TestRun:
    def test_empty_circuit(self):
        state, stats = run(Circuit(3))
        assert stats.gates_applied == 0
        assert stats.peak_vector_nodes == 3
        vec, _ = state_vector(Circuit(3))
        assert np.array_equal(vec, dense.zero_state(3))

    def test_measured_bell_collapses_both_qubits(self):
        seen = set()
        for seed in range(12):
            vec, stats = state_vector(parse(BELL_MEASURE),
                                      EngineConfig(seed=seed))
            nonzero = np.flatnonzero(np.abs(vec) > 1e-12)
            assert list(nonzero) in ([0], [3])  # |00> or |11>
            assert vec[nonzero[0]] == pytest.approx(1.0, abs=1e-10)
            seen.add(int(nonzero[0]))
        assert seen == {0, 3}  # both outcomes occur across seeds

    def test_pre_measurement_state_is_bell(self):
        c = parse("qubits 2\nh 0\ncx 0 1\n")
        vec, _ = state_vector(c)
        assert np.allclose(vec, [S, 0, 0, S], atol=1e-12)

    def test_qft_matches_dense_oracle(self):
        bits = "1011001010"
        vec, _ = state_vector(gen_qft(10, bits))
        want = dft_matrix(10)[:, int(bits, 2)]
        assert np.max(np.abs(vec - want)) < 1e-9

    def test_measurement_free_run_is_seed_independent(self):
        c = gen_qft(5, "10110")
        v1, _ = state_vector(c, EngineConfig(seed=1))
        v2, _ = state_vector(c, EngineConfig(seed=999))
        assert np.array_equal(v1, v2)

    def test_stats_reproducible_modulo_wall_time(self):
        c = random_circuit(np.random.default_rng(0), 5, 30)
        _, s1 = run(c, EngineConfig(seed=5))
        _, s2 = run(c, EngineConfig(seed=5))
        d1 = dataclasses.asdict(s1)
        d2 = dataclasses.asdict(s2)
        d1.pop("wall_time_ms")
        d2.pop("wall_time_ms")
        assert d1 == d2

    def test_measure_all_op_collapses_to_basis_state(self):
        c = Circuit(3, (GateOp(GateSpec(GateKind.H, 0)),
                        GateOp(GateSpec(GateKind.H, 1)),
                        MeasureAllOp()))
        vec, _ = state_vector(c, EngineConfig(seed=3))
        assert sorted(np.abs(vec).round(9)) == [0] * 7 + [1]

    def test_on_op_observer_sees_every_op(self):
        calls = []
        run(gen_entangle(4), on_op=lambda uni, state, i: calls.append(i))
        assert calls == list(range(4))


class TestPeaks:
    def test_entangle_peak_linear(self):
        for n in (8, 32, 64):
            _, stats = run(gen_entangle(n))
            assert stats.peak_vector_nodes <= 2 * n

    def test_qft_peak_linear(self):
        for n in (4, 8, 16, 24, 32, 40):
            bits = "10" * (n // 2)
            _, stats = run(gen_qft(n, bits))
            assert stats.peak_vector_nodes <= 4 * n

    def test_peak_at_least_final(self):
        c = random_circuit(np.random.default_rng(2), 6, 25)
        state, stats = run(c)
        assert stats.peak_vector_nodes >= count_nodes(state)
        assert stats.gates_applied == 25


class TestSample:
    def test_bell_histogram(self):
        stats = sample(gen_entangle(2), EngineConfig(seed=11, shots=10_000))
        assert set(stats.histogram) == {"00", "11"}
        assert sum(stats.histogram.values()) == 10_000
        assert abs(stats.histogram["00"] / 10_000 - 0.5) < 0.02

    def test_deterministic_preparation(self):
        c = parse("qubits 2\nx 0\n")
        stats = sample(c, EngineConfig(seed=0, shots=100))
        assert stats.histogram == {"10": 100}

    def test_trailing_measure_equivalent_to_sampling(self):
        # explicit trailing measurement ops do not change the joint stats
        with_measure = parse(BELL_MEASURE)
        stats = sample(with_measure, EngineConfig(seed=4, shots=5_000))
        assert set(stats.histogram) == {"00", "11"}

    def test_mid_circuit_measurement_resimulates(self):
        text = "qubits 2\nh 0\nmeasure 0\nh 0\nmeasure_all\n"
        stats = sample(parse(text), EngineConfig(seed=2, shots=2_000))
        assert sum(stats.histogram.values()) == 2_000
        # outcomes follow |+/-><0| structure: second bit always 0
        assert all(k.endswith("0") for k in stats.histogram)

    def test_same_seed_same_histogram(self):
        c = gen_entangle(3)
        s1 = sample(c, EngineConfig(seed=123, shots=500))
        s2 = sample(c, EngineConfig(seed=123, shots=500))
        assert s1.histogram == s2.histogram
        assert s1.peak_vector_nodes == s2.peak_vector_nodes

    def test_grover_sampling_concentrates(self):
        from qdd import gen_grover
        marked = "10011010"
        stats = sample(gen_grover(8, marked), EngineConfig(seed=8, shots=1000))
        assert stats.histogram.get(marked, 0) / 1000 >= 0.97


class TestGateDDCache:
    def test_cache_hit_returns_same_edge(self):
        uni = Universe()
        cache = {}
        spec = GateSpec(GateKind.H, 1)
        a = gate_dd_for(uni, 3, spec, cache)
        b = gate_dd_for(uni, 3, spec, cache)
        assert a == b and len(cache) == 1

    def test_disabled_cache_still_correct(self):
        c = gen_entangle(3)
        v1, _ = state_vector(c, EngineConfig(gate_dd_cache_enabled=False))
        v2, _ = state_vector(c, EngineConfig())
        assert np.array_equal(v1, v2)


class TestGc:
    def test_low_threshold_forces_collection_and_stays_correct(self):
        c = random_circuit(np.random.default_rng(9), 5, 40)
        v1, s1 = state_vector(c, EngineConfig(gc_threshold=40))
        v2, s2 = state_vector(c, EngineConfig())
        assert np.max(np.abs(v1 - v2)) < 1e-12
        assert s2.peak_unique_nodes >= s1.peak_unique_nodes


class TestNormCheck:
    def test_norm_deviation_reported_small(self):
        _, stats = run(gen_qft(8, "10101010"))
        assert stats.final_norm_deviation < 1e-10

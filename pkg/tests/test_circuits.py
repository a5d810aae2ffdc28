import numpy as np
import pytest

from qcb import qsim
from qcb.circuits import (
    CircuitConfig,
    CircuitFamily,
    CorrelationGraph,
    CostHamiltonian,
    ExpressibilityResult,
    ParamVector,
    build_correlation_graph,
    build_cost_hamiltonian,
    build_feature_map,
    build_qaoa_circuit,
    build_vqc_circuit,
    circuit_depth,
    entanglement_pairs,
    expressibility,
    param_count,
    spearman,
    spearman_detailed,
)
from qcb.errors import ConfigurationError, UsageError
from qcb.qsim import GateKind, apply_circuit, init_plus, init_zero

from oracles import dense_simulate, rank_then_pearson


class TestSpearman:
    def test_monotone_increasing(self):
        assert spearman([1, 2, 3], [10, 20, 30]) == 1.0

    def test_monotone_decreasing(self):
        assert spearman([1, 2, 3], [3, 2, 1]) == -1.0

    def test_ties_match_rank_then_pearson_oracle(self):
        x = [1, 2, 2, 4]
        y = [1, 3, 2, 4]
        assert abs(spearman(x, y) - rank_then_pearson(x, y)) < 1e-12

    def test_random_vectors_with_ties_match_oracle(self):
        rng = np.random.default_rng(0)
        for _ in range(100):
            n = int(rng.integers(3, 40))
            x = rng.integers(0, 6, size=n).astype(float)  # plenty of ties
            y = rng.integers(0, 6, size=n).astype(float)
            ours = spearman(x, y)
            assert abs(ours - rank_then_pearson(x, y)) < 1e-12

    def test_no_ties_matches_classic_formula(self):
        rng = np.random.default_rng(5)
        for _ in range(30):
            n = int(rng.integers(3, 30))
            x = rng.permutation(n).astype(float)
            y = rng.permutation(n).astype(float)
            dx = np.argsort(np.argsort(x)) - np.argsort(np.argsort(y))
            classic = 1 - 6 * np.sum(dx.astype(float) ** 2) / (n * (n**2 - 1))
            assert abs(spearman(x, y) - classic) < 1e-12

    def test_degenerate_input_flagged(self):
        result = spearman_detailed([1, 1, 1], [1, 2, 3])
        assert result.rho == 0.0
        assert result.degenerate

    def test_errors(self):
        with pytest.raises(UsageError):
            spearman([1, 2], [1, 2, 3])
        with pytest.raises(UsageError):
            spearman([1], [2])


class TestCorrelationGraph:
    def test_identical_features_pair(self):
        x = np.arange(10, dtype=float)
        graph = build_correlation_graph(np.column_stack([x, x]))
        assert graph.pairs == ((0, 1, 1.0),)

    def test_independent_features_no_pair(self):
        rng = np.random.default_rng(21)
        X = rng.normal(size=(200, 2))
        graph = build_correlation_graph(X)
        assert abs(graph.rho[0, 1]) < 0.5
        assert graph.pairs == ()

    def test_anticorrelated_pair(self):
        rng = np.random.default_rng(3)
        f0 = rng.normal(size=50)
        f1 = rng.normal(size=50)
        X = np.column_stack([f0, f1, -f0])
        graph = build_correlation_graph(X)
        assert (0, 2, -1.0) in graph.pairs

    def test_pairs_match_brute_force_threshold_scan(self):
        rng = np.random.default_rng(9)
        base = rng.normal(size=60)
        X = np.column_stack(
            [
                base,
                base + 0.1 * rng.normal(size=60),
                rng.normal(size=60),
                -base + 0.2 * rng.normal(size=60),
                rng.normal(size=60),
            ]
        )
        graph = build_correlation_graph(X, threshold=0.5)
        expected = set()
        for i in range(5):
            for j in range(i + 1, 5):
                r = rank_then_pearson(X[:, i], X[:, j])
                if abs(r) > 0.5:
                    expected.add((i, j))
        assert {(i, j) for i, j, _ in graph.pairs} == expected
        strengths = [abs(r) for _, _, r in graph.pairs]
        assert strengths == sorted(strengths, reverse=True)

    def test_matrix_symmetric_unit_diagonal(self):
        rng = np.random.default_rng(13)
        X = rng.normal(size=(40, 4))
        graph = build_correlation_graph(X)
        assert np.allclose(graph.rho, graph.rho.T)
        assert np.allclose(np.diag(graph.rho), 1.0)

    def test_degenerate_feature_excluded(self):
        X = np.column_stack([np.arange(20.0), np.full(20, 7.0)])
        graph = build_correlation_graph(X)
        assert graph.pairs == ()
        assert graph.degenerate_features == (1,)

    def test_too_small_inputs(self):
        with pytest.raises(UsageError):
            build_correlation_graph(np.zeros((1, 3)))
        with pytest.raises(UsageError):
            build_correlation_graph(np.zeros((10, 1)))


def _graph_with_pairs(n_features, pairs):
    rho = np.eye(n_features)
    for i, j, w in pairs:
        rho[i, j] = rho[j, i] = w
    return CorrelationGraph(n_features=n_features, rho=rho, pairs=tuple(pairs))


class TestVqcCircuit:
    def test_structure_two_qubits_with_pair(self):
        graph = _graph_with_pairs(2, [(0, 1, 0.9)])
        config = CircuitConfig(CircuitFamily.VQC, 2, 1, graph)
        gates = build_vqc_circuit(config, [0.3, 0.7], [0.1, 0.2])
        kinds = [(g.kind, g.targets) for g in gates]
        assert kinds == [
            (GateKind.RY, (0,)),
            (GateKind.RY, (1,)),
            (GateKind.RY, (0,)),
            (GateKind.RY, (1,)),
            (GateKind.CNOT, (0, 1)),
        ]
        assert gates[0].angle == 0.3
        assert gates[2].angle == 0.1

    def test_empty_pair_set_falls_back_to_ladder(self):
        config = CircuitConfig(CircuitFamily.VQC, 2, 1)
        gates = build_vqc_circuit(config, [0.0, 0.0], [0.0, 0.0])
        assert (gates[-1].kind, gates[-1].targets) == (GateKind.CNOT, (0, 1))

    def test_gate_count_two_layers(self):
        graph = _graph_with_pairs(4, [(0, 2, 0.8), (1, 3, -0.6)])
        config = CircuitConfig(CircuitFamily.VQC, 4, 2, graph)
        gates = build_vqc_circuit(config, np.zeros(4), np.zeros(8))
        # encoding + per-layer rotations + layer-0 pairs + ladder
        assert len(gates) == 4 + 8 + 2 + 3

    def test_correlation_pairs_truncated_to_register(self):
        graph = _graph_with_pairs(6, [(0, 5, 0.9), (1, 2, 0.7)])
        config = CircuitConfig(CircuitFamily.VQC, 4, 1, graph)
        gates = build_vqc_circuit(config, np.zeros(4), np.zeros(4))
        cnots = [g.targets for g in gates if g.kind is GateKind.CNOT]
        assert cnots == [(1, 2)]

    def test_layer0_has_only_correlation_pairs(self):
        graph = _graph_with_pairs(4, [(0, 3, 0.9)])
        config = CircuitConfig(CircuitFamily.VQC, 4, 2, graph)
        gates = build_vqc_circuit(config, np.zeros(4), np.zeros(8))
        cnots = [g.targets for g in gates if g.kind is GateKind.CNOT]
        assert cnots[0] == (0, 3)
        assert cnots[1:] == [(0, 1), (1, 2), (2, 3)]

    def test_param_vector_family_checked(self):
        config = CircuitConfig(CircuitFamily.VQC, 2, 1)
        theta = ParamVector(np.zeros(2), CircuitFamily.QAOA)
        with pytest.raises(UsageError):
            build_vqc_circuit(config, [0.0, 0.0], theta)

    def test_dimension_mismatches(self):
        config = CircuitConfig(CircuitFamily.VQC, 2, 1)
        with pytest.raises(UsageError):
            build_vqc_circuit(config, [0.0], np.zeros(2))
        with pytest.raises(UsageError):
            build_vqc_circuit(config, [0.0, 0.0], np.zeros(3))


class TestQaoaCircuit:
    def test_zero_angles_keep_plus_state(self):
        graph = _graph_with_pairs(3, [(0, 1, 0.8)])
        config = CircuitConfig(CircuitFamily.QAOA, 3, 2, graph)
        h = build_cost_hamiltonian(graph, [0.4, 0.5, 0.6])
        gates = build_qaoa_circuit(config, h, np.zeros(6), np.zeros(6))
        final = apply_circuit(init_plus(3), gates)
        assert np.allclose(final.amplitudes, init_plus(3).amplitudes, atol=1e-15)

    def test_single_qubit_matches_dense_oracle(self):
        h = CostHamiltonian(zz_terms=(), z_terms=((0, 1.0),))
        config = CircuitConfig(CircuitFamily.QAOA, 1, 1)
        gamma, beta = [0.45], [0.27]
        gates = build_qaoa_circuit(config, h, gamma, beta)
        ours = apply_circuit(init_plus(1), gates)
        # dense chain: exp(-i beta X) exp(-i gamma Z) |+>
        z = np.diag([np.exp(-1j * 0.45), np.exp(1j * 0.45)])
        x = np.array([[np.cos(0.27), -1j * np.sin(0.27)], [-1j * np.sin(0.27), np.cos(0.27)]])
        expected = x @ z @ init_plus(1).amplitudes
        assert np.allclose(ours.amplitudes, expected, atol=1e-12)

    def test_two_qubit_zz_matches_dense_oracle(self):
        graph = _graph_with_pairs(2, [(0, 1, 1.0)])
        config = CircuitConfig(CircuitFamily.QAOA, 2, 1, graph)
        h = CostHamiltonian(zz_terms=((0, 1, 1.0),), z_terms=((0, 0.2), (1, -0.4)))
        gamma = np.array([0.3, 0.3])
        beta = np.array([0.3, 0.3])
        gates = build_qaoa_circuit(config, h, gamma, beta)
        ours = apply_circuit(init_plus(2), gates)
        expected = dense_simulate(gates, 2, init_plus(2).amplitudes)
        assert np.allclose(ours.amplitudes, expected, atol=1e-10)

    def test_zz_angle_uses_lower_qubit_gamma(self):
        graph = _graph_with_pairs(3, [(1, 2, 0.9)])
        config = CircuitConfig(CircuitFamily.QAOA, 3, 1, graph)
        h = CostHamiltonian(zz_terms=((1, 2, 0.9),), z_terms=())
        gamma = np.array([0.1, 0.2, 0.3])
        gates = build_qaoa_circuit(config, h, gamma, np.zeros(3))
        zz = [g for g in gates if g.kind is GateKind.ZZPHASE][0]
        assert abs(zz.angle - 0.2 * 0.9) < 1e-15

    def test_empty_hamiltonian_is_mixer_only(self):
        config = CircuitConfig(CircuitFamily.QAOA, 2, 1)
        gates = build_qaoa_circuit(config, CostHamiltonian((), ()), np.zeros(2), np.zeros(2))
        assert all(g.kind is GateKind.XMIXER for g in gates)
        assert len(gates) == 2

    def test_length_validation(self):
        config = CircuitConfig(CircuitFamily.QAOA, 2, 2)
        h = CostHamiltonian((), ())
        with pytest.raises(UsageError):
            build_qaoa_circuit(config, h, np.zeros(2), np.zeros(4))


class TestFeatureMap:
    def test_single_qubit_zero_input_gives_plus(self):
        gates = build_feature_map([0.0])
        state = apply_circuit(init_zero(1), gates)
        assert np.allclose(state.amplitudes, init_plus(1).amplitudes)

    def test_single_qubit_kernel_is_cos_squared(self):
        for x, xp in [(0.0, np.pi / 2), (0.3, 1.1), (1.0, 2.5)]:
            a = apply_circuit(init_zero(1), build_feature_map([x]))
            b = apply_circuit(init_zero(1), build_feature_map([xp]))
            assert abs(qsim.overlap_sq(a, b) - np.cos(x - xp) ** 2) < 1e-12

    def test_two_qubit_zero_input_uniform(self):
        state = apply_circuit(init_zero(2), build_feature_map([0.0, 0.0]))
        assert np.allclose(state.amplitudes, [0.5, 0.5, 0.5, 0.5])

    def test_structure(self):
        gates = build_feature_map([0.1, 0.2, 0.3])
        kinds = [g.kind for g in gates]
        assert kinds == [GateKind.H] * 3 + [GateKind.RZ] * 3 + [GateKind.ZZPHASE] * 3
        zz = [g for g in gates if g.kind is GateKind.ZZPHASE]
        assert [g.targets for g in zz] == [(0, 1), (0, 2), (1, 2)]
        assert abs(zz[0].angle - 0.1 * 0.2) < 1e-15


class TestResourceMetrics:
    def test_depth_empty(self):
        assert circuit_depth([]) == 0

    def test_depth_vqc_ladder_only(self):
        config = CircuitConfig(CircuitFamily.VQC, 4, 2)
        gates = build_vqc_circuit(config, np.zeros(4), np.zeros(8))
        assert circuit_depth(gates) == 4 + 8 + 3 + 3 == 18

    def test_depth_qaoa(self):
        graph = _graph_with_pairs(4, [(0, 1, 0.7), (1, 2, 0.6), (2, 3, 0.9)])
        config = CircuitConfig(CircuitFamily.QAOA, 4, 2, graph)
        h = build_cost_hamiltonian(graph, np.zeros(4))
        gates = build_qaoa_circuit(config, h, np.zeros(8), np.zeros(8))
        assert circuit_depth(gates) == 2 * (3 + 4 + 4) == 22

    def test_param_counts_match_configurations(self):
        assert param_count(CircuitConfig(CircuitFamily.VQC, 4, 2)) == 8
        assert param_count(CircuitConfig(CircuitFamily.VQC, 6, 3)) == 18
        assert param_count(CircuitConfig(CircuitFamily.QAOA, 4, 2)) == 16
        assert param_count(CircuitConfig(CircuitFamily.QAOA, 6, 3)) == 36
        assert param_count(CircuitConfig(CircuitFamily.FEATURE_MAP, 4, 1)) == 0

    def test_param_count_matches_builder_accepted_length(self):
        for n, layers in [(4, 2), (4, 3), (6, 2), (6, 3)]:
            vqc = CircuitConfig(CircuitFamily.VQC, n, layers)
            build_vqc_circuit(vqc, np.zeros(n), np.zeros(param_count(vqc)))
            qaoa = CircuitConfig(CircuitFamily.QAOA, n, layers)
            h = CostHamiltonian((), tuple((i, 0.1) for i in range(n)))
            k = param_count(qaoa)
            build_qaoa_circuit(qaoa, h, np.zeros(k // 2), np.zeros(k // 2))


class TestConfigValidation:
    def test_qubit_bounds(self):
        with pytest.raises(ConfigurationError):
            CircuitConfig(CircuitFamily.VQC, 0, 1)
        with pytest.raises(ConfigurationError):
            CircuitConfig(CircuitFamily.VQC, 13, 1)

    def test_layer_bounds(self):
        with pytest.raises(ConfigurationError):
            CircuitConfig(CircuitFamily.QAOA, 2, 0)
        with pytest.raises(ConfigurationError):
            CircuitConfig(CircuitFamily.VQC, 2, -1)

    def test_correlation_needs_two_qubits(self):
        graph = _graph_with_pairs(2, [(0, 1, 0.9)])
        with pytest.raises(ConfigurationError):
            CircuitConfig(CircuitFamily.VQC, 1, 1, graph)


class TestExpressibility:
    def test_zero_parameter_circuit_scores_near_zero(self):
        config = CircuitConfig(CircuitFamily.VQC, 3, 0)
        result = expressibility(config, 500, seed=1)
        assert result.score < 0.05

    def test_deterministic_under_seed(self):
        config = CircuitConfig(CircuitFamily.VQC, 3, 2)
        a = expressibility(config, 300, seed=5)
        b = expressibility(config, 300, seed=5)
        assert a == b

    def test_monotone_in_layers(self):
        scores = []
        for layers in (1, 2, 3):
            config = CircuitConfig(CircuitFamily.VQC, 4, layers)
            scores.append(expressibility(config, 5000, seed=0).score)
        assert scores[0] < scores[1] < scores[2]

    def test_low_precision_flag(self):
        config = CircuitConfig(CircuitFamily.VQC, 2, 1)
        assert expressibility(config, 50, seed=0).low_precision
        assert not expressibility(config, 200, seed=0).low_precision

    def test_requires_vqc_family(self):
        config = CircuitConfig(CircuitFamily.QAOA, 2, 1)
        with pytest.raises(UsageError):
            expressibility(config, 200, seed=0)


class TestEntanglementTargeting:
    def test_every_surviving_pair_used_in_both_families(self):
        rng = np.random.default_rng(33)
        base = rng.normal(size=80)
        X = np.column_stack(
            [base, base + 0.05 * rng.normal(size=80), rng.normal(size=80), -base]
        )
        graph = build_correlation_graph(X)
        assert graph.pairs  # construction guarantees correlated columns
        config = CircuitConfig(CircuitFamily.VQC, 4, 2, graph)
        gates = build_vqc_circuit(config, np.zeros(4), np.zeros(8))
        layer0_cnots = {g.targets for g in gates[: 4 + 4 + len(graph.pairs)] if g.kind is GateKind.CNOT}
        assert layer0_cnots == {(i, j) for i, j, _ in graph.pairs}
        h = build_cost_hamiltonian(graph, X.mean(axis=0))
        assert {(i, j) for i, j, _ in h.zz_terms} == {(i, j) for i, j, _ in graph.pairs}
        assert [i for i, _ in h.z_terms] == [0, 1, 2, 3]

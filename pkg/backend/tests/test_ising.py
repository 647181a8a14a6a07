"""Tests du modèle d'Ising, de l'énumération exacte et des moments"""

import itertools
import math

import numpy as np
import pytest

from src.ising import (
    ExactDistribution,
    IsingModel,
    energy,
    exact_distribution,
    indices_from_states,
    load_model,
    moments,
    save_model,
    states_from_indices,
    total_variation,
)
from src.topology import build_bipartite, build_complete
from src.utils.aan_errors import InvalidInputError, InvalidParameterError, TooLargeError


def pair_model(coupling=1.0, biases=(0.0, 0.0)):
    return IsingModel(build_complete(2), np.array(biases), np.array([coupling]))


def test_energy_of_zero_model_is_zero(rng):
    model = IsingModel.zeros(build_complete(5))
    assert energy(model, rng.choice([-1, 1], size=5)) == 0.0


def test_energy_examples():
    model = pair_model()
    assert energy(model, [1, 1]) == -1.0
    assert energy(model, [1, -1]) == 1.0


def test_energy_rejects_wrong_length_and_values():
    model = pair_model()
    with pytest.raises(InvalidInputError):
        energy(model, [1, 1, 1])
    with pytest.raises(InvalidInputError):
        energy(model, [1, 0])


def test_global_flip_without_bias_keeps_energy(rng):
    graph = build_complete(6)
    model = IsingModel(graph, np.zeros(6), rng.uniform(-1, 1, graph.n_edges))
    state = rng.choice([-1, 1], size=6)
    assert energy(model, state) == pytest.approx(energy(model, -state))


def test_energy_invariant_under_automorphism(rng):
    graph = build_complete(4)
    model = IsingModel.random(graph, 1.0, rng)
    permutation = [2, 0, 3, 1]
    index = {edge: k for k, edge in enumerate(graph.edge_list)}
    couplings = np.zeros(graph.n_edges)
    for (i, j), value in zip(graph.edge_list, model.couplings):
        a, b = permutation[i], permutation[j]
        couplings[index[(min(a, b), max(a, b))]] = value
    biases = np.zeros(4)
    biases[permutation] = model.biases
    relabeled = IsingModel(graph, biases, couplings)

    state = rng.choice([-1, 1], size=4)
    moved = np.zeros(4)
    moved[permutation] = state
    assert energy(model, state) == pytest.approx(energy(relabeled, moved))


def test_model_rejects_non_finite_parameters():
    with pytest.raises(InvalidParameterError):
        pair_model(coupling=np.inf)


def test_exact_single_node():
    graph = build_complete(1)
    uniform = exact_distribution(IsingModel(graph, [0.0], []))
    assert uniform.probability([1]) == pytest.approx(0.5)

    biased = exact_distribution(IsingModel(graph, [0.5], []), beta=1.0)
    expected = math.exp(0.5) / (math.exp(0.5) + math.exp(-0.5))
    assert biased.probability([1]) == pytest.approx(expected, abs=1e-12)
    assert expected == pytest.approx(0.73106, abs=1e-5)


def test_exact_normalization(rng):
    model = IsingModel.random(build_complete(10), 1.0, rng)
    distribution = exact_distribution(model, beta=0.7)
    assert abs(distribution.probabilities.sum() - 1.0) < 1e-12
    assert distribution.log_partition == pytest.approx(math.log(distribution.partition_value))


def test_exact_errors():
    model = IsingModel.zeros(build_complete(21))
    with pytest.raises(TooLargeError):
        exact_distribution(model)
    with pytest.raises(InvalidParameterError):
        exact_distribution(pair_model(), beta=0.0)
    with pytest.raises(InvalidParameterError):
        exact_distribution(pair_model(), beta=-1.0)


def test_state_indexing_round_trip():
    states = states_from_indices(np.arange(16), 4)
    assert states[0].tolist() == [-1, -1, -1, -1]
    assert states[1].tolist() == [1, -1, -1, -1]
    assert indices_from_states(states).tolist() == list(range(16))


def test_moments_of_constant_samples():
    result = moments(np.ones((5, 2)))
    assert result.means.tolist() == [1.0, 1.0]
    assert result.correlations[0, 1] == 1.0


def test_moments_of_zero_model_vanish():
    distribution = exact_distribution(IsingModel.zeros(build_complete(4)))
    result = moments(distribution)
    assert np.max(np.abs(result.means)) < 1e-12
    assert np.max(np.abs(result.pair_correlations())) < 1e-12


def test_moments_single_node():
    result = moments(exact_distribution(IsingModel(build_complete(1), [0.5], [])))
    assert result.means[0] == pytest.approx(math.tanh(0.5), abs=1e-12)
    assert result.means[0] == pytest.approx(0.46212, abs=1e-5)


def test_moments_match_brute_force(rng):
    graph = build_bipartite(2, 3)
    model = IsingModel.random(graph, 1.0, rng)
    beta = 1.3
    weights, firsts, seconds = [], [], []
    for state in itertools.product([-1, 1], repeat=5):
        z = np.array(state, dtype=float)
        weights.append(math.exp(-beta * energy(model, z)))
        firsts.append(z)
        seconds.append(np.outer(z, z))
    weights = np.array(weights) / sum(weights)
    result = moments(exact_distribution(model, beta))
    assert np.allclose(result.means, weights @ np.array(firsts), atol=1e-12)
    assert np.allclose(result.correlations, np.tensordot(weights, np.array(seconds), axes=1), atol=1e-12)


def test_moments_reject_empty():
    with pytest.raises(InvalidInputError):
        moments(np.zeros((0, 3)))


def test_empirical_distribution_and_total_variation():
    states = np.array([[1, 1], [1, 1], [-1, -1], [1, -1]])
    empirical = ExactDistribution.empirical(states)
    assert empirical.probability([1, 1]) == pytest.approx(0.5)
    exact = exact_distribution(IsingModel.zeros(build_complete(2)))
    assert total_variation(empirical, exact) == pytest.approx(0.25)
    assert total_variation(exact, exact) == 0.0


def test_model_text_round_trip(tmp_path, rng):
    model = IsingModel.random(build_bipartite(2, 2), 1.0, rng)
    loaded = load_model(save_model(model, tmp_path / "model.txt"))
    assert loaded.graph == model.graph
    assert np.array_equal(loaded.biases, model.biases)
    assert np.array_equal(loaded.couplings, model.couplings)


def test_hardware_convention_negates_parameters(tmp_path):
    model = pair_model(coupling=0.75, biases=(0.25, -0.5))
    path = save_model(model, tmp_path / "hw.txt", hardware_convention=True)
    lines = path.read_text(encoding="utf-8").split("\n")
    assert "b 0 -0.25" in lines
    assert "J 0 1 -0.75" in lines
    loaded = load_model(path, hardware_convention=True)
    assert np.array_equal(loaded.couplings, model.couplings)

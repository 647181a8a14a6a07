"""Tests des échantillonneurs exact, de Gibbs et de substitution du recuit"""

import logging

import numpy as np
import pytest

from src.config.settings import GibbsConfig, HardwareConfig
from src.ising import ExactDistribution, IsingModel, exact_distribution, moments, total_variation
from src.sampling import (
    AnnealerSurrogateSampler,
    ExactSampler,
    GibbsKernel,
    GibbsSampler,
    SampleOrigin,
    SampleSet,
    build_layout,
    build_sampler,
    embed_model,
    run_gibbs,
    sample_annealer_surrogate,
    sample_exact,
    sample_gibbs,
)
from src.topology import Embedding, build_bipartite, build_chimera, build_complete
from src.topology.graphs import LogicalGraph
from src.utils.aan_errors import (
    ConfigError,
    EmbeddingError,
    InvalidInputError,
    InvalidParameterError,
    InvalidSizeError,
)


def single_node(bias):
    return IsingModel(build_complete(1), [bias], [])


def native_bipartite():
    """K_{2,2} placé directement dans une cellule Chimera (chaînes de longueur 1)"""
    return LogicalGraph(4, build_bipartite(2, 2).edges, native_qubits=(0, 1, 4, 5))


def test_sample_set_validation():
    with pytest.raises(InvalidInputError):
        SampleSet(np.zeros((2, 2)), SampleOrigin.GIBBS)
    samples = SampleSet(np.array([[1, -1]]), "exact")
    assert samples.origin is SampleOrigin.EXACT
    assert samples.states.dtype == np.int8
    assert len(samples) == 1 and samples.n_nodes == 2


def test_sample_set_export(tmp_path):
    path = SampleSet(np.array([[1, -1], [-1, -1]]), SampleOrigin.GIBBS).export(tmp_path / "s.txt")
    assert path.read_text(encoding="utf-8").split("\n")[:2] == ["1 -1", "-1 -1"]


def test_sample_exact_single_node(rng):
    samples = sample_exact(single_node(0.5), 1.0, 100_000, rng)
    assert samples.origin is SampleOrigin.EXACT
    assert abs(np.mean(samples.states[:, 0] == 1) - 0.731) < 0.01


def test_sample_exact_zero_model(rng):
    samples = sample_exact(IsingModel.zeros(build_complete(5)), 1.0, 100_000, rng)
    assert np.max(np.abs(samples.states.mean(axis=0))) < 0.02


def test_sample_exact_rejects_empty_request(rng):
    with pytest.raises(InvalidSizeError):
        sample_exact(single_node(0.0), 1.0, 0, rng)


def test_sample_exact_moment_error_shrinks(rng):
    model = IsingModel.random(build_complete(4), 1.0, rng)
    exact = moments(exact_distribution(model))
    errors = []
    for m in (10_000, 1_000_000):
        estimate = moments(sample_exact(model, 1.0, m, rng))
        errors.append(np.max(np.abs(estimate.correlations - exact.correlations)))
    assert errors[1] < errors[0]
    assert errors[1] < 0.01


def test_gibbs_zero_model_is_unbiased(rng):
    config = GibbsConfig(burn_in=10, n_chains=50)
    samples = sample_gibbs(IsingModel.zeros(build_complete(6)), config, 50_000, rng)
    assert samples.origin is SampleOrigin.GIBBS
    assert np.max(np.abs(samples.states.mean(axis=0))) < 0.02


def test_gibbs_matches_exact_distribution(rng):
    model = IsingModel.random(build_complete(5), 1.0, rng)
    config = GibbsConfig(burn_in=200, n_chains=200)
    samples = sample_gibbs(model, config, 200_000, rng)
    distance = total_variation(ExactDistribution.empirical(samples.states), exact_distribution(model))
    assert distance < 0.03


def test_gibbs_block_scan_matches_exact(rng):
    model = IsingModel.random(build_bipartite(3, 3), 1.0, rng)
    config = GibbsConfig(burn_in=200, n_chains=200, scan="block")
    assert GibbsKernel(model, 1.0, "block").scan == "block"
    samples = sample_gibbs(model, config, 400_000, rng)
    distance = total_variation(ExactDistribution.empirical(samples.states), exact_distribution(model))
    assert distance < 0.03


def test_gibbs_block_scan_requires_bipartite():
    with pytest.raises(InvalidParameterError):
        GibbsKernel(IsingModel.zeros(build_complete(3)), 1.0, "block")
    assert GibbsKernel(IsingModel.zeros(build_complete(3)), 1.0, "auto").scan == "single_site"


def test_gibbs_warns_on_frozen_temperature(caplog):
    with caplog.at_level(logging.WARNING, logger="aan_gibbs"):
        GibbsKernel(IsingModel.zeros(build_complete(2)), 1e6)
    assert any("non ergodiques" in record.message for record in caplog.records)


def test_gibbs_records_round_robin(rng):
    config = GibbsConfig(burn_in=0, n_chains=3, thinning=2)
    states, final = run_gibbs(IsingModel.zeros(build_complete(4)), config, 7, rng)
    assert states.shape == (7, 4)
    assert final.shape == (3, 4)


def test_gibbs_is_reproducible():
    model = IsingModel.random(build_complete(6), 1.0, np.random.default_rng(1))
    config = GibbsConfig(burn_in=20, n_chains=10)
    first = sample_gibbs(model, config, 500, np.random.default_rng(7))
    second = sample_gibbs(model, config, 500, np.random.default_rng(7))
    assert np.array_equal(first.states, second.states)


def test_persistent_gibbs_keeps_chains(rng):
    sampler = GibbsSampler(GibbsConfig(burn_in=5, n_chains=4, persistent=True))
    model = IsingModel.zeros(build_complete(3))
    sampler.sample(model, 8, rng)
    assert sampler.chains_for(model.graph).shape == (4, 3)
    sampler.reset()
    assert sampler.chains_for(model.graph) is None


def test_persistent_chains_are_keyed_by_graph(rng):
    sampler = GibbsSampler(GibbsConfig(burn_in=5, n_chains=4, persistent=True))
    complete = IsingModel.zeros(build_complete(4))
    bipartite = IsingModel.zeros(build_bipartite(2, 2))
    sampler.sample(complete, 8, rng)
    assert sampler.chains_for(bipartite.graph) is None

    # Un modèle mis à jour sur le même graphe reprend les mêmes chaînes
    updated = IsingModel.random(complete.graph, 0.5, rng)
    before = sampler.chains_for(complete.graph)
    sampler.sample(updated, 8, rng)
    assert sampler.chains_for(complete.graph).shape == before.shape


def test_short_draw_keeps_full_chain_set(rng):
    sampler = GibbsSampler(GibbsConfig(burn_in=5, n_chains=4, persistent=True))
    model = IsingModel.zeros(build_complete(3))
    sampler.sample(model, 8, rng)
    saved = sampler.chains_for(model.graph)
    sampler.sample(model, 2, rng)
    assert np.array_equal(sampler.chains_for(model.graph), saved)


def test_detached_sampler_leaves_training_chains_alone(rng):
    sampler = GibbsSampler(GibbsConfig(burn_in=5, n_chains=4, persistent=True))
    model = IsingModel.zeros(build_complete(3))
    sampler.sample(model, 8, rng)
    saved = sampler.chains_for(model.graph)

    preview = sampler.detached()
    assert preview.config.persistent is False
    preview.sample(model, 8, rng)
    assert preview.chains_for(model.graph) is None
    assert np.array_equal(sampler.chains_for(model.graph), saved)


def test_restore_chains_resumes_without_burn_in(rng):
    config = GibbsConfig(burn_in=50, n_chains=4, persistent=True)
    model = IsingModel.random(build_complete(5), 1.0, np.random.default_rng(3))
    first = GibbsSampler(config)
    first.sample(model, 8, np.random.default_rng(1))

    second = GibbsSampler(config)
    second.restore_chains(model.graph, first.chains_for(model.graph))
    a = first.sample(model, 8, np.random.default_rng(2))
    b = second.sample(model, 8, np.random.default_rng(2))
    assert np.array_equal(a.states, b.states)
    with pytest.raises(InvalidInputError):
        second.restore_chains(model.graph, np.ones((4, 3)))


def test_embed_model_splits_bias_and_locks_chains():
    hardware = build_chimera(1, 1, 4)
    logical = build_complete(2)
    layout = build_layout(logical, Embedding({0: (0, 4), 1: (1, 5)}, -1.0), hardware)
    embedded = embed_model(IsingModel(logical, [0.8, -0.2], [0.5]), layout)
    assert embedded.scale == 1.0
    biases = dict(zip(layout.qubits, embedded.model.biases))
    assert biases[0] == pytest.approx(0.4) and biases[4] == pytest.approx(0.4)
    assert biases[1] == pytest.approx(-0.1)
    couplings = dict(zip(embedded.model.graph.edge_list, embedded.model.couplings))
    for a, b in layout.chain_couplers:
        assert couplings[(min(a, b), max(a, b))] == 1.0
    assert embedded.model.graph.n_edges == 3


def test_embed_model_scales_into_hardware_range():
    hardware = build_chimera(1, 1, 4)
    logical = build_complete(2)
    layout = build_layout(logical, Embedding({0: (0,), 1: (4,)}), hardware)
    embedded = embed_model(IsingModel(logical, [0.0, 0.0], [2.0]), layout)
    assert embedded.scale == pytest.approx(0.5)
    assert embedded.model.couplings.tolist() == [1.0]
    assert embed_model(IsingModel(logical, [0.0, 0.0], [2.0]), layout, auto_scale=False).scale == 1.0


def test_surrogate_rejects_invalid_embedding(rng):
    hardware = build_chimera(1, 1, 4)
    model = IsingModel.zeros(build_complete(2))
    with pytest.raises(EmbeddingError):
        sample_annealer_surrogate(model, Embedding({0: (0,), 1: (1,)}), GibbsConfig(), 10, rng, hardware)


def test_surrogate_ferromagnetic_chains(rng):
    hardware = build_chimera(1, 1, 4)
    model = IsingModel(build_complete(2), [0.0, 0.0], [1.0])
    samples = sample_annealer_surrogate(model, Embedding({0: (0, 4), 1: (1, 5)}, -1.0),
                                        GibbsConfig(burn_in=50, n_chains=100), 20_000, rng, hardware)
    assert samples.origin is SampleOrigin.ANNEALER_SURROGATE
    assert 0.0 <= samples.chain_break_fraction <= 1.0
    assert moments(samples).correlations[0, 1] > 0


def test_surrogate_zero_model_is_unbiased(rng):
    hardware = build_chimera(1, 1, 4)
    model = IsingModel.zeros(build_complete(2))
    samples = sample_annealer_surrogate(model, Embedding({0: (0, 4), 1: (1, 5)}, 0.0),
                                        GibbsConfig(burn_in=10, n_chains=100), 50_000, rng, hardware)
    assert samples.chain_break_fraction > 0.3
    assert np.max(np.abs(samples.states.mean(axis=0))) < 0.02


def test_surrogate_with_unit_chains_matches_exact(rng):
    hardware = build_chimera(1, 1, 4)
    logical = native_bipartite()
    model = IsingModel.random(logical, 0.5, rng)
    embedding = Embedding({i: (q,) for i, q in enumerate(logical.native_qubits)})
    samples = sample_annealer_surrogate(model, embedding, GibbsConfig(burn_in=100, n_chains=200),
                                        200_000, rng, hardware)
    assert samples.chain_break_fraction == 0.0
    distance = total_variation(ExactDistribution.empirical(samples.states), exact_distribution(model))
    assert distance < 0.03


def test_surrogate_sampler_warns_once(caplog, rng):
    hardware = build_chimera(1, 1, 4)
    sampler = AnnealerSurrogateSampler(hardware, GibbsConfig(burn_in=5, n_chains=20), chain_strength=0.0,
                                       embedding=Embedding({0: (0, 4), 1: (1, 5)}, 0.0))
    model = IsingModel.zeros(build_complete(2))
    with caplog.at_level(logging.WARNING, logger="aan_sampler"):
        sampler.sample(model, 200, rng)
        sampler.sample(model, 200, rng)
    warnings = [r for r in caplog.records if r.name == "aan_sampler" and r.levelno == logging.WARNING]
    assert len(warnings) == 1
    assert sampler.last_chain_break_fraction > 0.1


def test_surrogate_sampler_finds_embedding(rng):
    sampler = build_sampler("surrogate", GibbsConfig(burn_in=10, n_chains=10),
                            HardwareConfig(rows=4, cols=4))
    assert isinstance(sampler, AnnealerSurrogateSampler)
    samples = sampler.sample(IsingModel.zeros(build_complete(6)), 50, rng)
    assert samples.states.shape == (50, 6)
    assert sampler.last_chain_break_fraction is not None


def test_build_sampler_kinds():
    assert isinstance(build_sampler("exact"), ExactSampler)
    assert isinstance(build_sampler("gibbs"), GibbsSampler)
    with pytest.raises(ConfigError):
        build_sampler("annealer")


def test_exact_sampler_moments_are_analytic(rng):
    model = single_node(0.5)
    estimate = ExactSampler(1.0).estimate_moments(model, 10, rng)
    assert estimate.means[0] == pytest.approx(np.tanh(0.5))


@pytest.mark.slow
def test_gibbs_fidelity_on_random_8_node_models():
    config = GibbsConfig(burn_in=1000, n_chains=1000)
    for index in range(10):
        rng = np.random.default_rng(1000 + index)
        model = IsingModel.random(build_complete(8), 1.0, rng)
        samples = sample_gibbs(model, config, 1_000_000, rng)
        distance = total_variation(ExactDistribution.empirical(samples.states), exact_distribution(model))
        assert distance < 0.02


@pytest.mark.slow
def test_block_and_single_site_agree():
    rng = np.random.default_rng(5)
    model = IsingModel.random(build_bipartite(4, 4), 1.0, rng)
    block = sample_gibbs(model, GibbsConfig(burn_in=500, n_chains=500, scan="block"), 1_000_000, rng)
    single = sample_gibbs(model, GibbsConfig(burn_in=500, n_chains=500, scan="single_site"), 1_000_000, rng)
    distance = total_variation(ExactDistribution.empirical(block.states), ExactDistribution.empirical(single.states))
    assert distance < 0.02

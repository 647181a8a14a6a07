"""
Critères d'acceptation sur MNIST complet.

Longs (plusieurs heures pour certains) et conditionnés à la présence de MNIST
sous AAN_DATA_DIR : pytest -m "mnist and slow".
"""

import math

import pytest

from src.config.settings import (
    DataConfig,
    EvaluationConfig,
    GanConfig,
    RunConfig,
    TopologyConfig,
)
from src.experiments import inception_for, run_evaluation, run_gan, run_topology_comparison
from src.experiments.topology_comparison import PARITY_TOLERANCE

pytestmark = [pytest.mark.mnist, pytest.mark.slow]


def acceptance_config(mnist_dir, tmp_path, **sections) -> RunConfig:
    data = DataConfig(data_dir=str(mnist_dir), cache_dir=str(tmp_path / "cache"))
    return RunConfig(out_dir=str(tmp_path / "run"), quiet=True, data=data, **sections)


def test_topology_ordering_on_reduced_mnist(mnist_dir, tmp_path):
    topology = TopologyConfig(samplers=["gibbs"], classical_rate=0.001, n_seeds=5)
    result = run_topology_comparison(acceptance_config(mnist_dir, tmp_path, topology=topology), False)

    final = result.final.set_index("topology")["l1_mean"]
    assert final["complete"] < final["bipartite"] < final["chimera"]
    assert result.ordering_holds("gibbs")


def test_surrogate_matches_gibbs_on_chimera(mnist_dir, tmp_path):
    topology = TopologyConfig(topologies=["chimera"], samplers=["gibbs", "annealer_surrogate"],
                              classical_rate=0.001, surrogate_rate=0.03)
    result = run_topology_comparison(acceptance_config(mnist_dir, tmp_path, topology=topology), False)

    assert not math.isnan(result.surrogate_parity)
    assert abs(result.surrogate_parity - 1.0) <= PARITY_TOLERANCE


def test_inception_classifier_reaches_accuracy_bar(mnist_dir, tmp_path):
    model = inception_for(acceptance_config(mnist_dir, tmp_path), False)
    assert model.accuracy >= 0.90


def test_chimera_latent_gan_scores(mnist_dir, tmp_path):
    gan = GanConfig(epochs=50, latent_topology="chimera", sampler_kind="gibbs", grid_every=0)
    config = acceptance_config(mnist_dir, tmp_path, gan=gan, evaluation=EvaluationConfig())
    run_gan(config, False)

    metrics = run_evaluation(config, False)
    last = metrics.iloc[-1]
    assert last["epoch"] == 50
    assert last["inception_score"] >= 4.0
    assert last["fid"] <= 60.0

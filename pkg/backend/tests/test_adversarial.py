"""Tests de la boucle adversariale associative et de ses points de sauvegarde"""

import math
from dataclasses import replace

import numpy as np
import pytest
from pydantic import ValidationError

import src.adversarial.aan_trainer as aan_trainer
from src.adversarial import (
    batch_plan,
    discriminator_loss,
    generate,
    generator_loss,
    initial_state,
    latest_checkpoint,
    list_checkpoints,
    load_latent_chains,
    load_state,
    save_state,
    smoothed_labels,
    train_epoch,
)
from src.config.settings import AdamConfig, GanConfig, GibbsConfig
from src.dataset import ImageSet
from src.ising import IsingModel
from src.sampling import GibbsSampler
from src.topology import build_complete
from src.utils.aan_errors import CheckpointError, ConfigError, InvalidInputError


def tiny_config(**overrides):
    values = dict(epochs=2, batch_size=4, batches_per_epoch=2, latent_nodes=4,
                  discriminator_hidden=[8], generator_hidden=[8], bm_rate=0.05, eval_images=100)
    values.update(overrides)
    return GanConfig(**values)


def tiny_data(rng, count=32):
    return ImageSet(rng.uniform(-1.0, 1.0, size=(count, 16)), 4, 4, variant="signed")


def tiny_sampler():
    return GibbsSampler(GibbsConfig(burn_in=5, n_chains=8))


def test_discriminator_loss_examples():
    assert discriminator_loss([1.0], [0.0]) == pytest.approx(0.0, abs=1e-9)
    assert discriminator_loss([0.5], [0.5]) == pytest.approx(2 * math.log(2))
    assert math.isfinite(discriminator_loss([0.0], [1.0]))


def test_generator_loss_examples():
    assert generator_loss([0.5, 0.5]) == pytest.approx(math.log(2))
    assert math.isfinite(generator_loss([0.0]))


def test_smoothed_labels_ranges(rng):
    real = smoothed_labels(1000, True, 0.1, rng)
    fake = smoothed_labels(1000, False, 0.1, rng)
    assert real.min() >= 0.8 and real.max() <= 1.0
    assert fake.min() >= 0.0 and fake.max() <= 0.1
    assert smoothed_labels(3, True, 0.0, rng).tolist() == [1.0, 1.0, 1.0]


def test_batch_plan():
    assert batch_plan(GanConfig(batch_size=10), 100) == (10, 300)
    assert batch_plan(tiny_config(sample_pool_size=50), 1000) == (2, 50)
    with pytest.raises(ConfigError):
        batch_plan(GanConfig(batch_size=10, sample_pool_size=10), 100)


def test_config_rejects_small_pool():
    with pytest.raises(ValidationError):
        GanConfig(batch_size=64, batches_per_epoch=2, sample_pool_size=100)


def test_initial_state_checks_widths(rng):
    with pytest.raises(ConfigError):
        initial_state(tiny_config(), build_complete(5), 16, rng)
    state = initial_state(tiny_config(), build_complete(4), 16, rng)
    assert state.generator.input_dim == 4
    assert state.discriminator.layers[state.feature_layer - 1].output_dim == 4
    with pytest.raises(InvalidInputError):
        replace(state, latent_model=IsingModel.zeros(build_complete(3)))


def test_train_epoch_updates_everything(rng):
    config = tiny_config()
    state = initial_state(config, build_complete(4), 16, rng)
    trained = train_epoch(state, tiny_data(rng), config, tiny_sampler(), rng)
    assert trained.epoch == 1 and len(trained.losses) == 1
    record = trained.losses[0]
    assert math.isfinite(record.discriminator_loss) and math.isfinite(record.generator_loss)
    assert record.latent_l1 >= 0.0
    assert not np.array_equal(trained.latent_model.couplings, state.latent_model.couplings)
    assert not np.array_equal(trained.generator.parameters()[0], state.generator.parameters()[0])
    assert state.epoch == 0


def test_train_epoch_with_frozen_latent(rng):
    config = tiny_config(train_latent=False)
    state = initial_state(config, build_complete(4), 16, rng)
    trained = train_epoch(state, tiny_data(rng), config, tiny_sampler(), rng)
    assert np.array_equal(trained.latent_model.couplings, state.latent_model.couplings)


def test_uniform_prior_losses_stay_finite(rng):
    config = tiny_config(latent_prior="uniform")
    state = initial_state(config, build_complete(4), 16, rng)
    data = tiny_data(rng)
    for _ in range(5):
        state = train_epoch(state, data, config, tiny_sampler(), rng)
    frame = state.losses_frame()
    assert frame["epoch"].tolist() == [1, 2, 3, 4, 5]
    assert np.all(np.isfinite(frame[["discriminator_loss", "generator_loss"]].to_numpy()))


def test_train_epoch_rejects_wrong_image_size(rng):
    config = tiny_config()
    state = initial_state(config, build_complete(4), 16, rng)
    data = ImageSet(np.zeros((8, 9)), 3, 3, variant="signed")
    with pytest.raises(InvalidInputError):
        train_epoch(state, data, config, tiny_sampler(), rng)


def test_generate_outputs_in_range(rng):
    config = tiny_config()
    state = initial_state(config, build_complete(4), 16, rng)
    images = generate(state, 10, rng, tiny_sampler(), config)
    assert images.shape == (10, 16)
    assert np.all(np.abs(images) <= 1.0)
    first = generate(state, 5, np.random.default_rng(1), tiny_sampler(), config)
    second = generate(state, 5, np.random.default_rng(2), tiny_sampler(), config)
    assert not np.array_equal(first, second)


def test_checkpoint_round_trip(tmp_path, rng):
    config = tiny_config()
    graph = build_complete(4)
    state = train_epoch(initial_state(config, graph, 16, rng), tiny_data(rng), config, tiny_sampler(), rng)
    directory = save_state(state, tmp_path, {"gan": config.model_dump()}, seed=0)
    assert directory.name == "epoch_0001"

    loaded = load_state(directory, graph)
    assert loaded.epoch == 1
    assert loaded.losses == state.losses
    assert np.array_equal(loaded.latent_model.couplings, state.latent_model.couplings)
    for a, b in zip(loaded.generator.parameters(), state.generator.parameters()):
        assert np.array_equal(a, b)
    assert loaded.discriminator_adam.step == state.discriminator_adam.step


def test_latest_checkpoint(tmp_path, rng):
    assert latest_checkpoint(tmp_path) is None
    config = tiny_config()
    state = initial_state(config, build_complete(4), 16, rng)
    for epoch in (1, 2, 10):
        save_state(replace(state, epoch=epoch), tmp_path, {}, seed=0)
    (tmp_path / "epoch_0099").mkdir()
    assert [p.name for p in list_checkpoints(tmp_path)] == ["epoch_0001", "epoch_0002", "epoch_0010"]
    assert latest_checkpoint(tmp_path).name == "epoch_0010"


def test_load_state_missing(tmp_path):
    with pytest.raises(CheckpointError):
        load_state(tmp_path / "epoch_0001")


def test_checkpoint_keeps_persistent_chains(tmp_path, rng):
    config = tiny_config()
    state = initial_state(config, build_complete(4), 16, rng)
    chains = rng.choice([-1.0, 1.0], size=(8, 4))
    directory = save_state(state, tmp_path, {}, seed=0, latent_chains=chains)
    assert np.array_equal(load_latent_chains(directory), chains)

    bare = save_state(replace(state, epoch=2), tmp_path, {}, seed=0)
    assert load_latent_chains(bare) is None
    (bare / "latent_chains.npy").write_bytes(b"garbage")
    with pytest.raises(CheckpointError):
        load_latent_chains(bare)


def same_parameters(first, second):
    return all(np.array_equal(a, b) for a, b in zip(first.parameters(), second.parameters()))


def test_train_epoch_is_reproducible_from_seed(rng):
    config = tiny_config()
    state = initial_state(config, build_complete(4), 16, rng)
    data = tiny_data(rng)
    first = train_epoch(state, data, config, tiny_sampler(), np.random.default_rng(9))
    second = train_epoch(state, data, config, tiny_sampler(), np.random.default_rng(9))
    assert same_parameters(first.generator, second.generator)
    assert same_parameters(first.discriminator, second.discriminator)
    assert np.array_equal(first.latent_model.biases, second.latent_model.biases)
    assert np.array_equal(first.latent_model.couplings, second.latent_model.couplings)
    assert first.losses == second.losses


def test_zero_rates_leave_parameters_unchanged(rng):
    config = tiny_config(bm_rate=0.0, adam=AdamConfig(rate=0.0))
    state = initial_state(config, build_complete(4), 16, rng)
    trained = train_epoch(state, tiny_data(rng), config, tiny_sampler(), rng)
    assert same_parameters(trained.generator, state.generator)
    assert same_parameters(trained.discriminator, state.discriminator)
    assert np.array_equal(trained.latent_model.biases, state.latent_model.biases)
    assert np.array_equal(trained.latent_model.couplings, state.latent_model.couplings)
    assert trained.epoch == 1
    assert trained.generator_adam.step == state.generator_adam.step + config.batches_per_epoch


def test_sample_pool_thirds_are_disjoint(rng, monkeypatch):
    seen = []

    def recording(function):
        def wrapper(values, *args, **kwargs):
            seen.append(values)
            return function(values, *args, **kwargs)
        return wrapper

    monkeypatch.setattr(aan_trainer, "latent_codes", recording(aan_trainer.latent_codes))
    monkeypatch.setattr(aan_trainer, "moments", recording(aan_trainer.moments))

    config = tiny_config(batches_per_epoch=3)
    state = initial_state(config, build_complete(4), 16, rng)
    train_epoch(state, tiny_data(rng), config, tiny_sampler(), rng)

    # Les tiers sont des vues du même tirage mélangé; les caractéristiques n'en font pas partie
    pool = seen[0].base
    thirds = [values for values in seen if values.base is pool]
    assert len(thirds) == 3 * config.batches_per_epoch
    assert all(len(values) == config.batch_size for values in thirds)
    for i, first in enumerate(thirds):
        for second in thirds[i + 1:]:
            assert not np.shares_memory(first, second)

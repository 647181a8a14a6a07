"""Tests des expériences et de la ligne de commande"""

import json
import math
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from src.config.settings import RunConfig
from src.experiments import (
    check_ordering,
    final_values,
    summarize,
    train_config_for,
)
from src.experiments.common import check_exact_feasible, grid_embedding, latent_setup
from src.experiments.topology_comparison import surrogate_parity
from src.main import build_parser, main, overrides_from_args
from src.sampling import AnnealerSurrogateSampler, GibbsSampler
from src.topology import build_bipartite, build_chimera, build_complete
from src.utils.aan_errors import ConfigError

CONFIG_DIR = Path(__file__).parent.parent / "src" / "config"


@pytest.fixture
def cli_env(tmp_path, monkeypatch):
    """Environnement de test de la CLI : YAML de test, journal écrit dans tmp_path"""
    monkeypatch.setenv("AAN_ENV", "test")
    monkeypatch.setenv("AAN_CONFIG_PATH", str(CONFIG_DIR))
    monkeypatch.chdir(tmp_path)
    return tmp_path


def write_run_file(path, data_dir, out_dir, *lines):
    content = [f"data.data_dir = {data_dir}", f"data.cache_dir = {path.parent / 'cache'}", f"out_dir = {out_dir}"]
    path.write_text("\n".join(content + list(lines)) + "\n", encoding="utf-8")
    return path


def traces_frame(values):
    """values : {(sampler, topology): [[L1 par époque] par graine]}"""
    rows = []
    for (sampler, topology), seeds in values.items():
        for seed, curve in enumerate(seeds):
            for epoch, l1 in enumerate(curve, start=1):
                rows.append({"sampler": sampler, "topology": topology, "seed": seed,
                             "epoch": epoch, "l1_norm": l1, "kl": None})
    return pd.DataFrame(rows)


def test_summarize_mean_variance_stderr():
    summary = summarize(traces_frame({("gibbs", "complete"): [[4.0, 2.0], [6.0, 4.0]]}))
    assert summary["l1_mean"].tolist() == [5.0, 3.0]
    assert summary["l1_variance"].tolist() == [2.0, 2.0]
    assert summary["l1_stderr"].tolist() == pytest.approx([1.0, 1.0])
    assert summary["n_seeds"].tolist() == [2, 2]


def test_summarize_single_seed_has_zero_variance():
    summary = summarize(traces_frame({("gibbs", "chimera"): [[1.0, 0.5]]}))
    assert summary["l1_variance"].tolist() == [0.0, 0.0]


def test_final_values_and_ordering():
    summary = summarize(traces_frame({
        ("gibbs", "complete"): [[9.0, 1.0], [9.0, 1.2]],
        ("gibbs", "bipartite"): [[9.0, 2.0], [9.0, 2.2]],
        ("gibbs", "chimera"): [[9.0, 2.1], [9.0, 2.3]],
    }))
    final = final_values(summary)
    assert final.set_index("topology")["l1_mean"].to_dict() == pytest.approx(
        {"complete": 1.1, "bipartite": 2.1, "chimera": 2.2})

    ordering = check_ordering(final)
    assert ordering[["lower", "higher"]].values.tolist() == [["complete", "bipartite"], ["bipartite", "chimera"]]
    # Écart 0.1 contre une erreur type combinée de sqrt(0.01 + 0.01)
    assert ordering["separated"].tolist() == [True, False]


def test_surrogate_parity():
    summary = summarize(traces_frame({
        ("gibbs", "chimera"): [[2.0]],
        ("annealer_surrogate", "chimera"): [[2.2]],
    }))
    assert surrogate_parity(final_values(summary)) == pytest.approx(1.1)
    only_gibbs = final_values(summarize(traces_frame({("gibbs", "chimera"): [[2.0]]})))
    assert math.isnan(surrogate_parity(only_gibbs))


def test_train_config_for_uses_sampler_rate():
    config = RunConfig()
    assert train_config_for(config, "gibbs").effective_rate == 0.001
    assert train_config_for(config, "annealer_surrogate").effective_rate == 0.03
    assert train_config_for(config, "gibbs").epochs == config.topology.epochs


def test_exact_sampler_rejected_above_cap():
    with pytest.raises(ConfigError):
        check_exact_feasible("exact", 36, 20)
    check_exact_feasible("exact", 8, 20)
    check_exact_feasible("gibbs", 100, 20)


def test_grid_embedding_by_topology():
    hardware = build_chimera(16, 16, 4)
    assert grid_embedding("complete", build_complete(36), hardware).max_chain_length == 10
    assert grid_embedding("bipartite", build_bipartite(18, 18), hardware, index=3) is not None
    assert grid_embedding("chimera", build_complete(4), hardware) is None
    assert grid_embedding("complete", build_complete(36), build_chimera(4, 4, 4)) is None


def test_latent_setup_builds_matching_sampler():
    config = RunConfig()
    graph, sampler = latent_setup(config, "gibbs", "bipartite", 10)
    assert graph.n_nodes == 10 and isinstance(sampler, GibbsSampler)
    graph, sampler = latent_setup(config, "surrogate", "chimera", 36)
    assert isinstance(sampler, AnnealerSurrogateSampler)
    assert len(graph.native_qubits) == 36


def test_overrides_compare_topologies():
    args = build_parser().parse_args(["compare-topologies", "--sampler", "surrogate", "--lr", "0.05",
                                      "--epochs", "10", "--seed", "4"])
    overrides = overrides_from_args(args)
    assert overrides["topology.samplers"] == ["annealer_surrogate"]
    assert overrides["topology.surrogate_rate"] == 0.05
    assert "topology.classical_rate" not in overrides
    assert overrides["topology.epochs"] == 10 and overrides["seed"] == 4

    overrides = overrides_from_args(build_parser().parse_args(["compare-topologies", "--lr", "0.002"]))
    assert overrides["topology.classical_rate"] == overrides["topology.surrogate_rate"] == 0.002


def test_overrides_train_gan_and_evaluate():
    args = build_parser().parse_args(["train-gan", "--topology", "complete", "--sampler", "gibbs",
                                      "--lr", "0.001", "--out", "runs/x"])
    overrides = overrides_from_args(args)
    assert overrides["gan.latent_topology"] == "complete"
    assert overrides["gan.adam.rate"] == 0.001
    assert overrides["out_dir"] == "runs/x"

    overrides = overrides_from_args(build_parser().parse_args(["evaluate", "--all"]))
    assert overrides["evaluation.all_checkpoints"] is True


def test_parser_rejects_unknown_sampler():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["train-gan", "--sampler", "annealer"])


def test_main_missing_config_file_exits_1(cli_env):
    assert main(["train-gan", "--config", str(cli_env / "absent.conf"), "--quiet"]) == 1


def test_main_invalid_config_exits_2(cli_env):
    path = cli_env / "bad.conf"
    path.write_text("gibbs.beta = -1\n", encoding="utf-8")
    assert main(["train-gan", "--config", str(path), "--quiet"]) == 2


def test_main_exact_sampler_on_100_latent_nodes_exits_2(cli_env):
    assert main(["train-gan", "--sampler", "exact", "--quiet"]) == 2


def test_main_missing_mnist_exits_1(cli_env):
    path = write_run_file(cli_env / "run.conf", cli_env / "nowhere", cli_env / "out")
    assert main(["compare-topologies", "--config", str(path), "--quiet"]) == 1


def test_main_evaluate_without_checkpoint_exits_1(cli_env):
    path = write_run_file(cli_env / "run.conf", cli_env / "nowhere", cli_env / "out")
    assert main(["evaluate", "--config", str(path), "--quiet"]) == 1


def test_compare_topologies_end_to_end(cli_env, fake_mnist_dir):
    out_dir = cli_env / "compare"
    path = write_run_file(cli_env / "run.conf", fake_mnist_dir, out_dir,
                          "topology.n_seeds = 2", "topology.samples_per_step = 200", "gibbs.burn_in = 10")
    assert main(["compare-topologies", "--config", str(path), "--sampler", "gibbs",
                 "--epochs", "3", "--quiet"]) == 0

    traces = pd.read_csv(out_dir / "topology_traces.csv")
    assert list(traces.columns) == ["sampler", "topology", "seed", "epoch", "l1_norm", "kl"]
    assert len(traces) == 3 * 2 * 3
    assert set(traces["topology"]) == {"complete", "bipartite", "chimera"}
    assert traces["kl"].isna().all()

    summary = pd.read_csv(out_dir / "topology_summary.csv")
    assert len(summary) == 3 * 3
    assert (summary["n_seeds"] == 2).all()
    assert len(pd.read_csv(out_dir / "topology_ordering.csv")) == 2

    manifest = json.loads((out_dir / "manifest.json").read_text(encoding="utf-8"))
    assert manifest["command"] == "compare-topologies"
    assert manifest["config"]["topology"]["epochs"] == 3
    assert manifest["surrogate_parity"] is None


def test_compare_topologies_is_deterministic(cli_env, fake_mnist_dir):
    outputs = []
    for name in ("first", "second"):
        path = write_run_file(cli_env / f"{name}.conf", fake_mnist_dir, cli_env / "same",
                              "topology.n_seeds = 1", "topology.samples_per_step = 100",
                              "topology.topologies = [bipartite]", "gibbs.burn_in = 5")
        assert main(["compare-topologies", "--config", str(path), "--sampler", "gibbs",
                     "--epochs", "2", "--quiet"]) == 0
        outputs.append((cli_env / "same" / "topology_traces.csv").read_bytes())
    assert outputs[0] == outputs[1]


def gan_run_file(cli_env, data_dir, out_dir):
    return write_run_file(
        cli_env / "gan.conf", data_dir, out_dir,
        "gan.latent_nodes = 8",
        "gan.batch_size = 8",
        "gan.batches_per_epoch = 2",
        "gan.discriminator_hidden = [16]",
        "gan.generator_hidden = [16]",
        "gan.eval_images = 100",
        "gibbs.burn_in = 5",
        "inception.epochs = 1",
        "inception.hidden = 16",
        "inception.feature_width = 8",
        "inception.accuracy_bar = 0.0",
        "evaluation.n_generated = 100",
        "evaluation.n_real = 100",
    )


def test_train_gan_resume_and_evaluate(cli_env, fake_mnist_dir):
    out_dir = cli_env / "gan"
    path = gan_run_file(cli_env, fake_mnist_dir, out_dir)
    common = ["--config", str(path), "--topology", "complete", "--sampler", "gibbs", "--quiet"]

    assert main(["train-gan", *common, "--epochs", "2"]) == 0
    assert (out_dir / "epoch_0001").is_dir() and (out_dir / "epoch_0002").is_dir()
    assert (out_dir / "grids" / "epoch_0002.pgm").read_bytes().startswith(b"P5")

    assert main(["train-gan", *common, "--epochs", "3"]) == 0
    losses = pd.read_csv(out_dir / "losses.csv")
    assert losses["epoch"].tolist() == [1, 2, 3]
    assert np.all(np.isfinite(losses[["discriminator_loss", "generator_loss"]].to_numpy()))
    assert json.loads((out_dir / "run_manifest.json").read_text(encoding="utf-8"))["epoch"] == 3

    assert main(["evaluate", *common, "--all"]) == 0
    metrics = pd.read_csv(out_dir / "evaluation.csv")
    assert metrics["epoch"].tolist() == [1, 2, 3]
    assert (metrics["inception_score"] >= 1.0 - 1e-9).all()
    assert (out_dir / "inception" / "inception.json").exists()
    manifest = json.loads((out_dir / "evaluate_manifest.json").read_text(encoding="utf-8"))
    assert manifest["checkpoints"] == ["epoch_0001", "epoch_0002", "epoch_0003"]


def test_evaluate_single_checkpoint(cli_env, fake_mnist_dir):
    out_dir = cli_env / "gan"
    path = gan_run_file(cli_env, fake_mnist_dir, out_dir)
    common = ["--config", str(path), "--topology", "complete", "--quiet"]
    assert main(["train-gan", *common, "--epochs", "1"]) == 0
    assert main(["evaluate", *common, "--checkpoint", str(out_dir / "epoch_0001")]) == 0
    assert len(pd.read_csv(out_dir / "evaluation.csv")) == 1
    assert main(["evaluate", *common, "--checkpoint", str(out_dir / "epoch_0009")]) == 1


def test_resumed_gan_run_matches_uninterrupted_run(cli_env, fake_mnist_dir):
    common = ["--topology", "complete", "--sampler", "gibbs", "--quiet"]
    straight = cli_env / "straight"
    path = gan_run_file(cli_env, fake_mnist_dir, straight)
    assert main(["train-gan", "--config", str(path), *common, "--epochs", "3"]) == 0

    resumed = cli_env / "resumed"
    path = gan_run_file(cli_env, fake_mnist_dir, resumed)
    assert main(["train-gan", "--config", str(path), *common, "--epochs", "2"]) == 0
    assert (resumed / "epoch_0002" / "latent_chains.npy").exists()
    assert main(["train-gan", "--config", str(path), *common, "--epochs", "3"]) == 0

    for name in ("generator.bin", "discriminator.bin", "latent_model.txt", "latent_chains.npy", "losses.csv"):
        assert (straight / "epoch_0003" / name).read_bytes() == (resumed / "epoch_0003" / name).read_bytes()

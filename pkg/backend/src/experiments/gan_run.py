"""
Exécution complète de l'entraînement adversarial associatif : reprise depuis le
dernier point de sauvegarde, sauvegarde à chaque époque, grilles d'images et
évaluation périodique.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import pandas as pd
from tqdm import tqdm

from src.adversarial.aan_trainer import LOSS_COLUMNS, GanState, generate, initial_state, train_epoch
from src.adversarial.checkpoints import latest_checkpoint, load_latent_chains, load_state, save_state
from src.config.settings import RunConfig
from src.experiments.common import check_exact_feasible, latent_setup, signed_mnist
from src.experiments.evaluate_run import METRIC_COLUMNS, Evaluator, inception_for
from src.sampling.samplers import GibbsSampler
from src.utils.aan_utils import export_csv, rng_for, save_image_grid, write_manifest

# Configuration du logging
logger = logging.getLogger("aan_gan_run")

GRID_TILES = 8


@dataclass
class GanRunResult:
    """État final et traces d'une exécution"""
    state: GanState
    losses: pd.DataFrame
    metrics: pd.DataFrame
    resumed_from: Optional[int] = None


def run_gan(config: RunConfig, show_progress: bool = True) -> GanRunResult:
    """
    Entraîne le réseau adversarial associatif jusqu'à config.gan.epochs

    Le flux aléatoire de l'époque e est dérivé de (graine, "epoch", e) : une
    exécution interrompue puis reprise suit le même chemin qu'une exécution continue.

    Args:
        config: Configuration complète (sections gan, gibbs, hardware, data, inception)
        show_progress: Afficher une barre de progression

    Returns:
        État final, pertes par époque, métriques d'évaluation

    Raises:
        ConfigError: échantillonneur exact au-delà du plafond d'énumération
        FileNotFoundError: si MNIST est absent
        CheckpointError: si le répertoire de sortie n'est pas inscriptible
    """
    gan = config.gan
    check_exact_feasible(gan.sampler_kind, gan.latent_nodes, config.train.enumeration_cap)
    out_dir = Path(config.out_dir)
    snapshot = config.snapshot()

    data = signed_mnist(config, "train")
    latent_graph, sampler = latent_setup(config, gan.sampler_kind, gan.latent_topology, gan.latent_nodes)

    resumed_from = None
    checkpoint = latest_checkpoint(out_dir)
    if checkpoint is not None:
        state = load_state(checkpoint, latent_graph)
        resumed_from = state.epoch
        chains = load_latent_chains(checkpoint)
        if chains is not None and isinstance(sampler, GibbsSampler):
            sampler.restore_chains(latent_graph, chains)
        logger.info(f"Reprise depuis {checkpoint} (époque {state.epoch})")
    else:
        state = initial_state(gan, latent_graph, data.images.shape[1], rng_for(config.seed, "init"),
                              config.train.init_scale)

    metrics_path = out_dir / "metrics.csv"
    metric_rows = []
    if resumed_from is not None and metrics_path.exists():
        previous = pd.read_csv(metrics_path)
        metric_rows = previous[previous["epoch"] <= resumed_from].to_dict("records")

    # Grilles et évaluation tirent à part : les chaînes de l'entraînement restent intactes
    preview_sampler = sampler.detached()
    evaluator = None
    if gan.eval_every:
        evaluator = Evaluator(config, inception_for(config, show_progress), preview_sampler,
                              gan.eval_images, config.evaluation.n_real)

    if state.epoch >= gan.epochs:
        logger.info(f"Exécution déjà complète ({state.epoch}/{gan.epochs} époques)")

    for epoch in tqdm(range(state.epoch + 1, gan.epochs + 1), desc="Entraînement AAN",
                      disable=not show_progress):
        state = train_epoch(state, data, gan, sampler, rng_for(config.seed, "epoch", epoch))
        chains = sampler.chains_for(latent_graph) if isinstance(sampler, GibbsSampler) else None
        save_state(state, out_dir, snapshot, config.seed, latent_chains=chains)
        export_csv(state.losses_frame(), out_dir / "losses.csv", LOSS_COLUMNS)

        if gan.grid_every and epoch % gan.grid_every == 0:
            samples = generate(state, GRID_TILES * GRID_TILES, rng_for(config.seed, "grid", epoch),
                               preview_sampler, gan)
            save_image_grid(samples, out_dir / "grids" / f"epoch_{epoch:04d}.pgm",
                            data.height, data.width, tiles=GRID_TILES)

        if evaluator is not None and epoch % gan.eval_every == 0:
            metric_rows.append(evaluator.evaluate(state))
            export_csv(metric_rows, metrics_path, METRIC_COLUMNS)

    write_manifest(out_dir, "train-gan", snapshot, config.seed, extra={"epoch": state.epoch},
                   filename="run_manifest.json")
    return GanRunResult(state, state.losses_frame(), pd.DataFrame(metric_rows, columns=METRIC_COLUMNS),
                        resumed_from)

"""
Points de sauvegarde de la boucle adversariale : un répertoire epoch_NNNN par époque,
contenant les réseaux, les états d'Adam, le modèle latent (texte) et un manifeste.
"""

import logging
import re
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np
import pandas as pd

from src.adversarial.aan_trainer import EpochLosses, GanState
from src.ising.ising_model import load_model, save_model
from src.neural.checkpoint import load_adam, load_network, save_adam, save_network
from src.topology.graphs import LogicalGraph
from src.utils.aan_errors import CheckpointError
from src.utils.aan_utils import export_csv, read_manifest, write_manifest

# Configuration du logging
logger = logging.getLogger("aan_checkpoints")

_EPOCH_DIR = re.compile(r"^epoch_(\d{4,})$")
CHAINS_FILE = "latent_chains.npy"


def checkpoint_dir(run_dir: Union[str, Path], epoch: int) -> Path:
    return Path(run_dir) / f"epoch_{epoch:04d}"


def save_state(state: GanState, run_dir: Union[str, Path], snapshot: Dict[str, Any], seed: int,
               latent_chains: Optional[np.ndarray] = None) -> Path:
    """
    Écrit le point de sauvegarde de l'époque courante

    Args:
        state: État après l'époque
        run_dir: Répertoire de l'exécution
        snapshot: Instantané de configuration
        seed: Graine maîtresse
        latent_chains: Chaînes de Gibbs persistantes du modèle latent (facultatif)

    Returns:
        Répertoire du point de sauvegarde

    Raises:
        CheckpointError: si le répertoire n'est pas inscriptible
    """
    directory = checkpoint_dir(run_dir, state.epoch)
    try:
        directory.mkdir(parents=True, exist_ok=True)
        save_network(state.generator, directory / "generator.bin")
        save_network(state.discriminator, directory / "discriminator.bin")
        save_adam(state.generator_adam, directory / "generator_adam.bin")
        save_adam(state.discriminator_adam, directory / "discriminator_adam.bin")
        save_model(state.latent_model, directory / "latent_model.txt")
        export_csv(state.losses_frame(), directory / "losses.csv", float_format=None)
        if latent_chains is not None:
            np.save(directory / CHAINS_FILE, latent_chains)
        write_manifest(directory, "train-gan", snapshot, seed, extra={"epoch": state.epoch})
    except OSError as e:
        raise CheckpointError(f"Écriture du point de sauvegarde impossible dans {directory}: {e}") from e
    logger.info(f"Point de sauvegarde écrit: {directory}")
    return directory


def load_state(directory: Union[str, Path], latent_graph: Optional[LogicalGraph] = None) -> GanState:
    """
    Relit un point de sauvegarde

    Args:
        directory: Répertoire epoch_NNNN
        latent_graph: Graphe du modèle latent (reconstruit depuis le fichier sinon)

    Returns:
        État restauré
    """
    directory = Path(directory)
    manifest_path = directory / "manifest.json"
    if not manifest_path.exists():
        raise CheckpointError(f"Point de sauvegarde introuvable ou incomplet: {directory}")
    manifest = read_manifest(manifest_path)

    generator = load_network(directory / "generator.bin")
    discriminator = load_network(directory / "discriminator.bin")
    losses_path = directory / "losses.csv"
    losses = ()
    if losses_path.exists() and losses_path.stat().st_size > 0:
        frame = pd.read_csv(losses_path, float_precision="round_trip")
        losses = tuple(
            EpochLosses(
                int(row.epoch), float(row.discriminator_loss), float(row.generator_loss), float(row.latent_l1),
                None if pd.isna(row.chain_break_fraction) else float(row.chain_break_fraction),
            )
            for row in frame.itertuples(index=False)
        )
    return GanState(
        generator=generator,
        discriminator=discriminator,
        latent_model=load_model(directory / "latent_model.txt", graph=latent_graph),
        generator_adam=load_adam(directory / "generator_adam.bin", generator),
        discriminator_adam=load_adam(directory / "discriminator_adam.bin", discriminator),
        epoch=int(manifest["epoch"]),
        losses=losses,
    )


def list_checkpoints(run_dir: Union[str, Path]):
    """Répertoires epoch_NNNN d'une exécution, par époque croissante"""
    run_dir = Path(run_dir)
    if not run_dir.exists():
        return []
    found = [(int(m.group(1)), p) for p in run_dir.iterdir()
             if p.is_dir() and (m := _EPOCH_DIR.match(p.name)) and (p / "manifest.json").exists()]
    return [p for _, p in sorted(found)]


def latest_checkpoint(run_dir: Union[str, Path]) -> Optional[Path]:
    """Point de sauvegarde de l'époque la plus élevée, None s'il n'y en a pas"""
    checkpoints = list_checkpoints(run_dir)
    return checkpoints[-1] if checkpoints else None


def load_latent_chains(directory: Union[str, Path]) -> Optional[np.ndarray]:
    """Chaînes persistantes d'un point de sauvegarde, None si elles n'ont pas été sauvegardées"""
    path = Path(directory) / CHAINS_FILE
    if not path.exists():
        return None
    try:
        return np.load(path, allow_pickle=False)
    except (OSError, ValueError) as e:
        raise CheckpointError(f"Chaînes persistantes illisibles: {path}: {e}") from e

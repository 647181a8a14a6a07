"""
Boucle adversariale associative : discriminateur, générateur et a priori latent de Boltzmann
"""

from .losses import discriminator_loss, generator_loss, smoothed_labels
from .aan_trainer import (
    EpochLosses,
    GanState,
    build_networks,
    initial_state,
    batch_plan,
    train_epoch,
    generate,
)
from .checkpoints import save_state, load_state, load_latent_chains, latest_checkpoint, list_checkpoints

__all__ = [
    "discriminator_loss",
    "generator_loss",
    "smoothed_labels",
    "EpochLosses",
    "GanState",
    "build_networks",
    "initial_state",
    "batch_plan",
    "train_epoch",
    "generate",
    "save_state",
    "load_state",
    "load_latent_chains",
    "latest_checkpoint",
    "list_checkpoints",
]

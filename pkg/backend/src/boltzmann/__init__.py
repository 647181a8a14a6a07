"""
Entraînement des machines de Boltzmann entièrement visibles
"""

from .bm_trainer import (
    TrainRecord,
    TrainTrace,
    gradient_step,
    l1_norm,
    kl_divergence,
    train,
)

__all__ = ["TrainRecord", "TrainTrace", "gradient_step", "l1_norm", "kl_divergence", "train"]

"""
Modèles d'Ising : paramètres, énergie, distribution exacte et moments
"""

from .ising_model import IsingModel, energy, save_model, load_model
from .exact import (
    ExactDistribution,
    exact_distribution,
    total_variation,
    states_from_indices,
    indices_from_states,
    DEFAULT_ENUMERATION_CAP,
)
from .moments import Moments, moments

__all__ = [
    "IsingModel",
    "ExactDistribution",
    "Moments",
    "energy",
    "exact_distribution",
    "moments",
    "total_variation",
    "states_from_indices",
    "indices_from_states",
    "save_model",
    "load_model",
    "DEFAULT_ENUMERATION_CAP",
]

"""
Réseaux denses, rétropropagation et optimiseur Adam
"""

from .network import Network, DenseLayer, ForwardCache, ACTIVATIONS, binarize_features
from .adam import AdamState, backward_step
from .checkpoint import save_network, load_network, save_adam, load_adam

__all__ = [
    "Network",
    "DenseLayer",
    "ForwardCache",
    "ACTIVATIONS",
    "AdamState",
    "backward_step",
    "binarize_features",
    "save_network",
    "load_network",
    "save_adam",
    "load_adam",
]

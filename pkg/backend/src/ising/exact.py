"""
Distribution de Boltzmann exacte par énumération des 2^n états (petits systèmes).

Indexation des états : l'état d'indice s a z_i = +1 si le bit i de s vaut 1, -1 sinon.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import logsumexp

from src.ising.ising_model import IsingModel
from src.utils.aan_errors import InvalidInputError, InvalidParameterError, TooLargeError

# Configuration du logging
logger = logging.getLogger("aan_exact")

DEFAULT_ENUMERATION_CAP = 20
# Taille des blocs d'énumération (bornée pour la mémoire)
_CHUNK = 1 << 16


def states_from_indices(indices: np.ndarray, n_nodes: int) -> np.ndarray:
    """Convertit des indices d'état en matrice de spins ±1 (int8)"""
    indices = np.asarray(indices, dtype=np.int64)
    bits = (indices[:, None] >> np.arange(n_nodes, dtype=np.int64)[None, :]) & 1
    return (2 * bits - 1).astype(np.int8)


def indices_from_states(states: np.ndarray) -> np.ndarray:
    """Convertit une matrice de spins ±1 en indices d'état"""
    states = np.asarray(states)
    n_nodes = states.shape[1]
    if n_nodes > 62:
        raise TooLargeError(f"{n_nodes} nœuds : indices d'état non représentables")
    weights = np.left_shift(np.int64(1), np.arange(n_nodes, dtype=np.int64))
    return ((states > 0).astype(np.int64) * weights).sum(axis=1)


def all_states(n_nodes: int) -> np.ndarray:
    return states_from_indices(np.arange(1 << n_nodes), n_nodes)


@dataclass(frozen=True, eq=False)
class ExactDistribution:
    """Probabilités de tous les états, indexées par indice d'état"""
    n_nodes: int
    probabilities: np.ndarray
    # None pour une distribution empirique
    beta: Optional[float] = None
    partition_value: Optional[float] = None
    log_partition: Optional[float] = None

    def __post_init__(self):
        probabilities = np.asarray(self.probabilities, dtype=np.float64)
        if probabilities.shape != (1 << self.n_nodes,):
            raise InvalidInputError(f"{probabilities.shape} probabilités pour {self.n_nodes} nœuds")
        if np.any(probabilities < 0) or abs(probabilities.sum() - 1.0) > 1e-12:
            raise InvalidInputError("Probabilités négatives ou non normalisées")
        object.__setattr__(self, "probabilities", probabilities)

    def probability(self, state) -> float:
        """Probabilité d'un état de spins"""
        state = np.asarray(state).reshape(1, -1)
        if state.shape[1] != self.n_nodes:
            raise InvalidInputError("Longueur d'état incompatible")
        return float(self.probabilities[indices_from_states(state)[0]])

    @classmethod
    def empirical(cls, states: np.ndarray) -> "ExactDistribution":
        """
        Distribution empirique d'une matrice d'états sur le même espace d'états

        Args:
            states: Matrice m × n de spins ±1

        Returns:
            Distribution empirique (beta et Z indéfinis)
        """
        states = np.asarray(states)
        if states.ndim != 2 or states.shape[0] == 0:
            raise InvalidInputError("Ensemble d'états vide")
        n_nodes = states.shape[1]
        counts = np.bincount(indices_from_states(states), minlength=1 << n_nodes)
        return cls(n_nodes, counts / counts.sum())


def check_beta(beta: float) -> float:
    if not np.isfinite(beta) or beta <= 0:
        raise InvalidParameterError(f"beta doit être fini et strictement positif (reçu {beta})")
    return float(beta)


def exact_distribution(model: IsingModel, beta: float = 1.0,
                       cap: int = DEFAULT_ENUMERATION_CAP) -> ExactDistribution:
    """
    Distribution de Boltzmann P(z) = exp(-β E(z)) / Z par énumération

    Args:
        model: Modèle d'Ising
        beta: Température inverse (> 0)
        cap: Nombre maximal de nœuds énumérables

    Returns:
        Distribution exacte
    """
    beta = check_beta(beta)
    n = model.n_nodes
    if n > cap:
        raise TooLargeError(f"{n} nœuds dépassent le plafond d'énumération ({cap})")

    total = 1 << n
    log_weights = np.empty(total, dtype=np.float64)
    for start in range(0, total, _CHUNK):
        stop = min(start + _CHUNK, total)
        states = states_from_indices(np.arange(start, stop), n)
        log_weights[start:stop] = -beta * model.energies(states)

    log_z = float(logsumexp(log_weights))
    probabilities = np.exp(log_weights - log_z)
    probabilities /= probabilities.sum()
    return ExactDistribution(n, probabilities, beta, float(np.exp(log_z)), log_z)


def total_variation(p: ExactDistribution, q: ExactDistribution) -> float:
    """Distance en variation totale entre deux distributions sur le même espace"""
    if p.n_nodes != q.n_nodes:
        raise InvalidInputError("Espaces d'états différents")
    return 0.5 * float(np.abs(p.probabilities - q.probabilities).sum())

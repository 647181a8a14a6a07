"""
Moments empiriques ou exacts : ⟨z_i⟩ et ⟨z_i z_j⟩.
"""

from dataclasses import dataclass
from typing import Union

import numpy as np

from src.ising.exact import ExactDistribution, states_from_indices
from src.topology.graphs import LogicalGraph
from src.utils.aan_errors import InvalidInputError

_CHUNK = 1 << 16


@dataclass(frozen=True, eq=False)
class Moments:
    """Moyennes par nœud et matrice complète des corrélations de paires"""
    means: np.ndarray
    correlations: np.ndarray

    @property
    def n_nodes(self) -> int:
        return self.means.shape[0]

    def edge_correlations(self, graph: LogicalGraph) -> np.ndarray:
        """Corrélations restreintes aux arêtes du graphe (ordre de edge_list)"""
        if graph.n_nodes != self.n_nodes:
            raise InvalidInputError(f"Moments sur {self.n_nodes} nœuds, graphe à {graph.n_nodes} nœuds")
        if graph.n_edges == 0:
            return np.zeros(0)
        pairs = np.asarray(graph.edge_list)
        return self.correlations[pairs[:, 0], pairs[:, 1]]

    def pair_correlations(self) -> np.ndarray:
        """Corrélations de toutes les paires i < j"""
        upper = np.triu_indices(self.n_nodes, k=1)
        return self.correlations[upper]


def moments(source: Union[ExactDistribution, np.ndarray, "SampleSet"]) -> Moments:
    """
    Moments d'ordre un et deux d'un ensemble d'échantillons ou d'une distribution

    Args:
        source: Distribution exacte, SampleSet ou matrice m × n de spins ±1

    Returns:
        Moments, chaque valeur dans [-1, 1]
    """
    if isinstance(source, ExactDistribution):
        return _distribution_moments(source)

    states = getattr(source, "states", source)
    states = np.asarray(states, dtype=np.float64)
    if states.ndim != 2 or states.shape[0] == 0:
        raise InvalidInputError("Moments d'un ensemble d'échantillons vide")
    m = states.shape[0]
    means = states.mean(axis=0)
    correlations = (states.T @ states) / m
    return Moments(means, correlations)


def _distribution_moments(distribution: ExactDistribution) -> Moments:
    n = distribution.n_nodes
    total = 1 << n
    means = np.zeros(n)
    correlations = np.zeros((n, n))
    for start in range(0, total, _CHUNK):
        stop = min(start + _CHUNK, total)
        states = states_from_indices(np.arange(start, stop), n).astype(np.float64)
        weights = distribution.probabilities[start:stop]
        means += weights @ states
        correlations += states.T @ (states * weights[:, None])
    return Moments(means, correlations)

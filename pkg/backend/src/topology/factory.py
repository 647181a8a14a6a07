"""
Construction d'un graphe logique à partir de son nom de topologie.
"""

from typing import Optional

from src.topology.chimera import DEFAULT_SHORE, HardwareGraph, build_chimera_logical
from src.topology.graphs import LogicalGraph, build_bipartite, build_complete
from src.utils.aan_errors import ConfigError

TOPOLOGIES = ("complete", "bipartite", "chimera")


def build_topology(kind: str, n_nodes: int, shore: int = DEFAULT_SHORE,
                   hardware: Optional[HardwareGraph] = None) -> LogicalGraph:
    """
    Graphe logique d'une topologie nommée

    Args:
        kind: "complete", "bipartite" ou "chimera"; pour n impair, la partie
            bipartie A (nœuds 0..⌊n/2⌋-1) a un nœud de moins que la partie B
        n_nodes: Nombre de variables visibles
        shore: Qubits par rive pour une grille Chimera construite à la demande
        hardware: Graphe matériel où placer nativement la topologie chimera

    Returns:
        Graphe logique
    """
    if kind == "complete":
        return build_complete(n_nodes)
    if kind == "bipartite":
        return build_bipartite(n_nodes // 2, n_nodes - n_nodes // 2)
    if kind == "chimera":
        return build_chimera_logical(n_nodes, shore, hardware)
    raise ConfigError(f"Topologie inconnue: {kind} (attendu: {', '.join(TOPOLOGIES)})")

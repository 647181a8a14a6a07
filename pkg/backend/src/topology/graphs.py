"""
Graphes logiques des machines de Boltzmann : complet, biparti symétrique,
et lecture/écriture au format liste d'arêtes.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import FrozenSet, Iterable, List, Optional, Tuple, Union

import networkx as nx

from src.utils.aan_errors import InvalidIdError, InvalidInputError, InvalidSizeError

# Configuration du logging
logger = logging.getLogger("aan_graphs")

Edge = Tuple[int, int]


def normalize_edges(edges: Iterable[Tuple[int, int]], n_nodes: int) -> FrozenSet[Edge]:
    """
    Normalise un ensemble d'arêtes non orientées (i < j) et vérifie les bornes

    Args:
        edges: Paires de nœuds
        n_nodes: Nombre de nœuds

    Returns:
        Ensemble figé d'arêtes (i, j) avec i < j
    """
    normalized = set()
    for a, b in edges:
        a, b = int(a), int(b)
        if a == b:
            raise InvalidInputError(f"Boucle interdite sur le nœud {a}")
        if not (0 <= a < n_nodes and 0 <= b < n_nodes):
            raise InvalidIdError(f"Arête ({a}, {b}) hors de [0, {n_nodes})")
        normalized.add((min(a, b), max(a, b)))
    return frozenset(normalized)


@dataclass(frozen=True)
class LogicalGraph:
    """Graphe logique G = (V, E) d'une machine de Boltzmann"""
    n_nodes: int
    edges: FrozenSet[Edge]
    # Placement matériel 1-1 (graphes natifs Chimera), nœud i -> qubit native_qubits[i]
    native_qubits: Optional[Tuple[int, ...]] = field(default=None, compare=False)

    def __post_init__(self):
        if self.n_nodes < 1:
            raise InvalidSizeError(f"Un graphe logique requiert au moins un nœud (reçu {self.n_nodes})")
        object.__setattr__(self, "edges", normalize_edges(self.edges, self.n_nodes))
        if self.native_qubits is not None and len(self.native_qubits) != self.n_nodes:
            raise InvalidInputError("native_qubits doit couvrir chaque nœud logique")

    @property
    def edge_list(self) -> List[Edge]:
        """Arêtes triées; l'ordre indexe les couplages d'un modèle d'Ising"""
        return sorted(self.edges)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n_nodes))
        graph.add_edges_from(self.edges)
        return graph

    def bipartition(self) -> Optional[Tuple[List[int], List[int]]]:
        """
        Retourne une 2-coloration du graphe s'il est biparti

        Returns:
            (partie contenant le nœud 0, autre partie) ou None si le graphe n'est pas biparti
        """
        graph = self.to_networkx()
        if not nx.is_bipartite(graph):
            return None
        colors = nx.bipartite.color(graph)
        part_a = sorted(n for n, c in colors.items() if c == colors[0])
        part_b = sorted(n for n, c in colors.items() if c != colors[0])
        return part_a, part_b


def build_complete(n: int) -> LogicalGraph:
    """
    Construit le graphe complet K_n

    Args:
        n: Nombre de nœuds (≥ 1)

    Returns:
        Graphe à n(n-1)/2 arêtes
    """
    if n < 1:
        raise InvalidSizeError(f"Taille invalide pour un graphe complet: {n}")
    edges = ((i, j) for i in range(n) for j in range(i + 1, n))
    return LogicalGraph(n, frozenset(edges))


def build_bipartite(n_a: int, n_b: int) -> LogicalGraph:
    """
    Construit le graphe biparti complet K_{n_a, n_b}

    Les nœuds 0..n_a-1 forment la partie A, n_a..n_a+n_b-1 la partie B.

    Args:
        n_a: Taille de la partie A
        n_b: Taille de la partie B

    Returns:
        Graphe à n_a·n_b arêtes, aucune à l'intérieur d'une partie
    """
    if n_a < 1 or n_b < 1:
        raise InvalidSizeError(f"Parties de taille nulle interdites: ({n_a}, {n_b})")
    edges = ((i, n_a + j) for i in range(n_a) for j in range(n_b))
    return LogicalGraph(n_a + n_b, frozenset(edges))


def save_edge_list(graph: LogicalGraph, path: Union[str, Path]) -> Path:
    """
    Écrit un graphe au format texte : "n_nodes" puis une ligne "i j" par arête

    Args:
        graph: Graphe à sauvegarder
        path: Fichier de destination

    Returns:
        Chemin du fichier écrit
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        f.write(f"{graph.n_nodes}\n")
        for i, j in graph.edge_list:
            f.write(f"{i} {j}\n")
    return path


def load_edge_list(path: Union[str, Path]) -> LogicalGraph:
    """
    Relit un graphe écrit par save_edge_list

    Args:
        path: Fichier source

    Returns:
        Graphe logique
    """
    with open(path, 'r', encoding='utf-8') as f:
        lines = [line.strip() for line in f if line.strip()]
    if not lines:
        raise InvalidInputError(f"Fichier de graphe vide: {path}")

    try:
        n_nodes = int(lines[0])
        edges = [tuple(int(x) for x in line.split()) for line in lines[1:]]
    except ValueError as e:
        raise InvalidInputError(f"Liste d'arêtes illisible dans {path}: {e}") from e

    if any(len(edge) != 2 for edge in edges):
        raise InvalidInputError(f"Chaque ligne d'arête doit contenir deux entiers ({path})")
    return LogicalGraph(n_nodes, frozenset(edges))

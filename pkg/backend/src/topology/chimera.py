"""
Graphe matériel Chimera : grille de cellules K_{shore,shore}, couplages entre
cellules voisines, qubits et coupleurs morts.

Indexation linéaire d'un qubit : ((row * cols + col) * 2 + side) * shore + k
  - side 0 : rive "verticale", couplée à la même position des cellules haut/bas
  - side 1 : rive "horizontale", couplée à la même position des cellules gauche/droite
"""

import logging
import math
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

import networkx as nx

from src.topology.graphs import Edge, LogicalGraph, normalize_edges
from src.utils.aan_errors import InvalidIdError, InvalidInputError, InvalidSizeError

# Configuration du logging
logger = logging.getLogger("aan_chimera")

DEFAULT_SHORE = 4


@dataclass(frozen=True)
class HardwareGraph:
    """Graphe du recuit matériel, avec qubits et coupleurs hors service"""
    n_qubits: int
    edges: FrozenSet[Edge]
    dead_qubits: FrozenSet[int] = frozenset()
    dead_couplers: FrozenSet[Edge] = frozenset()
    # Forme de la grille Chimera (rows, cols, shore), None pour un graphe quelconque
    shape: Optional[Tuple[int, int, int]] = None
    _usable_edges: FrozenSet[Edge] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n_qubits < 1:
            raise InvalidSizeError(f"Graphe matériel vide ({self.n_qubits} qubits)")
        object.__setattr__(self, "edges", normalize_edges(self.edges, self.n_qubits))

        dead = frozenset(int(q) for q in self.dead_qubits)
        out_of_range = sorted(q for q in dead if not 0 <= q < self.n_qubits)
        if out_of_range:
            raise InvalidIdError(f"Qubits morts hors de [0, {self.n_qubits}): {out_of_range}")
        object.__setattr__(self, "dead_qubits", dead)

        couplers = normalize_edges(self.dead_couplers, self.n_qubits)
        unknown = sorted(c for c in couplers if c not in self.edges)
        if unknown:
            raise InvalidIdError(f"Coupleurs morts inexistants: {unknown}")
        object.__setattr__(self, "dead_couplers", couplers)

        usable = frozenset(
            (a, b) for a, b in self.edges
            if (a, b) not in couplers and a not in dead and b not in dead
        )
        object.__setattr__(self, "_usable_edges", usable)

    @property
    def usable_edges(self) -> FrozenSet[Edge]:
        return self._usable_edges

    @property
    def usable_qubits(self) -> List[int]:
        return [q for q in range(self.n_qubits) if q not in self.dead_qubits]

    def to_networkx(self) -> nx.Graph:
        """Graphe networkx restreint aux qubits et coupleurs utilisables"""
        graph = nx.Graph()
        graph.add_nodes_from(self.usable_qubits)
        graph.add_edges_from(self._usable_edges)
        return graph

    def max_degree(self) -> int:
        degrees = self.to_networkx().degree()
        return max((d for _, d in degrees), default=0)

    def qubit(self, row: int, col: int, side: int, k: int) -> int:
        """Index linéaire d'un qubit de la grille Chimera"""
        if self.shape is None:
            raise InvalidInputError("Graphe matériel sans forme Chimera")
        rows, cols, shore = self.shape
        if not (0 <= row < rows and 0 <= col < cols and side in (0, 1) and 0 <= k < shore):
            raise InvalidIdError(f"Coordonnées Chimera invalides: {(row, col, side, k)}")
        return chimera_index(row, col, side, k, cols, shore)


def chimera_index(row: int, col: int, side: int, k: int, cols: int, shore: int) -> int:
    return ((row * cols + col) * 2 + side) * shore + k


def chimera_edges(rows: int, cols: int, shore: int) -> Set[Edge]:
    """Couplages d'une grille Chimera complète (sans défauts)"""
    edges = set()

    # Couplages internes : biparti complet entre les deux rives
    for r, c, i, j in product(range(rows), range(cols), range(shore), range(shore)):
        edges.add((chimera_index(r, c, 0, i, cols, shore), chimera_index(r, c, 1, j, cols, shore)))

    # Couplages horizontaux entre cellules voisines (rive 1)
    for r, c, k in product(range(rows), range(cols - 1), range(shore)):
        edges.add((chimera_index(r, c, 1, k, cols, shore), chimera_index(r, c + 1, 1, k, cols, shore)))

    # Couplages verticaux entre cellules voisines (rive 0)
    for r, c, k in product(range(rows - 1), range(cols), range(shore)):
        edges.add((chimera_index(r, c, 0, k, cols, shore), chimera_index(r + 1, c, 0, k, cols, shore)))

    return edges


def build_chimera(rows: int, cols: int, shore: int = DEFAULT_SHORE,
                  dead: Iterable[int] = (), dead_couplers: Iterable[Edge] = ()) -> HardwareGraph:
    """
    Construit un graphe matériel Chimera rows×cols

    Args:
        rows: Nombre de lignes de cellules
        cols: Nombre de colonnes de cellules
        shore: Nombre de qubits par rive d'une cellule
        dead: Qubits hors service
        dead_couplers: Coupleurs hors service

    Returns:
        Graphe matériel dont les qubits utilisables ont un degré ≤ shore + 2
    """
    if rows < 1 or cols < 1 or shore < 1:
        raise InvalidSizeError(f"Grille Chimera invalide: rows={rows}, cols={cols}, shore={shore}")

    n_qubits = 2 * shore * rows * cols
    hardware = HardwareGraph(
        n_qubits=n_qubits,
        edges=frozenset(chimera_edges(rows, cols, shore)),
        dead_qubits=frozenset(dead),
        dead_couplers=frozenset(tuple(c) for c in dead_couplers),
        shape=(rows, cols, shore),
    )
    logger.debug(f"Chimera {rows}x{cols} (shore={shore}): {len(hardware.usable_qubits)} qubits utilisables, "
                 f"{len(hardware.usable_edges)} coupleurs")
    return hardware


def grid_for(n_nodes: int, shore: int = DEFAULT_SHORE) -> Tuple[int, int]:
    """
    Plus petite grille quasi carrée dont les qubits couvrent n_nodes

    Returns:
        (rows, cols)
    """
    if n_nodes < 1:
        raise InvalidSizeError(f"Nombre de nœuds invalide: {n_nodes}")
    cells = math.ceil(n_nodes / (2 * shore))
    cols = math.ceil(math.sqrt(cells))
    rows = math.ceil(cells / cols)
    return rows, cols


def _cells_by_shell(rows: int, cols: int) -> List[Tuple[int, int]]:
    # Carrés emboîtés depuis l'origine : (0,0), puis la couronne de côté 2, etc.
    return sorted(product(range(rows), range(cols)), key=lambda rc: (max(rc), rc[0], rc[1]))


def build_chimera_logical(n_nodes: int, shore: int = DEFAULT_SHORE,
                          hardware: Optional[HardwareGraph] = None) -> LogicalGraph:
    """
    Graphe logique natif Chimera à n_nodes nœuds

    Sans graphe matériel, la grille est agrandie jusqu'à couvrir n_nodes.
    Avec un graphe matériel, les nœuds sont pris parmi ses qubits utilisables
    et native_qubits enregistre le placement 1-1.

    Args:
        n_nodes: Nombre de variables logiques
        shore: Qubits par rive (ignoré si hardware est fourni)
        hardware: Graphe matériel Chimera cible (facultatif)

    Returns:
        Sous-graphe induit, renuméroté 0..n_nodes-1
    """
    native = hardware is not None
    if hardware is None:
        rows, cols = grid_for(n_nodes, shore)
        hardware = build_chimera(rows, cols, shore)
    elif hardware.shape is None:
        raise InvalidInputError("Le graphe matériel doit être une grille Chimera")

    rows, cols, shore = hardware.shape
    dead = hardware.dead_qubits

    # Rives alternées dans chaque cellule pour qu'une cellule partielle reste connexe
    chosen: List[int] = []
    for r, c in _cells_by_shell(rows, cols):
        for k, side in product(range(shore), (0, 1)):
            q = chimera_index(r, c, side, k, cols, shore)
            if q not in dead:
                chosen.append(q)
            if len(chosen) == n_nodes:
                break
        if len(chosen) == n_nodes:
            break

    if len(chosen) < n_nodes:
        raise InvalidSizeError(f"Seulement {len(chosen)} qubits utilisables pour {n_nodes} nœuds")

    relabel: Dict[int, int] = {q: i for i, q in enumerate(chosen)}
    edges = frozenset(
        (relabel[a], relabel[b]) for a, b in hardware.usable_edges
        if a in relabel and b in relabel
    )
    return LogicalGraph(n_nodes, edges, native_qubits=tuple(chosen) if native else None)

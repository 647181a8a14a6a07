"""
Plongement mineur des graphes logiques dans le graphe matériel par chaînes de qubits,
et décodage des chaînes par vote majoritaire.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Set, Tuple

import networkx as nx
import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import dijkstra

from src.topology.chimera import HardwareGraph, chimera_index
from src.topology.graphs import LogicalGraph, build_bipartite, build_complete
from src.utils.aan_errors import (
    EmbeddingError,
    EmbeddingFailureError,
    InvalidInputError,
)

# Configuration du logging
logger = logging.getLogger("aan_embedding")

# Couplage de chaîne le plus fort sur l'échelle normalisée (convention matérielle)
DEFAULT_CHAIN_STRENGTH = -1.0
DEFAULT_EMBEDDING_TRIES = 20
DEFAULT_EMBEDDING_PASSES = 50
# Plafond de la pénalité de recouvrement : 2^10 par chaîne en trop
_MAX_PENALTY_EXPONENT = 10


@dataclass(frozen=True)
class Embedding:
    """Chaînes de qubits représentant chaque variable logique"""
    chains: Dict[int, Tuple[int, ...]]
    # Convention matérielle : une valeur négative verrouille la chaîne (ferromagnétique)
    chain_strength: float = DEFAULT_CHAIN_STRENGTH

    @property
    def qubits(self) -> List[int]:
        return sorted(q for chain in self.chains.values() for q in chain)

    @property
    def max_chain_length(self) -> int:
        return max(len(chain) for chain in self.chains.values())

    @property
    def n_qubits_used(self) -> int:
        return sum(len(chain) for chain in self.chains.values())


def validate_embedding(embedding: Embedding, logical: LogicalGraph, hardware: HardwareGraph) -> None:
    """
    Vérifie les invariants d'un plongement

    Chaînes non vides, disjointes, composées de qubits utilisables, connexes dans
    le graphe matériel, et chaque arête logique couverte par au moins un coupleur.

    Raises:
        EmbeddingError: si un invariant est violé
    """
    if sorted(embedding.chains) != list(range(logical.n_nodes)):
        raise EmbeddingError("Les chaînes doivent couvrir exactement les nœuds logiques")

    graph = hardware.to_networkx()
    owner: Dict[int, int] = {}
    for node, chain in embedding.chains.items():
        if not chain:
            raise EmbeddingError(f"Chaîne vide pour le nœud {node}")
        for q in chain:
            if q not in graph:
                raise EmbeddingError(f"Qubit {q} inutilisable dans la chaîne du nœud {node}")
            if q in owner:
                raise EmbeddingError(f"Qubit {q} partagé par les nœuds {owner[q]} et {node}")
            owner[q] = node
        if not nx.is_connected(graph.subgraph(chain)):
            raise EmbeddingError(f"Chaîne non connexe pour le nœud {node}: {chain}")

    covered = set()
    for a, b in graph.edges():
        if a in owner and b in owner and owner[a] != owner[b]:
            covered.add((min(owner[a], owner[b]), max(owner[a], owner[b])))
    missing = [edge for edge in logical.edge_list if edge not in covered]
    if missing:
        raise EmbeddingError(f"Arêtes logiques non couvertes: {missing[:5]}")


def _identity_candidate(logical: LogicalGraph, hardware: HardwareGraph) -> Optional[Dict[int, Tuple[int, ...]]]:
    usable = set(hardware.usable_edges)
    dead = hardware.dead_qubits

    if logical.native_qubits is not None:
        placement = logical.native_qubits
    elif logical.n_nodes <= hardware.n_qubits:
        placement = tuple(range(logical.n_nodes))
    else:
        return None

    if any(q >= hardware.n_qubits or q in dead for q in placement):
        return None
    for i, j in logical.edges:
        a, b = placement[i], placement[j]
        if (min(a, b), max(a, b)) not in usable:
            return None
    return {i: (q,) for i, q in enumerate(placement)}


def _placement_order(logical: LogicalGraph, rng: np.random.Generator) -> List[int]:
    """Ordre glouton : le nœud suivant est celui qui a le plus de voisins déjà placés"""
    graph = logical.to_networkx()
    remaining = set(range(logical.n_nodes))
    placed_neighbors = {n: 0 for n in remaining}
    order = []
    while remaining:
        best = max(placed_neighbors[n] for n in remaining)
        candidates = sorted(n for n in remaining if placed_neighbors[n] == best)
        node = int(candidates[rng.integers(len(candidates))])
        order.append(node)
        remaining.discard(node)
        for neighbor in graph.neighbors(node):
            if neighbor in remaining:
                placed_neighbors[neighbor] += 1
    return order


def _coupler_matrix(hardware: HardwareGraph) -> sparse.csr_matrix:
    """Matrice d'adjacence creuse (symétrique) des coupleurs utilisables"""
    edges = np.array(sorted(hardware.usable_edges), dtype=np.int64).reshape(-1, 2)
    rows = np.concatenate([edges[:, 0], edges[:, 1]])
    cols = np.concatenate([edges[:, 1], edges[:, 0]])
    return sparse.csr_matrix((np.ones(len(rows)), (rows, cols)),
                             shape=(hardware.n_qubits, hardware.n_qubits))


def _route_chain(placed: List[Tuple[int, ...]], couplers: sparse.csr_matrix, weights: np.ndarray,
                 usable: np.ndarray, rng: np.random.Generator) -> Optional[Set[int]]:
    """
    Chaîne d'un nœud : une racine reliée à chaque chaîne voisine par un plus court chemin

    Entrer dans un qubit coûte son poids. Les qubits des autres chaînes restent
    accessibles mais pénalisés; seuls ceux des chaînes voisines sont exclus de la racine.

    Args:
        placed: Chaînes des voisins déjà placés
        couplers: Matrice d'adjacence des coupleurs utilisables
        weights: Coût d'entrée de chaque qubit
        usable: Masque des qubits utilisables
        rng: Générateur aléatoire

    Returns:
        Ensemble de qubits connexe, ou None si une chaîne voisine est inaccessible
    """
    if not placed:
        candidates = np.flatnonzero(usable)
        costs = weights[candidates]
        return {int(rng.choice(candidates[costs == costs.min()]))}

    # Arc a -> b pondéré par le poids du qubit d'arrivée b
    weighted = sparse.csr_matrix((weights[couplers.indices], couplers.indices, couplers.indptr),
                                 shape=couplers.shape)
    # Le poids de la racine n'est compté qu'une fois
    total = (1 - len(placed)) * weights
    blocked = ~usable
    parents = []
    for chain in placed:
        distance, parent, _ = dijkstra(weighted, indices=list(chain), return_predecessors=True, min_only=True)
        total = total + distance
        blocked[list(chain)] = True
        parents.append(parent)
    total[blocked] = np.inf

    best = total.min()
    if not np.isfinite(best):
        return None
    root = int(rng.choice(np.flatnonzero(total == best)))

    routed = {root}
    for chain, parent in zip(placed, parents):
        members = set(chain)
        q = root
        while q not in members:
            routed.add(q)
            q = int(parent[q])
    return routed


def _rip_up_attempt(logical: LogicalGraph, couplers: sparse.csr_matrix, usable: np.ndarray,
                    rng: np.random.Generator,
                    max_passes: int = DEFAULT_EMBEDDING_PASSES) -> Optional[Dict[int, Tuple[int, ...]]]:
    """
    Une tentative de plongement par arrachage et reroutage des chaînes

    Premier passage : chaque nœud est routé vers ses voisins déjà placés, les
    recouvrements de qubits étant permis mais pénalisés. Passages suivants : chaque
    chaîne est arrachée puis reroutée avec une pénalité de recouvrement croissante,
    jusqu'à ce qu'aucun qubit ne soit partagé.

    Returns:
        Chaînes disjointes, ou None si le budget de passages est épuisé
    """
    graph = logical.to_networkx()
    neighbors = {v: sorted(graph.neighbors(v)) for v in range(logical.n_nodes)}
    usage = np.zeros(couplers.shape[0], dtype=np.int64)
    chains: Dict[int, Tuple[int, ...]] = {}

    order = _placement_order(logical, rng)
    for sweep in range(max_passes):
        base = 2.0 ** min(sweep + 1, _MAX_PENALTY_EXPONENT)
        for node in order:
            if node in chains:
                usage[list(chains[node])] -= 1
            placed = [chains[nb] for nb in neighbors[node] if nb in chains]
            routed = _route_chain(placed, couplers, base ** usage, usable, rng)
            if routed is None:
                return None
            chains[node] = tuple(sorted(routed))
            usage[list(chains[node])] += 1

        overlap = int(np.count_nonzero(usage > 1))
        if overlap == 0:
            return chains
        logger.debug(f"Passage {sweep + 1}: {overlap} qubits partagés")
        order = [int(v) for v in rng.permutation(logical.n_nodes)]
    return None


def embed(logical: LogicalGraph, hardware: HardwareGraph, rng: np.random.Generator,
          chain_strength: float = DEFAULT_CHAIN_STRENGTH,
          max_tries: int = DEFAULT_EMBEDDING_TRIES) -> Embedding:
    """
    Plonge un graphe logique dans le graphe matériel

    Essaie d'abord le placement identité (étiquettes ou native_qubits), puis
    un routage de chaînes par plus courts chemins avec arrachage et reroutage,
    relancé depuis un ordre aléatoire à chaque tentative.

    Args:
        logical: Graphe logique
        hardware: Graphe matériel
        rng: Générateur aléatoire
        chain_strength: Couplage intra-chaîne (convention matérielle)
        max_tries: Budget de redémarrages de l'heuristique

    Returns:
        Plongement validé

    Raises:
        EmbeddingFailureError: si aucun plongement n'est trouvé dans le budget
    """
    usable = hardware.usable_qubits
    if len(usable) < logical.n_nodes:
        raise EmbeddingFailureError(
            f"{len(usable)} qubits utilisables pour {logical.n_nodes} variables logiques"
        )

    identity = _identity_candidate(logical, hardware)
    if identity is not None:
        embedding = Embedding(identity, chain_strength)
        validate_embedding(embedding, logical, hardware)
        logger.info(f"Plongement identité de {logical.n_nodes} nœuds (chaînes de longueur 1)")
        return embedding

    couplers = _coupler_matrix(hardware)
    mask = np.zeros(hardware.n_qubits, dtype=bool)
    mask[usable] = True
    for attempt in range(1, max_tries + 1):
        chains = _rip_up_attempt(logical, couplers, mask, rng)
        if chains is None:
            logger.debug(f"Tentative de plongement {attempt}/{max_tries} échouée")
            continue
        embedding = Embedding(chains, chain_strength)
        validate_embedding(embedding, logical, hardware)
        logger.info(f"Plongement trouvé (tentative {attempt}): {embedding.n_qubits_used} qubits, "
                    f"chaîne max {embedding.max_chain_length}")
        return embedding

    raise EmbeddingFailureError(f"Aucun plongement trouvé en {max_tries} tentatives "
                                f"({logical.n_nodes} nœuds, {logical.n_edges} arêtes)")


def embed_bipartite_grid(n_a: int, n_b: int, hardware: HardwareGraph,
                         origin: Tuple[int, int] = (0, 0),
                         chain_strength: float = DEFAULT_CHAIN_STRENGTH) -> Embedding:
    """
    Plongement en grille d'un graphe biparti complet K_{n_a, n_b} sur Chimera

    Le nœud i de la partie A occupe la rive horizontale (position i % shore) d'une
    ligne de cellules, le nœud j de la partie B la rive verticale d'une colonne de
    cellules; chaque paire (A, B) se rencontre dans la cellule à l'intersection.

    Args:
        n_a: Taille de la partie A (nœuds 0..n_a-1)
        n_b: Taille de la partie B (nœuds n_a..n_a+n_b-1)
        hardware: Graphe matériel Chimera
        origin: Cellule (ligne, colonne) du coin supérieur gauche du bloc
        chain_strength: Couplage intra-chaîne (convention matérielle)

    Returns:
        Plongement validé

    Raises:
        EmbeddingFailureError: bloc hors de la grille ou touchant un qubit/coupleur mort
    """
    if hardware.shape is None:
        raise InvalidInputError("Le plongement en grille requiert un graphe Chimera")
    rows, cols, shore = hardware.shape
    r0, c0 = origin
    block_rows = math.ceil(n_a / shore)
    block_cols = math.ceil(n_b / shore)
    if r0 < 0 or c0 < 0 or r0 + block_rows > rows or c0 + block_cols > cols:
        raise EmbeddingFailureError(f"Bloc {block_rows}x{block_cols} à l'origine {origin} hors de la grille {rows}x{cols}")

    chains: Dict[int, Tuple[int, ...]] = {}
    for i in range(n_a):
        r, k = r0 + i // shore, i % shore
        chains[i] = tuple(chimera_index(r, c, 1, k, cols, shore) for c in range(c0, c0 + block_cols))
    for j in range(n_b):
        c, k = c0 + j // shore, j % shore
        chains[n_a + j] = tuple(chimera_index(r, c, 0, k, cols, shore) for r in range(r0, r0 + block_rows))

    embedding = Embedding(chains, chain_strength)
    try:
        validate_embedding(embedding, build_bipartite(n_a, n_b), hardware)
    except EmbeddingError as e:
        raise EmbeddingFailureError(f"Plongement en grille impossible à l'origine {origin}: {e}") from e
    return embedding


def embed_clique_grid(n_nodes: int, hardware: HardwareGraph,
                      origin: Tuple[int, int] = (0, 0),
                      chain_strength: float = DEFAULT_CHAIN_STRENGTH) -> Embedding:
    """
    Plongement natif d'un graphe complet K_n dans un bloc m×m de cellules Chimera

    Le nœud v = i·shore + k occupe la rive horizontale (position k) des cellules
    (i, 0..i) du bloc et la rive verticale des cellules (i..m-1, i); les deux
    moitiés se rejoignent dans la cellule diagonale. Chaînes de longueur m + 1.

    Args:
        n_nodes: Taille du graphe complet
        hardware: Graphe matériel Chimera
        origin: Cellule (ligne, colonne) du coin supérieur gauche du bloc
        chain_strength: Couplage intra-chaîne (convention matérielle)

    Returns:
        Plongement validé

    Raises:
        EmbeddingFailureError: bloc hors de la grille ou touchant un qubit/coupleur mort
    """
    if hardware.shape is None:
        raise InvalidInputError("Le plongement de clique requiert un graphe Chimera")
    rows, cols, shore = hardware.shape
    r0, c0 = origin
    m = math.ceil(n_nodes / shore)
    if r0 < 0 or c0 < 0 or r0 + m > rows or c0 + m > cols:
        raise EmbeddingFailureError(f"Bloc {m}x{m} à l'origine {origin} hors de la grille {rows}x{cols}")

    chains: Dict[int, Tuple[int, ...]] = {}
    for v in range(n_nodes):
        i, k = divmod(v, shore)
        horizontal = [chimera_index(r0 + i, c0 + c, 1, k, cols, shore) for c in range(i + 1)]
        vertical = [chimera_index(r0 + r, c0 + i, 0, k, cols, shore) for r in range(i, m)]
        chains[v] = tuple(sorted(horizontal + vertical))

    embedding = Embedding(chains, chain_strength)
    try:
        validate_embedding(embedding, build_complete(n_nodes), hardware)
    except EmbeddingError as e:
        raise EmbeddingFailureError(f"Plongement de clique impossible à l'origine {origin}: {e}") from e
    return embedding


def decode_majority(chain_states: Sequence[int], rng: np.random.Generator) -> int:
    """
    Valeur logique d'une chaîne par vote majoritaire, pile ou face en cas d'égalité

    Args:
        chain_states: Spins ±1 des qubits de la chaîne
        rng: Générateur aléatoire

    Returns:
        Spin logique (-1 ou +1)
    """
    if len(chain_states) == 0:
        raise InvalidInputError("Chaîne vide")
    total = int(np.sum(chain_states))
    if total > 0:
        return 1
    if total < 0:
        return -1
    return 1 if rng.random() < 0.5 else -1


def decode_samples(samples: np.ndarray, chains: Sequence[Sequence[int]],
                   rng: np.random.Generator) -> Tuple[np.ndarray, float]:
    """
    Vote majoritaire vectorisé sur une matrice d'échantillons matériels

    Args:
        samples: Matrice m × n_qubits de spins ±1
        chains: Colonnes de chaque chaîne, dans l'ordre des nœuds logiques
        rng: Générateur aléatoire (égalités)

    Returns:
        (échantillons logiques m × n_logical, fraction de chaînes brisées)
    """
    m = samples.shape[0]
    decoded = np.empty((m, len(chains)), dtype=np.int8)
    broken = 0
    for node, chain in enumerate(chains):
        columns = samples[:, list(chain)]
        total = columns.sum(axis=1, dtype=np.int64)
        broken += int(np.count_nonzero(np.abs(total) != len(chain)))
        values = np.sign(total)
        ties = values == 0
        if np.any(ties):
            values[ties] = np.where(rng.random(int(ties.sum())) < 0.5, 1, -1)
        decoded[:, node] = values
    fraction = broken / float(m * len(chains)) if m else 0.0
    return decoded, fraction

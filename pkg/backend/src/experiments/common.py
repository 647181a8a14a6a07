"""
Éléments partagés par les expériences : données MNIST, graphe latent,
plongements en grille et échantillonneur configuré.
"""

import logging
import math
from typing import Optional, Tuple

from src.config.settings import RunConfig
from src.dataset.image_cache import ImageSetCache
from src.dataset.image_set import ImageSet
from src.dataset.mnist import load_mnist
from src.dataset.transforms import to_signed
from src.sampling.samplers import KIND_ALIASES, build_sampler, hardware_from_config
from src.topology.chimera import HardwareGraph
from src.topology.embedding import Embedding, embed_bipartite_grid, embed_clique_grid
from src.topology.factory import build_topology
from src.topology.graphs import LogicalGraph
from src.utils.aan_errors import ConfigError, EmbeddingFailureError
from src.utils.aan_utils import rng_for

# Configuration du logging
logger = logging.getLogger("aan_experiments")


def canonical_sampler(kind: str) -> str:
    return KIND_ALIASES.get(kind, kind)


def check_exact_feasible(kind: str, n_nodes: int, cap: int) -> None:
    """Refuse l'échantillonneur exact au-delà du plafond d'énumération"""
    if canonical_sampler(kind) == "exact" and n_nodes > cap:
        raise ConfigError(f"Échantillonneur exact impossible pour {n_nodes} nœuds (plafond {cap})")


def image_cache(config: RunConfig) -> ImageSetCache:
    return ImageSetCache(config.data.cache_dir, prefix="mnist")


def signed_mnist(config: RunConfig, split: str, count: Optional[int] = None) -> ImageSet:
    """Partition MNIST en valeurs signées [-1, 1], tronquée à `count` images"""
    images = to_signed(load_mnist(config.data.data_dir, split, image_cache(config)))
    return images.take(count) if count is not None else images


def grid_origin(block: int, hardware: HardwareGraph, index: int) -> Tuple[int, int]:
    """Origine du bloc de cellules pour la graine `index`, déplacée le long de la diagonale"""
    rows, cols, _ = hardware.shape
    span = max(1, min(rows, cols) - block + 1)
    offset = index % span
    return offset, offset


def grid_embedding(kind: str, graph: LogicalGraph, hardware: HardwareGraph,
                   index: int = 0, chain_strength: float = -1.0) -> Optional[Embedding]:
    """
    Plongement structuré d'une topologie nommée, variant avec `index`

    Args:
        kind: Topologie du graphe logique
        graph: Graphe logique
        hardware: Graphe matériel Chimera
        index: Indice de graine (déplace le bloc utilisé)
        chain_strength: Couplage intra-chaîne (convention matérielle)

    Returns:
        Plongement, ou None pour laisser l'heuristique générale choisir
        (topologie chimera placée nativement, bloc impossible)
    """
    if hardware.shape is None or kind == "chimera":
        return None
    shore = hardware.shape[2]
    try:
        if kind == "complete":
            block = math.ceil(graph.n_nodes / shore)
            return embed_clique_grid(graph.n_nodes, hardware, grid_origin(block, hardware, index),
                                     chain_strength=chain_strength)
        if kind == "bipartite":
            n_a = graph.n_nodes // 2
            block = math.ceil(max(n_a, graph.n_nodes - n_a) / shore)
            return embed_bipartite_grid(n_a, graph.n_nodes - n_a, hardware,
                                        grid_origin(block, hardware, index),
                                        chain_strength=chain_strength)
    except EmbeddingFailureError as e:
        logger.warning(f"Plongement en grille indisponible ({e}), recours à l'heuristique générale")
    return None


def latent_setup(config: RunConfig, kind: str, topology: str, n_nodes: int,
                 index: int = 0, rng_key: str = "embedding") -> Tuple[LogicalGraph, object]:
    """
    Graphe logique et échantillonneur d'une exécution

    Avec le substitut du recuit, la topologie chimera est placée nativement sur le
    graphe matériel et les topologies complete et bipartite reçoivent un
    plongement en grille; l'heuristique générale prend le relais en cas d'échec.

    Args:
        config: Configuration complète
        kind: Type d'échantillonneur
        topology: Topologie du graphe logique
        n_nodes: Nombre de nœuds
        index: Indice de graine (plongement et flux aléatoire)
        rng_key: Nom du flux aléatoire de la recherche de plongement

    Returns:
        (graphe logique, échantillonneur)
    """
    kind = canonical_sampler(kind)
    check_exact_feasible(kind, n_nodes, config.train.enumeration_cap)

    hardware_graph = hardware_from_config(config.hardware) if kind == "annealer_surrogate" else None
    graph = build_topology(topology, n_nodes, config.hardware.shore,
                           hardware=hardware_graph if topology == "chimera" else None)

    embedding = None
    if hardware_graph is not None:
        embedding = grid_embedding(topology, graph, hardware_graph, index, config.hardware.chain_strength)

    sampler = build_sampler(
        kind,
        gibbs=config.gibbs,
        hardware=config.hardware,
        beta=config.gibbs.beta,
        cap=config.train.enumeration_cap,
        embedding=embedding,
        hardware_graph=hardware_graph,
        embedding_rng=rng_for(config.seed, rng_key, topology, index),
    )
    return graph, sampler
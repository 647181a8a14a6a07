"""
Substitut classique du recuit matériel : le modèle logique est plongé dans le graphe
matériel (chaînes de qubits), le modèle matériel est échantillonné par Gibbs,
puis chaque variable logique est décodée par vote majoritaire sur sa chaîne.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np

from src.config.settings import GibbsConfig
from src.ising.ising_model import IsingModel
from src.sampling.gibbs import run_gibbs
from src.sampling.sample_set import SampleOrigin, SampleSet
from src.topology.chimera import HardwareGraph
from src.topology.embedding import Embedding, decode_samples, validate_embedding
from src.topology.graphs import LogicalGraph
from src.utils.aan_errors import EmbeddingError

# Configuration du logging
logger = logging.getLogger("aan_surrogate")

# Plage normalisée des biais et couplages matériels
HARDWARE_RANGE = 1.0
# Seuil d'avertissement sur la fraction de chaînes brisées
CHAIN_BREAK_WARNING = 0.10


@dataclass(frozen=True, eq=False)
class ChainLayout:
    """Structure d'un plongement, indépendante des valeurs des paramètres"""
    n_logical: int
    qubits: Tuple[int, ...]
    # Chaînes en indices compacts (qubits renumérotés 0..q-1), dans l'ordre des nœuds logiques
    chains: List[Tuple[int, ...]]
    # Coupleur choisi pour chaque arête logique, en indices compacts
    logical_couplers: Dict[Tuple[int, int], Tuple[int, int]]
    chain_couplers: List[Tuple[int, int]]
    chain_strength: float


@dataclass(frozen=True, eq=False)
class EmbeddedModel:
    """Modèle matériel restreint aux qubits des chaînes"""
    model: IsingModel
    layout: ChainLayout
    # Facteur appliqué aux paramètres logiques (1.0 sans mise à l'échelle)
    scale: float


def build_layout(logical: LogicalGraph, embedding: Embedding, hardware: HardwareGraph) -> ChainLayout:
    """
    Valide un plongement et choisit les coupleurs matériels

    Chaque arête logique utilise le premier coupleur (ordre trié) reliant les deux
    chaînes; tous les coupleurs internes d'une chaîne servent au verrouillage.

    Raises:
        EmbeddingError: si le plongement est invalide
    """
    validate_embedding(embedding, logical, hardware)
    qubits = tuple(embedding.qubits)
    compact = {q: k for k, q in enumerate(qubits)}
    owner = {q: node for node, chain in embedding.chains.items() for q in chain}

    logical_couplers: Dict[Tuple[int, int], Tuple[int, int]] = {}
    chain_couplers: List[Tuple[int, int]] = []
    for a, b in sorted(hardware.usable_edges):
        if a not in owner or b not in owner:
            continue
        na, nb = owner[a], owner[b]
        if na == nb:
            chain_couplers.append((compact[a], compact[b]))
        else:
            key = (min(na, nb), max(na, nb))
            if key in logical.edges and key not in logical_couplers:
                logical_couplers[key] = (compact[a], compact[b])

    chains = [tuple(compact[q] for q in embedding.chains[node]) for node in range(logical.n_nodes)]
    return ChainLayout(logical.n_nodes, qubits, chains, logical_couplers, chain_couplers,
                       embedding.chain_strength)


def embed_model(model: IsingModel, layout: ChainLayout, auto_scale: bool = True) -> EmbeddedModel:
    """
    Construit le modèle d'Ising matériel d'un modèle logique plongé

    Le biais logique est réparti à parts égales sur les qubits de la chaîne, les
    coupleurs internes reçoivent -chain_strength (convention interne).

    Args:
        model: Modèle logique
        layout: Structure du plongement (build_layout)
        auto_scale: Ramener les paramètres logiques dans la plage matérielle

    Returns:
        Modèle matériel compact
    """
    if model.n_nodes != layout.n_logical:
        raise EmbeddingError(f"Plongement de {layout.n_logical} nœuds pour un modèle à {model.n_nodes} nœuds")

    biases = np.zeros(len(layout.qubits))
    for node, chain in enumerate(layout.chains):
        biases[list(chain)] = model.biases[node] / len(chain)

    logical_couplings: Dict[Tuple[int, int], float] = {}
    for edge, value in zip(model.graph.edge_list, model.couplings):
        if edge not in layout.logical_couplers:
            raise EmbeddingError(f"Aucun coupleur entre les chaînes des nœuds {edge[0]} et {edge[1]}")
        logical_couplings[layout.logical_couplers[edge]] = float(value)

    scale = 1.0
    if auto_scale:
        largest = max(
            float(np.max(np.abs(biases), initial=0.0)),
            max((abs(v) for v in logical_couplings.values()), default=0.0),
        )
        if largest > HARDWARE_RANGE:
            scale = HARDWARE_RANGE / largest
            logger.debug(f"Paramètres logiques réduits d'un facteur {scale:.4f} (plage matérielle)")

    couplings = {edge: scale * value for edge, value in logical_couplings.items()}
    for edge in layout.chain_couplers:
        couplings[edge] = -layout.chain_strength

    graph = LogicalGraph(len(layout.qubits), frozenset(couplings))
    hardware_model = IsingModel.from_dicts(graph, dict(enumerate(scale * biases)), couplings)
    return EmbeddedModel(hardware_model, layout, scale)


def sample_annealer_surrogate(model: IsingModel, embedding: Embedding, config: GibbsConfig, m: int,
                              rng: np.random.Generator, hardware: HardwareGraph,
                              auto_scale: bool = True) -> SampleSet:
    """
    Échantillonne un modèle logique à travers son plongement matériel

    Args:
        model: Modèle logique
        embedding: Plongement du graphe logique dans hardware
        config: Paramètres de Gibbs appliqués au modèle matériel (beta inclus)
        m: Nombre d'échantillons (≥ 1)
        rng: Générateur aléatoire
        hardware: Graphe matériel
        auto_scale: Ramener les paramètres logiques dans la plage matérielle

    Returns:
        SampleSet décodé d'origine "annealer_surrogate", avec la fraction de chaînes brisées

    Raises:
        EmbeddingError: si le plongement est invalide pour ce modèle
    """
    layout = build_layout(model.graph, embedding, hardware)
    samples = sample_embedded(embed_model(model, layout, auto_scale), config, m, rng)
    if samples.chain_break_fraction > CHAIN_BREAK_WARNING:
        logger.warning(f"{samples.chain_break_fraction:.1%} de chaînes brisées (chain_strength={embedding.chain_strength})")
    return samples


def sample_embedded(embedded: EmbeddedModel, config: GibbsConfig, m: int, rng: np.random.Generator) -> SampleSet:
    """Gibbs sur le modèle matériel puis vote majoritaire par chaîne"""
    raw, _ = run_gibbs(embedded.model, config, m, rng)
    decoded, broken = decode_samples(raw, embedded.layout.chains, rng)
    logger.debug(f"Fraction de chaînes brisées: {broken:.3f}")
    return SampleSet(decoded, SampleOrigin.ANNEALER_SURROGATE, chain_break_fraction=broken)

"""
Échantillonneurs derrière une interface commune : sample(model, m, rng) et
estimate_moments(model, m, rng).
"""

import logging
from typing import Dict, Optional, Tuple

import numpy as np

from src.config.settings import GibbsConfig, HardwareConfig
from src.ising.exact import DEFAULT_ENUMERATION_CAP, check_beta, exact_distribution
from src.ising.ising_model import IsingModel
from src.ising.moments import Moments, moments
from src.sampling.exact_sampler import sample_exact
from src.sampling.gibbs import run_gibbs
from src.sampling.sample_set import SampleOrigin, SampleSet
from src.sampling.surrogate import CHAIN_BREAK_WARNING, ChainLayout, build_layout, embed_model, sample_embedded
from src.topology.chimera import HardwareGraph, build_chimera
from src.topology.embedding import Embedding, embed
from src.topology.graphs import LogicalGraph
from src.utils.aan_errors import ConfigError, InvalidInputError

# Configuration du logging
logger = logging.getLogger("aan_sampler")

# Alias acceptés sur la ligne de commande
KIND_ALIASES = {"surrogate": "annealer_surrogate"}


class ExactSampler:
    """Tirage exact; les moments estimés sont les espérances analytiques"""
    origin = SampleOrigin.EXACT

    def __init__(self, beta: float = 1.0, cap: int = DEFAULT_ENUMERATION_CAP):
        self.beta = check_beta(beta)
        self.cap = cap

    def sample(self, model: IsingModel, m: int, rng: np.random.Generator) -> SampleSet:
        return sample_exact(model, self.beta, m, rng, self.cap)

    def estimate_moments(self, model: IsingModel, m: int, rng: np.random.Generator) -> Moments:
        return moments(exact_distribution(model, self.beta, self.cap))

    def detached(self) -> "ExactSampler":
        return self


class GibbsSampler:
    """
    Échantillonneur de Gibbs

    Avec config.persistent, les chaînes finales sont conservées par graphe
    (nœuds et arêtes) et reprises à l'appel suivant sans nouvelle chauffe : les
    modèles successifs d'un même entraînement partagent leurs chaînes, deux
    graphes distincts jamais.
    """
    origin = SampleOrigin.GIBBS

    def __init__(self, config: Optional[GibbsConfig] = None):
        self.config = config or GibbsConfig()
        self._chains: Dict[Tuple[int, frozenset], np.ndarray] = {}

    @staticmethod
    def chain_key(graph: LogicalGraph) -> Tuple[int, frozenset]:
        return graph.n_nodes, graph.edges

    def chains_for(self, graph: LogicalGraph) -> Optional[np.ndarray]:
        """Chaînes persistantes du graphe (copie), None si aucune"""
        chains = self._chains.get(self.chain_key(graph))
        return None if chains is None else chains.copy()

    def restore_chains(self, graph: LogicalGraph, chains: np.ndarray) -> None:
        """Réinstalle des chaînes sauvegardées (reprise d'un entraînement)"""
        chains = np.asarray(chains, dtype=np.float64)
        if chains.ndim != 2 or chains.shape[1] != graph.n_nodes:
            raise InvalidInputError(f"Chaînes de forme {chains.shape} pour {graph.n_nodes} nœuds")
        self._chains[self.chain_key(graph)] = chains.copy()

    def detached(self) -> "GibbsSampler":
        """Échantillonneur sans chaînes persistantes, pour les tirages hors entraînement"""
        return GibbsSampler(self.config.model_copy(update={"persistent": False}))

    def sample(self, model: IsingModel, m: int, rng: np.random.Generator) -> SampleSet:
        key = self.chain_key(model.graph)
        initial = self._chains.get(key) if self.config.persistent else None
        burn_in = 0 if initial is not None else None
        states, final = run_gibbs(model, self.config, m, rng, initial=initial, burn_in=burn_in)
        # Un tirage plus court que n_chains ne remplace pas le jeu complet
        if self.config.persistent and final.shape[0] == self.config.n_chains:
            self._chains[key] = final
        return SampleSet(states, SampleOrigin.GIBBS)

    def estimate_moments(self, model: IsingModel, m: int, rng: np.random.Generator) -> Moments:
        return moments(self.sample(model, m, rng))

    def reset(self) -> None:
        self._chains.clear()


class AnnealerSurrogateSampler:
    """
    Substitut du recuit matériel

    Le plongement de chaque graphe logique est calculé au premier appel (ou fourni)
    puis réutilisé; last_chain_break_fraction suit le dernier tirage.
    """
    origin = SampleOrigin.ANNEALER_SURROGATE

    def __init__(self, hardware: HardwareGraph, config: Optional[GibbsConfig] = None,
                 chain_strength: float = -1.0, auto_scale: bool = True,
                 embedding_tries: int = 20, embedding: Optional[Embedding] = None,
                 embedding_rng: Optional[np.random.Generator] = None):
        self.hardware = hardware
        self.config = config or GibbsConfig()
        self.chain_strength = chain_strength
        self.auto_scale = auto_scale
        self.embedding_tries = embedding_tries
        self._embedding = embedding
        self._embedding_rng = embedding_rng
        self._layouts: Dict[Tuple[int, frozenset], ChainLayout] = {}
        self.last_chain_break_fraction: Optional[float] = None
        self._warned = False

    def layout_for(self, graph: LogicalGraph, rng: np.random.Generator) -> ChainLayout:
        key = (graph.n_nodes, graph.edges)
        if key not in self._layouts:
            embedding = self._embedding
            if embedding is None:
                embedding = embed(graph, self.hardware, self._embedding_rng or rng,
                                  self.chain_strength, self.embedding_tries)
            self._layouts[key] = build_layout(graph, embedding, self.hardware)
            logger.info(f"Plongement retenu: {len(self._layouts[key].qubits)} qubits "
                        f"pour {graph.n_nodes} variables logiques")
        return self._layouts[key]

    def sample(self, model: IsingModel, m: int, rng: np.random.Generator) -> SampleSet:
        embedded = embed_model(model, self.layout_for(model.graph, rng), self.auto_scale)
        samples = sample_embedded(embedded, self.config, m, rng)
        self.last_chain_break_fraction = samples.chain_break_fraction
        if samples.chain_break_fraction > CHAIN_BREAK_WARNING and not self._warned:
            logger.warning(f"{samples.chain_break_fraction:.1%} de chaînes brisées "
                           f"(chain_strength={self.chain_strength}), avertissement émis une seule fois")
            self._warned = True
        return samples

    def estimate_moments(self, model: IsingModel, m: int, rng: np.random.Generator) -> Moments:
        return moments(self.sample(model, m, rng))

    def detached(self) -> "AnnealerSurrogateSampler":
        """Sans chaînes persistantes : l'instance peut servir telle quelle"""
        return self


def hardware_from_config(config: HardwareConfig) -> HardwareGraph:
    return build_chimera(config.rows, config.cols, config.shore,
                         dead=config.dead_qubits,
                         dead_couplers=[tuple(pair) for pair in config.dead_couplers])


def build_sampler(kind: str, gibbs: Optional[GibbsConfig] = None,
                  hardware: Optional[HardwareConfig] = None,
                  beta: float = 1.0, cap: int = DEFAULT_ENUMERATION_CAP,
                  embedding: Optional[Embedding] = None,
                  hardware_graph: Optional[HardwareGraph] = None,
                  embedding_rng: Optional[np.random.Generator] = None):
    """
    Fabrique d'échantillonneurs

    Args:
        kind: "exact", "gibbs", "annealer_surrogate" (ou "surrogate")
        gibbs: Paramètres de Gibbs (gibbs et substitut)
        hardware: Paramètres du graphe matériel (substitut)
        beta: Température inverse de l'échantillonneur exact
        cap: Plafond d'énumération de l'échantillonneur exact
        embedding: Plongement imposé (substitut)
        hardware_graph: Graphe matériel déjà construit (substitut)
        embedding_rng: Générateur dédié à la recherche de plongement

    Returns:
        Échantillonneur

    Raises:
        ConfigError: si le type est inconnu
    """
    kind = KIND_ALIASES.get(kind, kind)
    if kind == "exact":
        return ExactSampler(beta, cap)
    if kind == "gibbs":
        return GibbsSampler(gibbs)
    if kind == "annealer_surrogate":
        hardware = hardware or HardwareConfig()
        graph = hardware_graph or hardware_from_config(hardware)
        return AnnealerSurrogateSampler(
            graph, gibbs,
            chain_strength=hardware.chain_strength,
            auto_scale=hardware.auto_scale,
            embedding_tries=hardware.embedding_tries,
            embedding=embedding,
            embedding_rng=embedding_rng,
        )
    raise ConfigError(f"Type d'échantillonneur inconnu: {kind}")

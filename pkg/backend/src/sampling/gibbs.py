"""
Échantillonneur de Gibbs vectorisé sur plusieurs chaînes.

Probabilité conditionnelle d'un spin : P(z_i = +1 | reste) = σ(2β (h_i + Σ_j J_ij z_j)).
Graphe biparti : mise à jour par blocs (chaque partie en parallèle).
Autres graphes : balayage site par site dans un ordre aléatoire renouvelé à chaque balayage.
"""

import logging
from typing import List, Optional, Tuple

import numpy as np
from scipy.special import expit

from src.config.settings import GibbsConfig
from src.ising.exact import check_beta
from src.ising.ising_model import IsingModel
from src.sampling.sample_set import SampleOrigin, SampleSet
from src.utils.aan_errors import InvalidParameterError, InvalidSizeError

# Configuration du logging
logger = logging.getLogger("aan_gibbs")

# Au-delà, les chaînes gèlent dans un minimum local
NONERGODIC_BETA = 1e3


class GibbsKernel:
    """Noyau de transition précalculé pour un modèle et une température donnés"""

    def __init__(self, model: IsingModel, beta: float, scan: str = "auto"):
        self.model = model
        self.beta = check_beta(beta)
        if self.beta >= NONERGODIC_BETA:
            logger.warning(f"beta={self.beta:g} : chaînes probablement non ergodiques")

        self.biases = np.asarray(model.biases)
        self.couplings = model.coupling_matrix(sparse_format=True)

        parts = model.graph.bipartition() if scan in ("auto", "block") else None
        if scan == "block" and parts is None:
            raise InvalidParameterError("Mise à jour par blocs impossible : graphe non biparti")
        self.blocks: Optional[List[np.ndarray]] = None
        if parts is not None:
            self.blocks = [np.asarray(part, dtype=np.int64) for part in parts if part]
            self._block_couplings = [self.couplings[block] for block in self.blocks]
        else:
            indptr, indices, data = self.couplings.indptr, self.couplings.indices, self.couplings.data
            self._neighbors = [
                (indices[indptr[i]:indptr[i + 1]], data[indptr[i]:indptr[i + 1]])
                for i in range(model.n_nodes)
            ]

    @property
    def scan(self) -> str:
        return "block" if self.blocks is not None else "single_site"

    def sweep(self, z: np.ndarray, rng: np.random.Generator) -> None:
        """Un balayage complet, en place, sur la matrice C × n des chaînes"""
        two_beta = 2.0 * self.beta
        if self.blocks is not None:
            for block, rows in zip(self.blocks, self._block_couplings):
                field = self.biases[block] + np.asarray(rows @ z.T).T
                up = rng.random(field.shape) < expit(two_beta * field)
                z[:, block] = np.where(up, 1.0, -1.0)
            return

        n_chains = z.shape[0]
        for i in rng.permutation(self.model.n_nodes):
            neighbors, weights = self._neighbors[i]
            field = self.biases[i] + z[:, neighbors] @ weights
            z[:, i] = np.where(rng.random(n_chains) < expit(two_beta * field), 1.0, -1.0)


def run_gibbs(model: IsingModel, config: GibbsConfig, m: int, rng: np.random.Generator,
              initial: Optional[np.ndarray] = None, burn_in: Optional[int] = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    Fait tourner min(n_chains, m) chaînes et enregistre m états

    Après burn_in balayages, un état par chaîne est enregistré tous les
    `thinning` balayages; les enregistrements alternent entre les chaînes.

    Args:
        model: Modèle d'Ising
        config: Paramètres de l'échantillonneur
        m: Nombre d'états à enregistrer
        rng: Générateur aléatoire
        initial: États initiaux des chaînes (sinon tirage uniforme)
        burn_in: Remplace config.burn_in (chaînes persistantes déjà thermalisées)

    Returns:
        (états enregistrés m × n en int8, états finaux des chaînes)
    """
    if m < 1:
        raise InvalidSizeError(f"Nombre d'échantillons invalide: {m}")
    kernel = GibbsKernel(model, config.beta, config.scan)
    n = model.n_nodes
    n_chains = min(config.n_chains, m)

    if initial is not None and initial.shape == (n_chains, n):
        z = np.array(initial, dtype=np.float64)
    else:
        if initial is not None:
            logger.debug(f"Chaînes initiales {initial.shape} ignorées, attendu {(n_chains, n)}")
            # Départ uniforme : la chauffe complète s'applique
            burn_in = None
        z = np.where(rng.random((n_chains, n)) < 0.5, 1.0, -1.0)

    sweeps = config.burn_in if burn_in is None else burn_in
    for _ in range(sweeps):
        kernel.sweep(z, rng)

    n_records = -(-m // n_chains)
    records = np.empty((n_records, n_chains, n), dtype=np.int8)
    for r in range(n_records):
        for _ in range(config.thinning):
            kernel.sweep(z, rng)
        records[r] = z

    logger.debug(f"Gibbs ({kernel.scan}): {n_chains} chaînes, {sweeps} balayages de chauffe, "
                 f"{n_records * config.thinning} balayages enregistrés")
    return records.reshape(-1, n)[:m], z


def sample_gibbs(model: IsingModel, config: GibbsConfig, m: int, rng: np.random.Generator) -> SampleSet:
    """
    Échantillonnage de Gibbs d'un modèle d'Ising

    Args:
        model: Modèle d'Ising
        config: Chauffe, espacement, nombre de chaînes, beta, mode de balayage
        m: Nombre d'échantillons (≥ 1)
        rng: Générateur aléatoire

    Returns:
        SampleSet d'origine "gibbs"
    """
    states, _ = run_gibbs(model, config, m, rng)
    return SampleSet(states, SampleOrigin.GIBBS)


"""
Entraînement d'une machine de Boltzmann entièrement visible par appariement des moments.

    J_ij ← J_ij + taux · (⟨z_i z_j⟩_données − ⟨z_i z_j⟩_modèle)
    h_i  ← h_i  + taux · (⟨z_i⟩_données − ⟨z_i⟩_modèle)

Le produit du pas et de la température inverse est regroupé en un seul taux effectif :
la température de l'échantillonneur n'a pas à être estimée.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np
import pandas as pd
from tqdm import tqdm

from src.config.settings import TrainConfig
from src.ising.exact import ExactDistribution, exact_distribution
from src.ising.ising_model import IsingModel
from src.ising.moments import Moments, moments
from src.sampling.sample_set import SampleSet
from src.utils.aan_errors import DivergenceUndefinedError, InvalidInputError, InvalidParameterError
from src.utils.aan_utils import export_csv, parameter_digest

# Configuration du logging
logger = logging.getLogger("aan_bm_trainer")

TRACE_COLUMNS = ["epoch", "l1_norm", "kl", "seed"]


@dataclass(frozen=True)
class TrainRecord:
    """Mesures d'une époque"""
    epoch: int
    l1_norm: float
    kl: Optional[float]
    # Empreinte courte des paramètres après la mise à jour
    snapshot: str


@dataclass
class TrainTrace:
    """Historique d'un entraînement, un enregistrement par époque"""
    seed: int = 0
    records: List[TrainRecord] = field(default_factory=list)

    def append(self, record: TrainRecord) -> None:
        self.records.append(record)

    def __len__(self) -> int:
        return len(self.records)

    @property
    def l1_norms(self) -> np.ndarray:
        return np.array([r.l1_norm for r in self.records])

    @property
    def kls(self) -> np.ndarray:
        return np.array([np.nan if r.kl is None else r.kl for r in self.records])

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [{"epoch": r.epoch, "l1_norm": r.l1_norm, "kl": r.kl, "seed": self.seed} for r in self.records],
            columns=TRACE_COLUMNS,
        )

    def export(self, path: Union[str, Path]) -> Path:
        """CSV epoch, l1_norm, kl (vide si indisponible), seed"""
        return export_csv(self.to_frame(), path, TRACE_COLUMNS)


def _check_pair(first: Moments, second: Moments) -> None:
    if first.n_nodes != second.n_nodes:
        raise InvalidInputError(f"Moments sur {first.n_nodes} et {second.n_nodes} nœuds")


def gradient_step(model: IsingModel, data_moments: Moments, model_moments: Moments,
                  effective_rate: float) -> IsingModel:
    """
    Une mise à jour par appariement des moments

    Args:
        model: Modèle courant
        data_moments: Moments des données
        model_moments: Moments estimés sous le modèle
        effective_rate: Taux effectif (η·β)

    Returns:
        Nouveau modèle (le modèle d'entrée n'est pas modifié)
    """
    _check_pair(data_moments, model_moments)
    if data_moments.n_nodes != model.n_nodes:
        raise InvalidInputError(f"Moments sur {data_moments.n_nodes} nœuds pour un modèle à {model.n_nodes} nœuds")
    if not np.isfinite(effective_rate):
        raise InvalidParameterError(f"Taux effectif non fini: {effective_rate}")

    biases = model.biases + effective_rate * (data_moments.means - model_moments.means)
    couplings = model.couplings + effective_rate * (
        data_moments.edge_correlations(model.graph) - model_moments.edge_correlations(model.graph)
    )
    return model.with_parameters(biases, couplings)


def l1_norm(data_moments: Moments, model_moments: Moments) -> float:
    """Somme des écarts absolus de corrélation sur toutes les paires i < j"""
    _check_pair(data_moments, model_moments)
    return float(np.abs(data_moments.pair_correlations() - model_moments.pair_correlations()).sum())


def kl_divergence(p: ExactDistribution, q: ExactDistribution) -> float:
    """
    Divergence de Kullback-Leibler Σ p ln(p / q)

    Args:
        p: Distribution de référence
        q: Distribution comparée, strictement positive là où p l'est

    Returns:
        KL(p ‖ q) ≥ 0

    Raises:
        DivergenceUndefinedError: si q s'annule sur le support de p
    """
    if p.n_nodes != q.n_nodes:
        raise InvalidInputError("Espaces d'états différents")
    support = p.probabilities > 0
    if np.any(q.probabilities[support] <= 0):
        raise DivergenceUndefinedError("q s'annule sur le support de p")
    pp = p.probabilities[support]
    value = float(np.sum(pp * (np.log(pp) - np.log(q.probabilities[support]))))
    return max(value, 0.0)


def train(model: IsingModel, data: SampleSet, config: TrainConfig, sampler,
          rng: Optional[np.random.Generator] = None, seed: int = 0,
          show_progress: bool = True) -> Tuple[IsingModel, TrainTrace]:
    """
    Entraîne une machine de Boltzmann sur des données binaires

    À chaque époque : estimation des moments du modèle par l'échantillonneur,
    mesure de la norme L1, mise à jour, puis KL(données ‖ modèle) si le modèle
    reste énumérable.

    Args:
        model: Modèle initial
        data: Échantillons de données (spins ±1)
        config: Taux effectif, époques, échantillons par étape
        sampler: Objet exposant estimate_moments(model, m, rng)
        rng: Générateur aléatoire (dérivé de seed sinon)
        seed: Graine enregistrée dans la trace
        show_progress: Afficher une barre de progression

    Returns:
        (modèle entraîné, trace)
    """
    states = getattr(data, "states", data)
    if states.shape[1] != model.n_nodes:
        raise InvalidInputError(f"Données à {states.shape[1]} variables pour un modèle à {model.n_nodes} nœuds")
    rng = rng if rng is not None else np.random.default_rng(seed)

    data_moments = moments(states)
    empirical = ExactDistribution.empirical(states) if model.n_nodes <= config.enumeration_cap else None
    trace = TrainTrace(seed=seed)

    epochs = tqdm(range(1, config.epochs + 1), desc="Entraînement BM", disable=not show_progress)
    for epoch in epochs:
        model_moments = sampler.estimate_moments(model, config.samples_per_step, rng)
        l1 = l1_norm(data_moments, model_moments)
        model = gradient_step(model, data_moments, model_moments, config.effective_rate)

        kl = None
        if empirical is not None:
            kl = kl_divergence(empirical, exact_distribution(model, config.beta, config.enumeration_cap))

        trace.append(TrainRecord(epoch, l1, kl, parameter_digest(model.biases, model.couplings)))
        if epoch % config.log_every == 0 or epoch == config.epochs:
            kl_text = f", KL={kl:.5f}" if kl is not None else ""
            logger.info(f"Époque {epoch}/{config.epochs}: L1={l1:.4f}{kl_text}")

    return model, trace

"""
Tirage exact par inversion de la fonction de répartition sur les états énumérés.
"""

import logging

import numpy as np

from src.ising.exact import DEFAULT_ENUMERATION_CAP, exact_distribution, states_from_indices
from src.ising.ising_model import IsingModel
from src.sampling.sample_set import SampleOrigin, SampleSet
from src.utils.aan_errors import InvalidSizeError

# Configuration du logging
logger = logging.getLogger("aan_exact_sampler")


def sample_exact(model: IsingModel, beta: float, m: int, rng: np.random.Generator,
                 cap: int = DEFAULT_ENUMERATION_CAP) -> SampleSet:
    """
    Tire m états indépendants de la distribution de Boltzmann exacte

    Args:
        model: Modèle d'Ising (n ≤ cap)
        beta: Température inverse
        m: Nombre d'échantillons (≥ 1)
        rng: Générateur aléatoire
        cap: Plafond d'énumération

    Returns:
        SampleSet d'origine "exact"

    Raises:
        TooLargeError: si le modèle dépasse le plafond d'énumération
    """
    if m < 1:
        raise InvalidSizeError(f"Nombre d'échantillons invalide: {m}")
    distribution = exact_distribution(model, beta, cap)
    cdf = np.cumsum(distribution.probabilities)
    indices = np.searchsorted(cdf, rng.random(m), side="right")
    indices = np.minimum(indices, cdf.shape[0] - 1)
    return SampleSet(states_from_indices(indices, model.n_nodes), SampleOrigin.EXACT)

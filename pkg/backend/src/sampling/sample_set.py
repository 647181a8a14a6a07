"""
Ensembles d'échantillons de spins produits par les échantillonneurs.
"""

from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Optional, Union

import numpy as np

from src.utils.aan_errors import InvalidInputError


class SampleOrigin(str, Enum):
    """Provenance d'un ensemble d'échantillons"""
    EXACT = "exact"
    GIBBS = "gibbs"
    ANNEALER_SURROGATE = "annealer_surrogate"


@dataclass(frozen=True, eq=False)
class SampleSet:
    """Matrice m × n de spins ±1 (int8) et sa provenance"""
    states: np.ndarray
    origin: SampleOrigin
    # Fraction de chaînes brisées avant décodage (échantillonneur de substitution)
    chain_break_fraction: Optional[float] = None

    def __post_init__(self):
        states = np.asarray(self.states)
        if states.ndim != 2 or states.shape[0] == 0 or states.shape[1] == 0:
            raise InvalidInputError(f"Ensemble d'échantillons vide ou mal formé: {states.shape}")
        if not np.all(np.abs(states) == 1):
            raise InvalidInputError("Les échantillons doivent être des spins ±1")
        states = states.astype(np.int8, copy=False)
        states.setflags(write=False)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "origin", SampleOrigin(self.origin))

    def __len__(self) -> int:
        return self.states.shape[0]

    @property
    def n_nodes(self) -> int:
        return self.states.shape[1]

    def export(self, path: Union[str, Path]) -> Path:
        """
        Écrit un échantillon par ligne, spins ±1 séparés par des espaces

        Args:
            path: Fichier de destination

        Returns:
            Chemin du fichier écrit
        """
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        np.savetxt(path, self.states, fmt="%d", delimiter=" ")
        return path

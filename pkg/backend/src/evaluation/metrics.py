"""
Score d'inception et distance de Fréchet entre statistiques gaussiennes de caractéristiques.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.special import rel_entr

from src.utils.aan_errors import InvalidInputError, NumericError

# Configuration du logging
logger = logging.getLogger("aan_metrics")

MIN_IMAGES = 100
SYMMETRY_TOLERANCE = 1e-10
# Valeurs propres négatives tolérées (ramenées à zéro) au-dessus de ce seuil
EIGEN_TOLERANCE = 1e-8


def inception_score_from_posteriors(posteriors: np.ndarray, splits: int = 1) -> float:
    """
    exp(moyenne sur les images de KL(p(y|x) ‖ p(y))), p(y) marginale empirique

    Args:
        posteriors: Matrice n × classes, lignes sommant à 1
        splits: Nombre de sous-ensembles (moyenne des scores)

    Returns:
        Score d'inception (1 ≤ score ≤ nombre de classes)
    """
    posteriors = np.asarray(posteriors, dtype=np.float64)
    if posteriors.ndim != 2 or posteriors.shape[0] < MIN_IMAGES:
        raise InvalidInputError(f"Au moins {MIN_IMAGES} images requises (reçu {posteriors.shape[0]})")
    if splits < 1 or posteriors.shape[0] // splits < 1:
        raise InvalidInputError(f"Découpage invalide: {splits}")

    scores = []
    for part in np.array_split(posteriors, splits):
        marginal = part.mean(axis=0, keepdims=True)
        kl = rel_entr(part, marginal).sum(axis=1)
        scores.append(float(np.exp(kl.mean())))
    return float(np.mean(scores))


@dataclass(frozen=True, eq=False)
class GaussianStats:
    """Moyenne et covariance (non biaisée) d'un ensemble de caractéristiques"""
    mean: np.ndarray
    covariance: np.ndarray

    @classmethod
    def from_features(cls, features: np.ndarray) -> "GaussianStats":
        features = np.asarray(features, dtype=np.float64)
        if features.ndim != 2:
            raise InvalidInputError(f"Caractéristiques de forme {features.shape}")
        n, d = features.shape
        if n < d + 1:
            raise InvalidInputError(f"{n} échantillons pour {d} caractéristiques (au moins {d + 1} requis)")
        covariance = np.cov(features, rowvar=False, ddof=1).reshape(d, d)
        return cls(features.mean(axis=0), 0.5 * (covariance + covariance.T))


def matrix_sqrt_psd(matrix: np.ndarray) -> np.ndarray:
    """
    Racine carrée principale d'une matrice symétrique semi-définie positive

    Args:
        matrix: Matrice symétrique (à 1e-10 près)

    Returns:
        Racine symétrique R telle que R·R = matrix

    Raises:
        NumericError: valeur propre inférieure à -1e-8 ou matrice non symétrique
    """
    matrix = np.asarray(matrix, dtype=np.float64)
    asymmetry = float(np.max(np.abs(matrix - matrix.T))) if matrix.size else 0.0
    if asymmetry > SYMMETRY_TOLERANCE:
        raise NumericError("Matrice non symétrique", {"asymmetry": asymmetry})
    eigenvalues, eigenvectors = np.linalg.eigh(0.5 * (matrix + matrix.T))
    smallest = float(eigenvalues.min()) if eigenvalues.size else 0.0
    if smallest < -EIGEN_TOLERANCE:
        raise NumericError("Matrice non semi-définie positive",
                           {"min_eigenvalue": smallest, "tolerance": EIGEN_TOLERANCE})
    roots = np.sqrt(np.clip(eigenvalues, 0.0, None))
    return (eigenvectors * roots) @ eigenvectors.T


def trace_sqrt_product(first: np.ndarray, second: np.ndarray) -> float:
    """Tr((Σ1 Σ2)^{1/2}) calculée sur le produit symétrisé sqrt(Σ1) Σ2 sqrt(Σ1)"""
    root = matrix_sqrt_psd(first)
    product = root @ second @ root
    return float(np.trace(matrix_sqrt_psd(0.5 * (product + product.T))))


def fid_from_stats(first: GaussianStats, second: GaussianStats) -> float:
    """‖μ1 - μ2‖² + Tr(Σ1 + Σ2 - 2 (Σ1 Σ2)^{1/2})"""
    if first.mean.shape != second.mean.shape:
        raise InvalidInputError("Statistiques de dimensions différentes")
    diff = first.mean - second.mean
    value = float(diff @ diff + np.trace(first.covariance) + np.trace(second.covariance)
                  - 2.0 * trace_sqrt_product(first.covariance, second.covariance))
    return value


def fid_from_features(first: np.ndarray, second: np.ndarray) -> float:
    return fid_from_stats(GaussianStats.from_features(first), GaussianStats.from_features(second))

"""
Reparamétrisation des spins latents en valeurs continues.

Densité sur (-1, 1] : p(x) = α e^{-α(1-x)} / (1 - e^{-2α}), qui croît exponentiellement
vers x = 1. Un spin s devient s · x avec x tiré de p par inversion de la
fonction de répartition, de sorte que la valeur se concentre près du signe du spin.
"""

import numpy as np

from src.utils.aan_errors import InvalidInputError, InvalidParameterError


def _check_alpha(alpha: float) -> float:
    if not np.isfinite(alpha) or alpha <= 0:
        raise InvalidParameterError(f"alpha doit être fini et strictement positif (reçu {alpha})")
    return float(alpha)


def pdf(x, alpha: float):
    """
    Densité p(x), nulle hors de (-1, 1]

    Args:
        x: Réel ou tableau
        alpha: Concentration

    Returns:
        Densité (même forme que x)
    """
    alpha = _check_alpha(alpha)
    x = np.asarray(x, dtype=np.float64)
    inside = (x > -1.0) & (x <= 1.0)
    values = alpha * np.exp(-alpha * (1.0 - np.clip(x, -1.0, 1.0))) / -np.expm1(-2.0 * alpha)
    result = np.where(inside, values, 0.0)
    return float(result) if result.ndim == 0 else result


def cdf(z, alpha: float):
    """Fonction de répartition F(z) : 0 pour z ≤ -1, 1 pour z ≥ 1"""
    alpha = _check_alpha(alpha)
    z = np.asarray(z, dtype=np.float64)
    floor = np.exp(-2.0 * alpha)
    values = (np.exp(-alpha * (1.0 - np.clip(z, -1.0, 1.0))) - floor) / (1.0 - floor)
    result = np.where(z <= -1.0, 0.0, np.where(z >= 1.0, 1.0, values))
    return float(result) if result.ndim == 0 else result


def inverse_cdf(u, alpha: float):
    """x = 1 + ln(u (1 - e^{-2α}) + e^{-2α}) / α, pour u dans (0, 1]"""
    alpha = _check_alpha(alpha)
    u = np.asarray(u, dtype=np.float64)
    floor = np.exp(-2.0 * alpha)
    result = 1.0 + np.log(u * (1.0 - floor) + floor) / alpha
    return float(result) if result.ndim == 0 else result


def analytic_mean(alpha: float) -> float:
    """Espérance de x sous p : 1 - (1/α)(1 - e^{-2α}(1 + 2α)) / (1 - e^{-2α})"""
    alpha = _check_alpha(alpha)
    floor = np.exp(-2.0 * alpha)
    return float(1.0 - (1.0 - floor * (1.0 + 2.0 * alpha)) / (alpha * (1.0 - floor)))


def _uniform_open_left(rng: np.random.Generator, size) -> np.ndarray:
    # U(0, 1] : 1 - U[0, 1)
    return 1.0 - rng.random(size)


def sample_continuous(spin: int, alpha: float, rng: np.random.Generator) -> float:
    """
    Tire une valeur continue concentrée près du signe d'un spin

    Args:
        spin: -1 ou +1
        alpha: Concentration
        rng: Générateur aléatoire

    Returns:
        spin · x, x ~ p
    """
    if spin not in (-1, 1):
        raise InvalidInputError(f"Spin invalide: {spin}")
    return float(spin) * inverse_cdf(float(_uniform_open_left(rng, None)), alpha)


def reparametrize(spins: np.ndarray, alpha: float, rng: np.random.Generator) -> np.ndarray:
    """
    Version vectorisée de sample_continuous pour un lot de spins latents

    Args:
        spins: Matrice de spins ±1
        alpha: Concentration
        rng: Générateur aléatoire

    Returns:
        Matrice de même forme, valeurs dans [-1, 1]
    """
    spins = np.asarray(spins)
    if not np.all(np.abs(spins) == 1):
        raise InvalidInputError("Les spins latents doivent valoir -1 ou +1")
    x = inverse_cdf(_uniform_open_left(rng, spins.shape), alpha)
    return spins.astype(np.float64) * x


def uniform_prior(shape, rng: np.random.Generator) -> np.ndarray:
    """Bruit latent classique U(-1, 1), référence sans machine de Boltzmann"""
    return rng.uniform(-1.0, 1.0, size=shape)

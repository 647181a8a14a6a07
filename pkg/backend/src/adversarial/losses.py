"""
Pertes adversariales et lissage des étiquettes.
"""

from typing import Optional

import numpy as np

# Les probabilités sont bornées dans [CLAMP, 1 - CLAMP] avant le logarithme
CLAMP = 1e-12


def _clamped(p) -> np.ndarray:
    return np.clip(np.asarray(p, dtype=np.float64).reshape(-1), CLAMP, 1.0 - CLAMP)


def binary_cross_entropy(probabilities, labels) -> np.ndarray:
    p = _clamped(probabilities)
    labels = np.broadcast_to(np.asarray(labels, dtype=np.float64).reshape(-1), p.shape)
    return -(labels * np.log(p) + (1.0 - labels) * np.log1p(-p))


def discriminator_loss(d_real, d_fake, real_labels: Optional[np.ndarray] = None,
                       fake_labels: Optional[np.ndarray] = None) -> float:
    """
    Entropie croisée moyenne sur le lot réel plus celle sur le lot généré

    Args:
        d_real: Sorties du discriminateur sur les données
        d_fake: Sorties du discriminateur sur les images générées
        real_labels: Étiquettes (lissées) des données, 1 par défaut
        fake_labels: Étiquettes (lissées) des images générées, 0 par défaut

    Returns:
        Perte (finie grâce au bornage des probabilités)
    """
    real_labels = 1.0 if real_labels is None else real_labels
    fake_labels = 0.0 if fake_labels is None else fake_labels
    return float(binary_cross_entropy(d_real, real_labels).mean()
                 + binary_cross_entropy(d_fake, fake_labels).mean())


def generator_loss(d_fake) -> float:
    """Forme non saturante : moyenne de -ln D(G(code))"""
    return float(-np.log(_clamped(d_fake)).mean())


def smoothed_labels(count: int, real: bool, amplitude: float, rng: np.random.Generator) -> np.ndarray:
    """
    Étiquettes bruitées : 0.9 + U(-a, a) pour les données (bornées à 1), U(0, a) pour les images générées

    Args:
        count: Taille du lot
        real: Étiquettes des données ou des images générées
        amplitude: Amplitude a du bruit (0 : étiquettes dures 1 et 0)
        rng: Générateur aléatoire
    """
    if amplitude == 0:
        return np.full(count, 1.0 if real else 0.0)
    if real:
        return np.clip(0.9 + rng.uniform(-amplitude, amplitude, size=count), 0.0, 1.0)
    return rng.uniform(0.0, amplitude, size=count)

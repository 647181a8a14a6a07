"""
Accès à MNIST avec mise en cache des ensembles dérivés.
"""

import logging
from pathlib import Path
from typing import Optional, Union

import numpy as np

from src.dataset.idx_reader import load_idx, locate_mnist
from src.dataset.image_cache import ImageSetCache
from src.dataset.image_set import ImageSet
from src.dataset.transforms import reduce, stochastic_binarize

# Configuration du logging
logger = logging.getLogger("aan_mnist")


def load_mnist(data_dir: Optional[Union[str, Path]] = None, split: str = "train",
               cache: Optional[ImageSetCache] = None) -> ImageSet:
    """
    Charge une partition MNIST (intensités dans [0, 1])

    Args:
        data_dir: Répertoire des fichiers IDX
        split: "train" ou "test"
        cache: Cache disque facultatif

    Returns:
        ImageSet étiqueté
    """
    images_path, labels_path = locate_mnist(data_dir, split)
    key = f"mnist:{split}:{images_path.resolve()}:{images_path.stat().st_size}"
    if cache is not None:
        cached = cache.get(key)
        if cached is not None:
            logger.info(f"MNIST {split} lu depuis le cache ({len(cached)} images)")
            return cached

    images = load_idx(images_path, labels_path)
    if cache is not None:
        cache.put(key, images)
    return images


def reduced_binary(images: ImageSet, rng: np.random.Generator, target: int = 6,
                   count: Optional[int] = None) -> ImageSet:
    """
    Variante réduite target×target puis binarisée stochastiquement

    Args:
        images: Intensités 28×28
        rng: Générateur de la binarisation
        target: Côté de sortie
        count: Nombre d'images conservées (toutes si None)

    Returns:
        ImageSet de spins
    """
    if count is not None:
        images = images.take(count)
    return stochastic_binarize(reduce(images, target), rng)

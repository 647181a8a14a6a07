"""
Transformations des images : réduction par moyenne de blocs, binarisation
stochastique et passage aux valeurs signées.
"""

import numpy as np

from src.dataset.image_set import ImageSet
from src.utils.aan_errors import InvalidInputError


def reduce(images: ImageSet, target: int = 6) -> ImageSet:
    """
    Réduit des images carrées à target×target

    Le carré central de côté block·target (block = côté // target) est découpé
    puis moyenné par blocs block×block disjoints : 28×28 → recadrage 24×24 → 6×6.

    Args:
        images: Intensités dans [0, 1]
        target: Côté de sortie

    Returns:
        ImageSet target×target dans [0, 1], étiquettes conservées
    """
    if images.variant != "intensity":
        raise InvalidInputError("La réduction attend des intensités dans [0, 1]")
    if images.height != images.width or target < 1 or images.height < target:
        raise InvalidInputError(f"Réduction {images.height}×{images.width} → {target}×{target} non prise en charge")

    block = images.height // target
    crop = block * target
    offset = (images.height - crop) // 2
    square = images.images.reshape(-1, images.height, images.width)
    square = square[:, offset:offset + crop, offset:offset + crop]
    reduced = square.reshape(-1, target, block, target, block).mean(axis=(2, 4))
    return ImageSet(np.clip(reduced.reshape(-1, target * target), 0.0, 1.0), target, target, images.labels)


def stochastic_binarize(images: ImageSet, rng: np.random.Generator) -> ImageSet:
    """Chaque pixel vaut +1 avec une probabilité égale à son intensité, -1 sinon"""
    if images.variant != "intensity":
        raise InvalidInputError("La binarisation attend des intensités dans [0, 1]")
    spins = np.where(rng.random(images.images.shape) < images.images, 1, -1).astype(np.int8)
    return ImageSet(spins, images.height, images.width, images.labels, variant="spins")


def to_signed(images: ImageSet) -> ImageSet:
    """[0, 1] → [-1, 1], plage de sortie du générateur"""
    if images.variant != "intensity":
        raise InvalidInputError("Conversion signée attend des intensités dans [0, 1]")
    return ImageSet(2.0 * images.images - 1.0, images.height, images.width, images.labels, variant="signed")

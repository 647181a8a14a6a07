"""
Ensembles d'images aplaties, avec étiquettes facultatives.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.utils.aan_errors import InvalidInputError

# Variantes de pixels : intensités [0, 1], valeurs signées [-1, 1], spins {-1, +1}
VARIANTS = ("intensity", "signed", "spins")


@dataclass(frozen=True, eq=False)
class ImageSet:
    """Matrice n × (height·width) et étiquettes de classe facultatives"""
    images: np.ndarray
    height: int
    width: int
    labels: Optional[np.ndarray] = None
    variant: str = "intensity"

    def __post_init__(self):
        images = np.asarray(self.images)
        if images.ndim != 2 or images.shape[1] != self.height * self.width:
            raise InvalidInputError(f"Images {images.shape} incompatibles avec {self.height}×{self.width}")
        if self.variant not in VARIANTS:
            raise InvalidInputError(f"Variante inconnue: {self.variant}")
        if self.variant == "intensity" and images.size and (images.min() < 0 or images.max() > 1):
            raise InvalidInputError("Intensités hors de [0, 1]")
        if self.variant == "signed" and images.size and (images.min() < -1 or images.max() > 1):
            raise InvalidInputError("Valeurs signées hors de [-1, 1]")
        if self.variant == "spins" and not np.all(np.abs(images) == 1):
            raise InvalidInputError("Les spins doivent valoir -1 ou +1")
        if self.labels is not None:
            labels = np.asarray(self.labels, dtype=np.int64).reshape(-1)
            if labels.shape[0] != images.shape[0]:
                raise InvalidInputError(f"{labels.shape[0]} étiquettes pour {images.shape[0]} images")
            object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "images", images)

    def __len__(self) -> int:
        return self.images.shape[0]

    def take(self, count: int) -> "ImageSet":
        """Les `count` premières images"""
        labels = None if self.labels is None else self.labels[:count]
        return ImageSet(self.images[:count], self.height, self.width, labels, self.variant)

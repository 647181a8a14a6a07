"""
Cache disque des ensembles d'images dérivés (réduits, binarisés...).
Format binaire versionné, relecture bit à bit identique.
"""

import hashlib
import logging
from pathlib import Path
from typing import List, Optional, Union

import numpy as np

from src.dataset.image_set import VARIANTS, ImageSet
from src.utils.aan_errors import CheckpointError

# Configuration du logging
logger = logging.getLogger("aan_image_cache")

CACHE_MAGIC = b"AANIMG"
CACHE_VERSION = 1


class ImageSetCache:
    """Cache persistant sur disque d'ensembles d'images"""

    def __init__(self, cache_dir: Union[str, Path], prefix: str = "images"):
        """
        Initialise un cache sur disque

        Args:
            cache_dir: Répertoire pour le cache
            prefix: Préfixe pour les fichiers de cache
        """
        self.cache_dir = Path(cache_dir)
        self.cache_dir.mkdir(parents=True, exist_ok=True)
        self.prefix = prefix

    def get_path(self, key: str) -> Path:
        # Hasher la clé pour éviter les problèmes de caractères spéciaux
        hashed_key = hashlib.md5(str(key).encode()).hexdigest()
        return self.cache_dir / f"{self.prefix}_{hashed_key}.cache"

    def get(self, key: str) -> Optional[ImageSet]:
        """
        Récupère un ensemble d'images du cache

        Args:
            key: Clé à récupérer

        Returns:
            ImageSet ou None si absent ou illisible
        """
        path = self.get_path(key)
        if not path.exists():
            return None
        try:
            return read_image_set(path)
        except (CheckpointError, ValueError) as e:
            logger.error(f"Erreur lors de la lecture du cache pour {key}: {e}")
            return None

    def put(self, key: str, value: ImageSet) -> Path:
        """Ajoute ou remplace une entrée"""
        path = self.get_path(key)
        write_image_set(value, path)
        logger.debug(f"Cache écrit pour {key}: {path.name}")
        return path

    def keys(self) -> List[str]:
        """Clés hachées présentes dans le cache"""
        prefix_len = len(self.prefix) + 1
        return sorted(p.name[prefix_len:-len(".cache")] for p in self.cache_dir.glob(f"{self.prefix}_*.cache"))

    def __contains__(self, key: str) -> bool:
        return self.get_path(key).exists()

    def clear(self) -> None:
        for path in self.cache_dir.glob(f"{self.prefix}_*.cache"):
            path.unlink()


def write_image_set(images: ImageSet, path: Union[str, Path]) -> Path:
    """En-tête (magique, version, variante, n, hauteur, largeur, étiquettes) puis float64 et int64"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    has_labels = images.labels is not None
    with open(path, 'wb') as f:
        f.write(CACHE_MAGIC)
        f.write(np.asarray([CACHE_VERSION], dtype="<u2").tobytes())
        f.write(np.asarray([VARIANTS.index(images.variant), int(has_labels)], dtype="<u1").tobytes())
        f.write(np.asarray([len(images), images.height, images.width], dtype="<u8").tobytes())
        f.write(np.ascontiguousarray(images.images, dtype="<f8").tobytes())
        if has_labels:
            f.write(np.ascontiguousarray(images.labels, dtype="<i8").tobytes())
    return path


def read_image_set(path: Union[str, Path]) -> ImageSet:
    path = Path(path)
    raw = path.read_bytes()
    if raw[:len(CACHE_MAGIC)] != CACHE_MAGIC:
        raise CheckpointError(f"En-tête de cache inattendu: {path}")
    offset = len(CACHE_MAGIC)
    version = int(np.frombuffer(raw, dtype="<u2", count=1, offset=offset)[0])
    if version != CACHE_VERSION:
        raise CheckpointError(f"Version de cache {version} non prise en charge ({path})")
    offset += 2
    variant_code, has_labels = (int(v) for v in np.frombuffer(raw, dtype="<u1", count=2, offset=offset))
    offset += 2
    n, height, width = (int(v) for v in np.frombuffer(raw, dtype="<u8", count=3, offset=offset))
    offset += 24

    expected = offset + 8 * n * height * width + (8 * n if has_labels else 0)
    if len(raw) != expected or variant_code >= len(VARIANTS):
        raise CheckpointError(f"Fichier de cache corrompu: {path}")

    images = np.frombuffer(raw, dtype="<f8", count=n * height * width, offset=offset).reshape(n, height * width)
    offset += 8 * n * height * width
    labels = np.frombuffer(raw, dtype="<i8", count=n, offset=offset).copy() if has_labels else None
    variant = VARIANTS[variant_code]
    images = images.astype(np.int8) if variant == "spins" else images.astype(np.float64)
    return ImageSet(images, height, width, labels, variant)

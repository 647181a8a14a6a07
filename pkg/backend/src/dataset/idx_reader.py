"""
Lecture et écriture du format IDX (MNIST) : nombre magique, dimensions
big-endian, puis octets non signés. Les fichiers gzip sont lus de façon transparente.
"""

import gzip
import logging
import os
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np

from src.dataset.image_set import ImageSet
from src.utils.aan_errors import IdxFormatError, InvalidInputError

# Configuration du logging
logger = logging.getLogger("aan_idx_reader")

IMAGES_MAGIC = 2051
LABELS_MAGIC = 2049

MNIST_FILES = {
    "train": ("train-images-idx3-ubyte", "train-labels-idx1-ubyte"),
    "test": ("t10k-images-idx3-ubyte", "t10k-labels-idx1-ubyte"),
}


def _read_bytes(path: Path) -> bytes:
    with open(path, 'rb') as f:
        head = f.read(2)
    opener = gzip.open if head == b"\x1f\x8b" else open
    with opener(path, 'rb') as f:
        return f.read()


def read_idx(path: Union[str, Path], expected_magic: int) -> np.ndarray:
    """
    Lit un tableau IDX d'octets non signés

    Args:
        path: Fichier IDX (éventuellement compressé gzip)
        expected_magic: 2051 pour des images, 2049 pour des étiquettes

    Returns:
        Tableau uint8 de forme (n, dims...)

    Raises:
        IdxFormatError: nombre magique, dimensions ou charge utile invalides
    """
    path = Path(path)
    raw = _read_bytes(path)
    if len(raw) < 4:
        raise IdxFormatError("magic", f"Fichier trop court: {path}")

    magic = int.from_bytes(raw[0:4], "big")
    if magic != expected_magic:
        raise IdxFormatError("magic", f"Nombre magique {magic} au lieu de {expected_magic} ({path})")

    n_dims = raw[3]
    header_size = 4 + 4 * n_dims
    if len(raw) < header_size:
        raise IdxFormatError("dimensions", f"En-tête tronqué ({path})")
    dims = tuple(int.from_bytes(raw[4 + 4 * k:8 + 4 * k], "big") for k in range(n_dims))

    expected = int(np.prod(dims)) if dims else 0
    payload = raw[header_size:]
    if len(payload) < expected:
        raise IdxFormatError("payload", f"Charge utile tronquée: {len(payload)} octets sur {expected} ({path})")
    if len(payload) > expected:
        raise IdxFormatError("payload", f"{len(payload) - expected} octets excédentaires ({path})")

    return np.frombuffer(payload, dtype=np.uint8).reshape(dims)


def write_idx(path: Union[str, Path], array: np.ndarray) -> Path:
    """Écrit un tableau uint8 au format IDX (images si 3 dimensions, étiquettes si 1)"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    array = np.asarray(array, dtype=np.uint8)
    magic = 0x0800 + array.ndim
    with open(path, 'wb') as f:
        f.write(magic.to_bytes(4, "big"))
        for dim in array.shape:
            f.write(int(dim).to_bytes(4, "big"))
        f.write(array.tobytes())
    return path


def load_idx(images_path: Union[str, Path], labels_path: Optional[Union[str, Path]] = None) -> ImageSet:
    """
    Charge des images IDX et leurs étiquettes, pixels ramenés dans [0, 1]

    Args:
        images_path: Fichier d'images (idx3)
        labels_path: Fichier d'étiquettes (idx1), facultatif

    Returns:
        ImageSet de variante "intensity"

    Raises:
        IdxFormatError: format invalide ou nombre d'étiquettes différent du nombre d'images
    """
    images = read_idx(images_path, IMAGES_MAGIC)
    if images.ndim != 3:
        raise IdxFormatError("dimensions", f"Images à {images.ndim} dimensions au lieu de 3")
    n, height, width = images.shape

    labels = None
    if labels_path is not None:
        labels = read_idx(labels_path, LABELS_MAGIC)
        if labels.ndim != 1:
            raise IdxFormatError("dimensions", f"Étiquettes à {labels.ndim} dimensions au lieu de 1")
        if labels.shape[0] != n:
            raise IdxFormatError("count", f"{labels.shape[0]} étiquettes pour {n} images")

    logger.info(f"{n} images {height}×{width} chargées depuis {images_path}")
    return ImageSet(images.reshape(n, height * width) / 255.0, height, width, labels)


def locate_mnist(data_dir: Optional[Union[str, Path]] = None, split: str = "train") -> Tuple[Path, Path]:
    """
    Retrouve les fichiers MNIST d'une partition dans un répertoire de données

    Les noms officiels sont acceptés avec ou sans extension .gz, ainsi que la
    variante avec un point (train-images.idx3-ubyte).

    Args:
        data_dir: Répertoire (AAN_DATA_DIR par défaut)
        split: "train" ou "test"

    Returns:
        (fichier d'images, fichier d'étiquettes)

    Raises:
        FileNotFoundError: avec le nom des fichiers attendus
    """
    if split not in MNIST_FILES:
        raise InvalidInputError(f"Partition inconnue: {split}")
    data_dir = Path(data_dir if data_dir is not None else os.getenv("AAN_DATA_DIR", "./data/mnist"))
    found = []
    for name in MNIST_FILES[split]:
        candidates = [name, f"{name}.gz", name.replace("-idx", ".idx"), name.replace("-idx", ".idx") + ".gz"]
        match = next((data_dir / c for c in candidates if (data_dir / c).exists()), None)
        if match is None:
            raise FileNotFoundError(
                f"Fichier MNIST {name}[.gz] introuvable dans {data_dir}. "
                f"Téléchargez les quatre fichiers IDX de MNIST dans ce répertoire "
                f"ou indiquez-le avec data.data_dir / AAN_DATA_DIR."
            )
        found.append(match)
    return found[0], found[1]

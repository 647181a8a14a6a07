"""
Fixtures communes de la suite de tests.
"""

import os
import sys
from pathlib import Path

import numpy as np
import pytest

# Ajout du répertoire backend au chemin
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.dataset.idx_reader import locate_mnist  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def mnist_dir():
    """Répertoire MNIST, ou saut du test si les fichiers sont absents"""
    data_dir = os.getenv("AAN_DATA_DIR", "./data/mnist")
    try:
        locate_mnist(data_dir, "train")
        locate_mnist(data_dir, "test")
    except FileNotFoundError:
        pytest.skip(f"MNIST absent de {data_dir}")
    return data_dir


@pytest.fixture
def fake_mnist_dir(tmp_path):
    """Petites partitions MNIST aléatoires au format IDX (40 images d'entraînement, 120 de test)"""
    from src.dataset.idx_reader import MNIST_FILES, write_idx

    generator = np.random.default_rng(7)
    data_dir = tmp_path / "mnist"
    for split, count in (("train", 40), ("test", 120)):
        images_name, labels_name = MNIST_FILES[split]
        write_idx(data_dir / images_name, generator.integers(0, 256, size=(count, 28, 28), dtype=np.uint8))
        write_idx(data_dir / labels_name, generator.integers(0, 10, size=count, dtype=np.uint8))
    return data_dir

"""
Format binaire des points de sauvegarde des réseaux et des états d'Adam.

En-tête : magique (6 octets), version (uint16), puis champs entiers little-endian;
les valeurs suivent en float64 little-endian, couche par couche.
"""

import logging
from pathlib import Path
from typing import BinaryIO, List, Union

import numpy as np

from src.neural.adam import AdamState
from src.neural.network import ACTIVATIONS, DenseLayer, Network
from src.utils.aan_errors import CheckpointError

# Configuration du logging
logger = logging.getLogger("aan_checkpoint")

NETWORK_MAGIC = b"AANNET"
ADAM_MAGIC = b"AANADM"
FORMAT_VERSION = 1


def _write_ints(f: BinaryIO, dtype: str, *values: int) -> None:
    f.write(np.asarray(values, dtype=dtype).tobytes())


def _read(f: BinaryIO, dtype: str, count: int, path: Path) -> np.ndarray:
    size = np.dtype(dtype).itemsize * count
    data = f.read(size)
    if len(data) != size:
        raise CheckpointError(f"Point de sauvegarde tronqué: {path}")
    return np.frombuffer(data, dtype=dtype, count=count)


def _read_header(f: BinaryIO, magic: bytes, path: Path) -> None:
    if f.read(len(magic)) != magic:
        raise CheckpointError(f"En-tête inattendu dans {path}")
    version = int(_read(f, "<u2", 1, path)[0])
    if version != FORMAT_VERSION:
        raise CheckpointError(f"Version de format {version} non prise en charge ({path})")


def save_network(net: Network, path: Union[str, Path]) -> Path:
    """
    Écrit un réseau : nombre de couches, puis par couche (entrée, sortie, activation)
    et enfin les poids et biais en float64

    Args:
        net: Réseau à sauvegarder
        path: Fichier de destination

    Returns:
        Chemin du fichier écrit
    """
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'wb') as f:
            f.write(NETWORK_MAGIC)
            _write_ints(f, "<u2", FORMAT_VERSION)
            _write_ints(f, "<u4", len(net.layers))
            for layer in net.layers:
                _write_ints(f, "<u4", layer.input_dim, layer.output_dim)
                _write_ints(f, "<u1", ACTIVATIONS.index(layer.activation))
            for layer in net.layers:
                f.write(np.ascontiguousarray(layer.weights, dtype="<f8").tobytes())
                f.write(np.ascontiguousarray(layer.bias, dtype="<f8").tobytes())
    except OSError as e:
        raise CheckpointError(f"Écriture impossible de {path}: {e}") from e
    return path


def load_network(path: Union[str, Path]) -> Network:
    """Relit un réseau écrit par save_network"""
    path = Path(path)
    if not path.exists():
        raise CheckpointError(f"Point de sauvegarde introuvable: {path}")
    with open(path, 'rb') as f:
        _read_header(f, NETWORK_MAGIC, path)
        n_layers = int(_read(f, "<u4", 1, path)[0])
        shapes = []
        for _ in range(n_layers):
            n_in, n_out = (int(v) for v in _read(f, "<u4", 2, path))
            code = int(_read(f, "<u1", 1, path)[0])
            if code >= len(ACTIVATIONS):
                raise CheckpointError(f"Code d'activation inconnu {code} dans {path}")
            shapes.append((n_in, n_out, ACTIVATIONS[code]))
        layers = []
        for n_in, n_out, activation in shapes:
            weights = _read(f, "<f8", n_in * n_out, path).reshape(n_in, n_out)
            bias = _read(f, "<f8", n_out, path)
            layers.append(DenseLayer(weights.astype(np.float64), bias.astype(np.float64), activation))
        if f.read(1):
            raise CheckpointError(f"Octets excédentaires dans {path}")
    return Network(layers)


def save_adam(state: AdamState, path: Union[str, Path]) -> Path:
    """
    Écrit un état d'Adam : pas, nombre de tableaux, tailles, hyperparamètres,
    puis les accumulateurs en float64

    Les formes sont reconstruites à partir du réseau associé au chargement.
    """
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'wb') as f:
            f.write(ADAM_MAGIC)
            _write_ints(f, "<u2", FORMAT_VERSION)
            _write_ints(f, "<u8", state.step)
            _write_ints(f, "<u4", len(state.first))
            for m in state.first:
                _write_ints(f, "<u8", m.size)
            f.write(np.asarray([state.rate, state.beta1, state.beta2, state.epsilon], dtype="<f8").tobytes())
            for m, v in zip(state.first, state.second):
                f.write(np.ascontiguousarray(m, dtype="<f8").tobytes())
                f.write(np.ascontiguousarray(v, dtype="<f8").tobytes())
    except OSError as e:
        raise CheckpointError(f"Écriture impossible de {path}: {e}") from e
    return path


def load_adam(path: Union[str, Path], net: Network) -> AdamState:
    """Relit un état d'Adam et redonne aux accumulateurs la forme des paramètres de net"""
    path = Path(path)
    if not path.exists():
        raise CheckpointError(f"Point de sauvegarde introuvable: {path}")
    shapes = [p.shape for p in net.parameters()]
    with open(path, 'rb') as f:
        _read_header(f, ADAM_MAGIC, path)
        step = int(_read(f, "<u8", 1, path)[0])
        count = int(_read(f, "<u4", 1, path)[0])
        sizes = [int(s) for s in _read(f, "<u8", count, path)]
        if count != len(shapes) or any(size != int(np.prod(shape)) for size, shape in zip(sizes, shapes)):
            raise CheckpointError(f"État d'Adam incompatible avec le réseau ({path})")
        rate, beta1, beta2, epsilon = (float(v) for v in _read(f, "<f8", 4, path))
        first: List[np.ndarray] = []
        second: List[np.ndarray] = []
        for shape, size in zip(shapes, sizes):
            first.append(_read(f, "<f8", size, path).reshape(shape).astype(np.float64))
            second.append(_read(f, "<f8", size, path).reshape(shape).astype(np.float64))
    return AdamState(rate, beta1, beta2, epsilon, step, first, second)

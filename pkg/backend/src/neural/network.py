"""
Réseaux denses à propagation avant et rétropropagation explicite (float64).
"""

import itertools
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import expit, softmax

from src.utils.aan_errors import InvalidInputError, InvalidParameterError, StaleCacheError

# Configuration du logging
logger = logging.getLogger("aan_network")

ACTIVATIONS = ("identity", "relu", "leaky_relu", "tanh", "sigmoid", "softmax")
LEAKY_SLOPE = 0.2

# Chaque réseau reçoit un numéro de version unique; un cache ne sert qu'au réseau qui l'a produit
_VERSIONS = itertools.count(1)


def activate(name: str, pre: np.ndarray) -> np.ndarray:
    if name == "identity":
        return pre
    if name == "relu":
        return np.maximum(pre, 0.0)
    if name == "leaky_relu":
        return np.where(pre > 0, pre, LEAKY_SLOPE * pre)
    if name == "tanh":
        return np.tanh(pre)
    if name == "sigmoid":
        return expit(pre)
    if name == "softmax":
        return softmax(pre, axis=1)
    raise InvalidParameterError(f"Activation inconnue: {name}")


def activation_backward(name: str, grad: np.ndarray, pre: np.ndarray, out: np.ndarray) -> np.ndarray:
    """Gradient par rapport à la pré-activation, connaissant le gradient de la sortie"""
    if name == "identity":
        return grad
    if name == "relu":
        return grad * (pre > 0)
    if name == "leaky_relu":
        return grad * np.where(pre > 0, 1.0, LEAKY_SLOPE)
    if name == "tanh":
        return grad * (1.0 - out * out)
    if name == "sigmoid":
        return grad * out * (1.0 - out)
    if name == "softmax":
        return out * (grad - np.sum(grad * out, axis=1, keepdims=True))
    raise InvalidParameterError(f"Activation inconnue: {name}")


@dataclass(frozen=True, eq=False)
class DenseLayer:
    """Couche dense : sortie = activation(entrée · weights + bias)"""
    weights: np.ndarray
    bias: np.ndarray
    activation: str

    def __post_init__(self):
        weights = np.array(self.weights, dtype=np.float64)
        bias = np.array(self.bias, dtype=np.float64).reshape(-1)
        if weights.ndim != 2 or bias.shape[0] != weights.shape[1]:
            raise InvalidInputError(f"Couche incohérente: poids {weights.shape}, biais {bias.shape}")
        if self.activation not in ACTIVATIONS:
            raise InvalidParameterError(f"Activation inconnue: {self.activation}")
        if not (np.all(np.isfinite(weights)) and np.all(np.isfinite(bias))):
            raise InvalidParameterError("Paramètres non finis dans une couche dense")
        weights.setflags(write=False)
        bias.setflags(write=False)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "bias", bias)

    @property
    def input_dim(self) -> int:
        return self.weights.shape[0]

    @property
    def output_dim(self) -> int:
        return self.weights.shape[1]


@dataclass(frozen=True, eq=False)
class ForwardCache:
    """Activations d'une propagation avant : activations[0] est l'entrée"""
    activations: List[np.ndarray]
    pre_activations: List[np.ndarray]
    version: int

    @property
    def output(self) -> np.ndarray:
        return self.activations[-1]


LayerGradient = Tuple[np.ndarray, np.ndarray]


class Network:
    """Suite de couches denses; une valeur immuable, chaque mise à jour crée un nouveau réseau"""

    def __init__(self, layers: Sequence[DenseLayer]):
        layers = tuple(layers)
        if not layers:
            raise InvalidInputError("Un réseau requiert au moins une couche")
        for k in range(1, len(layers)):
            if layers[k].input_dim != layers[k - 1].output_dim:
                raise InvalidInputError(
                    f"Dimensions incompatibles entre les couches {k - 1} et {k}: "
                    f"{layers[k - 1].output_dim} != {layers[k].input_dim}"
                )
        self.layers = layers
        self.version = next(_VERSIONS)

    @classmethod
    def dense(cls, sizes: Sequence[int], activations: Sequence[str], rng: np.random.Generator) -> "Network":
        """
        Réseau initialisé aléatoirement (uniforme de Glorot, biais nuls)

        Args:
            sizes: Largeurs [entrée, cachées..., sortie]
            activations: Une activation par couche
            rng: Générateur aléatoire

        Returns:
            Nouveau réseau
        """
        if len(activations) != len(sizes) - 1:
            raise InvalidInputError(f"{len(activations)} activations pour {len(sizes) - 1} couches")
        layers = []
        for fan_in, fan_out, activation in zip(sizes[:-1], sizes[1:], activations):
            limit = np.sqrt(6.0 / (fan_in + fan_out))
            layers.append(DenseLayer(rng.uniform(-limit, limit, size=(fan_in, fan_out)),
                                     np.zeros(fan_out), activation))
        return cls(layers)

    @property
    def input_dim(self) -> int:
        return self.layers[0].input_dim

    @property
    def output_dim(self) -> int:
        return self.layers[-1].output_dim

    @property
    def sizes(self) -> List[int]:
        return [self.input_dim] + [layer.output_dim for layer in self.layers]

    def parameters(self) -> List[np.ndarray]:
        """Poids et biais, couche par couche"""
        return [p for layer in self.layers for p in (layer.weights, layer.bias)]

    def with_parameters(self, parameters: Sequence[np.ndarray]) -> "Network":
        if len(parameters) != 2 * len(self.layers):
            raise InvalidInputError("Nombre de tableaux de paramètres incompatible")
        return Network([
            DenseLayer(parameters[2 * k], parameters[2 * k + 1], layer.activation)
            for k, layer in enumerate(self.layers)
        ])

    def forward(self, batch: np.ndarray) -> ForwardCache:
        """
        Propagation avant conservant toutes les activations intermédiaires

        Args:
            batch: Matrice lot × entrée

        Returns:
            Cache lié à la version courante du réseau
        """
        batch = np.asarray(batch, dtype=np.float64)
        if batch.ndim != 2 or batch.shape[1] != self.input_dim:
            raise InvalidInputError(f"Lot de forme {batch.shape}, entrée attendue {self.input_dim}")
        activations = [batch]
        pre_activations = []
        out = batch
        for layer in self.layers:
            pre = out @ layer.weights + layer.bias
            out = activate(layer.activation, pre)
            pre_activations.append(pre)
            activations.append(out)
        return ForwardCache(activations, pre_activations, self.version)

    def predict(self, batch: np.ndarray, layer: Optional[int] = None) -> np.ndarray:
        """Sortie du réseau, ou activations de la couche d'indice `layer` (1 = première couche)"""
        cache = self.forward(batch)
        return cache.output if layer is None else cache.activations[layer]

    def backward(self, cache: ForwardCache, output_grad: np.ndarray,
                 from_logits: bool = False) -> Tuple[List[LayerGradient], np.ndarray]:
        """
        Rétropropagation sans mise à jour

        Args:
            cache: Cache de forward sur ce réseau
            output_grad: Gradient de la perte par rapport à la sortie
            from_logits: output_grad est déjà exprimé par rapport à la dernière pré-activation

        Returns:
            (gradients (dW, db) par couche, gradient par rapport à l'entrée)

        Raises:
            StaleCacheError: si le cache provient d'une autre version du réseau
        """
        if cache.version != self.version:
            raise StaleCacheError(f"Cache de la version {cache.version}, réseau en version {self.version}")
        grad = np.asarray(output_grad, dtype=np.float64)
        if grad.shape != cache.output.shape:
            raise InvalidInputError(f"Gradient {grad.shape} pour une sortie {cache.output.shape}")

        gradients: List[LayerGradient] = [None] * len(self.layers)
        for k in range(len(self.layers) - 1, -1, -1):
            layer = self.layers[k]
            if not (from_logits and k == len(self.layers) - 1):
                grad = activation_backward(layer.activation, grad, cache.pre_activations[k], cache.activations[k + 1])
            gradients[k] = (cache.activations[k].T @ grad, grad.sum(axis=0))
            grad = grad @ layer.weights.T
        return gradients, grad


def binarize_features(activations: np.ndarray, threshold: float = 0.0) -> np.ndarray:
    """Spins ±1 : +1 si l'activation dépasse strictement le seuil, -1 sinon"""
    return np.where(np.asarray(activations) > threshold, 1, -1).astype(np.int8)

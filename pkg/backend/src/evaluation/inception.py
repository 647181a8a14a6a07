"""
Classifieur d'évaluation pour le score d'inception et la FID : réseau dense
image → ReLU → ReLU (caractéristiques) → softmax sur 10 classes.
"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np
from tqdm import tqdm

from src.config.settings import AdamConfig, InceptionConfig
from src.dataset.image_set import ImageSet
from src.evaluation.metrics import GaussianStats, fid_from_stats, inception_score_from_posteriors
from src.neural.adam import AdamState, backward_step
from src.neural.checkpoint import load_network, save_network
from src.neural.network import Network
from src.utils.aan_errors import CheckpointError, InvalidInputError, TrainingFailureError

# Configuration du logging
logger = logging.getLogger("aan_inception")

N_CLASSES = 10
# Couche des caractéristiques FID dans ForwardCache.activations (sortie de la 2e couche)
FEATURE_LAYER = 2


@dataclass(frozen=True, eq=False)
class InceptionModel:
    """Classifieur entraîné et sa précision sur l'ensemble de test"""
    classifier: Network
    accuracy: float
    feature_layer: int = FEATURE_LAYER

    def posteriors(self, images: np.ndarray, batch_size: int = 1000) -> np.ndarray:
        """Probabilités de classe p(y|x), une ligne par image"""
        return np.vstack([self.classifier.predict(images[s:s + batch_size])
                          for s in range(0, len(images), batch_size)])

    def features(self, images: np.ndarray, batch_size: int = 1000) -> np.ndarray:
        """Activations de la couche de caractéristiques"""
        return np.vstack([self.classifier.predict(images[s:s + batch_size], layer=self.feature_layer)
                          for s in range(0, len(images), batch_size)])

    def save(self, directory: Union[str, Path]) -> Path:
        directory = Path(directory)
        save_network(self.classifier, directory / "inception.bin")
        with open(directory / "inception.json", 'w', encoding='utf-8') as f:
            json.dump({"accuracy": self.accuracy, "feature_layer": self.feature_layer}, f, indent=2, sort_keys=True)
            f.write("\n")
        return directory

    @classmethod
    def load(cls, directory: Union[str, Path]) -> "InceptionModel":
        directory = Path(directory)
        info_path = directory / "inception.json"
        if not info_path.exists():
            raise CheckpointError(f"Classifieur d'évaluation introuvable dans {directory}")
        with open(info_path, 'r', encoding='utf-8') as f:
            info = json.load(f)
        return cls(load_network(directory / "inception.bin"), float(info["accuracy"]), int(info["feature_layer"]))


def accuracy(model: InceptionModel, images: ImageSet) -> float:
    if images.labels is None:
        raise InvalidInputError("Précision impossible sans étiquettes")
    predictions = model.posteriors(images.images).argmax(axis=1)
    return float(np.mean(predictions == images.labels))


def train_inception(train: ImageSet, test: ImageSet, config: InceptionConfig,
                    rng: np.random.Generator, show_progress: bool = True) -> InceptionModel:
    """
    Entraîne le classifieur d'évaluation par entropie croisée et Adam

    Args:
        train: Images étiquetées (valeurs signées, comme les sorties du générateur)
        test: Images étiquetées de test
        config: Époques, taille de lot, taux, largeurs, seuil de précision
        rng: Générateur aléatoire
        show_progress: Afficher une barre de progression

    Returns:
        Classifieur et sa précision de test

    Raises:
        TrainingFailureError: si la précision de test reste sous config.accuracy_bar
    """
    if train.labels is None or test.labels is None:
        raise InvalidInputError("Le classifieur d'évaluation requiert des images étiquetées")

    sizes = [train.images.shape[1], config.hidden, config.feature_width, N_CLASSES]
    net = Network.dense(sizes, ["relu", "relu", "softmax"], rng)
    adam = AdamState.for_network(net, AdamConfig(rate=config.rate, beta1=0.9, beta2=0.999))
    targets = np.eye(N_CLASSES)[train.labels]

    n = len(train)
    for epoch in tqdm(range(1, config.epochs + 1), desc="Classifieur d'évaluation", disable=not show_progress):
        order = rng.permutation(n)
        losses = []
        for start in range(0, n, config.batch_size):
            index = order[start:start + config.batch_size]
            cache = net.forward(train.images[index])
            probabilities = cache.output
            losses.append(float(-np.mean(np.log(np.clip(probabilities[np.arange(len(index)), train.labels[index]],
                                                        1e-12, None)))))
            grad = (probabilities - targets[index]) / len(index)
            net, adam = backward_step(net, grad, cache, adam, from_logits=True)
        logger.info(f"Classifieur, époque {epoch}/{config.epochs}: perte {np.mean(losses):.4f}")

    model = InceptionModel(net, 0.0)
    test_accuracy = accuracy(model, test)
    model = InceptionModel(net, test_accuracy)
    logger.info(f"Précision de test du classifieur d'évaluation: {test_accuracy:.4f}")
    if test_accuracy < config.accuracy_bar:
        raise TrainingFailureError(
            f"Précision de test {test_accuracy:.4f} sous le seuil {config.accuracy_bar:.2f}"
        )
    return model


def inception_score(model: InceptionModel, images: np.ndarray, split_count: int = 1) -> float:
    """Score d'inception d'images (au moins 100)"""
    if len(images) < 100:
        raise InvalidInputError(f"Au moins 100 images requises (reçu {len(images)})")
    return inception_score_from_posteriors(model.posteriors(images), split_count)


def fid(model: InceptionModel, real_images: np.ndarray, generated_images: np.ndarray,
        real_stats: Optional[GaussianStats] = None) -> float:
    """
    Distance de Fréchet entre les caractéristiques des images réelles et générées

    Args:
        model: Classifieur d'évaluation
        real_images: Images réelles
        generated_images: Images générées
        real_stats: Statistiques réelles déjà calculées (facultatif)

    Returns:
        FID (≥ 0 aux erreurs numériques près)
    """
    real_stats = real_stats or GaussianStats.from_features(model.features(real_images))
    return fid_from_stats(real_stats, GaussianStats.from_features(model.features(generated_images)))

"""
Évaluation des points de sauvegarde : score d'inception et FID sous le
classifieur d'évaluation du projet (entraîné une fois puis réutilisé).
"""

import logging
from pathlib import Path
from typing import Dict, List, Optional

import pandas as pd

from src.adversarial.aan_trainer import GanState, generate
from src.adversarial.checkpoints import latest_checkpoint, list_checkpoints, load_state
from src.config.settings import RunConfig
from src.evaluation.inception import InceptionModel, accuracy, inception_score, train_inception
from src.evaluation.metrics import GaussianStats, fid_from_stats
from src.experiments.common import latent_setup, signed_mnist
from src.utils.aan_errors import CheckpointError
from src.utils.aan_utils import export_csv, rng_for, write_manifest

# Configuration du logging
logger = logging.getLogger("aan_evaluate")

METRIC_COLUMNS = ["run_id", "epoch", "inception_score", "fid", "classifier_accuracy"]
INCEPTION_DIR = "inception"


def inception_for(config: RunConfig, show_progress: bool = True) -> InceptionModel:
    """
    Classifieur d'évaluation de l'exécution, entraîné s'il est absent

    Le modèle est rangé dans <out_dir>/inception et relu aux appels suivants.
    """
    directory = Path(config.out_dir) / INCEPTION_DIR
    try:
        model = InceptionModel.load(directory)
        logger.info(f"Classifieur d'évaluation relu depuis {directory} (précision {model.accuracy:.4f})")
        return model
    except CheckpointError:
        logger.info("Classifieur d'évaluation absent, entraînement")

    model = train_inception(signed_mnist(config, "train"), signed_mnist(config, "test"),
                            config.inception, rng_for(config.seed, "inception"), show_progress)
    model.save(directory)
    return model


class Evaluator:
    """Évalue des états du réseau contre des statistiques réelles calculées une fois"""

    def __init__(self, config: RunConfig, model: InceptionModel, sampler, n_generated: int,
                 n_real: int):
        self.config = config
        self.model = model
        self.sampler = sampler
        self.n_generated = n_generated
        real = signed_mnist(config, "test", n_real)
        self.classifier_accuracy = accuracy(model, real)
        self.real_stats = GaussianStats.from_features(model.features(real.images))
        self.run_id = Path(config.out_dir).name

    def evaluate(self, state: GanState) -> Dict[str, object]:
        """Une ligne de métriques pour l'époque de `state`"""
        images = generate(state, self.n_generated, rng_for(self.config.seed, "evaluate", state.epoch),
                          self.sampler, self.config.gan)
        row = {
            "run_id": self.run_id,
            "epoch": state.epoch,
            "inception_score": inception_score(self.model, images, self.config.evaluation.splits),
            "fid": fid_from_stats(self.real_stats, GaussianStats.from_features(self.model.features(images))),
            "classifier_accuracy": self.classifier_accuracy,
        }
        logger.info(f"Époque {state.epoch}: IS={row['inception_score']:.3f}, FID={row['fid']:.3f}")
        return row


def selected_checkpoints(config: RunConfig) -> List[Path]:
    """
    Points de sauvegarde à évaluer

    Raises:
        FileNotFoundError: si aucun point de sauvegarde n'est trouvé
    """
    evaluation = config.evaluation
    if evaluation.checkpoint:
        path = Path(evaluation.checkpoint)
        if not (path / "manifest.json").exists():
            raise FileNotFoundError(f"Point de sauvegarde introuvable: {path}")
        return [path]
    if evaluation.all_checkpoints:
        found = list_checkpoints(config.out_dir)
    else:
        latest = latest_checkpoint(config.out_dir)
        found = [latest] if latest is not None else []
    if not found:
        raise FileNotFoundError(f"Aucun point de sauvegarde dans {config.out_dir} "
                                f"(lancer train-gan ou préciser evaluation.checkpoint)")
    return found


def run_evaluation(config: RunConfig, show_progress: bool = True,
                   model: Optional[InceptionModel] = None) -> pd.DataFrame:
    """
    Évalue un ou plusieurs points de sauvegarde

    Args:
        config: Configuration complète (sections evaluation, gan, inception)
        show_progress: Afficher une barre de progression
        model: Classifieur d'évaluation déjà disponible

    Returns:
        Métriques, une ligne par point de sauvegarde
    """
    checkpoints = selected_checkpoints(config)
    gan = config.gan
    graph, sampler = latent_setup(config, gan.sampler_kind, gan.latent_topology, gan.latent_nodes)
    model = model or inception_for(config, show_progress)
    evaluator = Evaluator(config, model, sampler.detached(), config.evaluation.n_generated, config.evaluation.n_real)

    rows = [evaluator.evaluate(load_state(path, graph)) for path in checkpoints]
    metrics = pd.DataFrame(rows, columns=METRIC_COLUMNS)
    out_dir = Path(config.out_dir)
    export_csv(metrics, out_dir / "evaluation.csv", METRIC_COLUMNS)
    write_manifest(out_dir, "evaluate", config.snapshot(), config.seed,
                   extra={"checkpoints": [p.name for p in checkpoints]},
                   filename="evaluate_manifest.json")
    return metrics

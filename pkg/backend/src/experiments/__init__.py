"""
Expériences de bout en bout : comparaison des topologies, entraînement et évaluation
"""

from .common import check_exact_feasible, grid_embedding, latent_setup, signed_mnist
from .evaluate_run import METRIC_COLUMNS, Evaluator, inception_for, run_evaluation
from .gan_run import GanRunResult, run_gan
from .topology_comparison import (
    ComparisonResult,
    check_ordering,
    final_values,
    run_topology_comparison,
    summarize,
    surrogate_parity,
    train_config_for,
)

__all__ = [
    "check_exact_feasible",
    "grid_embedding",
    "latent_setup",
    "signed_mnist",
    "METRIC_COLUMNS",
    "Evaluator",
    "inception_for",
    "run_evaluation",
    "GanRunResult",
    "run_gan",
    "ComparisonResult",
    "check_ordering",
    "final_values",
    "run_topology_comparison",
    "summarize",
    "surrogate_parity",
    "train_config_for",
]

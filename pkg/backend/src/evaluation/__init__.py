"""
Évaluation des générateurs : score d'inception et distance de Fréchet
"""

from .metrics import (
    GaussianStats,
    inception_score_from_posteriors,
    matrix_sqrt_psd,
    trace_sqrt_product,
    fid_from_stats,
    fid_from_features,
)
from .inception import InceptionModel, train_inception, inception_score, fid, accuracy

__all__ = [
    "GaussianStats",
    "InceptionModel",
    "inception_score_from_posteriors",
    "matrix_sqrt_psd",
    "trace_sqrt_product",
    "fid_from_stats",
    "fid_from_features",
    "train_inception",
    "inception_score",
    "fid",
    "accuracy",
]

"""
Configuration des expériences
"""

from .settings import (
    RunConfig,
    GibbsConfig,
    HardwareConfig,
    TrainConfig,
    ReparamConfig,
    AdamConfig,
    GanConfig,
    InceptionConfig,
    TopologyConfig,
    DataConfig,
    EvaluationConfig,
)
from .aan_config import AanConfig, load_key_value_file

__all__ = [
    "AanConfig",
    "RunConfig",
    "GibbsConfig",
    "HardwareConfig",
    "TrainConfig",
    "ReparamConfig",
    "AdamConfig",
    "GanConfig",
    "InceptionConfig",
    "TopologyConfig",
    "DataConfig",
    "EvaluationConfig",
    "load_key_value_file",
]

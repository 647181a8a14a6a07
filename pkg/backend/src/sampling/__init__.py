"""
Échantillonneurs de modèles d'Ising : exact, Gibbs et substitut du recuit matériel
"""

from src.config.settings import GibbsConfig

from .sample_set import SampleOrigin, SampleSet
from .exact_sampler import sample_exact
from .gibbs import GibbsKernel, run_gibbs, sample_gibbs
from .surrogate import ChainLayout, EmbeddedModel, build_layout, embed_model, sample_annealer_surrogate
from .samplers import (
    ExactSampler,
    GibbsSampler,
    AnnealerSurrogateSampler,
    build_sampler,
    hardware_from_config,
)

__all__ = [
    "GibbsConfig",
    "SampleOrigin",
    "SampleSet",
    "sample_exact",
    "sample_gibbs",
    "sample_annealer_surrogate",
    "run_gibbs",
    "GibbsKernel",
    "ChainLayout",
    "EmbeddedModel",
    "build_layout",
    "embed_model",
    "ExactSampler",
    "GibbsSampler",
    "AnnealerSurrogateSampler",
    "build_sampler",
    "hardware_from_config",
]

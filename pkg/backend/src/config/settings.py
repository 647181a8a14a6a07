"""
Modèles Pydantic de configuration des expériences.
Chaque section valide ses invariants à la construction.
"""

import math
from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

SamplerKind = Literal["exact", "gibbs", "annealer_surrogate"]
TopologyKind = Literal["complete", "bipartite", "chimera"]


class _Section(BaseModel):
    """Base commune : clés inconnues refusées, affectation validée"""
    model_config = ConfigDict(extra="forbid", validate_assignment=True)


def _finite(value: float) -> float:
    if not math.isfinite(value):
        raise ValueError("La valeur doit être finie")
    return value


class GibbsConfig(_Section):
    """Paramètres de l'échantillonneur de Gibbs"""
    burn_in: int = Field(100, ge=0)
    thinning: int = Field(1, ge=1)
    n_chains: int = Field(100, ge=1)
    beta: float = Field(1.0, gt=0)
    # auto : mise à jour par blocs si le graphe est biparti, site par site sinon
    scan: Literal["auto", "single_site", "block"] = "auto"
    persistent: bool = False

    @field_validator("beta")
    @classmethod
    def beta_finite(cls, v):
        return _finite(v)


class HardwareConfig(_Section):
    """Graphe matériel simulé pour l'échantillonneur de substitution du recuit"""
    rows: int = Field(16, ge=1)
    cols: int = Field(16, ge=1)
    shore: int = Field(4, ge=1)
    dead_qubits: List[int] = Field(default_factory=list)
    dead_couplers: List[List[int]] = Field(default_factory=list)
    # Convention matérielle : -1 est le verrou ferromagnétique le plus fort
    chain_strength: float = -1.0
    auto_scale: bool = True
    embedding_tries: int = Field(20, ge=1)

    @field_validator("dead_couplers")
    @classmethod
    def couplers_are_pairs(cls, v):
        if any(len(pair) != 2 for pair in v):
            raise ValueError("Chaque coupleur mort doit être une paire de qubits")
        return v


class TrainConfig(_Section):
    """Entraînement de la machine de Boltzmann (produit ηβ regroupé en un seul taux)"""
    effective_rate: float = Field(0.001, gt=0)
    epochs: int = Field(1000, ge=1)
    samples_per_step: int = Field(1000, ge=1)
    sampler_kind: SamplerKind = "gibbs"
    beta: float = Field(1.0, gt=0)
    init_scale: float = Field(0.1, ge=0)
    enumeration_cap: int = Field(20, ge=1, le=30)
    log_every: int = Field(100, ge=1)

    @field_validator("effective_rate", "beta")
    @classmethod
    def finite(cls, v):
        return _finite(v)


class ReparamConfig(_Section):
    """Reparamétrisation des spins latents"""
    alpha: float = Field(4.0, gt=0)

    @field_validator("alpha")
    @classmethod
    def alpha_finite(cls, v):
        return _finite(v)


class AdamConfig(_Section):
    """Optimiseur Adam des réseaux"""
    rate: float = Field(0.0002, ge=0)
    beta1: float = Field(0.5, ge=0, lt=1)
    beta2: float = Field(0.999, ge=0, lt=1)
    epsilon: float = Field(1e-8, gt=0)


class GanConfig(_Section):
    """Boucle adversariale associative"""
    epochs: int = Field(50, ge=1)
    batch_size: int = Field(64, ge=1)
    # None : un passage complet sur les données par époque
    batches_per_epoch: Optional[int] = Field(None, ge=1)
    # None : 3 · batch_size · batches_per_epoch
    sample_pool_size: Optional[int] = Field(None, ge=3)
    latent_nodes: int = Field(100, ge=1)
    latent_topology: TopologyKind = "chimera"
    sampler_kind: SamplerKind = "gibbs"
    latent_prior: Literal["boltzmann", "uniform"] = "boltzmann"
    train_latent: bool = True
    bm_rate: float = Field(0.0002, ge=0)
    label_smoothing: float = Field(0.1, ge=0, le=0.5)
    reparam: ReparamConfig = Field(default_factory=ReparamConfig)
    adam: AdamConfig = Field(default_factory=AdamConfig)
    discriminator_hidden: List[int] = Field(default_factory=lambda: [512, 256, 128])
    generator_hidden: List[int] = Field(default_factory=lambda: [256, 512])
    eval_every: int = Field(0, ge=0)
    eval_images: int = Field(10000, ge=100)
    grid_every: int = Field(1, ge=0)

    @model_validator(mode="after")
    def pool_covers_batches(self):
        if self.batches_per_epoch is not None and self.sample_pool_size is not None:
            needed = 3 * self.batch_size * self.batches_per_epoch
            if self.sample_pool_size < needed:
                raise ValueError(f"sample_pool_size ({self.sample_pool_size}) < 3·n·batches ({needed})")
        return self


class InceptionConfig(_Section):
    """Classifieur d'évaluation (score d'inception et FID)"""
    epochs: int = Field(8, ge=1)
    batch_size: int = Field(128, ge=1)
    rate: float = Field(0.001, gt=0)
    hidden: int = Field(256, ge=1)
    feature_width: int = Field(64, ge=1)
    accuracy_bar: float = Field(0.90, ge=0, le=1)


class TopologyConfig(_Section):
    """Comparaison des topologies sur MNIST réduit 6x6 binarisé"""
    image_size: int = Field(6, ge=1, le=28)
    topologies: List[TopologyKind] = Field(default_factory=lambda: ["complete", "bipartite", "chimera"])
    samplers: List[SamplerKind] = Field(default_factory=lambda: ["gibbs", "annealer_surrogate"])
    n_seeds: int = Field(5, ge=1)
    epochs: int = Field(1000, ge=1)
    classical_rate: float = Field(0.001, gt=0)
    surrogate_rate: float = Field(0.03, gt=0)
    samples_per_step: int = Field(1000, ge=1)
    # None : toutes les images d'entraînement
    n_images: Optional[int] = Field(None, ge=1)


class DataConfig(_Section):
    """Emplacement des fichiers MNIST et du cache interne"""
    data_dir: str = "./data/mnist"
    cache_dir: str = "./data/cache"


class EvaluationConfig(_Section):
    """Évaluation d'un point de sauvegarde"""
    n_generated: int = Field(10000, ge=100)
    n_real: int = Field(10000, ge=100)
    splits: int = Field(1, ge=1)
    checkpoint: Optional[str] = None
    all_checkpoints: bool = False


class RunConfig(_Section):
    """Configuration complète d'une commande"""
    seed: int = Field(0, ge=0)
    out_dir: str = "./runs/default"
    quiet: bool = False
    data: DataConfig = Field(default_factory=DataConfig)
    gibbs: GibbsConfig = Field(default_factory=GibbsConfig)
    hardware: HardwareConfig = Field(default_factory=HardwareConfig)
    train: TrainConfig = Field(default_factory=TrainConfig)
    topology: TopologyConfig = Field(default_factory=TopologyConfig)
    gan: GanConfig = Field(default_factory=GanConfig)
    inception: InceptionConfig = Field(default_factory=InceptionConfig)
    evaluation: EvaluationConfig = Field(default_factory=EvaluationConfig)

    def snapshot(self) -> dict:
        """Instantané sérialisable (manifestes, empreintes)"""
        return self.model_dump(mode="json")

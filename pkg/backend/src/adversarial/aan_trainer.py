"""
Boucle d'entraînement du réseau adversarial associatif.

À chaque itération : pas du discriminateur, pas de la machine de Boltzmann latente
(moments des caractéristiques binarisées des données contre ceux du second tiers
du lot latent), puis pas du générateur. Un seul tirage latent est fait par époque.
"""

import logging
from dataclasses import asdict, dataclass, field, replace
from typing import Optional, Tuple

import numpy as np
import pandas as pd

from src.adversarial.losses import discriminator_loss, generator_loss, smoothed_labels
from src.boltzmann.bm_trainer import gradient_step, l1_norm
from src.config.settings import GanConfig
from src.dataset.image_set import ImageSet
from src.ising.ising_model import IsingModel
from src.ising.moments import moments
from src.latent.reparam import reparametrize, uniform_prior
from src.neural.adam import AdamState, backward_step
from src.neural.network import Network, binarize_features
from src.topology.graphs import LogicalGraph
from src.utils.aan_errors import ConfigError, InvalidInputError

# Configuration du logging
logger = logging.getLogger("aan_trainer")

LOSS_COLUMNS = ["epoch", "discriminator_loss", "generator_loss", "latent_l1", "chain_break_fraction"]


@dataclass(frozen=True)
class EpochLosses:
    """Pertes moyennes d'une époque"""
    epoch: int
    discriminator_loss: float
    generator_loss: float
    # Écart L1 entre les corrélations des caractéristiques binarisées et celles du tirage latent
    latent_l1: float
    chain_break_fraction: Optional[float] = None


@dataclass(frozen=True, eq=False)
class GanState:
    """État complet entre deux époques"""
    generator: Network
    discriminator: Network
    latent_model: IsingModel
    generator_adam: AdamState
    discriminator_adam: AdamState
    epoch: int = 0
    losses: Tuple[EpochLosses, ...] = field(default_factory=tuple)

    def __post_init__(self):
        feature_width = self.discriminator.layers[-2].output_dim if len(self.discriminator.layers) > 1 else None
        if self.latent_model.n_nodes != self.generator.input_dim:
            raise InvalidInputError(
                f"Modèle latent à {self.latent_model.n_nodes} nœuds, générateur d'entrée {self.generator.input_dim}"
            )
        if feature_width != self.latent_model.n_nodes:
            raise InvalidInputError(f"Couche de caractéristiques de largeur {feature_width}, "
                                    f"modèle latent à {self.latent_model.n_nodes} nœuds")

    @property
    def feature_layer(self) -> int:
        """Indice (dans ForwardCache.activations) de la couche de caractéristiques du discriminateur"""
        return len(self.discriminator.layers) - 1

    def losses_frame(self) -> pd.DataFrame:
        return pd.DataFrame([asdict(record) for record in self.losses], columns=LOSS_COLUMNS)


def build_networks(config: GanConfig, image_dim: int, rng: np.random.Generator) -> Tuple[Network, Network]:
    """
    Générateur et discriminateur denses

    Discriminateur : image → couches cachées (leaky ReLU) → caractéristiques (tanh,
    largeur latent_nodes) → probabilité (sigmoïde). Générateur : latent → couches
    cachées (ReLU) → image (tanh).

    Returns:
        (générateur, discriminateur)
    """
    d_sizes = [image_dim] + list(config.discriminator_hidden) + [config.latent_nodes, 1]
    d_activations = ["leaky_relu"] * len(config.discriminator_hidden) + ["tanh", "sigmoid"]
    g_sizes = [config.latent_nodes] + list(config.generator_hidden) + [image_dim]
    g_activations = ["relu"] * len(config.generator_hidden) + ["tanh"]
    generator = Network.dense(g_sizes, g_activations, rng)
    discriminator = Network.dense(d_sizes, d_activations, rng)
    return generator, discriminator


def initial_state(config: GanConfig, latent_graph: LogicalGraph, image_dim: int,
                  rng: np.random.Generator, init_scale: float = 0.1) -> GanState:
    """État initial : réseaux aléatoires, modèle latent uniforme dans [-init_scale, init_scale]"""
    if latent_graph.n_nodes != config.latent_nodes:
        raise ConfigError(f"Graphe latent à {latent_graph.n_nodes} nœuds, latent_nodes={config.latent_nodes}")
    generator, discriminator = build_networks(config, image_dim, rng)
    latent_model = IsingModel.random(latent_graph, init_scale, rng)
    return GanState(
        generator=generator,
        discriminator=discriminator,
        latent_model=latent_model,
        generator_adam=AdamState.for_network(generator, config.adam),
        discriminator_adam=AdamState.for_network(discriminator, config.adam),
    )


def batch_plan(config: GanConfig, n_images: int) -> Tuple[int, int]:
    """
    Nombre d'itérations par époque et taille du tirage latent

    Returns:
        (itérations, taille du tirage m)

    Raises:
        ConfigError: si m < 3·n·itérations
    """
    batches = config.batches_per_epoch or max(1, n_images // config.batch_size)
    needed = 3 * config.batch_size * batches
    pool_size = config.sample_pool_size or needed
    if pool_size < needed:
        raise ConfigError(f"Tirage latent de {pool_size} échantillons, {needed} requis (3·n·itérations)")
    return batches, pool_size


def latent_codes(spins: np.ndarray, config: GanConfig, rng: np.random.Generator) -> np.ndarray:
    """Entrées continues du générateur : spins reparamétrés, ou bruit uniforme de référence"""
    if config.latent_prior == "uniform":
        return uniform_prior(spins.shape, rng)
    return reparametrize(spins, config.reparam.alpha, rng)


def train_epoch(state: GanState, data: ImageSet, config: GanConfig, sampler,
                rng: np.random.Generator) -> GanState:
    """
    Une époque de l'entraînement adversarial associatif

    Args:
        state: État courant
        data: Images signées dans [-1, 1]
        config: Paramètres de la boucle
        sampler: Échantillonneur du modèle latent (sample(model, m, rng))
        rng: Générateur de l'époque

    Returns:
        Nouvel état (époque incrémentée, pertes ajoutées)
    """
    if data.images.shape[1] != state.generator.output_dim:
        raise InvalidInputError(f"Images de dimension {data.images.shape[1]}, "
                                f"générateur de sortie {state.generator.output_dim}")
    n = config.batch_size
    batches, pool_size = batch_plan(config, len(data))

    pool = sampler.sample(state.latent_model, pool_size, rng)
    spins = pool.states[rng.permutation(pool_size)]
    order = rng.permutation(len(data))

    generator, discriminator = state.generator, state.discriminator
    g_adam, d_adam = state.generator_adam, state.discriminator_adam
    latent_model = state.latent_model
    feature_layer = state.feature_layer
    train_latent = config.train_latent and config.latent_prior == "boltzmann"

    d_losses, g_losses, latent_l1 = [], [], []
    for b in range(batches):
        disc_spins = spins[3 * b * n:(3 * b + 1) * n]
        model_spins = spins[(3 * b + 1) * n:(3 * b + 2) * n]
        gen_spins = spins[(3 * b + 2) * n:(3 * b + 3) * n]
        x = data.images[np.take(order, np.arange(b * n, (b + 1) * n), mode="wrap")]

        # Discriminateur : lot réel et lot généré dans une même propagation
        fake = generator.predict(latent_codes(disc_spins, config, rng))
        labels = np.concatenate([
            smoothed_labels(n, True, config.label_smoothing, rng),
            smoothed_labels(n, False, config.label_smoothing, rng),
        ])
        cache = discriminator.forward(np.vstack([x, fake]))
        d_out = cache.output[:, 0]
        d_losses.append(discriminator_loss(d_out[:n], d_out[n:], labels[:n], labels[n:]))
        logit_grad = ((d_out - labels) / n)[:, None]
        discriminator, d_adam = backward_step(discriminator, logit_grad, cache, d_adam, from_logits=True)

        # Machine de Boltzmann : caractéristiques binarisées des données contre le second tiers
        features = binarize_features(discriminator.predict(x, layer=feature_layer))
        data_moments, model_moments = moments(features), moments(model_spins)
        latent_l1.append(l1_norm(data_moments, model_moments))
        if train_latent:
            latent_model = gradient_step(latent_model, data_moments, model_moments, config.bm_rate)

        # Générateur, à travers le discriminateur mis à jour
        g_cache = generator.forward(latent_codes(gen_spins, config, rng))
        d_cache = discriminator.forward(g_cache.output)
        d_fake = d_cache.output[:, 0]
        g_losses.append(generator_loss(d_fake))
        _, input_grad = discriminator.backward(d_cache, ((d_fake - 1.0) / n)[:, None], from_logits=True)
        generator, g_adam = backward_step(generator, input_grad, g_cache, g_adam)

    epoch = state.epoch + 1
    record = EpochLosses(epoch, float(np.mean(d_losses)), float(np.mean(g_losses)),
                         float(np.mean(latent_l1)), pool.chain_break_fraction)
    logger.info(f"Époque {epoch}: perte D={record.discriminator_loss:.4f}, perte G={record.generator_loss:.4f}, "
                f"L1 latent={record.latent_l1:.3f}")
    return replace(
        state,
        generator=generator,
        discriminator=discriminator,
        latent_model=latent_model,
        generator_adam=g_adam,
        discriminator_adam=d_adam,
        epoch=epoch,
        losses=state.losses + (record,),
    )


def generate(state: GanState, count: int, rng: np.random.Generator, sampler,
             config: Optional[GanConfig] = None) -> np.ndarray:
    """
    Génère des images à partir du modèle latent courant

    Args:
        state: État entraîné ou initial
        count: Nombre d'images
        rng: Générateur aléatoire
        sampler: Échantillonneur du modèle latent (ignoré avec l'a priori uniforme)
        config: Paramètres (a priori latent, alpha)

    Returns:
        Matrice count × dimension d'image, valeurs dans [-1, 1]
    """
    config = config or GanConfig(latent_nodes=state.latent_model.n_nodes)
    if config.latent_prior == "uniform":
        codes = uniform_prior((count, state.generator.input_dim), rng)
    else:
        spins = sampler.sample(state.latent_model, count, rng).states
        codes = reparametrize(spins, config.reparam.alpha, rng)
    return generator_outputs(state.generator, codes)


def generator_outputs(generator: Network, codes: np.ndarray, batch_size: int = 1000) -> np.ndarray:
    """Sorties du générateur par lots"""
    return np.vstack([generator.predict(codes[start:start + batch_size])
                      for start in range(0, codes.shape[0], batch_size)])

#!/usr/bin/env python3
"""
Vérifie la fidélité de l'échantillonneur de Gibbs contre l'énumération exacte

Usage:
    python scripts/check_sampler_fidelity.py [--models 10] [--nodes 8] [--samples 1000000]

Examples:
    # Contrôle complet (10 modèles aléatoires à 8 nœuds, 10^6 échantillons)
    python scripts/check_sampler_fidelity.py

    # Contrôle rapide
    python scripts/check_sampler_fidelity.py --models 3 --samples 100000 --tolerance 0.05
"""

import sys
import time
import argparse
import logging
from pathlib import Path

# Ajout du répertoire parent au chemin
sys.path.insert(0, str(Path(__file__).parent.parent))

import pandas as pd

from src.config.settings import GibbsConfig
from src.ising.exact import ExactDistribution, exact_distribution, total_variation
from src.ising.ising_model import IsingModel
from src.sampling.gibbs import sample_gibbs
from src.topology.graphs import build_complete
from src.utils.aan_utils import export_csv, format_duration, rng_for

# Configuration du logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger("aan_sampler_fidelity")


def check_model(index: int, n_nodes: int, samples: int, config: GibbsConfig, seed: int) -> dict:
    """
    Compare la distribution empirique de Gibbs à la distribution exacte d'un modèle aléatoire

    Args:
        index: Numéro du modèle
        n_nodes: Nombre de nœuds (graphe complet)
        samples: Nombre d'échantillons de Gibbs
        config: Paramètres de l'échantillonneur
        seed: Graine maîtresse

    Returns:
        Ligne de résultat (distance en variation totale, durée)
    """
    model = IsingModel.random(build_complete(n_nodes), 1.0, rng_for(seed, "model", index))
    start_time = time.time()
    drawn = sample_gibbs(model, config, samples, rng_for(seed, "gibbs", index))
    elapsed = time.time() - start_time

    distance = total_variation(ExactDistribution.empirical(drawn.states),
                               exact_distribution(model, config.beta))
    logger.info(f"Modèle {index}: TV={distance:.5f} en {format_duration(elapsed)}")
    return {"model": index, "total_variation": distance, "seconds": elapsed}


def main():
    """Point d'entrée principal"""
    parser = argparse.ArgumentParser(
        description="Fidélité de l'échantillonneur de Gibbs sur des modèles énumérables",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=__doc__
    )
    parser.add_argument('--models', type=int, default=10, help='Nombre de modèles aléatoires (défaut: 10)')
    parser.add_argument('--nodes', type=int, default=8, help='Nœuds par modèle (défaut: 8)')
    parser.add_argument('--samples', type=int, default=1_000_000, help="Échantillons par modèle (défaut: 10^6)")
    parser.add_argument('--burn-in', type=int, default=1000, help='Balayages de chauffe (défaut: 1000)')
    parser.add_argument('--chains', type=int, default=1000, help='Chaînes parallèles (défaut: 1000)')
    parser.add_argument('--tolerance', type=float, default=0.02, help='Distance maximale (défaut: 0.02)')
    parser.add_argument('--seed', type=int, default=0, help='Graine maîtresse (défaut: 0)')
    parser.add_argument('--csv', help='Export CSV des résultats')

    args = parser.parse_args()

    try:
        config = GibbsConfig(burn_in=args.burn_in, n_chains=args.chains, beta=1.0)
        rows = [check_model(i, args.nodes, args.samples, config, args.seed) for i in range(args.models)]
        results = pd.DataFrame(rows)
        if args.csv:
            export_csv(results, args.csv)

        failures = results[results["total_variation"] >= args.tolerance]
        print(f"\nTV maximale: {results['total_variation'].max():.5f} (seuil {args.tolerance})")
        print(f"Durée maximale par modèle: {format_duration(results['seconds'].max())}")
        if len(failures):
            logger.error(f"{len(failures)} modèle(s) au-delà du seuil: {failures['model'].tolist()}")
            sys.exit(2)

    except ValueError as e:
        logger.error(f"Erreur de validation: {e}")
        sys.exit(2)

    except Exception as e:
        logger.error(f"Contrôle interrompu: {e}", exc_info=True)
        sys.exit(3)


if __name__ == '__main__':
    main()

"""
Point d'entrée du pipeline de réseau adversarial associatif.

Usage:
    python src/main.py compare-topologies [--sampler gibbs] [--lr 0.001] [--epochs 1000]
    python src/main.py train-gan --topology chimera --sampler gibbs --out runs/aan_chimera
    python src/main.py evaluate --out runs/aan_chimera [--all]

Options communes : --config FICHIER (clé=valeur), --seed N, --out DIR,
--sampler {exact,gibbs,surrogate}, --topology {complete,bipartite,chimera},
--epochs N, --lr X, --quiet.

Codes de sortie : 0 succès, 1 fichier d'entrée manquant, 2 configuration invalide,
3 échec inattendu.
"""

import os
import sys
import time
import logging
import argparse
from pathlib import Path
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv

# Ajout du répertoire backend au chemin d'import
sys.path.insert(0, str(Path(__file__).parent.parent))

from src import __version__
from src.config.aan_config import AanConfig
from src.config.settings import RunConfig
from src.experiments.common import canonical_sampler
from src.utils.aan_utils import format_duration

logger = logging.getLogger("aan_main")

COMMANDS = ("compare-topologies", "train-gan", "evaluate")


def configure_logging(environment: str, quiet: bool = False) -> None:
    """Journal fichier aan_main_<env>.log et sortie console"""
    level = logging.INFO if environment == "production" else logging.DEBUG
    handlers: List[logging.Handler] = [logging.FileHandler(f"aan_main_{environment}.log")]
    if not quiet:
        handlers.append(logging.StreamHandler())
    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers,
        force=True,
    )


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', help='Fichier de configuration clé=valeur')
    common.add_argument('--seed', type=int, help='Graine maîtresse')
    common.add_argument('--out', help='Répertoire de sortie')
    common.add_argument('--sampler', choices=["exact", "gibbs", "surrogate"],
                        help="Échantillonneur du modèle d'Ising")
    common.add_argument('--topology', choices=["complete", "bipartite", "chimera"],
                        help='Topologie de la machine de Boltzmann')
    common.add_argument('--epochs', type=int, help="Nombre d'époques")
    common.add_argument('--lr', type=float, help="Taux d'apprentissage")
    common.add_argument('--quiet', action='store_true', help='Sans barre de progression ni sortie console')

    parser = argparse.ArgumentParser(
        description='Réseau adversarial associatif à a priori latent de Boltzmann',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=__doc__,
    )
    parser.add_argument('--version', action='version', version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest='command', required=True)

    subparsers.add_parser('compare-topologies', parents=[common],
                          help='Compare les topologies sur MNIST 6x6 binarisé')
    subparsers.add_parser('train-gan', parents=[common],
                          help="Entraîne le réseau adversarial associatif")
    evaluate = subparsers.add_parser('evaluate', parents=[common],
                                     help="Score d'inception et FID des points de sauvegarde")
    evaluate.add_argument('--checkpoint', help='Répertoire epoch_NNNN à évaluer')
    evaluate.add_argument('--all', action='store_true', help='Évaluer tous les points de sauvegarde')
    return parser


def overrides_from_args(args: argparse.Namespace) -> Dict[str, Any]:
    """
    Traduit les options de la ligne de commande en clés pointées de configuration

    Pour compare-topologies, --lr fixe le taux de l'échantillonneur choisi (les deux
    taux sans --sampler); pour les autres commandes il fixe le taux d'Adam.
    """
    sampler = canonical_sampler(args.sampler) if args.sampler else None
    overrides: Dict[str, Any] = {
        "seed": args.seed,
        "out_dir": args.out,
        "quiet": True if args.quiet else None,
    }

    if args.command == "compare-topologies":
        overrides["topology.samplers"] = [sampler] if sampler else None
        overrides["topology.topologies"] = [args.topology] if args.topology else None
        overrides["topology.epochs"] = args.epochs
        if args.lr is not None:
            if sampler in (None, "exact", "gibbs"):
                overrides["topology.classical_rate"] = args.lr
            if sampler in (None, "annealer_surrogate"):
                overrides["topology.surrogate_rate"] = args.lr
    else:
        overrides["gan.sampler_kind"] = sampler
        overrides["gan.latent_topology"] = args.topology
        overrides["gan.epochs"] = args.epochs
        overrides["gan.adam.rate"] = args.lr

    if args.command == "evaluate":
        overrides["evaluation.checkpoint"] = args.checkpoint
        overrides["evaluation.all_checkpoints"] = True if args.all else None
    return overrides


def run_command(command: str, config: RunConfig) -> None:
    show_progress = not config.quiet
    if command == "compare-topologies":
        from src.experiments.topology_comparison import run_topology_comparison
        result = run_topology_comparison(config, show_progress)
        for sampler in result.final["sampler"].unique():
            logger.info(f"{sampler}: ordre complete < bipartite < chimera "
                        f"{'vérifié' if result.ordering_holds(sampler) else 'non vérifié'}")
    elif command == "train-gan":
        from src.experiments.gan_run import run_gan
        result = run_gan(config, show_progress)
        logger.info(f"Entraînement terminé à l'époque {result.state.epoch}")
    elif command == "evaluate":
        from src.experiments.evaluate_run import run_evaluation
        metrics = run_evaluation(config, show_progress)
        logger.info(f"{len(metrics)} point(s) de sauvegarde évalué(s)")


def main(argv: Optional[List[str]] = None) -> int:
    """Point d'entrée principal; renvoie le code de sortie"""
    load_dotenv()
    environment = os.getenv("AAN_ENV", "test")
    config_path = os.getenv("AAN_CONFIG_PATH", "./src/config")

    args = build_parser().parse_args(argv)
    configure_logging(environment, args.quiet)
    start_time = time.time()

    try:
        config = AanConfig(config_path).build(args.config, overrides_from_args(args))
        logger.info(f"Commande {args.command} (graine {config.seed}, sortie {config.out_dir})")
        run_command(args.command, config)

    except FileNotFoundError as e:
        logger.error(f"Fichier introuvable: {e}")
        return 1

    except ValueError as e:
        logger.error(f"Erreur de validation: {e}")
        return 2

    except Exception as e:
        logger.error(f"Échec de la commande {args.command}: {e}", exc_info=True)
        return 3

    logger.info(f"Commande {args.command} terminée en {format_duration(time.time() - start_time)}")
    return 0


if __name__ == '__main__':
    sys.exit(main())

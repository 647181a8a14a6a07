"""
Module d'utilitaires pour le pipeline de réseau adversarial associatif.
Fournit des fonctions communes utilisées par différents composants :
flux aléatoires dérivés d'une graine maîtresse, manifestes, exports CSV et images.
"""

import json
import math
import zlib
import hashlib
import logging
from pathlib import Path
from typing import Dict, Any, Optional, List, Union, Sequence

import numpy as np
import pandas as pd
from PIL import Image

from src import __version__

# Configuration du logging
logger = logging.getLogger("aan_utils")


def format_duration(seconds: float) -> str:
    """
    Durée lisible d'une commande : "42.0s", "3 min 07 s" ou "2 h 05 min"

    Au-delà d'une heure les secondes sont omises (entraînements longs).
    """
    if seconds < 0 or not math.isfinite(seconds):
        raise ValueError(f"Durée invalide: {seconds}")
    if seconds < 60:
        return f"{seconds:.1f}s"
    minutes, secs = divmod(int(round(seconds)), 60)
    if minutes < 60:
        return f"{minutes} min {secs:02d} s"
    hours, minutes = divmod(minutes, 60)
    return f"{hours} h {minutes:02d} min"


def rng_for(seed: int, *keys: Union[str, int]) -> np.random.Generator:
    """
    Dérive un générateur indépendant de la graine maîtresse

    Les clés textuelles sont converties par crc32 (stable entre exécutions
    et plateformes), les clés entières sont utilisées telles quelles.

    Args:
        seed: Graine maîtresse
        keys: Chemin du sous-système, ex: ("gan", "epoch", 3)

    Returns:
        Générateur numpy
    """
    spawn_key = tuple(
        zlib.crc32(k.encode("utf-8")) if isinstance(k, str) else int(k)
        for k in keys
    )
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=spawn_key))


def config_hash(snapshot: Dict[str, Any]) -> str:
    """Empreinte SHA-256 d'un instantané de configuration (JSON canonique)"""
    canonical = json.dumps(snapshot, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def parameter_digest(*arrays: np.ndarray) -> str:
    """Identifiant court (SHA-1) d'un jeu de paramètres"""
    digest = hashlib.sha1()
    for array in arrays:
        digest.update(np.ascontiguousarray(array, dtype="<f8").tobytes())
    return digest.hexdigest()[:12]


def write_manifest(out_dir: Union[str, Path], command: str, snapshot: Dict[str, Any],
                   seed: int, extra: Optional[Dict[str, Any]] = None,
                   filename: str = "manifest.json") -> Path:
    """
    Écrit le manifeste d'une commande à côté de ses sorties

    Aucun horodatage n'y figure : deux exécutions identiques produisent
    le même fichier octet pour octet.

    Args:
        out_dir: Répertoire de sortie
        command: Nom de la commande
        snapshot: Instantané de configuration
        seed: Graine maîtresse
        extra: Champs supplémentaires (époque, etc.)
        filename: Nom du fichier manifeste

    Returns:
        Chemin du manifeste écrit
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    manifest = {
        "command": command,
        "version": __version__,
        "seed": int(seed),
        "config_hash": config_hash(snapshot),
        "config": snapshot,
    }
    if extra:
        manifest.update(extra)

    path = out_dir / filename
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(manifest, f, ensure_ascii=False, indent=2, sort_keys=True, default=str)
        f.write("\n")
    return path


def read_manifest(path: Union[str, Path]) -> Dict[str, Any]:
    """Relit un manifeste JSON"""
    with open(path, 'r', encoding='utf-8') as f:
        return json.load(f)


def export_csv(rows: Union[List[Dict[str, Any]], pd.DataFrame], path: Union[str, Path],
               columns: Optional[Sequence[str]] = None, float_format: Optional[str] = "%.10g") -> Path:
    """
    Exporte des enregistrements en CSV (sans index)

    Args:
        rows: Liste de dictionnaires ou DataFrame
        path: Fichier de destination
        columns: Ordre des colonnes (facultatif)
        float_format: Format des réels, None pour la précision complète

    Returns:
        Chemin du fichier écrit
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = rows if isinstance(rows, pd.DataFrame) else pd.DataFrame(rows, columns=columns)
    if columns is not None:
        frame = frame.reindex(columns=list(columns))
    frame.to_csv(path, index=False, float_format=float_format)
    logger.info(f"CSV écrit: {path} ({len(frame)} lignes)")
    return path


def save_image_grid(images: np.ndarray, path: Union[str, Path], height: int, width: int,
                    tiles: int = 8, value_range: tuple = (-1.0, 1.0)) -> Path:
    """
    Assemble des images en une grille tiles×tiles et l'écrit en PGM niveaux de gris

    Args:
        images: Matrice n × (height·width)
        path: Fichier de destination (.pgm)
        height: Hauteur d'une image
        width: Largeur d'une image
        tiles: Nombre de tuiles par côté
        value_range: Intervalle des valeurs de pixels

    Returns:
        Chemin du fichier écrit
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    count = tiles * tiles
    batch = np.zeros((count, height * width))
    available = min(count, len(images))
    batch[:available] = images[:available]

    low, high = value_range
    scaled = np.clip((batch - low) / (high - low), 0.0, 1.0)
    pixels = np.rint(scaled * 255).astype(np.uint8).reshape(tiles, tiles, height, width)
    grid = pixels.transpose(0, 2, 1, 3).reshape(tiles * height, tiles * width)

    Image.fromarray(grid).save(path, format="PPM")
    return path

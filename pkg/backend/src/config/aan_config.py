"""
Module de configuration du pipeline de réseau adversarial associatif.
Gère le chargement en couches : valeurs par défaut, fichier YAML d'environnement,
fichier clé=valeur de l'exécution, puis options de la ligne de commande.
"""

import os
import copy
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Union

import yaml
from pydantic import ValidationError

from src.config.settings import RunConfig
from src.utils.aan_errors import ConfigError

# Configuration du logging
logger = logging.getLogger("aan_config")


class AanConfig:
    """Gestionnaire de configuration des expériences"""

    def __init__(self, config_path: str = "./src/config"):
        """
        Initialise la configuration d'environnement

        Args:
            config_path: Chemin vers le répertoire de configuration
        """
        self.config_path = config_path
        self.environment = os.getenv("AAN_ENV", "test")
        self.config = self._load_config()

        if self.config is None:
            logger.warning("Configuration invalide ou manquante. Utilisation des valeurs par défaut.")
            self.config = {}

    def _load_config(self) -> Optional[Dict[str, Any]]:
        """
        Charge la configuration depuis le fichier YAML approprié selon l'environnement

        Returns:
            Configuration chargée ou None en cas d'erreur
        """
        try:
            config_file = f"aan_config_{self.environment}.yaml"

            if os.path.isdir(self.config_path):
                config_path = os.path.join(self.config_path, config_file)
            else:
                config_path = os.path.join(os.path.dirname(self.config_path), config_file)

            logger.info(f"Environnement {self.environment} détecté, utilisation de la configuration: {config_path}")

            if not os.path.exists(config_path):
                logger.warning(f"Fichier de configuration {config_path} non trouvé.")
                return None

            with open(config_path, 'r', encoding='utf-8') as f:
                config = yaml.safe_load(f)

            if config is not None and not isinstance(config, dict):
                logger.error("Structure de configuration invalide.")
                return None

            return config or {}

        except Exception as e:
            logger.error(f"Erreur lors du chargement de la configuration: {e}")
            return None

    def build(self, run_file: Optional[Union[str, Path]] = None,
              overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
        """
        Construit la configuration d'une commande

        Args:
            run_file: Fichier clé=valeur facultatif (--config)
            overrides: Clés pointées issues de la ligne de commande

        Returns:
            Configuration validée

        Raises:
            ConfigError: si une valeur est invalide ou une clé inconnue
        """
        merged = copy.deepcopy(self.config)

        if run_file is not None:
            deep_merge(merged, load_key_value_file(run_file))

        for key, value in (overrides or {}).items():
            if value is not None:
                set_dotted(merged, key, value)

        try:
            return RunConfig.model_validate(merged)
        except ValidationError as e:
            raise ConfigError(f"Configuration invalide: {e}") from e


def set_dotted(target: Dict[str, Any], dotted_key: str, value: Any) -> None:
    """Affecte une valeur à une clé pointée (ex: gibbs.burn_in)"""
    parts = dotted_key.split(".")
    node = target
    for part in parts[:-1]:
        child = node.setdefault(part, {})
        if not isinstance(child, dict):
            raise ConfigError(f"La clé {part} n'est pas une section ({dotted_key})")
        node = child
    node[parts[-1]] = value


def deep_merge(base: Dict[str, Any], update: Dict[str, Any]) -> Dict[str, Any]:
    """Fusion récursive de update dans base (base est modifié)"""
    for key, value in update.items():
        if isinstance(value, dict) and isinstance(base.get(key), dict):
            deep_merge(base[key], value)
        else:
            base[key] = value
    return base


def load_key_value_file(path: Union[str, Path]) -> Dict[str, Any]:
    """
    Lit un fichier texte clé=valeur

    Les clés pointées désignent des sections, les valeurs sont typées par
    l'analyseur de scalaires YAML, '#' commence un commentaire.

    Args:
        path: Fichier de configuration

    Returns:
        Dictionnaire imbriqué
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Fichier de configuration introuvable: {path}")

    result: Dict[str, Any] = {}
    with open(path, 'r', encoding='utf-8') as f:
        for number, raw in enumerate(f, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{number}: ligne sans '=': {raw.strip()}")
            key, value = (part.strip() for part in line.split("=", 1))
            if not key:
                raise ConfigError(f"{path}:{number}: clé vide")
            try:
                parsed = yaml.safe_load(value) if value else None
            except yaml.YAMLError as e:
                raise ConfigError(f"{path}:{number}: valeur illisible ({e})") from e
            set_dotted(result, key, parsed)
    return result

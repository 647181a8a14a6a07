"""
Exceptions du pipeline de réseau adversarial associatif.
Chaque type dérive aussi de l'exception native correspondante (ValueError,
RuntimeError, ...) pour que les appelants puissent intercepter l'une ou l'autre.
"""

from typing import Any, Dict, Optional


class AanError(Exception):
    """Classe de base de toutes les erreurs du projet"""


class InvalidSizeError(AanError, ValueError):
    """Taille de graphe ou de grille invalide"""


class InvalidIdError(AanError, ValueError):
    """Identifiant de nœud ou de qubit hors limites"""


class InvalidInputError(AanError, ValueError):
    """Entrée incohérente (dimensions, clés, ensemble vide)"""


class InvalidParameterError(AanError, ValueError):
    """Paramètre numérique hors de son domaine (beta, alpha, taux...)"""


class TooLargeError(AanError, ValueError):
    """Problème trop grand pour l'énumération exacte"""


class ConfigError(AanError, ValueError):
    """Configuration invalide"""


class EmbeddingError(AanError, ValueError):
    """Plongement invalide vis-à-vis du graphe logique ou matériel"""


class EmbeddingFailureError(AanError, RuntimeError):
    """Aucun plongement trouvé dans le budget d'itérations"""


class DivergenceUndefinedError(AanError, ValueError):
    """Divergence KL indéfinie (support de p non inclus dans celui de q)"""


class StaleCacheError(AanError, RuntimeError):
    """Cache de propagation avant obsolète vis-à-vis des paramètres du réseau"""


class TrainingFailureError(AanError, RuntimeError):
    """Entraînement terminé sous le seuil de qualité requis"""


class CheckpointError(AanError, OSError):
    """Point de sauvegarde absent, illisible ou non inscriptible"""


class IdxFormatError(AanError, ValueError):
    """Fichier IDX mal formé; `field` nomme le champ fautif"""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"[{field}] {message}")


class NumericError(AanError, ArithmeticError):
    """Échec numérique accompagné d'un diagnostic"""

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        self.diagnostics = diagnostics or {}
        details = ", ".join(f"{k}={v}" for k, v in self.diagnostics.items())
        super().__init__(f"{message} ({details})" if details else message)

"""
Optimiseur Adam avec correction de biais, sous forme de valeur : chaque pas
retourne un nouvel état et de nouveaux paramètres.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.config.settings import AdamConfig
from src.neural.network import ForwardCache, Network
from src.utils.aan_errors import InvalidInputError


@dataclass(frozen=True, eq=False)
class AdamState:
    """Accumulateurs du premier et du second moment, un par tableau de paramètres"""
    rate: float = 0.0002
    beta1: float = 0.5
    beta2: float = 0.999
    epsilon: float = 1e-8
    step: int = 0
    first: List[np.ndarray] = field(default_factory=list)
    second: List[np.ndarray] = field(default_factory=list)

    @classmethod
    def for_network(cls, net: Network, config: Optional[AdamConfig] = None) -> "AdamState":
        config = config or AdamConfig()
        zeros = [np.zeros_like(p) for p in net.parameters()]
        return cls(config.rate, config.beta1, config.beta2, config.epsilon, 0,
                   zeros, [z.copy() for z in zeros])

    def apply(self, parameters: Sequence[np.ndarray],
              gradients: Sequence[np.ndarray]) -> Tuple[List[np.ndarray], "AdamState"]:
        """
        Un pas d'Adam

        Args:
            parameters: Paramètres courants
            gradients: Gradients de même forme

        Returns:
            (nouveaux paramètres, nouvel état)
        """
        if len(parameters) != len(self.first) or len(gradients) != len(parameters):
            raise InvalidInputError("Accumulateurs d'Adam incompatibles avec les paramètres")

        step = self.step + 1
        correction1 = 1.0 - self.beta1 ** step
        correction2 = 1.0 - self.beta2 ** step

        new_parameters, first, second = [], [], []
        for p, g, m, v in zip(parameters, gradients, self.first, self.second):
            if g.shape != p.shape or m.shape != p.shape:
                raise InvalidInputError(f"Gradient {g.shape} pour un paramètre {p.shape}")
            m = self.beta1 * m + (1.0 - self.beta1) * g
            v = self.beta2 * v + (1.0 - self.beta2) * (g * g)
            update = self.rate * (m / correction1) / (np.sqrt(v / correction2) + self.epsilon)
            new_parameters.append(p - update)
            first.append(m)
            second.append(v)

        return new_parameters, AdamState(self.rate, self.beta1, self.beta2, self.epsilon, step, first, second)


def backward_step(net: Network, loss_grad: np.ndarray, cache: ForwardCache, adam: AdamState,
                  from_logits: bool = False) -> Tuple[Network, AdamState]:
    """
    Rétropropagation puis mise à jour d'Adam

    Args:
        net: Réseau qui a produit le cache
        loss_grad: Gradient de la perte par rapport à la sortie (ou aux logits)
        cache: Cache de net.forward
        adam: État de l'optimiseur
        from_logits: Voir Network.backward

    Returns:
        (nouveau réseau, nouvel état d'Adam)

    Raises:
        StaleCacheError: si le cache ne provient pas de net
    """
    layer_gradients, _ = net.backward(cache, loss_grad, from_logits=from_logits)
    gradients = [g for pair in layer_gradients for g in pair]
    parameters, adam = adam.apply(net.parameters(), gradients)
    return net.with_parameters(parameters), adam

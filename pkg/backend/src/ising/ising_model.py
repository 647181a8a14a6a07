"""
Modèle d'Ising / machine de Boltzmann : biais h et couplages J sur un graphe logique,
énergie et format texte.

Convention unique : E(z) = -Σ h_i z_i - Σ J_ij z_i z_j, un couplage J > 0 est
ferromagnétique. Le format texte "matériel" inverse le signe de h et J.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np
from scipy import sparse

from src.topology.graphs import LogicalGraph
from src.utils.aan_errors import InvalidInputError, InvalidParameterError

# Configuration du logging
logger = logging.getLogger("aan_ising_model")


@dataclass(frozen=True, eq=False)
class IsingModel:
    """Biais par nœud et couplages par arête (dans l'ordre de graph.edge_list)"""
    graph: LogicalGraph
    biases: np.ndarray
    couplings: np.ndarray

    def __post_init__(self):
        biases = np.array(self.biases, dtype=np.float64).reshape(-1)
        couplings = np.array(self.couplings, dtype=np.float64).reshape(-1)
        if biases.shape[0] != self.graph.n_nodes:
            raise InvalidInputError(f"{biases.shape[0]} biais pour {self.graph.n_nodes} nœuds")
        if couplings.shape[0] != self.graph.n_edges:
            raise InvalidInputError(f"{couplings.shape[0]} couplages pour {self.graph.n_edges} arêtes")
        if not (np.all(np.isfinite(biases)) and np.all(np.isfinite(couplings))):
            raise InvalidParameterError("Paramètres non finis dans le modèle d'Ising")
        biases.setflags(write=False)
        couplings.setflags(write=False)
        object.__setattr__(self, "biases", biases)
        object.__setattr__(self, "couplings", couplings)

    @property
    def n_nodes(self) -> int:
        return self.graph.n_nodes

    @classmethod
    def zeros(cls, graph: LogicalGraph) -> "IsingModel":
        return cls(graph, np.zeros(graph.n_nodes), np.zeros(graph.n_edges))

    @classmethod
    def random(cls, graph: LogicalGraph, scale: float, rng: np.random.Generator) -> "IsingModel":
        """Paramètres tirés uniformément dans [-scale, scale]"""
        return cls(
            graph,
            rng.uniform(-scale, scale, size=graph.n_nodes),
            rng.uniform(-scale, scale, size=graph.n_edges),
        )

    @classmethod
    def from_dicts(cls, graph: LogicalGraph, h: dict, J: dict) -> "IsingModel":
        """Construit un modèle depuis des dictionnaires {i: h_i} et {(i, j): J_ij}"""
        biases = np.zeros(graph.n_nodes)
        for i, value in h.items():
            biases[int(i)] = value
        index = {edge: k for k, edge in enumerate(graph.edge_list)}
        couplings = np.zeros(graph.n_edges)
        for (i, j), value in J.items():
            key = (min(i, j), max(i, j))
            if key not in index:
                raise InvalidInputError(f"Couplage ({i}, {j}) absent du graphe")
            couplings[index[key]] = value
        return cls(graph, biases, couplings)

    def with_parameters(self, biases: np.ndarray, couplings: np.ndarray) -> "IsingModel":
        return IsingModel(self.graph, biases, couplings)

    def edge_arrays(self):
        """Extrémités des arêtes sous forme de deux tableaux (rows, cols)"""
        edges = self.graph.edge_list
        if not edges:
            return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
        pairs = np.asarray(edges, dtype=np.int64)
        return pairs[:, 0], pairs[:, 1]

    def coupling_matrix(self, sparse_format: bool = False):
        """
        Matrice symétrique des couplages (diagonale nulle)

        Args:
            sparse_format: Retourner une matrice scipy CSR

        Returns:
            Matrice n × n
        """
        rows, cols = self.edge_arrays()
        n = self.n_nodes
        matrix = sparse.coo_matrix(
            (np.concatenate([self.couplings, self.couplings]),
             (np.concatenate([rows, cols]), np.concatenate([cols, rows]))),
            shape=(n, n),
        ).tocsr()
        return matrix if sparse_format else matrix.toarray()

    def energies(self, states: np.ndarray) -> np.ndarray:
        """Énergies d'une matrice d'états m × n"""
        states = np.asarray(states, dtype=np.float64)
        rows, cols = self.edge_arrays()
        pair_terms = (states[:, rows] * states[:, cols]) @ self.couplings
        return -(states @ self.biases) - pair_terms

    def parameter_vector(self) -> np.ndarray:
        return np.concatenate([self.biases, self.couplings])


def energy(model: IsingModel, state) -> float:
    """
    Énergie d'une configuration de spins

    Args:
        model: Modèle d'Ising
        state: Spins ±1, un par nœud

    Returns:
        -Σ h_i z_i - Σ J_ij z_i z_j
    """
    state = np.asarray(state, dtype=np.float64).reshape(-1)
    if state.shape[0] != model.n_nodes:
        raise InvalidInputError(f"État de longueur {state.shape[0]} pour un modèle à {model.n_nodes} nœuds")
    if not np.all(np.abs(state) == 1.0):
        raise InvalidInputError("Les spins doivent valoir -1 ou +1")
    return float(model.energies(state[None, :])[0])


def save_model(model: IsingModel, path: Union[str, Path], hardware_convention: bool = False) -> Path:
    """
    Écrit un modèle au format texte : "n_nodes", lignes "b i valeur", lignes "J i j valeur"

    Args:
        model: Modèle à sauvegarder
        path: Fichier de destination
        hardware_convention: Inverser le signe de h et J (énergie matérielle +Σhz +ΣJzz)

    Returns:
        Chemin du fichier écrit
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    sign = -1.0 if hardware_convention else 1.0
    with open(path, 'w', encoding='utf-8') as f:
        f.write(f"{model.n_nodes}\n")
        for i, value in enumerate(model.biases):
            f.write(f"b {i} {float(sign * value)!r}\n")
        for (i, j), value in zip(model.graph.edge_list, model.couplings):
            f.write(f"J {i} {j} {float(sign * value)!r}\n")
    return path


def load_model(path: Union[str, Path], hardware_convention: bool = False,
               graph: Optional[LogicalGraph] = None) -> IsingModel:
    """
    Relit un modèle écrit par save_model

    Args:
        path: Fichier source
        hardware_convention: Le fichier est en convention matérielle
        graph: Graphe attendu (sinon reconstruit depuis les lignes J)

    Returns:
        Modèle d'Ising
    """
    sign = -1.0 if hardware_convention else 1.0
    with open(path, 'r', encoding='utf-8') as f:
        lines = [line.split() for line in f if line.strip()]
    if not lines:
        raise InvalidInputError(f"Fichier de modèle vide: {path}")

    try:
        n_nodes = int(lines[0][0])
        h = {}
        J = {}
        for parts in lines[1:]:
            if parts[0] == "b":
                h[int(parts[1])] = sign * float(parts[2])
            elif parts[0] == "J":
                J[(int(parts[1]), int(parts[2]))] = sign * float(parts[3])
            else:
                raise InvalidInputError(f"Ligne inconnue: {' '.join(parts)}")
    except (ValueError, IndexError) as e:
        raise InvalidInputError(f"Fichier de modèle illisible {path}: {e}") from e

    if graph is None:
        graph = LogicalGraph(n_nodes, frozenset(J))
    elif graph.n_nodes != n_nodes:
        raise InvalidInputError(f"Le fichier décrit {n_nodes} nœuds, le graphe en attend {graph.n_nodes}")
    return IsingModel.from_dicts(graph, h, J)

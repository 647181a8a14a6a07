"""
Topologies des graphes logiques et matériels, plongement par chaînes de qubits
"""

from .graphs import LogicalGraph, build_complete, build_bipartite, save_edge_list, load_edge_list
from .chimera import HardwareGraph, build_chimera, build_chimera_logical, grid_for
from .factory import build_topology, TOPOLOGIES
from .embedding import (
    Embedding,
    embed,
    embed_bipartite_grid,
    embed_clique_grid,
    validate_embedding,
    decode_majority,
    decode_samples,
)

__all__ = [
    "LogicalGraph",
    "HardwareGraph",
    "Embedding",
    "build_complete",
    "build_bipartite",
    "build_chimera",
    "build_chimera_logical",
    "grid_for",
    "embed",
    "embed_bipartite_grid",
    "embed_clique_grid",
    "validate_embedding",
    "decode_majority",
    "decode_samples",
    "save_edge_list",
    "load_edge_list",
    "build_topology",
    "TOPOLOGIES",
]

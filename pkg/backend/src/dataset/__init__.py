"""
Ingestion de MNIST (format IDX), réduction et binarisation
"""

from .image_set import ImageSet
from .idx_reader import load_idx, read_idx, write_idx, locate_mnist
from .transforms import reduce, stochastic_binarize, to_signed
from .image_cache import ImageSetCache, read_image_set, write_image_set
from .mnist import load_mnist, reduced_binary

__all__ = [
    "ImageSet",
    "load_idx",
    "read_idx",
    "write_idx",
    "locate_mnist",
    "reduce",
    "stochastic_binarize",
    "to_signed",
    "ImageSetCache",
    "read_image_set",
    "write_image_set",
    "load_mnist",
    "reduced_binary",
]

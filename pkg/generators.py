"""
Seeded random instances: plain matrices, chain matrices and chain triples.
"""
from typing import Tuple

import numpy as np

from matrix_core import BinaryMatrix


def random_matrix(rng: np.random.Generator, m: int, n: int, density: float = 0.5) -> BinaryMatrix:
    return BinaryMatrix((rng.random((m, n)) < density).astype(np.uint8))


def random_chain_matrix(rng: np.random.Generator, m: int, n: int) -> BinaryMatrix:
    """Rows are suffixes of one random column ranking, so neighborhoods are nested"""
    col_rank = rng.permutation(n)
    starts = rng.integers(0, n + 1, size=m)
    return BinaryMatrix((col_rank[np.newaxis, :] >= starts[:, np.newaxis]).astype(np.uint8))


def random_chain_triple(
    rng: np.random.Generator, m: int, n: int
) -> Tuple[BinaryMatrix, BinaryMatrix, BinaryMatrix]:
    return random_chain_matrix(rng, m, n), random_chain_matrix(rng, m, n), random_chain_matrix(rng, m, n)


def random_shape(rng: np.random.Generator, max_side: int) -> Tuple[int, int]:
    m, n = rng.integers(1, max_side + 1, size=2)
    return int(m), int(n)

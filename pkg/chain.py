"""
Chain graphs: recognition, chain orderings and point/ray (threshold) representations.
"""
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np
from loguru import logger

from errors import InvariantViolation, NotChain
from matrix_core import BinaryMatrix, Permutation
from models import ThresholdReport


class NeighborhoodDirection(Enum):
    INCREASING = "increasing"
    DECREASING = "decreasing"


@dataclass(frozen=True)
class ChainOrdering:
    row_order: Permutation
    col_order: Permutation
    row_direction: NeighborhoodDirection = NeighborhoodDirection.INCREASING
    col_direction: NeighborhoodDirection = NeighborhoodDirection.INCREASING


@dataclass(frozen=True)
class ThresholdRepresentation:
    """edge(u, v) iff row_values[u] < col_thresholds[v]; values even, thresholds odd"""
    row_values: Tuple[int, ...]
    col_thresholds: Tuple[int, ...]

    def to_matrix(self) -> np.ndarray:
        values = np.array(self.row_values, dtype=np.int64).reshape(-1, 1)
        thresholds = np.array(self.col_thresholds, dtype=np.int64).reshape(1, -1)
        return (values < thresholds).astype(np.uint8)

    def to_report(self) -> ThresholdReport:
        return ThresholdReport(row_values=list(self.row_values), col_thresholds=list(self.col_thresholds))


def _nesting_order(mask: np.ndarray, direction: NeighborhoodDirection) -> Tuple[np.ndarray, Optional[Tuple[int, int]]]:
    """
    Sort rows of ``mask`` by neighborhood size (stable, ties by index) and return the order plus
    the first consecutive pair (in sorted order) whose neighborhoods are not nested.
    """
    degrees = mask.sum(axis=1)
    keys = degrees if direction is NeighborhoodDirection.INCREASING else -degrees
    order = np.argsort(keys, kind="stable")
    ordered = mask[order]
    if direction is NeighborhoodDirection.INCREASING:
        broken = (ordered[:-1] & ~ordered[1:]).any(axis=1)
    else:
        broken = (~ordered[:-1] & ordered[1:]).any(axis=1)
    if broken.any():
        k = int(broken.argmax())
        return order, (int(order[k]), int(order[k + 1]))
    return order, None


def find_couple(M: BinaryMatrix) -> Optional[Tuple[int, int, int, int]]:
    """
    A 2K2 witness (r1, r2, c1, c2) with M[r1,c1] = M[r2,c2] = 1 and M[r1,c2] = M[r2,c1] = 0,
    or None when M is a chain graph.
    """
    mask = M.mask
    _, pair = _nesting_order(mask, NeighborhoodDirection.INCREASING)
    if pair is None:
        return None
    r1, r2 = pair
    # deg(r1) <= deg(r2) and N(r1) not inside N(r2), so each side has a private column
    c1 = int(np.flatnonzero(mask[r1] & ~mask[r2])[0])
    c2 = int(np.flatnonzero(mask[r2] & ~mask[r1])[0])
    return r1, r2, c1, c2


def chain_ordering(
    M: BinaryMatrix,
    row_direction: NeighborhoodDirection = NeighborhoodDirection.INCREASING,
    col_direction: NeighborhoodDirection = NeighborhoodDirection.INCREASING,
) -> Optional[ChainOrdering]:
    """Row and column orders with nested neighborhoods, or None if M is not a chain graph"""
    mask = M.mask
    row_order, broken = _nesting_order(mask, row_direction)
    if broken is not None:
        return None
    col_order, broken = _nesting_order(mask.T, col_direction)
    if broken is not None:
        # nested rows force nested columns
        raise InvariantViolation("column_nesting", "rows nest but columns do not")
    return ChainOrdering(
        row_order=Permutation(tuple(int(k) for k in row_order)),
        col_order=Permutation(tuple(int(k) for k in col_order)),
        row_direction=row_direction,
        col_direction=col_direction,
    )


def is_chain(M: BinaryMatrix) -> bool:
    _, broken = _nesting_order(M.mask, NeighborhoodDirection.INCREASING)
    return broken is None


def threshold_representation(M: BinaryMatrix, name: str = "matrix") -> ThresholdRepresentation:
    """
    Rows ranked by neighborhood size, largest first, sit at 0, 2, 4, ...; the threshold of a
    column with k neighbors is 2k - 1, just past the k-th ranked row.
    """
    couple = find_couple(M)
    if couple is not None:
        raise NotChain(name, couple)

    mask = M.mask
    ranking = np.argsort(-mask.sum(axis=1), kind="stable")
    row_values = np.empty(M.rows, dtype=np.int64)
    row_values[ranking] = 2 * np.arange(M.rows)
    col_thresholds = 2 * mask.sum(axis=0).astype(np.int64) - 1

    representation = ThresholdRepresentation(
        row_values=tuple(int(x) for x in row_values),
        col_thresholds=tuple(int(x) for x in col_thresholds),
    )
    if not np.array_equal(representation.to_matrix(), M.entries):
        logger.error(f"Threshold representation of {name} does not reproduce the matrix")
        raise InvariantViolation("threshold_roundtrip", f"{name} reconstruction differs")
    return representation

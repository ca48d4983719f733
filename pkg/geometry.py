"""
Orthant/point models: row vertices become points, column vertices become lower-open orthants,
and an edge exists exactly when the point lies strictly inside the orthant.
"""
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, Tuple, Union

import numpy as np
import pandas as pd
from loguru import logger

from chain import threshold_representation
from decompose import TripleDecomposition, certify
from errors import CertificationFailure, DimensionMismatch, FerrersError
from matrix_core import BinaryMatrix, hadamard
from models import OrthantReport


@dataclass(frozen=True, eq=False)
class OrthantModel:
    row_labels: Tuple[str, ...]
    col_labels: Tuple[str, ...]
    points: np.ndarray  # one row of coordinates per row vertex
    corners: np.ndarray  # one row of coordinates per column vertex

    @property
    def dimension(self) -> int:
        return self.points.shape[1]

    def membership(self) -> np.ndarray:
        return (self.points[:, np.newaxis, :] < self.corners[np.newaxis, :, :]).all(axis=2)

    def has_ties(self) -> bool:
        return bool((self.points[:, np.newaxis, :] == self.corners[np.newaxis, :, :]).any())

    def to_report(self) -> OrthantReport:
        return OrthantReport(
            points={label: [int(x) for x in p] for label, p in zip(self.row_labels, self.points)},
            corners={label: [int(x) for x in c] for label, c in zip(self.col_labels, self.corners)},
        )

    def _axis_names(self):
        if self.dimension == 3:
            return ["x", "y", "z"]
        return [f"x{k + 1}" for k in range(self.dimension)]

    def plot_frame(self) -> pd.DataFrame:
        axes = self._axis_names()
        points = pd.DataFrame(self.points, columns=axes)
        points.insert(0, "label", list(self.row_labels))
        points.insert(0, "side", "point")
        corners = pd.DataFrame(self.corners, columns=axes)
        corners.insert(0, "label", list(self.col_labels))
        corners.insert(0, "side", "corner")
        return pd.concat([points, corners], ignore_index=True)

    def to_csv(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        self.plot_frame().to_csv(path, index=False)
        logger.info(f"Plot data written to {path}")
        return path


def verify_model(model: OrthantModel, A: BinaryMatrix) -> bool:
    if model.points.shape[0] != A.rows or model.corners.shape[0] != A.cols:
        raise DimensionMismatch(
            f"model has {model.points.shape[0]} points and {model.corners.shape[0]} orthants for a {A.rows}x{A.cols} matrix"
        )
    return bool(np.array_equal(model.membership(), A.mask))


def orthant_model_from_factors(factors: Sequence[BinaryMatrix], A: BinaryMatrix) -> OrthantModel:
    """Axis k carries the threshold representation of chain factor k; d factors give R^d"""
    product = A.with_entries(np.ones(A.shape, dtype=np.uint8))
    for factor in factors:
        product = hadamard(product, factor)
    if not product.same_entries(A):
        logger.error("Chain factors do not multiply back to the matrix")
        raise CertificationFailure("product_matches", "factors do not reproduce the matrix")

    points = np.zeros((A.rows, len(factors)), dtype=np.int64)
    corners = np.zeros((A.cols, len(factors)), dtype=np.int64)
    for axis, factor in enumerate(factors):
        try:
            representation = threshold_representation(factor, name=f"A{axis + 1}")
        except FerrersError as e:
            raise CertificationFailure(f"a{axis + 1}_chain", str(e)) from e
        points[:, axis] = representation.row_values
        corners[:, axis] = representation.col_thresholds

    model = OrthantModel(A.row_labels, A.col_labels, points, corners)
    if model.has_ties() or not verify_model(model, A):
        raise CertificationFailure("model_membership", "orthant membership differs from the matrix")
    return model


def orthant_model(dec: TripleDecomposition, A: BinaryMatrix) -> OrthantModel:
    failed = [check.name for check in certify(A, dec) if not check.passed]
    if failed:
        logger.error(f"Decomposition does not certify against the matrix: {failed}")
        raise CertificationFailure(failed[0], f"failed checks: {', '.join(failed)}")
    return orthant_model_from_factors(dec.factors, A)

#!/usr/bin/env python3
"""
Orthant models built from certified decompositions
"""
import numpy as np
import pandas as pd
import pytest

from decompose import TripleDecomposition, decompose, order_from_chain_triple
from errors import CertificationFailure, DimensionMismatch
from generators import random_chain_triple, random_shape
from geometry import OrthantModel, orthant_model, orthant_model_from_factors, verify_model
from matrix_core import BinaryMatrix, hadamard, permute
from oracle import cover_factors, ferrers_dimension

C6 = BinaryMatrix.from_rows(["011", "101", "110"])


def test_all_ones_points_inside_every_orthant():
    A = BinaryMatrix.ones(2, 2)
    model = orthant_model(decompose(A), A)
    assert model.dimension == 3
    assert model.membership().all()
    assert verify_model(model, A)


def test_c6_model_reproduces_matrix():
    model = orthant_model(decompose(C6), C6)
    assert np.array_equal(model.membership(), C6.mask)
    assert not model.has_ties()

    report = model.to_report()
    assert list(report.points) == ["u1", "u2", "u3"]
    assert list(report.corners) == ["v1", "v2", "v3"]
    assert all(len(coords) == 3 for coords in report.points.values())


def test_single_non_edge_lies_outside():
    A = BinaryMatrix.zeros(1, 1)
    model = orthant_model(decompose(A), A)
    assert (model.points[0] >= model.corners[0]).any()
    assert verify_model(model, A)


def test_verify_model_detects_a_perturbed_corner():
    model = orthant_model(decompose(C6), C6)
    corners = model.corners.copy()
    # u1 is adjacent to v2; pull v2's first coordinate below u1's
    corners[1, 0] = model.points[0, 0] - 1
    perturbed = OrthantModel(model.row_labels, model.col_labels, model.points, corners)
    assert not verify_model(perturbed, C6)


def test_verify_model_empty_graph():
    A = BinaryMatrix.zeros(2, 2)
    model = OrthantModel(A.row_labels, A.col_labels, np.full((2, 3), 10), np.zeros((2, 3), dtype=int))
    assert verify_model(model, A)


def test_verify_model_requires_matching_counts():
    model = orthant_model(decompose(C6), C6)
    with pytest.raises(DimensionMismatch):
        verify_model(model, BinaryMatrix.ones(2, 3))


def test_orthant_model_rejects_a_bad_decomposition():
    dec = decompose(C6)
    broken = TripleDecomposition(dec.A1, dec.A2, BinaryMatrix.ones(3, 3), dec.L3)
    with pytest.raises(CertificationFailure) as excinfo:
        orthant_model(broken, C6)
    assert excinfo.value.check == "product_matches"


def test_models_from_dimension_certificates():
    J4 = BinaryMatrix.from_rows(["0111", "1011", "1101", "1110"])
    cert = ferrers_dimension(J4)
    model = orthant_model_from_factors(cover_factors(J4, cert), J4)
    assert model.dimension == 4
    assert verify_model(model, J4)
    assert list(model.plot_frame().columns) == ["side", "label", "x1", "x2", "x3", "x4"]


def test_random_chain_triples_round_trip():
    rng = np.random.default_rng(4)
    for _ in range(1000):
        m, n = random_shape(rng, 50)
        C1, C2, C3 = random_chain_triple(rng, m, n)
        rows, cols = order_from_chain_triple(C1, C2, C3)
        A = permute(hadamard(hadamard(C1, C2), C3), rows, cols)
        model = orthant_model(decompose(A), A)
        assert verify_model(model, A)
        assert not model.has_ties()


def test_plot_csv(tmp_path):
    model = orthant_model(decompose(C6), C6)
    path = model.to_csv(tmp_path / "c6.csv")
    frame = pd.read_csv(path)
    assert list(frame.columns) == ["side", "label", "x", "y", "z"]
    assert (frame["side"] == "point").sum() == 3
    assert (frame["side"] == "corner").sum() == 3
    assert frame.loc[frame["label"] == "v1", ["x", "y", "z"]].values.tolist()[0] == model.corners[0].tolist()

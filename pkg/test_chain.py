#!/usr/bin/env python3
"""
Chain graph recognition and threshold representations
"""
import numpy as np
import pytest

from chain import (
    NeighborhoodDirection,
    chain_ordering,
    find_couple,
    is_chain,
    threshold_representation,
)
from errors import NotChain
from generators import random_chain_matrix, random_matrix
from matrix_core import BinaryMatrix, permute


def test_chain_ordering_examples():
    ordering = chain_ordering(BinaryMatrix.from_rows(["11", "01"]))
    assert ordering is not None
    assert ordering.row_order.one_based() == [2, 1]

    assert chain_ordering(BinaryMatrix.from_rows(["10", "01"])) is None

    ordering = chain_ordering(BinaryMatrix.ones(3, 2))
    assert ordering.row_order.is_identity()
    assert ordering.col_order.is_identity()


def test_chain_ordering_nests_neighborhoods():
    rng = np.random.default_rng(5)
    for _ in range(100):
        M = random_chain_matrix(rng, 6, 7)
        ordering = chain_ordering(M, NeighborhoodDirection.INCREASING, NeighborhoodDirection.DECREASING)
        ordered = permute(M, ordering.row_order, ordering.col_order).mask
        # growing rows, shrinking columns
        assert not (ordered[:-1] & ~ordered[1:]).any()
        assert not (~ordered[:, :-1] & ordered[:, 1:]).any()


def test_is_chain_examples():
    assert not is_chain(BinaryMatrix.from_rows(["10", "01"]))
    assert is_chain(BinaryMatrix.from_rows(["111", "101", "001"]))
    assert not is_chain(BinaryMatrix.from_rows(["011", "101", "110"]))
    assert is_chain(BinaryMatrix.zeros(2, 3))


def test_find_couple_is_an_induced_matching():
    rng = np.random.default_rng(9)
    for _ in range(200):
        M = random_matrix(rng, 5, 5)
        couple = find_couple(M)
        assert (couple is None) == is_chain(M)
        if couple is not None:
            r1, r2, c1, c2 = couple
            assert M.entries[r1, c1] == 1 and M.entries[r2, c2] == 1
            assert M.entries[r1, c2] == 0 and M.entries[r2, c1] == 0


def test_threshold_representation_examples():
    full = threshold_representation(BinaryMatrix.ones(2, 2))
    assert full.row_values == (0, 2)
    assert full.col_thresholds == (3, 3)

    staircase = threshold_representation(BinaryMatrix.from_rows(["11", "01"]))
    assert staircase.row_values == (0, 2)
    assert staircase.col_thresholds == (1, 3)

    empty = threshold_representation(BinaryMatrix.zeros(1, 1))
    assert empty.row_values == (0,)
    assert empty.col_thresholds == (-1,)
    assert empty.to_matrix().tolist() == [[0]]


def test_threshold_representation_round_trip():
    rng = np.random.default_rng(21)
    for _ in range(100):
        M = random_chain_matrix(rng, 8, 6)
        representation = threshold_representation(M)
        assert np.array_equal(representation.to_matrix(), M.entries)
        assert all(v % 2 == 0 for v in representation.row_values)
        assert all(t % 2 == 1 for t in representation.col_thresholds)


def test_threshold_representation_rejects_non_chain():
    with pytest.raises(NotChain) as excinfo:
        threshold_representation(BinaryMatrix.from_rows(["10", "01"]), name="C1")
    assert excinfo.value.name == "C1"
    assert excinfo.value.couple == (0, 1, 0, 1)
    assert "C1 is not a chain graph" in str(excinfo.value)

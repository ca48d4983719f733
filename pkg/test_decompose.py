#!/usr/bin/env python3
"""
Decomposition of Gamma,Delta-free matrices into three chain matrices, and the reverse direction
"""
import time

import numpy as np
import pytest

from chain import is_chain
from decompose import (
    AnnotatedMatrix,
    Entry,
    TripleDecomposition,
    _forbidden_2x2,
    _one_before_star,
    algorithm1,
    annotate,
    build_A1,
    build_A2,
    build_A3,
    certify,
    decompose,
    is_d_free,
    order_from_chain_triple,
)
from errors import DimensionMismatch, InvariantViolation, NotChain, NotDominated, NotFree
from generators import random_chain_triple, random_shape
from matrix_core import DELTA, GAMMA, BinaryMatrix, Occurrence, Permutation, hadamard, is_free, leq, permute
from oracle import enumerate_bipartite, search_free_ordering

C6 = BinaryMatrix.from_rows(["011", "101", "110"])
C6_ANNOTATED = AnnotatedMatrix.from_symbols([["0'", "1", "1"], ["1", "0*", "1"], ["1", "1", "0'"]])


def ordered_chain_product(rng, m, n) -> BinaryMatrix:
    C1, C2, C3 = random_chain_triple(rng, m, n)
    rows, cols = order_from_chain_triple(C1, C2, C3)
    return permute(hadamard(hadamard(C1, C2), C3), rows, cols)


# Closures

def test_build_A1_examples():
    assert build_A1(BinaryMatrix.from_rows(["01", "10"])).to_rows() == ["11", "10"]
    assert build_A1(BinaryMatrix.from_rows(["010", "101"])).to_rows() == ["110", "111"]
    assert build_A1(BinaryMatrix.zeros(2, 3)).to_rows() == ["000", "000"]


def test_build_A2_examples():
    assert build_A2(BinaryMatrix.from_rows(["01", "10"])).to_rows() == ["01", "11"]
    assert build_A2(BinaryMatrix.from_rows(["010", "101"])).to_rows() == ["010", "111"]
    assert build_A2(BinaryMatrix.ones(3, 2)).to_rows() == ["11", "11", "11"]


def test_closures_are_chain_and_d_free():
    rng = np.random.default_rng(2)
    for _ in range(50):
        A = ordered_chain_product(rng, 7, 6)
        A1, A2 = build_A1(A), build_A2(A)
        assert is_chain(A1) and is_chain(A2)
        assert is_d_free(hadamard(A1, A2))


# Annotation

def test_annotate_examples():
    A12 = BinaryMatrix.from_rows(["011", "111", "110"])
    assert annotate(C6, A12) == C6_ANNOTATED

    closed = BinaryMatrix.from_rows(["11", "10"])
    At = annotate(closed, closed)
    assert not At.stars.any()
    assert At.to_symbols() == [["1", "1"], ["1", "0'"]]

    staircase = annotate(BinaryMatrix.from_rows(["11", "01"]), BinaryMatrix.ones(2, 2))
    assert staircase.to_symbols() == [["1", "1"], ["0*", "1"]]


def test_annotate_requires_domination():
    with pytest.raises(NotDominated) as excinfo:
        annotate(BinaryMatrix.from_rows(["10"]), BinaryMatrix.from_rows(["01"]))
    assert excinfo.value.cell == (0, 0)


def test_annotate_rejects_unwitnessed_star():
    # the star at (1, 1) has no 1 above it
    with pytest.raises(InvariantViolation) as excinfo:
        annotate(BinaryMatrix.from_rows(["00", "01"]), BinaryMatrix.from_rows(["00", "11"]))
    assert excinfo.value.check == "star_zeros_witnessed"


@pytest.mark.parametrize("symbols, name", [
    ([["0*", "1"], ["1", "0*"]], "star_one_one_star"),
    ([["1", "0*"], ["0*", "1"]], "one_star_star_one"),
    ([["1", "1"], ["0'", "1"]], "one_any_prime_one"),
    ([["0*", "1"], ["0'", "0*"]], "star_any_prime_star"),
])
def test_forbidden_2x2_configurations(symbols, name):
    assert _forbidden_2x2(AnnotatedMatrix.from_symbols(symbols)) == (name, (0, 1, 0, 1))


def test_forbidden_2x2_clean_matrix():
    assert _forbidden_2x2(C6_ANNOTATED) is None


def test_annotate_rejects_forbidden_2x2():
    A = BinaryMatrix.from_rows(["11", "01"])
    with pytest.raises(InvariantViolation) as excinfo:
        annotate(A, A)
    assert excinfo.value.check == "annotated_2x2_free"
    # the same input passes through unchecked
    assert annotate(A, A, verify=False).to_symbols() == [["1", "1"], ["0'", "1"]]


def test_entry_symbols():
    assert Entry.ZERO_STAR.symbol == "0*"
    assert Entry.ZERO_PRIME.symbol == "0'"
    assert Entry.ONE.symbol == "1"


# Column order

def test_algorithm1_examples():
    no_stars = AnnotatedMatrix.from_symbols([["1", "0'"], ["0'", "1"]])
    assert algorithm1(no_stars).is_identity()

    At = AnnotatedMatrix.from_symbols([["0'", "1", "0'"], ["1", "0*", "1"]])
    assert algorithm1(At).one_based() == [2, 1, 3]

    assert algorithm1(C6_ANNOTATED).one_based() == [2, 1, 3]


def test_algorithm1_without_anchor_keeps_column_last(mocker):
    logger = mocker.patch("decompose.logger")
    At = AnnotatedMatrix.from_symbols([["1", "1"], ["0*", "1"]])
    L3 = algorithm1(At)
    assert L3.is_identity()
    logger.warning.assert_called_once()
    assert build_A3(At, L3).to_rows() == ["11", "01"]


def test_one_before_star_depends_on_column_order():
    At = AnnotatedMatrix.from_symbols([["0'", "1", "0'"], ["1", "0*", "1"]])
    assert _one_before_star(At, Permutation.identity(3)) == (1, 0, 1)
    assert _one_before_star(At, Permutation.from_one_based((2, 1, 3))) is None


def test_build_A3_examples():
    assert build_A3(C6_ANNOTATED, Permutation.from_one_based((2, 1, 3))).to_rows() == ["111", "101", "111"]

    At = AnnotatedMatrix.from_symbols([["0'", "1", "0'"], ["1", "0*", "1"]])
    assert build_A3(At, Permutation.from_one_based((2, 1, 3))).to_rows() == ["111", "101"]

    ones = AnnotatedMatrix.from_symbols([["1", "1"], ["1", "1"]])
    assert build_A3(ones, Permutation.identity(2)).to_rows() == ["11", "11"]


# Full pipeline

def test_decompose_c6():
    dec = decompose(C6)
    assert dec.A1.to_rows() == ["111", "111", "110"]
    assert dec.A2.to_rows() == ["011", "111", "111"]
    assert dec.A3.to_rows() == ["111", "101", "111"]
    assert dec.L3.one_based() == [2, 1, 3]
    assert dec.product().same_entries(C6)
    assert dec.certified

    report = dec.to_report()
    assert report.L3 == [2, 1, 3]
    assert {check.name for check in report.checks} >= {
        "dominated_by_closure",
        "closure_d_free",
        "star_zeros_witnessed",
        "annotated_2x2_free",
        "one_before_star_free",
        "a1_chain",
        "a2_chain",
        "a3_chain",
        "product_matches",
    }


def test_decompose_all_ones():
    A = BinaryMatrix.ones(3, 4)
    dec = decompose(A)
    assert all(factor.same_entries(A) for factor in dec.factors)


def test_decompose_keeps_labels():
    A = BinaryMatrix.from_rows(["011", "101", "110"], ("a", "b", "c"), ("x", "y", "z"))
    dec = decompose(A)
    assert dec.A3.row_labels == ("a", "b", "c")
    assert dec.product() == A


def test_decompose_rejects_gamma():
    with pytest.raises(NotFree) as excinfo:
        decompose(BinaryMatrix.from_rows(["010", "101", "010"]))
    assert excinfo.value.pattern_name == "gamma"
    assert excinfo.value.occurrence == Occurrence((0, 1, 2), (0, 1, 2))


def test_decompose_rejects_delta():
    with pytest.raises(NotFree) as excinfo:
        decompose(BinaryMatrix.from_rows(["100", "010", "101"]))
    assert excinfo.value.pattern_name == "delta"


def test_certify_flags_a_wrong_factor():
    dec = decompose(C6)
    broken = TripleDecomposition(dec.A1, dec.A2, BinaryMatrix.ones(3, 3), dec.L3)
    failed = {check.name for check in certify(C6, broken) if not check.passed}
    assert failed == {"product_matches"}


def test_certify_flags_a_wrong_column_order():
    dec = decompose(C6)
    reordered = TripleDecomposition(dec.A1, dec.A2, dec.A3, Permutation.identity(3))
    failed = {check.name for check in certify(C6, reordered, C6_ANNOTATED) if not check.passed}
    assert failed == {"one_before_star_free"}


def test_decompose_every_free_small_ordering():
    """Every free ordering found among small canonical matrices decomposes with full certification"""
    for m in range(1, 4):
        for n in range(1, 4):
            for A in enumerate_bipartite(m, n):
                found = search_free_ordering(A, (GAMMA, DELTA))
                if found is None:
                    continue
                ordered = permute(A, *found)
                dec = decompose(ordered)
                assert dec.certified
                assert dec.product().same_entries(ordered)


def test_lemma_checks_on_random_chain_triples():
    rng = np.random.default_rng(20240917)
    for _ in range(1000):
        m, n = random_shape(rng, 50)
        A = ordered_chain_product(rng, m, n)
        assert is_free(A, (GAMMA, DELTA))
        assert leq(A, hadamard(build_A1(A), build_A2(A)))
        dec = decompose(A)
        assert dec.certified, [c.name for c in dec.checks if not c.passed]
        assert all(is_chain(factor) for factor in dec.factors)


def test_decompose_large_instance():
    rng = np.random.default_rng(500)
    A = ordered_chain_product(rng, 500, 500)
    start = time.perf_counter()
    dec = decompose(A)
    elapsed = time.perf_counter() - start
    assert dec.certified
    assert dec.product().same_entries(A)
    assert elapsed < 5.0


# Reverse direction

def test_order_from_chain_triple_all_ones():
    ones = BinaryMatrix.ones(3, 3)
    rows, cols = order_from_chain_triple(ones, ones, ones)
    assert rows.is_identity() and cols.is_identity()


def test_order_from_chain_triple_is_free():
    rng = np.random.default_rng(55)
    for _ in range(1000):
        C1, C2, C3 = random_chain_triple(rng, 5, 5)
        rows, cols = order_from_chain_triple(C1, C2, C3)
        product = hadamard(hadamard(C1, C2), C3)
        assert is_free(permute(product, rows, cols), (GAMMA, DELTA))
        assert is_d_free(permute(hadamard(C1, C2), rows, cols))


def test_order_from_chain_triple_rejects_bad_input():
    ones = BinaryMatrix.ones(2, 2)
    with pytest.raises(NotChain) as excinfo:
        order_from_chain_triple(BinaryMatrix.from_rows(["10", "01"]), ones, ones)
    assert excinfo.value.name == "C1"
    with pytest.raises(DimensionMismatch):
        order_from_chain_triple(ones, BinaryMatrix.ones(2, 3), ones)

#!/usr/bin/env python3
"""
Pattern catalog and selectors
"""
import pytest

from catalog import PATTERNS, GraphClass, UnknownSelector, catalog_entries, freeable_classes, resolve_patterns
from matrix_core import DELTA, GAMMA, BinaryMatrix


def test_named_selectors():
    assert resolve_patterns(["chain3"]) == [GAMMA, DELTA]
    assert [p.name for p in resolve_patterns(["gamma,delta"])] == ["gamma", "delta"]
    assert [p.name for p in resolve_patterns(["stick"])] == ["stick1", "stick2", "stick3"]
    assert [p.name for p in resolve_patterns(["chain2"])] == ["D"]


def test_selectors_deduplicate():
    patterns = resolve_patterns(["gamma", "chain3", "gamma"])
    assert [p.name for p in patterns] == ["gamma", "delta"]


def test_pattern_file_selector(tmp_path):
    path = tmp_path / "corner.txt"
    path.write_text("# corner\n1*\n*0\n", encoding="utf-8")
    (pattern,) = resolve_patterns([str(path)])
    assert pattern.name == "corner"
    assert pattern.to_rows() == ["1*", "*0"]


def test_unknown_selector():
    with pytest.raises(UnknownSelector):
        resolve_patterns(["no-such-class"])
    with pytest.raises(UnknownSelector):
        resolve_patterns([" , "])


def test_catalog_entries_cover_every_class():
    entries = catalog_entries()
    assert [e.graph_class for e in entries] == [c.title for c in GraphClass]
    chain3 = next(e for e in entries if e.graph_class == "CHAIN^3")
    assert chain3.patterns == {"gamma": ["*1*", "101", "01*"], "delta": ["1**", "01*", "101"]}


def test_chain_pattern_stored_both_ways():
    assert PATTERNS["chain"].to_rows() == ["01"]
    assert PATTERNS["chain_rev"].to_rows() == ["10"]


def test_freeable_classes():
    J4 = BinaryMatrix.from_rows(["0111", "1011", "1101", "1110"])
    classes = freeable_classes(J4)
    assert GraphClass.CHAIN3 not in classes
    assert GraphClass.CHAIN not in classes

    staircase = BinaryMatrix.from_rows(["11", "01"])
    assert set(freeable_classes(staircase)) == set(GraphClass)

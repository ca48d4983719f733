"""
Catalog of freeable-pattern characterizations of bipartite graph classes.

The chain class appears twice: as (0 1) and as (1 0). The two are the same
class up to reversing the column order, so both are stored and neither is
treated as canonical.
"""
from enum import Enum
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple

from loguru import logger

from errors import FerrersError
from matrix_core import DELTA, D_PATTERN, GAMMA, BinaryMatrix, Pattern, parse_pattern
from models import CatalogEntry


class UnknownSelector(FerrersError, ValueError):
    pass


PATTERNS: Dict[str, Pattern] = {
    "gamma": GAMMA,
    "delta": DELTA,
    "D": D_PATTERN,
    "chain": parse_pattern("01", "chain"),
    "chain_rev": parse_pattern("10", "chain_rev"),
    "conv": parse_pattern("101", "conv"),
    "bpg1": parse_pattern("10\n*1", "bpg1"),
    "bpg2": parse_pattern("1*\n01", "bpg2"),
    "chordal": parse_pattern("11\n01", "chordal"),
    "stick1": parse_pattern("*1*\n101", "stick1"),
    "stick2": parse_pattern("1*\n01\n1*", "stick2"),
    "stick3": parse_pattern("*1*\n*01\n1**", "stick3"),
    "segray": parse_pattern("*1*\n101", "segray"),
    "gig": parse_pattern("*1*\n101\n*1*", "gig"),
}


class GraphClass(Enum):
    CHAIN = ("CHAIN", ("chain",))
    BPG = ("BPG", ("bpg1", "bpg2"))
    CONV = ("Convex", ("conv",))
    CHAIN2 = ("CHAIN^2", ("D",))
    CHORDAL_BIPARTITE = ("Chordal Bipartite", ("chordal",))
    STICK = ("Stick Graphs", ("stick1", "stick2", "stick3"))
    SEGMENT_RAY = ("Segment Ray", ("segray",))
    GIG = ("Grid Intersection (GIG)", ("gig",))
    CHAIN3 = ("CHAIN^3", ("gamma", "delta"))

    def __init__(self, title: str, pattern_names: Tuple[str, ...]):
        self.title = title
        self.pattern_names = pattern_names

    @property
    def patterns(self) -> List[Pattern]:
        return [PATTERNS[name] for name in self.pattern_names]


SELECTORS: Dict[str, Tuple[str, ...]] = {name: (name,) for name in PATTERNS}
SELECTORS.update({
    "chain2": GraphClass.CHAIN2.pattern_names,
    "chain3": GraphClass.CHAIN3.pattern_names,
    "bpg": GraphClass.BPG.pattern_names,
    "stick": GraphClass.STICK.pattern_names,
})


def resolve_patterns(selectors: Iterable[str]) -> List[Pattern]:
    """
    Turn selector names, comma lists and pattern file paths into a pattern list.
    Duplicates are dropped, first occurrence wins.
    """
    resolved: List[Pattern] = []
    for selector in selectors:
        for token in (t.strip() for t in selector.split(",")):
            if not token:
                continue
            if token in SELECTORS:
                found = [PATTERNS[name] for name in SELECTORS[token]]
            else:
                path = Path(token)
                if not path.is_file():
                    raise UnknownSelector(f"unknown pattern selector '{token}' (and no such file)")
                found = [parse_pattern(path.read_text(encoding="utf-8"), path.stem)]
                logger.debug(f"Loaded pattern {path.stem} from {path}")
            for pattern in found:
                if pattern.name not in {p.name for p in resolved}:
                    resolved.append(pattern)
    if not resolved:
        raise UnknownSelector("no patterns selected")
    return resolved


def catalog_entries(A: Optional[BinaryMatrix] = None, budget_perm: Optional[int] = None) -> List[CatalogEntry]:
    """Every class with its patterns; given A, also whether some ordering of A avoids them"""
    freeable = None if A is None else set(freeable_classes(A, budget_perm=budget_perm))
    return [
        CatalogEntry(
            graph_class=graph_class.title,
            patterns={name: PATTERNS[name].to_rows() for name in graph_class.pattern_names},
            freeable=None if freeable is None else graph_class in freeable,
        )
        for graph_class in GraphClass
    ]


def freeable_classes(A: BinaryMatrix, budget_perm: Optional[int] = None) -> List[GraphClass]:
    """Catalog classes whose patterns some ordering of A avoids (exhaustive, small matrices only)"""
    from oracle import search_free_ordering

    return [
        graph_class for graph_class in GraphClass
        if search_free_ordering(A, graph_class.patterns, budget_perm=budget_perm) is not None
    ]

"""
Both directions of the Gamma/Delta characterization of Ferrers dimension three.

decompose():               Gamma,Delta-free ordered matrix -> three chain matrices A1, A2, A3
                           with A = A1 (.) A2 (.) A3, every step certified.
order_from_chain_triple(): three chain matrices -> row/column orders under which their
                           Hadamard product is Gamma,Delta-free.
"""
from dataclasses import dataclass
from enum import IntEnum
from typing import List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from chain import NeighborhoodDirection, chain_ordering, find_couple, is_chain
from errors import (
    DimensionMismatch,
    FerrersError,
    InvariantViolation,
    LabelMismatch,
    NotChain,
    NotDominated,
    NotFree,
)
from matrix_core import (
    DELTA,
    D_PATTERN,
    GAMMA,
    BinaryMatrix,
    Permutation,
    any_above,
    any_right,
    contains,
    find_2x2,
    first_witness,
    hadamard,
    leq,
    permute,
)
from models import CheckReport, DecompositionReport


class Entry(IntEnum):
    ZERO_PRIME = 0  # zero of A that the closure A1 (.) A2 keeps
    ONE = 1
    ZERO_STAR = 2  # zero of A covered by the closure; A3 must remove it

    @property
    def symbol(self) -> str:
        return {Entry.ZERO_PRIME: "0'", Entry.ONE: "1", Entry.ZERO_STAR: "0*"}[self]


@dataclass(frozen=True, eq=False)
class AnnotatedMatrix:
    entries: np.ndarray

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def ones(self) -> np.ndarray:
        return self.entries == Entry.ONE

    @property
    def stars(self) -> np.ndarray:
        return self.entries == Entry.ZERO_STAR

    @property
    def primes(self) -> np.ndarray:
        return self.entries == Entry.ZERO_PRIME

    @classmethod
    def from_symbols(cls, rows: Sequence[Sequence[str]]) -> "AnnotatedMatrix":
        codes = {"1": Entry.ONE, "0'": Entry.ZERO_PRIME, "0*": Entry.ZERO_STAR}
        grid = np.array([[codes[s] for s in row] for row in rows], dtype=np.int8)
        grid.setflags(write=False)
        return cls(grid)

    def to_symbols(self) -> List[List[str]]:
        return [[Entry(int(x)).symbol for x in row] for row in self.entries]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AnnotatedMatrix):
            return NotImplemented
        return bool(np.array_equal(self.entries, other.entries))


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool


@dataclass(frozen=True)
class TripleDecomposition:
    A1: BinaryMatrix
    A2: BinaryMatrix
    A3: BinaryMatrix
    L3: Permutation
    checks: Tuple[Check, ...] = ()

    @property
    def certified(self) -> bool:
        return bool(self.checks) and all(check.passed for check in self.checks)

    @property
    def factors(self) -> Tuple[BinaryMatrix, BinaryMatrix, BinaryMatrix]:
        return self.A1, self.A2, self.A3

    def product(self) -> BinaryMatrix:
        return hadamard(hadamard(self.A1, self.A2), self.A3)

    def to_report(self) -> DecompositionReport:
        return DecompositionReport(
            A1=self.A1.to_rows(),
            A2=self.A2.to_rows(),
            A3=self.A3.to_rows(),
            L3=self.L3.one_based(),
            certified=self.certified,
            checks=[CheckReport(name=c.name, passed=c.passed) for c in self.checks],
        )


# Closures

def build_A1(A: BinaryMatrix) -> BinaryMatrix:
    """Leftward closure: A1[i, j] = 1 iff row i has a 1 at some column >= j"""
    mask = A.mask
    closure = np.logical_or.accumulate(mask[:, ::-1], axis=1)[:, ::-1] if A.cols else mask
    return A.with_entries(closure.astype(np.uint8))


def build_A2(A: BinaryMatrix) -> BinaryMatrix:
    """Downward closure: A2[i, j] = 1 iff column j has a 1 at some row <= i"""
    mask = A.mask
    closure = np.logical_or.accumulate(mask, axis=0) if A.rows else mask
    return A.with_entries(closure.astype(np.uint8))


def is_d_free(M: BinaryMatrix) -> bool:
    return not contains(M, D_PATTERN)


# Annotation

_FORBIDDEN_2X2 = {
    # name: (top-left, top-right, bottom-left, bottom-right); None is a star
    "star_one_one_star": (Entry.ZERO_STAR, Entry.ONE, Entry.ONE, Entry.ZERO_STAR),
    "one_star_star_one": (Entry.ONE, Entry.ZERO_STAR, Entry.ZERO_STAR, Entry.ONE),
    "one_any_prime_one": (Entry.ONE, None, Entry.ZERO_PRIME, Entry.ONE),
    "star_any_prime_star": (Entry.ZERO_STAR, None, Entry.ZERO_PRIME, Entry.ZERO_STAR),
}


def _unwitnessed_star(At: AnnotatedMatrix) -> Optional[Tuple[int, int]]:
    ones = At.ones
    bad = At.stars & ~(any_above(ones) & any_right(ones))
    if bad.any():
        i, j = np.argwhere(bad)[0]
        return int(i), int(j)
    return None


def _forbidden_2x2(At: AnnotatedMatrix) -> Optional[Tuple[str, Tuple[int, int, int, int]]]:
    everything = np.ones(At.entries.shape, dtype=bool)
    for name, cells in _FORBIDDEN_2X2.items():
        masks = [everything if cell is None else At.entries == cell for cell in cells]
        hit = find_2x2(*masks)
        if hit is not None:
            return name, hit
    return None


def annotate(A: BinaryMatrix, A12: BinaryMatrix, verify: bool = True) -> AnnotatedMatrix:
    """
    Relabel the zeros of A as 0' (zero in A12 too) or 0* (one in A12). With ``verify`` the
    witness and forbidden-2x2 invariants are checked here; decompose leaves them to certify().
    """
    if not leq(A, A12):
        i, j = np.argwhere(A.mask & ~A12.mask)[0]
        raise NotDominated((int(i), int(j)))

    grid = np.full(A.shape, Entry.ZERO_PRIME, dtype=np.int8)
    grid[A.mask] = Entry.ONE
    grid[~A.mask & A12.mask] = Entry.ZERO_STAR
    grid.setflags(write=False)
    At = AnnotatedMatrix(grid)
    if not verify:
        return At

    cell = _unwitnessed_star(At)
    if cell is not None:
        raise InvariantViolation("star_zeros_witnessed", f"0* at ({cell[0] + 1},{cell[1] + 1}) lacks a 1 above and to its right")
    hit = _forbidden_2x2(At)
    if hit is not None:
        name, (i1, i2, j1, j2) = hit
        raise InvariantViolation(
            "annotated_2x2_free",
            f"{name} at rows {i1 + 1},{i2 + 1} cols {j1 + 1},{j2 + 1}",
        )
    return At


# Column reordering

def algorithm1(At: AnnotatedMatrix) -> Permutation:
    """
    Build the column order L3: each column is appended, then a column holding 0* entries is
    moved directly in front of the leftmost listed column that has a 1 in one of those rows.
    With no such column it stays at the end.
    """
    ones = At.ones
    stars = At.stars
    order: List[int] = []
    for j in range(At.cols):
        order.append(j)
        star_rows = np.flatnonzero(stars[:, j])
        if star_rows.size == 0:
            continue
        anchors = ones[star_rows].any(axis=0)[order]
        if not anchors.any():
            logger.warning(f"Column {j + 1}: no listed column has a 1 in its 0* rows, left at the end")
            continue
        position = int(anchors.argmax())
        order.pop()
        order.insert(position, j)
        logger.debug(f"Column {j + 1} moved in front of column {order[position + 1] + 1}")
    return Permutation(tuple(order))


def _one_before_star(At: AnnotatedMatrix, L3: Permutation) -> Optional[Tuple[int, int, int]]:
    """A row with a 1 strictly left of a 0* in L3 order, as (row, one column, star column)"""
    ones = At.ones[:, L3.order]
    stars = At.stars[:, L3.order]
    bad = stars & _prefix_any(ones)
    if bad.any():
        i, position = np.argwhere(bad)[0]
        left = int(np.flatnonzero(ones[i, :position])[0])
        return int(i), L3.order[left], L3.order[int(position)]
    return None


def _prefix_any(mask: np.ndarray) -> np.ndarray:
    out = np.zeros_like(mask, dtype=bool)
    if mask.shape[1] > 1:
        out[:, 1:] = np.logical_or.accumulate(mask, axis=1)[:, :-1]
    return out


def build_A3(At: AnnotatedMatrix, L3: Permutation, template: Optional[BinaryMatrix] = None) -> BinaryMatrix:
    """
    In L3 order every row becomes the suffix starting at its leftmost 1 (empty when the row has
    none); the result is returned in the original column order.
    """
    ordered = At.ones[:, L3.order]
    suffix = np.logical_or.accumulate(ordered, axis=1) if At.cols else ordered
    closure = np.zeros(At.entries.shape, dtype=np.uint8)
    closure[:, L3.order] = suffix
    if template is not None:
        return template.with_entries(closure)
    return BinaryMatrix(closure)


# Certification

def certify(A: BinaryMatrix, dec: TripleDecomposition, At: Optional[AnnotatedMatrix] = None) -> Tuple[Check, ...]:
    """Named checks for a decomposition; At adds the annotated-matrix checks"""
    A12 = hadamard(dec.A1, dec.A2)
    checks = [
        Check("dominated_by_closure", leq(A, A12)),
        Check("closure_d_free", is_d_free(A12)),
    ]
    if At is not None:
        checks.extend([
            Check("star_zeros_witnessed", _unwitnessed_star(At) is None),
            Check("annotated_2x2_free", _forbidden_2x2(At) is None),
            Check("one_before_star_free", _one_before_star(At, dec.L3) is None),
        ])
    checks.extend([
        Check("a1_chain", is_chain(dec.A1)),
        Check("a2_chain", is_chain(dec.A2)),
        Check("a3_chain", is_chain(dec.A3)),
        Check("product_matches", hadamard(A12, dec.A3).same_entries(A)),
    ])
    return tuple(checks)


def _not_free_or_violation(A: BinaryMatrix, check: str, message: str) -> FerrersError:
    witness = first_witness(A, (GAMMA, DELTA))
    if witness is not None:
        pattern, occ = witness
        return NotFree(pattern.name, occ)
    logger.error(f"Certification failed on a Gamma,Delta-free matrix: {check} {message}")
    return InvariantViolation(check, message)


def decompose(A: BinaryMatrix) -> TripleDecomposition:
    """Certified chain triple A1, A2, A3 for a matrix that is Gamma,Delta-free as ordered"""
    for pattern in (GAMMA, DELTA):
        if contains(A, pattern):
            raise _not_free_or_violation(A, "gamma_delta_free", "fast check reported a pattern")

    A1 = build_A1(A)
    A2 = build_A2(A)
    try:
        At = annotate(A, hadamard(A1, A2), verify=False)
    except (InvariantViolation, NotDominated) as e:
        raise _not_free_or_violation(A, getattr(e, "check", "dominated_by_closure"), str(e)) from e

    L3 = algorithm1(At)
    A3 = build_A3(At, L3, template=A)
    dec = TripleDecomposition(A1, A2, A3, L3)
    checks = certify(A, dec, At)
    failed = [c.name for c in checks if not c.passed]
    if failed:
        raise _not_free_or_violation(A, failed[0], f"failed checks: {', '.join(failed)}")

    logger.info(f"Decomposition of {A.rows}x{A.cols} matrix certified ({len(checks)} checks)")
    return TripleDecomposition(A1, A2, A3, L3, checks)


# Only-if direction

def _require_chain_triple(C1: BinaryMatrix, C2: BinaryMatrix, C3: BinaryMatrix):
    for other in (C2, C3):
        if other.shape != C1.shape:
            raise DimensionMismatch(f"chain factors have shapes {C1.shape} and {other.shape}")
        if other.row_labels != C1.row_labels or other.col_labels != C1.col_labels:
            raise LabelMismatch("chain factors must share vertex labels")
    for name, C in (("C1", C1), ("C2", C2), ("C3", C3)):
        couple = find_couple(C)
        if couple is not None:
            raise NotChain(name, couple)


def _orders_free(product: BinaryMatrix, closure: BinaryMatrix, rows: Permutation, cols: Permutation) -> bool:
    return is_d_free(permute(closure, rows, cols)) and not any(
        contains(permute(product, rows, cols), pattern) for pattern in (GAMMA, DELTA)
    )


def order_from_chain_triple(
    C1: BinaryMatrix, C2: BinaryMatrix, C3: BinaryMatrix
) -> Tuple[Permutation, Permutation]:
    """
    Rows follow C1's chain ordering with growing neighborhoods (C1's columns become 1-suffixes),
    columns follow C2's with shrinking neighborhoods (C2's rows become 1-prefixes). Under these
    orders C1 (.) C2 is D-free, hence the full product is Gamma,Delta-free; both are verified.
    """
    _require_chain_triple(C1, C2, C3)
    closure = hadamard(C1, C2)
    product = hadamard(closure, C3)

    candidates = []
    for row_dir in (NeighborhoodDirection.INCREASING, NeighborhoodDirection.DECREASING):
        for col_dir in (NeighborhoodDirection.DECREASING, NeighborhoodDirection.INCREASING):
            rows = chain_ordering(C1, row_direction=row_dir).row_order
            cols = chain_ordering(C2, col_direction=col_dir).col_order
            candidates.append((row_dir, col_dir, rows, cols))

    for row_dir, col_dir, rows, cols in candidates:
        if _orders_free(product, closure, rows, cols):
            if (row_dir, col_dir) != candidates[0][:2]:
                logger.warning(f"Chain triple ordered with fallback directions rows={row_dir.value}, cols={col_dir.value}")
            return rows, cols

    logger.error("No candidate ordering of the chain triple is Gamma,Delta-free")
    raise InvariantViolation("chain_triple_ordering", "no candidate direction yields a free ordering")

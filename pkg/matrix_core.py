"""
Ordered 0/1 matrices, {0,1,*} patterns and order-preserving submatrix containment.

Every value here is immutable once built; the numpy buffers are flagged read-only.
Indices are 0-based inside the library.
"""
import itertools
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Sequence, TextIO, Tuple, Union

import numpy as np
from loguru import logger

from errors import (
    DimensionMismatch,
    EmptyInput,
    IllegalCharacter,
    IndexOutOfBounds,
    InvalidPermutation,
    LabelHeaderError,
    LabelMismatch,
    RaggedRows,
    ShapeError,
    SizeMismatch,
)

ZERO, ONE, STAR = 0, 1, 2

_CELL_CHARS = {ZERO: "0", ONE: "1", STAR: "*"}


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class BinaryMatrix:
    """Biadjacency matrix with rows on side U and columns on side V"""
    entries: np.ndarray
    row_labels: Optional[Tuple[str, ...]] = None
    col_labels: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        raw = np.asarray(self.entries)
        if raw.ndim != 2:
            raise ShapeError(f"expected a 2-dimensional grid, got shape {raw.shape}")
        if raw.size and not np.isin(raw, (0, 1)).all():
            raise IllegalCharacter("matrix entries must be 0 or 1")
        entries = _frozen(np.array(raw, dtype=np.uint8))
        m, n = entries.shape
        row_labels = tuple(self.row_labels) if self.row_labels is not None else tuple(f"u{i + 1}" for i in range(m))
        col_labels = tuple(self.col_labels) if self.col_labels is not None else tuple(f"v{j + 1}" for j in range(n))
        if len(row_labels) != m or len(col_labels) != n:
            raise LabelMismatch(f"{len(row_labels)}x{len(col_labels)} labels for a {m}x{n} matrix")
        if len(set(row_labels)) != m or len(set(col_labels)) != n:
            raise LabelMismatch("vertex labels must be distinct per side")
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "row_labels", row_labels)
        object.__setattr__(self, "col_labels", col_labels)

    @classmethod
    def from_rows(cls, rows: Iterable[Union[str, Sequence[int]]], row_labels=None, col_labels=None) -> "BinaryMatrix":
        grid = [[int(c) for c in row] for row in rows]
        return cls(np.array(grid, dtype=np.uint8).reshape(len(grid), -1), row_labels, col_labels)

    @classmethod
    def ones(cls, m: int, n: int) -> "BinaryMatrix":
        return cls(np.ones((m, n), dtype=np.uint8))

    @classmethod
    def zeros(cls, m: int, n: int) -> "BinaryMatrix":
        return cls(np.zeros((m, n), dtype=np.uint8))

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.entries.shape

    @property
    def mask(self) -> np.ndarray:
        return self.entries.astype(bool)

    def with_entries(self, entries: np.ndarray) -> "BinaryMatrix":
        """Same vertices, new edge set"""
        return BinaryMatrix(entries, self.row_labels, self.col_labels)

    def has_auto_labels(self) -> bool:
        return (
            self.row_labels == tuple(f"u{i + 1}" for i in range(self.rows))
            and self.col_labels == tuple(f"v{j + 1}" for j in range(self.cols))
        )

    def to_rows(self) -> List[str]:
        return ["".join("1" if x else "0" for x in row) for row in self.entries]

    def to_text(self) -> str:
        lines = []
        if not self.has_auto_labels():
            lines.append(f"labels: {','.join(self.row_labels)} ; {','.join(self.col_labels)}")
        lines.extend(self.to_rows())
        return "\n".join(lines) + "\n"

    def same_entries(self, other: "BinaryMatrix") -> bool:
        return self.shape == other.shape and bool(np.array_equal(self.entries, other.entries))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BinaryMatrix):
            return NotImplemented
        return (
            self.same_entries(other)
            and self.row_labels == other.row_labels
            and self.col_labels == other.col_labels
        )

    def __hash__(self) -> int:
        return hash((self.shape, self.entries.tobytes(), self.row_labels, self.col_labels))

    def __repr__(self) -> str:
        return f"<BinaryMatrix({self.rows}x{self.cols}, rows={self.to_rows()})>"


@dataclass(frozen=True, eq=False)
class Pattern:
    """{0,1,*} template; STAR matches either value"""
    entries: np.ndarray
    name: str = ""

    def __post_init__(self):
        raw = np.asarray(self.entries)
        if raw.ndim != 2 or raw.shape[0] < 1 or raw.shape[1] < 1:
            raise ShapeError("a pattern needs at least one row and one column")
        if not np.isin(raw, (ZERO, ONE, STAR)).all():
            raise IllegalCharacter("pattern entries must be 0, 1 or *")
        object.__setattr__(self, "entries", _frozen(np.array(raw, dtype=np.int8)))

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.entries.shape

    def key(self) -> Tuple[Tuple[int, int], bytes]:
        return self.shape, self.entries.tobytes()

    def named(self, name: str) -> "Pattern":
        return Pattern(self.entries, name)

    def to_rows(self) -> List[str]:
        return ["".join(_CELL_CHARS[int(x)] for x in row) for row in self.entries]

    def to_text(self) -> str:
        return "\n".join(self.to_rows()) + "\n"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Pattern):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        label = self.name or "pattern"
        return f"<Pattern({label}: {' / '.join(self.to_rows())})>"


@dataclass(frozen=True, order=True)
class Occurrence:
    """Where a pattern embeds: strictly increasing row and column indices"""
    row_indices: Tuple[int, ...]
    col_indices: Tuple[int, ...]

    def __post_init__(self):
        rows = tuple(int(i) for i in self.row_indices)
        cols = tuple(int(j) for j in self.col_indices)
        for name, seq in (("row", rows), ("column", cols)):
            if any(b <= a for a, b in zip(seq, seq[1:])):
                raise ShapeError(f"{name} indices must be strictly increasing: {seq}")
        object.__setattr__(self, "row_indices", rows)
        object.__setattr__(self, "col_indices", cols)


@dataclass(frozen=True)
class Permutation:
    """Target ordering: position k holds source index order[k]"""
    order: Tuple[int, ...]

    def __post_init__(self):
        order = tuple(int(k) for k in self.order)
        if sorted(order) != list(range(len(order))):
            raise InvalidPermutation(f"not a bijection on 0..{len(order) - 1}: {order}")
        object.__setattr__(self, "order", order)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def from_one_based(cls, order: Iterable[int]) -> "Permutation":
        return cls(tuple(k - 1 for k in order))

    @property
    def size(self) -> int:
        return len(self.order)

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.order)
        for position, source in enumerate(self.order):
            inv[source] = position
        return Permutation(tuple(inv))

    def one_based(self) -> List[int]:
        return [k + 1 for k in self.order]

    def is_identity(self) -> bool:
        return self.order == tuple(range(len(self.order)))


def compose(second: Permutation, first: Permutation) -> Permutation:
    """Permutation equivalent to applying ``first`` and then ``second``"""
    if second.size != first.size:
        raise SizeMismatch(f"cannot compose permutations of sizes {second.size} and {first.size}")
    return Permutation(tuple(first.order[k] for k in second.order))


# Text format

def _read_text(text: Union[str, TextIO]) -> str:
    if hasattr(text, "read"):
        return text.read()
    return text


def _parse_label_header(line: str) -> Tuple[Tuple[str, ...], Tuple[str, ...]]:
    body = line.split(":", 1)[1]
    sides = body.split(";")
    if len(sides) != 2:
        raise LabelHeaderError("label header must be 'labels: u1,u2,... ; v1,v2,...'")
    row_labels, col_labels = (tuple(s.strip() for s in side.split(",") if s.strip()) for side in sides)
    return row_labels, col_labels


def _parse_grid(text: Union[str, TextIO], alphabet: str, allow_labels: bool):
    lines: List[str] = []
    labels = None
    for number, raw in enumerate(_read_text(text).splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.lower().startswith("labels:"):
            if not allow_labels or lines or labels is not None:
                raise LabelHeaderError(f"line {number}: label header must be the first non-comment line")
            labels = _parse_label_header(line)
            continue
        illegal = sorted(set(line) - set(alphabet))
        if illegal:
            raise IllegalCharacter(f"line {number}: illegal character(s) {''.join(illegal)!r}")
        lines.append(line)

    if not lines:
        raise EmptyInput("no matrix rows found")
    width = len(lines[0])
    for row, line in enumerate(lines, start=1):
        if len(line) != width:
            raise RaggedRows(f"row {row} has length {len(line)}, expected {width}")
    return lines, labels


def parse_matrix(text: Union[str, TextIO]) -> BinaryMatrix:
    """Parse the matrix text format (rows over {0,1}, '#' comments, optional label header)"""
    lines, labels = _parse_grid(text, "01", allow_labels=True)
    grid = np.array([[int(c) for c in line] for line in lines], dtype=np.uint8)
    if labels is None:
        return BinaryMatrix(grid)
    row_labels, col_labels = labels
    if len(row_labels) != grid.shape[0] or len(col_labels) != grid.shape[1]:
        raise LabelHeaderError(
            f"label header names {len(row_labels)}x{len(col_labels)} vertices for a {grid.shape[0]}x{grid.shape[1]} matrix"
        )
    try:
        return BinaryMatrix(grid, row_labels, col_labels)
    except LabelMismatch as e:
        raise LabelHeaderError(str(e)) from e


def parse_pattern(text: Union[str, TextIO], name: str = "") -> Pattern:
    """Parse a pattern: same format as matrices over {0,1,*}, no label header"""
    lines, _ = _parse_grid(text, "01*", allow_labels=False)
    codes = {"0": ZERO, "1": ONE, "*": STAR}
    return Pattern(np.array([[codes[c] for c in line] for line in lines], dtype=np.int8), name)


# Shifted closures used by the vectorized checks

def any_above(mask: np.ndarray) -> np.ndarray:
    """out[i, j] is True iff mask[i', j] for some i' < i"""
    out = np.zeros_like(mask, dtype=bool)
    if mask.shape[0] > 1:
        out[1:] = np.logical_or.accumulate(mask, axis=0)[:-1]
    return out


def any_right(mask: np.ndarray) -> np.ndarray:
    """out[i, j] is True iff mask[i, j'] for some j' > j"""
    out = np.zeros_like(mask, dtype=bool)
    if mask.shape[1] > 1:
        out[:, :-1] = np.logical_or.accumulate(mask[:, ::-1], axis=1)[:, ::-1][:, 1:]
    return out


def _exclusive_prefix_any(mask: np.ndarray) -> np.ndarray:
    """out[r, j] is True iff mask[r, j'] for some j' < j"""
    out = np.zeros_like(mask, dtype=bool)
    if mask.shape[1] > 1:
        out[:, 1:] = np.logical_or.accumulate(mask, axis=1)[:, :-1]
    return out


def find_2x2(
    top_left: np.ndarray,
    top_right: np.ndarray,
    bottom_left: np.ndarray,
    bottom_right: np.ndarray,
) -> Optional[Tuple[int, int, int, int]]:
    """
    Lexicographically least (i1, i2, j1, j2) with i1 < i2, j1 < j2 and all four cell masks true
    at the corresponding corners. O(m^2 n) vectorized.
    """
    m, n = top_left.shape
    for i1 in range(m - 1):
        if not top_left[i1].any() or not top_right[i1].any():
            continue
        left = top_left[i1] & bottom_left[i1 + 1:]
        right = top_right[i1] & bottom_right[i1 + 1:]
        has_left = left.any(axis=1)
        has_right = right.any(axis=1)
        first_left = left.argmax(axis=1)
        last_right = n - 1 - right[:, ::-1].argmax(axis=1)
        ok = has_left & has_right & (first_left < last_right)
        if ok.any():
            k = int(ok.argmax())
            j1 = int(first_left[k])
            j2 = j1 + 1 + int(right[k, j1 + 1:].argmax())
            return i1, i1 + 1 + k, j1, j2
    return None


def _cell_mask(entries: np.ndarray, cell: int) -> np.ndarray:
    if cell == STAR:
        return np.ones(entries.shape, dtype=bool)
    return entries == cell


# Closed-form presence tests for the patterns the theorem is about

def _contains_d(mask: np.ndarray) -> bool:
    # (1 * / 0 1): a zero with a 1 above it and a 1 to its right
    return bool((~mask & any_above(mask) & any_right(mask)).any())


def _contains_gamma(mask: np.ndarray) -> bool:
    # centre (i2, j2) is the 0 of the middle row
    m, n = mask.shape
    if m < 3 or n < 3:
        return False
    centre = ~mask & any_above(mask) & any_right(mask)
    for i2 in range(1, m - 1):
        candidates = centre[i2]
        if not candidates.any():
            continue
        below = mask[i2 + 1:]
        # (i3, j1) with A[i2, j1] = 1 and A[i3, j1] = 0, needed strictly left of j2
        left_ok = _exclusive_prefix_any(~below & mask[i2])
        if (candidates & (below & left_ok).any(axis=0)).any():
            return True
    return False


def _contains_delta(mask: np.ndarray) -> bool:
    # corner (i3, j2) is the 0 of the bottom row
    m, n = mask.shape
    if m < 3 or n < 3:
        return False
    corner = ~mask & any_right(mask)
    lifted_zero = ~mask & any_above(mask)
    for i3 in range(2, m):
        candidates = corner[i3]
        if not candidates.any():
            continue
        above = mask[:i3]
        # (i2, j1) with A[i2, j1] = 0 under some 1 and A[i3, j1] = 1, needed strictly left of j2
        left_ok = _exclusive_prefix_any(lifted_zero[:i3] & mask[i3])
        if (candidates & (above & left_ok).any(axis=0)).any():
            return True
    return False


GAMMA = parse_pattern("*1*\n101\n01*", "gamma")
DELTA = parse_pattern("1**\n01*\n101", "delta")
D_PATTERN = parse_pattern("1*\n01", "D")

_FAST_CHECKS: Dict[Tuple[Tuple[int, int], bytes], Callable[[np.ndarray], bool]] = {
    D_PATTERN.key(): _contains_d,
    GAMMA.key(): _contains_gamma,
    DELTA.key(): _contains_delta,
}


# Pattern operations

def matches_at(M: BinaryMatrix, P: Pattern, occ: Occurrence) -> bool:
    if len(occ.row_indices) != P.rows or len(occ.col_indices) != P.cols:
        raise IndexOutOfBounds(f"occurrence of size {len(occ.row_indices)}x{len(occ.col_indices)} for a {P.rows}x{P.cols} pattern")
    if any(i < 0 or i >= M.rows for i in occ.row_indices) or any(j < 0 or j >= M.cols for j in occ.col_indices):
        raise IndexOutOfBounds(f"occurrence {occ} outside a {M.rows}x{M.cols} matrix")
    sub = M.entries[np.ix_(occ.row_indices, occ.col_indices)]
    fixed = P.entries != STAR
    return bool(np.all(sub[fixed] == P.entries[fixed]))


def find_pattern(M: BinaryMatrix, P: Pattern) -> Optional[Occurrence]:
    """Lexicographically least occurrence (row tuple, then column tuple), or None"""
    p, q = P.shape
    m, n = M.shape
    if p > m or q > n:
        return None

    fast = _FAST_CHECKS.get(P.key())
    if fast is not None and not fast(M.mask):
        return None

    entries = M.entries
    if (p, q) == (2, 2):
        masks = [_cell_mask(entries, int(P.entries[r, c])) for r, c in ((0, 0), (0, 1), (1, 0), (1, 1))]
        hit = find_2x2(*masks)
        if hit is None:
            return None
        i1, i2, j1, j2 = hit
        return Occurrence((i1, i2), (j1, j2))

    # cell_ok[r, c, i, j]: M[i, j] agrees with pattern cell (r, c)
    cell_ok = np.stack([
        np.stack([_cell_mask(entries, int(P.entries[r, c])) for c in range(q)])
        for r in range(p)
    ])
    pattern_rows = np.arange(p)
    for rows in itertools.combinations(range(m), p):
        col_ok = cell_ok[pattern_rows, :, np.array(rows), :].all(axis=0)
        cols = []
        position = -1
        for c in range(q):
            hits = np.flatnonzero(col_ok[c, position + 1:])
            if hits.size == 0:
                break
            position = position + 1 + int(hits[0])
            cols.append(position)
        if len(cols) == q:
            return Occurrence(rows, tuple(cols))
    return None


def contains(M: BinaryMatrix, P: Pattern) -> bool:
    if P.rows > M.rows or P.cols > M.cols:
        return False
    fast = _FAST_CHECKS.get(P.key())
    if fast is not None:
        return fast(M.mask)
    return find_pattern(M, P) is not None


def is_free(M: BinaryMatrix, Ps: Iterable[Pattern]) -> bool:
    return not any(contains(M, P) for P in Ps)


def first_witness(M: BinaryMatrix, Ps: Iterable[Pattern]) -> Optional[Tuple[Pattern, Occurrence]]:
    """First pattern (in the given order) that M contains, with its least occurrence"""
    for P in Ps:
        occ = find_pattern(M, P)
        if occ is not None:
            logger.debug(f"{P.name or 'pattern'} found at rows {occ.row_indices}, cols {occ.col_indices}")
            return P, occ
    return None


# Matrix algebra

def _require_same_shape(A: BinaryMatrix, B: BinaryMatrix):
    if A.shape != B.shape:
        raise DimensionMismatch(f"shapes {A.shape} and {B.shape} differ")


def hadamard(A: BinaryMatrix, B: BinaryMatrix) -> BinaryMatrix:
    _require_same_shape(A, B)
    if A.row_labels != B.row_labels or A.col_labels != B.col_labels:
        raise LabelMismatch("Hadamard product needs identical vertex labels")
    return A.with_entries(A.entries & B.entries)


def permute(M: BinaryMatrix, rp: Permutation, cp: Permutation) -> BinaryMatrix:
    if rp.size != M.rows or cp.size != M.cols:
        raise SizeMismatch(f"permutations of sizes {rp.size}x{cp.size} for a {M.rows}x{M.cols} matrix")
    return BinaryMatrix(
        M.entries[np.ix_(rp.order, cp.order)] if M.entries.size else M.entries.copy(),
        tuple(M.row_labels[k] for k in rp.order),
        tuple(M.col_labels[k] for k in cp.order),
    )


def leq(A: BinaryMatrix, B: BinaryMatrix) -> bool:
    _require_same_shape(A, B)
    return bool(np.all(A.entries <= B.entries))

"""
Brute-force ground truth: exact Ferrers dimension by covering zeros with feasible zero sets,
exhaustive pattern-free ordering search, canonical enumeration of small bipartite graphs and
the cross-validation harness built on them.
"""
import itertools
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from tqdm import tqdm

from catalog import PATTERNS
from chain import is_chain
from config import settings
from decompose import decompose, order_from_chain_triple
from errors import BudgetExceeded, CellNotZero, FerrersError
from generators import random_chain_triple, random_shape
from geometry import orthant_model, verify_model
from matrix_core import (
    DELTA,
    D_PATTERN,
    GAMMA,
    BinaryMatrix,
    Pattern,
    Permutation,
    hadamard,
    is_free,
    permute,
)
from models import CrossValidationReport, DimensionReport, Discrepancy, RandomSuiteReport


@dataclass(frozen=True)
class ZeroSet:
    cells: FrozenSet[Tuple[int, int]]

    def sorted_cells(self) -> List[Tuple[int, int]]:
        return sorted(self.cells)


@dataclass(frozen=True)
class DimensionCertificate:
    dimension: Optional[int]  # None when the dimension exceeds d_max
    d_max: int
    cover: Tuple[ZeroSet, ...] = ()

    @property
    def exceeds(self) -> bool:
        return self.dimension is None

    def to_report(self) -> DimensionReport:
        return DimensionReport(
            dimension=self.dimension if self.dimension is not None else "exceeds d_max",
            d_max=self.d_max,
            cover=[[[i + 1, j + 1] for i, j in zs.sorted_cells()] for zs in self.cover],
        )


# Feasible zero sets

def _zero_cells(A: BinaryMatrix) -> List[Tuple[int, int]]:
    return [(int(i), int(j)) for i, j in np.argwhere(A.entries == 0)]


def is_feasible_zero_set(A: BinaryMatrix, Z: ZeroSet) -> bool:
    """True iff the matrix that is 0 exactly on Z is a chain graph"""
    for i, j in Z.cells:
        if not (0 <= i < A.rows and 0 <= j < A.cols) or A.entries[i, j] != 0:
            raise CellNotZero(f"cell ({i + 1},{j + 1}) is not a zero of the matrix")
    cells = Z.cells
    for (r1, c2), (r2, c1) in itertools.permutations(cells, 2):
        if r1 == r2 or c1 == c2:
            continue
        if (r1, c1) not in cells and (r2, c2) not in cells:
            return False
    return True


def _feasible_table(A: BinaryMatrix, zeros: List[Tuple[int, int]]) -> np.ndarray:
    """feasible[mask] for every subset of the zeros, bit b standing for zeros[b]"""
    index = {cell: b for b, cell in enumerate(zeros)}
    masks = np.arange(1 << len(zeros), dtype=np.int64)
    feasible = np.ones(masks.shape, dtype=bool)
    for p, q in itertools.combinations(range(len(zeros)), 2):
        (rp, cp), (rq, cq) = zeros[p], zeros[q]
        if rp == rq or cp == cq:
            continue
        pair = (1 << p) | (1 << q)
        # the pair may coexist only if one of the other two corners is also in the set
        rescue = sum(1 << index[c] for c in ((rp, cq), (rq, cp)) if c in index)
        both = (masks & pair) == pair
        if rescue:
            both &= (masks & rescue) == 0
        feasible &= ~both
    return feasible


def _superset_closure(table: np.ndarray, bits: int, strict: bool = False) -> np.ndarray:
    """out[mask] = table[s] for some s containing mask (strictly, if asked)"""
    closed = table.copy()
    for b in range(bits):
        view = closed.reshape(-1, 2, 1 << b)
        view[:, 0, :] |= view[:, 1, :]
    if not strict:
        return closed
    out = np.zeros_like(table)
    for b in range(bits):
        out.reshape(-1, 2, 1 << b)[:, 0, :] |= closed.reshape(-1, 2, 1 << b)[:, 1, :]
    return out


def ferrers_dimension(
    A: BinaryMatrix,
    d_max: Optional[int] = None,
    budget_zeros: Optional[int] = None,
) -> DimensionCertificate:
    """Least number of feasible zero sets (overlaps allowed) covering all zeros of A"""
    d_max = d_max if d_max is not None else settings.D_MAX
    budget_zeros = budget_zeros if budget_zeros is not None else settings.BUDGET_ZEROS
    zeros = _zero_cells(A)
    z = len(zeros)
    if z > budget_zeros:
        raise BudgetExceeded("zeros", budget_zeros, z)
    if z == 0:
        return DimensionCertificate(0, d_max, ())

    full = (1 << z) - 1
    feasible = _feasible_table(A, zeros)
    has_superset = _superset_closure(feasible, z)
    maximal = [int(s) for s in np.flatnonzero(feasible & ~_superset_closure(feasible, z, strict=True))]
    containing = [[s for s in maximal if (s >> b) & 1] for b in range(z)]
    logger.debug(f"{z} zeros, {int(feasible.sum())} feasible sets, {len(maximal)} maximal")

    dead: set = set()

    def cover(uncovered: int, depth: int) -> Optional[List[int]]:
        if uncovered == 0:
            return []
        if depth == 0 or (uncovered, depth) in dead:
            return None
        if has_superset[uncovered]:
            return [next(s for s in maximal if (s & uncovered) == uncovered)]
        if depth > 1:
            lowest = (uncovered & -uncovered).bit_length() - 1
            for s in containing[lowest]:
                rest = cover(uncovered & ~s, depth - 1)
                if rest is not None:
                    return [s] + rest
        dead.add((uncovered, depth))
        return None

    for d in range(1, d_max + 1):
        sets = cover(full, d)
        if sets is not None:
            zero_sets = tuple(
                ZeroSet(frozenset(zeros[b] for b in range(z) if (s >> b) & 1)) for s in sets
            )
            return DimensionCertificate(len(zero_sets), d_max, zero_sets)
    return DimensionCertificate(None, d_max, ())


def verify_certificate(A: BinaryMatrix, cert: DimensionCertificate) -> bool:
    if cert.dimension is None:
        return not cert.cover
    if len(cert.cover) != cert.dimension:
        return False
    covered = set().union(*(zs.cells for zs in cert.cover)) if cert.cover else set()
    return covered == set(_zero_cells(A)) and all(is_feasible_zero_set(A, zs) for zs in cert.cover)


def cover_factors(A: BinaryMatrix, cert: DimensionCertificate) -> List[BinaryMatrix]:
    """One chain matrix per zero set (0 exactly on it); their Hadamard product is A"""
    factors = []
    for zs in cert.cover:
        entries = np.ones(A.shape, dtype=np.uint8)
        for i, j in zs.cells:
            entries[i, j] = 0
        factors.append(A.with_entries(entries))
    return factors


# Pattern-free ordering search

def _prefix_free(rows_first: np.ndarray, prefix: List[int], patterns: Sequence[Pattern]) -> bool:
    return is_free(BinaryMatrix(rows_first[:, prefix]), patterns)


def _column_search(rows_first: np.ndarray, patterns: Sequence[Pattern], prune: bool) -> Optional[Tuple[int, ...]]:
    n = rows_first.shape[1]
    if not prune:
        for cols in itertools.permutations(range(n)):
            if _prefix_free(rows_first, list(cols), patterns):
                return cols
        return None

    min_cols = min(p.cols for p in patterns)

    def extend(prefix: List[int]) -> Optional[Tuple[int, ...]]:
        # an occurrence inside a prefix survives every extension to the right
        if len(prefix) >= min_cols and not _prefix_free(rows_first, prefix, patterns):
            return None
        if len(prefix) == n:
            return tuple(prefix)
        for c in range(n):
            if c not in prefix:
                found = extend(prefix + [c])
                if found is not None:
                    return found
        return None

    return extend([])


def _search_row_orders(args) -> Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    entries, row_orders, patterns, prune = args
    for rows in row_orders:
        cols = _column_search(entries[list(rows)], patterns, prune)
        if cols is not None:
            return rows, cols
    return None


def _chunks(items: List, size: int) -> Iterator[List]:
    for start in range(0, len(items), size):
        yield items[start:start + size]


def search_free_ordering(
    A: BinaryMatrix,
    Ps: Sequence[Pattern],
    budget_perm: Optional[int] = None,
    prune: bool = True,
    jobs: Optional[int] = None,
) -> Optional[Tuple[Permutation, Permutation]]:
    """First (row order, column order) in lexicographic order whose permuted matrix avoids all Ps"""
    budget_perm = budget_perm if budget_perm is not None else settings.BUDGET_PERM
    jobs = jobs if jobs is not None else settings.JOBS
    if max(A.rows, A.cols) > budget_perm:
        raise BudgetExceeded("permutation", budget_perm, max(A.rows, A.cols))

    patterns = [P for P in Ps if P.rows <= A.rows and P.cols <= A.cols]
    if not patterns:
        return Permutation.identity(A.rows), Permutation.identity(A.cols)

    row_orders = list(itertools.permutations(range(A.rows)))
    entries = np.array(A.entries)
    found = None
    if jobs > 1 and len(row_orders) > 1:
        size = max(1, len(row_orders) // (jobs * 4))
        tasks = [(entries, chunk, patterns, prune) for chunk in _chunks(row_orders, size)]
        executor = ProcessPoolExecutor(max_workers=jobs)
        try:
            # map yields in submission order, so the first hit is the lexicographically first
            for result in executor.map(_search_row_orders, tasks):
                if result is not None:
                    found = result
                    break
        finally:
            executor.shutdown(wait=True, cancel_futures=True)
    else:
        found = _search_row_orders((entries, row_orders, patterns, prune))

    if found is None:
        return None
    rows, cols = found
    return Permutation(rows), Permutation(cols)


# Canonical enumeration

def enumerate_bipartite(m: int, n: int, max_side: Optional[int] = None) -> Iterator[BinaryMatrix]:
    """
    One matrix per class under row and column permutations: the lexicographically least
    member (row-major), yielded in increasing order.
    """
    max_side = max_side if max_side is not None else settings.ENUMERATION_MAX_SIDE
    if max(m, n) > max_side:
        raise BudgetExceeded("enumeration", max_side, max(m, n))
    if m == 0 or n == 0:
        yield BinaryMatrix(np.zeros((m, n), dtype=np.uint8))
        return
    cells = m * n
    codes = np.arange(1 << cells, dtype=np.int64)
    # the first cell (row-major) is the most significant bit
    grids = ((codes[:, np.newaxis] >> np.arange(cells - 1, -1, -1)) & 1).reshape(-1, m, n)
    col_weights = 1 << np.arange(n - 1, -1, -1, dtype=np.int64)
    row_weights = 1 << (n * np.arange(m - 1, -1, -1, dtype=np.int64))

    best = None
    for cols in itertools.permutations(range(n)):
        row_codes = (grids[:, :, list(cols)] * col_weights).sum(axis=2)
        row_codes.sort(axis=1)
        keys = (row_codes * row_weights).sum(axis=1)
        best = keys if best is None else np.minimum(best, keys)

    for key in np.unique(best):
        bits = (int(key) >> np.arange(cells - 1, -1, -1)) & 1
        yield BinaryMatrix(bits.reshape(m, n).astype(np.uint8))


# Cross-validation

_PROGRESS_LEVELS = {"TRACE", "DEBUG", "INFO"}


@dataclass
class _Outcome:
    rows: List[str]
    freeable: bool
    dimension: Optional[int]
    chain: bool
    d_freeable: bool
    discrepancies: List[Discrepancy]


def _validate_one(args) -> _Outcome:
    A, budget_perm, budget_zeros, d_max = args
    rows = A.to_rows()
    issues: List[Discrepancy] = []

    def flag(kind: str, detail: str):
        issues.append(Discrepancy(kind=kind, matrix=rows, detail=detail))

    found = search_free_ordering(A, (GAMMA, DELTA), budget_perm=budget_perm, jobs=1)
    cert = ferrers_dimension(A, d_max=d_max, budget_zeros=budget_zeros)
    d = cert.dimension
    if not verify_certificate(A, cert):
        flag("certificate", "dimension certificate does not re-verify")

    dim_le = lambda k: d is not None and d <= k
    if (found is not None) != dim_le(3):
        flag("theorem", f"gamma/delta-freeable={found is not None} but dimension={d}")

    if found is not None:
        ordered = permute(A, *found)
        try:
            dec = decompose(ordered)
            if not verify_model(orthant_model(dec, ordered), ordered):
                flag("decomposition", "orthant model does not reproduce the matrix")
        except FerrersError as e:
            flag("decomposition", f"{type(e).__name__}: {e}")

    chain = is_chain(A)
    chain_freeable = search_free_ordering(A, (PATTERNS["chain_rev"],), budget_perm=budget_perm, jobs=1) is not None
    if not (chain == dim_le(1) == chain_freeable):
        flag("chain", f"is_chain={chain}, dimension={d}, (1 0)-freeable={chain_freeable}")

    d_freeable = search_free_ordering(A, (D_PATTERN,), budget_perm=budget_perm, jobs=1) is not None
    if d_freeable != dim_le(2):
        flag("chain2", f"D-freeable={d_freeable} but dimension={d}")

    return _Outcome(rows, found is not None, d, chain, d_freeable, issues)


def cross_validate(
    m: int,
    n: int,
    jobs: Optional[int] = None,
    budget_perm: Optional[int] = None,
    budget_zeros: Optional[int] = None,
    d_max: Optional[int] = None,
    progress: bool = False,
) -> CrossValidationReport:
    """Check the Gamma/Delta characterization (and the chain-layer lemmas) on every class of m x n matrices"""
    jobs = jobs if jobs is not None else settings.JOBS
    d_max = d_max if d_max is not None else settings.D_MAX
    if max(m, n) > (budget_perm if budget_perm is not None else settings.BUDGET_PERM):
        raise BudgetExceeded("permutation", budget_perm or settings.BUDGET_PERM, max(m, n))

    matrices = list(enumerate_bipartite(m, n))
    tasks = [(A, budget_perm, budget_zeros, d_max) for A in matrices]
    logger.info(f"Cross-validating {len(matrices)} classes of {m}x{n} matrices")

    quiet = settings.LOG_LEVEL.upper() not in _PROGRESS_LEVELS
    bar = tqdm(total=len(tasks), desc=f"{m}x{n}", disable=not progress or quiet or not sys.stderr.isatty(), file=sys.stderr)
    outcomes: List[_Outcome] = []
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            for outcome in executor.map(_validate_one, tasks, chunksize=max(1, len(tasks) // (jobs * 8))):
                outcomes.append(outcome)
                bar.update(1)
    else:
        for task in tasks:
            outcomes.append(_validate_one(task))
            bar.update(1)
    bar.close()

    dimension_counts: Dict[str, int] = {}
    for outcome in outcomes:
        key = str(outcome.dimension) if outcome.dimension is not None else f">{d_max}"
        dimension_counts[key] = dimension_counts.get(key, 0) + 1

    report = CrossValidationReport(
        m=m,
        n=n,
        classes=len(outcomes),
        freeable=sum(o.freeable for o in outcomes),
        dim_le_3=sum(o.dimension is not None and o.dimension <= 3 for o in outcomes),
        chain=sum(o.chain for o in outcomes),
        d_freeable=sum(o.d_freeable for o in outcomes),
        dimension_counts=dict(sorted(dimension_counts.items())),
        discrepancies=[d for o in outcomes for d in o.discrepancies],
    )
    if report.discrepancies:
        logger.error(f"{len(report.discrepancies)} discrepancies on {m}x{n} matrices")
    else:
        logger.info(f"{m}x{n}: all {report.classes} classes agree")
    return report


def random_suite(count: int, max_side: Optional[int] = None, seed: Optional[int] = None) -> RandomSuiteReport:
    """
    Random chain triples: order the product, decompose it and realise it as an orthant model,
    counting every failed check by name.
    """
    max_side = max_side if max_side is not None else settings.RANDOM_MAX_SIDE
    seed = seed if seed is not None else settings.SEED
    rng = np.random.default_rng(seed)
    failures: Dict[str, int] = {}
    examples: List[Discrepancy] = []

    def fail(name: str, A: BinaryMatrix, detail: str):
        failures[name] = failures.get(name, 0) + 1
        if len(examples) < 10:
            examples.append(Discrepancy(kind=name, matrix=A.to_rows(), detail=detail))

    for _ in range(count):
        m, n = random_shape(rng, max_side)
        C1, C2, C3 = random_chain_triple(rng, m, n)
        product = hadamard(hadamard(C1, C2), C3)
        try:
            rows, cols = order_from_chain_triple(C1, C2, C3)
            A = permute(product, rows, cols)
            if not is_free(A, (GAMMA, DELTA)):
                fail("ordering_free", A, "ordered product contains gamma or delta")
                continue
            dec = decompose(A)
            for check in dec.checks:
                if not check.passed:
                    fail(check.name, A, "check failed")
            if not verify_model(orthant_model(dec, A), A):
                fail("model_membership", A, "orthant model differs")
        except FerrersError as e:
            fail(type(e).__name__, product, str(e))

    logger.info(f"Random suite: {count} samples, {sum(failures.values())} failures")
    return RandomSuiteReport(samples=count, max_side=max_side, seed=seed, failures=failures, examples=examples)

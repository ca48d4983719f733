"""
Exceptions raised across the toolkit.

Library code raises these and never exits; ``main.py`` maps them to exit codes.
"""
from typing import Optional, Tuple


class FerrersError(Exception):
    """Root of every error raised by the toolkit"""


# Matrix text format

class MatrixFormatError(FerrersError, ValueError):
    pass


class EmptyInput(MatrixFormatError):
    pass


class RaggedRows(MatrixFormatError):
    pass


class IllegalCharacter(MatrixFormatError):
    pass


class LabelHeaderError(MatrixFormatError):
    pass


# Shapes and indices

class ShapeError(FerrersError, ValueError):
    pass


class DimensionMismatch(ShapeError):
    pass


class LabelMismatch(ShapeError):
    pass


class SizeMismatch(ShapeError):
    pass


class IndexOutOfBounds(ShapeError, IndexError):
    pass


class InvalidPermutation(FerrersError, ValueError):
    pass


class CellNotZero(FerrersError, ValueError):
    pass


# Structural failures

class NotChain(FerrersError):
    def __init__(self, name: str, couple: Optional[Tuple[int, int, int, int]] = None):
        self.name = name
        self.couple = couple
        detail = ""
        if couple is not None:
            r1, r2, c1, c2 = couple
            detail = f": rows {r1 + 1},{r2 + 1} and cols {c1 + 1},{c2 + 1} induce 2K2"
        super().__init__(f"{name} is not a chain graph{detail}")


class NotDominated(FerrersError):
    def __init__(self, cell: Tuple[int, int]):
        self.cell = cell
        super().__init__(f"A has a 1 at ({cell[0] + 1},{cell[1] + 1}) where the closure has 0")


class NotFree(FerrersError):
    def __init__(self, pattern_name: str, occurrence):
        self.pattern_name = pattern_name
        self.occurrence = occurrence
        rows = [i + 1 for i in occurrence.row_indices]
        cols = [j + 1 for j in occurrence.col_indices]
        super().__init__(f"matrix contains {pattern_name} at rows {rows}, cols {cols}")


class InvariantViolation(FerrersError):
    def __init__(self, check: str, message: str = ""):
        self.check = check
        super().__init__(f"check '{check}' failed" + (f": {message}" if message else ""))


class CertificationFailure(InvariantViolation):
    pass


class BudgetExceeded(FerrersError):
    def __init__(self, budget: str, limit: int, requested: int):
        self.budget = budget
        self.limit = limit
        self.requested = requested
        super().__init__(f"{budget} budget exceeded: {requested} > {limit}")

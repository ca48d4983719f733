"""
Report schemas for every JSON document the toolkit emits.

All indices in these models are 1-based.
"""
from typing import Dict, List, Optional, Union

from pydantic import BaseModel, Field


class OccurrenceReport(BaseModel):
    pattern: str
    rows: List[int]
    cols: List[int]


class CheckReport(BaseModel):
    name: str
    passed: bool


class FreenessReport(BaseModel):
    free: bool
    patterns: List[str]
    witness: Optional[OccurrenceReport] = None


class ThresholdReport(BaseModel):
    row_values: List[int]
    col_thresholds: List[int]


class DecompositionReport(BaseModel):
    A1: List[str]
    A2: List[str]
    A3: List[str]
    L3: List[int]
    certified: bool
    checks: List[CheckReport]


class OrderingReport(BaseModel):
    found: bool
    patterns: List[str]
    row_order: Optional[List[int]] = None
    col_order: Optional[List[int]] = None
    row_labels: Optional[List[str]] = None
    col_labels: Optional[List[str]] = None


class DimensionReport(BaseModel):
    dimension: Union[int, str] = Field(description='Ferrers dimension, or "exceeds d_max"')
    d_max: int
    cover: List[List[List[int]]] = Field(default_factory=list, description="zero sets as 1-based (row, col) cells")


class OrthantReport(BaseModel):
    points: Dict[str, List[int]]
    corners: Dict[str, List[int]]


class Discrepancy(BaseModel):
    kind: str
    matrix: List[str]
    detail: str


class CrossValidationReport(BaseModel):
    m: int
    n: int
    classes: int
    freeable: int
    dim_le_3: int
    chain: int = 0
    d_freeable: int = 0
    dimension_counts: Dict[str, int] = Field(default_factory=dict)
    discrepancies: List[Discrepancy] = Field(default_factory=list)


class RandomSuiteReport(BaseModel):
    samples: int
    max_side: int
    seed: int
    failures: Dict[str, int] = Field(default_factory=dict)
    examples: List[Discrepancy] = Field(default_factory=list)


class CatalogEntry(BaseModel):
    graph_class: str
    patterns: Dict[str, List[str]]
    freeable: Optional[bool] = None


class ErrorReport(BaseModel):
    error: str
    message: str
    witness: Optional[OccurrenceReport] = None

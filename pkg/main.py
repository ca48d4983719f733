#!/usr/bin/env python3
"""
Command-line surface: check, decompose, search, dim, represent, cross-validate, catalog.

Exit codes: 0 success, 1 negative answer (pattern found, not freeable, discrepancies),
2 usage / input format errors, 3 budget exceeded, 4 I/O errors.
"""
import argparse
import json
import sys
from dataclasses import dataclass, field
from enum import Enum
from functools import reduce
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from loguru import logger
from pydantic import BaseModel

from catalog import UnknownSelector, catalog_entries, resolve_patterns
from config import settings
from decompose import decompose
from errors import BudgetExceeded, FerrersError, IllegalCharacter, MatrixFormatError, NotChain, NotFree, ShapeError
from geometry import orthant_model
from matrix_core import DELTA, GAMMA, BinaryMatrix, Permutation, first_witness, hadamard, is_free, parse_matrix, permute
from models import CrossValidationReport, ErrorReport, FreenessReport, OccurrenceReport, OrderingReport
from oracle import cover_factors, cross_validate, ferrers_dimension, random_suite, search_free_ordering

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_BUDGET, EXIT_IO = 0, 1, 2, 3, 4


class Command(Enum):
    CHECK = "check"
    DECOMPOSE = "decompose"
    SEARCH = "search"
    DIM = "dim"
    REPRESENT = "represent"
    CROSS_VALIDATE = "cross-validate"
    CATALOG = "catalog"


class OutputFormat(Enum):
    JSON = "json"
    TEXT = "text"


class UsageError(FerrersError, ValueError):
    pass


_NEEDS_INPUT = {Command.CHECK, Command.DECOMPOSE, Command.SEARCH, Command.DIM, Command.REPRESENT}


@dataclass
class RunConfig:
    command: Command
    input_path: Optional[str] = None
    patterns: List[str] = field(default_factory=list)
    budget_perm: int = settings.BUDGET_PERM
    budget_zeros: int = settings.BUDGET_ZEROS
    d_max: int = settings.D_MAX
    jobs: int = settings.JOBS
    seed: int = settings.SEED
    samples: int = settings.RANDOM_SAMPLES
    max_side: int = settings.RANDOM_MAX_SIDE
    rows: Optional[int] = None
    cols: Optional[int] = None
    output: Optional[str] = None
    format: OutputFormat = OutputFormat.JSON
    plot_csv: Optional[str] = None

    def __post_init__(self):
        for name in ("budget_perm", "budget_zeros", "d_max", "jobs", "max_side"):
            if getattr(self, name) <= 0:
                raise UsageError(f"--{name.replace('_', '-')} must be positive")
        if self.samples < 0:
            raise UsageError("--samples must be non-negative")
        for name in ("rows", "cols"):
            value = getattr(self, name)
            if value is not None and value <= 0:
                raise UsageError(f"--{name} must be positive")
        if self.command in _NEEDS_INPUT and self.input_path is None:
            raise UsageError(f"{self.command.value} needs an input matrix (path or '-')")


@dataclass
class RunResult:
    exit_code: int
    report: object  # pydantic model or list of them
    text: str


def _dump(report) -> object:
    if isinstance(report, BaseModel):
        return report.model_dump(mode="json")
    if isinstance(report, list):
        return [_dump(r) for r in report]
    if isinstance(report, dict):
        return {k: _dump(v) for k, v in report.items()}
    return report


def render(result: RunResult, fmt: OutputFormat) -> str:
    if fmt is OutputFormat.TEXT:
        return result.text.rstrip("\n") + "\n"
    return json.dumps(_dump(result.report), indent=2, ensure_ascii=False) + "\n"


def _read_matrix(path: str) -> BinaryMatrix:
    try:
        if path == "-":
            return parse_matrix(sys.stdin)
        with open(path, encoding="utf-8-sig") as handle:
            return parse_matrix(handle)
    except UnicodeDecodeError as e:
        raise IllegalCharacter(f"{path}: not UTF-8 text ({e.reason} at byte {e.start})") from e


def _occurrence_report(pattern_name: str, occ) -> OccurrenceReport:
    return OccurrenceReport(
        pattern=pattern_name,
        rows=[i + 1 for i in occ.row_indices],
        cols=[j + 1 for j in occ.col_indices],
    )


def _not_free_result(e: NotFree) -> RunResult:
    witness = _occurrence_report(e.pattern_name, e.occurrence)
    report = ErrorReport(error="NotFree", message=str(e), witness=witness)
    return RunResult(EXIT_NEGATIVE, report, f"not free: {e.pattern_name} at rows {witness.rows}, cols {witness.cols}")


class FerrersCLI:
    def __init__(self, config: RunConfig):
        self.config = config

    def run(self) -> RunResult:
        handler = getattr(self, f"_run_{self.config.command.name.lower()}")
        logger.info(f"Running {self.config.command.value}")
        return handler()

    def _matrix(self) -> BinaryMatrix:
        return _read_matrix(self.config.input_path)

    def _run_check(self) -> RunResult:
        A = self._matrix()
        patterns = resolve_patterns(self.config.patterns or ["chain3"])
        names = [p.name for p in patterns]
        witness = first_witness(A, patterns)
        if witness is None:
            return RunResult(EXIT_OK, FreenessReport(free=True, patterns=names), f"free of {', '.join(names)}")
        pattern, occ = witness
        occurrence = _occurrence_report(pattern.name, occ)
        report = FreenessReport(free=False, patterns=names, witness=occurrence)
        return RunResult(EXIT_NEGATIVE, report, f"contains {pattern.name} at rows {occurrence.rows}, cols {occurrence.cols}")

    def _run_decompose(self) -> RunResult:
        A = self._matrix()
        try:
            dec = decompose(A)
        except NotFree as e:
            return _not_free_result(e)
        # independent recomputation of the product from the emitted factors
        if not hadamard(hadamard(dec.A1, dec.A2), dec.A3).same_entries(A):
            raise FerrersError("emitted factors do not multiply back to the input")
        lines = [f"{name}:\n" + "\n".join(m.to_rows()) for name, m in (("A1", dec.A1), ("A2", dec.A2), ("A3", dec.A3))]
        lines.append(f"L3: {dec.L3.one_based()}")
        lines.append(f"certified: {dec.certified}")
        return RunResult(EXIT_OK, dec.to_report(), "\n".join(lines))

    def _run_search(self) -> RunResult:
        A = self._matrix()
        patterns = resolve_patterns(self.config.patterns or ["chain3"])
        names = [p.name for p in patterns]
        found = search_free_ordering(A, patterns, budget_perm=self.config.budget_perm, jobs=self.config.jobs)
        if found is None:
            return RunResult(EXIT_NEGATIVE, OrderingReport(found=False, patterns=names), "none")
        rows, cols = found
        report = OrderingReport(
            found=True,
            patterns=names,
            row_order=rows.one_based(),
            col_order=cols.one_based(),
            row_labels=[A.row_labels[k] for k in rows.order],
            col_labels=[A.col_labels[k] for k in cols.order],
        )
        ordered = permute(A, rows, cols)
        return RunResult(EXIT_OK, report, f"rows {report.row_order}, cols {report.col_order}\n" + ordered.to_text())

    def _run_dim(self) -> RunResult:
        A = self._matrix()
        cert = ferrers_dimension(A, d_max=self.config.d_max, budget_zeros=self.config.budget_zeros)
        if cert.cover and not reduce(hadamard, cover_factors(A, cert)).same_entries(A):
            raise FerrersError("cover factors do not multiply back to the input")
        report = cert.to_report()
        text = f"dimension: {report.dimension}"
        for k, cells in enumerate(report.cover, start=1):
            text += f"\nset {k}: {cells}"
        return RunResult(EXIT_OK, report, text)

    def _run_represent(self) -> RunResult:
        A = self._matrix()
        if is_free(A, (GAMMA, DELTA)):
            rows, cols = Permutation.identity(A.rows), Permutation.identity(A.cols)
        else:
            found = search_free_ordering(A, (GAMMA, DELTA), budget_perm=self.config.budget_perm, jobs=self.config.jobs)
            if found is None:
                report = ErrorReport(error="NotFreeable", message="no ordering avoids gamma and delta")
                return RunResult(EXIT_NEGATIVE, report, "not gamma/delta-freeable: Ferrers dimension exceeds 3")
            rows, cols = found
        ordered = permute(A, rows, cols)
        model = orthant_model(decompose(ordered), ordered)
        if self.config.plot_csv:
            model.to_csv(self.config.plot_csv)
        report = model.to_report()
        text = "\n".join(
            [f"point {label}: {coords}" for label, coords in report.points.items()]
            + [f"corner {label}: {coords}" for label, coords in report.corners.items()]
        )
        return RunResult(EXIT_OK, report, text)

    def _sizes(self) -> List[Tuple[int, int]]:
        side = settings.ENUMERATION_MAX_SIDE
        row_sizes = [self.config.rows] if self.config.rows else range(1, side + 1)
        col_sizes = [self.config.cols] if self.config.cols else range(1, side + 1)
        return [(m, n) for m in row_sizes for n in col_sizes]

    def _run_cross_validate(self) -> RunResult:
        reports: List[CrossValidationReport] = [
            cross_validate(
                m, n,
                jobs=self.config.jobs,
                budget_perm=self.config.budget_perm,
                budget_zeros=self.config.budget_zeros,
                d_max=self.config.d_max,
                progress=True,
            )
            for m, n in self._sizes()
        ]
        suite = random_suite(self.config.samples, self.config.max_side, self.config.seed) if self.config.samples else None

        failures = sum(len(r.discrepancies) for r in reports) + (sum(suite.failures.values()) if suite else 0)
        lines = [
            f"{r.m}x{r.n}: {r.classes} classes, {r.freeable} freeable, {r.dim_le_3} with dimension <= 3, "
            f"{len(r.discrepancies)} discrepancies"
            for r in reports
        ]
        if suite:
            lines.append(f"random suite: {suite.samples} samples, failures {suite.failures or 'none'}")

        report = reports[0] if len(reports) == 1 and suite is None else {"reports": reports, "random_suite": suite}
        return RunResult(EXIT_OK if failures == 0 else EXIT_NEGATIVE, report, "\n".join(lines))

    def _run_catalog(self) -> RunResult:
        A = self._matrix() if self.config.input_path else None
        entries = catalog_entries(A, budget_perm=self.config.budget_perm)
        lines = []
        for entry in entries:
            if entry.freeable is None:
                lines.append(entry.graph_class)
            else:
                lines.append(f"{entry.graph_class} ({'freeable' if entry.freeable else 'not freeable'})")
            for name, rows in entry.patterns.items():
                lines.append(f"  {name}: {' / '.join(rows)}")
        return RunResult(EXIT_OK, entries, "\n".join(lines))


def run(config: RunConfig) -> RunResult:
    try:
        return FerrersCLI(config).run()
    except NotChain as e:
        return RunResult(EXIT_NEGATIVE, ErrorReport(error="NotChain", message=str(e)), str(e))
    except NotFree as e:
        return _not_free_result(e)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget-perm", type=int, default=settings.BUDGET_PERM)
    common.add_argument("--budget-zeros", type=int, default=settings.BUDGET_ZEROS)
    common.add_argument("--d-max", type=int, default=settings.D_MAX)
    common.add_argument("--jobs", type=int, default=settings.JOBS)
    common.add_argument("--format", choices=[f.value for f in OutputFormat], default=OutputFormat.JSON.value)
    common.add_argument("--output", help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(prog="ferrers", description=settings.APP_NAME)
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.APP_VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)
    for command in Command:
        p = sub.add_parser(command.value, parents=[common])
        if command in _NEEDS_INPUT:
            p.add_argument("input", nargs="?", default="-", help="matrix file, '-' for stdin")
        if command in (Command.CHECK, Command.SEARCH):
            p.add_argument("--patterns", action="append", default=[], help="pattern names, comma lists or pattern files")
        if command is Command.CATALOG:
            p.add_argument("input", nargs="?", help="matrix file ('-' for stdin) to test each class for freeability")
        if command is Command.REPRESENT:
            p.add_argument("--plot-csv", help="also write point/corner plot data as CSV")
        if command is Command.CROSS_VALIDATE:
            p.add_argument("--rows", type=int, help="only this number of rows (default: 1..max)")
            p.add_argument("--cols", type=int, help="only this number of columns (default: 1..max)")
            p.add_argument("--samples", type=int, default=settings.RANDOM_SAMPLES, help="random chain-triple instances")
            p.add_argument("--max-side", type=int, default=settings.RANDOM_MAX_SIDE)
            p.add_argument("--seed", type=int, default=settings.SEED)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=Command(args.command),
        input_path=getattr(args, "input", None),
        patterns=getattr(args, "patterns", []),
        budget_perm=args.budget_perm,
        budget_zeros=args.budget_zeros,
        d_max=args.d_max,
        jobs=args.jobs,
        seed=getattr(args, "seed", settings.SEED),
        samples=getattr(args, "samples", 0),
        max_side=getattr(args, "max_side", settings.RANDOM_MAX_SIDE),
        rows=getattr(args, "rows", None),
        cols=getattr(args, "cols", None),
        output=args.output,
        format=OutputFormat(args.format),
        plot_csv=getattr(args, "plot_csv", None),
    )


def configure_logging():
    level = settings.LOG_LEVEL.upper()
    try:
        logger.level(level)
    except ValueError as e:
        raise UsageError(f"FERRERS_LOG_LEVEL: unknown level {settings.LOG_LEVEL!r}") from e
    logger.remove()
    logger.add(sys.stderr, level=level)
    if settings.LOG_TO_FILE:
        settings.LOGS_DIR.mkdir(parents=True, exist_ok=True)
        logger.add(
            settings.LOGS_DIR / "ferrers_{time}.log",
            rotation="1 day",
            retention="30 days",
            level=level,
        )


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        configure_logging()
        config = config_from_args(args)
        result = run(config)
        output = render(result, config.format)
        if config.output:
            Path(config.output).write_text(output, encoding="utf-8")
        else:
            sys.stdout.write(output)
        return result.exit_code
    except (UsageError, UnknownSelector, MatrixFormatError, ShapeError) as e:
        logger.error(f"Usage error: {e}")
        sys.stderr.write(f"error: {e}\n")
        return EXIT_USAGE
    except BudgetExceeded as e:
        logger.error(f"Budget exceeded: {e}")
        sys.stderr.write(f"error: {e}\n")
        return EXIT_BUDGET
    except OSError as e:
        logger.error(f"I/O error: {e}")
        sys.stderr.write(f"error: {e}\n")
        return EXIT_IO
    except FerrersError as e:
        logger.error(f"{type(e).__name__}: {e}")
        sys.stderr.write(f"error: {e}\n")
        return EXIT_NEGATIVE


if __name__ == "__main__":
    sys.exit(main())

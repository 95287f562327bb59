"""Tabular ingestion, risk binarization, SMOTE rebalancing and bootstrap
augmentation.

A :class:`TabularDataset` is an immutable table of named, domain-tagged
columns. Numeric columns hold raw indicator readings; binary columns hold
0/1 risk flags. The preprocessing pipeline is::

    load_csv -> augment_bootstrap (optional) -> smote_balance -> discretize

SMOTE runs before discretization on purpose: interpolation between rows is
only meaningful in numeric space.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    EmptyDataset,
    EmptyFile,
    MissingColumn,
    MissingThreshold,
    ParseError,
    SingleClass,
    TooFewMinority,
)

DOMAINS = (
    "Air",
    "Water",
    "Electricity",
    "Agriculture",
    "Weather",
    "Climate",
    "Health",
    "Infrastructure",
)

NUMERIC = "numeric"
BINARY = "binary"


@dataclass(frozen=True)
class ColumnSpec:
    """Declaration of one indicator column.

    ``threshold`` is the binarization cut for numeric columns. It may be
    left unset at declaration time (the pipeline can fill it from the
    column median), but :func:`discretize` requires it. Binary columns
    must not carry one.

    ``high_is_risky`` gives the direction of the risk mapping: when True,
    values above the threshold binarize to 1; when False (e.g. a water
    quality index, dissolved oxygen), values below the threshold do.
    """

    name: str
    domain: str
    kind: str = NUMERIC
    threshold: float | None = None
    high_is_risky: bool = True

    def __post_init__(self):
        if not self.name:
            raise ValueError("column name must be nonempty")
        if self.domain not in DOMAINS:
            raise ValueError(
                f"unknown domain {self.domain!r}; expected one of {DOMAINS}"
            )
        if self.kind not in (NUMERIC, BINARY):
            raise ValueError(f"unknown column kind {self.kind!r}")
        if self.kind == BINARY and self.threshold is not None:
            raise ValueError(f"binary column {self.name!r} must not set a threshold")


@dataclass(frozen=True)
class TabularDataset:
    """Rectangular table of observations.

    ``rows`` is a read-only float64 array of shape (row_count, n_columns).
    Binary columns contain only 0.0 or 1.0.
    """

    columns: tuple[ColumnSpec, ...]
    rows: np.ndarray

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=np.float64)
        if rows.ndim != 2 or rows.shape[1] != len(self.columns):
            raise ValueError(
                f"rows must be 2-D with {len(self.columns)} columns, got {rows.shape}"
            )
        names = [c.name for c in self.columns]
        if len(set(names)) != len(names):
            raise ValueError("duplicate column names")
        for i, col in enumerate(self.columns):
            if col.kind == BINARY:
                vals = rows[:, i]
                if not np.all((vals == 0.0) | (vals == 1.0)):
                    raise ValueError(f"binary column {col.name!r} has values outside {{0,1}}")
        rows = rows.copy()
        rows.flags.writeable = False
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "columns", tuple(self.columns))

    @property
    def row_count(self) -> int:
        return self.rows.shape[0]

    @property
    def column_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.columns)

    def column_index(self, name: str) -> int:
        for i, c in enumerate(self.columns):
            if c.name == name:
                return i
        raise KeyError(name)

    def column_values(self, name: str) -> np.ndarray:
        return self.rows[:, self.column_index(name)]

    def is_all_binary(self) -> bool:
        return all(c.kind == BINARY for c in self.columns)


@dataclass(frozen=True)
class SmoteConfig:
    k_neighbors: int = 5
    target_ratio: float = 1.0
    class_column: str = "risk"
    seed: int = 0

    def __post_init__(self):
        if self.k_neighbors < 1:
            raise ValueError("k_neighbors must be >= 1")
        if not (0.0 < self.target_ratio <= 1.0):
            raise ValueError("target_ratio must be in (0, 1]")


def load_schema(path: str | Path) -> list[ColumnSpec]:
    """Read a column schema from its JSON document form."""
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    specs = []
    for entry in doc["columns"]:
        specs.append(
            ColumnSpec(
                name=entry["name"],
                domain=entry["domain"],
                kind=entry["kind"],
                threshold=entry.get("threshold"),
                high_is_risky=entry.get("high_is_risky", True),
            )
        )
    return specs


def load_csv(path: str | Path, schema: Sequence[ColumnSpec]) -> TabularDataset:
    """Parse a UTF-8, comma-separated file against a declared schema.

    The header must contain exactly the schema's column names (any order);
    output columns follow schema order. Raises :class:`MissingColumn`,
    :class:`ParseError` (with 1-based data row numbers; row 0 is the
    header) or :class:`EmptyFile`.
    """
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyFile(f"{path} has no header row") from None
        header = [h.strip() for h in header]
        declared = {c.name for c in schema}
        for spec in schema:
            if spec.name not in header:
                raise MissingColumn(spec.name)
        for name in header:
            if name not in declared:
                raise ParseError(0, name, "column not declared in schema")
        if len(set(header)) != len(header):
            raise ParseError(0, header[0], "duplicate header names")

        col_pos = {name: i for i, name in enumerate(header)}
        order = [col_pos[c.name] for c in schema]

        data: list[list[float]] = []
        for rownum, raw in enumerate(reader, start=1):
            if len(raw) != len(header):
                raise ParseError(
                    rownum, header[0], f"expected {len(header)} cells, got {len(raw)}"
                )
            parsed = []
            for spec, pos in zip(schema, order):
                cell = raw[pos].strip()
                if cell == "":
                    raise ParseError(rownum, spec.name, "missing value")
                try:
                    value = float(cell)
                except ValueError:
                    raise ParseError(rownum, spec.name, f"not a number: {cell!r}") from None
                if not math.isfinite(value):
                    raise ParseError(rownum, spec.name, f"non-finite value: {cell!r}")
                if spec.kind == BINARY and value not in (0.0, 1.0):
                    raise ParseError(rownum, spec.name, f"binary cell must be 0 or 1, got {cell!r}")
                parsed.append(value)
            data.append(parsed)

    rows = np.array(data, dtype=np.float64).reshape(len(data), len(schema))
    return TabularDataset(columns=tuple(schema), rows=rows)


def save_csv(data: TabularDataset, path: str | Path) -> None:
    """Write the dataset back out in the same CSV dialect it is read in."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(data.column_names)
        for row in data.rows:
            writer.writerow(
                [
                    int(v) if spec.kind == BINARY else repr(float(v))
                    for spec, v in zip(data.columns, row)
                ]
            )


def fill_thresholds(data: TabularDataset) -> TabularDataset:
    """Fill missing numeric thresholds with the column median.

    Backs the pipeline's --auto-threshold mode; columns that already carry
    a threshold are untouched.
    """
    columns = []
    for i, col in enumerate(data.columns):
        if col.kind == NUMERIC and col.threshold is None:
            columns.append(replace(col, threshold=float(np.median(data.rows[:, i]))))
        else:
            columns.append(col)
    return TabularDataset(columns=tuple(columns), rows=data.rows)


def discretize(data: TabularDataset) -> TabularDataset:
    """Map every numeric column onto a 0/1 risk indicator.

    For high-is-risky columns, value > threshold maps to 1; for
    low-is-risky columns, value < threshold maps to 1. Ties at the
    threshold always map to 0, so goldens are stable. Binary columns pass
    through unchanged, which makes the operation idempotent.
    """
    out = np.array(data.rows, dtype=np.float64)
    columns = []
    for i, col in enumerate(data.columns):
        if col.kind == BINARY:
            columns.append(col)
            continue
        if col.threshold is None:
            raise MissingThreshold(col.name)
        if col.high_is_risky:
            out[:, i] = (out[:, i] > col.threshold).astype(np.float64)
        else:
            out[:, i] = (out[:, i] < col.threshold).astype(np.float64)
        columns.append(replace(col, kind=BINARY, threshold=None))
    return TabularDataset(columns=tuple(columns), rows=out)


def _numeric_feature_indices(data: TabularDataset, class_column: str) -> list[int]:
    return [
        i
        for i, c in enumerate(data.columns)
        if c.kind == NUMERIC and c.name != class_column
    ]


def smote_balance(data: TabularDataset, cfg: SmoteConfig) -> TabularDataset:
    """Oversample the minority class by segment interpolation.

    Appends synthetic rows until minority/majority >= target_ratio. Each
    synthetic row interpolates a random minority row x toward one of its
    k nearest minority neighbors x_nn (Euclidean distance over numeric
    columns): numeric cells become x + u*(x_nn - x) with one uniform
    u in [0,1] shared across the row; binary cells other than the class
    column are copied from x; the class cell is the minority label.
    Original rows are preserved untouched as a prefix of the output.
    """
    ci = data.column_index(cfg.class_column)
    if data.columns[ci].kind != BINARY:
        raise ValueError(f"class column {cfg.class_column!r} must be binary")
    labels = data.rows[:, ci]
    n1 = int(np.sum(labels == 1.0))
    n0 = data.row_count - n1
    if n0 == 0 or n1 == 0:
        raise SingleClass(cfg.class_column, 1 if n0 == 0 else 0)

    minority_label = 1.0 if n1 < n0 else 0.0
    minority_idx = np.flatnonzero(labels == minority_label)
    majority_count = max(n0, n1)
    minority_count = len(minority_idx)
    if minority_count <= cfg.k_neighbors:
        raise TooFewMinority(needed=cfg.k_neighbors + 1, have=minority_count)

    n_needed = math.ceil(cfg.target_ratio * majority_count) - minority_count
    if n_needed <= 0:
        return data

    feat = _numeric_feature_indices(data, cfg.class_column)
    minority = data.rows[minority_idx]
    pts = minority[:, feat]

    # pairwise Euclidean distances over numeric features; self excluded
    diff = pts[:, None, :] - pts[None, :, :]
    dist = np.sqrt(np.sum(diff * diff, axis=2))
    np.fill_diagonal(dist, np.inf)
    # stable k-nearest: sort by (distance, index)
    order = np.argsort(dist, axis=1, kind="stable")
    neighbors = order[:, : cfg.k_neighbors]

    rng = np.random.default_rng(cfg.seed)
    synthetic = np.empty((n_needed, data.rows.shape[1]), dtype=np.float64)
    for s in range(n_needed):
        base = int(rng.integers(minority_count))
        nn = int(neighbors[base, int(rng.integers(cfg.k_neighbors))])
        u = float(rng.uniform())
        row = minority[base].copy()
        row[feat] = minority[base, feat] + u * (minority[nn, feat] - minority[base, feat])
        row[ci] = minority_label
        synthetic[s] = row

    return TabularDataset(
        columns=data.columns, rows=np.vstack([data.rows, synthetic])
    )


def augment_bootstrap(
    data: TabularDataset, n_extra: int, noise_scale: float, seed: int
) -> TabularDataset:
    """Append resampled rows with Gaussian jitter on numeric cells.

    A desk-scale stand-in for generative augmentation: each extra row is a
    uniformly resampled original row plus zero-mean noise with std equal
    to noise_scale times the per-column sample std. Binary cells are
    copied unchanged.
    """
    if n_extra < 0:
        raise ValueError("n_extra must be >= 0")
    if noise_scale < 0:
        raise ValueError("noise_scale must be >= 0")
    if n_extra == 0:
        return data
    if data.row_count == 0:
        raise EmptyDataset("cannot bootstrap from an empty dataset")

    numeric = [i for i, c in enumerate(data.columns) if c.kind == NUMERIC]
    if data.row_count > 1:
        stds = np.std(data.rows[:, numeric], axis=0, ddof=1)
    else:
        stds = np.zeros(len(numeric))

    rng = np.random.default_rng(seed)
    picks = rng.integers(data.row_count, size=n_extra)
    extra = data.rows[picks].copy()
    if numeric:
        noise = rng.normal(0.0, 1.0, size=(n_extra, len(numeric)))
        extra[:, numeric] += noise * (noise_scale * stds)
    return TabularDataset(columns=data.columns, rows=np.vstack([data.rows, extra]))


def provenance(original: int, bootstrap: int, smote: int) -> dict:
    """Sidecar row-count record written next to prepared datasets."""
    return {
        "original_rows": int(original),
        "bootstrap_rows": int(bootstrap),
        "smote_rows": int(smote),
        "total_rows": int(original + bootstrap + smote),
    }


def schema_to_json(schema: Iterable[ColumnSpec]) -> dict:
    cols = []
    for c in schema:
        entry: dict = {"name": c.name, "domain": c.domain, "kind": c.kind}
        if c.threshold is not None:
            entry["threshold"] = c.threshold
        entry["high_is_risky"] = c.high_is_risky
        cols.append(entry)
    return {"columns": cols}

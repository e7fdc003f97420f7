"""Typed tabular ingestion: CSV/XLSX loading, encoding, ground truth, correlation.

Column headers carry their type as ``<name>:<kind>`` with kind one of
numeric, categorical, binary, ordinal. Ordinal columns additionally need an
ordered level list, supplied through the dataset metadata ``order`` map.
"""

from __future__ import annotations

import csv
import io
import json
import re
import zipfile
from dataclasses import dataclass, field, replace
from xml.etree import ElementTree

import numpy as np

from causalbench.graphs import MixedGraph, read_adjacency_csv

COLUMN_KINDS = ("numeric", "categorical", "binary", "ordinal")
DATASET_KINDS = ("user", "benchmark")
PROBLEM_KINDS = ("classification", "forecasting", "none")


class IngestError(ValueError):
    code = "ingest_error"


class MissingTypeAnnotation(IngestError):
    code = "missing_type_annotation"


class UnknownColumnKind(IngestError):
    code = "unknown_column_kind"


class RaggedRow(IngestError):
    code = "ragged_row"

    def __init__(self, row_index: int, expected: int, got: int):
        self.row_index = row_index
        super().__init__(f"row {row_index} has {got} cells, expected {expected}")


class HeaderMismatch(IngestError):
    code = "header_mismatch"


@dataclass(frozen=True)
class ColumnSpec:
    name: str
    kind: str
    ordered_levels: tuple[str, ...] | None = None

    def __post_init__(self):
        if not self.name:
            raise IngestError("column name must be non-empty")
        if self.kind not in COLUMN_KINDS:
            raise UnknownColumnKind(f"unknown column kind {self.kind!r} for {self.name!r}")
        if self.ordered_levels is not None:
            levels = tuple(self.ordered_levels)
            if not levels or len(set(levels)) != len(levels):
                raise IngestError(f"ordered levels for {self.name!r} must be non-empty and duplicate-free")
            object.__setattr__(self, "ordered_levels", levels)

    @property
    def header(self) -> str:
        return f"{self.name}:{self.kind}"


@dataclass(frozen=True)
class DatasetMeta:
    name: str
    kind: str = "user"
    problem: str = "none"

    def __post_init__(self):
        if not self.name:
            raise IngestError("dataset name must be non-empty")
        if self.kind not in DATASET_KINDS:
            raise IngestError(f"dataset type must be one of {DATASET_KINDS}, got {self.kind!r}")
        if self.problem not in PROBLEM_KINDS:
            raise IngestError(f"problem must be one of {PROBLEM_KINDS}, got {self.problem!r}")


@dataclass(frozen=True)
class PreprocessOptions:
    missing_policy: str = "dropRows"  # or "meanImpute"
    standardize_numeric: bool = True

    def __post_init__(self):
        if self.missing_policy not in ("dropRows", "meanImpute"):
            raise IngestError(f"unknown missing policy {self.missing_policy!r}")


@dataclass(frozen=True)
class Dataset:
    """Encoded numeric matrix plus its typed column specs and metadata."""

    meta: DatasetMeta
    columns: tuple[ColumnSpec, ...]
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "columns", tuple(self.columns))
        if m.ndim != 2 or m.shape[1] != len(self.columns):
            raise IngestError("matrix shape does not match column specs")
        if m.shape[0] < 1:
            raise IngestError("dataset must have at least one sample")
        if not np.all(np.isfinite(m)):
            raise IngestError("encoded matrix contains missing or non-finite entries")

    @property
    def sample_count(self) -> int:
        return self.matrix.shape[0]

    @property
    def column_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.columns)


@dataclass(frozen=True)
class RawTable:
    headers: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]


def parse_column_header(header: str) -> ColumnSpec:
    """Split ``<name>:<kind>`` on the last colon and validate the kind."""
    if ":" not in header:
        raise MissingTypeAnnotation(f"header {header!r} has no ':<type>' annotation")
    name, _, kind = header.rpartition(":")
    name = name.strip()
    kind = kind.strip()
    if not name:
        raise IngestError(f"header {header!r} has an empty column name")
    return ColumnSpec(name=name, kind=kind)


def parse_meta_json(text: "str | dict") -> tuple[DatasetMeta, dict[str, tuple[str, ...]]]:
    """Dataset metadata wire format: name, type, problem, optional ordinal order map."""
    obj = json.loads(text) if isinstance(text, str) else text
    if not isinstance(obj, dict):
        raise IngestError("metadata must be a JSON object")
    meta = DatasetMeta(
        name=str(obj.get("name", "")),
        kind=str(obj.get("type", "user")),
        problem=str(obj.get("problem", "none")),
    )
    order_raw = obj.get("order", {}) or {}
    if not isinstance(order_raw, dict):
        raise IngestError("metadata 'order' must map column names to level lists")
    order = {str(k): tuple(str(x) for x in v) for k, v in order_raw.items()}
    return meta, order


def meta_to_json(meta: DatasetMeta, order: dict | None = None) -> dict:
    out = {"name": meta.name, "type": meta.kind, "problem": meta.problem}
    if order:
        out["order"] = {k: list(v) for k, v in order.items()}
    return out


# -- table loading --------------------------------------------------------------


def load_table(source, format: str = "csv") -> RawTable:
    """Load a raw table of string cells; first row is the header row."""
    if format == "csv":
        return _load_csv(source)
    if format == "xlsx":
        return _load_xlsx(source)
    raise IngestError(f"unsupported table format {format!r}")


def _load_csv(source) -> RawTable:
    if hasattr(source, "read"):
        data = source.read()
        text = data.decode("utf-8") if isinstance(data, bytes) else data
    else:
        with open(source, "r", encoding="utf-8", newline="") as fh:
            text = fh.read()
    rows = [row for row in csv.reader(io.StringIO(text))]
    rows = [row for row in rows if row != []]
    if not rows:
        raise IngestError("empty table")
    width = len(rows[0])
    for idx, row in enumerate(rows[1:], start=1):
        if len(row) != width:
            raise RaggedRow(idx, width, len(row))
    if len(rows) < 2:
        raise IngestError("table has a header but no data rows")
    return RawTable(tuple(rows[0]), tuple(tuple(r) for r in rows[1:]))


_CELL_REF = re.compile(r"([A-Z]+)(\d+)")


def _col_index(ref: str) -> int:
    m = _CELL_REF.match(ref)
    if not m:
        raise IngestError(f"bad cell reference {ref!r}")
    out = 0
    for ch in m.group(1):
        out = out * 26 + (ord(ch) - ord("A") + 1)
    return out - 1


def _load_xlsx(source) -> RawTable:
    """Minimal XLSX reader: first worksheet only, formula cells read as their
    cached values. Trailing absent cells are treated as empty (missing)."""
    ns = {"m": "http://schemas.openxmlformats.org/spreadsheetml/2006/main"}
    try:
        zf = zipfile.ZipFile(source if hasattr(source, "read") else str(source))
    except (OSError, zipfile.BadZipFile) as exc:
        raise IngestError(f"unreadable xlsx file: {exc}") from None
    with zf:
        shared: list[str] = []
        if "xl/sharedStrings.xml" in zf.namelist():
            root = ElementTree.fromstring(zf.read("xl/sharedStrings.xml"))
            for si in root.findall("m:si", ns):
                shared.append("".join(t.text or "" for t in si.iter(f"{{{ns['m']}}}t")))
        sheet_name = _first_sheet_path(zf, ns)
        root = ElementTree.fromstring(zf.read(sheet_name))
        rows: list[list[str]] = []
        for row_el in root.iter(f"{{{ns['m']}}}row"):
            cells: dict[int, str] = {}
            pos = 0
            for c in row_el.findall("m:c", ns):
                ref = c.get("r")
                idx = _col_index(ref) if ref else pos
                pos = idx + 1
                cells[idx] = _xlsx_cell_value(c, shared, ns)
            width = max(cells) + 1 if cells else 0
            rows.append([cells.get(i, "") for i in range(width)])
    rows = [r for r in rows if any(cell != "" for cell in r)]
    if not rows:
        raise IngestError("empty table")
    width = len(rows[0])
    fixed = []
    for idx, row in enumerate(rows):
        if len(row) > width:
            raise RaggedRow(idx, width, len(row))
        fixed.append(tuple(row + [""] * (width - len(row))))
    if len(fixed) < 2:
        raise IngestError("table has a header but no data rows")
    return RawTable(fixed[0], tuple(fixed[1:]))


def _first_sheet_path(zf: zipfile.ZipFile, ns) -> str:
    wb = ElementTree.fromstring(zf.read("xl/workbook.xml"))
    rel_ns = "http://schemas.openxmlformats.org/officeDocument/2006/relationships"
    sheets = wb.find("m:sheets", ns)
    if sheets is None or len(sheets) == 0:
        raise IngestError("workbook has no sheets")
    rid = sheets[0].get(f"{{{rel_ns}}}id")
    rels = ElementTree.fromstring(zf.read("xl/_rels/workbook.xml.rels"))
    for rel in rels:
        if rel.get("Id") == rid:
            target = rel.get("Target").lstrip("/")
            return target if target.startswith("xl/") else f"xl/{target}"
    return "xl/worksheets/sheet1.xml"


def _xlsx_cell_value(c, shared: list[str], ns) -> str:
    kind = c.get("t", "n")
    v = c.find("m:v", ns)
    if kind == "s":
        return shared[int(v.text)] if v is not None else ""
    if kind in ("str", "n"):
        return v.text if v is not None and v.text is not None else ""
    if kind == "inlineStr":
        is_el = c.find("m:is", ns)
        if is_el is None:
            return ""
        return "".join(t.text or "" for t in is_el.iter(f"{{{ns['m']}}}t"))
    raise IngestError(f"unsupported xlsx cell type {kind!r}")


# -- preprocessing ---------------------------------------------------------------


def specs_from_headers(headers, order: dict | None = None) -> tuple[ColumnSpec, ...]:
    """Parse typed headers; attach ordinal level lists from the metadata order map."""
    order = order or {}
    specs = []
    for h in headers:
        spec = parse_column_header(h)
        if spec.name in order:
            spec = replace(spec, ordered_levels=tuple(order[spec.name]))
        specs.append(spec)
    names = [s.name for s in specs]
    if len(set(names)) != len(names):
        raise IngestError("duplicate column names in header")
    return tuple(specs)


def preprocess(
    table: RawTable,
    specs,
    options: PreprocessOptions = PreprocessOptions(),
    meta: DatasetMeta | None = None,
) -> Dataset:
    """Encode a raw string table into the numeric matrix the algorithms consume.

    Numeric columns parse as floats (z-scored unless disabled; sample standard
    deviation, constant columns become all zeros). Binary and categorical
    columns are coded by lexicographic level order, ordinal columns by rank in
    their declared level list. Empty cells are missing and handled per the
    missing policy.
    """
    specs = tuple(specs)
    if len(specs) != len(table.headers):
        raise IngestError(f"{len(table.headers)} columns but {len(specs)} specs")
    rows = [tuple(cell.strip() for cell in row) for row in table.rows]

    if options.missing_policy == "dropRows":
        rows = [r for r in rows if all(cell != "" for cell in r)]
        if not rows:
            raise IngestError("all rows dropped by the missing-value policy")

    n, k = len(rows), len(specs)
    matrix = np.full((n, k), np.nan)
    for j, spec in enumerate(specs):
        col = [rows[i][j] for i in range(n)]
        matrix[:, j] = _encode_column(col, spec)

    if options.missing_policy == "meanImpute":
        for j in range(k):
            col = matrix[:, j]
            missing = np.isnan(col)
            if missing.all():
                raise IngestError(f"column {specs[j].name!r} has no observed values to impute from")
            col[missing] = col[~missing].mean()

    if options.standardize_numeric:
        for j, spec in enumerate(specs):
            if spec.kind != "numeric":
                continue
            col = matrix[:, j]
            mu = col.mean()
            sd = col.std(ddof=1) if n > 1 else 0.0
            matrix[:, j] = (col - mu) / sd if sd > 0 else np.zeros(n)

    meta = meta or DatasetMeta(name="unnamed")
    return Dataset(meta=meta, columns=specs, matrix=matrix)


def _encode_column(values: list[str], spec: ColumnSpec) -> np.ndarray:
    out = np.full(len(values), np.nan)
    observed = [v for v in values if v != ""]
    if spec.kind == "numeric":
        for i, v in enumerate(values):
            if v == "":
                continue
            try:
                out[i] = float(v)
            except ValueError:
                raise IngestError(
                    f"non-numeric token {v!r} in numeric column {spec.name!r} (row {i + 1})"
                ) from None
        return out
    if spec.kind in ("binary", "categorical"):
        levels = sorted(set(observed))
        if spec.kind == "binary" and len(levels) > 2:
            raise IngestError(
                f"binary column {spec.name!r} has {len(levels)} distinct values: {levels[:5]}"
            )
        codes = {lvl: float(c) for c, lvl in enumerate(levels)}
        for i, v in enumerate(values):
            if v != "":
                out[i] = codes[v]
        return out
    # ordinal
    if spec.ordered_levels is None:
        raise IngestError(f"ordinal column {spec.name!r} is missing its level order")
    rank = {lvl: float(r) for r, lvl in enumerate(spec.ordered_levels)}
    for i, v in enumerate(values):
        if v == "":
            continue
        if v not in rank:
            raise IngestError(f"value {v!r} in ordinal column {spec.name!r} is not in the declared order")
        out[i] = rank[v]
    return out


def load_dataset(
    source,
    meta_json: "str | dict",
    format: str = "csv",
    options: PreprocessOptions = PreprocessOptions(),
) -> Dataset:
    """End-to-end convenience: raw table + metadata JSON -> encoded Dataset."""
    meta, order = parse_meta_json(meta_json)
    table = load_table(source, format=format)
    specs = specs_from_headers(table.headers, order)
    return preprocess(table, specs, options, meta=meta)


def load_ground_truth(source, dataset: Dataset) -> MixedGraph:
    """Expert adjacency CSV over exactly the dataset's columns, same order."""
    try:
        return read_adjacency_csv(source, expected_names=list(dataset.column_names))
    except ValueError as exc:
        if "header mismatch" in str(exc):
            raise HeaderMismatch(str(exc)) from None
        raise


def dataset_to_csv(dataset: Dataset, target=None) -> str:
    """Render the ingest wire format: typed headers, encoded values as text."""
    lines = [",".join(c.header for c in dataset.columns)]
    for row in dataset.matrix:
        lines.append(",".join(repr(float(v)) for v in row))
    text = "\n".join(lines) + "\n"
    if target is not None:
        if hasattr(target, "write"):
            target.write(text)
        else:
            with open(target, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
    return text


def correlation_matrix(dataset: Dataset) -> np.ndarray:
    """Pearson correlation of the encoded matrix.

    Diagonal is exactly 1; pairs involving a constant column are 0 by
    convention. Result is exactly symmetric.
    """
    x = dataset.matrix
    if x.shape[0] < 2:
        raise IngestError("correlation needs at least 2 samples")
    centered = x - x.mean(axis=0)
    norms = np.sqrt((centered**2).sum(axis=0))
    corr = np.zeros((x.shape[1], x.shape[1]))
    nz = norms > 0
    denom = np.outer(norms, norms)
    num = centered.T @ centered
    with np.errstate(invalid="ignore", divide="ignore"):
        corr[np.ix_(nz, nz)] = num[np.ix_(nz, nz)] / denom[np.ix_(nz, nz)]
    corr = np.clip((corr + corr.T) / 2.0, -1.0, 1.0)
    np.fill_diagonal(corr, 1.0)
    return corr

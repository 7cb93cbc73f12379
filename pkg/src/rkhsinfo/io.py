"""CSV readers for samples, pmfs and joint pmf tables."""

import csv
import math

import numpy as np

from .exceptions import InvalidInputError
from .info_discrete import DiscretePmf, JointPmf


class CsvParseError(InvalidInputError):
    """Malformed input file; the message carries the offending line number."""

    def __init__(self, path, line, message):
        super().__init__(f"{path}:{line}: {message}")
        self.path = path
        self.line = line


def _parse_float(token):
    try:
        value = float(token)
    except ValueError:
        return None
    return value


def _read_rows(path):
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = [
                (lineno, [cell.strip() for cell in row])
                for lineno, row in enumerate(csv.reader(fh), start=1)
            ]
    except UnicodeDecodeError as exc:
        raise CsvParseError(path, "?", f"not valid UTF-8 ({exc.reason})") from None
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc.strerror or exc}") from None
    except csv.Error as exc:
        raise CsvParseError(path, "?", str(exc)) from None
    rows = [(n, r) for n, r in rows if any(r)]
    if not rows:
        raise CsvParseError(path, 1, "file is empty")
    return rows


def _has_text(cells):
    return any(_parse_float(c) is None for c in cells)


def read_sample(path):
    """Read one point per row of comma-separated reals; returns an ``(N, d)`` array.

    A first line containing any non-numeric token is treated as a header.
    """
    rows = _read_rows(path)
    if _has_text(rows[0][1]):
        rows = rows[1:]
        if not rows:
            raise CsvParseError(path, 2, "no data rows after header")
    width = len(rows[0][1])
    data = []
    for lineno, cells in rows:
        if len(cells) != width:
            raise CsvParseError(path, lineno, f"expected {width} columns, found {len(cells)}")
        values = []
        for cell in cells:
            v = _parse_float(cell)
            if v is None:
                raise CsvParseError(path, lineno, f"non-numeric cell {cell!r}")
            if not math.isfinite(v):
                raise CsvParseError(path, lineno, f"non-finite cell {cell!r}")
            values.append(v)
        data.append(values)
    return np.array(data, dtype=np.float64)


def read_pmf(path, normalize=False):
    """Read ``label,prob`` rows into a :class:`DiscretePmf`."""
    rows = _read_rows(path)
    first = rows[0][1]
    if len(first) == 2 and _parse_float(first[1]) is None:
        rows = rows[1:]
        if not rows:
            raise CsvParseError(path, 2, "no data rows after header")
    labels, probs = [], []
    for lineno, cells in rows:
        if len(cells) != 2:
            raise CsvParseError(path, lineno, f"expected 2 columns (label,prob), found {len(cells)}")
        p = _parse_float(cells[1])
        if p is None:
            raise CsvParseError(path, lineno, f"non-numeric probability {cells[1]!r}")
        labels.append(cells[0])
        probs.append(p)
    try:
        return DiscretePmf(tuple(labels), np.array(probs), normalize=normalize)
    except InvalidInputError as exc:
        raise InvalidInputError(f"{path}: {exc}") from None


def read_joint(path, normalize=False):
    """Read a joint table: column labels on the first row, row labels in the first column."""
    rows = _read_rows(path)
    header_line, header = rows[0]
    col_labels = header[1:]
    if not col_labels:
        raise CsvParseError(path, header_line, "header needs at least one column label")
    if len(rows) < 2:
        raise CsvParseError(path, header_line + 1, "no data rows after header")
    row_labels, table = [], []
    for lineno, cells in rows[1:]:
        if len(cells) != len(header):
            raise CsvParseError(path, lineno, f"expected {len(header)} columns, found {len(cells)}")
        values = []
        for cell in cells[1:]:
            v = _parse_float(cell)
            if v is None:
                raise CsvParseError(path, lineno, f"non-numeric cell {cell!r}")
            values.append(v)
        row_labels.append(cells[0])
        table.append(values)
    try:
        return JointPmf(tuple(row_labels), tuple(col_labels), np.array(table), normalize=normalize)
    except InvalidInputError as exc:
        raise InvalidInputError(f"{path}: {exc}") from None


def ingest_csv(path, kind="sample", normalize=False):
    """Dispatch to the reader for ``kind`` in {"sample", "pmf", "joint"}."""
    if kind == "sample":
        return read_sample(path)
    if kind == "pmf":
        return read_pmf(path, normalize)
    if kind == "joint":
        return read_joint(path, normalize)
    raise InvalidInputError(f"unknown input kind {kind!r}")

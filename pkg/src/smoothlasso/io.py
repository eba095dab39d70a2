"""CSV ingestion and round-trip float formatting."""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch


@dataclass(frozen=True)
class Table:
    values: np.ndarray
    names: tuple | None = None

    def column(self, key) -> int:
        """Index of a column given by name or (possibly negative) integer."""
        if isinstance(key, int):
            if not -self.values.shape[1] <= key < self.values.shape[1]:
                raise KeyError(f"column {key} out of range")
            return key % self.values.shape[1]
        if self.names is None:
            raise KeyError(f"column {key!r} requested but the file has no header")
        try:
            return self.names.index(key)
        except ValueError:
            raise KeyError(f"no column named {key!r}; have {', '.join(self.names)}") from None


def _is_number(s: str) -> bool:
    try:
        float(s)
    except ValueError:
        return False
    return True


def read_table(path) -> Table:
    """Read a numeric CSV. A first row that does not parse as numbers is a header."""
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    if not rows:
        raise ValueError(f"{path}: empty file")
    names = None
    if not all(_is_number(c) for c in rows[0]):
        names = tuple(c.strip() for c in rows[0])
        rows = rows[1:]
    widths = {len(r) for r in rows}
    if len(widths) > 1:
        raise DimensionMismatch(f"{path}: rows have differing lengths {sorted(widths)}")
    try:
        values = np.array([[float(c) for c in r] for r in rows], dtype=float)
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from None
    if values.ndim != 2 or values.shape[0] == 0:
        raise ValueError(f"{path}: no data rows")
    if names is not None and len(names) != values.shape[1]:
        raise DimensionMismatch(f"{path}: header has {len(names)} fields, rows have {values.shape[1]}")
    if not np.all(np.isfinite(values)):
        raise ValueError(f"{path}: non-finite values")
    return Table(values, names)


def read_vector(path) -> np.ndarray:
    """A single column or a single row of numbers."""
    t = read_table(path)
    v = t.values
    if v.shape[1] == 1:
        return v[:, 0]
    if v.shape[0] == 1:
        return v[0]
    raise DimensionMismatch(f"{path}: expected one row or one column, got shape {v.shape}")


def load_xy(data_path, response_path=None, response_col=None):
    """Design and response from CSV files.

    Without ``response_path`` the response is the column ``response_col`` of
    the data file (a header name or an integer), by default the last one.
    """
    table = read_table(data_path)
    if response_path is not None:
        if response_col is not None:
            raise ValueError("give either a response file or a response column, not both")
        return table.values, read_vector(response_path), table.names
    key = -1 if response_col is None else response_col
    if isinstance(key, str) and key.lstrip("-").isdigit():
        key = int(key)
    j = table.column(key)
    if table.values.shape[1] < 2:
        raise DimensionMismatch(f"{data_path}: need at least one covariate besides the response")
    X = np.delete(table.values, j, axis=1)
    names = None if table.names is None else tuple(n for i, n in enumerate(table.names) if i != j)
    return X, table.values[:, j], names


def fmt(x) -> str:
    """17 significant digits, enough to round-trip a double."""
    return f"{float(x):.17g}"

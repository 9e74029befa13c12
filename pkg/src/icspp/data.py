"""Data container shared across the pipeline stages."""

from dataclasses import dataclass

import numpy as np

# Stage markers for DataSet.stage, in pipeline order.
RAW = "raw"
CENTERED = "centered"
PREWHITENED = "pre"
ICS = "ics"
CURRENT = "current"

_STAGES = (RAW, CENTERED, PREWHITENED, ICS, CURRENT)


@dataclass
class DataSet:
    """A numeric sample with one observation per row.

    Parameters
    ----------
    rows : ndarray, shape (n, p)
        Observations; n >= 2 and every entry finite.
    stage : str
        One of "raw", "centered", "pre", "ics", "current"; records how far
        through the pipeline the rows have been transformed.
    center : ndarray, shape (p,), optional
        Location subtracted from the raw data (zeros until centering).
        Later linear stages carry this record along unchanged.
    columns : list of str, optional
        Column names when the data came from a CSV with a header.

    Instances are treated as immutable once constructed; stages produce new
    DataSet objects instead of mutating `rows` in place.
    """

    rows: np.ndarray
    stage: str = RAW
    center: np.ndarray = None
    columns: list = None

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=float)
        if rows.ndim != 2:
            raise ValueError("rows must be a 2-d array (observations by coordinates)")
        n, p = rows.shape
        if n < 2 or p < 1:
            raise ValueError(f"need at least 2 rows and 1 column, got shape {rows.shape}")
        if not np.all(np.isfinite(rows)):
            raise ValueError("rows contain non-finite entries")
        if self.stage not in _STAGES:
            raise ValueError(f"unknown stage {self.stage!r}")
        self.rows = rows
        center = np.zeros(p) if self.center is None else np.asarray(self.center, dtype=float)
        if center.shape != (p,):
            raise ValueError("center must have one entry per column")
        self.center = center

    @property
    def n(self):
        return self.rows.shape[0]

    @property
    def p(self):
        return self.rows.shape[1]

"""Location centering and the two scatter estimators.

The preliminary scatter is the plain sample covariance.  The second scatter
is a one-step symmetrized M-type estimate built from pairwise differences,

    sum_{i<j} (x_i - x_j)(x_i - x_j)^T / (nu + ||x_i - x_j||^2)^gamma,

optionally rescaled so its trace equals p.  The scale is irrelevant for
coordinate selection, which only uses eigenvectors and eigenvalue order.
"""

from dataclasses import dataclass

import numpy as np

from . import data as ds
from .errors import DegeneratePairs, NotPositiveDefinite

TRACE_P = "trace"
UNNORMALIZED = "none"

# Pairs with squared distance below this are skipped at nu = 0, where the
# weight would blow up; with continuous data this essentially never fires.
_DUPLICATE_SQ = 1e-24


@dataclass
class ScatterConfig:
    """Parameters of the pairwise M-type scatter estimate.

    nu >= 0 and gamma > 0; gamma = 1 with small nu behaves like a robust
    scatter, gamma > 1 emphasizes short-range pair geometry instead.
    """

    nu: float = 0.0
    gamma: float = 1.0
    normalization: str = TRACE_P

    def __post_init__(self):
        if not np.isfinite(self.nu) or self.nu < 0:
            raise ValueError("nu must be finite and >= 0")
        if not np.isfinite(self.gamma) or self.gamma <= 0:
            raise ValueError("gamma must be finite and > 0")
        if self.normalization not in (TRACE_P, UNNORMALIZED):
            raise ValueError(f"unknown normalization {self.normalization!r}")


def center(dataset):
    """Subtract the column means from a raw dataset.

    Returns a stage-"centered" DataSet whose `center` field records the
    subtracted mean.
    """
    if dataset.stage != ds.RAW:
        raise ValueError(f"center() expects stage 'raw', got {dataset.stage!r}")
    mean = dataset.rows.mean(axis=0)
    return ds.DataSet(dataset.rows - mean, stage=ds.CENTERED, center=mean,
                      columns=dataset.columns)


def sample_covariance(dataset):
    """Sample covariance (1/(n-1)) sum_i x_i x_i^T of centered rows."""
    if dataset.stage == ds.RAW:
        raise ValueError("sample_covariance() expects centered data; call center() first")
    x = dataset.rows
    cov = x.T @ x / (x.shape[0] - 1)
    return (cov + cov.T) / 2.0


def one_step_m_scatter(dataset, cfg):
    """One-step symmetrized M-type scatter of the rows.

    Parameters
    ----------
    dataset : DataSet
        Intended to be prewhitened data, though any centered sample works.
    cfg : ScatterConfig

    Returns
    -------
    ndarray, shape (p, p)
        Symmetric positive semidefinite; trace equals p when the config asks
        for trace normalization.

    Raises
    ------
    DegeneratePairs
        If nu = 0 and every pair of rows is numerically identical.
    NotPositiveDefinite
        If the accumulated scatter has nonpositive trace and trace
        normalization was requested.
    """
    x = dataset.rows
    n, p = x.shape
    # One block of outer products per anchor row, accumulated in a fixed
    # order so results are bit-reproducible.
    blocks = np.zeros((n - 1, p, p))
    kept = 0
    for i in range(n - 1):
        diffs = x[i + 1:] - x[i]
        sq = np.einsum("ij,ij->i", diffs, diffs)
        if cfg.nu == 0.0:
            keep = sq >= _DUPLICATE_SQ
            diffs, sq = diffs[keep], sq[keep]
        kept += sq.size
        if sq.size:
            weights = (cfg.nu + sq) ** (-cfg.gamma)
            blocks[i] = diffs.T @ (weights[:, None] * diffs)
    if kept == 0:
        raise DegeneratePairs("all pairwise differences are numerically zero")
    total = blocks.sum(axis=0)
    total = (total + total.T) / 2.0
    if cfg.normalization == TRACE_P:
        tr = float(np.trace(total))
        if tr <= 0:
            raise NotPositiveDefinite("scatter accumulated a nonpositive trace")
        total *= p / tr
    return total

"""Gradient descent over rotations of the coordinate basis.

Each iteration computes the entropy gradient block of the current rows,
takes its thin SVD, and rotates the data along the closed-form exponential
of the associated antisymmetric matrix.  Step control halves the rotation
angles (and the acceptance target) until the realized entropy decrease is
at least a third of the first-order prediction; the loop stops once the
squared gradient norm falls below the threshold.
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import data as ds
from .entropy import entropy_and_gradient, estimate_entropy
from .errors import DimensionMismatch, InvalidIndices
from .linalg import SvdFactors, structured_exp, thin_svd


class Termination(str, Enum):
    GRADIENT_BELOW_THRESHOLD = "gradient_below_threshold"
    MAX_ITERS = "max_iters"
    STEP_FLOOR = "step_floor"


@dataclass
class OptimizerConfig:
    """Knobs of the local descent loop.

    threshold is the stopping level for the squared gradient norm; the two
    caps guard against floating-point floors the idealized loop does not
    have, and runs that exit through them are flagged, never silently
    accepted as converged.
    """

    bandwidth: float = 0.5
    threshold: float = 1e-11
    max_outer_iters: int = 1000
    max_halvings: int = 60

    def __post_init__(self):
        if not np.isfinite(self.bandwidth) or self.bandwidth <= 0:
            raise ValueError("bandwidth must be positive and finite")
        if not np.isfinite(self.threshold) or self.threshold <= 0:
            raise ValueError("threshold must be positive and finite")
        if self.max_outer_iters < 1 or self.max_halvings < 1:
            raise ValueError("iteration caps must be >= 1")


@dataclass
class IterationRecord:
    """Bookkeeping for one accepted descent step."""

    iteration: int
    H_before: float
    H_after: float
    grad_norm_sq: float
    halvings: int
    accepted_t: float


@dataclass
class PPTrace:
    """Per-iteration records plus how and where the loop stopped."""

    records: list = field(default_factory=list)
    termination: Termination = None
    final_grad_norm_sq: float = np.nan


@dataclass
class LocalPPResult:
    rotated_data: ds.DataSet
    total_rotation: np.ndarray
    final_H: float
    trace: PPTrace
    snapshots: dict = field(default_factory=dict)

    @property
    def iterations(self):
        return len(self.trace.records)


def armijo_accept(h_value, h_trial, delta):
    """Accept a step when the realized decrease reaches a third of delta."""
    if delta < 0:
        raise ValueError("delta must be >= 0")
    return h_value - h_trial >= delta / 3.0


def component_order(p, selected):
    """Selected indices first (in the given order), the complement ascending."""
    sel = [int(i) for i in selected]
    if not sel or len(set(sel)) != len(sel):
        raise InvalidIndices(f"indices must be nonempty and distinct, got {selected}")
    if any(i < 0 or i >= p for i in sel):
        raise InvalidIndices(f"indices out of range for p={p}: {sel}")
    chosen = set(sel)
    return sel + [i for i in range(p) if i not in chosen]


def permute_components(dataset, selected):
    """Reorder coordinates so the selected ones lead, the rest follow ascending."""
    order = component_order(dataset.p, selected)
    return ds.DataSet(dataset.rows[:, order], stage=dataset.stage,
                      center=dataset.center)


def local_pp(dataset, d, cfg, capture_iters=()):
    """Descend the projected entropy by rotating the coordinate basis.

    Parameters
    ----------
    dataset : DataSet
        Rows already permuted so the starting projection is the first d
        coordinates.
    d : int
        Projection dimension, 1 <= d < p.
    cfg : OptimizerConfig
    capture_iters : iterable of int, optional
        Iteration counts after which to store a copy of the projected
        coordinates in the result's `snapshots` (0 stores the start).

    Returns
    -------
    LocalPPResult
        Rotated data (stage "current"), the accumulated rotation with
        rotated rows = input rows @ rotation.T, the final entropy value, and
        the full trace.  Entropy decreases strictly across accepted
        iterations; a gradient_below_threshold termination certifies the
        squared gradient norm ended under cfg.threshold.
    """
    x = np.array(dataset.rows, dtype=float)
    n, p = x.shape
    if not 1 <= d < p:
        raise DimensionMismatch(f"need 1 <= d < p, got d={d}, p={p}")
    capture = {int(k) for k in capture_iters}

    rotation = np.eye(p)
    h_value, grad = entropy_and_gradient(x, d, cfg.bandwidth)
    grad_sq = float(np.sum(grad * grad))
    trace = PPTrace()
    snapshots = {}
    if 0 in capture:
        snapshots[0] = x[:, :d].copy()

    termination = None
    iteration = 0
    while grad_sq >= cfg.threshold:
        if iteration >= cfg.max_outer_iters:
            termination = Termination.MAX_ITERS
            break
        factors = thin_svd(grad)
        sigma = factors.singulars.copy()
        delta = grad_sq
        halvings = 0
        rot = None
        while True:
            trial = structured_exp(
                SvdFactors(factors.left, sigma, factors.right), d, p)
            h_trial = estimate_entropy(x @ trial[:d].T, cfg.bandwidth)
            if armijo_accept(h_value, h_trial, delta):
                rot = trial
                break
            if halvings >= cfg.max_halvings:
                break
            # Halve the angles and the acceptance target in lockstep.
            sigma /= 2.0
            delta /= 2.0
            halvings += 1
        if rot is None:
            termination = Termination.STEP_FLOOR
            break
        x = x @ rot.T
        rotation = rot @ rotation
        trace.records.append(IterationRecord(
            iteration=iteration, H_before=h_value, H_after=h_trial,
            grad_norm_sq=grad_sq, halvings=halvings, accepted_t=2.0 ** -halvings))
        h_value = h_trial
        _, grad = entropy_and_gradient(x, d, cfg.bandwidth)
        grad_sq = float(np.sum(grad * grad))
        iteration += 1
        if iteration in capture:
            snapshots[iteration] = x[:, :d].copy()

    trace.termination = termination or Termination.GRADIENT_BELOW_THRESHOLD
    trace.final_grad_norm_sq = grad_sq
    out = ds.DataSet(x, stage=ds.CURRENT, center=dataset.center)
    return LocalPPResult(rotated_data=out, total_rotation=rotation,
                         final_H=h_value, trace=trace, snapshots=snapshots)

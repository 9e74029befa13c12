"""End-to-end search for interesting low-dimensional projections.

Three stages: center and whiten with the sample covariance, rotate into the
descending eigenbasis of a second (pairwise M-type) scatter, then refine
candidate coordinate selections by local entropy descent.  A global variant
skips the eigenbasis rotation and may repeat from random orthogonal
pre-rotations.  The overall linear map from centered raw data to the final
coordinates is recovered by multivariate least squares and cross-checkable
against the product of the stagewise factors.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import data as ds
from .entropy import estimate_entropy
from .errors import DimensionMismatch, InvalidIndices, SingularDesign
from .linalg import (SpectralDecomp, random_orthogonal, spectral_decompose,
                     sym_inverse_sqrt)
from .optimizer import (LocalPPResult, OptimizerConfig, component_order,
                        local_pp, permute_components)
from .scatter import ScatterConfig, center, one_step_m_scatter, sample_covariance

ICS_THEN_PP = "ics-pp"
GLOBAL_PP = "global-pp"
ICS_ONLY = "ics-only"
_MODES = (ICS_THEN_PP, GLOBAL_PP, ICS_ONLY)

ALL_PAIRS = "all-pairs"
ICS_ADJACENT = "ics-adjacent"
BEST_INITIAL = "best-initial"
EXPLICIT = "explicit"
_POLICIES = (ALL_PAIRS, ICS_ADJACENT, BEST_INITIAL, EXPLICIT)


@dataclass
class PipelineConfig:
    """Configuration of a full pipeline run.

    starts = None picks all-pairs for d = 2 and ics-adjacent otherwise.
    best-initial evaluates the same candidate set but descends only from the
    start with the smallest initial entropy.  restarts > 0 applies only to
    global-pp and adds that many random orthogonal pre-rotations.
    """

    d: int = 2
    scatter: ScatterConfig = field(default_factory=ScatterConfig)
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    mode: str = ICS_THEN_PP
    starts: str = None
    explicit_starts: tuple = None
    restarts: int = 0
    seed: int = 0
    jobs: int = 1

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("d must be >= 1")
        if self.mode not in _MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.starts is not None and self.starts not in _POLICIES:
            raise ValueError(f"unknown starts policy {self.starts!r}")
        if self.restarts < 0:
            raise ValueError("restarts must be >= 0")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")

    def starts_policy(self):
        if self.starts is not None:
            return self.starts
        return ALL_PAIRS if self.d == 2 else ICS_ADJACENT


@dataclass
class StartRecord:
    """Outcome of one starting coordinate selection."""

    start: tuple
    restart: int
    initial_H: float
    final_H: float = None
    iterations: int = None
    termination: str = None
    result: LocalPPResult = None


@dataclass
class StagewiseTransforms:
    """Factors of the overall map, kept for diagnostics.

    product() rebuilds the least-squares B from whitening, base rotation,
    start permutation, and accumulated descent rotation; the two agree to
    round-off on any completed run.
    """

    whitening: np.ndarray
    base_rotation: np.ndarray
    order: tuple
    local_rotation: np.ndarray

    def product(self):
        p = self.whitening.shape[0]
        perm = np.eye(p)[:, list(self.order)]
        return self.whitening @ self.base_rotation @ perm @ self.local_rotation.T


@dataclass
class PipelineResult:
    """Everything a run produced.

    B satisfies centered_rows @ B = final_data.rows up to round-off; its
    first d columns are the projection functionals that were found.
    per_start is sorted by initial entropy, ascending.
    """

    best: LocalPPResult
    per_start: list
    B: np.ndarray
    stagewise: StagewiseTransforms
    final_data: ds.DataSet
    centered: ds.DataSet
    ics: SpectralDecomp = None
    best_input: ds.DataSet = None

    @property
    def best_record(self):
        for rec in self.per_start:
            if rec.result is not None and rec.result is self.best:
                return rec
        return None


def prewhiten(dataset):
    """Whiten centered rows with the inverse symmetric root of their covariance.

    Returns the whitened DataSet (stage "pre") and the inverse root itself.
    Raises NotPositiveDefinite when the sample covariance is singular
    (collinear data).
    """
    if dataset.stage != ds.CENTERED:
        raise ValueError(f"prewhiten() expects stage 'centered', got {dataset.stage!r}")
    cov = sample_covariance(dataset)
    whitener = sym_inverse_sqrt(cov)
    rows = dataset.rows @ whitener  # symmetric factor: rows are (B0^-1 x_i)^T
    return ds.DataSet(rows, stage=ds.PREWHITENED, center=dataset.center), whitener


def ics_rotate(dataset, cfg):
    """Rotate whitened data into the descending eigenbasis of the second scatter.

    Coordinate k of the output is u_k^T B0^-1 x_raw for the k-th eigenvector
    u_k; these are the invariant coordinates that survive affine changes of
    the raw data up to per-coordinate sign.
    """
    if dataset.stage != ds.PREWHITENED:
        raise ValueError(f"ics_rotate() expects stage 'pre', got {dataset.stage!r}")
    scat = one_step_m_scatter(dataset, cfg)
    dec = spectral_decompose(scat, require_pd=True)
    rows = dataset.rows @ dec.eigenvectors
    return ds.DataSet(rows, stage=ds.ICS, center=dataset.center), dec


def enumerate_starts(p, d, policy, explicit=None):
    """Candidate index tuples for the leading projection.

    all-pairs (d = 2 only) lists all p(p-1)/2 pairs j < k; ics-adjacent
    lists the d+1 tuples made of the first d-k and last k indices for
    k = 0..d; best-initial uses the same candidates as the default policy;
    explicit validates and passes through the given tuples.
    """
    if not 1 <= d < p:
        raise InvalidIndices(f"need 1 <= d < p, got d={d}, p={p}")
    if policy == EXPLICIT:
        if not explicit:
            raise InvalidIndices("explicit starts require at least one index tuple")
        starts = []
        for tup in explicit:
            tup = tuple(int(i) for i in tup)
            if len(tup) != d:
                raise InvalidIndices(f"start {tup} does not have d={d} indices")
            component_order(p, tup)  # validates range and distinctness
            starts.append(tup)
        return starts
    if policy == ALL_PAIRS:
        if d != 2:
            raise InvalidIndices("all-pairs enumeration is defined for d = 2 only")
        return [(j, k) for j in range(p) for k in range(j + 1, p)]
    if policy == ICS_ADJACENT:
        return [tuple(range(d - k)) + tuple(range(p - k, p)) for k in range(d + 1)]
    if policy == BEST_INITIAL:
        return enumerate_starts(p, d, ALL_PAIRS if d == 2 else ICS_ADJACENT)
    raise InvalidIndices(f"unknown starts policy {policy!r}")


def recover_B(x_raw, x_final):
    """Least-squares solve of x_raw @ B = x_final.

    With x_final an exact linear image of x_raw the residual is at the level
    of round-off; SingularDesign is raised when x_raw is rank deficient.
    """
    a = np.asarray(x_raw, dtype=float)
    b = np.asarray(x_final, dtype=float)
    if a.ndim != 2 or b.ndim != 2 or a.shape[0] != b.shape[0]:
        raise DimensionMismatch(f"incompatible shapes {a.shape} and {b.shape}")
    solution, _, rank, _ = np.linalg.lstsq(a, b, rcond=None)
    if rank < a.shape[1]:
        raise SingularDesign(f"design has rank {rank} < {a.shape[1]}")
    return solution


def _sorted_records(records):
    order = sorted(range(len(records)),
                   key=lambda i: (records[i].initial_H, records[i].restart,
                                  records[i].start))
    return [records[i] for i in order]


def run_pipeline(raw, cfg):
    """Run the full search on raw data.

    Parameters
    ----------
    raw : DataSet
        Stage "raw", n > p, all entries finite.
    cfg : PipelineConfig

    Returns
    -------
    PipelineResult
        In optimization modes, `best` holds the descent result with the
        smallest final entropy across all executed starts (and restarts);
        mode "ics-only" skips optimization and reports initial entropies
        only, with the eigenbasis coordinates as the final data.
    """
    if raw.stage != ds.RAW:
        raise ValueError(f"run_pipeline() expects stage 'raw', got {raw.stage!r}")
    n, p = raw.rows.shape
    if n <= p:
        raise DimensionMismatch(f"need more rows than columns, got {n} x {p}")
    if not cfg.d < p:
        raise DimensionMismatch(f"need d < p, got d={cfg.d}, p={p}")

    centered = center(raw)
    pre, whitener = prewhiten(centered)

    ics_dec = None
    bases = []  # (restart index, base rotation, dataset)
    if cfg.mode in (ICS_THEN_PP, ICS_ONLY):
        ics_data, ics_dec = ics_rotate(pre, cfg.scatter)
        bases.append((0, ics_dec.eigenvectors, ics_data))
    else:
        bases.append((0, np.eye(p), pre))
        rng = np.random.default_rng(cfg.seed)
        for s in range(1, cfg.restarts + 1):
            q = random_orthogonal(rng, p)
            rotated = ds.DataSet(pre.rows @ q, stage=ds.PREWHITENED,
                                 center=pre.center)
            bases.append((s, q, rotated))

    starts = enumerate_starts(p, cfg.d, cfg.starts_policy(), cfg.explicit_starts)
    tasks = []  # (restart, base rotation, start, permuted data, initial H)
    for restart, base_rot, base_data in bases:
        for start in starts:
            permuted = permute_components(base_data, start)
            h0 = estimate_entropy(permuted.rows[:, :cfg.d], cfg.optimizer.bandwidth)
            tasks.append((restart, base_rot, start, permuted, h0))

    if cfg.mode == ICS_ONLY:
        records = [StartRecord(start=start, restart=restart, initial_H=h0)
                   for restart, _, start, _, h0 in tasks]
        stage = StagewiseTransforms(whitening=whitener,
                                    base_rotation=ics_dec.eigenvectors,
                                    order=tuple(range(p)),
                                    local_rotation=np.eye(p))
        b = recover_B(centered.rows, ics_data.rows)
        return PipelineResult(best=None, per_start=_sorted_records(records),
                              B=b, stagewise=stage, final_data=ics_data,
                              centered=centered, ics=ics_dec)

    if cfg.starts_policy() == BEST_INITIAL:
        chosen = {min(range(len(tasks)), key=lambda i: (tasks[i][4], i))}
    else:
        chosen = set(range(len(tasks)))

    def _descend(i):
        return local_pp(tasks[i][3], cfg.d, cfg.optimizer)

    run_order = sorted(chosen)
    if cfg.jobs > 1 and len(run_order) > 1:
        with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
            outcomes = dict(zip(run_order, pool.map(_descend, run_order)))
    else:
        outcomes = {i: _descend(i) for i in run_order}

    records = []
    for i, (restart, _, start, _, h0) in enumerate(tasks):
        rec = StartRecord(start=start, restart=restart, initial_H=h0)
        if i in outcomes:
            res = outcomes[i]
            rec.final_H = res.final_H
            rec.iterations = res.iterations
            rec.termination = res.trace.termination.value
            rec.result = res
        records.append(rec)

    best_i = min(run_order, key=lambda i: (outcomes[i].final_H, i))
    best = outcomes[best_i]
    restart, base_rot, start, permuted, _ = tasks[best_i]
    b = recover_B(centered.rows, best.rotated_data.rows)
    stage = StagewiseTransforms(whitening=whitener, base_rotation=base_rot,
                                order=tuple(component_order(p, start)),
                                local_rotation=best.total_rotation)
    return PipelineResult(best=best, per_start=_sorted_records(records), B=b,
                          stagewise=stage, final_data=best.rotated_data,
                          centered=centered, ics=ics_dec, best_input=permuted)

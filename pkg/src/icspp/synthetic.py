"""Seeded benchmark generators with planted low-dimensional structure.

Each generator builds structured coordinates in a known subspace, pads the
remaining dimensions with independent standard Gaussian noise, and
optionally hides everything behind a random orthogonal or nonsingular
mixing.  Ground truth (labels and the planted functional subspace) rides
along so recovery can be scored objectively.
"""

from dataclasses import dataclass

import numpy as np

from . import data as ds
from .errors import InvalidSpec
from .linalg import random_orthogonal

CLUSTERS = "clusters"
CIRCLE = "circle"
HYPERPLANES = "hyperplanes"
GAUSSIAN = "gaussian"
_KINDS = (CLUSTERS, CIRCLE, HYPERPLANES, GAUSSIAN)

MIX_NONE = "none"
MIX_ORTHOGONAL = "orthogonal"
MIX_NONSINGULAR = "nonsingular"
_MIXINGS = (MIX_NONE, MIX_ORTHOGONAL, MIX_NONSINGULAR)

# Cluster defaults: three Gaussian clusters whose centers sit five
# within-cluster standard deviations apart, with mildly unequal weights, so
# whitened marginals still look Gaussian while the planted plane separates
# the groups cleanly.
DEFAULT_WEIGHTS = (0.4, 0.35, 0.25)


@dataclass
class GeneratorSpec:
    """What to generate.

    kind-specific fields: clusters use centers/weights/cluster_scale (the
    defaults plant three clusters in a 2-d subspace); circle uses
    radius/ring_noise with structure_dim = 2; hyperplanes use
    plane_count/plane_spacing/plane_jitter with structure_dim = 1; gaussian
    has no structure and exists as a null case.
    """

    kind: str
    n: int = 500
    p: int = 8
    structure_dim: int = 2
    seed: int = 0
    mixing: str = MIX_NONE
    centers: np.ndarray = None
    weights: tuple = None
    cluster_scale: float = 1.0
    radius: float = 3.0
    ring_noise: float = 0.2
    plane_count: int = 4
    plane_spacing: float = 0.8
    plane_jitter: float = 0.05


@dataclass
class LabeledDataSet:
    """Generated data plus the ground truth tests score against.

    planted_basis has orthonormal columns spanning the raw-coordinate
    functionals that extract the structured coordinates; with no mixing it
    is simply the leading canonical basis vectors.
    """

    data: ds.DataSet
    labels: np.ndarray
    planted_basis: np.ndarray


def default_cluster_centers(scale=1.0):
    """Equilateral triangle of side 5*scale, centered at the origin."""
    side = 5.0 * scale
    radius = side / np.sqrt(3.0)
    angles = np.pi / 2 + 2.0 * np.pi / 3.0 * np.arange(3)
    return radius * np.column_stack([np.cos(angles), np.sin(angles)])


def _validate(spec):
    if spec.kind not in _KINDS:
        raise InvalidSpec(f"unknown kind {spec.kind!r}")
    if spec.mixing not in _MIXINGS:
        raise InvalidSpec(f"unknown mixing {spec.mixing!r}")
    if spec.n < 2:
        raise InvalidSpec("n must be >= 2")
    if not 1 <= spec.structure_dim <= spec.p:
        raise InvalidSpec(
            f"structure_dim must lie in [1, p], got {spec.structure_dim} with p={spec.p}")
    if spec.kind == CIRCLE and spec.structure_dim != 2:
        raise InvalidSpec("circle structure lives in a 2-d subspace")
    if spec.kind == HYPERPLANES and spec.structure_dim != 1:
        raise InvalidSpec("hyperplane structure lives in a 1-d subspace")
    if spec.kind == CLUSTERS and spec.centers is None and spec.structure_dim != 2:
        raise InvalidSpec("default cluster centers are 2-d; pass centers explicitly")
    if spec.kind == HYPERPLANES and spec.plane_count < 2:
        raise InvalidSpec("need at least two hyperplanes")


def _structured_coords(spec, rng):
    k = spec.structure_dim
    if spec.kind == CLUSTERS:
        centers = (default_cluster_centers(spec.cluster_scale)
                   if spec.centers is None else np.asarray(spec.centers, float))
        weights = np.asarray(DEFAULT_WEIGHTS if spec.weights is None else spec.weights,
                             dtype=float)
        if centers.ndim != 2 or centers.shape[1] != k:
            raise InvalidSpec(f"centers must be (clusters, {k}), got {centers.shape}")
        if weights.shape[0] != centers.shape[0] or np.any(weights <= 0):
            raise InvalidSpec("weights must be positive, one per center")
        if abs(weights.sum() - 1.0) > 1e-12:
            raise InvalidSpec("weights must sum to one")
        labels = rng.choice(centers.shape[0], size=spec.n, p=weights)
        coords = centers[labels] + spec.cluster_scale * rng.standard_normal((spec.n, k))
        return coords, labels
    if spec.kind == CIRCLE:
        angles = rng.uniform(0.0, 2.0 * np.pi, spec.n)
        ring = spec.radius * np.column_stack([np.cos(angles), np.sin(angles)])
        coords = ring + spec.ring_noise * rng.standard_normal((spec.n, 2))
        return coords, angles
    if spec.kind == HYPERPLANES:
        ids = rng.integers(0, spec.plane_count, spec.n)
        offsets = spec.plane_spacing * (ids - (spec.plane_count - 1) / 2.0)
        coords = (offsets + spec.plane_jitter * rng.standard_normal(spec.n))[:, None]
        return coords, ids
    coords = rng.standard_normal((spec.n, k))
    return coords, np.zeros(spec.n, dtype=int)


def generate(spec):
    """Generate a labeled dataset; output is a deterministic function of spec.

    The structured coordinates occupy the leading structure_dim dimensions
    before mixing; the rest are independent standard Gaussian.  Under
    nonsingular mixing the planted basis is the orthonormalized
    inverse-transpose image of those leading canonical directions, i.e. the
    functionals that still extract the structure from the mixed rows.
    """
    _validate(spec)
    rng = np.random.default_rng(spec.seed)
    coords, labels = _structured_coords(spec, rng)
    k = spec.structure_dim
    noise = rng.standard_normal((spec.n, spec.p - k))
    base = np.hstack([coords, noise]) if spec.p > k else coords

    canonical = np.eye(spec.p)[:, :k]
    if spec.mixing == MIX_NONE:
        rows, basis = base, canonical
    elif spec.mixing == MIX_ORTHOGONAL:
        q = random_orthogonal(rng, spec.p)
        rows, basis = base @ q.T, q[:, :k]
    else:
        mix = _random_nonsingular(rng, spec.p)
        rows = base @ mix.T
        pullback = np.linalg.solve(mix.T, canonical)
        basis = np.linalg.qr(pullback)[0]
    return LabeledDataSet(data=ds.DataSet(rows, stage=ds.RAW),
                          labels=labels, planted_basis=basis)


def _random_nonsingular(rng, p):
    # Two Haar rotations around a mild spectrum: condition number <= 10.
    q1 = random_orthogonal(rng, p)
    q2 = random_orthogonal(rng, p)
    spectrum = 10.0 ** rng.uniform(-0.5, 0.5, p)
    return (q1 * spectrum) @ q2.T


def subspace_alignment(found, planted):
    """cos^2 of the largest principal angle between two column spans.

    1.0 means the planted span lies inside the found span; 0.0 means some
    planted direction is orthogonal to everything found.
    """
    qf = np.linalg.qr(np.asarray(found, float))[0]
    qt = np.linalg.qr(np.asarray(planted, float))[0]
    cosines = np.linalg.svd(qf.T @ qt, compute_uv=False)
    worst = float(np.clip(cosines[-1], 0.0, 1.0))
    return worst * worst


def recovery_score(result, truth, d):
    """Score how well a pipeline run recovered the planted structure.

    Compares the span of the projection functionals the run found (the
    leading d columns of its overall map B, which act on centered raw data)
    with the planted basis, via the largest principal angle.
    """
    b = np.asarray(result.B, dtype=float)
    if b.shape[0] != truth.planted_basis.shape[0]:
        raise InvalidSpec("result and truth have different ambient dimensions")
    return subspace_alignment(b[:, :d], truth.planted_basis)

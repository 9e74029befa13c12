"""Kernel estimate of differential entropy and its rotation gradient.

For projected points y_1..y_n in R^d the density estimate is a Gaussian
kernel mixture g_h(y) = (1/n) sum_j phi_h(y - y_j) and the entropy estimate
is H = -(1/n) sum_i log g_h(y_i), the inner sum including j = i.  Lower
values flag a more interesting (less Gaussian) projection.

When the points are the leading d coordinates of p-dimensional rows, the
first-order effect of rotating the trailing coordinates into the projection
is carried by a single (p-d) x d gradient block, computed here both directly
and through a generic pluggable-index interface.
"""

import abc

import numpy as np

from .errors import DimensionMismatch

_LOG_2PI = float(np.log(2.0 * np.pi))


def _as_points(points):
    y = np.asarray(points, dtype=float)
    if y.ndim == 1:
        y = y[:, None]
    if y.ndim != 2 or y.shape[0] < 1:
        raise DimensionMismatch(f"expected an n x d point array, got shape {y.shape}")
    return y


def _check_bandwidth(bandwidth):
    h = float(bandwidth)
    if not np.isfinite(h) or h <= 0:
        raise ValueError("bandwidth must be positive and finite")
    return h


def _kernel_matrix(y, h):
    # exp(-||y_i - y_j||^2 / (2 h^2)) via the Gram expansion, built in one
    # buffer.  Cancellation negatives are clipped and the diagonal pinned to
    # exactly one, so row sums stay >= 1 and logs of them never blow up.
    sq_norms = np.einsum("ij,ij->i", y, y)
    k = y @ y.T
    k *= -2.0
    k += sq_norms[:, None]
    k += sq_norms[None, :]
    np.maximum(k, 0.0, out=k)
    k /= -2.0 * h * h
    np.fill_diagonal(k, 0.0)
    np.exp(k, out=k)
    return k


def _split_blocks(rows, d):
    x = np.asarray(rows, dtype=float)
    if x.ndim != 2:
        raise DimensionMismatch(f"expected an n x p array, got ndim {x.ndim}")
    n, p = x.shape
    if not 1 <= d < p:
        raise DimensionMismatch(f"need 1 <= d < p, got d={d}, p={p}")
    return x[:, :d], x[:, d:]


def kernel_density(points, query, bandwidth):
    """Gaussian kernel density estimate at a single query point.

    Returns (1/n) sum_j h^-d (2 pi)^(-d/2) exp(-||query - y_j||^2 / (2 h^2)),
    evaluated in the log domain.
    """
    y = _as_points(points)
    h = _check_bandwidth(bandwidth)
    n, d = y.shape
    q = np.asarray(query, dtype=float).reshape(-1)
    if q.shape[0] != d:
        raise DimensionMismatch(f"query has {q.shape[0]} coordinates, points have {d}")
    expo = ((y - q) ** 2).sum(axis=1) / (-2.0 * h * h)
    top = expo.max()
    log_val = top + np.log(np.exp(expo - top).sum()) \
        - np.log(n) - d * np.log(h) - 0.5 * d * _LOG_2PI
    return float(np.exp(log_val))


def estimate_entropy(points, bandwidth):
    """Kernel entropy estimate -(1/n) sum_i log g_h(y_i).

    Parameters
    ----------
    points : ndarray, shape (n, d)
        Projected observations (a 1-d array is treated as n x 1).
    bandwidth : float
        Kernel bandwidth h > 0.  Values around 0.3-0.5 work well for cluster
        hunting on whitened data; finer structure needs smaller h.

    Notes
    -----
    The inner sum keeps the j = i term, so the density at each data point is
    at least phi_h(0)/n and the logarithm is always finite.
    """
    y = _as_points(points)
    h = _check_bandwidth(bandwidth)
    n, d = y.shape
    row_tot = _kernel_matrix(y, h).sum(axis=1)
    log_g = np.log(row_tot) - np.log(n) - d * np.log(h) - 0.5 * d * _LOG_2PI
    return float(-log_g.mean())


def gaussian_reference_entropy(d, bandwidth):
    """Value the entropy estimate targets on standard d-dimensional Gaussian data.

    Returns (d/2) ((1 + h^2)^-1 + log(1 + h^2) + log(2 pi)); sample estimates
    sitting clearly below this are the interesting ones.  bandwidth = 0 is
    allowed and gives the exact N(0, I_d) differential entropy.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    h = float(bandwidth)
    if not np.isfinite(h) or h < 0:
        raise ValueError("bandwidth must be finite and >= 0")
    s2 = 1.0 + h * h
    return float(0.5 * d * (1.0 / s2 + np.log(s2) + _LOG_2PI))


def entropy_and_gradient(rows, d, bandwidth):
    """Entropy of the leading-d projection together with its gradient block.

    Shares the O(n^2) kernel matrix between the two quantities; this is the
    workhorse the optimizer calls once per iteration.

    Returns
    -------
    (float, ndarray)
        The entropy estimate and the (p-d) x d gradient block C.  The squared
        Frobenius norm of C is the negated slope of the entropy along the
        steepest-descent rotation.
    """
    y, z = _split_blocks(rows, d)
    h = _check_bandwidth(bandwidth)
    n, d_ = y.shape
    if n < 2:
        raise DimensionMismatch("need at least two observations")
    k = _kernel_matrix(y, h)
    row_tot = k.sum(axis=1)
    log_g = np.log(row_tot) - np.log(n) - d_ * np.log(h) - 0.5 * d_ * _LOG_2PI
    value = float(-log_g.mean())
    w = k
    w /= row_tot[:, None]
    col = w.sum(axis=0)
    # sum_ij w_ij (z_i - z_j)(y_i - y_j)^T expanded into four rank-d products;
    # row sums of w are exactly one.
    grad = (z.T @ y - z.T @ (w @ y) - (w @ z).T @ y + z.T @ (col[:, None] * y)) \
        / (n * h * h)
    return value, grad


def entropy_gradient(rows, d, bandwidth):
    """Gradient block C of the projected entropy with respect to rotations.

    Parameters
    ----------
    rows : ndarray, shape (n, p)
        Full-dimensional observations; the projection is the first d columns.
    d : int
        Projection dimension, 1 <= d < p.
    bandwidth : float

    Returns
    -------
    ndarray, shape (p-d, d)
        (1/(n h^2)) sum_i sum_j w_ij (z_i - z_j)(y_i - y_j)^T with softmax
        weights w_ij over j for each i; the j = i terms contribute zero.
    """
    _, grad = entropy_and_gradient(rows, d, bandwidth)
    return grad


def entropy_pointwise_gradients(points, bandwidth):
    """Per-observation gradients gamma_i of the entropy estimate.

    Perturbing y_i by delta_i changes the estimate by sum_i gamma_i . delta_i
    to first order.
    """
    y = _as_points(points)
    h = _check_bandwidth(bandwidth)
    n = y.shape[0]
    if n < 2:
        raise DimensionMismatch("need at least two observations")
    w = _kernel_matrix(y, h)
    w /= w.sum(axis=1)[:, None]
    col = w.sum(axis=0)
    return ((1.0 + col)[:, None] * y - w @ y - w.T @ y) / (n * h * h)


class ProjectionIndex(abc.ABC):
    """A smooth, orthogonally invariant score of projected interestingness.

    Implementations must satisfy value(V y_1, ..., V y_n) = value(y_1, ...,
    y_n) for every orthogonal V; the generic gradient construction below
    relies on that invariance.
    """

    @abc.abstractmethod
    def value(self, points):
        """Scalar index of an n x d sample (lower = more interesting)."""

    @abc.abstractmethod
    def pointwise_gradients(self, points):
        """n x d array of first-order sensitivities to each observation."""


class EntropyIndex(ProjectionIndex):
    """Kernel entropy packaged as a pluggable projection index."""

    def __init__(self, bandwidth=0.5):
        self.bandwidth = _check_bandwidth(bandwidth)

    def value(self, points):
        return estimate_entropy(points, self.bandwidth)

    def pointwise_gradients(self, points):
        return entropy_pointwise_gradients(points, self.bandwidth)


def index_gradient(rows, d, index):
    """Gradient block sum_i z_i gamma_i^T for any orthogonally invariant index.

    For the entropy index this reproduces entropy_gradient().
    """
    y, z = _split_blocks(rows, d)
    gammas = np.asarray(index.pointwise_gradients(y), dtype=float)
    if gammas.shape != y.shape:
        raise DimensionMismatch(
            f"index returned gradients of shape {gammas.shape}, expected {y.shape}")
    return z.T @ gammas

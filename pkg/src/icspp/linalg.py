"""Dense linear-algebra primitives used throughout the pipeline.

Symmetric eigendecomposition with a deterministic sign and tie-ordering
convention, symmetric inverse square roots for whitening, thin SVD, and the
closed-form matrix exponential of the antisymmetric block matrix

    [[0, -V S W^T], [W S V^T, 0]]

built from the SVD factors of a gradient block.  That exponential is the
rotation each descent step applies to the data.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotPositiveDefinite


@dataclass
class SpectralDecomp:
    """Eigendecomposition M = U diag(lam) U^T with eigenvalues descending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


@dataclass
class SvdFactors:
    """Thin SVD C = left @ diag(singulars) @ right.T, m = min(C.shape) triples."""

    left: np.ndarray
    singulars: np.ndarray
    right: np.ndarray


def _fix_column_signs(vectors):
    """Flip columns so the largest-magnitude entry (first on ties) is positive."""
    idx = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[idx, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs, signs


def _order_tied_columns(values, vectors):
    # Within blocks of exactly equal eigenvalues, order columns by descending
    # lexicographic comparison of their entries, so inputs like the identity
    # decompose the same way on every platform.
    p = len(values)
    start = 0
    while start < p:
        stop = start + 1
        while stop < p and values[stop] == values[start]:
            stop += 1
        if stop - start > 1:
            block = sorted(range(start, stop),
                           key=lambda j: tuple(vectors[:, j]), reverse=True)
            vectors[:, start:stop] = vectors[:, block]
        start = stop
    return vectors


def spectral_decompose(matrix, require_pd=False):
    """Eigendecomposition of a symmetric matrix with deterministic output.

    Parameters
    ----------
    matrix : ndarray, shape (p, p)
        Symmetric input (symmetrized on entry to absorb round-off).
    require_pd : bool
        When True, raise NotPositiveDefinite if any eigenvalue falls at or
        below p * eps * max(eigenvalue).

    Returns
    -------
    SpectralDecomp
        Eigenvalues sorted descending; each eigenvector's largest-magnitude
        entry is positive (ties broken by lowest index), and exactly tied
        eigenvalues order their eigenvectors lexicographically.
    """
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    sym = (m + m.T) / 2.0
    values, vectors = np.linalg.eigh(sym)
    values = values[::-1].copy()
    vectors = vectors[:, ::-1]
    if require_pd:
        floor = m.shape[0] * np.finfo(float).eps * max(values[0], 0.0)
        if values[-1] <= floor:
            raise NotPositiveDefinite(
                f"smallest eigenvalue {values[-1]:.3e} at or below floor {floor:.3e}")
    vectors, _ = _fix_column_signs(vectors)
    vectors = _order_tied_columns(values, vectors.copy())
    return SpectralDecomp(eigenvalues=values, eigenvectors=vectors)


def sym_inverse_sqrt(matrix):
    """Symmetric inverse square root U diag(lam^-1/2) U^T of a PD matrix.

    Whitening with this factor is orthogonally equivariant, which is what the
    affine-invariance guarantees of the pipeline rest on.
    """
    dec = spectral_decompose(matrix, require_pd=True)
    u = dec.eigenvectors
    root = (u * dec.eigenvalues ** -0.5) @ u.T
    return (root + root.T) / 2.0


def thin_svd(matrix):
    """Thin SVD with the same deterministic sign convention as eigenvectors.

    Signs are fixed on the right singular vectors; each left vector is
    flipped along with its partner so the reconstruction is unchanged.
    """
    c = np.asarray(matrix, dtype=float)
    if c.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got ndim {c.ndim}")
    left, singulars, right_t = np.linalg.svd(c, full_matrices=False)
    right = right_t.T
    right, signs = _fix_column_signs(right)
    return SvdFactors(left=left * signs, singulars=singulars, right=right)


def structured_exp(factors, d, p):
    """Closed-form exponential of the antisymmetric block matrix paired with
    a (p-d) x d gradient block C = W diag(sigma) V^T.

    For Delta = [[0, -V diag(sigma) W^T], [W diag(sigma) V^T, 0]] the
    exponential has the explicit form

        [[I_d - V diag(1 - cos sigma) V^T,   -V diag(sin sigma) W^T],
         [W diag(sin sigma) V^T,             I_{p-d} - W diag(1 - cos sigma) W^T]]

    evaluated here with 1 - cos sigma = 2 sin(sigma/2)^2 for accuracy at
    small angles.  The result is orthogonal with determinant one.

    Parameters
    ----------
    factors : SvdFactors
        left (p-d) x m, right d x m, singulars length m = min(d, p-d).
        Negated singular values are allowed and give the transpose.
    d, p : int
        Split dimensions, 1 <= d < p.
    """
    if not 1 <= d < p:
        raise DimensionMismatch(f"need 1 <= d < p, got d={d}, p={p}")
    w = np.asarray(factors.left, dtype=float)
    v = np.asarray(factors.right, dtype=float)
    sigma = np.asarray(factors.singulars, dtype=float)
    m = min(d, p - d)
    if w.shape != (p - d, m) or v.shape != (d, m) or sigma.shape != (m,):
        raise DimensionMismatch(
            f"factor shapes {w.shape}, {sigma.shape}, {v.shape} do not match d={d}, p={p}")
    shrink = 2.0 * np.sin(sigma / 2.0) ** 2
    swing = np.sin(sigma)
    out = np.empty((p, p))
    out[:d, :d] = np.eye(d) - (v * shrink) @ v.T
    out[:d, d:] = -(v * swing) @ w.T
    out[d:, :d] = (w * swing) @ v.T
    out[d:, d:] = np.eye(p - d) - (w * shrink) @ w.T
    return out


def anti_sym_split(matrix):
    """Split a square matrix into its symmetric and antisymmetric parts.

    The two parts sum back to the input and are orthogonal under the
    Frobenius inner product.
    """
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    sym = (m + m.T) / 2.0
    anti = (m - m.T) / 2.0
    return sym, anti


def frobenius_inner(a, b):
    """Frobenius inner product trace(A^T B) = sum_ij A_ij B_ij."""
    return float(np.tensordot(np.asarray(a, float), np.asarray(b, float), axes=2))


def random_orthogonal(rng, p):
    """Haar-distributed orthogonal matrix from a seeded generator."""
    q, r = np.linalg.qr(rng.standard_normal((p, p)))
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return q * signs

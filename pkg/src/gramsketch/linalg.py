"""Dense linear-algebra primitives used by every other module.

Matrices are plain C-contiguous float64 numpy arrays.  The helpers here
add the validation and error semantics the rest of the library relies
on: finite entries, explicit shape checks, tolerance-gated rank and
positive-semidefiniteness tests.  Factorizations delegate to LAPACK via
numpy.linalg, which is deterministic for a fixed build.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionError,
    NotPsdError,
    NumericError,
    RankDeficientError,
    SymmetryError,
)

RANK_TOL = 1e-12  # sigma_min <= RANK_TOL * sigma_max counts as rank deficient


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Validate and return `a` as a 2-D finite float64 array."""
    m = np.ascontiguousarray(a, dtype=np.float64)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NumericError(f"{name} contains non-finite entries")
    return m


def matmul(a, b) -> np.ndarray:
    """Matrix product with an explicit inner-dimension check."""
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


@dataclass(frozen=True)
class SvdResult:
    """Thin SVD a = u @ diag(sigma) @ v.T with nonincreasing sigma."""

    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray


def svd(a) -> SvdResult:
    """Thin singular value decomposition of a tall matrix."""
    a = as_matrix(a, "a")
    n, d = a.shape
    if n < d:
        raise DimensionError(f"svd expects rows >= cols, got {a.shape}")
    u, s, vt = np.linalg.svd(a, full_matrices=False)
    return SvdResult(u=u, sigma=s, v=vt.T)


def psd_sqrt(s) -> np.ndarray:
    """Symmetric PSD square root T of s with T @ T == s.

    Eigenvalues in [-1e-9 * ||s||_2, 0) are treated as roundoff and
    clamped to zero; anything lower raises NotPsdError.
    """
    s = as_matrix(s, "s")
    if s.shape[0] != s.shape[1]:
        raise DimensionError(f"psd_sqrt expects a square matrix, got {s.shape}")
    scale = float(np.abs(s).max()) if s.size else 0.0
    asym = float(np.abs(s - s.T).max()) if s.size else 0.0
    if asym > 1e-9 * scale:
        raise SymmetryError(f"asymmetry {asym:.3e} exceeds 1e-9 * {scale:.3e}")
    sym = 0.5 * (s + s.T)
    w, q = np.linalg.eigh(sym)
    spectral = float(np.abs(w).max()) if w.size else 0.0
    if w.size and w.min() < -1e-9 * spectral:
        raise NotPsdError(f"eigenvalue {w.min():.3e} below -1e-9 * {spectral:.3e}")
    w = np.clip(w, 0.0, None)
    t = (q * np.sqrt(w)) @ q.T
    return 0.5 * (t + t.T)


def qr(a) -> tuple[np.ndarray, np.ndarray]:
    """Reduced QR with nonnegative diagonal of R; rejects rank deficiency."""
    a = as_matrix(a, "a")
    n, d = a.shape
    if n < d:
        raise DimensionError(f"qr expects rows >= cols, got {a.shape}")
    q, r = np.linalg.qr(a)
    flip = np.where(np.diag(r) < 0.0, -1.0, 1.0)
    q = q * flip
    r = flip[:, None] * r
    top = spectral_norm(a)
    if np.diag(r).min() <= RANK_TOL * top:
        raise RankDeficientError("matrix is rank deficient to working precision")
    return q, r


def spectral_norm(a) -> float:
    """Largest singular value."""
    a = as_matrix(a, "a")
    if a.size == 0:
        raise DimensionError("spectral_norm of an empty matrix")
    return float(np.linalg.norm(a, 2))


def solve_least_squares(a, b) -> np.ndarray:
    """Minimize ||a x - b||_F via QR; b may be a vector or a matrix."""
    a = as_matrix(a, "a")
    b_arr = np.ascontiguousarray(b, dtype=np.float64)
    vector = b_arr.ndim == 1
    b2 = as_matrix(b_arr, "b")
    if b2.shape[0] != a.shape[0]:
        raise DimensionError(f"a has {a.shape[0]} rows but b has {b2.shape[0]}")
    q, r = qr(a)
    x = np.linalg.solve(r, q.T @ b2)
    return x.ravel() if vector else x

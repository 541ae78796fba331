"""Fixed-dimension nonlinear l2 subspace embedding.

The embedding of an n x d matrix A is the d x d PSD square root of the
sketched Gram matrix,

    A_tilde = ((Pi^T A)^T (Pi^T A))^{1/2},

whose dimension is d regardless of the sketch size: accuracy is
controlled by the inner sketch rows alone.  Whenever Pi is an eps-JLT
for A's left singular basis, ||A_tilde x||^2 is within a (1 +- eps)
factor of ||A x||^2 for every x simultaneously.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, RankDeficientError
from .linalg import RANK_TOL, as_matrix, psd_sqrt
from .sketch import SketchSpec, apply_sketch, srht_dim


@dataclass(frozen=True)
class L2Embedding:
    """d x d symmetric PSD embedding plus the sketch that produced it."""

    a_tilde: np.ndarray
    spec: SketchSpec
    target_eps: float


def default_sketch_spec(n: int, d: int, eps: float = 0.5, t: float = 4.0,
                        seed: int = 0) -> SketchSpec:
    """SRHT spec sized by `srht_dim`, with a Gaussian fallback for tiny n."""
    if d >= 2 and n >= max(d, 8):
        return SketchSpec("srht", srht_dim(d, n, eps, t), seed=seed)
    return SketchSpec("gaussian", max(n, 1), seed=seed)


def gram_sqrt(a, spec: SketchSpec) -> np.ndarray:
    """PSD square root of the sketched Gram matrix (A^T Pi Pi^T A)^{1/2}.

    Does not require full column rank; rank-deficient inputs simply
    yield a singular (still PSD) square root.
    """
    b = apply_sketch(spec, a)
    return psd_sqrt(b.T @ b)


def embed_l2(a, spec: SketchSpec | None = None, *, eps: float = 0.5,
             t: float = 4.0, seed: int = 0) -> L2Embedding:
    """Embed a full-column-rank A into d dimensions.

    When `spec` is omitted a default SRHT sized for an eps-JLT is used.
    Rank-deficient inputs are rejected: the isometry guarantee assumes
    full rank, so degenerate inputs are caller errors.
    """
    a = as_matrix(a, "a")
    n, d = a.shape
    if n < d:
        raise DimensionError(f"embed_l2 expects rows >= cols, got {a.shape}")
    sv = np.linalg.svd(a, compute_uv=False)
    if sv[-1] <= RANK_TOL * sv[0]:
        raise RankDeficientError("embed_l2 requires full column rank")
    if spec is None:
        spec = default_sketch_spec(n, d, eps, t, seed)
    return L2Embedding(a_tilde=gram_sqrt(a, spec), spec=spec, target_eps=eps)


def measure_l2_distortion(a, a_tilde) -> float:
    """Worst-case relative error of squared norms under the embedding.

    Evaluates ||I - (A^T A)^{-1/2} T^T T (A^T A)^{-1/2}||_2 for an
    embedding T with d columns (T may be any sketch of A, linear or
    not), via the SVD of A.
    """
    if isinstance(a_tilde, L2Embedding):
        a_tilde = a_tilde.a_tilde
    a = as_matrix(a, "a")
    t = as_matrix(a_tilde, "a_tilde")
    d = a.shape[1]
    if t.shape[1] != d:
        raise DimensionError("a_tilde must have the same column count as a")
    u, s, vt = np.linalg.svd(a, full_matrices=False)
    if s[-1] <= RANK_TOL * s[0]:
        raise RankDeficientError("distortion is undefined for rank-deficient a")
    # conjugating by orthogonal V leaves the spectral norm unchanged
    core = (vt @ (t.T @ t) @ vt.T) / np.outer(s, s)
    return float(np.linalg.norm(np.eye(d) - core, 2))

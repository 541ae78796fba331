"""Sketch-and-solve l2 applications: regression, PCA, leverage scores.

All three follow the same pattern: build the fixed-dimension embedding
once, then run the exact algorithm on the small problem.  The relative
error inherited from the embedding is (1 + eps) / (1 - eps) where eps
is the JLT error of the sketch actually drawn.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ParamError, RankDeficientError, SolverError
from .linalg import as_matrix, solve_least_squares
from .l2_embed import default_sketch_spec, embed_l2, gram_sqrt
from .rng import Rng
from .sketch import SketchSpec


@dataclass
class RegressionResult:
    """Solution of a sketched regression with its costs."""

    x: np.ndarray
    sketched_cost: float
    full_cost: float | None = None


@dataclass(frozen=True)
class LeverageScores:
    """Nonnegative per-row importance scores; they sum to ~d."""

    tau: np.ndarray
    eps: float


def lstsq_solver(a_t: np.ndarray, b_t: np.ndarray) -> np.ndarray:
    """Default hook: unconstrained least squares."""
    return solve_least_squares(a_t, b_t)


def ridge_solver(lam: float) -> Callable[[np.ndarray, np.ndarray], np.ndarray]:
    """Hook factory for ridge regression min ||Ax - b||^2 + lam ||x||^2."""
    if lam < 0.0:
        raise ParamError("ridge penalty must be nonnegative")

    def solve(a_t: np.ndarray, b_t: np.ndarray) -> np.ndarray:
        d = a_t.shape[1]
        aug = np.vstack([a_t, math.sqrt(lam) * np.eye(d)])
        pad_shape = (d,) if b_t.ndim == 1 else (d, b_t.shape[1])
        bug = np.concatenate([b_t, np.zeros(pad_shape)])
        return solve_least_squares(aug, bug)

    return solve


def nonneg_solver(a_t: np.ndarray, b_t: np.ndarray) -> np.ndarray:
    """Projected-gradient hook for x >= 0 (fixed 500 iterations)."""
    b2 = b_t if b_t.ndim == 2 else b_t[:, None]
    lip = 2.0 * np.linalg.norm(a_t, 2) ** 2
    if lip == 0.0:
        raise SolverError("zero design matrix")
    x = np.zeros((a_t.shape[1], b2.shape[1]))
    step = 1.0 / lip
    for _ in range(500):
        grad = 2.0 * a_t.T @ (a_t @ x - b2)
        x_new = np.clip(x - step * grad, 0.0, None)
        if float(np.linalg.norm(x_new - x)) <= 1e-10:
            x = x_new
            break
        x = x_new
    return x.ravel() if b_t.ndim == 1 else x


def sketch_regress_l2(a, b, spec: SketchSpec | None = None,
                      solver: Callable | None = None, *, eps: float = 0.5,
                      t: float = 4.0, seed: int = 0,
                      compute_full_cost: bool = True) -> RegressionResult:
    """Constrained/regularized least squares on the embedded problem.

    Stacks X = [A, -B], embeds it, splits the d x d (well, (d+p) x
    (d+p)) square root back into [A_tilde, -B_tilde] and hands those to
    the solver hook.  The hook minimizes ||A_tilde x - B_tilde||_F^2
    (plus whatever penalty it encodes) over its own domain; the default
    is plain least squares.
    """
    a = as_matrix(a, "a")
    b_arr = np.ascontiguousarray(b, dtype=np.float64)
    vector = b_arr.ndim == 1
    b2 = as_matrix(b_arr, "b")
    n, d = a.shape
    if b2.shape[0] != n:
        raise ParamError(f"b has {b2.shape[0]} rows, expected {n}")
    p = b2.shape[1]
    x_mat = np.hstack([a, -b2])
    if spec is None:
        spec = default_sketch_spec(n, d + p, eps, t, seed)
    # X = [A, -B] may be rank deficient (consistent systems); the square
    # root is still well defined, so skip embed_l2's full-rank gate.
    stacked = gram_sqrt(x_mat, spec)
    a_t = stacked[:, :d]
    b_t = -stacked[:, d:]
    if vector:
        b_t = b_t.ravel()
    hook = solver or lstsq_solver
    try:
        x = hook(a_t, b_t)
    except Exception as exc:  # noqa: BLE001 - hook is caller code
        raise SolverError(f"solver hook failed: {exc}") from exc
    x = np.asarray(x, dtype=np.float64)
    sk_cost = float(np.linalg.norm(a_t @ x - b_t) ** 2)
    full_cost = None
    if compute_full_cost:
        ref = b2.ravel() if vector else b2
        full_cost = float(np.linalg.norm(a @ x - ref) ** 2)
    return RegressionResult(x=x, sketched_cost=sk_cost, full_cost=full_cost)


def approx_pca(a, k: int, spec: SketchSpec | None = None, *,
               eps: float = 0.25, t: float = 4.0,
               seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Top-k right singular subspace of the embedding, applied to A.

    Returns (v_k, a_hat_k) where v_k holds the top-k right singular
    vectors of the embedding and a_hat_k = A v_k v_k^T is the induced
    rank-k reconstruction.  Rank-deficient A is fine here.
    """
    a = as_matrix(a, "a")
    n, d = a.shape
    if not 1 <= k <= d:
        raise ParamError(f"k must be in [1, {d}], got {k}")
    if spec is None:
        spec = default_sketch_spec(n, d, eps, t, seed)
    a_tilde = gram_sqrt(a, spec)
    _, _, vt = np.linalg.svd(a_tilde, full_matrices=False)
    v_k = vt[:k].T
    return v_k, a @ v_k @ v_k.T


def default_jl_cols(eps: float, n: int) -> int:
    """Default Gaussian compression width for leverage row norms."""
    if not (0.0 < eps < 1.0) or n < 2:
        raise ParamError("need eps in (0,1) and n >= 2")
    return 8 * math.ceil(math.log(n) / (eps * eps))


def lewis_jl_cols(n: int) -> int:
    """The 300 ln n preset used inside Lewis-weight iterations (eps=1/4)."""
    if n < 2:
        raise ParamError("n must be >= 2")
    return math.ceil(300.0 * math.log(n))


def approx_leverage(a, eps: float = 0.25, spec: SketchSpec | None = None,
                    jl_cols: int = 0, *, rng: Rng | None = None,
                    t: float = 4.0, seed: int = 0) -> LeverageScores:
    """Relative-error leverage scores via the square-root embedding.

    With jl_cols == 0 the scores are the exact squared row norms of
    A @ A_tilde^{-1}; otherwise the rows are first compressed with a
    d x jl_cols Gaussian of entry variance 1/jl_cols, evaluated right
    to left so the cost stays O(n d jl_cols).
    """
    a = as_matrix(a, "a")
    if jl_cols < 0:
        raise ParamError("jl_cols must be >= 0")
    emb = embed_l2(a, spec, eps=eps, t=t, seed=seed)
    w, q = np.linalg.eigh(emb.a_tilde)
    if w[-1] <= 0.0 or w[0] <= 1e-12 * w[-1]:
        raise RankDeficientError("embedding is numerically singular")
    inv = (q / w) @ q.T  # A_tilde^{-1} from its eigendecomposition
    if jl_cols == 0:
        m = a @ inv
    else:
        if rng is None:
            rng = Rng(emb.spec.seed).split(1)
        g = rng.gen.standard_normal((a.shape[1], jl_cols)) / math.sqrt(jl_cols)
        m = a @ (inv @ g)
    tau = np.einsum("ij,ij->i", m, m)
    return LeverageScores(tau=tau, eps=eps)

"""Well-conditioned bases, l1 coresets, Lewis weights, and l1 regression.

The route to a relative-error l1 embedding is always: score the rows
(via a well-conditioned basis or Lewis weights), sample a small coreset
with those scores, and solve the reduced problem.  The row scores come
in two flavors:

* basis scores -- lambda_i = median |U_(i) C| over a block C of Cauchy
  projections, where U = A R^{-1} is a well-conditioned basis;
* Lewis weights -- the fixed point of w_i = tau_i(W^{-1/2} A), computed
  by repeated leverage-score calls.

A smoothed IRLS solver and a subset-enumeration oracle for tiny
problems round out the module.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ParamError, RankDeficientError
from .linalg import as_matrix, qr
from .l1_embed import LOGR, BucketVariant, L1Embedding, embed_l1
from .l2_apps import approx_leverage, lewis_jl_cols
from .l2_embed import default_sketch_spec, embed_l2
from .rng import Rng
from .sketch import SketchSpec, sample_cauchy


@dataclass(frozen=True)
class BasisChange:
    """Invertible R with U = A R^{-1} well conditioned for l1 sampling.

    `alpha_bound` is an analytic ceiling on the l1 condition number
    alpha(U) = ||U||_1 / min_{||x||_inf = 1} ||U x||_1.  For the
    square-root-embedding route the exact bound involves a condition
    number that is not constructively computable, so the stored value
    substitutes the computable surrogate sqrt(3) d^3 (sigma_1/sigma_d).
    """

    r: np.ndarray
    alpha_bound: float
    kind: str

    def rinv_times(self, c: np.ndarray) -> np.ndarray:
        """R^{-1} @ c (solve, never an explicit inverse)."""
        return np.linalg.solve(self.r, c)

    def basis(self, a) -> np.ndarray:
        """Materialize U = A R^{-1}; O(n d^2), use sparingly."""
        a = as_matrix(a, "a")
        return np.linalg.solve(self.r.T, a.T).T


@dataclass(frozen=True)
class WeightVector:
    """Nonnegative per-row scores with the sampling budget they encode."""

    values: np.ndarray
    kind: str
    target_s: float | None = None


@dataclass(frozen=True)
class CoresetSample:
    """Rescaled row sample: row i appears as a_(i) / p_i."""

    rows: np.ndarray
    indices: np.ndarray
    probs: np.ndarray
    target_s: float


@dataclass
class LewisState:
    """Lewis weights after `iterations_run` fixed-point updates."""

    w: np.ndarray
    iterations_run: int
    tau_sums: list[float] = field(default_factory=list)
    floored: int = 0


def basis_from_l2(a, spec: SketchSpec | None = None, *, t: float = 4.0,
                  seed: int = 0) -> BasisChange:
    """Basis change from the square-root embedding at eps = 1/2.

    R is the d x d embedding itself; U = A R^{-1} is never materialized
    unless asked.
    """
    a = as_matrix(a, "a")
    emb = embed_l2(a, spec, eps=0.5, t=t, seed=seed)
    sv = np.linalg.svd(a, compute_uv=False)
    d = a.shape[1]
    alpha = math.sqrt(3.0) * d ** 3 * float(sv[0] / sv[-1])
    return BasisChange(r=emb.a_tilde, alpha_bound=alpha, kind="gram-sqrt")


def basis_from_l1(a, emb: L1Embedding) -> BasisChange:
    """Basis change from the QR factor of a stacked l1 embedding."""
    a = as_matrix(a, "a")
    d = a.shape[1]
    if emb.stacked.shape[1] != d:
        raise ParamError("embedding was built for a different column count")
    _, r = qr(emb.stacked)
    kappa = (63.0 / 20.0) * emb.t * d * math.log(emb.t * d)
    alpha = kappa * d * math.sqrt(d + emb.rows)
    return BasisChange(r=r, alpha_bound=alpha, kind="l1-qr")


def l1_sampling_probs(a, basis: BasisChange, s: float, delta: float,
                      rng: Rng) -> WeightVector:
    """Row sampling probabilities p_i = min(s * lambda_i / sum lambda, 1).

    lambda_i estimates ||U_(i)||_1 as the median of |U_(i) C| over a
    d x ceil(15 ln(6n/delta)) block C of independent Cauchys.  The
    product A (R^{-1} C) is evaluated right to left.
    """
    a = as_matrix(a, "a")
    if s <= 0.0:
        raise ParamError("s must be positive")
    if not (0.0 < delta < 1.0):
        raise ParamError("delta must lie in (0, 1)")
    n, d = a.shape
    cols = int(math.ceil(15.0 * math.log(6.0 * n / delta)))
    c = sample_cauchy(rng, d * cols).reshape(d, cols)
    m = a @ basis.rinv_times(c)
    lam = np.median(np.abs(m), axis=1)
    total = float(lam.sum())
    if total <= 0.0:
        raise ParamError("all sampling scores vanished; is a the zero matrix?")
    p = np.minimum(s * lam / total, 1.0)
    return WeightVector(values=p, kind="probability", target_s=float(s))


def l1_coreset(a, probs: WeightVector, rng: Rng) -> CoresetSample:
    """Bernoulli row sample rescaled by 1/p_i.

    Expected size is sum(p_i) <= s; the hard cap m <= 2s is enforced by
    resampling from a fresh substream (a probability-e^{-s/3} event), so
    the returned sample keeps the product distribution conditioned on
    the size event.
    """
    a = as_matrix(a, "a")
    p = np.asarray(probs.values, dtype=np.float64)
    if p.shape != (a.shape[0],):
        raise ParamError("probability vector length must match row count")
    if p.min() <= 0.0 or p.max() > 1.0:
        raise ParamError("probabilities must lie in (0, 1]")
    s = probs.target_s if probs.target_s is not None else float(p.sum())
    for attempt in range(64):
        stream = rng if attempt == 0 else rng.split(attempt)
        keep = stream.gen.random(a.shape[0]) < p
        m = int(keep.sum())
        if m <= 2.0 * s and m > 0:
            break
    idx = np.flatnonzero(keep)
    rows = a[idx] / p[idx][:, None]
    return CoresetSample(rows=rows, indices=idx, probs=p[idx], target_s=float(s))


def _leverage_exact(x: np.ndarray) -> np.ndarray:
    """Row leverage via the Gram pseudo-inverse; rank tolerant.

    tau_i = x_i^T (X^T X)^+ x_i, computed from one shared
    eigendecomposition so identical rows get bitwise-identical scores.
    """
    g = x.T @ x
    w, q = np.linalg.eigh(g)
    top = float(w[-1]) if w.size else 0.0
    if top <= 0.0:
        return np.zeros(x.shape[0])
    inv = np.where(w > top * 1e-14, 1.0 / np.maximum(w, top * 1e-14), 0.0)
    m = (q * inv) @ q.T
    tau = np.einsum("ij,jk,ik->i", x, m, x)
    return np.clip(tau, 0.0, None)


def lewis_weights(a, t_iters: int | None = None, mode: str = "exact",
                  rng: Rng | None = None, *, spec: SketchSpec | None = None,
                  jl_cols: int | None = None, eps: float = 0.25) -> LewisState:
    """Fixed-point iteration w_i <- sqrt(w_i * tau_i(W^{-1/2} A)).

    `mode="exact"` computes leverage scores exactly each round;
    `mode="sketched"` estimates them through the square-root embedding
    at eps = 1/4 with Gaussian row compression (default width 300 ln n).
    The default iteration count is ceil(2 log2 log2 n).  Rows whose
    weight collapses to zero are floored at 1e-300 and counted in the
    returned state.
    """
    a = as_matrix(a, "a")
    n = a.shape[0]
    if t_iters is None:
        t_iters = max(1, math.ceil(2.0 * math.log2(max(math.log2(max(n, 2)), 1.001))))
    if t_iters < 1:
        raise ParamError("t_iters must be >= 1")
    if mode not in ("exact", "sketched"):
        raise ParamError(f"unknown mode {mode!r}")
    if rng is None:
        rng = Rng(0)
    w = np.ones(n)
    state = LewisState(w=w, iterations_run=0)
    for it in range(t_iters):
        x = a / np.sqrt(w)[:, None]
        if mode == "exact":
            tau = _leverage_exact(x)
        else:
            it_spec = spec if spec is not None else default_sketch_spec(
                n, a.shape[1], eps=eps, seed=rng.seed)
            it_spec = replace(it_spec, seed=(it_spec.seed + 0x9E3779B9 * (it + 1)) % 2**63)
            cols = jl_cols if jl_cols is not None else lewis_jl_cols(n)
            tau = approx_leverage(x, eps=eps, spec=it_spec, jl_cols=cols,
                                  rng=rng.split(it)).tau
        state.tau_sums.append(float(tau.sum()))
        w = np.sqrt(w * tau)
        low = w < 1e-300
        if low.any():
            state.floored += int(low.sum())
            w = np.maximum(w, 1e-300)
    state.w = w
    state.iterations_run = t_iters
    return state


def lewis_coreset(a, state: LewisState, eps: float, c: float = 1.0,
                  rng: Rng | None = None, *,
                  num_rows: int | None = None) -> CoresetSample:
    """Sample rows i.i.d. with replacement by Lewis weight.

    Row i is drawn with probability p_i = w_i / sum w and rescaled by
    1/(r p_i), which makes ||coreset x||_1 unbiased for ||A x||_1.  The
    default row count r = ceil(72 c eps^-2 d ln(72 c eps^-2 d)) follows
    the sampling guarantee (c is the absolute constant of that
    guarantee, caller tunable); `num_rows` overrides it, e.g. for
    benchmark grids.
    """
    a = as_matrix(a, "a")
    if not (0.0 < eps < 1.0):
        raise ParamError("eps must lie in (0, 1)")
    if c <= 0.0:
        raise ParamError("c must be positive")
    if rng is None:
        rng = Rng(0)
    n, d = a.shape
    if num_rows is None:
        base = 72.0 * c * d / (eps * eps)
        num_rows = int(math.ceil(base * math.log(base)))
    if num_rows < 1:
        raise ParamError("num_rows must be >= 1")
    p = state.w / state.w.sum()
    idx = rng.gen.choice(n, size=num_rows, replace=True, p=p)
    rows = a[idx] / (num_rows * p[idx])[:, None]
    return CoresetSample(rows=rows, indices=idx, probs=p[idx],
                         target_s=float(num_rows))


def _l1_vertex_optimal(a: np.ndarray, b: np.ndarray, x: np.ndarray,
                       active: np.ndarray) -> bool:
    """Subgradient certificate that a vertex solution is optimal.

    x interpolates the rows in `active`; it minimizes ||a x - b||_1 iff
    sum_{i not active} sign(r_i) a_i can be cancelled by a combination
    of the active rows with coefficients in [-1, 1].
    """
    r = a @ x - b
    outside = np.ones(len(b), dtype=bool)
    outside[active] = False
    rhs = -(np.sign(r[outside]) @ a[outside])
    try:
        g = np.linalg.solve(a[active].T, rhs)
    except np.linalg.LinAlgError:
        return False
    return bool(np.all(np.abs(g) <= 1.0 + 1e-8))


def _irls_phase(a: np.ndarray, b: np.ndarray, x: np.ndarray, mu: float,
                floor: float, iters: int) -> tuple[np.ndarray, bool]:
    """IRLS on sum sqrt((a x - b)^2 + mu) with mu halved each round."""
    prev = float(np.abs(a @ x - b).sum())
    for _ in range(iters):
        res = a @ x - b
        wgt = (res * res + mu) ** -0.25  # sqrt of the IRLS weight
        x = np.linalg.lstsq(a * wgt[:, None], b * wgt, rcond=None)[0]
        obj = float(np.abs(a @ x - b).sum())
        if mu <= floor and abs(prev - obj) <= 1e-11 * (1.0 + obj):
            return x, True
        prev = obj
        mu = max(0.5 * mu, floor)
    return x, False


def solve_l1_small(a, b, *, max_outer: int = 200, mu0: float = 1e-2,
                   mu_floor: float = 1e-12) -> np.ndarray:
    """Minimize ||a x - b||_1 by smoothed IRLS plus a vertex polish.

    Each absolute value is smoothed as sqrt(z^2 + mu) with mu halved
    from 1e-2 down to 1e-12 across the outer iterations; every round
    solves one weighted least-squares problem.  The iterate is then
    snapped to the vertex interpolating the d smallest residuals (an
    optimum of the unsmoothed problem interpolates d rows) and checked
    with a subgradient optimality certificate; an uncertified vertex
    triggers one warm-restarted refinement phase.  Warns when neither
    stationarity nor the certificate is reached.
    """
    a = as_matrix(a, "a")
    b = np.ascontiguousarray(b, dtype=np.float64).ravel()
    n, d = a.shape
    if b.shape[0] != n:
        raise ParamError(f"b has {b.shape[0]} entries, expected {n}")
    if n < d:
        raise ParamError("need at least as many rows as unknowns")
    x, _, rank, _ = np.linalg.lstsq(a, b, rcond=None)
    if rank < d:
        raise RankDeficientError("design matrix is rank deficient")

    def consider(x):
        """Best of the iterate and nearby vertices, plus a certificate.

        Candidate vertices interpolate any d of the d + 2 rows with the
        smallest residuals at x.
        """
        obj_x = float(np.abs(a @ x - b).sum())
        pool = np.argsort(np.abs(a @ x - b))[:min(d + 2, n)]
        vert, vert_obj, vert_sub = None, math.inf, None
        for sub in itertools.combinations(pool, d):
            sub = np.array(sub)
            try:
                cand = np.linalg.solve(a[sub], b[sub])
            except np.linalg.LinAlgError:
                continue
            if not np.all(np.isfinite(cand)):
                continue
            obj = float(np.abs(a @ cand - b).sum())
            if obj < vert_obj:
                vert, vert_obj, vert_sub = cand, obj, sub
        best, best_obj = x, obj_x
        if vert is not None and vert_obj < best_obj:
            best, best_obj = vert, vert_obj
        certified = (vert is not None
                     and vert_obj - best_obj <= 1e-9 * (1.0 + best_obj)
                     and _l1_vertex_optimal(a, b, vert, vert_sub))
        return best, best_obj, certified

    x, stationary = _irls_phase(a, b, x, mu0, mu_floor, max_outer)
    best, _, certified = consider(x)
    if not certified:
        x2, st2 = _irls_phase(a, b, best, 1e-8, 1e-14, max_outer // 2)
        stationary = stationary or st2
        best2, obj2, certified = consider(x2)
        if obj2 <= float(np.abs(a @ best - b).sum()):
            best = best2
    if not (stationary or certified):
        warnings.warn("l1 IRLS did not certify optimality; returning best "
                      "iterate", RuntimeWarning, stacklevel=2)
    return best


def l1_bruteforce_oracle(a, b) -> np.ndarray:
    """Exact l1 regression by enumerating all d-row interpolations.

    Only for tiny instances (n <= 40, d <= 3): some optimum of
    min ||a x - b||_1 interpolates d of the rows, so trying every
    d-subset is exact.
    """
    a = as_matrix(a, "a")
    b = np.ascontiguousarray(b, dtype=np.float64).ravel()
    n, d = a.shape
    if n > 40 or d > 3:
        raise ParamError("oracle budget is n <= 40, d <= 3")
    if b.shape[0] != n or n < d:
        raise ParamError("bad shapes for the oracle")
    best_x = None
    best_obj = math.inf
    for idx in itertools.combinations(range(n), d):
        sub = a[list(idx)]
        try:
            x = np.linalg.solve(sub, b[list(idx)])
        except np.linalg.LinAlgError:
            continue
        if not np.all(np.isfinite(x)):
            continue
        obj = float(np.abs(a @ x - b).sum())
        if obj < best_obj:
            best_obj = obj
            best_x = x
    if best_x is None:
        raise RankDeficientError("every d-row subsystem was singular")
    return best_x


def _solve_l1_minnorm(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Rank-tolerant smoothed IRLS (minimum-norm inner solves, no polish).

    Fallback for coresets whose design lost full column rank, e.g. a
    uniform sample that missed every informative row; the returned
    pseudo-solution lets pipelines report an honest (large) cost instead
    of aborting.
    """
    x = np.linalg.lstsq(a, b, rcond=None)[0]
    mu = 1e-2
    for _ in range(120):
        res = a @ x - b
        wgt = (res * res + mu) ** -0.25
        x = np.linalg.lstsq(a * wgt[:, None], b * wgt, rcond=None)[0]
        mu = max(0.5 * mu, 1e-12)
    return x


PIPELINES = ("wcb-l2", "wcb-l1", "lewis", "uniform")


def regress_l1(a, b, pipeline: str = "lewis", eps: float = 0.5,
               rng: Rng | None = None, *, size: int | None = None,
               delta: float = 0.1, c: float = 1.0, t: float = 10.0,
               variant: BucketVariant = LOGR,
               spec: SketchSpec | None = None,
               compute_full_cost: bool = True):
    """Coreset-based l1 regression of b on a.

    Stacks X = [A, -b], reduces it to a coreset with the chosen
    pipeline, splits the coreset back into (A_tilde, b_tilde) and
    solves with the IRLS solver:

    * ``wcb-l2``  -- basis from the square-root embedding, then
      score-and-sample;
    * ``wcb-l1``  -- basis from the stacked l1 embedding, then
      score-and-sample;
    * ``lewis``   -- Lewis weights, then i.i.d. row sampling;
    * ``uniform`` -- uniform rows without replacement (control).

    `size` fixes the target coreset rows; left unset, the sampling
    guarantees' own (large) formulas are used.
    """
    from .l2_apps import RegressionResult  # local to avoid cycle at import

    a = as_matrix(a, "a")
    b = np.ascontiguousarray(b, dtype=np.float64).ravel()
    n, d = a.shape
    if b.shape[0] != n:
        raise ParamError(f"b has {b.shape[0]} entries, expected {n}")
    if pipeline not in PIPELINES:
        raise ParamError(f"pipeline must be one of {PIPELINES}")
    if rng is None:
        rng = Rng(0)
    x_mat = np.hstack([a, -b[:, None]])
    cols = d + 1
    if pipeline == "uniform":
        m = size if size is not None else min(n, 30 * cols)
        m = min(max(m, 1), n)
        idx = rng.gen.permutation(n)[:m]
        core_rows = x_mat[idx] * (n / m)
    elif pipeline == "lewis":
        state = lewis_weights(x_mat, mode="exact", rng=rng.split(0))
        core = lewis_coreset(x_mat, state, eps=eps, c=c, rng=rng.split(1),
                             num_rows=size)
        core_rows = core.rows
    else:
        if pipeline == "wcb-l2":
            basis = basis_from_l2(x_mat, spec, seed=rng.seed)
        else:
            emb = embed_l1(x_mat, t=t, variant=variant, spec=spec,
                           rng=rng.split(0), strict=False)
            basis = basis_from_l1(x_mat, emb)
        if size is not None:
            s = float(size)
        else:
            s = 28.0 * cols * basis.alpha_bound / (eps * eps) \
                * (math.log(18.0 / eps) + math.log(3.0 / delta) / cols)
        probs = l1_sampling_probs(x_mat, basis, s, delta, rng.split(1))
        core_rows = l1_coreset(x_mat, probs, rng.split(2)).rows
    a_t = core_rows[:, :d]
    b_t = -core_rows[:, d]
    try:
        x = solve_l1_small(a_t, b_t)
    except RankDeficientError:
        x = _solve_l1_minnorm(a_t, b_t)
    sk_cost = float(np.abs(a_t @ x - b_t).sum())
    full_cost = float(np.abs(a @ x - b).sum()) if compute_full_cost else None
    return RegressionResult(x=x, sketched_cost=sk_cost, full_cost=full_cost)

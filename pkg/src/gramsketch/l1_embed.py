"""Oblivious l1 subspace embedding.

The embedding stacks two blocks.  The top is the d x d square-root
embedding scaled by sqrt(d) * ln(t d); the bottom is a Cauchy spreading
operator: rows are hashed into r buckets, each row is scaled by one
independent standard Cauchy variable (shared across its columns), and
bucket members are summed.  With r = ceil(80 d ln(t d)) buckets the
stacked map distorts every ||A x||_1 by at most a factor
[1/64, (63/20) t d ln(t d)] with probability 1 - 2/t; the alternative
bucket count ceil(100 d ln^{1+1/q}(t d)) improves the lower constant to
ln ln(t d) / (64 q).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParamError
from .linalg import as_matrix
from .l2_embed import default_sketch_spec, embed_l2
from .rng import Rng
from .sketch import SketchSpec, sample_cauchy


@dataclass(frozen=True)
class BucketVariant:
    """How the spreading-bucket count r grows with d and t."""

    kind: str  # "logr" or "logpow"
    q: int = 0

    def rows(self, d: int, t: float) -> int:
        if self.kind == "logr":
            return int(math.ceil(80.0 * d * math.log(t * d)))
        if self.kind == "logpow":
            if self.q < 3:
                raise ParamError("logpow variant needs q >= 3")
            if t * d < self.q ** 1.17:
                raise ParamError("logpow variant needs t*d >= q^1.17")
            return int(math.ceil(100.0 * d * math.log(t * d) ** (1.0 + 1.0 / self.q)))
        raise ParamError(f"unknown bucket variant {self.kind!r}")


LOGR = BucketVariant("logr")


def log_power(q: int) -> BucketVariant:
    return BucketVariant("logpow", q)


def parse_variant(text: str) -> BucketVariant:
    """Parse a CLI variant string: "logr" or "logpow:q"."""
    if text == "logr":
        return LOGR
    if text.startswith("logpow:"):
        try:
            return log_power(int(text.split(":", 1)[1]))
        except ValueError as exc:
            raise ParamError(f"bad variant {text!r}") from exc
    raise ParamError(f"bad variant {text!r}")


@dataclass(frozen=True)
class L1Embedding:
    """(d + rows) x d stacked embedding with its construction metadata."""

    stacked: np.ndarray
    scale_top: float
    rows: int
    t: float
    variant: BucketVariant
    seed: tuple[int, ...]


def spread_apply(a, r: int, rng: Rng, *, unit_cauchy: bool = False) -> np.ndarray:
    """Cauchy spreading operator: bucket, scale, and sum rows.

    Each input row i is hashed uniformly into one of r buckets and the
    output row j is sum_{i in bucket j} C_i * a_(i), with one Cauchy
    variable per input row (so output columns are dependent).  A single
    O(nnz) pass.  `unit_cauchy=True` replaces every C_i by 1 -- a test
    hook for exact mass-preservation identities, never used by
    production paths.
    """
    a = as_matrix(a, "a")
    if r < 1:
        raise ParamError("bucket count r must be >= 1")
    n = a.shape[0]
    buckets = rng.gen.integers(0, r, size=n)
    scale = np.ones(n) if unit_cauchy else sample_cauchy(rng, n)
    out = np.zeros((r, a.shape[1]))
    np.add.at(out, buckets, scale[:, None] * a)  # accumulates in row order
    return out


def embed_l1(a, t: float = 10.0, variant: BucketVariant = LOGR,
             spec: SketchSpec | None = None, rng: Rng | None = None, *,
             strict: bool = True) -> L1Embedding:
    """Concatenate the scaled square-root embedding with the spreader.

    The top block must come from a 1/2-JLT sketch; when `spec` is
    omitted a default SRHT sized for eps = 1/2 is used.  The guarantee
    holds for d, t >= 10; pass ``strict=False`` to run below those
    hypotheses (e.g. in benchmarks), in which case the distortion bounds
    are no longer covered.
    """
    a = as_matrix(a, "a")
    n, d = a.shape
    if strict and (d < 10 or t < 10.0):
        raise ParamError("the distortion guarantee needs d >= 10 and t >= 10")
    if t <= 0.0 or t * d <= 1.0:
        raise ParamError("need t > 0 and t*d > 1")
    rows = variant.rows(d, t)
    if rng is None:
        rng = Rng(0)
    if spec is None:
        spec = default_sketch_spec(n, d, eps=0.5, t=max(t, 4.0), seed=rng.seed)
    scale_top = math.sqrt(d) * math.log(t * d)
    top = scale_top * embed_l2(a, spec, eps=0.5).a_tilde
    bottom = spread_apply(a, rows, rng)
    return L1Embedding(
        stacked=np.vstack([top, bottom]),
        scale_top=scale_top,
        rows=rows,
        t=t,
        variant=variant,
        seed=(rng.seed, *rng.path),
    )


def measure_l1_distortion(a, emb: L1Embedding, num_dirs: int = 100,
                          rng: Rng | None = None) -> tuple[float, float]:
    """Empirical (min, max) of ||stacked x||_1 / ||A x||_1.

    Probes `num_dirs` Gaussian directions plus the 2d signed canonical
    directions.  This brackets, not certifies, the true distortion: the
    exact l1 ratio extremes are a nonconvex program.
    """
    a = as_matrix(a, "a")
    if num_dirs < 1:
        raise ParamError("num_dirs must be >= 1")
    if rng is None:
        rng = Rng(0)
    d = a.shape[1]
    eye = np.eye(d)
    dirs = np.hstack([eye, -eye, rng.gen.standard_normal((d, num_dirs))])
    num = np.abs(emb.stacked @ dirs).sum(axis=0)
    den = np.abs(a @ dirs).sum(axis=0)
    ratios = num / den
    return float(ratios.min()), float(ratios.max())

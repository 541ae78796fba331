"""Oblivious l2 sketch operators and the fast Walsh-Hadamard kernel.

A sketch is described by a `SketchSpec` (kind, target rows, seed) and
applied with `apply_sketch`, which returns the r x d matrix Pi^T A.  All
kinds are normalized so that E[Pi Pi^T] = I:

* ``gaussian``     -- dense i.i.d. N(0, 1/r) entries.
* ``srht``         -- zero-pad to N = 2^k rows, random signs, orthonormal
                      Walsh-Hadamard mix (entries +-1/sqrt(N)), uniform
                      subsample of r rows without replacement, rescale by
                      sqrt(N/r).
* ``srht-iter``    -- like ``srht`` but with `passes` sign+Hadamard rounds
                      before subsampling (each round is orthonormal).
* ``countsketch``  -- each input row hashed to one output row with a
                      random sign.
* ``identity``     -- Pi = I, the exact (no-op) sketch; handy for tests
                      and exact baselines.

A given (kind, rows, passes, seed) acting on a fixed input is bitwise
reproducible: all randomness is drawn from ``Rng(seed)`` in a fixed
order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, ParamError
from .linalg import as_matrix
from .rng import Rng

SKETCH_KINDS = ("gaussian", "srht", "srht-iter", "countsketch", "identity")


@dataclass(frozen=True)
class SketchSpec:
    """Description of an oblivious sketch Pi in R^{n x rows}."""

    kind: str
    rows: int
    passes: int = 2
    seed: int = 0

    def __post_init__(self):
        if self.kind not in SKETCH_KINDS:
            raise ParamError(f"unknown sketch kind {self.kind!r}")
        if self.rows < 1:
            raise ParamError("sketch rows must be >= 1")
        if self.passes < 1:
            raise ParamError("passes must be >= 1")


def _pad_rows(n: int) -> int:
    """Smallest power of two >= n."""
    return 1 if n <= 1 else 1 << (n - 1).bit_length()


def fwht(v: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform along axis 0, in place.

    The input length (number of rows for 2-D input) must be a power of
    two and the array C-contiguous.  The caller applies any 1/sqrt(N)
    normalization.  Returns the same array.
    """
    v = np.asarray(v)
    n = v.shape[0]
    if n == 0 or (n & (n - 1)) != 0:
        raise DimensionError(f"fwht length {n} is not a power of two")
    if not v.flags.c_contiguous:
        raise DimensionError("fwht requires a C-contiguous array")
    tail = v.shape[1:]
    h = 1
    while h < n:
        w = v.reshape(n // (2 * h), 2, h, *tail)
        diff = w[:, 0] - w[:, 1]
        w[:, 0] += w[:, 1]
        w[:, 1] = diff
        h *= 2
    return v


def srht_dim(d: int, n: int, eps: float, t: float = 2.0) -> int:
    """Rows needed for the subsampled Hadamard sketch to be an eps-JLT.

    Evaluates ceil((12 / (5 eps^2)) * (sqrt(d) + sqrt(8 ln(3 t n)))^2 ln d)
    and clamps the result to the padded length N = 2^ceil(log2 n).  The
    returned r gives an eps-JLT for any n x d orthonormal basis with
    probability at least 1 - 1/t.
    """
    if not (0.0 < eps <= 0.5):
        raise ParamError("eps must lie in (0, 1/2]")
    if d < 2 or n < d:
        raise ParamError("srht_dim needs d >= 2 and n >= d")
    if t < 2.0:
        raise ParamError("t must be >= 2")
    raw = (12.0 / (5.0 * eps * eps)) \
        * (math.sqrt(d) + math.sqrt(8.0 * math.log(3.0 * t * n))) ** 2 \
        * math.log(d)
    return max(1, min(int(math.ceil(raw)), _pad_rows(n)))


def _apply_hadamard(spec: SketchSpec, a: np.ndarray, passes: int) -> np.ndarray:
    n, d = a.shape
    big_n = _pad_rows(n)
    rows = min(spec.rows, big_n)
    rng = Rng(spec.seed)
    x = np.zeros((big_n, d))
    x[:n] = a
    for _ in range(passes):
        x *= rng.signs(big_n)[:, None]
        fwht(x)
        x *= 1.0 / math.sqrt(big_n)
    keep = rng.gen.permutation(big_n)[:rows]  # Fisher-Yates prefix
    return x[keep] * math.sqrt(big_n / rows)


def apply_sketch(spec: SketchSpec, a) -> np.ndarray:
    """Apply the sketch described by `spec` to `a`, returning Pi^T a."""
    a = as_matrix(a, "a")
    n, d = a.shape
    if spec.kind == "identity":
        return a.copy()
    if spec.kind == "gaussian":
        g = Rng(spec.seed).gen.standard_normal((spec.rows, n))
        return (g @ a) / math.sqrt(spec.rows)
    if spec.kind == "srht":
        return _apply_hadamard(spec, a, passes=1)
    if spec.kind == "srht-iter":
        return _apply_hadamard(spec, a, passes=spec.passes)
    if spec.kind == "countsketch":
        rng = Rng(spec.seed)
        buckets = rng.gen.integers(0, spec.rows, size=n)
        signs = rng.signs(n)
        out = np.zeros((spec.rows, d))
        np.add.at(out, buckets, signs[:, None] * a)
        return out
    raise ParamError(f"unknown sketch kind {spec.kind!r}")


def jlt_error(sketched_u, u) -> float:
    """Spectral deviation ||I - (Pi^T U)^T (Pi^T U)||_2 of a sketched basis.

    `u` must have orthonormal columns (checked to 1e-8); `sketched_u` is
    Pi^T u for the sketch under test.
    """
    u = as_matrix(u, "u")
    su = as_matrix(sketched_u, "sketched_u")
    d = u.shape[1]
    if su.shape[1] != d:
        raise DimensionError("sketched_u and u must have the same column count")
    gram = u.T @ u
    if float(np.abs(gram - np.eye(d)).max()) > 1e-8:
        raise ParamError("u does not have orthonormal columns")
    dev = np.eye(d) - su.T @ su
    return float(np.linalg.norm(dev, 2))


def sample_cauchy(rng: Rng, count: int) -> np.ndarray:
    """`count` i.i.d. standard Cauchy draws via tan(pi * (U - 1/2))."""
    if count < 1:
        raise ParamError("count must be >= 1")
    u = rng.gen.random(count)
    while True:  # u = 0 would hit the tan pole; probability ~2^-53 per draw
        zero = u == 0.0
        if not zero.any():
            break
        u[zero] = rng.gen.random(int(zero.sum()))
    return np.tan(np.pi * (u - 0.5))

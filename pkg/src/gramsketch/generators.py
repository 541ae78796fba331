"""Benchmark problem generators."""

from __future__ import annotations

import numpy as np

from .errors import ParamError
from .rng import Rng


def gen_bad_matrix(d: int, noise: float, rng: Rng) -> np.ndarray:
    """Adversarial d^2 x d input for subsampled Hadamard sketches.

    Block i of the output is the outer product e_i e_i^T, so the matrix
    concentrates all its mass on d isolated rows and a row subsample
    must hit every one of them.  Gaussian noise of standard deviation
    `noise` is added entrywise.
    """
    if d < 2:
        raise ParamError("d must be >= 2")
    a = np.zeros((d * d, d))
    for i in range(d):
        a[i * d + i, i] = 1.0
    if noise != 0.0:
        a += noise * rng.gen.standard_normal(a.shape)
    return a


def gen_l1_experiment(d: int, n: int, alpha: float, eps: float,
                      rng: Rng) -> tuple[np.ndarray, np.ndarray]:
    """Regression instance that punishes uniform row sampling.

    The first d blocks of d rows each carry one informative spike
    e_i e_i^T (with response alpha e_i) buried in centered Gaussian
    rows; the remaining n - d^2 rows are pure centered Gaussian noise
    with response scale eps.  Uniform sampling rarely hits the spikes;
    score-based sampling almost always does.
    """
    if n < d * d + 1:
        raise ParamError("need n >= d^2 + 1")
    center = np.eye(d) - np.ones((d, d)) / d
    a_blocks = []
    b_blocks = []
    for i in range(d):
        spike = np.zeros((d, d))
        spike[i, i] = 1.0
        mask = np.eye(d).copy()
        mask[i, i] = 0.0  # I - e_i e_i^T
        g_i = rng.gen.standard_normal((d, d))
        a_blocks.append(spike + mask @ g_i @ center)
        gvec = rng.gen.standard_normal(d)
        resp = np.zeros(d)
        resp[i] = alpha
        b_blocks.append(resp + eps * (mask @ gvec))
    tail = n - d * d
    a_blocks.append(rng.gen.standard_normal((tail, d)) @ center)
    b_blocks.append(eps * rng.gen.standard_normal(tail))
    return np.vstack(a_blocks), np.concatenate(b_blocks)

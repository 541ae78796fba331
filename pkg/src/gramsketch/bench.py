"""Desk-scale benchmark loops behind the CLI.

Both benchmarks aggregate the per-seed measurements with the median and
emit plain CSV so any external tool can plot them.  Timing columns can
be suppressed for byte-identical golden files.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import ParamError
from .generators import gen_bad_matrix, gen_l1_experiment
from .l1_apps import regress_l1, solve_l1_small
from .l1_embed import LOGR, BucketVariant
from .l2_embed import gram_sqrt, measure_l2_distortion
from .rng import Rng
from .sketch import SketchSpec, apply_sketch

DISTORTION_HEADER = ("method", "r_over_d", "time_s", "distortion", "speedup")
REGRESS_HEADER = ("method", "r_over_d", "rel_error", "time_frac")

DISTORTION_METHODS = ("gaussian", "srht", "srht-iter", "gram-sqrt",
                      "gauss-gram-sqrt")
# the two basis arms build the same stacked l1 embedding but feed it a
# sparse (countsketch) vs dense (srht) inner l2 sketch
REGRESS_METHODS = ("uniform", "basis-sparse", "basis-gram", "lewis")


@dataclass
class BenchConfig:
    """Parameters shared by the benchmark commands."""

    d: int = 16
    n: int | None = None
    noise: float = 0.01
    alpha: float = 20.0
    eps: float | None = None       # response noise of the l1 instance
    t: float = 10.0
    seeds: int = 5
    r_grid: tuple[int, ...] = (2, 4, 8, 16)
    r1: int | None = None          # inner sketch rows for gram-sqrt arms
    variant: BucketVariant = LOGR
    seed: int = 0
    no_timing: bool = False

    def __post_init__(self):
        if self.seeds < 1:
            raise ParamError("seeds must be >= 1")
        if not self.r_grid or min(self.r_grid) < 1:
            raise ParamError("r-grid entries must be >= 1")


def _cell_seed(master: Rng, *ids: int) -> int:
    return int(master.split(*ids).gen.integers(0, 2**63))


def _distortion_cell(method: str, a: np.ndarray, r: int, r1: int,
                     seed: int) -> tuple[float, float]:
    """Return (distortion, seconds) for one method on one instance."""
    d = a.shape[1]
    start = time.perf_counter()
    if method == "gaussian":
        emb = apply_sketch(SketchSpec("gaussian", r, seed=seed), a)
    elif method == "srht":
        emb = apply_sketch(SketchSpec("srht", r, seed=seed), a)
    elif method == "srht-iter":
        emb = apply_sketch(SketchSpec("srht-iter", r, passes=2, seed=seed), a)
    elif method == "gram-sqrt":
        emb = gram_sqrt(a, SketchSpec("srht", r1, seed=seed))
    elif method == "gauss-gram-sqrt":
        core = gram_sqrt(a, SketchSpec("srht", r1, seed=seed))
        g = Rng(seed).split(1).gen.standard_normal((r, d))
        emb = (g @ core) / math.sqrt(r)
    else:
        raise ParamError(f"unknown method {method!r}")
    elapsed = time.perf_counter() - start
    return measure_l2_distortion(a, emb), elapsed


def bench_distortion(cfg: BenchConfig) -> list[dict]:
    """Distortion/time grid over sketch methods on the adversarial matrix.

    The two gram-sqrt arms always embed into d dimensions; their inner
    sketch size is `cfg.r1` (default 10 d) independent of the grid,
    which is the point: output dimension and accuracy are decoupled.
    """
    master = Rng(cfg.seed)
    d = cfg.d
    r1 = cfg.r1 if cfg.r1 is not None else 10 * d
    cells: dict[tuple[str, int], list[tuple[float, float]]] = {}
    for si in range(cfg.seeds):
        a = gen_bad_matrix(d, cfg.noise, master.split(si, 0))
        for mi, method in enumerate(DISTORTION_METHODS):
            for gi, mult in enumerate(cfg.r_grid):
                seed = _cell_seed(master, si, mi + 1, gi)
                cell = _distortion_cell(method, a, mult * d, r1, seed)
                cells.setdefault((method, mult), []).append(cell)
    gauss_time = {mult: float(np.median([t for _, t in cells[("gaussian", mult)]]))
                  for mult in cfg.r_grid}
    rows = []
    for method in DISTORTION_METHODS:
        for mult in sorted(set(cfg.r_grid)):
            vals = cells[(method, mult)]
            med_dist = float(np.median([v for v, _ in vals]))
            med_time = float(np.median([t for _, t in vals]))
            speedup = gauss_time[mult] / med_time if med_time > 0 else math.inf
            rows.append({"method": method, "r_over_d": mult,
                         "time_s": med_time, "distortion": med_dist,
                         "speedup": speedup})
    return rows


def bench_regress_l1(cfg: BenchConfig) -> list[dict]:
    """Relative l1 error and runtime fraction of the coreset pipelines."""
    master = Rng(cfg.seed)
    d = cfg.d
    n = cfg.n if cfg.n is not None else 1000
    eps_data = cfg.eps if cfg.eps is not None else 1.0 / math.sqrt(n)
    cells: dict[tuple[str, int], list[tuple[float, float]]] = {}
    for si in range(cfg.seeds):
        a, b = gen_l1_experiment(d, n, cfg.alpha, eps_data, master.split(si, 0))
        start = time.perf_counter()
        x_opt = solve_l1_small(a, b)
        full_time = time.perf_counter() - start
        opt = float(np.abs(a @ x_opt - b).sum())
        for mi, method in enumerate(REGRESS_METHODS):
            for gi, mult in enumerate(cfg.r_grid):
                cell_rng = master.split(si, mi + 1, gi)
                pipeline, spec = {
                    "uniform": ("uniform", None),
                    "lewis": ("lewis", None),
                    "basis-gram": ("wcb-l1", None),
                    "basis-sparse": ("wcb-l1", SketchSpec(
                        "countsketch", 8 * (d + 1) ** 2,
                        seed=_cell_seed(master, si, mi + 1, gi))),
                }[method]
                start = time.perf_counter()
                res = regress_l1(a, b, pipeline, rng=cell_rng, spec=spec,
                                 size=mult * d, t=cfg.t, variant=cfg.variant)
                elapsed = time.perf_counter() - start
                rel = res.full_cost / opt if opt > 0 else math.inf
                cells.setdefault((method, mult), []).append((rel, elapsed / full_time))
    rows = []
    for method in REGRESS_METHODS:
        for mult in sorted(set(cfg.r_grid)):
            vals = cells[(method, mult)]
            rows.append({"method": method, "r_over_d": mult,
                         "rel_error": float(np.median([v for v, _ in vals])),
                         "time_frac": float(np.median([t for _, t in vals]))})
    return rows


def render_csv(rows: list[dict], header: tuple[str, ...],
               no_timing: bool = False) -> str:
    """Render benchmark rows as CSV; optionally drop timing columns."""
    timing = {"time_s", "speedup", "time_frac"}
    cols = [c for c in header if not (no_timing and c in timing)]
    lines = [",".join(cols)]
    for row in rows:
        cells = []
        for c in cols:
            v = row[c]
            cells.append(f"{v:.17g}" if isinstance(v, float) else str(v))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"

"""Command-line interface.

Exit codes: 0 success, 2 parameter error, 3 numeric/rank error,
4 IO/format error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .bench import (
    DISTORTION_HEADER,
    REGRESS_HEADER,
    BenchConfig,
    bench_distortion,
    bench_regress_l1,
    render_csv,
)
from .errors import (
    DimensionError,
    FormatError,
    GramSketchError,
    NumericError,
    ParamError,
)
from .generators import gen_bad_matrix, gen_l1_experiment
from .l1_apps import lewis_weights, regress_l1
from .l1_embed import embed_l1, parse_variant
from .l2_apps import approx_leverage, approx_pca, sketch_regress_l2
from .l2_embed import embed_l2, measure_l2_distortion
from .matio import read_matrix, write_matrix
from .rng import Rng
from .sketch import SketchSpec


def _grid(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError as exc:
        raise ParamError(f"bad r-grid {text!r}") from exc


def _spec_from_args(args, n: int, d: int) -> SketchSpec | None:
    if args.rows is None:
        return None
    return SketchSpec(args.kind, args.rows, passes=args.passes, seed=args.seed)


def _add_io(p, rhs=False, output=True):
    p.add_argument("--input", required=True, help="input matrix (.csv or .mtb)")
    if rhs:
        p.add_argument("--rhs", required=True, help="right-hand side matrix/vector")
    if output:
        p.add_argument("--output", required=True, help="output path (.csv or .mtb)")


def _add_sketch(p):
    p.add_argument("--kind", default="srht", help="sketch kind")
    p.add_argument("--rows", type=int, default=None, help="sketch rows (default: auto)")
    p.add_argument("--passes", type=int, default=2)
    p.add_argument("--eps", type=float, default=0.5)
    p.add_argument("--t", type=float, default=10.0)
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="gramsketch",
                                  description="randomized sketching toolkit")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate benchmark matrices")
    p.add_argument("--make", choices=("bad", "l1exp"), required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--noise", type=float, default=0.01)
    p.add_argument("--alpha", type=float, default=20.0)
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", required=True)
    p.add_argument("--output-rhs", default=None)

    p = sub.add_parser("embed-l2", help="square-root l2 embedding")
    _add_io(p)
    _add_sketch(p)

    p = sub.add_parser("embed-l1", help="stacked l1 embedding")
    _add_io(p)
    _add_sketch(p)
    p.add_argument("--variant", default="logr", help="logr or logpow:q")

    p = sub.add_parser("leverage", help="approximate leverage scores")
    _add_io(p)
    _add_sketch(p)
    p.add_argument("--jl-cols", type=int, default=0)

    p = sub.add_parser("lewis", help="approximate Lewis weights")
    _add_io(p)
    p.add_argument("--iters", type=int, default=None)
    p.add_argument("--mode", choices=("exact", "sketched"), default="exact")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("regress-l2", help="sketch-and-solve least squares")
    _add_io(p, rhs=True)
    _add_sketch(p)

    p = sub.add_parser("regress-l1", help="coreset l1 regression")
    _add_io(p, rhs=True)
    p.add_argument("--pipeline", default="lewis",
                   choices=("wcb-l2", "wcb-l1", "lewis", "uniform"))
    p.add_argument("--size", type=int, default=None)
    p.add_argument("--eps", type=float, default=0.5)
    p.add_argument("--t", type=float, default=10.0)
    p.add_argument("--variant", default="logr")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("pca", help="approximate top-k PCA")
    _add_io(p)
    _add_sketch(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--output-approx", default=None)

    for name in ("bench-distortion", "bench-regress-l1"):
        p = sub.add_parser(name, help=f"run the {name[6:]} benchmark")
        p.add_argument("--d", type=int, default=16 if name == "bench-distortion" else 10)
        p.add_argument("--n", type=int, default=None)
        p.add_argument("--noise", type=float, default=0.01)
        p.add_argument("--alpha", type=float, default=20.0)
        p.add_argument("--eps", type=float, default=None)
        p.add_argument("--t", type=float, default=10.0)
        p.add_argument("--seeds", type=int, default=5)
        p.add_argument("--r-grid", type=str, default="2,4,8,16")
        p.add_argument("--r1", type=int, default=None)
        p.add_argument("--variant", default="logr")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--no-timing", action="store_true")
        p.add_argument("--output", default=None, help="CSV path (default stdout)")
    return top


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _run(args) -> None:
    if args.command == "gen":
        rng = Rng(args.seed)
        if args.make == "bad":
            write_matrix(args.output, gen_bad_matrix(args.d, args.noise, rng))
        else:
            n = args.n if args.n is not None else args.d ** 3
            eps = args.eps if args.eps is not None else n ** -0.5
            a, b = gen_l1_experiment(args.d, n, args.alpha, eps, rng)
            write_matrix(args.output, a)
            if args.output_rhs:
                write_matrix(args.output_rhs, b.reshape(-1, 1))
        return

    if args.command == "embed-l2":
        a = read_matrix(args.input)
        spec = _spec_from_args(args, *a.shape)
        emb = embed_l2(a, spec, eps=args.eps, t=args.t, seed=args.seed)
        write_matrix(args.output, emb.a_tilde)
        print(f"distortion {measure_l2_distortion(a, emb):.6g}")
        return

    if args.command == "embed-l1":
        a = read_matrix(args.input)
        spec = _spec_from_args(args, *a.shape)
        emb = embed_l1(a, t=args.t, variant=parse_variant(args.variant),
                       spec=spec, rng=Rng(args.seed), strict=False)
        write_matrix(args.output, emb.stacked)
        print(f"rows {emb.stacked.shape[0]} scale_top {emb.scale_top:.6g}")
        return

    if args.command == "leverage":
        a = read_matrix(args.input)
        spec = _spec_from_args(args, *a.shape)
        scores = approx_leverage(a, eps=args.eps, spec=spec,
                                 jl_cols=args.jl_cols, t=args.t, seed=args.seed)
        write_matrix(args.output, scores.tau.reshape(-1, 1))
        return

    if args.command == "lewis":
        a = read_matrix(args.input)
        state = lewis_weights(a, t_iters=args.iters, mode=args.mode,
                              rng=Rng(args.seed))
        write_matrix(args.output, state.w.reshape(-1, 1))
        print(f"iterations {state.iterations_run} sum_w {state.w.sum():.6g}")
        return

    if args.command == "regress-l2":
        a = read_matrix(args.input)
        b = read_matrix(args.rhs)
        spec = _spec_from_args(args, a.shape[0], a.shape[1] + b.shape[1])
        res = sketch_regress_l2(a, b, spec, eps=args.eps, t=args.t,
                                seed=args.seed)
        write_matrix(args.output, np.atleast_2d(res.x))
        print(f"sketched_cost {res.sketched_cost:.6g} full_cost {res.full_cost:.6g}")
        return

    if args.command == "regress-l1":
        a = read_matrix(args.input)
        b = read_matrix(args.rhs).ravel()
        res = regress_l1(a, b, args.pipeline, eps=args.eps, rng=Rng(args.seed),
                         size=args.size, t=args.t,
                         variant=parse_variant(args.variant))
        write_matrix(args.output, res.x.reshape(-1, 1))
        print(f"sketched_cost {res.sketched_cost:.6g} full_cost {res.full_cost:.6g}")
        return

    if args.command == "pca":
        a = read_matrix(args.input)
        spec = _spec_from_args(args, *a.shape)
        v_k, a_hat = approx_pca(a, args.k, spec, eps=args.eps, t=args.t,
                                seed=args.seed)
        write_matrix(args.output, v_k)
        if args.output_approx:
            write_matrix(args.output_approx, a_hat)
        return

    if args.command in ("bench-distortion", "bench-regress-l1"):
        cfg = BenchConfig(d=args.d, n=args.n, noise=args.noise,
                          alpha=args.alpha, eps=args.eps, t=args.t,
                          seeds=args.seeds, r_grid=_grid(args.r_grid),
                          r1=args.r1, variant=parse_variant(args.variant),
                          seed=args.seed, no_timing=args.no_timing)
        if args.command == "bench-distortion":
            text = render_csv(bench_distortion(cfg), DISTORTION_HEADER,
                              cfg.no_timing)
        else:
            text = render_csv(bench_regress_l1(cfg), REGRESS_HEADER,
                              cfg.no_timing)
        _emit(text, args.output)
        return

    raise ParamError(f"unknown command {args.command!r}")  # pragma: no cover


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _run(args)
    except (ParamError, DimensionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NumericError, GramSketchError) as exc:
        if isinstance(exc, FormatError):
            print(f"error: {exc}", file=sys.stderr)
            return 4
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

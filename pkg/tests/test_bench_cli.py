import numpy as np
import pytest

import gramsketch as gs
from gramsketch.bench import DISTORTION_HEADER, REGRESS_HEADER
from gramsketch.cli import main


def small_distortion_cfg(**kw):
    base = dict(d=8, noise=0.01, seeds=3, r_grid=(1, 4), seed=0)
    base.update(kw)
    return gs.BenchConfig(**base)


class TestBenchDistortion:
    def test_header_contract(self):
        rows = gs.bench_distortion(small_distortion_cfg())
        text = gs.render_csv(rows, DISTORTION_HEADER)
        assert text.splitlines()[0] == "method,r_over_d,time_s,distortion,speedup"

    def test_no_timing_drops_columns(self):
        rows = gs.bench_distortion(small_distortion_cfg())
        text = gs.render_csv(rows, DISTORTION_HEADER, no_timing=True)
        assert text.splitlines()[0] == "method,r_over_d,distortion"

    def test_numeric_body_deterministic(self):
        r1 = gs.bench_distortion(small_distortion_cfg())
        r2 = gs.bench_distortion(small_distortion_cfg())
        t1 = gs.render_csv(r1, DISTORTION_HEADER, no_timing=True)
        t2 = gs.render_csv(r2, DISTORTION_HEADER, no_timing=True)
        assert t1 == t2

    def test_curve_orderings(self):
        cfg = small_distortion_cfg(d=16, seeds=7, r_grid=(1,), r1=160)
        rows = {(r["method"], r["r_over_d"]): r for r in gs.bench_distortion(cfg)}
        gram = rows[("gram-sqrt", 1)]["distortion"]
        srht = rows[("srht", 1)]["distortion"]
        gauss_gram = rows[("gauss-gram-sqrt", 1)]["distortion"]
        assert gram < srht          # wide inner sketch beats r=d linear sketch
        assert gauss_gram >= gram   # the extra projection only adds distortion


class TestBenchRegress:
    @pytest.mark.filterwarnings("ignore::RuntimeWarning")
    def test_rows_and_error_floor(self):
        cfg = gs.BenchConfig(d=4, n=80, alpha=20.0, seeds=2, r_grid=(3, 8),
                             seed=1)
        rows = gs.bench_regress_l1(cfg)
        assert len(rows) == 4 * 2
        for row in rows:
            assert row["rel_error"] >= 1.0 - 1e-9
        text = gs.render_csv(rows, REGRESS_HEADER)
        assert text.splitlines()[0] == "method,r_over_d,rel_error,time_frac"

    @pytest.mark.filterwarnings("ignore::RuntimeWarning")
    def test_uniform_worst_at_small_grid(self):
        cfg = gs.BenchConfig(d=10, n=1000, alpha=20.0, seeds=5, r_grid=(3,),
                             seed=0)
        rows = {r["method"]: r["rel_error"] for r in gs.bench_regress_l1(cfg)}
        assert all(rows["uniform"] >= rows[m] for m in rows)


class TestCli:
    def test_gen_embed_roundtrip(self, tmp_path, capsys):
        a_path = tmp_path / "a.mtb"
        out = tmp_path / "emb.mtb"
        assert main(["gen", "--make", "bad", "--d", "8", "--noise", "0.01",
                     "--seed", "3", "--output", str(a_path)]) == 0
        assert main(["embed-l2", "--input", str(a_path), "--output", str(out),
                     "--rows", "32", "--seed", "5"]) == 0
        emb = gs.read_matrix(out)
        assert emb.shape == (8, 8)
        assert "distortion" in capsys.readouterr().out

    def test_leverage_and_lewis(self, tmp_path):
        a_path = tmp_path / "a.csv"
        gs.write_matrix(a_path, np.random.default_rng(0).standard_normal((64, 4)))
        tau = tmp_path / "tau.csv"
        assert main(["leverage", "--input", str(a_path), "--output", str(tau),
                     "--rows", "32"]) == 0
        scores = gs.read_matrix(tau).ravel()
        assert scores.shape == (64,)
        w = tmp_path / "w.csv"
        assert main(["lewis", "--input", str(a_path), "--output", str(w)]) == 0
        assert np.all(gs.read_matrix(w).ravel() > 0.0)

    def test_regress_commands(self, tmp_path):
        rng = np.random.default_rng(1)
        a = rng.standard_normal((120, 5))
        b = (a @ rng.standard_normal(5)).reshape(-1, 1)
        a_path, b_path = tmp_path / "a.mtb", tmp_path / "b.mtb"
        gs.write_matrix(a_path, a)
        gs.write_matrix(b_path, b)
        x_path = tmp_path / "x.mtb"
        assert main(["regress-l2", "--input", str(a_path), "--rhs", str(b_path),
                     "--output", str(x_path), "--rows", "64"]) == 0
        x = gs.read_matrix(x_path).ravel()
        assert np.linalg.norm(a @ x - b.ravel()) <= 1e-6
        assert main(["regress-l1", "--input", str(a_path), "--rhs", str(b_path),
                     "--output", str(x_path), "--pipeline", "lewis",
                     "--size", "60"]) == 0
        x = gs.read_matrix(x_path).ravel()
        assert np.abs(a @ x - b.ravel()).sum() <= 1e-6

    def test_pca_command(self, tmp_path):
        a_path = tmp_path / "a.csv"
        gs.write_matrix(a_path, np.random.default_rng(2).standard_normal((50, 6)))
        v_path = tmp_path / "v.csv"
        assert main(["pca", "--input", str(a_path), "--k", "2",
                     "--output", str(v_path), "--rows", "32"]) == 0
        v = gs.read_matrix(v_path)
        assert v.shape == (6, 2)

    def test_bench_golden_bytes(self, tmp_path):
        args = ["bench-distortion", "--d", "8", "--seeds", "2", "--r-grid",
                "1,2", "--seed", "9", "--no-timing"]
        out1, out2 = tmp_path / "r1.csv", tmp_path / "r2.csv"
        assert main(args + ["--output", str(out1)]) == 0
        assert main(args + ["--output", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_exit_code_io_error(self, tmp_path):
        missing = tmp_path / "nope.mtb"
        assert main(["embed-l2", "--input", str(missing),
                     "--output", str(tmp_path / "o.mtb")]) == 4

    def test_exit_code_format_error(self, tmp_path):
        bad = tmp_path / "bad.mtb"
        bad.write_bytes(b"JUNKJUNKJUNKJUNKJUNKJUNK")
        assert main(["embed-l2", "--input", str(bad),
                     "--output", str(tmp_path / "o.mtb")]) == 4

    def test_exit_code_param_error(self, tmp_path):
        a_path = tmp_path / "a.csv"
        gs.write_matrix(a_path, np.random.default_rng(3).standard_normal((32, 4)))
        code = main(["embed-l2", "--input", str(a_path),
                     "--output", str(tmp_path / "o.csv"), "--eps", "0.9"])
        assert code == 2

    def test_exit_code_rank_error(self, tmp_path):
        a_path = tmp_path / "a.csv"
        gs.write_matrix(a_path, np.ones((10, 2)))
        code = main(["embed-l2", "--input", str(a_path),
                     "--output", str(tmp_path / "o.csv")])
        assert code == 3

    def test_embed_l1_variant_flag(self, tmp_path):
        a_path = tmp_path / "a.csv"
        gs.write_matrix(a_path, np.random.default_rng(4).standard_normal((128, 10)))
        out = tmp_path / "e.csv"
        assert main(["embed-l1", "--input", str(a_path), "--output", str(out),
                     "--variant", "logpow:4", "--seed", "2"]) == 0
        stacked = gs.read_matrix(out)
        assert stacked.shape[1] == 10
        assert main(["embed-l1", "--input", str(a_path), "--output", str(out),
                     "--variant", "bogus"]) == 2

    def test_gen_l1exp(self, tmp_path):
        a_path, b_path = tmp_path / "a.mtb", tmp_path / "b.mtb"
        assert main(["gen", "--make", "l1exp", "--d", "4", "--n", "80",
                     "--seed", "0", "--output", str(a_path),
                     "--output-rhs", str(b_path)]) == 0
        assert gs.read_matrix(a_path).shape == (80, 4)
        assert gs.read_matrix(b_path).shape == (80, 1)

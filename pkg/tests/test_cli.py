
from conftest import config_dict, write_config

import gasketfif as gf
from gasketfif.cli import main
from gasketfif.evaluator import eval_exact


def zero_data(n=1):
    ds = gf.zero_dataset(n)
    return [
        {"first": str(k.first), "second": str(k.second), "z": 0.0}
        for k in ds.entries
    ]


class TestBuild:
    def test_bump_config(self, tmp_path, capsys):
        cfg = write_config(tmp_path, config_dict())
        assert main(["build", "-c", cfg]) == 0
        out = capsys.readouterr().out
        fields = dict(
            line.split("=", 1) for line in out.replace(" ", "\n").splitlines() if "=" in line
        )
        assert float(fields["alphaSup"]) == 0.3
        assert fields["n"] == "1"
        assert float(fields["a"]) == 0.5
        assert "compatibilityMax" in fields

    def test_zero_config_flat_bound(self, tmp_path, capsys):
        cfg = write_config(tmp_path, config_dict(data=zero_data()))
        assert main(["build", "-c", cfg]) == 0
        assert "fSupBound=0" in capsys.readouterr().out

    def test_missing_vertex_exit_code(self, tmp_path, capsys):
        raw = config_dict()
        raw["data"] = raw["data"][:-1]
        cfg = write_config(tmp_path, raw)
        assert main(["build", "-c", cfg]) == 2
        err = capsys.readouterr().err
        assert "missing" in err

    def test_noncontractive_exit_code(self, tmp_path):
        cfg = write_config(tmp_path, config_dict(alpha=1.0))
        assert main(["build", "-c", cfg]) == 3

    def test_malformed_json_exit_code(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        assert main(["build", "-c", str(path)]) == 7

    def test_missing_file_exit_code(self, tmp_path):
        assert main(["build", "-c", str(tmp_path / "nope.json")]) == 7

    def test_custom_gaskets(self, tmp_path, capsys):
        raw = config_dict()
        raw["gasket1"] = [[0, 0], [2, 0], [1, 1.8]]
        raw["gasket2"] = [[0, 0], [1, 0], [0.5, 0.9]]
        cfg = write_config(tmp_path, raw)
        assert main(["build", "-c", cfg]) == 0
        out = capsys.readouterr().out
        assert float(out.split("alphaSup=")[1].splitlines()[0]) == 0.3


class TestEval:
    def test_address_at_data_vertex(self, tmp_path, capsys):
        cfg = write_config(tmp_path, config_dict())
        assert main(["eval", "-c", cfg, "--address", "1@2", "1@2"]) == 0
        assert "= 0.5" in capsys.readouterr().out

    def test_point_with_bound(self, tmp_path, capsys):
        cfg = write_config(tmp_path, config_dict())
        code = main(
            ["eval", "-c", cfg, "--point", "0.25", "0", "0.5", "0", "--depth", "10"]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "errorBound" in out

    def test_point_outside_domain(self, tmp_path):
        cfg = write_config(tmp_path, config_dict())
        assert main(["eval", "-c", cfg, "--point", "9", "9", "0", "0"]) == 4

    def test_neither_selector(self, tmp_path):
        cfg = write_config(tmp_path, config_dict())
        assert main(["eval", "-c", cfg]) == 6


class TestGrid:
    def test_depth_one_row_count(self, tmp_path, capsys):
        cfg = write_config(tmp_path, config_dict())
        out = tmp_path / "g.csv"
        assert main(["grid", "-c", cfg, "--depth", "1", "-o", str(out)]) == 0
        assert "wrote 36 rows" in capsys.readouterr().out
        lines = out.read_text().splitlines()
        assert len(lines) == 37
        assert lines[0] == "t_x,t_y,s_x,s_y,f"

    def test_depth_two_row_count(self, tmp_path):
        cfg = write_config(tmp_path, config_dict())
        out = tmp_path / "g.csv"
        assert main(["grid", "-c", cfg, "--depth", "2", "-o", str(out)]) == 0
        assert len(out.read_text().splitlines()) == 226

    def test_values_roundtrip_exactly(self, tmp_path, ref03):
        # 17-digit output must reproduce the evaluator bit for bit
        cfg = write_config(tmp_path, config_dict())
        out = tmp_path / "g.csv"
        main(["grid", "-c", cfg, "--depth", "1", "-o", str(out)])
        verts = gf.enumerate_vertices(1)
        rows = out.read_text().splitlines()[1:]
        k = 0
        for a in verts:
            for b in verts:
                got = float(rows[k].split(",")[4])
                assert got == eval_exact(ref03, a, b)
                k += 1

    def test_ppm_output(self, tmp_path):
        cfg = write_config(tmp_path, config_dict())
        out = tmp_path / "g.csv"
        ppm = tmp_path / "g.ppm"
        code = main(
            ["grid", "-c", cfg, "--depth", "1", "-o", str(out), "--ppm", str(ppm)]
        )
        assert code == 0
        blob = ppm.read_bytes()
        assert blob.startswith(b"P6\n6 6\n255\n")
        assert len(blob) == len(b"P6\n6 6\n255\n") + 6 * 6 * 3

    def test_bad_depth(self, tmp_path):
        cfg = write_config(tmp_path, config_dict())
        assert main(["grid", "-c", cfg, "--depth", "0", "-o", "x.csv"]) == 6


class TestChaos:
    def test_deterministic_output(self, tmp_path):
        cfg = write_config(tmp_path, config_dict())
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        for out in (a, b):
            code = main(
                ["chaos", "-c", cfg, "--points", "500", "--seed", "42", "-o", str(out)]
            )
            assert code == 0
        assert a.read_bytes() == b.read_bytes()
        assert len(a.read_text().splitlines()) == 501

    def test_bad_count(self, tmp_path):
        cfg = write_config(tmp_path, config_dict())
        assert main(["chaos", "-c", cfg, "--points", "0", "-o", "x.csv"]) == 6


class TestDim:
    def test_subcritical_sandwich(self, tmp_path, capsys):
        cfg = write_config(tmp_path, config_dict())
        code = main(["dim", "-c", cfg, "--min-level", "2", "--max-level", "5"])
        assert code == 0
        out = capsys.readouterr().out
        assert "sandwich: PASS" in out
        assert "level,delta,count" in out

    def test_supercritical_warns_without_bounds(self, tmp_path, capsys):
        cfg = write_config(tmp_path, config_dict(alpha=0.6))
        code = main(["dim", "-c", cfg, "--min-level", "2", "--max-level", "4"])
        assert code == 0
        out = capsys.readouterr().out
        assert "warning" in out
        assert "sandwich" not in out

    def test_too_few_levels(self, tmp_path):
        cfg = write_config(tmp_path, config_dict())
        assert main(["dim", "-c", cfg, "--min-level", "2", "--max-level", "3"]) == 6


class TestHolder:
    def test_subcritical(self, tmp_path, capsys):
        cfg = write_config(tmp_path, config_dict())
        code = main(["holder", "-c", cfg, "--min-level", "3", "--max-level", "6"])
        assert code == 0
        out = capsys.readouterr().out
        assert "case = 1" in out
        assert "one-sided verdict: PASS" in out

    def test_zero_data_degenerate(self, tmp_path, capsys):
        cfg = write_config(tmp_path, config_dict(data=zero_data()))
        code = main(["holder", "-c", cfg, "--min-level", "2", "--max-level", "4"])
        assert code == 0
        assert "inf" in capsys.readouterr().out


class TestCheck:
    def test_valid_model_passes(self, tmp_path, capsys):
        cfg = write_config(tmp_path, config_dict())
        assert main(["check", "-c", cfg]) == 0
        out = capsys.readouterr().out
        for name in (
            "compatibility",
            "interpolation",
            "functional-equation",
            "boundary-vanishing",
            "vertex-count",
            "contraction",
        ):
            assert f"PASS {name}" in out
        assert "FAIL" not in out

    def test_corrupted_model_fails(self, tmp_path, capsys):
        cfg = write_config(tmp_path, config_dict())
        assert main(["check", "-c", cfg, "--corrupt", "1|2|2|1|0.1"]) == 1
        assert "FAIL compatibility" in capsys.readouterr().out

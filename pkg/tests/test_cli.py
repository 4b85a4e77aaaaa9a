import json
import math
from pathlib import Path

import pytest

from folner_lab.cli import ConfigError, main, parse_f_family, parse_n_list

CORPUS = Path(__file__).parent / "corpus"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestArgParsing:
    def test_n_list_explicit(self):
        assert parse_n_list("1,3,7") == [1, 3, 7]

    def test_n_list_dyadic(self):
        assert parse_n_list("dyadic:2:5") == [4, 8, 16, 32]

    def test_n_list_rejects_decreasing(self):
        with pytest.raises(ConfigError):
            parse_n_list("4,2")
        with pytest.raises(ConfigError):
            parse_n_list("0,1")
        with pytest.raises(ConfigError):
            parse_n_list("dyadic:5:2")

    def test_f_family(self):
        fam = parse_f_family("poly:2,hat:3:-1:1")
        assert [f.kind for f in fam] == ["poly"] * 3 + ["hat"] * 3
        with pytest.raises(ConfigError):
            parse_f_family("spline:3")
        with pytest.raises(ConfigError):
            parse_f_family(" , ")


class TestFolnerCommand:
    def test_shift_csv_values(self, capsys):
        code, out, _ = run(
            capsys,
            "folner",
            "--op", str(CORPUS / "valid" / "shift.json"),
            "--n", "1,3,7,15",
            "--p", "2",
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "# folner-lab 0.1.0"
        assert lines[1] == "label,n,d_n,p,ratio,off_corner,qd_gap"
        ratios = [float(line.split(",")[4]) for line in lines[2:]]
        want = [1.0 / math.sqrt(n + 1) for n in (1, 3, 7, 15)]
        assert ratios == pytest.approx(want, abs=1e-14)
        gaps = [float(line.split(",")[6]) for line in lines[2:]]
        assert gaps == [1.0] * 4

    def test_byte_identical_reruns(self, capsys, tmp_path):
        argv = [
            "folner",
            "--op", str(CORPUS / "valid" / "almost_mathieu.json"),
            "--n", "2,4,8",
        ]
        paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
        for path in paths:
            assert main(argv + ["--out", str(path)]) == 0
        capsys.readouterr()
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_bad_p(self, capsys):
        code, _, err = run(
            capsys,
            "folner", "--op", str(CORPUS / "valid" / "shift.json"), "--n", "2", "--p", "3",
        )
        assert code == 2 and "config error" in err


class TestSzegoCommand:
    def test_toeplitz_json_summary(self, capsys):
        code, out, _ = run(
            capsys,
            "szego",
            "--op", str(CORPUS / "valid" / "hopping.json"),
            "--n", "64,256",
            "--f", "poly:2",
            "--format", "json",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["summary"]["hopping"]["max_error_at_largest_n"] == pytest.approx(
            2.0 / 257.0, abs=1e-9
        )
        assert payload["kolmogorov"][-1]["kolmogorov"] <= 0.02
        assert "folner" in payload and "trace" in payload

    def test_ncpoly_moments(self, capsys):
        code, out, _ = run(
            capsys,
            "szego",
            "--op", str(CORPUS / "valid" / "harper.json"),
            "--n", "128",
            "--f", "poly:2",
            "--format", "json",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["kolmogorov"] == []
        assert payload["summary"]["harper"]["max_error_at_largest_n"] <= 0.05
        assert payload["trace"]["rows"][0]["reference_re"] == 0.0

    def test_no_reference_available(self, capsys):
        code, _, err = run(
            capsys,
            "szego", "--op", str(CORPUS / "valid" / "shift.json"), "--n", "4",
        )
        assert code == 3 and "spec error" in err

    def test_plot_out(self, capsys, tmp_path):
        plot = tmp_path / "plot.csv"
        code, _, _ = run(
            capsys,
            "szego",
            "--op", str(CORPUS / "valid" / "hopping.json"),
            "--n", "16,32",
            "--f", "poly:2",
            "--plot-out", str(plot),
        )
        assert code == 0
        assert "label,n,d_n,max_error" in plot.read_text()


class TestTraceCommand:
    def test_identity_like_toeplitz(self, capsys):
        code, out, _ = run(
            capsys,
            "trace",
            "--op", str(CORPUS / "valid" / "hopping.json"),
            "--n", "4,16",
        )
        assert code == 0
        rows = [line.split(",") for line in out.strip().splitlines()[2:]]
        assert all(float(r[3]) == 0.0 for r in rows)  # estimate_re of zero-mean symbol


class TestTensorCommand:
    def test_shift_pair(self, capsys):
        code, out, _ = run(
            capsys,
            "tensor",
            "--op-a", str(CORPUS / "valid" / "shift.json"),
            "--op-b", str(CORPUS / "valid" / "shift.json"),
            "--n", "7",
        )
        assert code == 0
        row = out.strip().splitlines()[-1].split(",")
        assert float(row[3]) == pytest.approx(15.0 / 64.0, abs=1e-12)
        assert float(row[5]) == pytest.approx(0.25, abs=1e-12)

    def test_dim_cap(self, capsys):
        code, _, err = run(
            capsys,
            "tensor",
            "--op-a", str(CORPUS / "valid" / "shift.json"),
            "--op-b", str(CORPUS / "valid" / "shift.json"),
            "--n", "200",
            "--dim-cap", "1000",
        )
        assert code == 3 and "spec error" in err

    def test_kron_factor_rejected(self, capsys):
        code, _, _ = run(
            capsys,
            "tensor",
            "--op-a", str(CORPUS / "valid" / "lattice_pair.json"),
            "--op-b", str(CORPUS / "valid" / "shift.json"),
            "--n", "3",
        )
        assert code == 3


class TestDemoShift:
    def test_table(self, capsys):
        code, out, _ = run(capsys, "demo-shift", "--n", "1,3")
        assert code == 0
        assert "1/sqrt(n+1)" in out
        assert "0.7071067811865475" in out  # n = 1 row


class TestValidate:
    def test_whole_valid_corpus(self, capsys):
        files = sorted(str(p) for p in (CORPUS / "valid").glob("*.json"))
        code, out, _ = run(capsys, "validate", *files)
        assert code == 0
        assert f"{len(files)} spec file(s) valid" in out

    @pytest.mark.parametrize(
        "name",
        sorted(p.name for p in (CORPUS / "invalid").glob("*.json")),
    )
    def test_each_invalid_file(self, capsys, name):
        code, _, err = run(capsys, "validate", str(CORPUS / "invalid" / name))
        assert code == 3
        assert err.strip()


class TestExitCodes:
    def test_missing_file_is_spec_error(self, capsys):
        code, _, _ = run(capsys, "validate", "/nonexistent/spec.json")
        assert code == 3

    def test_unparseable_arguments(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["folner", "--n", "2"])
        assert exc.value.code == 2
        capsys.readouterr()

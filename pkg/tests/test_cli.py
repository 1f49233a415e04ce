import json
import subprocess
import sys

import pytest

from mdlab.cli import main, parse_eps, parse_m_list
from mdlab.io import dump_instance, load_instance
from mdlab.valuations import Valuation


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


@pytest.fixture
def tightness_file(tmp_path):
    path = tmp_path / "tightness.json"
    v = Valuation(2, [0, 1, 1], 1)
    dump_instance(path, v, v)
    return path


def test_parse_m_list():
    assert parse_m_list("2^10..2^12") == [1024, 2048, 4096]
    assert parse_m_list("4,8,2^5") == [4, 8, 32]
    assert parse_m_list("3..20") == [4, 8, 16]
    with pytest.raises(ValueError):
        parse_m_list("0")


def test_parse_eps():
    assert parse_eps("1/2") == parse_eps("2/4")
    assert parse_eps("3") == 3
    with pytest.raises(ValueError):
        parse_eps("-1/2")
    with pytest.raises(ZeroDivisionError):
        parse_eps("1/0")


def test_instance_round_trip(tightness_file):
    v1, v2 = load_instance(tightness_file)
    assert v1 == v2 == Valuation(2, [0, 1, 1], 1)
    raw = json.loads(tightness_file.read_text())
    assert raw == {"m": 2, "bidders": [{"values": [0, 1, 1], "k": 1}] * 2}


class TestSeparation:
    def test_csv_rows(self, capsys):
        code, out = run(capsys, "separation", "--m", "2^4..2^6", "--eps", "1/1", "--seed", "42",
                        "--format", "csv")
        assert code == 0
        lines = out.out.splitlines()
        assert lines[0] == "m,eps,seed,alg,queries,welfare,opt,ratio"
        exact = [r.split(",") for r in lines[1:] if ",exact," in r]
        assert [(int(r[0]), int(r[4])) for r in exact] == [(16, 34), (32, 66), (64, 130)]

    def test_gap_block(self, capsys):
        code, out = run(capsys, "separation", "--gap-range", "0,1,3,4", "--m", "4", "--H", "1000")
        assert code == 0
        gap = json.loads(out.out)["gap"]
        assert (gap["opt_welfare"], gap["mir_welfare"]) == (2000, 0)

    def test_gap_block_csv_after_records(self, capsys):
        code, out = run(capsys, "separation", "--gap-range", "0,2", "--m", "2", "--H", "1",
                        "--seed", "1", "--format", "csv")
        assert code == 0
        assert out.out.rstrip().endswith("0 2,2,1,1,0,2")

    def test_missing_seed(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["separation", "--m", "2^10..2^12"])
        assert exc.value.code == 2
        assert "usage" in capsys.readouterr().err

    def test_full_gap_range_is_config_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["separation", "--gap-range", "0,1,2", "--m", "2"])
        assert exc.value.code == 2

    def test_byte_identical(self, tmp_path):
        outs = []
        for i in range(2):
            path = tmp_path / f"out{i}.csv"
            assert main(["separation", "--m", "2^3..2^8", "--seed", "7", "--format", "csv",
                         "--output", str(path)]) == 0
            outs.append(path.read_bytes())
        assert outs[0] == outs[1]


class TestVerify:
    def test_vcg_clean(self, capsys):
        code, out = run(capsys, "verify", "--mechanism", "vcg", "--m", "3", "--vmax", "2",
                        "--mode", "exhaustive")
        assert code == 0 and json.loads(out.out)["witness_count"] == 0

    def test_random_dictator_clean(self, capsys):
        assert run(capsys, "verify", "--mechanism", "random-dictator")[0] == 0

    def test_affine_spec_file(self, capsys, tmp_path):
        spec = tmp_path / "spec.json"
        spec.write_text(json.dumps({"range": [0, 2, 3], "w": ["1/2", 3], "c": {"0": 5, "2": 0, "3": "1/2"}}))
        assert run(capsys, "verify", "--mechanism", "affine", "--affine-spec", str(spec))[0] == 0

    def test_naive_eps_two_has_witnesses(self, capsys):
        code, out = run(capsys, "verify", "--mechanism", "fptas-naive-vcg", "--m", "3", "--vmax", "2",
                        "--eps", "2/1")
        report = json.loads(out.out)
        assert code == 3 and report["witness_count"] >= 1 and not report["truthful"]
        assert len(report["witnesses"]) == 5

    def test_naive_eps_one_exact_on_small_grid(self, capsys):
        code, out = run(capsys, "verify", "--mechanism", "fptas-naive-vcg", "--m", "3", "--vmax", "2",
                        "--eps", "1/1")
        assert code == 0

    def test_sampled(self, capsys):
        code, _ = run(capsys, "verify", "--mechanism", "fptas-naive-vcg", "--m", "12", "--vmax", "50",
                      "--mode", "sampled", "--seed", "3", "--trials", "500", "--eps", "1/2")
        assert code == 3

    def test_sampled_needs_seed(self):
        with pytest.raises(SystemExit) as exc:
            main(["verify", "--mechanism", "vcg", "--mode", "sampled"])
        assert exc.value.code == 2

    def test_bad_mechanism(self):
        with pytest.raises(SystemExit) as exc:
            main(["verify", "--mechanism", "nosuch"])
        assert exc.value.code == 2

    def test_grid_too_large_is_config_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["verify", "--mechanism", "vcg", "--m", "5", "--vmax", "4"])
        assert exc.value.code == 2
        assert "--mode sampled" in capsys.readouterr().err


class TestRatio:
    def test_tightness(self, capsys, tightness_file):
        code, out = run(capsys, "ratio", "--mechanism", "random-dictator", "--m", "2",
                        "--instance", str(tightness_file))
        summary = json.loads(out.out)
        assert code == 0 and summary["max"] == 2.0

    def test_fptas_trials(self, capsys):
        code, out = run(capsys, "ratio", "--mechanism", "fptas", "--eps", "1/2", "--trials", "1000",
                        "--m", "100", "--seed", "7")
        summary = json.loads(out.out)
        assert code == 0 and summary["count"] == 1000 and summary["max"] <= 1.5

    def test_zero_trials(self, capsys):
        code, out = run(capsys, "ratio", "--mechanism", "fptas", "--trials", "0")
        assert code == 0 and json.loads(out.out)["count"] == 0

    def test_trials_need_seed(self):
        with pytest.raises(SystemExit) as exc:
            main(["ratio", "--mechanism", "fptas", "--trials", "5"])
        assert exc.value.code == 2

    def test_records_csv(self, capsys):
        code, out = run(capsys, "ratio", "--mechanism", "random-dictator", "--trials", "3",
                        "--seed", "1", "--m", "5", "--records", "--format", "csv")
        assert code == 0 and out.out.startswith("m,eps,seed,alg")


def test_console_entry_point_exit_codes(tmp_path):
    def code(*args):
        return subprocess.run([sys.executable, "-m", "mdlab", *args], capture_output=True).returncode

    assert code("verify", "--mechanism", "vcg", "--m", "2", "--vmax", "1") == 0
    assert code("verify", "--mechanism", "fptas-naive-vcg", "--eps", "2/1") == 3
    assert code("verify", "--mechanism", "nosuch") == 2
    assert code("separation", "--m", "4") == 2


@pytest.mark.parametrize(
    "spec_text, extra",
    [
        ('{"range": [0, 2, 3, 4], "w": [1, 1], "c": {"0": 0, "2": 0, "3": 0, "4": 0}}', []),
        ("{not json", []),
        ('{"range": [0, 1], "w": [1, 1], "c": {"0": 0}}', []),
    ],
    ids=["range-exceeds-m", "malformed-json", "constants-mismatch"],
)
def test_verify_bad_affine_spec_is_config_error(tmp_path, spec_text, extra):
    # m defaults to 3, so range entry 4 is out of bounds
    path = tmp_path / "spec.json"
    path.write_text(spec_text)
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--mechanism", "affine", "--affine-spec", str(path), *extra])
    assert exc.value.code == 2


def test_verify_sampled_mode_on_larger_grid(capsys):
    code, out = run(capsys, "verify", "--mechanism", "vcg", "--m", "6", "--vmax", "5",
                    "--mode", "sampled", "--seed", "3", "--trials", "200")
    assert code == 0
    assert json.loads(out.out)["truthful"] is True

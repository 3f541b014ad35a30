import json
from pathlib import Path

import pytest

from dqcbench.cli import SEED_ENV_VAR, main
from dqcbench.corpus import CorpusSpec, write_corpus
from dqcbench.harness import CSV_HEADER

ONE_CIRCUIT = CorpusSpec(families=("random",), widths=(16,), random_seeds=(0,))
TINY = CorpusSpec(families=("ghz", "grover_like"), widths=(4,))


@pytest.fixture
def one_circuit_dir(tmp_path):
    d = tmp_path / "corpus"
    write_corpus(ONE_CIRCUIT, d)
    return d


def strip_timing(path: Path):
    return [line.rsplit(",", 1)[0] for line in path.read_text().splitlines()]


class TestGenCorpus:
    def test_writes_files(self, tmp_path, capsys):
        code = main(["gen-corpus", "--out", str(tmp_path / "c"),
                     "--widths", "2,4", "--families", "ghz,qft"])
        assert code == 0
        files = sorted(p.name for p in (tmp_path / "c").glob("*.qasm"))
        assert files == ["ghz_w002.qasm", "ghz_w004.qasm",
                         "qft_w002.qasm", "qft_w004.qasm"]

    def test_bad_family(self, tmp_path, capsys):
        code = main(["gen-corpus", "--out", str(tmp_path), "--families", "nope"])
        assert code == 1
        assert "error" in capsys.readouterr().err


class TestRun:
    def test_one_circuit_row_count(self, one_circuit_dir, tmp_path):
        out = tmp_path / "r.csv"
        code = main(["run", "--corpus", str(one_circuit_dir), "--out", str(out),
                     "--timing-repeats", "1"])
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == CSV_HEADER
        assert len(lines) == 1 + 36  # 4 strategies x k=2..10

    def test_determinism_modulo_timing(self, one_circuit_dir, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for out in (a, b):
            assert main(["run", "--corpus", str(one_circuit_dir), "--out",
                         str(out), "--seed", "7", "--timing-repeats", "1"]) == 0
        assert strip_timing(a) == strip_timing(b)

    def test_qpus_and_strategy_filters(self, one_circuit_dir, tmp_path):
        out = tmp_path / "r.csv"
        code = main(["run", "--corpus", str(one_circuit_dir), "--out", str(out),
                     "--qpus", "2,4", "--strategies", "baseline,local",
                     "--timing-repeats", "1"])
        assert code == 0
        assert len(out.read_text().splitlines()) == 1 + 2 * 2

    def test_missing_corpus(self, tmp_path, capsys):
        code = main(["run", "--corpus", str(tmp_path / "nope"), "--out",
                     str(tmp_path / "r.csv")])
        assert code == 1

    def test_malformed_qpus(self, one_circuit_dir, tmp_path, capsys):
        code = main(["run", "--corpus", str(one_circuit_dir), "--out",
                     str(tmp_path / "r.csv"), "--qpus", "two"])
        assert code == 1
        assert "malformed" in capsys.readouterr().err

    def test_unknown_strategy(self, one_circuit_dir, tmp_path, capsys):
        code = main(["run", "--corpus", str(one_circuit_dir), "--out",
                     str(tmp_path / "r.csv"), "--strategies", "turbo"])
        assert code == 1

    def test_env_seed_used_when_flag_absent(self, one_circuit_dir, tmp_path,
                                            monkeypatch):
        a, b, c = (tmp_path / n for n in ("a.csv", "b.csv", "c.csv"))
        monkeypatch.setenv(SEED_ENV_VAR, "3")
        main(["run", "--corpus", str(one_circuit_dir), "--out", str(a),
              "--timing-repeats", "1"])
        monkeypatch.delenv(SEED_ENV_VAR)
        main(["run", "--corpus", str(one_circuit_dir), "--out", str(b),
              "--seed", "3", "--timing-repeats", "1"])
        monkeypatch.setenv(SEED_ENV_VAR, "99")
        main(["run", "--corpus", str(one_circuit_dir), "--out", str(c),
              "--seed", "3", "--timing-repeats", "1"])
        assert strip_timing(a) == strip_timing(b) == strip_timing(c)


class TestSummarize:
    def test_summarize_round(self, one_circuit_dir, tmp_path, capsys):
        csv_path = tmp_path / "r.csv"
        main(["run", "--corpus", str(one_circuit_dir), "--out", str(csv_path),
              "--timing-repeats", "1"])
        out = tmp_path / "summary.json"
        code = main(["summarize", "--in", str(csv_path), "--out", str(out)])
        assert code == 0
        summary = json.loads(out.read_text())
        assert len(summary["compile_time"]) == 4
        stdout = capsys.readouterr().out
        assert "median" in stdout

    def test_malformed_csv(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("not,a,results,file\n1,2,3,4\n")
        code = main(["summarize", "--in", str(bad), "--out",
                     str(tmp_path / "s.json")])
        assert code == 1
        assert "malformed CSV" in capsys.readouterr().err

    def test_missing_csv(self, tmp_path):
        assert main(["summarize", "--in", str(tmp_path / "nope.csv"),
                     "--out", str(tmp_path / "s.json")]) == 1


class TestVerify:
    def test_tiny_corpus_passes(self, tmp_path, capsys):
        d = tmp_path / "corpus"
        write_corpus(TINY, d)
        code = main(["verify", "--corpus", str(d), "--qpus", "2,3"])
        assert code == 0
        out = capsys.readouterr().out
        assert "0 failed" in out

    def test_missing_dir(self, tmp_path):
        assert main(["verify", "--corpus", str(tmp_path / "nope")]) == 1


class TestArgHandling:
    def test_unknown_flag_rejected(self, capsys):
        assert main(["run", "--bogus", "x"]) == 1

    def test_unknown_subcommand(self, capsys):
        assert main(["frobnicate"]) == 1

    def test_help_exits_zero(self, capsys):
        assert main(["--help"]) == 0

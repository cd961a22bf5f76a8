import json
import subprocess
import sys

import pytest

from ybhom import cli
from ybhom.ybop import column_normalize_at, kauffman_fixture


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_homology_text(capsys):
    code, out, _ = run(capsys, "homology", "--m", "2", "--n", "2", "--jobs", "1")
    assert code == 0
    assert out.startswith("H_2(m=2) = (2, 1, 1)")


def test_homology_expect_match(capsys):
    code, out, _ = run(capsys, "homology", "--m", "2..3", "--n", "2", "--expect", "thm", "--jobs", "1")
    assert code == 0
    assert out.count("[match]") == 2


def test_homology_expect_pw(capsys):
    code, out, _ = run(capsys, "homology", "--m", "2", "--n", "2..4", "--expect", "conj-pw", "--json", "--jobs", "1")
    assert code == 0
    recs = [json.loads(line) for line in out.splitlines()]
    assert [r["summary"] for r in recs] == [[2, 1, 1], [2, 2, 2], [2, 6, 4]]
    assert all(r["match"] and r["expected"]["provenance"] == "ConjPW" for r in recs)


def test_homology_mismatch_exit_code(capsys, monkeypatch):
    from ybhom import homology

    wrong = homology.ExpectedResult(2, 2, 5, 0, 0, "Thm5.1")
    monkeypatch.setattr(cli, "expectation", lambda kind, m, n: wrong)
    code, out, _ = run(capsys, "homology", "--m", "2", "--n", "2", "--expect", "thm", "--jobs", "1")
    assert code == 2
    assert "MISMATCH" in out


def test_broken_chain_exit_code(capsys, monkeypatch):
    K = column_normalize_at(kauffman_fixture(), 2)
    monkeypatch.setattr(cli, "build_homflypt", lambda m: K)
    code, out, _ = run(capsys, "homology", "--m", "4", "--n", "2", "--jobs", "1")
    assert code == 3
    assert "chain broken" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["homology", "--m", "0"],
        ["homology", "--m", "3..2"],
        ["homology", "--ring", "zz"],
        ["homology", "--jobs", "0"],
        ["verify", "--points", "q=0"],
        ["frobnicate"],
        [],
    ],
)
def test_usage_errors_exit_1(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    assert exc.value.code == 1


def test_json_is_deterministic_apart_from_timing(capsys):
    outs = []
    for _ in range(2):
        code, out, _ = run(capsys, "homology", "--m", "2..3", "--n", "2..3", "--json", "--expect", "table", "--jobs", "1")
        assert code == 0
        recs = [json.loads(line) for line in out.splitlines()]
        for r in recs:
            r.pop("wall_time_ms")
        outs.append(recs)
    assert outs[0] == outs[1]
    assert [(r["m"], r["n"]) for r in outs[0]] == [(2, 2), (2, 3), (3, 2), (3, 3)]


def test_parallel_jobs_match_serial(capsys):
    def records(jobs):
        _, out, _ = run(capsys, "homology", "--m", "2..3", "--n", "2..3", "--json", "--jobs", jobs)
        recs = [json.loads(line) for line in out.splitlines()]
        for r in recs:
            r.pop("wall_time_ms")
        return recs

    assert records("1") == records("2")


def test_verify_operators(capsys):
    code, out, _ = run(capsys, "verify", "--m", "1..3")
    assert code == 0 and "FAIL" not in out
    assert out.count("\n") == 9
    code, out, _ = run(capsys, "verify", "--operator", "jones", "--m", "2", "--json")
    assert code == 0 and json.loads(out)["match"] is True


def test_counterexample(capsys):
    code, out, _ = run(capsys, "counterexample", "--json")
    assert code == 0
    body = json.loads(out)
    assert body["fixture_ybe"] == "holds" and body["normalized_ybe"] == "fails"
    assert body["point"] == {"q": "2"} and body["failing_triples"] > 0
    code, out, _ = run(capsys, "verify", "--counterexample")
    assert code == 0 and "normalized-YBE=fails at q=2" in out


def test_table_small(capsys):
    code, out, _ = run(capsys, "table", "--m", "3..4", "--jobs", "1")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].split() == ["H_n", "m=3", "m=4"]
    assert lines[1].split() == ["H_2", "(4,3,2)", "(7,6,3)"]
    assert lines[3].split() == ["H_3", "(4,12,6)", "(8,35,12)"]


def test_table_json(capsys):
    code, out, _ = run(capsys, "table", "--m", "3", "--json", "--jobs", "1")
    assert code == 0
    rows = json.loads(out)["rows"]
    assert [c["expected"]["provenance"] for r in rows for c in r["cells"]] == ["Table", "Table"]


def test_boundary_dump_and_cache(capsys, tmp_path):
    out_file = tmp_path / "b.txt"
    code, _, _ = run(capsys, "boundary", "--m", "2", "--n", "3", "--cache", str(tmp_path / "c"), "--out", str(out_file))
    assert code == 0
    text = out_file.read_text()
    assert text.startswith("# ybhom-boundary v1\noperator=R_(2) m=2 n=3")
    assert any((tmp_path / "c").iterdir())


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "ybhom", "homology", "--m", "2", "--n", "2", "--json", "--jobs", "1"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["summary"] == [2, 1, 1]

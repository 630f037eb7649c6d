import json
import subprocess
import sys

import pytest

from crosseval import report
from crosseval.cli import main, parse_weights
from crosseval.errors import ValidationError

SCORES = "b1_0\t3\nb1_1\t4\nb1_2\t5\nb1_3\t6\nb2_0\t0.5\nb2_1\t0.6\nb2_2\t0.7\nb2_3\t0.8\ns_0\t1\ns_1\t2\ns_2\t3.5\ns_3\t7\n"
MANIFEST = "utt_id,label,subset_id\n" + "".join(
    f"{u},{lab},{sid}\n"
    for u, lab, sid in [(f"b1_{i}", "bonafide", "b1") for i in range(4)]
    + [(f"b2_{i}", "bonafide", "b2") for i in range(4)]
    + [(f"s_{i}", "spoof", "s1") for i in range(4)]
)


@pytest.fixture
def fixture_files(tmp_path):
    (tmp_path / "s.tsv").write_text(SCORES)
    (tmp_path / "m.csv").write_text(MANIFEST)
    return tmp_path


def run(*args):
    return main([str(a) for a in args])


def eval_args(d, out, *extra):
    return ["eval", "--scores", d / "s.tsv", "--manifest", d / "m.csv", "--out", out, *extra]


def test_eval_matrix(fixture_files, capsys):
    out = fixture_files / "out"
    assert run(*eval_args(fixture_files, out, "--mode", "matrix")) == 0
    assert sorted(p.name for p in out.iterdir()) == sorted(
        ["matrix.csv", "thresholds.csv", "matrix.json", "heatmap.svg", "pooled.md"]
    )
    md = (out / "pooled.md").read_text()
    assert "| max. EER of M=1 synthesizers | 0.25 | 1.00 | 0.63 |" in md
    assert json.loads((out / "matrix.json").read_text())["metadata"]["seed"] == 0
    assert capsys.readouterr().out.count("wrote") == 5


def test_combined_identity(fixture_files):
    single = fixture_files / "single.csv"
    single.write_text("".join(ln + "\n" for ln in MANIFEST.splitlines() if "b2" not in ln))
    base = ["--scores", fixture_files / "s.tsv", "--manifest", single]
    assert run("eval", *base, "--out", fixture_files / "m", "--mode", "matrix") == 0
    assert run("eval", *base, "--out", fixture_files / "c", "--mode", "combined", "--weights", "s1=1") == 0
    cell = report.matrix_from_json((fixture_files / "m" / "matrix.json").read_text()).cells[0][0]
    combined = json.loads((fixture_files / "c" / "combined.json").read_text())
    assert combined["eer"] == cell.eer == 0.25
    assert combined["threshold"] == cell.threshold
    assert combined["metadata"]["weights"] == {"s1": 1.0}


def test_spoof_cross(fixture_files):
    out = fixture_files / "sc"
    assert run(*eval_args(fixture_files, out, "--mode", "spoof-cross")) == 0
    assert (out / "spoof_cross.csv").read_text().splitlines()[0] == "subset_id,eer,threshold,fpr,fnr"


def test_parallelism_identical(fixture_files):
    run(*eval_args(fixture_files, fixture_files / "p1", "--parallelism", "1"))
    run(*eval_args(fixture_files, fixture_files / "p4", "--parallelism", "4"))
    for name in ["matrix.csv", "thresholds.csv", "matrix.json", "heatmap.svg", "pooled.md"]:
        assert (fixture_files / "p1" / name).read_bytes() == (fixture_files / "p4" / name).read_bytes()


def test_refuses_non_empty_out(fixture_files, capsys):
    out = fixture_files / "out"
    assert run(*eval_args(fixture_files, out)) == 0
    assert run(*eval_args(fixture_files, out)) == 1
    assert "--force" in capsys.readouterr().err
    assert run(*eval_args(fixture_files, out, "--force")) == 0


def test_validation_error_exit(fixture_files, capsys):
    (fixture_files / "bad.tsv").write_text("b1_0\tabc\n")
    code = run("eval", "--scores", fixture_files / "bad.tsv", "--manifest", fixture_files / "m.csv", "--out", fixture_files / "o")
    assert code == 1
    captured = capsys.readouterr()
    assert "line 1" in captured.err and captured.out == ""


def test_missing_score_exit(fixture_files):
    (fixture_files / "short.tsv").write_text("b1_0\t1\n")
    assert run("eval", "--scores", fixture_files / "short.tsv", "--manifest", fixture_files / "m.csv", "--out", fixture_files / "o") == 1


def test_io_error_exit(fixture_files):
    assert run("eval", "--scores", fixture_files / "nope.tsv", "--manifest", fixture_files / "m.csv", "--out", fixture_files / "o") == 2


def test_usage_error_exit(fixture_files):
    assert run("eval", "--scores", fixture_files / "s.tsv") == 1
    assert run(*eval_args(fixture_files, fixture_files / "w", "--mode", "combined", "--weights", "s1=2")) == 1
    assert run(*eval_args(fixture_files, fixture_files / "w", "--mode", "combined", "--weights", "zz=0.5")) == 1


def test_parse_weights():
    assert parse_weights("a=0.1, b=1") == {"a": 0.1, "b": 1.0}
    assert parse_weights("") == {}
    with pytest.raises(ValidationError):
        parse_weights("a")


def test_pool_and_report(fixture_files):
    ev = fixture_files / "ev"
    run(*eval_args(fixture_files, ev))
    assert run("pool", "--matrix", ev / "matrix.json", "--out", fixture_files / "pl") == 0
    assert (fixture_files / "pl" / "pooled.md").read_bytes() == (ev / "pooled.md").read_bytes()
    assert run("report", "--matrix", ev / "matrix.json", "--out", fixture_files / "rp") == 0
    rp = fixture_files / "rp"
    assert (rp / "heatmap.png").read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
    for name in ["matrix.csv", "thresholds.csv", "matrix.json", "heatmap.svg", "pooled.md"]:
        assert (rp / name).read_bytes() == (ev / name).read_bytes()


def test_pool_rejects_garbage(fixture_files):
    (fixture_files / "x.json").write_text("{}")
    assert run("pool", "--matrix", fixture_files / "x.json", "--out", fixture_files / "pl") == 1


def test_simulate_deterministic(tmp_path):
    cfg = tmp_path / "fig1.cfg"
    cfg.write_text(
        "[simulation]\nshrink = a\nfractions = 1, 0.1\n"
        "[subset g]\nlabel = bonafide\nmean = 3\nstddev = 1\ncount = 400\n"
        "[subset a]\nlabel = spoof\nmean = -3\nstddev = 1\ncount = 800\n"
        "[subset h]\nlabel = spoof\nmean = 2\nstddev = 1\ncount = 200\n"
    )
    for name in ("r1", "r2"):
        assert run("simulate", "--config", cfg, "--seed", 7, "--out", tmp_path / name) == 0
    files = sorted(p.name for p in (tmp_path / "r1").iterdir())
    assert files == ["drift.csv", "drift.png", "manifest.csv", "scores.tsv", "simulation.json"]
    for name in files:
        assert (tmp_path / "r1" / name).read_bytes() == (tmp_path / "r2" / name).read_bytes()
    assert json.loads((tmp_path / "r1" / "simulation.json").read_text())["seed"] == 7
    # generated files feed straight back into eval
    r1 = tmp_path / "r1"
    assert run("eval", "--scores", r1 / "scores.tsv", "--manifest", r1 / "manifest.csv", "--out", tmp_path / "ev") == 0


def test_simulate_default_config(tmp_path):
    assert run("simulate", "--out", tmp_path / "d") == 0
    lines = (tmp_path / "d" / "drift.csv").read_text().splitlines()
    assert lines[0] == "inclusion_fraction,threshold,eer,distance_to_reference"
    assert lines[-1].startswith("omitted,")


def test_module_entry_point(fixture_files):
    proc = subprocess.run(
        [sys.executable, "-m", "crosseval", *map(str, eval_args(fixture_files, fixture_files / "mod"))],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert (fixture_files / "mod" / "pooled.md").exists()

"""Command line behaviour: exit codes, output formats, artifact files.

Everything runs in-process through cli.main so capsys sees the output and
no PATH games are needed.  The solver-backed runs use tiny problems (a few
unrolling steps each) to keep the spawn count low.
"""

from __future__ import annotations

import csv
import json

import pytest

from accelmc.cex import CexError
from accelmc.cli import (EXIT_INTERNAL, EXIT_SAFE, EXIT_UNKNOWN, EXIT_UNSAFE,
                         EXIT_USAGE, main)

SAFE1 = "tests/data/safe1.sp"

TINY = """\
(vars (x Int))
(init (= x 0))
(trans (= x' (+ x 1)))
(err (>= x {err}))
"""


def _tiny(tmp_path, err, name="tiny.sp"):
    p = tmp_path / name
    p.write_text(TINY.format(err=err))
    return str(p)


def test_check_safe_exit_and_text(capsys):
    rc = main(["check", SAFE1, "--max-bound", "10"])
    out = capsys.readouterr().out
    assert rc == EXIT_SAFE
    assert "safe1: safe (bound: 3)" in out
    assert "engine: abmc-b, learned: 1," in out


def test_check_unsafe_text_with_accelerated_step(tmp_path, capsys):
    rc = main(["check", _tiny(tmp_path, 5)])
    out = capsys.readouterr().out
    assert rc == EXIT_UNSAFE
    # the loop body is minted after the second extension, so the jump covers
    # the last three concrete steps
    assert "tiny: unsafe (counterexample steps: 3)" in out
    assert "--[accelerated #" in out
    assert "n=3" in out
    assert "expanded counterexample: 6 states, validated" in out
    # small expansions are listed in full
    assert "  5: x=5" in out


def test_check_no_validate_skips_expansion(tmp_path, capsys):
    rc = main(["check", _tiny(tmp_path, 5), "--no-validate"])
    out = capsys.readouterr().out
    assert rc == EXIT_UNSAFE
    assert "expanded" not in out


def test_check_unknown_on_bound_exhaustion(capsys):
    rc = main(["check", SAFE1, "--engine", "bmc", "--max-bound", "2"])
    out = capsys.readouterr().out
    assert rc == EXIT_UNKNOWN
    assert "safe1: unknown (bound: 2)" in out
    assert "reason: bound-exhausted" in out


def test_check_json_output(tmp_path, capsys):
    rc = main(["check", _tiny(tmp_path, 2), "--engine", "bmc",
               "--format", "json"])
    out = capsys.readouterr().out
    assert rc == EXIT_UNSAFE
    doc = json.loads(out)
    assert doc["problem"] == "tiny"
    assert doc["file"].endswith("tiny.sp")
    assert doc["verdict"] == "unsafe"
    assert doc["engine"] == "bmc"
    assert doc["bound"] == 2
    assert [s["x"] for s in doc["cex"]["states"]] == [0, 1, 2]
    assert {"learned", "queries", "wall_ms"} <= doc.keys()


def test_check_artifact_files(tmp_path, capsys):
    smt2 = tmp_path / "smt2"
    dots = tmp_path / "dot"
    rc = main(["check", _tiny(tmp_path, 5),
               "--dump-smt2", str(smt2), "--dot", str(dots)])
    capsys.readouterr()
    assert rc == EXIT_UNSAFE
    transcript = (smt2 / "tiny.abmc-b.smt2").read_text()
    assert "(declare-const" in transcript
    assert "(check-sat)" in transcript
    dot = (dots / "tiny.abmc-b.dot").read_text()
    assert dot.startswith("digraph")


def test_check_parse_error_reports_position(tmp_path, capsys):
    p = tmp_path / "bad.sp"
    p.write_text("(vars (x Int))\n(init (= x' 0))\n(trans true)\n(err true)\n")
    rc = main(["check", str(p)])
    err = capsys.readouterr().err
    assert rc == EXIT_USAGE
    assert err.startswith(f"error: {p}:2:")
    assert "post variable" in err


def test_check_missing_file(tmp_path, capsys):
    rc = main(["check", str(tmp_path / "nope.sp")])
    err = capsys.readouterr().err
    assert rc == EXIT_USAGE
    assert err.startswith("error:")


def test_check_bad_engine_is_argparse_usage(capsys):
    with pytest.raises(SystemExit) as ei:
        main(["check", SAFE1, "--engine", "cegar"])
    capsys.readouterr()
    assert ei.value.code == 2


def test_value_error_maps_to_usage(monkeypatch, capsys):
    monkeypatch.setattr("accelmc.cli.load_problem",
                        lambda path: (_ for _ in ()).throw(ValueError("nope")))
    rc = main(["check", SAFE1])
    err = capsys.readouterr().err
    assert rc == EXIT_USAGE
    assert err == "error: nope\n"


def test_cex_error_maps_to_internal(monkeypatch, capsys):
    def boom(*a, **k):
        raise CexError("state 3 breaks the transition")
    monkeypatch.setattr("accelmc.cli.run", boom)
    rc = main(["check", SAFE1])
    err = capsys.readouterr().err
    assert rc == EXIT_INTERNAL
    assert "internal error: counterexample failed validation: state 3" in err


def test_crash_maps_to_internal_with_traceback(monkeypatch, capsys):
    def boom(*a, **k):
        raise RuntimeError("wat")
    monkeypatch.setattr("accelmc.cli.run", boom)
    rc = main(["check", SAFE1])
    err = capsys.readouterr().err
    assert rc == EXIT_INTERNAL
    assert "Traceback" in err and "wat" in err


def test_dump_is_idempotent(tmp_path, capsys):
    rc = main(["dump", SAFE1])
    first = capsys.readouterr().out
    assert rc == 0
    assert first.startswith("(vars (x Int))\n")
    p = tmp_path / "again.sp"
    p.write_text(first)
    assert main(["dump", str(p)]) == 0
    assert capsys.readouterr().out == first


def test_bench_writes_csv_and_scatter(tmp_path, capsys):
    d = tmp_path / "corpus"
    d.mkdir()
    _tiny(d, 2, "a.sp")
    _tiny(d, 3, "b.sp")
    out = tmp_path / "results.csv"
    rc = main(["bench", str(d), "--engines", "bmc,abmc-b",
               "--max-bound", "10", "--jobs", "2", "--out", str(out)])
    text = capsys.readouterr().out
    assert rc == 0
    assert f"wrote {out}" in text
    assert "engine      safe  unsafe  unknown" in text

    rows = list(csv.reader(out.open()))
    assert rows[0] == ["file", "engine", "verdict", "bound",
                       "learned", "wall_ms", "cex_len"]
    assert [(r[0], r[1], r[2]) for r in rows[1:]] == [
        ("a.sp", "bmc", "unsafe"), ("a.sp", "abmc-b", "unsafe"),
        ("b.sp", "bmc", "unsafe"), ("b.sp", "abmc-b", "unsafe")]
    by_key = {(r[0], r[1]): r for r in rows[1:]}
    assert by_key[("a.sp", "bmc")][3] == "2"
    assert by_key[("b.sp", "bmc")][3] == "3"

    scatter = list(csv.reader((tmp_path / "results_scatter.csv").open()))
    assert scatter[0] == ["file", "bmc_bound", "abmc_b_bound"]
    assert [r[0] for r in scatter[1:]] == ["a.sp", "b.sp"]
    assert scatter[1][1] == "2" and scatter[2][1] == "3"
    for _, bmc_b, ab_b in scatter[1:]:
        assert int(ab_b) <= int(bmc_b)


def test_bench_rejects_unknown_engine(tmp_path, capsys):
    d = tmp_path / "corpus"
    d.mkdir()
    _tiny(d, 2, "a.sp")
    rc = main(["bench", str(d), "--engines", "bmc,cegar"])
    err = capsys.readouterr().err
    assert rc == EXIT_USAGE
    assert err.startswith("error:")


def test_bench_rejects_empty_dir(tmp_path, capsys):
    d = tmp_path / "corpus"
    d.mkdir()
    rc = main(["bench", str(d)])
    err = capsys.readouterr().err
    assert rc == EXIT_USAGE
    assert "no .sp or .smt2 files" in err


def test_bench_absorbs_broken_instances(tmp_path, capsys):
    d = tmp_path / "corpus"
    d.mkdir()
    (d / "broken.sp").write_text("(vars (x Int)\n")
    rc = main(["bench", str(d), "--engines", "bmc", "--out",
               str(tmp_path / "r.csv")])
    capsys.readouterr()
    assert rc == 0
    rows = list(csv.reader((tmp_path / "r.csv").open()))
    assert rows[1][:3] == ["broken.sp", "bmc", "unknown"]

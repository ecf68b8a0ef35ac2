import csv
import io
import json
import math

import pytest

from heckelab import cli
from heckelab.dirichlet import CharacterGroup

from .oracles import brute_fixed_moment


def run(capsys, *argv):
    code = cli.run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_eigenvalues(capsys, tmp_path):
    code, out, _ = run(capsys, "--cache-dir", str(tmp_path), "eigenvalues", "--n", "10")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "n,tau,lambda"
    assert lines[1] == "1,1,1.0"
    assert lines[2].startswith("2,-24,-0.5303")
    assert len(lines) == 11


def test_global_flags_after_subcommand(capsys, tmp_path):
    code, out, _ = run(capsys, "eigenvalues", "--n", "3", "--format", "json", "--cache-dir", str(tmp_path))
    assert code == 0
    data = json.loads(out)
    assert data[1] == {"n": 2, "tau": -24, "lambda": pytest.approx(-24 / 2**5.5)}


def test_usage_error_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.run(["eigenvalues"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        cli.run(["no-such-command"])
    assert exc.value.code == 2


def test_precondition_error_exits_1(capsys):
    code, out, err = run(capsys, "moments-fixed", "--q", "10", "--y", "11")
    assert code == 1 and out == ""
    assert err.startswith("heckelab: error:")
    code, _, err = run(capsys, "majorant", "--q", "2")
    assert code == 1 and "modulus" in err
    code, _, err = run(capsys, "--threads", "0", "characters", "--q", "5")
    assert code == 1 and "thread_count" in err


def test_characters(capsys):
    code, out, _ = run(capsys, "characters", "--q", "8")
    assert code == 0
    r = rows(out)
    assert [x["label"] for x in r] == ["8:0.0", "8:0.1", "8:1.0", "8:1.1"]
    assert sorted(x["conductor"] for x in r) == ["1", "4", "8", "8"]
    prim = [x for x in r if x["primitive"] == "1"]
    assert all(abs(float(x["gauss_abs"]) - math.sqrt(8)) < 1e-12 for x in prim)
    code, out, _ = run(capsys, "characters", "--q", "8", "--primitive-only")
    assert len(rows(out)) == 2


def test_moments_fixed_matches_oracle(capsys, table):
    code, out, _ = run(capsys, "moments-fixed", "--q", "5", "--y", "3", "--m", "1")
    assert code == 0
    (r,) = rows(out)
    ref = brute_fixed_moment(5, 3, 1, table.lam, CharacterGroup(5))
    assert float(r["measured"]) == pytest.approx(ref, rel=1e-12)
    assert r["count"] == "3" and r["U"] == ""
    assert tuple(r) == cli.moments.CSV_COLUMNS


def test_moments_quad_smoothed(capsys):
    code, out, _ = run(capsys, "moments-quad", "--X", "1000", "--m", "1,2", "--smooth")
    assert code == 0
    r = rows(out)
    assert [x["m"] for x in r] == ["1.0", "2.0"]
    assert all(float(x["U"]) == 4.0 for x in r)


def test_verify_prsum_even(capsys):
    code, out, _ = run(capsys, "verify-prsum", "--x", "1000", "--n", "2,9")
    assert code == 0
    r = rows(out)
    assert float(r[0]["lhs"]) == 0.0
    assert float(r[1]["main_term"]) > 0


def test_verify_cancel(capsys):
    code, out, _ = run(capsys, "verify-cancel", "--q", "5", "--x-grid", "1000,10000")
    assert code == 0
    r = rows(out)
    assert len(r) == 2 and all(float(x["ratio"]) < 1 for x in r)
    code, out, _ = run(capsys, "verify-cancel", "--q", "7", "--chi", "7:1", "--x", "100")
    assert code == 0 and rows(out)[0]["label"] == "7:1"


def test_lvalues_and_majorant(capsys):
    code, out, _ = run(capsys, "lvalues", "--q", "1")
    assert code == 0
    (r,) = rows(out)
    assert float(r["re"]) == pytest.approx(0.7921228386, abs=1e-9)
    code, out, _ = run(capsys, "majorant", "--q", "11", "--with-lvalues")
    assert code == 0
    r = rows(out)
    assert len(r) == 9
    assert all(float(x["log_term"]) == pytest.approx(4.0) for x in r)
    assert all(x["log_abs_L"] != "" for x in r)


def test_fit_roundtrip(capsys, tmp_path):
    paths = []
    for q in (101, 211, 401):
        p = tmp_path / f"m{q}.csv"
        assert run(capsys, "--out", str(p), "moments-fixed", "--q", str(q), "--m", "2")[0] == 0
        paths.append(str(p))
    code, out, _ = run(capsys, "fit", *paths)
    assert code == 0
    (r,) = rows(out)
    assert r["family"] == "fixed_mod" and r["points"] == "3"
    assert math.isfinite(float(r["slope"]))
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b\n1,2\n")
    assert run(capsys, "fit", str(bad), *paths)[0] == 1


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\noutput_format = json\nthread_count=2\n")
    code, out, _ = run(capsys, "--config", str(cfg), "characters", "--q", "5")
    assert code == 0 and json.loads(out)[0]["label"] == "5:0"
    # flags override the file
    code, out, _ = run(capsys, "--config", str(cfg), "--format", "csv", "characters", "--q", "5")
    assert out.startswith("label,")
    cfg.write_text("colour = red\n")
    assert run(capsys, "--config", str(cfg), "characters", "--q", "5")[0] == 1
    cfg.write_text("just words\n")
    assert run(capsys, "--config", str(cfg), "characters", "--q", "5")[0] == 1


def test_byte_identical_across_threads(capsys):
    outs = set()
    for t in ("1", "4", "8"):
        code, out, _ = run(capsys, "--threads", t, "moments-fixed", "--q", "809", "--m", "1,3")
        assert code == 0
        code, out2, _ = run(capsys, "--threads", t, "moments-quad", "--X", "3000", "--m", "2", "--smooth")
        outs.add(out + out2)
    assert len(outs) == 1

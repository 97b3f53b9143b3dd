import csv
import json

import numpy as np
import pytest

from gcas.cli import main
from gcas.io import read_complex_csv, read_manifest, read_zq_csv, write_complex_csv


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_construct_then_verify(tmp_path, capsys):
    d = tmp_path / "g"
    code, _, _ = run(capsys, "construct", "--theorem", "1", "--q", 2, "--n", 2, "--m", 6, "--k", 1,
                     "--v", 0, "--out", d)
    assert code == 0
    man = read_manifest(d)
    assert (man["N"], man["L1"], man["L2"]) == (4, 4, 33)
    assert man["prng"] == "numpy.random.PCG64" and man["seed"] == 0
    code, out, _ = run(capsys, "verify", d)
    rep = json.loads(out)
    assert code == 0 and rep["is_gcas"] and rep["peak"] == 528 and rep["max_offside"] == 0


def test_corrupted_file_fails(tmp_path, capsys):
    d = tmp_path / "g"
    run(capsys, "construct", "--theorem", "1", "--n", 2, "--m", 6, "--k", 1, "--v", 0, "--out", d)
    files = [d / f"member_{j}.csv" for j in range(4)]
    a = read_zq_csv(files[2], 2).values.copy()
    a[1, 7] ^= 1
    np.savetxt(files[2], a, fmt="%d", delimiter=",")
    code, out, _ = run(capsys, "verify", *files, "--q", 2)
    rep = json.loads(out)
    assert code == 1 and not rep["is_gcas"] and rep["max_offside"] > 0 and rep["offending_shift"]


def test_violation_exit_2(tmp_path, capsys):
    code, _, err = run(capsys, "construct", "--theorem", "2", "--n", 2, "--m", 5, "--k", 3, "--v", 0,
                       "--pi1", "1,2,4,3,5", "--out", tmp_path)
    assert code == 2
    assert "C2 violated at alpha=1" in err


@pytest.mark.parametrize("argv", [
    ["construct", "--n", "2"],
    ["construct", "--theorem", "1", "--baseline", "zc"],
    ["construct", "--theorem", "1", "--n", "2", "--m", "4"],
    ["construct", "--theorem", "1", "--n", "2", "--m", "4", "--k", "1", "--v", "0", "--pi", "a,b"],
    ["verify", "nope.csv", "--q", "2"],
    ["ber"],
    ["nosuchcommand"],
])
def test_usage_errors(tmp_path, capsys, argv):
    code = main(argv + ["--out", str(tmp_path / "o")] if argv[0] in ("construct", "ber") else argv)
    assert code == 2


def test_verify_needs_q(tmp_path, capsys):
    f = tmp_path / "a.csv"
    f.write_text("0,1\n1,0\n")
    assert run(capsys, "verify", f)[0] == 2
    assert run(capsys, "verify", f, "--q", 2)[0] == 1


def test_complex_roundtrip(tmp_path, capsys):
    w = np.exp(2j * np.pi * np.random.default_rng(0).random((2, 3)))
    write_complex_csv(tmp_path / "w.csv", w)
    assert np.array_equal(read_complex_csv(tmp_path / "w.csv"), w)
    code, out, _ = run(capsys, "verify", tmp_path / "w.csv", "--complex")
    assert code == 1


def test_lemma3_and_gbf(tmp_path, capsys):
    assert run(capsys, "construct", "--theorem", "lemma3", "--n", 2, "--m", 4, "--v", 1, "--out", tmp_path / "l")[0] == 0
    assert json.loads(run(capsys, "verify", tmp_path / "l")[1])["peak"] == 4 * 4 * 10
    assert run(capsys, "construct", "--gbf", "1*x1*x2 + y1", "--n", 2, "--m", 3, "--length", 6,
               "--out", tmp_path / "f")[0] == 0
    assert read_zq_csv(tmp_path / "f" / "member_0.csv", 2).values[:, 3].tolist() == [1, 0, 1, 0]


def test_length_shortcut(tmp_path, capsys):
    assert run(capsys, "construct", "--theorem", "1", "--n", 2, "--length", 21,
               "--out", tmp_path)[0] == 0
    assert read_manifest(tmp_path)["L2"] == 21


def test_baseline_and_pattern(tmp_path, capsys):
    z = tmp_path / "zc"
    assert run(capsys, "construct", "--baseline", "zc", "--L1", 4, "--L2", 33, "--N", 4, "--out", z)[0] == 0
    p = tmp_path / "p"
    code, out, _ = run(capsys, "pattern", "--from", z, "--out", p)
    assert code == 0 and json.loads(out)["max_over_min"] > 10
    rows = list(csv.reader((p / "pattern.csv").open()))
    assert rows[0] == ["phi", "theta", "E"] and len(rows) == 1 + 64 * 128
    assert set(read_manifest(p)["artifacts"]) == {"pattern.csv", "flatness.json"}


def test_ber_schemes(tmp_path, capsys):
    g = tmp_path / "g"
    r = tmp_path / "r"
    run(capsys, "construct", "--theorem", "1", "--n", 2, "--m", 3, "--k", 1, "--v", 0, "--out", g)
    run(capsys, "construct", "--baseline", "random", "--L1", 4, "--L2", 5, "--N", 4, "--seed", 4, "--out", r)
    code, out, _ = run(capsys, "ber", "--scheme", f"gcas={g}", "--scheme", f"rand={r}", "--ebn0", "0,3",
                       "--max-bits", 4096, "--out", tmp_path / "b")
    assert code == 0
    rows = list(csv.DictReader((tmp_path / "b" / "ber.csv").open()))
    assert [r["scheme"] for r in rows] == ["gcas", "gcas", "rand", "rand"]
    assert all(int(r["errors"]) <= int(r["bits"]) for r in rows)
    man = read_manifest(tmp_path / "b")
    assert man["config"]["prng"] == "numpy.random.PCG64"


def test_ber_bad_scheme(tmp_path, capsys):
    assert run(capsys, "ber", "--scheme", "x", "--out", tmp_path)[0] == 2


def test_repro_byte_identical(tmp_path, capsys):
    common = ["--max-bits", 2048, "--ebn0", "0,5", "--n-phi", 4, "--n-theta", 8]
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(capsys, "repro", "--out", a, *common)[0] == 0
    assert run(capsys, "repro", "--out", b, "--threads", 2, *common)[0] == 0
    for d in ("pattern_4x33", "pattern_4x21"):
        for s in ("gcas", "zc", "random"):
            assert (a / d / s / "pattern.csv").exists()
    for name in ("ber_4x33/ber.csv", "ber_4x21/ber.csv", "pattern_4x33/zc/pattern.csv", "gcas_8x4x21/member_7.csv",
                 "summary.json"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
    summary = json.loads((a / "summary.json").read_text())
    assert summary["4x4x33"]["gcas"]["peak"] == 528
    assert summary["8x4x21"]["table_regression"]["printed_is_gcas"]


def test_global_seed_position(tmp_path, capsys):
    run(capsys, "construct", "--baseline", "random", "--L1", 2, "--L2", 2, "--N", 1, "--seed", 9, "--out", tmp_path)
    assert read_manifest(tmp_path)["seed"] == 9

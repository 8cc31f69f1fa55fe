import json
import subprocess
import sys

import pytest

from l2inv.cli import RunConfig, UsageError, main, parse_bound
from l2inv.complexes import Presentation, torus_complex
from l2inv.groups import FreeAbelianGroup
from l2inv.ring import GroupRingMatrix, monomial, zero_matrix
from l2inv.serialize import complex_to_json, dumps, matrix_to_json, presentation_to_json

Z = FreeAbelianGroup(1)


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(dumps(obj), encoding="utf-8")
    return str(p)


@pytest.fixture
def tminus1(tmp_path):
    t = monomial(Z, (1,))
    return write(tmp_path, "tminus1.json", matrix_to_json(GroupRingMatrix(Z, 1, 1, [t - 1])))


def test_dim_ker_abelian(tminus1, capsys):
    code, out, _ = run(["dim-ker", "--matrix", tminus1, "--backend", "abelian"], capsys)
    assert code == 0
    js = json.loads(out)
    assert js["value"] == "0" and js["backend"] == "abelian-generic"


def test_dim_ker_zero(tmp_path, capsys):
    path = write(tmp_path, "zero1.json", matrix_to_json(zero_matrix(Z, 1, 1)))
    code, out, _ = run(["dim-ker", "--matrix", path, "--backend", "abelian"], capsys)
    assert code == 0 and json.loads(out)["value"] == "1"


def test_dim_ker_tower_file_convention(tminus1, tmp_path, capsys):
    code, out, _ = run(["dim-ker", "--matrix", tminus1, "--tower",
                        str(tmp_path / "cyclic_2_256.json")], capsys)
    assert code == 0
    seq = [lv["value"] for lv in json.loads(out)["certificate"]["sequence"]]
    assert seq == [f"1/{2 ** k}" for k in range(1, 9)]


def test_dim_ker_sampled_and_quotient(tminus1, capsys):
    code, out, _ = run(["dim-ker", "--matrix", tminus1, "--backend", "sampled",
                        "--samples", "500"], capsys)
    assert code == 0 and set(json.loads(out)["value"]) == {"lo", "hi"}
    code, out, _ = run(["dim-ker", "--matrix", tminus1, "--quotient", "cyclic:6"], capsys)
    assert code == 0 and json.loads(out)["value"] == "1/6"


def test_dim_ker_errors(tminus1, tmp_path, capsys):
    code, _, err = run(["dim-ker", "--matrix", tminus1, "--backend", "finite"], capsys)
    assert code == 3 and "finite" in err
    code, _, err = run(["dim-ker", "--matrix", str(tmp_path / "missing.json")], capsys)
    assert code == 2 and "matrix" in err
    bad = tmp_path / "bad.json"
    bad.write_text('{"group": {"type": "free_abelian", "rank": 1}, "rows": 1, "cols": 1, '
                   '"entries": [[{"g": [1], "c": {"num": "x"}}]]}')
    code, _, err = run(["dim-ker", "--matrix", str(bad)], capsys)
    assert code == 2 and "entries[0][0].c.num" in err
    code, _, _ = run(["dim-ker", "--matrix", tminus1, "--backend", "abelian",
                      "--tower", "cyclic:2:8"], capsys)
    assert code == 2


def test_betti_examples(capsys):
    code, out, _ = run(["betti", "--complex", "torus:2", "--backend", "abelian"], capsys)
    js = json.loads(out)
    assert code == 0 and js["betti"] == ["0", "0", "0"]
    assert js["euler_from_betti"] == "0" == js["euler_from_ranks"]
    assert all(c["ok"] for c in js["checks"])
    code, out, _ = run(["betti", "--complex", "point"], capsys)
    assert code == 0 and json.loads(out)["betti"] == ["1"]
    code, out, _ = run(["betti", "--complex", "torus:1", "--quotient", "cyclic:8",
                        "--backend", "finite"], capsys)
    assert code == 0 and json.loads(out)["betti"] == ["1/8", "1/8"]


def test_betti_duality_and_tower(capsys):
    code, out, _ = run(["betti", "--complex", "torus:3", "--duality", "3"], capsys)
    js = json.loads(out)
    assert code == 0 and js["flags"]["duality_dim"] == 3
    assert {c["check"] for c in js["checks"]} == {"euler", "b0", "poincare"}
    code, out, _ = run(["betti", "--complex", "wedge:2", "--tower", "cyclic:2:64"], capsys)
    assert code == 0 and json.loads(out)["betti"] == ["1/64", "65/64"]
    code, _, _ = run(["betti", "--complex", "wedge:2"], capsys)
    assert code == 3
    code, _, _ = run(["betti", "--complex", "klein:2"], capsys)
    assert code == 2


def test_betti_from_files(tmp_path, capsys):
    P = Presentation(2, [(1, 2, -1, -2)])
    path = write(tmp_path, "t2.json", presentation_to_json(P))
    code, out, _ = run(["betti", "--complex", f"presentation:{path}"], capsys)
    assert code == 0 and json.loads(out)["betti"] == ["0", "0", "0"]
    cpath = write(tmp_path, "c.json", complex_to_json(torus_complex(2)))
    code, out, _ = run(["betti", "--complex", cpath, "--quotient", "trivial"], capsys)
    assert code == 0 and json.loads(out)["betti"] == ["1", "2", "1"]


def test_validate_complex(tmp_path, capsys):
    code, out, _ = run(["validate-complex", "--complex", "torus:3"], capsys)
    assert code == 0 and json.loads(out) == {"ok": True}
    obj = complex_to_json(torus_complex(2))
    obj["boundaries"][1]["entries"][0] = [{"g": [0, 0], "c": {"num": "1", "den": "1"}}]
    path = write(tmp_path, "broken.json", obj)
    code, out, _ = run(["validate-complex", "--complex", path], capsys)
    js = json.loads(out)
    assert code == 1 and js["ok"] is False and js["degree"] == 2


def test_trace(tminus1, capsys):
    code, out, _ = run(["trace", "--matrix", tminus1], capsys)
    assert code == 0 and json.loads(out)["trace_gamma"] == "-1"
    code, out, _ = run(["trace", "--matrix", tminus1, "--power", "2", "--quotient", "cyclic:5"],
                       capsys)
    js = json.loads(out)
    assert code == 0 and js["equal"] and js["free_trace"] == "1"
    code, out, _ = run(["trace", "--matrix", tminus1, "--power", "2", "--quotient", "cyclic:2"],
                       capsys)
    js = json.loads(out)
    assert code == 0 and not js["equal"] and not js["injective"]
    code, _, _ = run(["trace", "--matrix", tminus1, "--power", "2"], capsys)
    assert code == 2


def test_alpha(capsys):
    code, out, _ = run(["alpha", "--r", "2", "--s", "2", "--bound", "1e2"], capsys)
    js = json.loads(out)
    assert code == 0 and js["certified"] and js["min_denominator_found"] == "exceeds bound"
    code, out, _ = run(["alpha", "--r", "2", "--s", "2", "--digits", "60"], capsys)
    assert code == 0 and len(json.loads(out)["decimal"].split(".")[1]) == 60
    code, _, err = run(["alpha", "--r", "1", "--s", "2"], capsys)
    assert code == 2 and "r=1" in err


def test_parse_bound():
    assert parse_bound("1e100") == 10 ** 100
    assert parse_bound("10**100") == 10 ** 100
    assert parse_bound("250") == 250
    for bad in ("1.5", "0", "abc"):
        with pytest.raises(UsageError):
            parse_bound(bad)


def test_verify_single_property(capsys):
    code, out, _ = run(["verify", "--suite", "algebra"], capsys)
    assert code == 0 and out.startswith("PASS algebra.")
    assert out.rstrip().splitlines()[-1].startswith("OK")


def test_usage_errors(capsys):
    assert run(["frobnicate"], capsys)[0] == 2
    assert run(["betti"], capsys)[0] == 2
    assert run(["--help"], capsys)[0] == 0
    with pytest.raises(UsageError):
        RunConfig("betti", tower="x", quotient="y").check()


def test_env_seed(monkeypatch, tminus1, capsys):
    monkeypatch.setenv("L2INV_SEED", "11")
    code, out, _ = run(["dim-ker", "--matrix", tminus1, "--backend", "sampled",
                        "--samples", "64"], capsys)
    assert code == 0 and json.loads(out)["certificate"]["seed"] == 11
    monkeypatch.setenv("L2INV_SEED", "eleven")
    assert run(["dim-ker", "--matrix", tminus1], capsys)[0] == 2


def test_output_is_deterministic(tminus1, tmp_path):
    outs = []
    for k in range(2):
        target = tmp_path / f"out{k}.json"
        args = ["dim-ker", "--matrix", tminus1, "--backend", "sampled", "--samples", "300",
                "--seed", "5", "--jobs", str(k + 1), "-o", str(target)]
        assert main(args) == 0
        outs.append(target.read_bytes())
    assert outs[0] == outs[1]


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "l2inv", "betti", "--complex", "circle"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["betti"] == ["0", "0"]

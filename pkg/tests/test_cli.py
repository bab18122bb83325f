import json
import math
import subprocess
import sys

import numpy as np
import pytest

from threespectra.cli import main


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


def test_forward_example(tmp_path, capsys):
    m = write(tmp_path / "m.json", {"b": [0, 0], "a": [1]})
    code, out, _ = run(["forward", m, "--site", "1"], capsys)
    assert code == 0
    d = json.loads(out)
    assert d["N"] == 2 and d["site"] == 1
    assert np.allclose(d["lambda"], [-1, 1], atol=1e-15)
    assert d["mu"] == [{"value": 0.0, "sigma": 1.0}]
    assert list(d) == ["N", "site", "lambda", "mu"]


def test_forward_scalar(tmp_path, capsys):
    m = write(tmp_path / "m.json", {"b": [5], "a": []})
    code, out, _ = run(["forward", m, "--site", "1"], capsys)
    assert code == 0
    assert json.loads(out) == {"N": 1, "site": 1, "lambda": [5.0], "mu": []}


@pytest.mark.parametrize(
    "obj",
    [{"b": [0, 0], "a": [-1]}, {"b": [0, 0]}, {"b": [0, "x"], "a": [1]}, [1, 2], {"b": [0, 0], "a": [1, 1]}],
)
def test_forward_malformed(tmp_path, capsys, obj):
    code, out, err = run(["forward", write(tmp_path / "m.json", obj), "--site", "1"], capsys)
    assert code == 2 and out == "" and err


def test_unreadable_and_bad_json(tmp_path, capsys):
    assert run(["forward", str(tmp_path / "missing.json"), "--site", "1"], capsys)[0] == 2
    (tmp_path / "bad.json").write_text("{not json")
    assert run(["inverse", str(tmp_path / "bad.json")], capsys)[0] == 2


def test_bad_site(tmp_path, capsys):
    m = write(tmp_path / "m.json", {"b": [0, 0], "a": [1]})
    for site in ("0", "3"):
        assert run(["forward", m, "--site", site], capsys)[0] == 3
    s = write(tmp_path / "s.json", {"N": 2, "site": 5, "lambda": [-1, 1], "mu": [{"value": 0, "sigma": 1}]})
    assert run(["inverse", s], capsys)[0] == 3
    assert run(["roundtrip", "--size", "3", "--site", "4", "--trials", "1"], capsys)[0] == 3


def test_inverse_examples(tmp_path, capsys):
    r2 = math.sqrt(2)
    s = write(tmp_path / "s.json", {"N": 3, "site": 2, "lambda": [-r2, 0, r2],
                                    "mu": [{"value": 0, "sigma": 0}, {"value": 0, "sigma": 0}]})
    code, out, _ = run(["inverse", s], capsys)
    assert code == 0
    J = json.loads(out)
    assert np.allclose(J["b"], 0, atol=1e-14) and np.allclose(J["a"], 1, atol=1e-14)

    s = write(tmp_path / "s1.json", {"N": 1, "site": 1, "lambda": [7], "mu": []})
    code, out, _ = run(["inverse", s], capsys)
    assert code == 0 and json.loads(out) == {"b": [7.0], "a": []}


def test_inverse_invalid(tmp_path, capsys):
    s = write(tmp_path / "s.json", {"N": 2, "site": 1, "lambda": [-1, 1], "mu": [{"value": 1.5, "sigma": 1}]})
    code, out, err = run(["inverse", s], capsys)
    assert code == 4 and out == "" and "(b)" in err


def test_inverse_reconstruction_failure(tmp_path, capsys):
    # interlacing holds, but two left eigenvalues 1.5e-15 apart are one node
    # as far as the recurrence can tell
    s = write(tmp_path / "s.json", {"N": 4, "site": 4, "lambda": [-1, 0, 1e-15, 1],
                                    "mu": [{"value": -0.5, "sigma": -1}, {"value": 5e-16, "sigma": -1},
                                           {"value": 2e-15, "sigma": -1}]})
    code, out, err = run(["inverse", s], capsys)
    assert code == 5 and out == "" and "BreakdownError" in err


def test_validate(tmp_path, capsys):
    s = write(tmp_path / "s.json", {"N": 2, "site": 1, "lambda": [1, -1], "mu": [{"value": 0, "sigma": 1}]})
    code, out, _ = run(["validate", s], capsys)
    rep = json.loads(out)
    assert code == 4 and rep["ok"] is False
    assert rep["violations"][0]["rule"] == "a"
    s = write(tmp_path / "ok.json", {"N": 2, "site": 1, "lambda": [-1, 1], "mu": [{"value": 0, "sigma": 1}]})
    code, out, _ = run(["validate", s], capsys)
    assert code == 0 and json.loads(out) == {"ok": True, "violations": []}


def test_eig(tmp_path, capsys):
    m = write(tmp_path / "m.json", {"b": [0, 0, 0], "a": [1, 1]})
    code, out, _ = run(["eig", m], capsys)
    assert code == 0 and np.allclose(json.loads(out)["eigenvalues"], [-math.sqrt(2), 0, math.sqrt(2)])
    code, out, _ = run(["eig", m, "--anchor", "last"], capsys)
    assert np.allclose(json.loads(out)["weights"], [0.25, 0.5, 0.25])


def test_byte_identical_outputs(tmp_path, capsys):
    rng = np.random.default_rng(0)
    m = write(tmp_path / "m.json", {"b": rng.uniform(-1, 1, 12).tolist(), "a": rng.uniform(0.5, 2, 11).tolist()})
    outs = []
    for k in range(2):
        o = str(tmp_path / f"s{k}.json")
        assert run(["forward", m, "--site", "5", "-o", o], capsys)[0] == 0
        outs.append((tmp_path / f"s{k}.json").read_bytes())
    assert outs[0] == outs[1]
    r = [run(["roundtrip", "--size", "5", "--trials", "3", "--seed", "9"], capsys)[1] for _ in range(2)]
    assert r[0] == r[1]


def test_file_round_trip(tmp_path, capsys):
    rng = np.random.default_rng(1)
    for N in (1, 2, 7, 15):
        b, a = rng.uniform(-1, 1, N), rng.uniform(0.5, 2, N - 1)
        m = write(tmp_path / "m.json", {"b": b.tolist(), "a": a.tolist()})
        for site in range(1, N + 1):
            s, r = str(tmp_path / "s.json"), str(tmp_path / "r.json")
            for extra in ([], ["--extended"]):
                assert run(["forward", m, "--site", str(site), "-o", s] + extra, capsys)[0] == 0
                assert run(["inverse", s, "-o", r], capsys)[0] == 0
                J = json.loads((tmp_path / "r.json").read_text())
                assert np.allclose(J["b"], b, rtol=0, atol=1e-8) and np.allclose(J["a"], a, rtol=0, atol=1e-8)


def test_extended_format(tmp_path, capsys):
    m = write(tmp_path / "m.json", {"b": [0.1, 0.2, 0.3], "a": [1.0, 0.5]})
    _, out, _ = run(["forward", m, "--site", "2", "--extended"], capsys)
    d = json.loads(out)
    assert len(d["lambda_lo"]) == 3 and all("lo" in e for e in d["mu"])


def test_roundtrip_harness(capsys):
    code, out, _ = run(["roundtrip", "--trials", "20"], capsys)
    assert code == 0 and "summary: trials 20" in out
    code, out, _ = run(["roundtrip", "--size", "1", "--trials", "1"], capsys)
    assert code == 0 and "max 0.000e+00" in out
    code, out, err = run(["roundtrip", "--tol", "0", "--trials", "2"], capsys)
    assert code == 1 and "trial 0" in err and "FAIL" in out
    assert run(["roundtrip", "--size", "0"], capsys)[0] == 2
    code, out, _ = run(["roundtrip", "--size", "4", "--site", "2", "--trials", "3",
                        "--a-range", "1", "3", "--b-range", "0", "0.5"], capsys)
    assert code == 0


def test_stdin_and_module_entry(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "threespectra", "forward", "-", "--site", "1"],
        input='{"b": [0, 0], "a": [1]}', capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["mu"] == [{"value": 0.0, "sigma": 1.0}]

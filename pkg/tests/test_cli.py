import json
import os
import subprocess
import sys

import pytest

from rotor.cli import main
from rotor.symbolic_graph import WeightedGraph

from conftest import MAPS

FIXTURE = str(MAPS / "three_piece.json")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_validate_ok(capsys):
    code, out, _ = run(capsys, "validate", FIXTURE)
    assert code == 0 and "expansion: eventual" in out


def test_validate_strict_fails(capsys):
    code, _, err = run(capsys, "validate", FIXTURE, "--strict")
    assert code == 2 and "NotExpanding" in err


def test_invalid_map_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"breakpoints": ["0", "1/2", "1"], "lift_values": ["0", "1", "2"]}')
    assert run(capsys, "entropy", str(bad), "--alpha", "1/4")[0] == 2
    bad.write_text("{not json")
    assert run(capsys, "graph", str(bad))[0] == 2


def test_numeric_failure_exit_code(capsys):
    # the endpoint direction has no interior solution to build a measure from
    code, _, err = run(capsys, "measure", FIXTURE, "--alpha", "0")
    assert code == 3 and "boundary" in err


def test_graph_round_trip(capsys):
    code, out, _ = run(capsys, "graph", FIXTURE)
    doc = json.loads(out)
    g = WeightedGraph.from_weights(doc["weights"])
    assert g.K == ((None, 0, 0), (None, None, 0), (1, None, 0))
    assert doc["breakpoints"] == ["0", "1/3", "2/3", "1"]


def test_rotation_interval_and_genfun(capsys):
    assert run(capsys, "rotation-interval", FIXTURE)[1] == "lo,hi\n0,1/2\n"
    out = run(capsys, "genfun", FIXTURE, "--entry", "0,0")[1]
    assert out == "H = 1 - x - x^2*y - x^3*y\nN[0,0] = 1 - x\n"


def test_entropy_csv(capsys):
    out = run(capsys, "entropy", FIXTURE, "--alpha", "1/4")[1]
    assert out.splitlines() == ["alpha,x0,y0,entropy", "1/4,0.61803398875,0.61803398875,0.601514781325"]
    out = run(capsys, "entropy", FIXTURE, "--alpha", "3/4")[1]
    assert out.splitlines()[0] == "alpha,x0,y0,entropy,flag"
    assert out.splitlines()[1].endswith(",AlphaOutsideInterval")


def test_counts(capsys):
    out = run(capsys, "counts", FIXTURE, "--n", "3")[1]
    assert "3,2,0" in out.splitlines()
    out = run(capsys, "counts", FIXTURE, "--n", "4", "--alpha", "1/2", "--r", "1")[1]
    assert out.splitlines()[0] == "n,alpha,r,total"


def test_max_direction(capsys):
    out = run(capsys, "max-direction", FIXTURE)[1].splitlines()
    assert out[1].startswith("0.282191805324,")


def test_measure(capsys):
    code, out, _ = run(capsys, "measure", FIXTURE, "--alpha", "1/4")
    assert code == 0 and "l (first component 1): 1 " in out


def test_complexity(capsys):
    code, out, err = run(capsys, "complexity", FIXTURE, "--alpha", "1/4", "--r", "2", "--m", "2", "--k", "2")
    assert code == 0
    assert out.splitlines()[:2] == ["T,lower,observed,upper,rate", "2,2,10,30,1.1512925465"]
    assert "1/6" in err


def test_curve_written_atomically_and_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(capsys, "entropy-curve", FIXTURE, "--samples", "12", "--out", str(a))[0] == 0
    assert run(capsys, "entropy-curve", FIXTURE, "--samples", "12", "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert len(a.read_text().splitlines()) == 13
    assert sorted(os.listdir(tmp_path)) == ["a.csv", "b.csv"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "rotor", "rotation-interval", FIXTURE],
                          capture_output=True, text=True, check=True)
    assert proc.stdout == "lo,hi\n0,1/2\n"


def test_usage_error():
    with pytest.raises(SystemExit):
        main(["entropy", FIXTURE])

import json
import os

import numpy as np
import pytest

from conftest import random_parseval
from movingframes import demos, io
from movingframes.atlas import FrameField
from movingframes.cli import RunConfig, main, run
from movingframes.dilation import ComplementField, HolonomyReport, canonical_field, loop_holonomy
from movingframes.frames import DilationPair, Frame, dilate


def read(path):
    with open(path, "rb") as fh:
        return fh.read()


# --- serialization ----------------------------------------------------------

def test_frame_json_schema():
    F = Frame.from_columns([(1, 2), (3, 4), (5, 6)])
    d = io.frame_to_dict(F)
    assert d == {"n": 2, "k": 3, "columns": [[1, 2], [3, 4], [5, 6]]}
    assert np.array_equal(io.frame_from_dict(d).matrix, F.matrix)


def test_dilation_pair_round_trip(rng):
    pair = dilate(random_parseval(rng, 5, 3))
    d = json.loads(io.dumps(pair))
    assert set(d) == {"n", "k", "columns", "complement", "residual"}
    back = io.from_dict(d)
    assert isinstance(back, DilationPair)
    assert np.array_equal(back.stacked, pair.stacked) and back.residual == pair.residual


def test_empty_complement_round_trip():
    pair = dilate(Frame(np.eye(2)))
    back = io.from_dict(json.loads(io.dumps(pair)))
    assert back.complement.matrix.shape == (0, 2)


def test_field_json_and_csv_round_trip(tmp_path):
    field = demos.sphere_field(6)
    d = json.loads(io.dumps(field))
    assert set(d) == {"surface", "fiberDim", "frameSize", "samples"}
    assert set(d["samples"][0]) == {"uv", "frame"}
    back = io.from_dict(d)
    assert isinstance(back, FrameField) and back.surface == "sphere"
    for a, b in zip(field.frames, back.frames):
        assert np.array_equal(a.matrix, b.matrix)
    path = tmp_path / "f.csv"
    io.write_field_csv(field, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "u,v,x1,x2" and len(lines) == 1 + 3 * len(field)
    csv_back = io.read_field_csv(str(path))
    np.testing.assert_array_equal(csv_back.points, field.points)
    for a, b in zip(field.frames, csv_back.frames):
        assert np.array_equal(a.matrix, b.matrix)


def test_complement_field_and_holonomy_round_trip():
    loop = demos.mobius_loop(50)
    cf = canonical_field(loop)
    back = io.from_dict(json.loads(io.dumps(cf)))
    assert isinstance(back, ComplementField) and back.method == "canonical"
    assert back.max_stack_residual == cf.max_stack_residual
    rep = loop_holonomy(loop, demos.default_seed(loop))
    rback = io.from_dict(json.loads(io.dumps(rep)))
    assert isinstance(rback, HolonomyReport)
    assert rback.classification == "nontrivial" and np.array_equal(rback.holonomy, rep.holonomy)


# --- run() and RunConfig ----------------------------------------------------

def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig("demo")
    with pytest.raises(ValueError):
        RunConfig("verify", demo="sphere")
    with pytest.raises(ValueError):
        RunConfig("dimcheck", resolution=1)
    with pytest.raises(ValueError):
        RunConfig("dimcheck", tol=0.0)
    with pytest.raises(ValueError):
        RunConfig("dimcheck", seed=2**64)


def test_dimcheck_expected_values():
    status, report = run(RunConfig("dimcheck", pairs=[(3, 2), (4, 2), (5, 3)]))
    assert status == 0
    assert sorted({r["expected"] for r in report["rows"]}) == [3, 5, 9]
    assert all(r["measured"] == r["expected"] for r in report["rows"])


def test_dimcheck_bad_pair_is_input_error():
    status, report = run(RunConfig("dimcheck", pairs=[(2, 3)]))
    assert status == 2 and report["kind"] == "input"


def test_demo_sphere(tmp_path):
    out = tmp_path / "s"
    status, report = run(RunConfig("demo", demo="sphere", resolution=50, output=str(out)))
    assert status == 0
    assert report["maxFormulaDeviation"] <= 1e-10 and report["maxParsevalResidual"] <= 1e-8
    status, vrep = run(RunConfig("verify", input=str(out / "field.json")))
    assert status == 0 and vrep["worstResidual"] <= 1e-8 and len(vrep["samples"]) == 2500


def test_demo_mobius_holonomy(tmp_path):
    out = tmp_path / "m"
    status, report = run(RunConfig("demo", demo="mobius", holonomy=True, output=str(out)))
    assert status == 0
    assert report["holonomy"]["classification"] == "nontrivial"
    assert report["holonomy"]["det"] == pytest.approx(-1.0)
    status, hrep = run(RunConfig("holonomy", input=str(out / "loop.json")))
    assert status == 0 and hrep["classification"] == "nontrivial"


def test_demo_klein_and_obstruction(tmp_path):
    status, report = run(RunConfig("demo", demo="klein", resolution=20, output=str(tmp_path / "k")))
    assert status == 0 and set(report["identificationResidual"]) == {"mobius", "side"}
    status, report = run(RunConfig("demo", demo="obstruction", output=str(tmp_path / "o")))
    assert status == 0 and report["grid"] == [200, 100]


def test_exit_codes(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"n": 1, "k": 2, "columns": [[1.0], [1.0]]}))
    assert run(RunConfig("verify", input=str(bad)))[0] == 1
    status, rec = run(RunConfig("dilate", input=str(bad)))
    assert status == 1 and rec["error"] == "NotParseval"
    garbage = tmp_path / "garbage.json"
    garbage.write_text("{not json")
    assert run(RunConfig("verify", input=str(garbage)))[0] == 2
    assert run(RunConfig("verify"))[0] == 2
    c = np.sqrt(0.5)
    jump = FrameField("path", [(0, 0), (1, 0), (2, 0)], [Frame([[c, c]]), Frame([[c, -c]]), Frame([[c, c]])])
    jpath = tmp_path / "jump.json"
    io.write_json(jump, jpath)
    status, rec = run(RunConfig("dilate", input=str(jpath), method="continuation"))
    assert status == 3 and rec["error"] == "SingularSeed" and rec["index"] == 1


def test_every_written_file_is_rereadable(tmp_path):
    out = tmp_path / "d"
    for demo in ("sphere", "mobius", "obstruction"):
        run(RunConfig("demo", demo=demo, resolution=8, holonomy=True, output=str(out / demo)))
    comp = out / "comp.json"
    assert run(RunConfig("dilate", input=str(out / "sphere" / "field.json"), output=str(comp)))[0] == 0
    pair = tmp_path / "pair.json"
    frame = tmp_path / "frame.json"
    io.write_json(random_parseval(np.random.default_rng(3), 4, 2), frame)
    assert run(RunConfig("dilate", input=str(frame), output=str(pair)))[0] == 0
    dim = tmp_path / "dim.json"
    assert run(RunConfig("dimcheck", output=str(dim), samples=1))[0] == 0
    written = [p for p in tmp_path.rglob("*") if p.is_file() and p.suffix in (".json", ".csv")]
    assert len(written) >= 10
    for p in written:
        status, report = run(RunConfig("verify", input=str(p)))
        assert "error" not in report, (p, report)


def test_identical_config_gives_identical_bytes(tmp_path):
    for tag in ("a", "b"):
        run(RunConfig("demo", demo="mobius", holonomy=True, resolution=10, output=str(tmp_path / tag)))
        run(RunConfig("dimcheck", seed=7, samples=2, output=str(tmp_path / f"dim-{tag}.json")))
    for name in ("field.json", "field.csv", "report.json", "holonomy.json", "loop.json"):
        assert read(tmp_path / "a" / name) == read(tmp_path / "b" / name)
    assert read(tmp_path / "dim-a.json") == read(tmp_path / "dim-b.json")


def test_main_argv(tmp_path, capsys):
    assert main(["dimcheck", "--pairs", "3,2", "4,2", "5,3", "--samples", "1"]) == 0
    out = capsys.readouterr().out
    assert "expected" in out and out.count("\n") == 4
    assert main(["demo", "sphere", "--resolution", "5", "--output", str(tmp_path / "s")]) == 0
    assert main(["verify", "--input", str(tmp_path / "s" / "field.json")]) == 0
    assert "PASS" in capsys.readouterr().out
    assert main(["verify", "--input", str(tmp_path / "missing.json")]) == 2
    err = json.loads(capsys.readouterr().err)
    assert err["kind"] == "input"
    assert main(["demo"]) == 2

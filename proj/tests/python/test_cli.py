import csv
import io
import json
import pathlib
import subprocess

import pytest

import tgeom


def run(cli, *args, env=None):
    return subprocess.run([cli, *args], capture_output=True, text=True, env=env)


def write_spec(tmp_path, spec, name="world.json"):
    p = tmp_path / name
    p.write_text(json.dumps(spec))
    return str(p)


def test_tube_section_golden_row(cli, tmp_path, case1_spec):
    world = write_spec(tmp_path, case1_spec)
    out = tmp_path / "sec.csv"
    r = run(cli, "tube-section", "--world", world, "--y", "1,0,0,0", "--tau-min", "-1", "--tau-max", "2",
            "--tau-steps", "6", "--out", str(out))
    assert r.returncode == 0, r.stderr
    rows = list(csv.DictReader(io.StringIO(out.read_text())))
    assert list(rows[0].keys()) == ["tau", "r_inner", "r_outer", "n_roots"]
    row = next(x for x in rows if float(x["tau"]) == 0.5)
    r1, r2 = tgeom.case1_waist(0.1)
    assert float(row["r_inner"]) == pytest.approx(r1, rel=1e-9)
    assert float(row["r_outer"]) == pytest.approx(r2, rel=1e-9)
    assert round(float(row["r_inner"]), 6) == 0.075571
    assert round(float(row["r_outer"]), 6) == 9.924429
    assert row["n_roots"] == "2"


def test_output_is_byte_identical(cli, tmp_path, case1_spec):
    world = write_spec(tmp_path, case1_spec)
    outs = []
    for threads in ("1", "4"):
        out = tmp_path / f"sec{threads}.csv"
        assert run(cli, "tube-section", "--world", world, "--y", "1,0,0,0", "--threads", threads, "--out", str(out)).returncode == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_degeneration_report(cli, tmp_path, flat_spec):
    world = write_spec(tmp_path, flat_spec)
    r = run(cli, "check", "degeneration", "--world", world)
    assert r.returncode == 0
    rep = json.loads(r.stdout)
    assert set(rep["verdicts"].values()) == {"degenerate"}


def test_straight_gradient_line(cli, tmp_path, flat_spec):
    world = write_spec(tmp_path, flat_spec)
    for method in ("implicit", "ode"):
        r = run(cli, "gradient-line", "--world", world, "--kind", "f", "--from", "0,0,0", "--to", "1,2,3", "--steps", "8",
                "--method", method)
        assert r.returncode == 0, r.stderr
        rows = list(csv.DictReader(io.StringIO(r.stdout)))
        assert len(rows) == 9
        assert all(abs(float(x["residual"])) < 1e-10 for x in rows)


def test_exit_codes(cli, tmp_path, flat_spec):
    bad = tmp_path / "bad.json"
    bad.write_text('{"kind": ')
    r = run(cli, "check", "euclideaness", "--world", str(bad))
    assert r.returncode == 1
    assert json.loads(r.stderr)["error"]["type"] == "input"
    assert run(cli, "frobnicate").returncode == 1
    world = write_spec(tmp_path, flat_spec)
    assert run(cli, "coefficients", "--world", world, "--at", "0,0").returncode == 1
    # a spacelike first segment has no real length in a Minkowski world
    mink = write_spec(tmp_path, {"kind": "euclidean", "dim": 2, "metric": [1, -1]}, "mink.json")
    r = run(cli, "broken-tube", "--world", mink, "--mu", "0.1", "--steps", "2", "--seed-from", "0,0", "--seed-to", "0,1")
    assert r.returncode == 1
    # a strong cubic term bends the chain until the step solve loses its root
    a3 = [0.3 / (1 + i + k + l) for i in range(2) for k in range(2) for l in range(2)]
    strong = write_spec(tmp_path, {"kind": "cubic_a", "dim": 2, "metric": [1, -1], "a3": a3}, "strong.json")
    r = run(cli, "broken-tube", "--world", strong, "--kind", "f", "--mu", "0.1", "--steps", "10", "--seed-from", "0.1,0.05",
            "--seed-to", "1.1,0.35")
    assert r.returncode == 2
    assert json.loads(r.stderr)["error"]["type"] == "solver"


def test_reports_follow_schema(cli, tmp_path, case1_spec):
    jsonschema = pytest.importorskip("jsonschema")
    referencing = pytest.importorskip("referencing")

    docs = pathlib.Path(__file__).resolve().parents[2] / "docs"
    schemas = {p.name: json.loads(p.read_text()) for p in docs.glob("*.schema.json")}
    registry = referencing.Registry().with_resources(
        (name, referencing.Resource.from_contents(body)) for name, body in schemas.items()
    )

    def check(instance, name):
        jsonschema.Draft202012Validator(schemas[name], registry=registry).validate(instance)

    world = write_spec(tmp_path, case1_spec)
    check(case1_spec, "world_spec.schema.json")
    cases = [
        (["check", "degeneration"], "degeneracy_report.schema.json"),
        (["check", "euclideaness"], "degeneracy_report.schema.json"),
        (["coefficients", "--at", "0,0,0,0"], "coefficients.schema.json"),
        (["curvature", "--at", "0,0,0,0"], "curvature.schema.json"),
    ]
    for args, name in cases:
        r = run(cli, *args, "--world", world)
        assert r.returncode == 0, r.stderr
        check(json.loads(r.stdout), name)
    with pytest.raises(jsonschema.ValidationError):
        check({"kind": "euclidean", "dim": 2, "metric": [1, 1], "alpha": 0.1}, "world_spec.schema.json")

import json
import os

import numpy as np
import pytest

from canalgeom import cli, load_run_config, parse_patch
from canalgeom.errors import ConfigError

TUBE = {
    "patch": {
        "curve": {"kind": "quad_helix", "a": 1.0, "b": 1.0, "c": 2.0},
        "radius": {"kind": "constant", "value": 0.3},
        "n": 4,
    },
    "grid": [5, 5, 5],
    "seed": 11,
}

CANAL = {
    "patch": {
        "curve": {"kind": "circle", "radius": 3.0},
        "radius": {"kind": "poly_trig", "poly": [1.0],
                   "trig": [{"sin": 0.1, "omega": 1.0}]},
        "n": 4,
    },
    "grid": [5, 5, 5],
    "seed": 11,
}

TORUS3 = {
    "patch": {
        "curve": {"kind": "circle", "radius": 2.0, "dim": 3},
        "radius": {"kind": "constant", "value": 0.5},
        "n": 3,
    },
    "grid": [16, 16],
}


def write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def test_config_roundtrip(tmp_path):
    rc = load_run_config(write(tmp_path, "c.json", TUBE))
    assert rc.grid == (5, 5, 5) and rc.seed == 11
    assert rc.patch.n == 4


def test_config_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{ nope")
    with pytest.raises(ConfigError):
        load_run_config(str(bad))
    with pytest.raises(ConfigError):
        load_run_config({"patch": {"curve": {"kind": "nope"},
                                   "radius": {"kind": "constant", "value": 1}}})
    with pytest.raises(ConfigError):
        load_run_config(dict(TUBE, grid=[5, 5]))


def test_malformed_config_exit_2_no_output(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{ nope")
    out = tmp_path / "report.json"
    code = cli.main(["verify", "--config", str(bad), "--out", str(out)])
    assert code == 2
    assert not out.exists()


def test_verify_tube_passes(tmp_path):
    out = tmp_path / "v.json"
    code = cli.main(["verify", "--config", write(tmp_path, "c.json", TUBE),
                     "--out", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["schema"] == 1 and doc["pass"]
    names = {c["check"] for c in doc["checks"]}
    assert {"sphere_membership", "oracle_agreement_K", "weingarten_23",
            "linear_weingarten_closed"} <= names


def test_verify_canal_informational_pairs(tmp_path):
    out = tmp_path / "v.json"
    code = cli.main(["verify", "--config", write(tmp_path, "c.json", CANAL),
                     "--out", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    by = {c["check"]: c for c in doc["checks"]}
    assert by["weingarten_23"]["pass"]
    # the (v1, v2) and (v1, v3) relations genuinely fail for this canal,
    # but only informationally
    assert not by["weingarten_12"]["pass"] and by["weingarten_12"]["informational"]
    assert not by["weingarten_13"]["pass"] and by["weingarten_13"]["informational"]


def test_fault_injection_fails(tmp_path):
    doc = dict(TUBE, _inject={"k_scale": 1.001})
    out = tmp_path / "v.json"
    code = cli.main(["verify", "--config", write(tmp_path, "c.json", doc),
                     "--out", str(out)])
    assert code == 1
    rep = json.loads(out.read_text())
    failed = {c["check"] for c in rep["checks"] if not c["pass"]}
    assert "oracle_agreement_K" in failed


def test_determinism_across_runs(tmp_path):
    c = write(tmp_path, "c.json", TUBE)
    outs = []
    for name in ("a.json", "b.json"):
        out = tmp_path / name
        assert cli.main(["verify", "--config", c, "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_determinism_with_threads(tmp_path):
    c = write(tmp_path, "c.json", TUBE)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert cli.main(["sample", "--config", c, "--out", str(a)]) == 0
    os.environ["CANAL_THREADS"] = "4"
    try:
        assert cli.main(["sample", "--config", c, "--out", str(b)]) == 0
    finally:
        del os.environ["CANAL_THREADS"]
    assert a.read_bytes() == b.read_bytes()


def test_sample_csv_format(tmp_path):
    out = tmp_path / "s.csv"
    assert cli.main(["sample", "--config", write(tmp_path, "c.json", TUBE),
                     "--grid", "3x3x3", "--out", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "v1,v2,v3,x1,x2,x3,x4"
    assert len(lines) == 1 + 27
    row = [float(x) for x in lines[1].split(",")]
    patch = parse_patch(TUBE["patch"])
    from canalgeom import canal_point
    # %.17g roundtrips float64 exactly
    assert np.array_equal(canal_point(patch, row[:3]), row[3:])


def test_sample_line_tube_distance(tmp_path):
    doc = {"patch": {"curve": {"kind": "line", "point": [0, 0, 0, 0],
                               "direction": [1, 0, 0, 0], "domain": [0.0, 2.0]},
                     "radius": {"kind": "constant", "value": 1.0}, "n": 4},
           "grid": [4, 4, 4]}
    out = tmp_path / "s.csv"
    assert cli.main(["sample", "--config", write(tmp_path, "c.json", doc),
                     "--out", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    assert len(lines) == 1 + 64
    for ln in lines[1:]:
        row = [float(x) for x in ln.split(",")]
        assert abs(np.linalg.norm(row[4:]) - 1.0) < 1e-12


def test_sample_slice_v3(tmp_path):
    out = tmp_path / "s.csv"
    assert cli.main(["sample", "--config", write(tmp_path, "c.json", TUBE),
                     "--grid", "4x5x6", "--slice-v3", "0.25",
                     "--out", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    assert len(lines) == 1 + 4 * 5
    v3s = {ln.split(",")[2] for ln in lines[1:]}
    assert v3s == {"0.25"}


def test_obj_export_torus_topology(tmp_path):
    out = tmp_path / "t.obj"
    assert cli.main(["sample", "--config", write(tmp_path, "c.json", TORUS3),
                     "--format", "obj", "--out", str(out)]) == 0
    verts, faces = 0, []
    for ln in out.read_text().splitlines():
        if ln.startswith("v "):
            verts += 1
        elif ln.startswith("f "):
            faces.append(tuple(int(x) for x in ln.split()[1:]))
    assert verts == 16 * 16
    assert len(faces) == 2 * 16 * 16
    edges = set()
    for f in faces:
        assert len(f) == 3 and all(1 <= i <= verts for i in f)
        for i in range(3):
            e = tuple(sorted((f[i], f[(i + 1) % 3])))
            edges.add(e)
    # closed torus mesh: V - E + F = 0
    assert verts - len(edges) + len(faces) == 0


def test_obj_rejected_for_4d(tmp_path):
    out = tmp_path / "t.obj"
    code = cli.main(["sample", "--config", write(tmp_path, "c.json", TUBE),
                     "--format", "obj", "--out", str(out)])
    assert code == 2


def test_curvature_csv(tmp_path, capsys):
    out = tmp_path / "k.csv"
    assert cli.main(["curvature", "--config", write(tmp_path, "c.json", TUBE),
                     "--grid", "4x4x4", "--out", str(out)]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["schema"] == 1 and summary["count"] == 64
    assert summary["max_identity_residual"] <= 1e-9
    lines = out.read_text().strip().splitlines()
    assert lines[0].startswith("v1,v2,v3,K,H")
    assert len(lines) == 65


def test_classify_command(tmp_path):
    out = tmp_path / "c.json"
    assert cli.main(["classify", "--config", write(tmp_path, "cfg.json", TUBE),
                     "--grid", "4x4x4", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    v = doc["verdict"]
    assert v["flat"] == "No" and v["minimal"] == "No"
    assert v["weingarten_pairs"]["23"]["weingarten"]
    assert v["linear_weingarten"]["max_residual"] <= 1e-9


def test_catenoid_command(tmp_path, capsys):
    out = tmp_path / "cat.csv"
    code = cli.main(["catenoid", "--a", "1.0", "--span", "1.5",
                     "--out", str(out), "--check-h"])
    assert code == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["pass"] and rep["max_abs_H"] <= 1e-6
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "v1,rho,drho,d2rho,d3rho"
    first = [float(x) for x in lines[1].split(",")]
    assert first[1] == 1.0 and first[2] == 0.0

import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spiral_minimal import cli, io
from spiral_minimal.errors import InvalidArgument
from spiral_minimal.geometry import normal_jet
from spiral_minimal.grid import GridFunction
from spiral_minimal.verification import Check, surface_residual


def test_empty_file_gives_defaults(tmp_path):
    p = tmp_path / "c.json"
    p.write_text("")
    assert io.load_config(p) == io.RunConfig()


def test_single_key_override(tmp_path):
    p = tmp_path / "c.json"
    p.write_text('{"delta": 0.05, "grid_n": 1001}')
    cfg = io.load_config(p, {"delta": 0.1, "zeta": None})
    assert cfg.delta == 0.1 and cfg.grid_n == 1001 and cfg.zeta == 10.0


@pytest.mark.parametrize(
    "text,key",
    [
        ('{"delta": -1}', "delta"),
        ('{"grid_n": 2000}', "grid_n"),
        ('{"tol": 0}', "tol"),
        ('{"bogus": 1}', "bogus"),
        ('{"format": "png"}', "format"),
        ('{"mesh_n_s": 1}', "mesh_n_s"),
        ('{"delta": "big"}', "delta"),
        ('{"max_iters": 2.5}', "max_iters"),
    ],
)
def test_bad_config_names_key(tmp_path, text, key):
    p = tmp_path / "c.json"
    p.write_text(text)
    with pytest.raises(InvalidArgument) as info:
        io.load_config(p)
    assert info.value.key == key
    assert key in str(info.value)


def test_malformed_json(tmp_path):
    p = tmp_path / "c.json"
    p.write_text("{delta: 1")
    with pytest.raises(InvalidArgument):
        io.load_config(p)


@given(st.floats(allow_nan=True, allow_infinity=True))
def test_json_floats_round_trip(x):
    text = io.dumps({"x": x})
    back = json.loads(text)["x"]
    if math.isfinite(x):
        assert back == x
    else:
        assert float(back) == x or (math.isnan(x) and math.isnan(float(back)))


def test_report_key_order_and_determinism():
    rep = io.Report("demo", {"b": 1, "a": 2.5})
    rep.checks.append(Check("c", 0.1, 1.0, True))
    rep.sections["arr"] = np.array([1.0, np.inf])
    obj = json.loads(rep.to_json())
    assert list(obj) == ["command", "passed", "config", "checks", "sections", "notes"]
    assert list(obj["config"]) == ["b", "a"]
    assert obj["sections"]["arr"] == [1.0, "inf"]
    assert rep.to_json() == rep.to_json()


@given(st.lists(st.floats(-1e3, 1e3), min_size=2, max_size=2))
def test_csv_round_trip(tmp_path_factory, coef):
    path = tmp_path_factory.mktemp("csv") / "u.csv"
    u = GridFunction.from_callable(lambda s: coef[0] * s**2 * 1e-4 + coef[1] * s**4 * 1e-5, 1.0, 21)
    io.write_profile_csv(path, u, 0.05)
    back = io.read_profile_csv(path)
    assert back.half_width == u.half_width
    np.testing.assert_array_equal(back.values, u.values)
    header = path.read_text().splitlines()[0]
    assert header == "s,u,du,ddu,Q"


def test_mesh_combinatorics_and_orientation(tmp_path):
    u = GridFunction.zeros(1.0, 101)
    cfg = io.RunConfig(delta=0.1, theta_max=4 * math.pi)
    verts, faces = cli.cmd_export_mesh(cfg, u)
    assert verts.shape == (50 * 200, 3)
    assert faces.shape == (2 * 49 * 199, 3)
    assert faces.min() == 1 and faces.max() == len(verts)
    # raw surface sits above the plane at height e^{delta theta}/delta
    theta = np.tile(np.linspace(0, 4 * math.pi, 200), 50)
    np.testing.assert_allclose(verts[:, 2], np.exp(0.1 * theta) / 0.1)
    # each triangle normal points to the side of nu
    a, b, c = (verts[faces[:, k] - 1] for k in range(3))
    n = np.cross(b - a, c - a)
    s = np.repeat(np.linspace(-1, 1, 50), 200)
    centre = np.arange(len(verts)).reshape(50, 200)[:-1, :-1].ravel()
    nu, _ = normal_jet(s[centre], theta[centre])
    lower = n[0::2]
    assert np.all((lower * nu).sum(-1) > 0)
    upper = n[1::2]
    assert np.all((upper * nu).sum(-1) > 0)
    path = tmp_path / "m.obj"
    io.write_obj(path, verts, faces)
    v2, f2 = io.read_obj(path)
    np.testing.assert_array_equal(v2, verts)
    np.testing.assert_array_equal(f2, faces)


def run(capsys, *argv):
    code = cli.run(list(argv))
    return code, capsys.readouterr()


def test_geometry_check_exit_zero(capsys):
    code, out = run(capsys, "geometry-check", "--delta", "0.1")
    assert code == 0
    assert "H-sign-convention: trace(+) vs Corollary(-)" in out.out


def test_geometry_check_out_of_range(capsys):
    code, out = run(capsys, "geometry-check", "--delta", "0.5")
    assert code == 2
    assert "delta" in out.err


def test_usage_error(capsys):
    code, _ = run(capsys, "no-such-command")
    assert code == 2


def test_solve_writes_csv_and_report(tmp_path, capsys):
    out = tmp_path / "u.csv"
    code, _ = run(capsys, "solve", "--format", "csv", "--output", str(out))
    assert code == 0
    rep = json.loads(out.with_suffix(".json").read_text())
    hist = rep["sections"]["residual_history"]
    assert all(b < a for a, b in zip(hist[1:], hist[2:]))
    u = io.read_profile_csv(out)
    assert surface_residual(u, 0.05) <= 1e-6


def test_solve_divergence_exit_three(tmp_path, capsys):
    out = tmp_path / "d.json"
    code, _ = run(capsys, "solve", "--max-iters", "1", "--output", str(out))
    assert code == 3
    rep = json.loads(out.read_text())
    assert len(rep["sections"]["residual_history"]) == 2
    assert rep["passed"] is False


def test_solve_certificate_failure_exit_one(capsys):
    code, out = run(capsys, "solve", "--delta", "0.1", "--zeta", "1.01")
    assert code == 1
    assert "FAIL  ||u||_X2 / (zeta delta)" in out.out


def test_cap_delta_reports_honestly(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, _ = run(capsys, "solve", "--delta", "0.2", "--output", str(out))
    rep = json.loads(out.read_text())
    assert code == (0 if rep["passed"] else 1)
    assert [c["name"] for c in rep["checks"]][0] == "converged"


def test_export_mesh_needs_profile(tmp_path, capsys):
    code, _ = run(capsys, "export-mesh", "--u-file", str(tmp_path / "none.csv"), "--format", "obj",
                  "--output", str(tmp_path / "m.obj"))
    assert code == 2
    code, _ = run(capsys, "export-mesh", "--raw", "--format", "csv", "--output", str(tmp_path / "m.obj"))
    assert code == 2


def test_export_mesh_round_trip(tmp_path, capsys):
    csv_path = tmp_path / "u.csv"
    assert run(capsys, "solve", "--format", "csv", "--output", str(csv_path))[0] == 0
    obj = tmp_path / "g.obj"
    code, _ = run(capsys, "export-mesh", "--u-file", str(csv_path), "--format", "obj", "--output", str(obj))
    assert code == 0
    verts, faces = io.read_obj(obj)
    assert len(verts) == 10000 and len(faces) == 2 * 49 * 199


def test_report_command(tmp_path, capsys):
    out = tmp_path / "g.json"
    assert run(capsys, "geometry-check", "--output", str(out))[0] == 0
    code, text = run(capsys, "report", str(out))
    assert code == 0 and "PASS" in text.out
    code, _ = run(capsys, "report", str(tmp_path / "missing.json"))
    assert code == 2

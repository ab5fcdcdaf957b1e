import json
import math
import struct

import numpy as np
import pytest

from hjbcar import scenes
from hjbcar.cli import EXIT_OK, EXIT_SCHEMA, EXIT_VALIDATION, main
from hjbcar.fileio import (
    HEADER,
    read_ppm,
    read_slice,
    read_solution,
    render_frame,
    slice_path,
    write_ppm,
    write_slice,
)
from hjbcar.grid import cfl_max_dt
from hjbcar.scene import save_scene


def test_slice_dump_layout(tmp_path):
    vals = np.arange(3 * 4 * 5, dtype=np.float32).reshape(3, 4, 5)
    p = tmp_path / "s.bin"
    write_slice(p, vals, 17)
    raw = p.read_bytes()
    assert HEADER.unpack_from(raw) == (2, 3, 5, 17)
    assert struct.unpack_from("<f", raw, 16 + 4 * (1 * 20 + 2 * 5 + 3))[0] == vals[1, 2, 3]
    back, n = read_slice(p)
    assert n == 17 and np.array_equal(back, vals)
    p.write_bytes(raw[:-4])
    with pytest.raises(ValueError):
        read_slice(p)


def test_ppm_round_trip(tmp_path):
    img = render_frame(scenes.rotating_sectors(), 1.0, size=60)
    write_ppm(tmp_path / "f.ppm", img)
    assert np.array_equal(read_ppm(tmp_path / "f.ppm"), img)
    # obstacles, target star and background all present
    assert (img == 255).all(axis=2).any() and (img == (220, 20, 20)).all(axis=2).any()


@pytest.fixture(scope="module")
def solved(tmp_path_factory):
    out = tmp_path_factory.mktemp("sol")
    rc = main(["solve", "builtin:free_space", "--horizon", "2", "--grid", "20", "20", "16", "--out", str(out),
               "--csv-theta", "0"])
    assert rc == EXIT_OK
    return out


def test_solve_writes_manifest(solved):
    m = json.loads((solved / "manifest.json").read_text())
    g = m["grid"]
    assert m["cfl"]["max_dt"] == pytest.approx(
        1 / (2 * 1.28 / g["dx"] + 4 / g["dtheta"]), rel=1e-12)
    assert m["cfl"]["max_dt"] == cfl_max_dt(g["dx"], g["dy"], g["dtheta"], scenes.DEFAULT_CAR)
    assert g["dt"] <= 0.9 * m["cfl"]["max_dt"] * (1 + 1e-12)
    assert m["cfl"]["cfl_number"] <= 0.9 + 1e-12
    for key in ("wall_time", "reachable_fraction"):
        assert m[key] is not None
    assert slice_path(solved, 0).exists() and slice_path(solved, g["N"]).exists()
    csvs = list(solved.glob("value_k*.csv"))
    assert csvs and csvs[0].read_text().splitlines()[0] == "x,y,u"


def test_reference_parameter_config_runs(tmp_path):
    sc = scenes.rotating_sectors()
    assert (sc.car.d, sc.car.R, sc.car.W, sc.domain, sc.horizon) == (0.07, 0.04, 4.0, (-1, 1, -1, 1), 10.0)
    path = tmp_path / "scene.json"
    save_scene(sc, path)
    rc = main(["solve", str(path), "--grid", "12", "12", "8", "--out", str(tmp_path / "sol")])
    assert rc == EXIT_OK


def test_missing_target_schema_error(tmp_path, capsys):
    doc = scenes.free_space().to_dict()
    del doc["target"]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc, indent=2))
    assert main(["solve", str(path), "--out", str(tmp_path / "o")]) == EXIT_SCHEMA
    assert "target" in capsys.readouterr().err


def test_zero_grid_rejected(tmp_path, capsys):
    assert main(["solve", "builtin:free_space", "--grid", "0", "20", "16", "--out", str(tmp_path)]) == EXIT_SCHEMA
    assert "grid" in capsys.readouterr().err


def test_unknown_builtin(tmp_path):
    assert main(["solve", "builtin:nope", "--out", str(tmp_path)]) == EXIT_SCHEMA


def test_trace_outputs(solved, tmp_path):
    out = tmp_path / "tr"
    rc = main(["trace", "--solution", str(solved), "--start", "-0.5", "0", "0", "--start", "-0.3", "0.4", "1",
               "--frames", "2", "--size", "64", "--out", str(out)])
    assert rc == EXIT_OK
    assert sorted(p.name for p in out.iterdir()) == [
        "frame_000.ppm", "frame_001.ppm", "trace_report.json", "trajectory_00.csv", "trajectory_01.csv"]
    report = json.loads((out / "trace_report.json").read_text())
    assert all(r["arrived"] and r["validation"]["passed"] for r in report)


def test_trace_empty_start_list(solved, tmp_path):
    out = tmp_path / "tr"
    assert main(["trace", "--solution", str(solved), "--out", str(out)]) == EXIT_OK
    assert json.loads((out / "trace_report.json").read_text()) == []
    assert not list(out.glob("*.csv"))


def test_trace_start_in_collision(tmp_path):
    sol = tmp_path / "sol"
    assert main(["solve", "builtin:static_disks", "--grid", "16", "16", "8", "--out", str(sol)]) == EXIT_OK
    rc = main(["trace", "--solution", str(sol), "--start", "0", "0", "0", "--out", str(tmp_path / "t")])
    assert rc == EXIT_VALIDATION


def test_verify_free_space_without_oracle(solved, tmp_path):
    rc = main(["verify", "--solution", str(solved), "--oracle-starts", "0", "--start", "-0.5", "0", "0",
               "--out", str(tmp_path / "r.json")])
    report = json.loads((tmp_path / "r.json").read_text())
    assert rc == EXIT_OK, report
    assert {"consistency", "lower_bound", "stationarity", "trajectories"} <= set(report)


def test_verify_detects_corrupted_dump(solved, tmp_path):
    import shutil

    bad = tmp_path / "bad"
    shutil.copytree(solved, bad)
    m = json.loads((bad / "manifest.json").read_text())
    p = slice_path(bad, m["steps"][-2])
    values, n = read_slice(p)
    values = values.copy()
    values[10, 10, :] = 0.5 * values[10, 10, :]
    write_slice(p, values, n)
    rc = main(["verify", "--solution", str(bad), "--oracle-starts", "0", "--out", str(tmp_path / "r.json")])
    report = json.loads((tmp_path / "r.json").read_text())
    assert rc == EXIT_VALIDATION
    assert not report["consistency"]["passed"]


def test_verify_dynamic_scene_skips_stationarity(tmp_path):
    sol = tmp_path / "sol"
    assert main(["solve", "builtin:rotating_sectors", "--horizon", "1", "--grid", "12", "12", "8",
                 "--out", str(sol)]) == EXIT_OK
    main(["verify", "--solution", str(sol), "--oracle-starts", "0", "--start", "0.3", "0", "0",
          "--out", str(tmp_path / "r.json")])
    assert "stationarity" not in json.loads((tmp_path / "r.json").read_text())


def test_render_frames(tmp_path, solved):
    main(["trace", "--solution", str(solved), "--start", "-0.5", "0", "0", "--frames", "0",
          "--out", str(tmp_path / "tr")])
    rc = main(["render", "builtin:free_space", "--trajectory", str(tmp_path / "tr" / "trajectory_00.csv"),
               "--times", "0", "0.5", "--size", "50", "--out", str(tmp_path / "r")])
    assert rc == EXIT_OK
    assert read_ppm(tmp_path / "r" / "frame_001.ppm").shape == (50, 50, 3)
    assert main(["render", "builtin:free_space", "--times", "99", "--out", str(tmp_path / "r")]) == EXIT_SCHEMA


def test_read_solution_round_trip(solved):
    vf, sc, m = read_solution(solved)
    assert vf.grid.N == m["grid"]["N"] and sc == scenes.free_space(horizon=2.0)

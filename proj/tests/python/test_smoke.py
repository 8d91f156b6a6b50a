"""Smoke tests for the Python bindings."""

import math

import pytest

import wgbrinkman as wgb


def test_version():
    assert wgb.__version__ == "1.0.0"


def test_mesh_families():
    tri = wgb.build_mesh("tri", 2)
    assert (tri.n_cells, tri.n_vertices, tri.n_edges) == (32, 25, 56)
    poly = wgb.build_mesh("poly", 2)
    assert (poly.n_cells, poly.n_vertices, poly.n_edges) == (32, 77, 108)
    for mesh in (tri, poly):
        assert mesh.validate() == []
        assert math.isclose(
            sum(mesh.cell_area(c) for c in range(mesh.n_cells)), 1.0, rel_tol=1e-12
        )
    assert math.isclose(tri.metrics().h, math.sqrt(2.0) / 4.0, rel_tol=1e-12)


def test_mesh_text_roundtrip():
    mesh = wgb.build_mesh("poly", 1)
    text = mesh.to_text()
    again = wgb.Mesh.from_text(text)
    assert again.to_text() == text
    assert again.n_cells == mesh.n_cells


def test_bad_arguments():
    with pytest.raises(Exception):
        wgb.build_mesh("hex", 1)
    with pytest.raises(ValueError):
        wgb.solve_brinkman("tri", 1, 2, mode="stab", lifting=0)
    with pytest.raises(ValueError):
        wgb.solve_brinkman("tri", 1, 1, mode="nope")


def test_solve_and_convergence():
    result = wgb.solve_brinkman("tri", 2, 1)
    assert result["total_dofs"] == result["velocity_dofs"] + result["pressure_dofs"] + 1
    assert result["residual"] < 1e-10
    assert result["max_divergence"] < 1e-9
    assert 0.0 < result["velocity_l2_error"] < 1.0

    rows = wgb.convergence("tri", 1, "stab", 1, 3)
    assert [row["level"] for row in rows] == [1, 2, 3]
    assert rows[0]["velocity_l2_rate"] is None
    errors = [row["velocity_l2_error"] for row in rows]
    assert errors[0] > errors[1] > errors[2]
    assert rows[-1]["velocity_l2_rate"] > 1.5

    csv = wgb.convergence_csv("poly", 1, "sf", 1, 2)
    assert csv.splitlines()[0] == "# wgbrinkman convergence study"
    assert "family=poly k=1 r=4 mode=sf" in csv


def test_benchmark_data():
    assert wgb.benchmark_velocity(0.0, 0.3) == (0.0, 0.0)
    assert wgb.benchmark_pressure(0.5, 0.9) == 0.0
    u = wgb.benchmark_velocity(0.3, 0.7)
    assert all(math.isfinite(c) for c in u) and u != (0.0, 0.0)
    f1 = wgb.benchmark_source(0.3, 0.7, 1.0)
    f2 = wgb.benchmark_source(0.3, 0.7, 0.5)
    expected = tuple(a + b for a, b in zip(f1, wgb.benchmark_velocity(0.3, 0.7)))
    assert all(math.isclose(a, b, rel_tol=1e-12) for a, b in zip(f2, expected))


def test_selfcheck():
    report = wgb.selfcheck(seed=7)
    assert report["failures"] == 0
    assert "PASS mesh-families" in report["log"]

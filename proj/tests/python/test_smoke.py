import json
import math

import pytest

import apec

PHI = (1 + 5 ** 0.5) / 2
FIB = [(-1.0, PHI - 1.0)]


def test_window_algebra():
    assert apec.normalize([(0, 1), (0.5, 2)]) == [(0.0, 2.0)]
    assert apec.measure([(0, 1), (2, 3)]) == pytest.approx(2.0)
    assert apec.symmetric_difference_measure([(0, 1)], 0.25) == pytest.approx(0.5)
    assert list(apec.boundary_points([(0, 1), (2, 3)])) == [0, 1, 2, 3]
    assert apec.sausage_measure([1.0, 0.0], 0.6) == pytest.approx(2.2)
    assert apec.remark_b_window(4, 1) == [(0.0, 1.0)]
    assert apec.measure(apec.remark_b_window(4, 2)) == pytest.approx(0.75)


def test_dimension_fits():
    gamma = 4.0
    boundary = apec.boundary_points(apec.cantor_window(gamma, 12))
    fit = apec.box_dimension_fit(boundary, apec.geometric_grid(gamma ** -10, 1 / gamma))
    assert fit["slope"] == pytest.approx(0.5, abs=0.05)
    shift = apec.shift_exponent(apec.remark_b_window(4, 12), apec.geometric_grid(4.0 ** -10, 4.0 ** -3))
    assert shift["slope"] == pytest.approx(0.5, abs=0.05)


def test_model_set_and_metric():
    pts = apec.model_set(FIB, radius=1e4, h_shift=0.1)
    assert len(pts) / 2e4 == pytest.approx(PHI / 5 ** 0.5, rel=0.01)
    assert apec.min_gap(pts, 1e4) == pytest.approx(1.0)
    assert apec.covering_radius(pts, 1e4) == pytest.approx(PHI / 2)
    a = apec.model_set(FIB, radius=4200, h_shift=0.1)
    assert apec.delone_distance(a, a, 4200) <= 2.0 ** -12
    assert len(apec.model_set([], radius=10)) == 0


def test_frequency_within_bound():
    a = apec.model_set(FIB, radius=900, h_shift=0.0)
    b = apec.model_set(FIB, radius=900, h_shift=0.01)
    f = apec.delta_frequency(a, b, 900, 0.3, lengths=[100, 200, 400, 800])
    bound = apec.pair_frequency_bound(FIB, 0.3, 0.0, 0.01)
    assert f["estimate"] <= bound + 3 * f["std_error"]


def test_errors_carry_codes():
    with pytest.raises(apec.ApecError) as info:
        apec.enumerate_lattice(0, 1, 0, 1, basis=((1, 2), (2, 4)))
    assert info.value.code == "CPS_SINGULAR"
    with pytest.raises(apec.ApecError) as info:
        apec.model_set(FIB, radius=1e6, resource_cap=10)
    assert info.value.code == "RESOURCE_CAP"
    with pytest.raises(ValueError):
        apec.normalize([(0, math.nan)])


def test_config_and_commands(tmp_path):
    assert "fibonacci" in apec.preset_names()
    echo = dict(apec.resolve_config(preset="remark_b6", seed=3))
    assert echo["window.gamma"] == "6"
    assert echo["run.seed"] == "3"
    summary = apec.run("dim", tmp_path / "dim", preset="remark_b")
    assert summary["box_dimension"] == pytest.approx(0.5, abs=0.05)
    gen = apec.run("generate", tmp_path / "gen", preset="fibonacci")
    assert "model_set.csv" in gen["files"]
    manifest = json.loads((tmp_path / "gen" / "manifest.json").read_text())
    assert manifest["command"] == "generate"

"""End-to-end smoke tests for the python module."""

import cmath
import json
import math

import pytest

import stlfem


def tiny_config(**overrides):
    cfg = json.loads(stlfem.preset_json("small-slw1"))
    cfg["name"] = "tiny"
    cfg["source_room"]["dims"] = [0.3, 0.25, 0.2]
    cfg["receiving_room"]["dims"] = [0.3, 0.25, 0.2]
    cfg["walls"] = [{"medium": "plasterboard", "h": 0.01}]
    cfg["sources"] = [[0.05, 0.05, 0.05]]
    cfg["mics_source_room"] = [[0.25, 0.2, 0.15]]
    cfg["mics_receiving_room"] = [[0.25, 0.05, 0.15]]
    cfg["intervals"] = [[100.0, 160.0]]
    cfg["df"] = 10.0
    cfg["nodes_per_wavelength"] = 5
    cfg["mesh_mode"] = "conforming"
    cfg.update(overrides)
    return json.dumps(cfg)


def glass_wool():
    p = stlfem.PorousMedium()
    p.alpha_inf = 1.06
    p.Lambda = 56e-6
    p.Lambda_p = 110e-6
    p.sigma = 40000.0
    p.phi = 0.94
    p.rho1 = 130.0
    return p


def test_module_metadata():
    assert stlfem.__version__
    assert "transmission" in stlfem.__doc__


def test_preset_library():
    names = stlfem.preset_names()
    assert names == [
        "small-slw1",
        "small-slw2",
        "small-dlwni",
        "small-dlwi",
        "large-slw",
        "large-dlwni",
        "large-dlwi",
    ]
    for name in names:
        cfg = json.loads(stlfem.preset_json(name))
        assert cfg["name"] == name
        assert stlfem.config_hash(stlfem.preset_json(name)) == stlfem.config_hash(name)
    with pytest.raises(stlfem.StlfemError):
        stlfem.preset_json("no-such-preset")


def test_third_octave_bands():
    bands = stlfem.third_octave_bands(100.0, 8000.0)
    assert len(bands) == 20
    assert bands[0].nominal == 100.0
    assert bands[-1].nominal == 8000.0
    for lo, hi in zip(bands, bands[10:]):
        assert hi.f_m / lo.f_m == pytest.approx(10.0, rel=1e-12)


def test_equivalent_fluid_oracle():
    gw = glass_wool()
    K = stlfem.dynamic_bulk_modulus(gw, 2.0 * math.pi * 1000.0)
    assert K.real == pytest.approx(105940.0, rel=1e-4)
    assert K.imag != 0.0
    assert stlfem.gap_stiffness(gw) == pytest.approx(K.real, rel=1e-12)
    rho = stlfem.dynamic_density(gw, 2.0 * math.pi * 100.0)
    limp = stlfem.limp_density(rho, gw)
    assert limp != rho
    lam = stlfem.wavelength_equivalent(gw, 300.0)
    assert stlfem.element_length(lam, 13) == pytest.approx(0.0287, rel=2e-3)


def test_wall_references():
    pb = stlfem.SolidMedium()
    pb.E = 3e9
    pb.nu = 0.15
    pb.rho = 800.0
    pb.eta_s = 0.03
    air = stlfem.FluidMedium()
    assert stlfem.coincidence_frequency(pb, 0.025, air) == pytest.approx(
        1324.65, abs=0.01
    )
    modes = stlfem.clamped_plate_frequencies(pb, 0.05, 4.0, 3.0, 3)
    assert modes[0] == pytest.approx(14.35, abs=0.01)
    assert modes == sorted(modes)


def test_mesh_dof_grows_with_frequency():
    lo = stlfem.mesh_dof(tiny_config(), 100.0)
    hi = stlfem.mesh_dof(tiny_config(), 400.0)
    assert 0 < lo < hi


def test_run_stl_end_to_end(tmp_path):
    out = tmp_path / "run"
    res = stlfem.run_stl(tiny_config(), out_dir=str(out), workers=1)
    assert res["ok"]
    assert len(res["freqs"]) == 7
    assert res["freqs"][0] == 100.0 and res["freqs"][-1] == 160.0
    assert (out / "stl.csv").is_file()
    assert (out / "narrowband.csv").is_file()
    assert (out / "manifest.txt").is_file()

    spectrum = res["stl"]
    live = [v for v, n in zip(spectrum["values"], spectrum["lines"]) if n > 0]
    assert live and all(math.isfinite(v) for v in live)
    assert all(abs(p) > 0 for p in res["mic_RR"][0])

    again = stlfem.run_stl(
        tiny_config(), out_dir=str(tmp_path / "run2"), workers=2
    )
    assert again["mic_SR"] == res["mic_SR"]
    assert again["mic_RR"] == res["mic_RR"]
    assert again["config_hash"] == res["config_hash"]
    assert (tmp_path / "run2" / "stl.csv").read_bytes() == (
        out / "stl.csv"
    ).read_bytes()


def test_run_stl_rejects_bad_config():
    with pytest.raises(stlfem.StlfemError):
        stlfem.run_stl(tiny_config(df=0.0), write_outputs=False)

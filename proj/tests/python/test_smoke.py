import json
import math

import numpy as np
import pytest

pcqed = pytest.importorskip("plasmon_cqed")


@pytest.fixture(scope="module")
def silver():
    return pcqed.Material.silver_drude()


def test_quasi_static_resonance_matches_closed_form():
    lossless = pcqed.Material.drude(1.0, 7.9, 0.0)
    geom = pcqed.Geometry.from_gap(8.0, 1.0, 2.0)
    for n in range(1, 4):
        exact = 7.9 * math.sqrt(n / (2 * n + 1))
        assert pcqed.qs_resonance(n, geom, lossless) == pytest.approx(exact, rel=1e-10)


def test_small_sphere_modes_and_dressed_states(silver):
    geom = pcqed.Geometry.from_gap(8.0, 1.0, 2.0)
    emitter = pcqed.Emitter.from_dipole(2.94, 24.0, 0.0, geom)
    grid = pcqed.linspace(2.0, 3.6, 801)
    modes = pcqed.extract_modes(6, grid, geom, silver, emitter)
    assert [m.n for m in modes] == list(range(1, 7))
    assert all(abs(m.hgamma / 0.051 - 1) < 0.1 for m in modes)

    h = pcqed.hamiltonian(modes, emitter)
    assert h.shape == (7, 7)
    values, right, left = pcqed.dressed_states(modes, emitter)
    ident = left.conj().T @ right
    assert abs(ident - np.eye(7)).max() < 1e-10
    assert all(v.imag < 0 for v in values)


def test_weak_coupling_routes_agree(silver):
    geom = pcqed.Geometry.from_gap(8.0, 1.0, 5.0)
    emitter = pcqed.Emitter.from_lifetime(pcqed.wavelength_to_energy(670.0), 50.0, 0.9, geom)
    modes = pcqed.extract_modes(25, pcqed.linspace(2.0, 3.6, 1601), geom, silver, emitter)
    adiabatic = pcqed.gamma_ratio_adiabatic(modes, emitter)
    fermi = pcqed.gamma_ratio_fermi(geom, silver, emitter, 120)
    assert adiabatic == pytest.approx(fermi, rel=0.05)
    pop = pcqed.emitter_population(modes, emitter, [0.0, 1.0 / (adiabatic * emitter.hgamma0)])
    assert pop[0] == pytest.approx(1.0)
    assert pop[1] == pytest.approx(math.exp(-1.0), rel=0.02)


def test_run_scenario(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({
        "material": {"model": "drude", "eps_inf": 6.0, "hw_p": 7.9, "hgamma_p": 0.051},
        "geometry": {"R": 8.0, "eps_b": 1.0, "h": 2.0},
        "emitter": {"hw0": 2.94, "d_eg": 24.0, "gamma0_nr": 0.0},
        "run": {"task": "fit", "N": 3},
    }))
    code, _ = pcqed.run(cfg, tmp_path / "out")
    assert code == 0
    manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
    assert {f["path"] for f in manifest["files"]} == {"modes.csv", "modes.json"}

    bad = json.loads(cfg.read_text())
    bad["geometry"]["R"] = -1.0
    cfg.write_text(json.dumps(bad))
    code, log = pcqed.run(cfg, tmp_path / "bad")
    assert code == 2 and "geometry.R" in log


def test_invalid_argument_maps_to_python_exception(silver):
    geom = pcqed.Geometry.from_gap(8.0, 1.0, 2.0)
    emitter = pcqed.Emitter.from_dipole(2.94, 24.0, 0.0, geom)
    with pytest.raises(pcqed.Error):
        pcqed.extract_modes(0, pcqed.linspace(2.0, 3.6, 101), geom, silver, emitter)

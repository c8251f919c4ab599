import dataclasses
import json

import numpy as np
import pytest

from defbec import sweeps
from defbec.config import PRESETS, ConfigError, RunConfig, from_mapping, load_config, with_updates
from defbec.constants import TWO_PI
from defbec.sector_hamiltonian import HamiltonianParams
from defbec.susceptibility import FieldQuantization, susceptibilities


def small(**kw):
    base = dict(delta_min_hz=-20e6, delta_max_hz=20e6, points=21)
    base.update(kw)
    return from_mapping(base)


def test_sodium_preset_values():
    p = PRESETS["sodium"]
    assert p["omega12_hz"] == 1772e6 and p["omega_opt_hz"] == 5.1e14
    assert p["density"] == 3.3e18 and p["mu32"] == 22e-30 and p["mu31"] == 22e-30
    assert p["gamma31_hz"] == p["gamma32_hz"] == 5e6 and p["gamma12_hz"] == 38e3
    assert p["g1_hz"] == 21.4e6


def test_missing_delta_range():
    with pytest.raises(ConfigError, match="delta range"):
        from_mapping({"kappa": [0.0]})


@pytest.mark.parametrize("data", [
    {"delta_min_hz": -1.0, "delta_max_hz": 1.0, "bogus": 3},
    {"delta_min_hz": -1.0, "delta_max_hz": 1.0, "nested": {"a": 1}},
    {"delta_min_hz": 1.0, "delta_max_hz": -1.0},
    {"delta_min_hz": -1.0, "delta_max_hz": 1.0, "points": 2},
    {"delta_min_hz": -1.0, "delta_max_hz": 1.0, "points": 2.5},
    {"delta_min_hz": -1.0, "delta_max_hz": 1.0, "kappa": []},
    {"delta_min_hz": -1.0, "delta_max_hz": 1.0, "kappa": [-0.1]},
    {"delta_min_hz": -1.0, "delta_max_hz": 1.0, "formats": ["png"]},
    {"delta_min_hz": -1.0, "delta_max_hz": 1.0, "preset": "rubidium"},
    {"delta_min_hz": -1.0, "delta_max_hz": 1.0, "volume_mode": "other"},
])
def test_invalid_config_rejected(data):
    with pytest.raises(ConfigError):
        from_mapping(data)


def test_preset_override_and_toml(tmp_path):
    path = tmp_path / "run.toml"
    path.write_text(
        'delta_min_hz = -1e7\ndelta_max_hz = 1e7\nkappa = [0.0, 0.008]\nn_atoms = 300\n'
        'points = 11\ng1_hz = 10e6\nformats = ["csv", "json"]\n'
    )
    cfg = load_config(path)
    assert cfg.kappa == (0.0, 0.008) and cfg.n_atoms == (300.0,) and cfg.points == 11
    assert cfg.g1 == pytest.approx(TWO_PI * 10e6)
    assert cfg.formats == ("csv", "json")
    bad = tmp_path / "bad.toml"
    bad.write_text("delta_min_hz = [\n")
    with pytest.raises(ConfigError):
        load_config(bad)


def test_volume_modes():
    cfg = small()
    assert cfg.resolved_volume() == pytest.approx(1e14 / 3.3e18)
    assert cfg.condensate(0.0, 300).volume == pytest.approx(1e14 / 3.3e18)
    dens = small(volume_mode="density")
    assert dens.resolved_volume() is None
    assert dens.condensate(0.0, 300).volume == pytest.approx(300 / 3.3e18)
    assert small(quant_volume=2e-6).resolved_volume() == 2e-6


def test_photon_number_from_intensity_config():
    assert small(photons=None, intensity=1.6).photon_number() == pytest.approx(50.0)
    with pytest.raises(ConfigError):
        small(photons=None)


def test_with_updates():
    cfg = with_updates(small(), points=5)
    assert cfg.points == 5
    with pytest.raises(ConfigError):
        with_updates(cfg, points=1)


def test_sweep_order_and_size():
    cfg = RunConfig(-20e6, 20e6, kappa=(0.0, 0.005, 0.008))
    recs = sweeps.run_sweep(cfg)
    assert len(recs) == 1200
    keys = [(r.kappa, r.n_atoms, r.delta_hz) for r in recs]
    grid = np.linspace(-20e6, 20e6, 400)
    assert keys == [(k, 1e14, float(d)) for k in (0.0, 0.005, 0.008) for d in grid]
    assert all(r.flag == "ok" for r in recs)


def test_n_family_order():
    cfg = small(n_atoms=[100, 200, 300], kappa=[0.008])
    recs = sweeps.run_sweep(cfg)
    assert [r.n_atoms for r in recs[::21]] == [100.0, 200.0, 300.0]


def test_single_point_csv(tmp_path):
    cfg = small(points=3)
    recs = sweeps.run_sweep(cfg)[:1]
    sweeps.write_csv(recs, tmp_path / "one.csv")
    lines = (tmp_path / "one.csv").read_text().splitlines()
    assert lines[0].split(",") == list(sweeps.CSV_HEADER)
    assert len(lines) == 2


def test_csv_round_trip(tmp_path):
    recs = sweeps.run_sweep(small(kappa=[0.0, 0.008]))
    sweeps.write_csv(recs, tmp_path / "s.csv")
    assert sweeps.read_csv(tmp_path / "s.csv") == recs


def test_undeformed_sweep_matches_bare_baseline():
    cfg = small(eta_zero=True)
    recs = sweeps.run_sweep(cfg)
    model = sweeps.model_for(cfg, 0.0, 1e14)
    delta = TWO_PI * sweeps.delta_grid_hz(cfg)
    hp = model.hamiltonian_params(delta)
    bare = HamiltonianParams(omega_p=hp.omega_p, delta=hp.delta, K1=hp.K1, K2=hp.K2, kappa=0.0, eta=0.0)
    fq = FieldQuantization(model.omega_p, cfg.resolved_volume(), cfg.photon_number())
    chi1, chi3, chi5 = susceptibilities(bare, fq)
    want = chi1 + chi3 * fq.field**2 + chi5 * fq.field**4
    got = np.array([r.chi for r in recs])
    assert np.array_equal(got, want)
    assert np.max(np.abs(got - want)) <= 1e-12


def test_sign_report_flags_sub_and_superluminal():
    recs = sweeps.run_sweep(small(kappa=[0.008]))
    summary, lines = sweeps.sign_report(recs)
    assert len(summary) == 1 and len(lines) == 1
    assert summary[0]["subluminal_and_superluminal"]
    assert summary[0]["n_group_min"] < 1 < summary[0]["n_group_max"]


def test_emit_and_determinism(tmp_path):
    cfg = small(kappa=[0.0, 0.005, 0.008], formats=["csv", "json", "svg"])
    recs = sweeps.run_sweep(cfg)
    a = sweeps.emit(recs, cfg, tmp_path / "a")
    b = sweeps.emit(sweeps.run_sweep(cfg), cfg, tmp_path / "b")
    assert [p.name for p in a] == [p.name for p in b]
    for pa, pb in zip(a, b):
        assert pa.read_bytes() == pb.read_bytes()
    doc = json.loads((tmp_path / "a" / "sweep.json").read_text())
    assert doc["metadata"]["columns"] == list(sweeps.CSV_HEADER)
    assert doc["metadata"]["errata_path"] == "derived"
    assert len(doc["records"]) == len(recs)
    svg = (tmp_path / "a" / "n_group_N1e+14.svg").read_text()
    assert svg.count("<polyline") == 3
    assert 'stroke-dasharray="2,3"' in svg and 'stroke-dasharray="8,3,2,3"' in svg


def test_svg_timestamp(tmp_path):
    cfg = small(formats=["svg"])
    recs = sweeps.run_sweep(cfg)
    sweeps.emit(recs, cfg, tmp_path, timestamp=True)
    assert "+00:00</text>" in (tmp_path / "n_group_N1e+14.svg").read_text()


def test_emit_rejects_empty(tmp_path):
    with pytest.raises(ValueError):
        sweeps.emit([], small(), tmp_path)


def test_emit_unwritable(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(OSError):
        sweeps.emit(sweeps.run_sweep(small()), small(), blocker / "sub")


def test_thread_count_does_not_change_output(monkeypatch):
    cfg = small(kappa=[0.0, 0.005, 0.008], n_atoms=[100, 300])
    monkeypatch.setenv("DEFBEC_THREADS", "1")
    serial = sweeps.run_sweep(cfg)
    monkeypatch.setenv("DEFBEC_THREADS", "6")
    assert sweeps.run_sweep(cfg) == serial
    monkeypatch.setenv("DEFBEC_THREADS", "many")
    with pytest.raises(ValueError):
        sweeps.run_sweep(cfg)


def test_branch_point_flag(monkeypatch):
    cfg = small(points=5)

    def fake_chi_total(delta, n, model):
        spec = real_chi_total(delta, n, model)
        chi = spec.chi_total.copy()
        chi[2] = -1.0
        return dataclasses.replace(spec, chi_total=chi)

    real_chi_total = sweeps.chi_total
    monkeypatch.setattr(sweeps, "chi_total", fake_chi_total)
    recs = sweeps.run_sweep(cfg)
    assert recs[2].flag == "branch"
    assert all(r.flag in ("ok", "nonfinite") for i, r in enumerate(recs) if i != 2)

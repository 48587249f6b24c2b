import json
import math

import pytest

import osl


def test_default_config_round_trips():
    text = osl.default_config()
    assert osl.canonical_config(text) == text
    assert len(osl.config_hash(text)) == 16
    assert "g = 10" in text


def test_overrides_and_bad_keys():
    text = osl.canonical_config("", {"uav_count": "5"})
    assert "uav_count = 5" in text
    with pytest.raises(osl.ConfigError):
        osl.canonical_config("g = 25\n")
    with pytest.raises(ValueError):
        osl.canonical_config("", {"nonsense": "1"})


def test_energy_table_rows():
    assert osl.movement_energy(261, 893, 223)["E_M"] == pytest.approx(1476.27, abs=0.01)
    assert osl.movement_energy(216, 907, 190)["E_M"] == pytest.approx(1351.71, abs=0.01)


def test_plume_helpers():
    near = osl.encounter_rate((10, 25, 25))
    far = osl.encounter_rate((10, 15, 25))
    assert near > far > 0
    assert osl.max_step(0.02) == 5
    assert 0 < osl.diffusion_ratio() < 1


def test_payloads_and_variants():
    assert osl.payload_values("muc-osl") == (12, 14)
    assert osl.payload_values("col-inf", 100) == (400, 400)
    assert set(osl.variants()) == {"muc-osl", "col-inf", "col-pf", "adap-pp"}


def test_run_is_deterministic():
    a = osl.run(seed=3, k_max=20)
    b = osl.run(seed=3, k_max=20)
    assert a["trajectory_csv"] == b["trajectory_csv"]
    lines = a["trajectory_csv"].splitlines()
    assert lines[0].startswith("# seed=3 ")
    assert lines[1].startswith("iter,uav_id,x,y,z")
    summary = json.loads(a["summary_json"])
    assert summary["run_count"] == 1


def test_monte_carlo_summary():
    one = osl.monte_carlo(runs=4, seed=9, workers=1, k_max=15)
    two = osl.monte_carlo(runs=4, seed=9, workers=2, k_max=15)
    assert one == two
    assert one["run_count"] == 4
    assert len(one["search_times"]) == 4
    assert 0.0 <= one["success_rate"] <= 1.0
    team = one["team_energy"]
    assert math.isclose(team["E_M"], team["E_f"] + team["E_h"] + team["E_b"], rel_tol=1e-5)

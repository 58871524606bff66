import json
import math

import numpy as np
import pytest

import vss

SMALL = json.dumps({
    "pump": {"duration_fs": 60},
    "crystal": {"length_m": 0.004},
    "grid": {"half_width_ev": 0.06, "points": 64},
    "scan": {"delay_points": 256},
})


def test_default_config_round_trips():
    text = vss.default_config()
    assert json.loads(vss.normalize_config(text)) == json.loads(text)
    assert json.loads(text)["grid"]["points"] == 1024


def test_unknown_key_is_a_value_error():
    with pytest.raises(ValueError, match="pump.power_w"):
        vss.normalize_config('{"pump": {"power_w": 1}}')


def test_joint_amplitude_is_normalized():
    amp = vss.joint_amplitude(SMALL)
    values = np.asarray(amp["values"])
    assert values.shape == (64, 64)
    ds = amp["omega_s"][1] - amp["omega_s"][0]
    di = amp["omega_i"][1] - amp["omega_i"][0]
    assert abs(np.sum(np.abs(values) ** 2) * ds * di - 1.0) < 1e-12
    assert -1.0 <= amp["rho"] <= 1.0


def test_schmidt_weights():
    s = vss.schmidt(SMALL)
    lam = np.asarray(s["lambdas"])
    assert abs(np.sum(lam**2) - 1.0) < 1e-10
    assert np.all(np.diff(lam) <= 0)


def test_delay_scan_groups_add_up():
    t = vss.delay_scan(SMALL, photon_number=2.0, threads=1)
    assert len(t["delays"]) == 256
    total = np.asarray(t["noise"]) + np.asarray(t["classical"]) + np.asarray(t["quantum"])
    assert np.allclose(total, t["total"], rtol=1e-12)
    assert min(t["total"]) >= 0.0


def test_spectrogram_finds_a_tone():
    hbar = 0.6582119569
    delays = np.linspace(0.0, 8000.0, 1024, endpoint=False)
    trace = np.cos(0.05 * delays / hbar)
    spec = vss.spectrogram(trace, delays)
    peaks = vss.detect_peaks(spec)
    assert abs(peaks[0][0] - 0.05) < spec.bin_width
    assert math.isfinite(vss.signal_to_background(spec, [peaks[0][0]]))


def test_run_writes_outputs(tmp_path):
    r = vss.run("schmidt", SMALL, str(tmp_path), threads=1)
    assert "data.csv" in r["files"]
    assert (tmp_path / "manifest.json").exists()

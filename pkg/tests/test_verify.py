import json

import numpy as np
import pytest

from fracgreen import ModelParams, ParameterError, UsageError, kernel, verify
from fracgreen.verify import SUITE_NAMES, run_suite

P31 = ModelParams(3, 1.0, p=1.8)

FAST = {
    "ball-lemma21": 500,
    "half-lemma51": 500,
    "monotonicity": 100,
    "limits": 64,
    "asymptotics": 33,
    "scaling-R": 3,
    "kelvin": 50,
    "harnack": 100,
    "liouville": 10,
}


def test_registry_names_are_stable():
    assert set(FAST) < set(SUITE_NAMES)
    assert len(SUITE_NAMES) == 13


@pytest.mark.parametrize("name", sorted(FAST))
def test_fast_suites_pass(name):
    rep = run_suite(name, P31, FAST[name], seed=0)
    assert rep.violations == 0
    assert np.isfinite(rep.worst_margin)
    if name == "harnack":
        # records-only suite: margin is 0 by convention
        assert rep.worst_margin == 0.0
    else:
        assert rep.worst_margin > 1e-10
    assert rep.samples >= 1
    assert rep.passed


def test_unknown_suite_rejected():
    with pytest.raises(UsageError) as err:
        run_suite("no-such-suite", P31, 10, seed=0)
    # the error lists the valid names so the caller can self-correct
    assert "ball-lemma21" in str(err.value)


def test_sample_count_validated():
    with pytest.raises(ParameterError):
        run_suite("limits", P31, 0, seed=0)


@pytest.mark.parametrize("name", ["ball-lemma21", "kelvin", "monotonicity"])
def test_seeded_determinism(name):
    a = run_suite(name, P31, FAST[name], seed=7)
    b = run_suite(name, P31, FAST[name], seed=7)
    da, db = a.as_dict(), b.as_dict()
    da.pop("runtime_ms")
    db.pop("runtime_ms")
    assert da == db


def test_different_seed_changes_margins():
    a = run_suite("ball-lemma21", P31, 500, seed=1)
    b = run_suite("ball-lemma21", P31, 500, seed=2)
    assert a.worst_margin != b.worst_margin


def test_report_serializes_to_json():
    rep = run_suite("limits", P31, 32, seed=0)
    blob = json.loads(json.dumps(rep.as_dict()))
    assert blob["suite"] == "limits"
    assert blob["n"] == 3 and blob["alpha"] == 1.0
    assert blob["passed"] is True
    assert isinstance(blob["criterion"], str) and len(blob["criterion"]) > 40
    assert isinstance(blob["empirical_constants"], dict)


def test_lemma_suites_report_margin_split():
    rep = run_suite("half-lemma51", P31, 400, seed=3)
    c = rep.empirical_constants
    for key in ("min_margin_pair", "min_margin_difference",
                "min_margin_complement", "redrawn"):
        assert key in c
    assert rep.worst_margin == min(c["min_margin_pair"],
                                   c["min_margin_difference"],
                                   c["min_margin_complement"])
    assert c["redrawn"] >= 0.0


def test_limits_records_reference_rates():
    rep = run_suite("limits", P31, 64, seed=0)
    c = rep.empirical_constants
    # alpha = 1: measured sharp slopes are 1 and 1/2; the low-end reference
    # ratio is 2, inside the documented factor-3 window
    assert c["slope_low"] == pytest.approx(1.0, rel=1e-3)
    assert c["slope_high"] == pytest.approx(0.5, rel=1e-3)
    assert c["rate_ratio_low_reference"] == pytest.approx(2.0, rel=1e-3)
    assert c["bracket_low_end"] > 0.99
    assert c["bracket_high_end"] < 0.01


def test_harnack_records_but_never_asserts():
    rep = run_suite("harnack", P31, 200, seed=5)
    c = rep.empirical_constants
    assert rep.violations == 0
    assert c["ratio_sup"] >= c["ratio_inf"] > 0.0
    assert c["oscillation"] >= 1.0
    assert c["pole_gap"] > 1.0


def test_green_oracle_center_reference_is_exact():
    # alpha = 1, n = 3: the center integral of the r^2 (1-r^2)^2 source
    # reduces to (2/pi) * B(3/2, 7/2) / 2 = 5/128 in closed form
    rep = run_suite("green-oracle", P31, 2, seed=0)
    c = rep.empirical_constants
    assert c["center_reference"] == pytest.approx(5.0 / 128.0, rel=1e-9)
    assert c["center_rel_err"] <= 1e-3
    assert c["torsion_constant"] == pytest.approx(0.5, rel=1e-12)
    assert rep.violations == 0


def test_alpha_harmonic_defect_small_and_shrinking():
    rep = run_suite("alpha-harmonic", P31, 6, seed=0)
    c = rep.empirical_constants
    assert rep.violations == 0
    assert c["max_defect_coarse"] <= 0.05
    assert c["max_defect_fine"] < c["max_defect_coarse"]


def test_hls_band_and_exponents():
    rep = run_suite("hls", P31, 4, seed=0)
    c = rep.empirical_constants
    assert rep.violations == 0
    assert c["band"] <= 3.0
    assert c["exponent_p"] == pytest.approx(4.0)
    assert c["exponent_q"] == pytest.approx(12.0 / 7.0)


def test_symmetry_suite_full_pipeline():
    rep = run_suite("symmetry", P31, 12, seed=0)
    c = rep.empirical_constants
    assert rep.violations == 0
    assert c["residual"] <= 1e-8
    assert c["radial_deviation"] <= 1e-3
    for ax in range(3):
        assert abs(c[f"lambda0_axis{ax}"]) <= 0.9 / 11 + 1e-12
    assert c["lambda_star"] == pytest.approx(0.13668715278010493, rel=1e-6)


def test_symmetry_requires_p():
    with pytest.raises(ParameterError):
        run_suite("symmetry", ModelParams(3, 1.0), 8, seed=0)


def test_liouville_anchor_and_scan():
    rep = run_suite("liouville", ModelParams(3, 1.0), 10, seed=0)
    c = rep.empirical_constants
    assert rep.violations == 0
    assert c["anchor_ok"] == 1.0
    assert c["min_tau"] > 0.0
    assert rep.samples == 3 * 9 * 10


def test_default_sample_counts():
    rep = run_suite("asymptotics", P31, seed=0)
    assert rep.samples == verify.DEFAULT_SAMPLES["asymptotics"]
    assert rep.violations == 0


def test_tamper_hook_flips_suites_to_failing(monkeypatch):
    # a skewed kernel constant must be caught; use a parameter set no other
    # test shares so the poisoned cache entry cannot leak
    pa = ModelParams(3, 1.25)
    monkeypatch.setenv("FRACGREEN_TAMPER_B", "0.5")
    kernel._tables.cache_clear()
    try:
        bad = run_suite("limits", pa, 64, seed=0)
    finally:
        monkeypatch.delenv("FRACGREEN_TAMPER_B")
        kernel._tables.cache_clear()
    good = run_suite("limits", pa, 64, seed=0)
    assert bad.violations > 0 and not bad.passed
    assert good.violations == 0 and good.passed

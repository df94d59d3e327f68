import math

import pytest

import rumour_sim as rs

HALF = {"kind": "finite", "pmf": {"0": 0.5, "1": 0.5}}
PL2 = {"kind": "power_law", "alpha": 2}


def test_power_law_anchor():
    assert abs(1e4 * rs.tail(PL2, 10000) - 6 / math.pi**2) < 1e-3


def test_half_half_reach():
    for n in range(1, 8):
        assert rs.exact_reach_prob(HALF, n) == pytest.approx(2.0**-n, abs=1e-14)
        lo, hi = rs.oracle(HALF, n)
        assert lo == pytest.approx(2.0**-n, abs=1e-12)
        assert hi == pytest.approx(lo)


def test_simulate_matches_exact():
    est = rs.simulate({"distribution": HALF, "horizon": 4, "trials": 20000, "seed": 3, "workers": 2})
    assert est["trials"] == 20000
    p = 1 / 16
    assert abs(est["p_hat"] - p) <= 4 * math.sqrt(p * (1 - p) / 20000)


def test_criteria_verdicts():
    v = rs.criteria(PL2)
    assert v["firework_homogeneous"]["verdict"] == "Dies"
    assert v["reverse_homogeneous"]["verdict"] == "SurvivesAlmostSurely"


def test_sweep_is_deterministic():
    cfg = {"distribution": PL2, "horizon": 50, "trials": 500, "seed": 9,
           "sweep": {"param": "alpha", "values": [1.5, 2.5]}}
    a = rs.sweep(dict(cfg, workers=1))
    b = rs.sweep(dict(cfg, workers=3))
    assert a == b
    assert len(a["rows"]) == 2


def test_config_error():
    with pytest.raises(ValueError, match="alpha"):
        rs.tail({"kind": "power_law", "alpha": 0.5}, 3)

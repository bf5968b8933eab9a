"""Smoke tests of the python bindings."""

import json
import math

import pytest

import supernorm as sn


def test_norm_eval_and_gradient():
    n2 = sn.Norm.lp(2.0, 2)
    assert n2.value([3.0, 4.0]) == pytest.approx(5.0)
    g = n2.gradient([3.0, 4.0])
    assert g == pytest.approx([0.6, 0.8])
    assert n2.dual_value([3.0, 4.0]) == pytest.approx(5.0)
    assert n2.supermod_p == 2.0

    topk = sn.Norm.topk(2, 4)
    assert topk.value([5.0, 1.0, 3.0, 2.0]) == pytest.approx(8.0)
    with pytest.raises(ValueError):
        n2.value([1.0, -1.0])


def test_json_round_trip():
    norm = sn.Norm.lp_combine([sn.Norm.lp(1.0, 3), sn.Norm.lp(2.0, 3)], [1.0, 0.5], 2.0)
    back = sn.Norm.from_json(norm.to_json())
    x = [0.3, 1.2, 0.7]
    assert back.value(x) == norm.value(x)
    assert json.loads(back.to_json()) == json.loads(norm.to_json())


def test_orlicz_pipeline():
    G = sn.topk_orlicz(2)
    assert sn.orlicz_eval(G, [1.0, 1.0, 1.0, 1.0]) == pytest.approx(4.0 / 3.0)
    top = sn.Norm.topk(2, 4)
    approx = sn.approximate_orlicz_norm(G, 4)
    lo, hi = sn.estimate_approx_ratio(top, approx, samples=200, seed=1)
    assert lo >= 0.5 - 1e-9
    assert hi <= 48.0 + 1e-9

    # the smoothed hinge sum satisfies the growth condition at the pipeline
    # exponent p = ceil(2 ln 4) + 1 = 4
    F = sn.smooth_hinges(sn.piecewise_approx(sn.OrliczFunction.power(2.0), 4), 4.0)
    cert = sn.growth_check(F, 4.0)
    assert cert["passed"]
    assert cert["label"] == "sampled"


def test_certify():
    rep = sn.check_four_point(sn.Norm.lp(2.0, 4), 2.0, samples=2000, seed=7)
    assert rep["passed"]
    bad = sn.check_hessian(sn.Norm.l1_plus_l2(16), 1.3, samples=100, seed=7)
    assert not bad["passed"]


def test_online_runs():
    inst = sn.generate_instance("loadbalance", json.dumps({"T": 4, "n": 2, "p": 2.0}), 0)
    trace = sn.greedy_loadbalance(inst)
    opt = sn.brute_opt_loadbalance(inst)
    bound = 1.0 / (2.0 ** 0.5 - 1.0)
    assert trace["summary"]["final_cost"] <= bound * opt * (1 + 1e-9)

    probe = sn.generate_instance("probe", json.dumps({"n": 3, "card": 2}), 1)
    rep = sn.probe_report(probe, mc=20000, seed=2)
    assert rep["adapt"] >= rep["nonadapt"] - 1e-9
    assert rep["nonadapt"] >= rep["hallucination_mean"] - 3 * rep["hallucination_stderr"] - 1e-9

    gains = [[1.0, 0.0, 0.0, 0.0]] * 20
    run = sn.olo_ftpl(sn.Norm.lp(2.0, 4), gains, 2.0, 0.5)
    assert run["summary"]["satisfied"]


def test_smoothing_bracket():
    base = sn.Norm.linf(2)
    smooth = sn.Norm.smoothed(base, 0.5, 3, 20000)
    v = smooth.value([1.0, 1.0])
    assert 1.0 <= v <= 1.5

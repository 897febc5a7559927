import random

import pytest

from ffzeta.fields import FieldSpec, FqElem
from ffzeta.polyring import APoly, MPoly
from ffzeta.oracle import (CharsumConfig, charsum_trial, random_charsum_config,
                           enumerated_power_sum, threshold_scan,
                           ENUMERATION_BUDGET)
from ffzeta.zeta import power_sum

F2 = FieldSpec.default(2)
F3 = FieldSpec.default(3)
F4 = FieldSpec.default(4)


def test_charsum_r0_vanishes():
    cfg = CharsumConfig(3, 2, F3, maps=(), offsets=())
    assert not charsum_trial(cfg)


def test_charsum_sharpness_witness():
    # p=2, r=1, dim=1, f=id, x=0: the two-term sum 0 + 1 = 1
    cfg = CharsumConfig(2, 1, F2, maps=(((1,),),), offsets=(FqElem(F2, 0),))
    assert charsum_trial(cfg).code == 1


def test_charsum_predicted_zero_randomized():
    rng = random.Random(2024)
    for p in (2, 3, 5):
        spec = FieldSpec.default(p)
        trials = 0
        while trials < 150:
            r = rng.randrange(0, 2 * (p - 1) * 4 + 1)
            dim_lo = r // (p - 1) + 1
            dim = rng.randrange(dim_lo, dim_lo + 3)
            if p ** dim > 200000:
                continue
            cfg = random_charsum_config(rng, p, dim, r, spec)
            assert cfg.predicted_zero()
            assert not charsum_trial(cfg)
            trials += 1


def test_charsum_extension_field_target():
    rng = random.Random(7)
    for target in (F4, FieldSpec.default(9)):
        p = target.p
        for _ in range(50):
            r = rng.randrange(0, 3 * (p - 1))
            dim = r // (p - 1) + 1 + rng.randrange(0, 2)
            cfg = random_charsum_config(rng, p, dim, r, target)
            assert not charsum_trial(cfg)


def test_charsum_exact_value_against_direct_loop():
    rng = random.Random(13)
    import itertools
    for _ in range(25):
        p = rng.choice((2, 3))
        spec = FieldSpec.default(p)
        dim = rng.randrange(1, 4)
        r = rng.randrange(0, 4)
        cfg = random_charsum_config(rng, p, dim, r, spec)
        expected = FqElem(spec, 0)
        for w in itertools.product(range(p), repeat=dim):
            term = FqElem(spec, 1)
            for m, x in zip(cfg.maps, cfg.offsets):
                coords = [sum(rc * wc for rc, wc in zip(row, w)) % p for row in m]
                term = term * (x + FqElem(spec, spec.from_coords(coords)))
            expected = expected + term
        assert charsum_trial(cfg) == expected


def test_charsum_symbolic_target():
    # symbolic offsets and basis: the vanishing law holds verbatim
    names = ("u",)
    basis = (MPoly.variable(names, "u", FqElem(F2, 1)),)
    rng = random.Random(3)
    for _ in range(20):
        r = rng.randrange(0, 5)
        dim = r + 1
        cfg = random_charsum_config(rng, 2, dim, r, F2, basis=basis)
        assert charsum_trial(cfg).is_zero()
    # sharpness at dim = r/(p-1): x + f(w) with f = u-coefficient 1
    cfg = CharsumConfig(2, 1, F2, maps=(((1,),),),
                        offsets=(MPoly.zero(names),), basis=basis)
    value = charsum_trial(cfg)
    assert value == MPoly(names, {(1,): FqElem(F2, 1)})


def test_charsum_budget():
    cfg = CharsumConfig(5, 11, FieldSpec.default(5),
                        maps=(), offsets=())
    with pytest.raises(ValueError):
        charsum_trial(cfg)


def test_charsum_config_validation():
    with pytest.raises(ValueError):
        CharsumConfig(2, 2, F3, maps=(), offsets=())  # characteristic mismatch
    with pytest.raises(ValueError):
        CharsumConfig(2, 2, F2, maps=(((1,),),), offsets=(FqElem(F2, 0),))  # bad columns


def test_enumerated_power_sum_matches_fast_path():
    for spec in (F2, F3, F4):
        for d in range(4):
            for n in range(0, 20):
                assert enumerated_power_sum(spec, d, n) == power_sum(spec, d, n)


def test_threshold_scan_powersum():
    report = threshold_scan("powersum", spec=F2, d_max=5, n_max=64)
    assert report["complete"]
    assert report["violations"] == []
    assert report["fast_path_mismatches"] == []
    # observed sharpness: some rows are nonzero right below the bound
    assert any(not r["zero"] and not r["predicted"] for r in report["rows"])


def test_threshold_scan_twisted():
    report = threshold_scan("twisted", spec=F3, d_max=4, s_max=4)
    assert report["violations"] == []
    assert report["complete"]


def test_threshold_scan_char_observes_sharp_bound():
    report = threshold_scan("char", spec=F3, P=APoly.theta(F3), delta=2, d_max=4)
    assert report["violations"] == []
    assert report["observed_threshold"] == report["bound"] == 2


def test_threshold_scan_budget_flag():
    report = threshold_scan("powersum", spec=F3, d_max=9, n_max=10, budget=1000)
    assert not report["complete"]

"""Exact probabilities, Monte Carlo estimates, decay and sweeps."""

import math
from fractions import Fraction

import pytest

import oracles
from liegen import estimate, matgrp
from liegen.backend import HAS_NUMBA
from liegen.errors import InvalidConfig
from liegen.rng import derive_seed


def test_wilson_against_scipy():
    for k, n in ((0, 50), (1, 50), (25, 50), (49, 50), (50, 50),
                 (633, 1000), (7, 123)):
        lo, hi = estimate.wilson_interval(k, n)
        slo, shi = oracles.wilson_scipy(k, n)
        assert math.isclose(lo, slo, rel_tol=0, abs_tol=1e-12), (k, n)
        assert math.isclose(hi, shi, rel_tol=0, abs_tol=1e-12), (k, n)
    with pytest.raises(InvalidConfig):
        estimate.wilson_interval(0, 0)


def test_exact_frozen_values():
    assert estimate.exact_P(matgrp.parse_group("PSL2", 5), 2, 3).P \
        == Fraction(2, 5)
    res7 = estimate.exact_P(matgrp.parse_group("PSL2", 7), 2, 3)
    assert res7.P == Fraction(2, 7)
    assert res7.pairs == 21 * 56
    assert res7.numerator == 336


def test_exact_whole_group():
    res = estimate.exact_P(matgrp.parse_group("SL2", 5))
    assert res.P == Fraction(19, 30)
    assert res.pairs == 120 * 120
    assert res.numerator == 9120
    assert res.counts[0] + res.counts[3] == res.pairs


def test_exact_per_class_psl2_9():
    """Both order-3 classes of PSL2(9) give zero against involutions."""
    res = estimate.exact_P(matgrp.parse_group("PSL2", 9), 2, 3)
    assert res.P == 0
    fracs = {(c.label_c, c.label_d): c.fraction for c in res.cells}
    assert fracs == {("2a", "3a"): 0, ("2a", "3b"): 0}


def test_exact_class_restricted():
    g5 = matgrp.parse_group("SL2", 5)
    rc = estimate.exact_P_classes(g5, "4a", "3a")
    assert rc.P == Fraction(2, 5)
    assert rc.restricted and rc.pairs == 30 * 20
    with pytest.raises(InvalidConfig):
        estimate.exact_P_classes(g5, "4c", "3a")
    with pytest.raises(InvalidConfig):
        estimate.exact_P_classes(g5, "whole", "3a")


def test_exact_equals_weighted_class_average():
    for fam, q in (("PSL2", 5), ("PSL2", 7)):
        g = matgrp.parse_group(fam, q)
        agg = estimate.exact_P(g, 2, 3)
        total = Fraction(0)
        pairs = 0
        for i in range(len(matgrp.elements_of_order(g, 2))):
            for j in range(len(matgrp.elements_of_order(g, 3))):
                cell = estimate.exact_P_classes(
                    g, f"2{chr(97 + i)}", f"3{chr(97 + j)}")
                total += cell.P * cell.pairs
                pairs += cell.pairs
        assert pairs == agg.pairs
        assert total / pairs == agg.P


def test_exact_empty_class_flag():
    res = estimate.exact_P(matgrp.parse_group("PSL2", 5), 4, 3)
    assert res.empty and res.P == 0 and res.pairs == 0
    with pytest.raises(InvalidConfig):
        estimate.exact_P(matgrp.parse_group("PSL2", 5), 2, None)


def test_monte_carlo_brackets_exact():
    g = matgrp.parse_group("SL2", 5)
    rep = estimate.monte_carlo_P(g, 20000, seed=7)
    assert rep.lo95 < 19 / 30 < rep.hi95
    assert sum(rep.counts) == rep.trials
    assert rep.pessimistic_point <= rep.optimistic_point
    assert rep.lo95 <= rep.point <= rep.hi95


def test_monte_carlo_thread_and_block_invariance():
    g = matgrp.parse_group("SL2", 9)
    base = estimate.monte_carlo_P(g, 6000, seed=3)
    for threads, block in ((4, 4096), (8, 512), (1, 100)):
        rep = estimate.monte_carlo_P(g, 6000, seed=3, threads=threads,
                                     block=block)
        assert rep.counts == base.counts


@pytest.mark.skipif(not HAS_NUMBA, reason="needs the compiled backend")
def test_monte_carlo_backend_parity():
    g = matgrp.parse_group("SL2", 9)
    a = estimate.monte_carlo_P(g, 3000, seed=11, backend="numba")
    b = estimate.monte_carlo_P(g, 3000, seed=11, backend="numpy")
    assert a.counts == b.counts


def test_monte_carlo_order_mode():
    g = matgrp.parse_group("SL2", 5)
    rep = estimate.monte_carlo_P(g, 8000, seed=5, mode="order", r=4, s=3)
    assert rep.lo95 < 0.4 < rep.hi95
    p9 = estimate.monte_carlo_P(matgrp.parse_group("PSL2", 9), 2000,
                                seed=5, mode="order", r=2, s=3)
    assert p9.generates == 0                    # exact value is zero
    with pytest.raises(InvalidConfig):
        estimate.monte_carlo_P(g, 100, seed=1, mode="order", r=2)
    with pytest.raises(InvalidConfig):
        estimate.monte_carlo_P(g, 0, seed=1)


def test_monte_carlo_generic_family_against_exact():
    g = matgrp.parse_group("SL3", 2)
    rep = estimate.monte_carlo_P(g, 300, seed=5)
    ex = float(estimate.exact_P(g).P)
    assert rep.lo95 < ex < rep.hi95
    assert rep.counts[4] == 0                   # closure always decides


def test_order_trend_toward_one():
    """The class-pair estimates grow with q (tiny instance)."""
    p9 = estimate.monte_carlo_P(matgrp.parse_group("PSL2", 9), 1500,
                                seed=2, mode="order", r=2, s=3)
    p25 = estimate.monte_carlo_P(matgrp.parse_group("PSL2", 25), 1500,
                                 seed=2, mode="order", r=2, s=3)
    assert p9.point < p25.point


def test_decay_exact_small_field():
    row = estimate.subfield_trace_decay(2, 2, exact=True)
    assert row.fraction == Fraction(17, 30)
    assert row.trials == 3600
    assert row.exact and row.q == 4
    assert math.isclose(row.scaled, 17 / 30 * 2)


def test_decay_sampled_and_validation():
    m = estimate.subfield_trace_decay(2, 2, trials=20000, seed=1)
    assert abs(m.fraction - 17 / 30) < 0.02
    if HAS_NUMBA:
        a = estimate.subfield_trace_decay(2, 4, trials=4000, seed=2,
                                          backend="numba")
        b = estimate.subfield_trace_decay(2, 4, trials=4000, seed=2,
                                          backend="numpy")
        assert a.fraction == b.fraction
    # the empty word's trace is 2, always in the prime field
    e = estimate.subfield_trace_decay(3, 2, word="", trials=50, seed=0)
    assert float(e.fraction) == 1.0
    with pytest.raises(InvalidConfig):
        estimate.subfield_trace_decay(5, 1)
    with pytest.raises(InvalidConfig):
        estimate.subfield_trace_decay(2, 2, trials=0)


def test_sweep_sub_seeds():
    sw = estimate.sweep("SL2", [5, 7], 1500, master_seed=42)
    assert [r.group.q for r in sw] == [5, 7]
    assert sw[0].seed == derive_seed(42, "SL2", 5)
    assert sw[1].seed == derive_seed(42, "SL2", 7)
    solo = estimate.monte_carlo_P(matgrp.parse_group("SL2", 7), 1500,
                                  sw[1].seed)
    assert solo.counts == sw[1].counts

"""Span, trace fields, closure and the SL2 two-generator classifier."""

import numpy as np
import pytest

import oracles
from liegen import gentest, matgrp
from liegen.errors import CapExceeded, InvalidConfig
from liegen.rng import Stream


def _mats(group, *texts):
    return [matgrp.parse_matrix(group, t) for t in texts]


def test_algebra_span_examples():
    g = matgrp.parse_group("SL2", 7)
    assert gentest.algebra_span([matgrp.identity(g)]) == 1
    # two upper triangulars only ever span the triangular algebra
    diag, unip = _mats(g, "3 0 ; 0 5", "1 1 ; 0 1")
    assert gentest.algebra_span([diag, unip]) == 3
    # opposite unipotents fill all four dimensions
    low = matgrp.parse_matrix(g, "1 0 ; 1 1")
    assert gentest.algebra_span([unip, low]) == 4
    assert gentest.is_irreducible([unip, low])
    assert not gentest.is_irreducible([diag, unip])


def test_algebra_span_scalar_and_single():
    g = matgrp.parse_group("SL2", 5)
    neg = matgrp.parse_matrix(g, "4 0 ; 0 4")
    assert gentest.algebra_span([neg]) == 1
    d = matgrp.parse_matrix(g, "2 0 ; 0 3")
    assert gentest.algebra_span([d]) == 2        # diagonal algebra


def test_fricke_reducibility_matches_span():
    """tr[x,y] = 2 exactly captures span < 4 for SL2 pairs."""
    g = matgrp.parse_group("SL2", 9)
    f = g.field
    two = f.elem(2)
    stream = Stream(31)
    both = {True: 0, False: 0}
    for _ in range(150):
        x = matgrp.sample_uniform(g, stream.next_trial())
        y = matgrp.sample_uniform(g, stream.next_trial())
        comm = x * y * x.inverse() * y.inverse()
        red = comm.trace() == two
        both[red] += 1
        assert red == (gentest.algebra_span([x, y]) < 4)
    assert both[False] > 0                      # saw both outcomes


def test_trace_field_pair_routes():
    g = matgrp.parse_group("SL2", 9)
    # entries over the prime field keep every word trace in F_3
    x, y = _mats(g, "1 1 ; 0 1", "1 0 ; 1 1")
    assert gentest.trace_field([x, y]) == 1
    # a generator-trace pair reaches the full degree
    x2, y2 = _mats(g, "0,1 1 ; 2 0", "1 1 ; 0 1")
    assert gentest.trace_field([x2, y2]) == 2


def test_trace_field_higher_dimension():
    g = matgrp.parse_group("SL3", 4)
    gens = matgrp.standard_generators(g)
    assert gentest.trace_field(gens) == 1       # elementary entries
    with pytest.raises(InvalidConfig):
        gentest.trace_field([])


def test_trace_field_certified_pairs_reach_full_degree():
    g = matgrp.parse_group("SL2", 9)
    stream = Stream(7)
    hits = 0
    tried = 0
    while hits < 25 and tried < 400:
        tried += 1
        x = matgrp.sample_uniform(g, stream.next_trial())
        y = matgrp.sample_uniform(g, stream.next_trial())
        v = gentest.dickson_kind(x, y)
        if v.generates:
            hits += 1
            assert gentest.trace_field([x, y]) == 2
    assert hits == 25


def test_subgroup_closure_abelian_example():
    """{-I, diag(2,3)} over F_7 closes to 12 elements.  diag(2,3) has
    determinant 6, so this runs as a GL2 semigroup closure; the closure
    machinery never requires membership."""
    g = matgrp.parse_group("SL2", 7)
    neg = matgrp.SquareMatrix(g, np.array([6, 0, 0, 6], dtype=np.int64))
    d23 = matgrp.SquareMatrix(g, np.array([2, 0, 0, 3], dtype=np.int64))
    out = gentest.subgroup_closure([neg, d23], cap=200, stop_over=200)
    assert out.complete and out.size == 12
    # matches the naive tuple-set closure
    naive = oracles.closure_set([(6, 0, 0, 6), (2, 0, 0, 3)], 7)
    assert len(naive) == 12


def test_subgroup_closure_cap_raises():
    g = matgrp.parse_group("SL2", 11)
    gens = matgrp.standard_generators(g)
    with pytest.raises(CapExceeded):
        gentest.subgroup_closure(gens, cap=50, stop_over=2000)


def test_sl2_closure_bound_values():
    assert gentest.sl2_closure_bound(matgrp.parse_group("SL2", 5)) == 60
    assert gentest.sl2_closure_bound(matgrp.parse_group("SL2", 4)) == 30
    assert gentest.sl2_closure_bound(matgrp.parse_group("SL2", 9)) == 120
    b13 = gentest.sl2_closure_bound(matgrp.parse_group("SL2", 13))
    assert b13 == 120                            # max(120, 56) and huge |G|
    b25 = gentest.sl2_closure_bound(matgrp.parse_group("SL2", 25))
    assert b25 == max(120, 4 * 26, int(2 * 5 * 24))


def test_dickson_kind_validation():
    g3 = matgrp.parse_group("SL2", 3)
    x = matgrp.identity(g3)
    with pytest.raises(InvalidConfig):
        gentest.dickson_kind(x, x)
    g = matgrp.parse_group("SL2", 9)
    h = matgrp.parse_group("SL2", 25)
    with pytest.raises(InvalidConfig):
        gentest.dickson_kind(matgrp.identity(g), matgrp.identity(h))


def test_dickson_witnesses():
    g = matgrp.parse_group("SL2", 9)
    # prime-field entries land in the subfield subgroup
    x, y = _mats(g, "1 1 ; 0 1", "1 0 ; 1 1")
    v = gentest.dickson_kind(x, y)
    assert not v.generates
    assert v.witness == "Subfield(1)"
    # a common eigenvector pair reads Borel or Reducible
    x2, y2 = _mats(g, "1 1 ; 0 1", "0,1 1 ; 0 0,2")
    v2 = gentest.dickson_kind(x2, y2)
    assert not v2.generates
    assert v2.witness in ("Borel", "Reducible")
    # summaries serialize as outcome;witness;method
    assert v.summary().count(";") == 2


def test_dickson_vs_closure_small_battery():
    """300 random pairs at q in {5, 9}: classifier agrees with closure."""
    for q in (5, 9):
        g = matgrp.parse_group("SL2", q)
        stream = Stream(q * 1000)
        order = g.order
        for _ in range(300):
            x = matgrp.sample_uniform(g, stream.next_trial())
            y = matgrp.sample_uniform(g, stream.next_trial())
            v = gentest.dickson_kind(x, y)
            out = gentest.subgroup_closure([x, y], cap=order,
                                           stop_over=order // 2)
            closure_generates = not out.complete
            assert v.generates == closure_generates, (q, v.summary())


def test_generation_verdict_dispatch():
    # small group: closure path settles everything
    g = matgrp.parse_group("SL3", 2)
    gens = matgrp.standard_generators(g)
    v = gentest.generation_verdict(gens)
    assert v.generates and v.method == "closure"

    # prime-field pair inside SL3(4): still enumerable, closure finds
    # the proper subgroup and reports its size
    g4 = matgrp.parse_group("SL3", 4)
    mats = _mats(g4, "1 1 0 ; 0 1 0 ; 0 0 1", "0 1 0 ; 0 0 1 ; 1 0 0")
    v4 = gentest.generation_verdict(mats)
    assert not v4.generates and v4.decided
    assert v4.witness == "Closure(168)"

    # SL2 pairs go through the complete classifier
    g9 = matgrp.parse_group("SL2", 9)
    x, y = _mats(g9, "0,1 1 ; 2 0", "1 1 ; 0 1")
    v9 = gentest.generation_verdict([x, y])
    assert v9.generates

    with pytest.raises(InvalidConfig):
        gentest.generation_verdict([])


def test_generation_verdict_beyond_cap_certificates():
    """SL3(9) is over the cap; prime-entry pairs get a subfield
    certificate, sampled pairs may stay inconclusive."""
    g = matgrp.parse_group("SL3", 9)
    mats = _mats(g, "1 1 0 ; 0 1 0 ; 0 0 1", "0 1 0 ; 0 0 1 ; 1 0 0")
    v = gentest.generation_verdict(mats, cap=100000)
    assert not v.generates and v.decided
    assert v.witness.startswith("Subfield(")
    stream = Stream(3)
    x = matgrp.sample_uniform(g, stream.next_trial())
    y = matgrp.sample_uniform(g, stream.next_trial())
    vv = gentest.generation_verdict([x, y], cap=100000)
    assert vv.summary().split(";")[0] in ("Generates", "Proper",
                                          "Inconclusive")


def test_quotient_closure_verdict():
    g = matgrp.parse_group("PSL2", 3)
    mats = _mats(g, "1 1 ; 0 1", "1 0 ; 1 1")
    v = gentest.generation_verdict(mats)
    assert v.generates and v.method == "closure"


def test_witness_category_mapping():
    g9 = matgrp.parse_group("SL2", 9)
    x, y = _mats(g9, "1 1 ; 0 1", "1 0 ; 1 1")
    v = gentest.dickson_kind(x, y)
    assert gentest.witness_category(v) == 2      # proper subfield column
    x2, y2 = _mats(g9, "0,1 1 ; 2 0", "1 1 ; 0 1")
    assert gentest.witness_category(gentest.dickson_kind(x2, y2)) == 0

"""Group dimensions, the largest-class table and the Scott conditions."""

import pytest

from liegen import algdata as A
from liegen.errors import InvalidConfig


def test_group_construction():
    e8 = A.alg_group("E8")
    assert (e8.rank, e8.dim) == (8, 248)
    assert A.alg_group("G2").dim == 14
    assert A.alg_group("E6").dim == 78
    assert A.alg_group("A5").dim == 35          # n(n+2)
    assert A.alg_group("B3").dim == 21          # n(2n+1)
    assert A.alg_group("C2").dim == 10
    assert A.alg_group("D4").dim == 28          # n(2n-1)
    assert A.alg_group("e7").dim == 133         # case insensitive
    for bad in ("E9", "F5", "G3", "X2", "A0"):
        with pytest.raises(InvalidConfig):
            A.alg_group(bad)


def test_table_lookups():
    r = A.largest_class(A.alg_group("E8"), "p=2", 2)
    assert (r.label, r.dim) == ("A1^4", 128)
    r = A.largest_class("F4", "p!=3", 3)
    assert (r.label, r.dim) == ("A2~A2", 34)
    r = A.largest_class("G2", "p=3", 3)
    assert (r.label, r.dim, r.note) == ("G2(a1)", 10, "two G(q)-classes")
    r = A.largest_class("E7", "p=3", 3)
    assert (r.label, r.dim) == ("A2^2A1", 90)
    assert len(A.TABLE1) == 20


def test_table_lookup_validation():
    with pytest.raises(InvalidConfig):
        A.largest_class("A5", "p=2", 2)          # classical, not tabulated
    with pytest.raises(InvalidConfig):
        A.largest_class("E8", "p=3", 2)          # case/order mismatch
    with pytest.raises(InvalidConfig):
        A.largest_class("E8", "p=2", 5)
    with pytest.raises(InvalidConfig):
        A.largest_class("E8", "p==2", 2)


def test_scott_precondition_examples():
    assert A.scott_precondition("E8", 128, 168) is True
    assert A.scott_precondition("G2", 8, 10) is True
    assert A.scott_precondition("G2", 0, 10) is False
    with pytest.raises(InvalidConfig):
        A.scott_precondition("E8", 128, 248)     # dim must stay below G


def test_every_table_pair_passes_precondition():
    for name in ("E8", "E7", "E6", "F4", "G2"):
        for c2 in ("p=2", "p!=2"):
            for c3 in ("p=3", "p!=3"):
                i = A.largest_class(name, c2, 2)
                o = A.largest_class(name, c3, 3)
                assert A.scott_precondition(name, i.dim, o.dim), \
                    (name, c2, c3)


def test_scott_inequality_examples():
    assert A.scott_inequality("E7", 70, 70, 1) is True
    assert A.scott_inequality("E7", 0, 0, 0) is False
    assert A.scott_inequality("C2", 4, 6, 2) is True
    assert A.scott_inequality("C2", 4, 6, 1) is False
    with pytest.raises(InvalidConfig):
        A.scott_inequality("E7", 70, 70, 3)


def test_default_delta():
    assert A.default_delta("C2", "p=2") == 2
    assert A.default_delta("D4", "p=2") == 2
    assert A.default_delta("C3", "p=2") == 1     # odd rank
    assert A.default_delta("C2", "p!=2") == 1
    assert A.default_delta("E7", "p=2") == 1


def test_centralizer_label_parsing():
    assert A.centralizer_dim("D8", 8) == 120
    assert A.centralizer_dim("A8", 8) == 80
    assert A.centralizer_dim("A5A2", 7) == 43
    assert A.centralizer_dim("A2^3", 6) == 24
    assert A.centralizer_dim("A1C3", 4) == 24
    assert A.centralizer_dim("A2~A2", 4) == 16
    assert A.centralizer_dim("A1~A1", 2) == 6
    assert A.centralizer_dim("A1T1", 2) == 4
    assert A.centralizer_dim("A1", 2) == 4       # torus tops up the rank
    with pytest.raises(InvalidConfig):
        A.centralizer_dim("Q5", 8)
    with pytest.raises(InvalidConfig):
        A.centralizer_dim("A8", 4)               # overfull rank


def test_audit_flags_exactly_two_rows():
    rows = A.audit_table1()
    assert len(rows) == 20
    mism = A.audit_mismatches()
    keys = {(m.info.group.name, m.info.case, m.info.label,
             m.info.dim, m.recomputed) for m in mism}
    assert keys == {("E7", "p!=3", "A5A2", 70, 90),
                    ("F4", "p!=3", "A2~A2", 34, 36)}
    assert sum(1 for r in rows if r.match is True) == 8
    assert sum(1 for r in rows if r.match is None) == 10


def test_semisimple_marker():
    assert A.largest_class("E8", "p!=2", 2).semisimple
    assert not A.largest_class("E8", "p=2", 2).semisimple

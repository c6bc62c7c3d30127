"""Dimension data for simple algebraic groups and the largest small-order
classes of the exceptional types.

The class table is a literal transcription; lookups always answer from
it.  A separate audit recomputes the semisimple rows (involutions away
from characteristic 2, order 3 away from characteristic 3) from the
centralizer printed in the label, since for a semisimple element the
class dimension is dim G minus the centralizer dimension.  Two rows fail
that recomputation; the audit reports them and deliberately does not
decide which value to trust.

Unipotent rows (p = 2 involutions, p = 3 order-3 elements) come from
external class tables and are not recomputable here; the audit marks
them skipped.
"""

import re
from dataclasses import dataclass

from .errors import InvalidConfig

EXCEPTIONAL_DIMS = {"G2": 14, "F4": 52, "E6": 78, "E7": 133, "E8": 248}

CASES = ("p=2", "p!=2", "p=3", "p!=3")


def classical_dim(family: str, rank: int) -> int:
    """Dimension of the classical group of the given Dynkin family."""
    if family == "A":
        return rank * (rank + 2)
    if family in ("B", "C"):
        return rank * (2 * rank + 1)
    if family == "D":
        return rank * (2 * rank - 1)
    raise InvalidConfig(f"unknown classical family {family!r}")


@dataclass(frozen=True)
class AlgGroupType:
    """A simple algebraic group type: concrete name, rank, dimension."""

    name: str
    family: str
    rank: int
    dim: int

    @property
    def exceptional(self) -> bool:
        return self.name in EXCEPTIONAL_DIMS


def alg_group(name: str) -> AlgGroupType:
    """Build a group type from a name like E8, G2, A5, C2 or D4."""
    m = re.fullmatch(r"([ABCDEFG])(\d+)", name.strip().upper())
    if not m:
        raise InvalidConfig(f"cannot parse group type {name!r}")
    family, rank = m.group(1), int(m.group(2))
    canonical = f"{family}{rank}"
    if canonical in EXCEPTIONAL_DIMS:
        return AlgGroupType(canonical, family, rank,
                            EXCEPTIONAL_DIMS[canonical])
    if family in ("E", "F", "G"):
        raise InvalidConfig(f"no simple group of type {canonical}")
    if rank < 1 or (family == "D" and rank < 2):
        raise InvalidConfig(f"rank out of range for {canonical}")
    return AlgGroupType(canonical, family, rank,
                        classical_dim(family, rank))


@dataclass(frozen=True)
class ClassInfo:
    """One table row: the largest class of order 2 or 3 elements in an
    exceptional group, for one characteristic case."""

    group: AlgGroupType
    case: str          # one of CASES
    order: int         # 2 or 3
    label: str         # centralizer type (semisimple) or class name
    dim: int
    note: str = ""

    @property
    def semisimple(self) -> bool:
        """Unipotent exactly when the order equals the characteristic."""
        return self.case in ("p!=2", "p!=3")


def _rows():
    # (group, label p=2, label p!=2, label p=3, label p!=3) with dims
    data = [
        ("E8", ("A1^4", 128), ("D8", 128), ("A2^2A1^2", 168), ("A8", 168)),
        ("E7", ("A1^4", 70), ("A7", 70), ("A2^2A1", 90), ("A5A2", 70)),
        ("E6", ("A1^3", 40), ("A1A5", 40), ("A2^2A1", 54), ("A2^3", 54)),
        ("F4", ("A1~A1", 28), ("A1C3", 28), ("~A2A1", 34), ("A2~A2", 34)),
        ("G2", ("~A1", 8), ("A1~A1", 8), ("G2(a1)", 10), ("A1T1", 10)),
    ]
    out = []
    for name, i2, i2s, o3, o3s in data:
        g = alg_group(name)
        out.append(ClassInfo(g, "p=2", 2, i2[0], i2[1]))
        out.append(ClassInfo(g, "p!=2", 2, i2s[0], i2s[1]))
        note = "two G(q)-classes" if (name, o3[0]) == ("G2", "G2(a1)") else ""
        out.append(ClassInfo(g, "p=3", 3, o3[0], o3[1], note))
        out.append(ClassInfo(g, "p!=3", 3, o3s[0], o3s[1]))
    return out


TABLE1 = _rows()


def largest_class(g: AlgGroupType, case: str, order: int) -> ClassInfo:
    """The unique maximal-dimension class of the given order, looked up
    from the table (exceptional types only)."""
    if isinstance(g, str):
        g = alg_group(g)
    if not g.exceptional:
        raise InvalidConfig(f"{g.name} is not tabulated (classical type)")
    if case not in CASES:
        raise InvalidConfig(f"unknown characteristic case {case!r}")
    if order not in (2, 3):
        raise InvalidConfig("only orders 2 and 3 are tabulated")
    want = ("p=2", "p!=2") if order == 2 else ("p=3", "p!=3")
    if case not in want:
        raise InvalidConfig(f"case {case} does not apply to order {order}")
    for row in TABLE1:
        if row.group == g and row.case == case and row.order == order:
            return row
    raise AssertionError("table covers all exceptional cases")


# ---------------------------------------------------- Scott dimensions

def scott_precondition(g: AlgGroupType, dim_c: int, dim_d: int) -> bool:
    """Necessary dimension condition for a class pair to reach a
    generating pair: dim C + dim D > dim G."""
    if isinstance(g, str):
        g = alg_group(g)
    for v in (dim_c, dim_d):
        if not 0 <= v < g.dim:
            raise InvalidConfig(
                f"class dimension {v} out of range for {g.name}")
    return dim_c + dim_d > g.dim


def scott_inequality(g: AlgGroupType, dim_c: int, dim_d: int,
                     delta: int) -> bool:
    """Sharper form with the adjoint fixed-space defect delta:
    dim C + dim D >= dim G + rank - delta."""
    if isinstance(g, str):
        g = alg_group(g)
    if delta not in (0, 1, 2):
        raise InvalidConfig("delta must be 0, 1 or 2")
    for v in (dim_c, dim_d):
        if not 0 <= v < g.dim:
            raise InvalidConfig(
                f"class dimension {v} out of range for {g.name}")
    return dim_c + dim_d >= g.dim + g.rank - delta


def default_delta(g: AlgGroupType, case: str) -> int:
    """1 in general; 2 for the even-rank B/C/D types in characteristic
    two, where the adjoint module has two trivial factors."""
    if isinstance(g, str):
        g = alg_group(g)
    if case == "p=2" and g.family in ("B", "C", "D") and g.rank % 2 == 0:
        return 2
    return 1


# -------------------------------------------------------------- audit

_FACTOR = re.compile(r"(~?)([A-G])(\d+)(?:\^(\d+))?|T(\d+)")


def centralizer_dim(label: str, ambient_rank: int) -> int:
    """Dimension of the centralizer named by a semisimple class label:
    the subsystem factor dimensions plus the central torus, whose rank
    tops the factor ranks up to the ambient rank.  A tilde marks short
    roots and changes nothing about dimensions."""
    pos = 0
    total = 0
    used_rank = 0
    while pos < len(label):
        m = _FACTOR.match(label, pos)
        if not m:
            raise InvalidConfig(f"cannot parse centralizer label {label!r}")
        if m.group(5) is not None:
            used_rank += int(m.group(5))
            total += int(m.group(5))
        else:
            fam, rank = m.group(2), int(m.group(3))
            mult = int(m.group(4) or 1)
            dim = (EXCEPTIONAL_DIMS.get(f"{fam}{rank}")
                   if fam in ("E", "F", "G") else classical_dim(fam, rank))
            total += mult * dim
            used_rank += mult * rank
        pos = m.end()
    if used_rank > ambient_rank:
        raise InvalidConfig(f"label {label!r} overfills rank {ambient_rank}")
    return total + (ambient_rank - used_rank)


@dataclass(frozen=True)
class AuditRow:
    info: ClassInfo
    recomputed: int | None    # None for unipotent rows
    match: bool | None        # None means not checkable

    @property
    def flagged(self) -> bool:
        return self.match is False


def audit_table1():
    """Recompute every semisimple row of the class table from its
    centralizer label and compare with the tabulated dimension."""
    rows = []
    for info in TABLE1:
        if not info.semisimple:
            rows.append(AuditRow(info, None, None))
            continue
        cdim = centralizer_dim(info.label, info.group.rank)
        rec = info.group.dim - cdim
        rows.append(AuditRow(info, rec, rec == info.dim))
    return rows


def audit_mismatches():
    return [r for r in audit_table1() if r.flagged]

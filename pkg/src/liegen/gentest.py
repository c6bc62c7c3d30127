"""Generation testing: does a list of matrices generate its group?

Three layers, from cheap to exhaustive:

* linear certificates: the dimension of the enveloping algebra (full
  dimension is absolute irreducibility) and the degree of the field
  generated by word traces (a proper trace field exhibits a conjugate
  copy inside a smaller field);
* for the SL2 family a complete classifier: either the pair generates
  or a witness names a proper overgroup (reducible/Borel, subfield,
  dihedral, A4/S4/A5 type, or an explicit small closure);
* breadth-first subgroup closure with a cap, which settles any group
  small enough to enumerate (passing half the group order proves
  generation outright).

Quotient groups ride on their covers: when the cover is perfect,
arbitrary lifts generate the cover exactly when the images generate the
quotient, so one classifier serves both.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import batchops as B
from . import kernels as K
from . import matgrp, words
from .backend import resolve_backend
from .errors import CapExceeded, InvalidConfig

#: Projected sharper cutoff for the subfield exclusion walk (word length
#: beyond which no new trace subfield can appear).  Not evaluated here:
#: the implementation uses the safe ball of length 2 d^2 throughout.
SUBFIELD_EXCLUSION_BOUND_M = None

TRACE_BALL_LEN = 8  # reduced-word ball radius 2 d^2 for d = 2

_WITNESS_NAMES = {
    K.W_BOREL: "Borel",
    K.W_REDUCIBLE: "Reducible",
    K.W_SUBFIELD: "Subfield",
    K.W_DIHEDRAL: "Dihedral",
    K.W_EXCEPTIONAL: "Exceptional",
    K.W_CLOSURE: "Closure",
}


# ------------------------------------------------------- linear algebra

def _entry_vectors(mats, field):
    vecs = []
    for m in mats:
        if isinstance(m, matgrp.SquareMatrix):
            if field is not None and m.group.field != field:
                raise InvalidConfig("matrices from different fields")
            field = m.group.field
            vecs.append(m.entries.copy())
        else:
            vecs.append(np.asarray(m, dtype=np.int64).ravel())
    if field is None:
        raise InvalidConfig("a field is required for raw arrays")
    return vecs, field


class _Rref:
    """Incremental row reduction over the field tables."""

    def __init__(self, field):
        self.t = field.tables()
        self.rows = {}

    def insert(self, v):
        """Reduce v against the basis; True when it added a new pivot."""
        t = self.t
        v = v.copy()
        for piv in sorted(self.rows):
            c = v[piv]
            if c:
                v = t.add[v, t.neg[t.mul[c, self.rows[piv]]]].astype(np.int64)
        nz = np.nonzero(v)[0]
        if nz.shape[0] == 0:
            return False
        piv = int(nz[0])
        v = t.mul[t.inv[v[piv]], v].astype(np.int64)
        self.rows[piv] = v
        return True

    @property
    def rank(self):
        return len(self.rows)


def algebra_span(mats, field=None) -> int:
    """Dimension of the unital matrix algebra generated by the given
    matrices.  Stabilizes in at most d^2 rounds of left products; full
    dimension d^2 means the family is absolutely irreducible."""
    vecs, field = _entry_vectors(mats, field)
    if not vecs:
        raise InvalidConfig("need at least one matrix")
    d2 = vecs[0].shape[0]
    d = math.isqrt(d2)
    if d * d != d2:
        raise InvalidConfig("matrices must be square")
    t = field.tables()
    rr = _Rref(field)
    ident = np.zeros(d2, dtype=np.int64)
    for i in range(d):
        ident[i * d + i] = 1
    rr.insert(ident)
    level = [ident]
    for v in vecs:
        if rr.insert(v):
            level.append(v)
    rounds = 0
    while level and rr.rank < d2:
        rounds += 1
        if rounds > d2 + 1:
            raise AssertionError("span failed to stabilize")
        fresh = []
        for b in level:
            for g in vecs:
                prod = B.np_matmul(b.reshape(1, d2), g, d,
                                   t.mul, t.add)[0]
                if rr.insert(prod):
                    fresh.append(prod)
        level = fresh
    return rr.rank


def is_irreducible(mats, field=None) -> bool:
    """Absolute irreducibility via the enveloping algebra dimension."""
    vecs, field = _entry_vectors(mats, field)
    d2 = vecs[0].shape[0]
    return algebra_span(vecs, field) == d2


# ----------------------------------------------------------- word tools

def evaluate_word(x: matgrp.SquareMatrix, y: matgrp.SquareMatrix,
                  word) -> matgrp.SquareMatrix:
    """Product of the letters of the word over the dictionary a = x,
    b = y, capitals for inverses; the empty word is the identity."""
    codes = words.parse_word(word) if isinstance(word, str) else list(word)
    mats = [x, y, x.inverse(), y.inverse()]
    acc = matgrp.identity(x.group)
    for c in codes:
        acc = acc * mats[c]
    return acc


def trace_field(mats, max_len=None) -> int:
    """Degree over F_p of the field generated by word traces.

    For a pair of 2x2 matrices this walks every reduced word of length
    up to 2 d^2 = 8 in the generators and inverses (early exit once the
    degree is full).  In higher dimension it takes an algebra basis of
    words and uses traces of pairwise basis products, which generate the
    same field for an absolutely irreducible family."""
    sqm = [m for m in mats if isinstance(m, matgrp.SquareMatrix)]
    if len(sqm) != len(mats) or not sqm:
        raise InvalidConfig("trace_field expects group elements")
    group = sqm[0].group
    f = group.field
    t = f.tables()
    d = group.d
    a = group.a
    if d == 2:
        if len(mats) != 2:
            raise InvalidConfig("the 2x2 walk is defined for a pair")
        if max_len is None:
            max_len = TRACE_BALL_LEN
        x, y = mats
        gens = [x, y, x.inverse(), y.inverse()]
        prods = {(): matgrp.identity(group)}
        lcm = 1
        for w in words.WordIterator(max_len):
            if not w:
                continue
            tup = tuple(w)
            m = prods[tup[:-1]] * gens[tup[-1]]
            prods[tup] = m
            lcm = math.lcm(lcm, int(t.subdeg[m.trace().idx]))
            if lcm >= a:
                return lcm
        return lcm
    # spin basis route
    basis = [matgrp.identity(group)]
    rr = _Rref(f)
    rr.insert(basis[0].entries)
    level = list(basis)
    for m in sqm:
        if rr.insert(m.entries):
            basis.append(m)
            level.append(m)
    while level:
        fresh = []
        for b in level:
            for g in sqm:
                prod = b * g
                if rr.insert(prod.entries):
                    basis.append(prod)
                    fresh.append(prod)
        level = fresh
    lcm = 1
    for i, bi in enumerate(basis):
        for bj in basis[i:]:
            tr = (bi * bj).trace().idx
            lcm = math.lcm(lcm, int(t.subdeg[tr]))
            if lcm >= a:
                return lcm
    return lcm


# -------------------------------------------------------------- closure

@dataclass
class ClosureOutcome:
    """Result of a capped closure: complete ("closed") with the exact
    size, or stopped early ("over") having passed stop_over."""

    status: str
    size: int
    codes: np.ndarray = None

    @property
    def complete(self):
        return self.status == "closed"


def subgroup_closure(mats, cap, stop_over=0, backend=None) -> ClosureOutcome:
    """Closure of the subgroup generated by the matrices inside their
    group (modulo the center for a quotient group).  Raises CapExceeded
    when cap elements do not suffice."""
    if not mats:
        raise InvalidConfig("need at least one generator")
    group = mats[0].group
    status, size, codes = matgrp._closure_raw(
        group, [m.entries for m in mats], cap, stop_over, backend)
    if status == K.S_CAP:
        raise CapExceeded(
            f"subgroup closure in {group.name} exceeded cap {cap}",
            cap=cap, size=size)
    if status == K.S_OVER:
        return ClosureOutcome("over", size)
    return ClosureOutcome("closed", size, codes)


def sl2_closure_bound(group) -> int:
    """Size bound for proper irreducible full-trace-field subgroups of
    SL2(q): above it only the whole group is left.  Combines the
    exceptional preimage bound 120, the dihedral-type bound 4(q+1), the
    twisted half-field bound 2 sqrt(q) (q-1) for square q, and half the
    group order."""
    q = group.q
    bound = max(120, 4 * (q + 1))
    if group.a % 2 == 0:
        r = group.p ** (group.a // 2)
        bound = max(bound, 2 * r * (q - 1))
    return min(bound, group.cover_order // 2)


# ------------------------------------------------------------- verdicts

@dataclass
class GenVerdict:
    """Outcome of a generation test: "Generates", "Proper" with a named
    witness, or "Inconclusive" when nothing could be certified."""

    outcome: str
    witness: str = ""
    method: str = ""

    @property
    def generates(self):
        return self.outcome == "Generates"

    @property
    def decided(self):
        return self.outcome != "Inconclusive"

    def summary(self) -> str:
        return f"{self.outcome};{self.witness};{self.method}"


def _witness_text(wit, par):
    name = _WITNESS_NAMES[wit]
    if wit in (K.W_SUBFIELD, K.W_DIHEDRAL, K.W_EXCEPTIONAL, K.W_CLOSURE):
        return f"{name}({par})"
    return name


def witness_category(verdict: GenVerdict) -> int:
    """CSV category index of a verdict (generates, reducible-type,
    subfield, other-proper, inconclusive)."""
    if verdict.outcome == "Generates":
        return K.C_GEN
    if verdict.outcome == "Inconclusive":
        return K.C_INCONCLUSIVE
    w = verdict.witness
    if w.startswith(("Borel", "Reducible")):
        return K.C_REDUCIBLE
    if w.startswith("Subfield"):
        return K.C_SUBFIELD
    return K.C_OTHER


def _perfect_cover(group) -> bool:
    if group.family == "SL2":
        return group.q >= 4
    if group.family == "SP4":
        return group.q >= 3
    return True


def dickson_kind(x: matgrp.SquareMatrix, y: matgrp.SquareMatrix,
                 backend=None) -> GenVerdict:
    """Complete SL2-family decision for a pair; needs q >= 4 (below
    that the classification has no content; use subgroup_closure)."""
    group = x.group
    if group.d != 2:
        raise InvalidConfig("dickson_kind handles the SL2 family only")
    if group.q < 4:
        raise InvalidConfig("dickson_kind needs q >= 4")
    if y.group != group:
        raise InvalidConfig("mixed groups")
    t = group.tables()
    capB = sl2_closure_bound(group)
    PB = matgrp._hash_prime(capB)
    scal = _sl2_scalars(group)
    be = resolve_backend(backend)
    fn = K.k_dickson_sl2 if be == "numba" else getattr(
        K.k_dickson_sl2, "py_func", K.k_dickson_sl2)
    with np.errstate(over="ignore"):
        gen, wit, par, meth = fn(x.entries, y.entries, group.q, group.p,
                                 group.a, t.mul, t.add, t.neg, t.inv,
                                 t.subdeg, scal, capB, PB)
    method = "certificate" if meth == K.M_CERT else "closure"
    if gen:
        return GenVerdict("Generates", "", method)
    return GenVerdict("Proper", _witness_text(int(wit), int(par)), method)


def _sl2_scalars(group):
    f = group.field
    vals = {1, f.neg_idx(1)}
    return np.array(sorted(vals), dtype=np.int64)


def generation_verdict(mats, cap=matgrp.DEFAULT_ENUM_CAP,
                       backend=None) -> GenVerdict:
    """Decide generation for a list of group elements.

    SL2 pairs at q >= 4 get the complete classifier.  Any group whose
    order fits under the cap is settled by closure (Lagrange: passing
    half the order proves the whole).  Beyond that only certificates
    are available: a proper enveloping algebra (reducible) or a proper
    trace field with a size margin; otherwise Inconclusive."""
    if not mats:
        raise InvalidConfig("need at least one generator")
    group = mats[0].group
    for m in mats:
        if m.group != group:
            raise InvalidConfig("mixed groups")
    if group.d == 2 and group.q >= 4 and len(mats) == 2:
        return dickson_kind(mats[0], mats[1], backend)
    if group.order <= cap:
        out = subgroup_closure(mats, cap=group.order // 2 + 1,
                               stop_over=group.order // 2, backend=backend)
        if out.status == "over":
            return GenVerdict("Generates", "", "closure")
        if out.size == group.order:
            return GenVerdict("Generates", "", "closure")
        return GenVerdict("Proper", f"Closure({out.size})", "closure")
    span = algebra_span(mats)
    d2 = group.d * group.d
    if span < d2:
        return GenVerdict("Proper", "Reducible", "certificate")
    b = trace_field(mats) if group.a > 1 else group.a
    if b < group.a:
        # the conjugate copy sits inside GL_d(p^b) joined with the
        # center; the margin keeps the image proper in a quotient too
        gl_sub = _gl_order(group.d, group.p ** b)
        if gl_sub * group.center_size < group.cover_order:
            return GenVerdict("Proper", f"Subfield({b})", "certificate")
    return GenVerdict("Inconclusive", "", "")


def _gl_order(d, q):
    n = 1
    for i in range(d):
        n *= q ** d - q ** i
    return n

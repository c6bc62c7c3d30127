"""Matrix group families SL2, SL3, Sp4 and their central quotients.

A GroupSpec names one group: a family, a prime power q = p^a, and a
quotient flag (PSL2 and friends are the cover modulo its scalar center).
Elements are SquareMatrix values; entries are field element indexes, so
all arithmetic runs through the dense field tables.

Enumeration and conjugacy classes run on the selected backend and come
back in canonical order (sorted by the code of the lexicographically
least scalar multiple), which makes them identical across backends.

The symplectic family preserves the alternating form with gram matrix
antidiag(1, 1, -1, -1); its transvections x -> x + c B(x, v) v written
as I + c outer(v, Jv) supply standard generators.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import batchops as B
from . import ffield
from . import kernels as K
from .backend import resolve_backend
from .errors import CapExceeded, InvalidConfig

FAMILIES = ("SL2", "SL3", "SP4")
DEFAULT_ENUM_CAP = 3_000_000

_ENUM_CACHE = {}


def _prime_power(q):
    from sympy import factorint
    f = factorint(q)
    if len(f) != 1:
        raise InvalidConfig(f"q = {q} is not a prime power")
    [(p, a)] = f.items()
    return int(p), int(a)


@dataclass(frozen=True)
class GroupSpec:
    """One of the six group families at a specific prime power."""

    family: str
    p: int
    a: int
    quotient: bool = False

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidConfig(f"unknown family {self.family!r}")
        if self.a < 1:
            raise InvalidConfig("a must be >= 1")

    @property
    def q(self):
        return self.p ** self.a

    @property
    def d(self):
        return {"SL2": 2, "SL3": 3, "SP4": 4}[self.family]

    @property
    def field(self):
        return ffield.construct(self.p, self.a)

    @property
    def cover_order(self):
        q = self.q
        if self.family == "SL2":
            return q * (q * q - 1)
        if self.family == "SL3":
            return q ** 3 * (q ** 3 - 1) * (q * q - 1)
        return q ** 4 * (q * q - 1) * (q ** 4 - 1)

    @property
    def center_size(self):
        import math
        if self.family == "SL3":
            return math.gcd(3, self.q - 1)
        return math.gcd(2, self.q - 1)

    @property
    def order(self):
        if self.quotient:
            return self.cover_order // self.center_size
        return self.cover_order

    @property
    def name(self):
        return ("P" if self.quotient else "") + self.family.replace(
            "SP4", "Sp4") + f"({self.q})"

    def scalars(self):
        """Field indexes of the central scalars, ascending; [1] when the
        group is not taken modulo its center."""
        if not self.quotient:
            return np.ones(1, dtype=np.int64)
        f = self.field
        if self.family in ("SL2", "SP4"):
            vals = {1, f.neg_idx(1)}
        else:
            t = f.tables()
            vals = {1}
            if (self.q - 1) % 3 == 0:
                step = (self.q - 1) // 3
                vals.add(int(t.exp[step]))
                vals.add(int(t.exp[2 * step]))
        return np.array(sorted(vals), dtype=np.int64)

    def tables(self):
        return self.field.tables()


def parse_group(family: str, q: int) -> GroupSpec:
    """Family string (SL2/SL3/SP4, optionally P-prefixed, any case)
    plus a prime power."""
    fam = family.upper()
    quot = fam.startswith("P")
    if quot:
        fam = fam[1:]
    if fam not in FAMILIES:
        raise InvalidConfig(f"unknown family {family!r}")
    p, a = _prime_power(q)
    return GroupSpec(fam, p, a, quotient=quot)


# ------------------------------------------------------------- matrices

def _mm(f, x, y, d):
    out = np.empty(d * d, dtype=np.int64)
    for i in range(d):
        for j in range(d):
            acc = f.mul_idx(int(x[i * d]), int(y[j]))
            for k in range(1, d):
                acc = f.add_idx(acc, f.mul_idx(int(x[i * d + k]),
                                               int(y[k * d + j])))
            out[i * d + j] = acc
    return out


class SquareMatrix:
    """A group element: flat int64 entry indexes tied to a GroupSpec."""

    __slots__ = ("group", "entries")

    def __init__(self, group, entries):
        self.group = group
        e = np.asarray(entries, dtype=np.int64).reshape(group.d * group.d)
        self.entries = e

    def __mul__(self, other):
        if not isinstance(other, SquareMatrix) or other.group != self.group:
            raise InvalidConfig("can only multiply within one group")
        return SquareMatrix(self.group, _mm(self.group.field, self.entries,
                                            other.entries, self.group.d))

    def inverse(self):
        g = self.group
        f = g.field
        t = f.tables()
        out = np.empty(g.d * g.d, dtype=np.int64)
        ok = K.k_inverse(out, self.entries, g.d, t.mul, t.add, t.neg, t.inv)
        assert ok
        return SquareMatrix(g, out)

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        g = self.group
        acc = identity(g)
        base = self
        while e:
            if e & 1:
                acc = acc * base
            base = base * base
            e >>= 1
        return acc

    def trace(self):
        g = self.group
        f = g.field
        acc = 0
        for i in range(g.d):
            acc = f.add_idx(acc, int(self.entries[i * g.d + i]))
        return f.from_index(acc)

    def is_identity(self):
        return bool(K.k_is_identity(self.entries, self.group.d))

    def is_scalar(self):
        return bool(K.k_is_scalar(self.entries, self.group.d))

    def canonical(self):
        """The representative with least code among the central scalar
        multiples (itself when the group is a plain cover)."""
        g = self.group
        t = g.tables()
        code = K.k_canon_code(self.entries, g.d * g.d, g.q,
                                g.scalars(), t.mul)
        out = np.empty(g.d * g.d, dtype=np.int64)
        K.k_decode(out, code, g.d * g.d, g.q)
        return SquareMatrix(g, out)

    def code(self):
        g = self.group
        t = g.tables()
        return int(K.k_canon_code(self.entries, g.d * g.d, g.q,
                                    g.scalars(), t.mul))

    def __eq__(self, other):
        return (isinstance(other, SquareMatrix)
                and other.group == self.group
                and self.code() == other.code())

    def __hash__(self):
        return hash((self.group, self.code()))

    def __repr__(self):
        return f"<{format_matrix(self)} | {self.group.name}>"


def identity(group) -> SquareMatrix:
    e = np.zeros(group.d * group.d, dtype=np.int64)
    for i in range(group.d):
        e[i * group.d + i] = 1
    return SquareMatrix(group, e)


def symplectic_gram(group):
    """The gram matrix J of the preserved form, as entry indexes."""
    f = group.field
    n1 = f.neg_idx(1)
    J = np.zeros((4, 4), dtype=np.int64)
    J[0, 3] = 1
    J[1, 2] = 1
    J[2, 1] = n1
    J[3, 0] = n1
    return J


def contains(group, m: SquareMatrix) -> bool:
    """Membership in the cover: determinant one, and for SP4 the form
    condition  transpose(M) J M = J."""
    f = group.field
    d = group.d
    e = m.entries
    if group.family in ("SL2", "SL3"):
        return _det(f, e, d) == 1
    J = symplectic_gram(group)
    for i in range(4):
        for j in range(4):
            acc = 0
            for k in range(4):
                for l in range(4):
                    acc = f.add_idx(acc, f.mul_idx(
                        f.mul_idx(int(e[k * 4 + i]), int(J[k, l])),
                        int(e[l * 4 + j])))
            if acc != J[i, j]:
                return False
    return True


def _det(f, e, d):
    if d == 2:
        return f.sub_idx(f.mul_idx(int(e[0]), int(e[3])),
                         f.mul_idx(int(e[1]), int(e[2])))
    assert d == 3
    t = f.tables()
    return int(K.k_det3(e, t.mul, t.add, t.neg))


# ------------------------------------------------- standard generators

def standard_generators(group):
    """Transvection generators: enough elementary matrices to span every
    root subgroup over F_p, hence to generate the whole cover."""
    f = group.field
    d = group.d
    basis = [f.idx_of([0] * k + [1]) for k in range(group.a)]
    gens = []
    if group.family == "SL2":
        for e in basis:
            gens.append(np.array([1, e, 0, 1], dtype=np.int64))
            gens.append(np.array([1, 0, e, 1], dtype=np.int64))
    elif group.family == "SL3":
        for i in range(3):
            for j in range(3):
                if i == j:
                    continue
                for e in basis:
                    m = identity(group).entries.copy()
                    m[i * 3 + j] = e
                    gens.append(m)
    else:
        J = symplectic_gram(group)
        for mask in range(1, 16):
            v = [(mask >> k) & 1 for k in range(4)]
            jv = [0] * 4
            for j in range(4):
                acc = 0
                for k in range(4):
                    acc = f.add_idx(acc, f.mul_idx(v[k], int(J[k, j])))
                jv[j] = acc
            for e in basis:
                m = identity(group).entries.copy()
                for i in range(4):
                    for j in range(4):
                        m[i * 4 + j] = f.add_idx(
                            int(m[i * 4 + j]),
                            f.mul_idx(e, f.mul_idx(v[i], jv[j])))
                gens.append(m)
    return [SquareMatrix(group, g) for g in gens]


# ---------------------------------------------------------- enumeration

def _hash_prime(cap):
    from sympy import nextprime
    return int(nextprime(2 * cap + 2))


def _decode_codes(codes, d2, q):
    out = np.empty((codes.shape[0], d2), dtype=np.int64)
    c = codes.copy()
    for t in range(d2 - 1, -1, -1):
        out[:, t] = c % q
        c //= q
    return out


def _closure_raw(group, mats, cap, stop_over, backend=None):
    """Backend-dispatched closure over flat matrices.  Returns (status,
    size, elements-as-canonical-codes sorted) with elements only on
    completion."""
    be = resolve_backend(backend)
    t = group.tables()
    d = group.d
    if group.q ** (d * d) >= 2 ** 63:
        raise CapExceeded("element codes would overflow",
                          cap=2 ** 63, size=group.q ** (d * d))
    scal = group.scalars()
    gens = [np.asarray(m, dtype=np.int64).reshape(d * d) for m in mats]
    if be == "numba":
        P = _hash_prime(cap)
        keys = np.full(P, -1, dtype=np.int64)
        queue = np.empty((cap + 1, d * d), dtype=np.int64)
        status, size = K.k_closure(np.stack(gens), len(gens), d, group.q,
                                   t.mul, t.add, scal, cap, stop_over,
                                   P, keys, queue)
        if status == K.S_COMPLETE:
            codes = B.np_canon_codes(queue[:size], group.q, scal, t.mul)
            return status, size, np.sort(codes)
        return status, size, None
    status, size, elems = B.np_closure(gens, d, group.q, t.mul, t.add,
                                       scal, cap, stop_over)
    if status == K.S_COMPLETE:
        codes = B.np_canon_codes(elems, group.q, scal, t.mul)
        return status, size, np.sort(codes)
    return status, size, None


def enumerate_group(group, cap=DEFAULT_ENUM_CAP, backend=None):
    """All elements (canonical representatives, code-sorted) as an
    (n, d*d) array.  Raises CapExceeded when the order is over cap."""
    n = group.order
    if cap is not None and n > cap:
        raise CapExceeded(
            f"{group.name} has order {n}, over the enumeration cap {cap}",
            cap=cap, size=n)
    key = group
    if key in _ENUM_CACHE:
        return _ENUM_CACHE[key]
    gens = standard_generators(group)
    status, size, codes = _closure_raw(group, [g.entries for g in gens],
                                       n, 0, backend)
    assert status == K.S_COMPLETE and size == n, (status, size, n)
    elems = _decode_codes(codes, group.d * group.d, group.q)
    _ENUM_CACHE[key] = elems
    return elems


# --------------------------------------------------------------- orders

@lru_cache(maxsize=None)
def _order_prime_factors(family, p, a):
    from sympy import factorint
    q = p ** a
    if family == "SL2":
        pieces = [q, q - 1, q + 1]
    elif family == "SL3":
        pieces = [q ** 3, q - 1, q - 1, q + 1, q * q + q + 1]
    else:
        pieces = [q ** 4, q - 1, q - 1, q + 1, q + 1, q * q + 1]
    primes = set()
    for piece in pieces:
        primes.update(factorint(piece).keys())
    return tuple(sorted(primes))


def element_order(m: SquareMatrix) -> int:
    """Multiplicative order; computed in the quotient (modulo scalars)
    when the group is a quotient."""
    g = m.group
    done = (lambda x: x.is_scalar()) if g.quotient else \
        (lambda x: x.is_identity())
    e = g.order
    for ell in _order_prime_factors(g.family, g.p, g.a):
        while e % ell == 0 and done(m ** (e // ell)):
            e //= ell
    return e


def _batch_power(X, r, d, t):
    """X_i^r for every row, by square and multiply."""
    out = None
    base = X
    e = r
    while e:
        if e & 1:
            out = base if out is None else B.np_matmul(out, base, d,
                                                       t.mul, t.add)
        e >>= 1
        if e:
            base = B.np_matmul(base, base, d, t.mul, t.add)
    return out


@dataclass
class ConjClass:
    """A conjugacy class of elements of one order: canonical elements
    (code sorted), the least element as representative."""

    group: GroupSpec
    r: int
    elements: np.ndarray

    @property
    def size(self):
        return self.elements.shape[0]

    @property
    def rep(self):
        return SquareMatrix(self.group, self.elements[0])


def _exact_id(X, d):
    ok = np.ones(X.shape[0], dtype=bool)
    for i in range(d):
        for j in range(d):
            ok &= X[:, i * d + j] == (1 if i == j else 0)
    return ok


def _identity_mask(group, X):
    """Rows equal to the identity of the group (any scalar for a
    quotient)."""
    d = group.d
    if not group.quotient:
        return _exact_id(X, d)
    ok = np.zeros(X.shape[0], dtype=bool)
    for s in group.scalars():
        eq = np.ones(X.shape[0], dtype=bool)
        for i in range(d):
            for j in range(d):
                want = int(s) if i == j else 0
                eq &= X[:, i * d + j] == want
        ok |= eq
    return ok


def elements_of_order(group, r, cap=DEFAULT_ENUM_CAP, backend=None):
    """Conjugacy classes of the elements of order exactly r, sorted by
    (class size, least element code)."""
    from sympy import divisors
    if r < 1:
        raise InvalidConfig("order must be positive")
    elems = enumerate_group(group, cap, backend)
    t = group.tables()
    d = group.d
    mask = _identity_mask(group, _batch_power(elems, r, d, t)) if r > 1 \
        else _exact_id(elems, d)
    if r > 1:
        for dd in divisors(r)[:-1]:
            if dd == 1:
                mask &= ~_identity_mask(group, elems)
            else:
                mask &= ~_identity_mask(group, _batch_power(elems, dd, d, t))
    chosen = elems[mask]
    if chosen.shape[0] == 0:
        return []
    scal = group.scalars()
    codes = B.np_canon_codes(chosen, group.q, scal, t.mul)
    order_idx = np.argsort(codes)
    chosen, codes = chosen[order_idx], codes[order_idx]
    gens = standard_generators(group)
    ginvs = [g.inverse() for g in gens]
    gen_arr = [g.entries for g in gens]
    ginv_arr = [g.entries for g in ginvs]
    be = resolve_backend(backend)
    assigned = np.zeros(chosen.shape[0], dtype=bool)
    classes = []
    for i in range(chosen.shape[0]):
        if assigned[i]:
            continue
        orbit_codes = _conj_orbit_codes(group, chosen[i], gen_arr, ginv_arr,
                                        cap, be)
        pos = np.searchsorted(codes, orbit_codes)
        assert pos.max() < codes.shape[0] and (codes[pos] == orbit_codes).all()
        assigned[pos] = True
        classes.append(ConjClass(group, r, _decode_codes(orbit_codes,
                                                         d * d, group.q)))
    classes.sort(key=lambda c: (c.size, c.rep.code()))
    return classes


def conjugacy_partition(group, cap=DEFAULT_ENUM_CAP, backend=None):
    """Every conjugacy class of the group, sorted by (element order,
    class size, least element code)."""
    elems = enumerate_group(group, cap, backend)
    t = group.tables()
    d = group.d
    scal = group.scalars()
    codes = B.np_canon_codes(elems, group.q, scal, t.mul)
    order_idx = np.argsort(codes)
    chosen, codes = elems[order_idx], codes[order_idx]
    gens = standard_generators(group)
    gen_arr = [g.entries for g in gens]
    ginv_arr = [g.inverse().entries for g in gens]
    be = resolve_backend(backend)
    assigned = np.zeros(chosen.shape[0], dtype=bool)
    classes = []
    for i in range(chosen.shape[0]):
        if assigned[i]:
            continue
        orbit_codes = _conj_orbit_codes(group, chosen[i], gen_arr, ginv_arr,
                                        cap, be)
        pos = np.searchsorted(codes, orbit_codes)
        assert pos.max() < codes.shape[0] and (codes[pos] == orbit_codes).all()
        assigned[pos] = True
        members = _decode_codes(orbit_codes, d * d, group.q)
        r = element_order(SquareMatrix(group, members[0]))
        classes.append(ConjClass(group, r, members))
    classes.sort(key=lambda c: (c.r, c.size, c.rep.code()))
    return classes


def _conj_orbit_codes(group, x, gen_arr, ginv_arr, cap, be):
    t = group.tables()
    d = group.d
    scal = group.scalars()
    if be == "numba":
        P = _hash_prime(cap)
        keys = np.full(P, -1, dtype=np.int64)
        queue = np.empty((cap + 1, d * d), dtype=np.int64)
        status, size = K.k_conj_class(x, np.stack(gen_arr),
                                      np.stack(ginv_arr), len(gen_arr),
                                      d, group.q, t.mul, t.add, scal,
                                      cap, P, keys, queue)
        assert status == K.S_COMPLETE
        codes = B.np_canon_codes(queue[:size], group.q, scal, t.mul)
    else:
        status, size, elems = B.np_conj_class(x, gen_arr, ginv_arr, d,
                                              group.q, t.mul, t.add,
                                              scal, cap)
        assert status == K.S_COMPLETE
        codes = B.np_canon_codes(elems, group.q, scal, t.mul)
    return np.sort(codes)


# -------------------------------------------------------------- sampling

def sample_uniform(group, stream, backend=None):
    """One uniform element drawn from the stream's current trial; the
    stream counter advances exactly as in the block kernels."""
    t = group.tables()
    be = resolve_backend(backend)
    fn = {"SL2": K.k_sample_sl2, "SL3": K.k_sample_sl3,
          "SP4": K.k_sample_sp4}[group.family]
    if be != "numba":
        fn = getattr(fn, "py_func", fn)
    out = np.empty(group.d * group.d, dtype=np.int64)
    with np.errstate(over="ignore"):
        ctr = fn(out, np.uint64(stream.seed), stream.trial, stream.ctr,
                 group.q, t.mul, t.add, t.neg, t.inv)
    stream.ctr = int(ctr)
    return SquareMatrix(group, out)


def sample_of_order(group, r, stream, max_tries=100000, backend=None):
    """Uniform among elements of order r, by rejection."""
    for _ in range(max_tries):
        m = sample_uniform(group, stream, backend)
        if element_order(m) == r:
            return m
    raise InvalidConfig(
        f"no element of order {r} found in {group.name} after "
        f"{max_tries} draws")


# ------------------------------------------------------------ text form

def format_matrix(m: SquareMatrix) -> str:
    """Rows joined by " ; ", entries by spaces, each entry the comma
    coefficient form of the field element."""
    f = m.group.field
    d = m.group.d
    rows = []
    for i in range(d):
        rows.append(" ".join(
            ffield.format_element(f.from_index(int(m.entries[i * d + j])))
            for j in range(d)))
    return " ; ".join(rows)


def parse_matrix(group, text: str) -> SquareMatrix:
    f = group.field
    d = group.d
    rows = [r.strip() for r in text.split(";")]
    if len(rows) != d:
        raise InvalidConfig(f"expected {d} rows in {text!r}")
    entries = []
    for r in rows:
        parts = r.split()
        if len(parts) != d:
            raise InvalidConfig(f"expected {d} entries per row in {text!r}")
        for prt in parts:
            entries.append(ffield.parse_element(f, prt).idx)
    m = SquareMatrix(group, np.array(entries, dtype=np.int64))
    if not contains(group, m):
        raise InvalidConfig("matrix is not in the group")
    return m

"""Finite fields F_{p^a} with deterministic construction and index tables.

Construction is canonical: the modulus is the least monic irreducible
polynomial of degree a over F_p, where candidate coefficient vectors are
compared as base-p integers with the constant coefficient as the least
significant digit.  Two constructions of the same (p, a) are therefore
elementwise identical.

Elements are indexed 0..q-1 by index = sum c_i p^i over the coefficients
of the residue-class representative.  For q <= TABLE_LIMIT the field
carries dense numpy add/mul/neg/inv tables plus a table of minimal
subfield degrees, which is what the compiled kernels consume.  Larger
fields (allowed up to the size cap, default 2^61) fall back to direct
polynomial arithmetic per operation.
"""

from functools import reduce

import numpy as np

from .errors import CapExceeded, InvalidConfig

TABLE_LIMIT = 2048
DEFAULT_SIZE_CAP = 2 ** 61

_CACHE = {}


# ------------------------------------------------------------ polynomials
# Coefficient lists over F_p, constant term first, no trailing zeros.

def _trim(u):
    while u and u[-1] == 0:
        u.pop()
    return u


def _pmulmod(u, v, mod, p):
    out = [0] * (len(u) + len(v) - 1) if u and v else []
    for i, a in enumerate(u):
        if a:
            for j, b in enumerate(v):
                out[i + j] = (out[i + j] + a * b) % p
    return _pdivmod(out, mod, p)


def _pdivmod(u, mod, p):
    # remainder of u modulo the monic polynomial mod
    u = list(u)
    dm = len(mod) - 1
    while len(u) > dm:
        c = u[-1]
        if c:
            off = len(u) - 1 - dm
            for i, b in enumerate(mod):
                u[off + i] = (u[off + i] - c * b) % p
        u.pop()
    return _trim(u)


def _ppow_p(u, mod, p):
    # u^p mod `mod` by square and multiply on the exponent p
    result = [1]
    base = list(u)
    e = p
    while e:
        if e & 1:
            result = _pmulmod(result, base, mod, p)
        base = _pmulmod(base, base, mod, p)
        e >>= 1
    return result


def _pgcd(u, v, p):
    u, v = list(u), list(v)
    while v:
        # reduce u mod v (v not necessarily monic)
        inv_lead = pow(v[-1], -1, p)
        vm = [(c * inv_lead) % p for c in v]
        u = _pdivmod(u, vm, p)
        u, v = v, u
    return u


def _prime_factors(n):
    from sympy import factorint
    return sorted(factorint(n).keys())


def _is_irreducible(mod, p, a):
    """Rabin test: x^(p^a) = x mod f, and gcd(x^(p^(a/l)) - x, f) = 1
    for every prime l dividing a."""
    assert len(mod) == a + 1 and mod[-1] == 1
    if a == 1:
        return True
    x = [0, 1]
    # frob[b] = x^(p^b) mod f, computed by iterated p-th powers
    g = list(x)
    checkpoints = {a // ell for ell in _prime_factors(a)}
    for b in range(1, a + 1):
        g = _ppow_p(g, mod, p)
        if b in checkpoints:
            diff = list(g)
            while len(diff) < 2:
                diff.append(0)
            diff[1] = (diff[1] - 1) % p
            if len(_pgcd(mod, _trim(diff), p)) != 1:
                return False
    gx = list(g)
    while len(gx) < 2:
        gx.append(0)
    gx[1] = (gx[1] - 1) % p
    return not _trim(gx)


def _least_irreducible(p, a):
    """Least monic irreducible of degree a, constant-digit-first order."""
    for k in range(p ** a):
        coeffs = []
        kk = k
        for _ in range(a):
            coeffs.append(kk % p)
            kk //= p
        mod = coeffs + [1]
        if _is_irreducible(mod, p, a):
            return tuple(mod)
    raise AssertionError("no irreducible polynomial found")  # impossible


# ----------------------------------------------------------------- fields

class FieldTables:
    __slots__ = ("add", "mul", "neg", "inv", "subdeg", "exp", "log")

    def __init__(self, add, mul, neg, inv, subdeg, exp, log):
        self.add = add
        self.mul = mul
        self.neg = neg
        self.inv = inv
        self.subdeg = subdeg
        self.exp = exp
        self.log = log


class FiniteField:
    """The field F_{p^a} under the canonical modulus.  Use construct()."""

    __slots__ = ("p", "a", "q", "modulus", "_tables", "_embed_cache")

    def __init__(self, p, a, modulus):
        self.p = p
        self.a = a
        self.q = p ** a
        self.modulus = modulus
        self._tables = None
        self._embed_cache = {}

    # -- index <-> coefficients -----------------------------------------
    def coeffs_of(self, idx):
        out = []
        for _ in range(self.a):
            out.append(idx % self.p)
            idx //= self.p
        return tuple(out)

    def idx_of(self, coeffs):
        idx = 0
        for c in reversed(coeffs):
            idx = idx * self.p + c % self.p
        return idx

    # -- scalar ops, polynomial path ------------------------------------
    def _add_poly(self, i, j):
        p = self.p
        ci, cj = self.coeffs_of(i), self.coeffs_of(j)
        return self.idx_of([(x + y) % p for x, y in zip(ci, cj)])

    def _neg_poly(self, i):
        p = self.p
        return self.idx_of([(-x) % p for x in self.coeffs_of(i)])

    def _mul_poly(self, i, j):
        u = _trim(list(self.coeffs_of(i)))
        v = _trim(list(self.coeffs_of(j)))
        return self.idx_of(_pmulmod(u, v, list(self.modulus), self.p))

    def _inv_poly(self, i):
        if i == 0:
            raise ZeroDivisionError("inverse of zero")
        # extended euclid on (modulus, u)
        p = self.p
        r0, r1 = list(self.modulus), _trim(list(self.coeffs_of(i)))
        s0, s1 = [], [1]
        while r1:
            inv_lead = pow(r1[-1], -1, p)
            q_acc = [0] * (max(len(r0) - len(r1), 0) + 1)
            r0 = list(r0)
            while len(r0) >= len(r1) and r0:
                c = (r0[-1] * inv_lead) % p
                off = len(r0) - len(r1)
                if c:
                    q_acc[off] = c
                    for k, b in enumerate(r1):
                        r0[off + k] = (r0[off + k] - c * b) % p
                r0.pop()
                _trim(r0)
                if len(r0) < len(r1):
                    break
            # s0 - q*s1
            qs1 = [0] * (len(q_acc) + len(s1) - 1) if s1 else []
            for ii, qa in enumerate(q_acc):
                if qa:
                    for jj, sb in enumerate(s1):
                        qs1[ii + jj] = (qs1[ii + jj] + qa * sb) % p
            new_s = [0] * max(len(s0), len(qs1))
            for ii in range(len(new_s)):
                x = s0[ii] if ii < len(s0) else 0
                y = qs1[ii] if ii < len(qs1) else 0
                new_s[ii] = (x - y) % p
            r0, r1 = r1, _trim(r0)
            s0, s1 = s1, _trim(new_s)
        assert len(r0) == 1 and r0[0] != 0
        lead_inv = pow(r0[0], -1, p)
        return self.idx_of(_pdivmod([(c * lead_inv) % p for c in s0],
                                    list(self.modulus), self.p))

    # -- public scalar ops ----------------------------------------------
    def add_idx(self, i, j):
        t = self._tables
        if t is not None:
            return int(t.add[i, j])
        return self._add_poly(i, j)

    def mul_idx(self, i, j):
        t = self._tables
        if t is not None:
            return int(t.mul[i, j])
        return self._mul_poly(i, j)

    def neg_idx(self, i):
        t = self._tables
        if t is not None:
            return int(t.neg[i])
        return self._neg_poly(i)

    def sub_idx(self, i, j):
        return self.add_idx(i, self.neg_idx(j))

    def inv_idx(self, i):
        if i == 0:
            raise ZeroDivisionError("inverse of zero")
        t = self._tables
        if t is not None:
            return int(t.inv[i])
        return self._inv_poly(i)

    def pow_idx(self, i, e):
        if e < 0:
            return self.pow_idx(self.inv_idx(i), -e)
        acc, base = 1, i
        while e:
            if e & 1:
                acc = self.mul_idx(acc, base)
            base = self.mul_idx(base, base)
            e >>= 1
        return acc

    def frob_idx(self, i):
        return self.pow_idx(i, self.p)

    def minimal_degree_idx(self, i):
        """Length of the Frobenius orbit: least b with i in F_{p^b}."""
        t = self._tables
        if t is not None:
            return int(t.subdeg[i])
        b, y = 1, self.frob_idx(i)
        while y != i:
            y = self.frob_idx(y)
            b += 1
            assert b <= self.a
        return b

    # -- tables ----------------------------------------------------------
    def tables(self):
        """Dense arithmetic tables; only for q <= TABLE_LIMIT."""
        if self._tables is None:
            if self.q > TABLE_LIMIT:
                raise CapExceeded(
                    f"no dense tables for q = {self.q} > {TABLE_LIMIT}",
                    cap=TABLE_LIMIT, size=self.q)
            self._tables = self._build_tables()
        return self._tables

    def _find_generator(self):
        """Least index generating the multiplicative group."""
        factors = _prime_factors(self.q - 1) if self.q > 2 else []
        cofactors = [(self.q - 1) // ell for ell in factors]
        for g in range(2, self.q):
            if all(self.pow_idx(g, c) != 1 for c in cofactors):
                return g
        assert self.q == 2
        return 1

    def _build_tables(self):
        p, a, q = self.p, self.a, self.q
        r = np.arange(q, dtype=np.int64)
        if a == 1:
            add = ((r[:, None] + r[None, :]) % p).astype(np.int32)
            mul = ((r[:, None] * r[None, :]) % p).astype(np.int32)
            neg = (-r) % p
            inv = np.zeros(q, dtype=np.int64)
            for i in range(1, q):
                inv[i] = pow(i, -1, p)
            subdeg = np.ones(q, dtype=np.int64)
            exp = log = None
            if q > 2:
                g = self._find_generator()
                exp = np.ones(q - 1, dtype=np.int64)
                for k in range(1, q - 1):
                    exp[k] = (exp[k - 1] * g) % p
                log = np.full(q, -1, dtype=np.int64)
                log[exp] = np.arange(q - 1)
            return FieldTables(add, mul, neg, inv, subdeg, exp, log)

        # extension field: digit matrix, then exp/log from a generator
        digits = np.empty((q, a), dtype=np.int64)
        t = r.copy()
        for k in range(a):
            digits[:, k] = t % p
            t //= p
        powers = p ** np.arange(a, dtype=np.int64)
        neg = ((p - digits) % p) @ powers

        add = np.empty((q, q), dtype=np.int32)
        chunk = max(1, (1 << 22) // (q * a))
        for lo in range(0, q, chunk):
            hi = min(lo + chunk, q)
            s = (digits[lo:hi, None, :] + digits[None, :, :]) % p
            add[lo:hi] = s @ powers

        g = self._find_generator()
        exp = np.empty(q - 1, dtype=np.int64)
        exp[0] = 1
        for k in range(1, q - 1):
            exp[k] = self._mul_poly(int(exp[k - 1]), g)
        log = np.full(q, -1, dtype=np.int64)
        log[exp] = np.arange(q - 1)
        assert int((log == -1).sum()) == 1  # only zero has no log

        mul = np.zeros((q, q), dtype=np.int32)
        ii = exp[:, None]
        jj = exp[None, :]
        ss = (np.arange(q - 1)[:, None] + np.arange(q - 1)[None, :]) % (q - 1)
        mul[ii, jj] = exp[ss]

        inv = np.zeros(q, dtype=np.int64)
        inv[exp] = exp[(-np.arange(q - 1)) % (q - 1)]

        subdeg = np.full(q, a, dtype=np.int64)
        subdeg[0] = 1
        logs = log.copy()
        for b in range(1, a):
            if a % b:
                continue
            step = (q - 1) // (p ** b - 1)
            hit = np.nonzero((logs >= 0) & (logs % step == 0)
                             & (subdeg == a))[0]
            subdeg[hit] = b
        # elements of every proper subfield got a smaller degree already;
        # index 1 is the unit and lives in the prime field
        assert subdeg[1] == 1
        return FieldTables(add, mul, neg, inv, subdeg, exp, log)

    # -- embeddings ------------------------------------------------------
    def embedding_from(self, sub):
        """Index map realizing the canonical embedding of `sub` into self.

        The generator of `sub` is sent to the least root of sub.modulus
        in this field; the map is a field homomorphism (tested), and is
        cached.  Needs sub.q small enough to scan (<= 2^16)."""
        if not isinstance(sub, FiniteField) or sub.p != self.p:
            raise InvalidConfig("embedding requires same characteristic")
        if self.a % sub.a:
            raise InvalidConfig(
                f"F_{sub.p}^{sub.a} is not a subfield of F_{self.p}^{self.a}")
        key = (sub.p, sub.a)
        if key in self._embed_cache:
            return self._embed_cache[key]
        if sub.q > 1 << 16:
            raise CapExceeded("embedding scan too large", cap=1 << 16,
                              size=sub.q)
        root = None
        for cand in range(self.q if self.q <= TABLE_LIMIT else 0):
            acc, powv = 0, 1
            for c in sub.modulus:
                if c:
                    acc = self.add_idx(acc, self.mul_idx(c, powv))
                powv = self.mul_idx(powv, cand)
            if acc == 0:
                root = cand
                break
        if root is None:
            # large field: scan just the subfield, via a multiplicative generator
            g = self._find_generator_big()
            step = (self.q - 1) // (sub.q - 1)
            cands = sorted(self.pow_idx(g, step * k) for k in range(sub.q - 1))
            for cand in [0] + cands:
                acc, powv = 0, 1
                for c in sub.modulus:
                    if c:
                        acc = self.add_idx(acc, self.mul_idx(c, powv))
                    powv = self.mul_idx(powv, cand)
                if acc == 0:
                    root = cand
                    break
        assert root is not None
        table = np.empty(sub.q, dtype=np.int64)
        for i in range(sub.q):
            acc, powv = 0, 1
            for c in sub.coeffs_of(i):
                if c:
                    acc = self.add_idx(acc, self.mul_idx(c, powv))
                powv = self.mul_idx(powv, root)
            table[i] = acc
        self._embed_cache[key] = table
        return table

    def _find_generator_big(self):
        factors = _prime_factors(self.q - 1)
        cofactors = [(self.q - 1) // ell for ell in factors]
        for g in range(2, self.q):
            if all(self.pow_idx(g, c) != 1 for c in cofactors):
                return g
        raise AssertionError("no generator found")

    # -- element construction -------------------------------------------
    def elem(self, v):
        if isinstance(v, FieldElem):
            if v.field is not self and (v.field.p, v.field.a) != (self.p, self.a):
                raise InvalidConfig("element from a different field")
            return FieldElem(self, v.idx)
        if isinstance(v, (tuple, list)):
            if len(v) > self.a:
                raise InvalidConfig("too many coefficients")
            return FieldElem(self, self.idx_of(list(v) + [0] * (self.a - len(v))))
        # plain integers are literals: the image of v under Z -> F_q
        return FieldElem(self, int(v) % self.p)

    def from_index(self, i):
        assert 0 <= i < self.q
        return FieldElem(self, i)

    @property
    def zero(self):
        return FieldElem(self, 0)

    @property
    def one(self):
        return FieldElem(self, 1)

    def __iter__(self):
        return (FieldElem(self, i) for i in range(self.q))

    def __repr__(self):
        return f"GF({self.p})" if self.a == 1 else f"GF({self.p}^{self.a})"

    def __eq__(self, other):
        return (isinstance(other, FiniteField)
                and (self.p, self.a) == (other.p, other.a))

    def __hash__(self):
        return hash((self.p, self.a))


class FieldElem:
    """An element of a FiniteField, stored by index."""

    __slots__ = ("field", "idx")

    def __init__(self, field, idx):
        self.field = field
        self.idx = idx

    @property
    def coeffs(self):
        return self.field.coeffs_of(self.idx)

    def _coerce(self, other):
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise InvalidConfig("mixed fields")
            return other.idx
        return self.field.elem(other).idx

    def __add__(self, other):
        return FieldElem(self.field, self.field.add_idx(self.idx, self._coerce(other)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElem(self.field, self.field.neg_idx(self.idx))

    def __sub__(self, other):
        return FieldElem(self.field, self.field.sub_idx(self.idx, self._coerce(other)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        return FieldElem(self.field, self.field.mul_idx(self.idx, self._coerce(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        j = self._coerce(other)
        return FieldElem(self.field, self.field.mul_idx(self.idx, self.field.inv_idx(j)))

    def __pow__(self, e):
        return FieldElem(self.field, self.field.pow_idx(self.idx, e))

    def inverse(self):
        return FieldElem(self.field, self.field.inv_idx(self.idx))

    def __bool__(self):
        return self.idx != 0

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.field == other.field and self.idx == other.idx
        if isinstance(other, int):
            return self == self.field.elem(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.field.a, self.idx))

    def __repr__(self):
        return f"{format_element(self)} in {self.field!r}"


# ------------------------------------------------------------ public API

def construct(p, a, size_cap=DEFAULT_SIZE_CAP, _fresh=False):
    """The canonical F_{p^a}.  Cached; errors on bad p/a or oversize."""
    from sympy import isprime
    if not isinstance(p, int) or p < 2 or not isprime(p):
        raise InvalidConfig(f"p = {p!r} is not prime")
    if not isinstance(a, int) or a < 1:
        raise InvalidConfig(f"degree a = {a!r} must be a positive integer")
    if p ** a >= size_cap:
        raise CapExceeded(f"field size {p}^{a} exceeds cap {size_cap}",
                          cap=size_cap, size=p ** a)
    if not _fresh and (p, a) in _CACHE:
        return _CACHE[(p, a)]
    field = FiniteField(p, a, _least_irreducible(p, a))
    if not _fresh:
        _CACHE[(p, a)] = field
    return field


def minimal_degree(x: FieldElem) -> int:
    """Least b with x in the subfield F_{p^b} (Frobenius orbit length)."""
    return x.field.minimal_degree_idx(x.idx)


def field_generated(xs) -> int:
    """Degree over F_p of the subfield generated by the elements: the
    lcm of their minimal degrees (subfields form the divisor lattice)."""
    xs = list(xs)
    if not xs:
        return 1
    field = xs[0].field
    for x in xs:
        if x.field != field:
            raise InvalidConfig("elements from different fields")
    import math
    return reduce(math.lcm, (minimal_degree(x) for x in xs), 1)


def format_element(x: FieldElem) -> str:
    """Comma-separated coefficient list, constant first, trailing zeros
    trimmed ("0" for zero)."""
    cs = list(x.coeffs)
    while len(cs) > 1 and cs[-1] == 0:
        cs.pop()
    return ",".join(str(c) for c in cs)


def parse_element(field: FiniteField, text: str) -> FieldElem:
    parts = [int(t) for t in text.strip().split(",")]
    return field.elem(parts)


def format_field(field: FiniteField) -> str:
    return repr(field)


def parse_field(text: str, size_cap=DEFAULT_SIZE_CAP) -> FiniteField:
    """Parse "GF(p)" or "GF(p^a)"."""
    t = text.strip()
    if not (t.startswith("GF(") and t.endswith(")")):
        raise InvalidConfig(f"bad field literal {text!r}")
    body = t[3:-1]
    if "^" in body:
        ps, as_ = body.split("^")
        return construct(int(ps), int(as_), size_cap=size_cap)
    return construct(int(body), 1, size_cap=size_cap)

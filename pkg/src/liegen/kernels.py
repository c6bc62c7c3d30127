"""Scalar kernels for the compiled backend.

Everything here is numba-friendly: plain functions over numpy arrays and
integers, decorated with maybe_njit so the module still imports when
numba is absent (the pure-numpy backend then uses batchops instead).

Matrices are flat int64 arrays of length d*d, row major, entries are
field element indexes.  Field arithmetic goes through the dense tables
built by ffield (add/mul are int32 (q, q) tables, neg/inv/subdeg are
int64 vectors).  Element codes pack the flat entries base q, first entry
most significant: distinct matrices get distinct codes, and the integer
order on codes is the lexicographic order on entry vectors.

The RNG mirrors rng.py exactly: a counter-based splitmix64 keyed by
(seed, trial, ctr).  Kernels advance only ctr; trial boundaries are the
caller's business.  This is what makes results independent of thread
count and backend.
"""

import numpy as np

from .backend import maybe_njit

# -- witness codes shared with gentest ----------------------------------
W_NONE = 0          # generates, no obstruction
W_BOREL = 1         # common eigenline over the base field
W_REDUCIBLE = 2     # absolutely reducible, no rational eigenline
W_SUBFIELD = 3      # all traces inside F_{p^b}, param = b
W_DIHEDRAL = 4      # normalizer-of-torus type subgroup
W_EXCEPTIONAL = 5   # A4/S4/A5 type, param = projective order
W_CLOSURE = 6       # explicit proper closure, param = subgroup size

M_CERT = 0          # decided by trace certificates alone
M_CLOSURE = 1       # decided by the capped closure

# report categories (CSV column order)
C_GEN = 0
C_REDUCIBLE = 1
C_SUBFIELD = 2
C_OTHER = 3
C_INCONCLUSIVE = 4

# closure status codes
S_COMPLETE = 0
S_CAP = 1
S_OVER = 2

_U0 = np.uint64(0)
_U1 = np.uint64(1)
_U20 = np.uint64(20)
_U27 = np.uint64(27)
_U30 = np.uint64(30)
_U31 = np.uint64(31)
_UMAX = np.uint64(0xFFFFFFFFFFFFFFFF)
_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


# ------------------------------------------------------------------ rng

@maybe_njit
def k_mix64(z):
    z = (z ^ (z >> _U30)) * _MIX1
    z = (z ^ (z >> _U27)) * _MIX2
    return z ^ (z >> _U31)


@maybe_njit
def k_draw_u64(seed, trial, ctr):
    key = (np.uint64(trial) << _U20) + np.uint64(ctr) + _U1
    return k_mix64(seed + key * _GAMMA)


@maybe_njit
def k_draw_below(seed, trial, ctr, n):
    """Uniform int in [0, n) by rejection; returns (value, new ctr)."""
    nu = np.uint64(n)
    rem = ((_UMAX % nu) + _U1) % nu
    while True:
        v = k_draw_u64(seed, trial, ctr)
        ctr += 1
        if rem == _U0 or v <= _UMAX - rem:
            return np.int64(v % nu), ctr


# ------------------------------------------------------- matrix helpers

@maybe_njit
def k_matmul(out, x, y, d, mul_t, add_t):
    for i in range(d):
        for j in range(d):
            acc = np.int64(mul_t[x[i * d], y[j]])
            for k in range(1, d):
                acc = add_t[acc, mul_t[x[i * d + k], y[k * d + j]]]
            out[i * d + j] = acc


@maybe_njit
def k_identity(out, d):
    for t in range(d * d):
        out[t] = 0
    for i in range(d):
        out[i * d + i] = 1


@maybe_njit
def k_is_identity(x, d):
    for i in range(d):
        for j in range(d):
            want = 1 if i == j else 0
            if x[i * d + j] != want:
                return False
    return True


@maybe_njit
def k_is_scalar(x, d):
    c = x[0]
    for i in range(d):
        for j in range(d):
            if i == j:
                if x[i * d + i] != c:
                    return False
            elif x[i * d + j] != 0:
                return False
    return c != 0


@maybe_njit
def k_trace(x, d, add_t):
    acc = x[0]
    for i in range(1, d):
        acc = np.int64(add_t[acc, x[i * d + i]])
    return acc


@maybe_njit
def k_encode(x, d2, q):
    code = np.int64(0)
    for t in range(d2):
        code = code * q + x[t]
    return code


@maybe_njit
def k_decode(out, code, d2, q):
    for t in range(d2 - 1, -1, -1):
        out[t] = code % q
        code //= q


@maybe_njit
def k_canon_code(x, d2, q, scalars, mul_t):
    """Least code among the central scalar multiples of x."""
    best = np.int64(-1)
    for si in range(scalars.shape[0]):
        s = scalars[si]
        code = np.int64(0)
        for t in range(d2):
            code = code * q + mul_t[s, x[t]]
        if best < 0 or code < best:
            best = code
    return best


@maybe_njit
def k_inv2(out, x, mul_t, neg_t):
    # determinant-1 closed form for 2x2
    out[0] = x[3]
    out[1] = neg_t[x[1]]
    out[2] = neg_t[x[2]]
    out[3] = x[0]


@maybe_njit
def k_inverse(out, x, d, mul_t, add_t, neg_t, inv_t):
    """Gauss-Jordan inverse over the field; x must be invertible."""
    n2 = 2 * d
    work = np.empty((d, n2), dtype=np.int64)
    for i in range(d):
        for j in range(d):
            work[i, j] = x[i * d + j]
            work[i, d + j] = 1 if i == j else 0
    for col in range(d):
        piv = -1
        for r in range(col, d):
            if work[r, col] != 0:
                piv = r
                break
        if piv < 0:
            return False
        if piv != col:
            for j in range(n2):
                tmp = work[col, j]
                work[col, j] = work[piv, j]
                work[piv, j] = tmp
        pi = inv_t[work[col, col]]
        for j in range(n2):
            work[col, j] = mul_t[pi, work[col, j]]
        for r in range(d):
            if r != col and work[r, col] != 0:
                c = work[r, col]
                for j in range(n2):
                    work[r, j] = add_t[work[r, j],
                                       neg_t[mul_t[c, work[col, j]]]]
    for i in range(d):
        for j in range(d):
            out[i * d + j] = work[i, d + j]
    return True


@maybe_njit
def k_order_linear(x, d, cap, mul_t, add_t):
    """Multiplicative order, or 0 if it exceeds cap."""
    d2 = d * d
    w = np.empty(d2, dtype=np.int64)
    t = np.empty(d2, dtype=np.int64)
    for i in range(d2):
        w[i] = x[i]
    for k in range(1, cap + 1):
        if k_is_identity(w, d):
            return k
        k_matmul(t, w, x, d, mul_t, add_t)
        for i in range(d2):
            w[i] = t[i]
    return 0


@maybe_njit
def k_order_proj(x, d, cap, mul_t, add_t):
    """Order modulo scalars, or 0 if it exceeds cap."""
    d2 = d * d
    w = np.empty(d2, dtype=np.int64)
    t = np.empty(d2, dtype=np.int64)
    for i in range(d2):
        w[i] = x[i]
    for k in range(1, cap + 1):
        if k_is_scalar(w, d):
            return k
        k_matmul(t, w, x, d, mul_t, add_t)
        for i in range(d2):
            w[i] = t[i]
    return 0


# -------------------------------------------------------------- hashing

@maybe_njit
def k_hash_insert(keys, code, P):
    """Insert code into the open-addressing table; True when new."""
    pos = code % P
    step = 1 + code % (P - 1)
    while True:
        k = keys[pos]
        if k == -1:
            keys[pos] = code
            return True
        if k == code:
            return False
        pos = (pos + step) % P


# -------------------------------------------------------------- closure

@maybe_njit
def k_closure(gens, ng, d, q, mul_t, add_t, scalars, cap, stop_over,
              P, keys, queue):
    """Breadth-first closure of the subgroup generated by gens.

    Semigroup closure suffices in a finite group.  Codes are canonical
    modulo the scalars array (pass just [1] for no quotient).  Returns
    (status, size): S_COMPLETE when closed, S_OVER as soon as the size
    passes stop_over (0 disables), S_CAP when cap rows do not suffice.
    keys must come in filled with -1."""
    d2 = d * d
    prod = np.empty(d2, dtype=np.int64)
    k_identity(prod, d)
    code = k_canon_code(prod, d2, q, scalars, mul_t)
    k_hash_insert(keys, code, P)
    for t in range(d2):
        queue[0, t] = prod[t]
    size = 1
    head = 0
    while head < size:
        for g in range(ng):
            k_matmul(prod, queue[head], gens[g], d, mul_t, add_t)
            code = k_canon_code(prod, d2, q, scalars, mul_t)
            if k_hash_insert(keys, code, P):
                if stop_over > 0 and size + 1 > stop_over:
                    return S_OVER, size + 1
                if size + 1 > cap:
                    return S_CAP, size
                for t in range(d2):
                    queue[size, t] = prod[t]
                size += 1
        head += 1
    return S_COMPLETE, size


@maybe_njit
def k_conj_class(x, gens, ginvs, ng, d, q, mul_t, add_t, scalars, cap,
                 P, keys, queue):
    """Orbit of x under conjugation by the given group generators.
    Returns (status, size) like k_closure (stop_over not offered)."""
    d2 = d * d
    prod = np.empty(d2, dtype=np.int64)
    tmp = np.empty(d2, dtype=np.int64)
    code = k_canon_code(x, d2, q, scalars, mul_t)
    k_hash_insert(keys, code, P)
    for t in range(d2):
        queue[0, t] = x[t]
    size = 1
    head = 0
    while head < size:
        for g in range(ng):
            k_matmul(tmp, ginvs[g], queue[head], d, mul_t, add_t)
            k_matmul(prod, tmp, gens[g], d, mul_t, add_t)
            code = k_canon_code(prod, d2, q, scalars, mul_t)
            if k_hash_insert(keys, code, P):
                if size + 1 > cap:
                    return S_CAP, size
                for t in range(d2):
                    queue[size, t] = prod[t]
                size += 1
        head += 1
    return S_COMPLETE, size


# ------------------------------------------------------------- samplers

@maybe_njit
def k_sample_sl2(out, seed, trial, ctr, q, mul_t, add_t, neg_t, inv_t):
    """Uniform element of SL2(q).  First row uniform nonzero, then the
    second row runs over the q solutions of the determinant equation."""
    v, ctr = k_draw_below(seed, trial, ctr, q * q - 1)
    v += 1
    a = v % q
    b = v // q
    w, ctr = k_draw_below(seed, trial, ctr, q)
    if a != 0:
        c = w
        # d = (1 + b c) / a
        dd = mul_t[inv_t[a], add_t[1, mul_t[b, c]]]
    else:
        c = neg_t[inv_t[b]]
        dd = w
    out[0] = a
    out[1] = b
    out[2] = c
    out[3] = dd
    return ctr


@maybe_njit
def k_det3(x, mul_t, add_t, neg_t):
    m0 = add_t[mul_t[x[4], x[8]], neg_t[mul_t[x[5], x[7]]]]
    m1 = add_t[mul_t[x[3], x[8]], neg_t[mul_t[x[5], x[6]]]]
    m2 = add_t[mul_t[x[3], x[7]], neg_t[mul_t[x[4], x[6]]]]
    acc = mul_t[x[0], m0]
    acc = add_t[acc, neg_t[mul_t[x[1], m1]]]
    return np.int64(add_t[acc, mul_t[x[2], m2]])


@maybe_njit
def k_sample_sl3(out, seed, trial, ctr, q, mul_t, add_t, neg_t, inv_t):
    """Uniform element of SL3(q): rejection-sample GL3, then scale the
    first row by 1/det (a bijection GL3 -> SL3 x units)."""
    while True:
        for t in range(9):
            v, ctr = k_draw_below(seed, trial, ctr, q)
            out[t] = v
        det = k_det3(out, mul_t, add_t, neg_t)
        if det != 0:
            di = inv_t[det]
            for t in range(3):
                out[t] = mul_t[di, out[t]]
            return ctr


@maybe_njit
def k_symp_w(w, c):
    """Row vector representing B(c, .) for the form with antidiagonal
    gram matrix (1, 1, -1, -1); entries still need the sign table."""
    w[0] = c[3]
    w[1] = c[2]
    w[2] = c[1]
    w[3] = c[0]


@maybe_njit
def k_fill_column(col, W, rhs, k, fv, q, mul_t, add_t, neg_t, inv_t):
    """Solve the k x 4 system W col = rhs, free coordinates taken from
    the base-q digits of fv, lowest digit to the least free column.
    W and rhs are destroyed.  Rows must be independent."""
    piv = np.empty(k, dtype=np.int64)
    used = np.zeros(4, dtype=np.int64)
    for r in range(k):
        pc = -1
        for c in range(4):
            if used[c] == 0 and W[r, c] != 0:
                pc = c
                break
        pi = inv_t[W[r, pc]]
        for c in range(4):
            W[r, c] = mul_t[pi, W[r, c]]
        rhs[r] = mul_t[pi, rhs[r]]
        for r2 in range(k):
            if r2 != r and W[r2, pc] != 0:
                f = W[r2, pc]
                for c in range(4):
                    W[r2, c] = add_t[W[r2, c], neg_t[mul_t[f, W[r, c]]]]
                rhs[r2] = add_t[rhs[r2], neg_t[mul_t[f, rhs[r]]]]
        piv[r] = pc
        used[pc] = 1
    for c in range(4):
        if used[c] == 0:
            col[c] = fv % q
            fv //= q
    for r in range(k):
        acc = np.int64(rhs[r])
        for c in range(4):
            if used[c] == 0 and W[r, c] != 0:
                acc = np.int64(add_t[acc, neg_t[mul_t[W[r, c], col[c]]]])
        col[piv[r]] = acc


@maybe_njit
def k_sample_sp4(out, seed, trial, ctr, q, mul_t, add_t, neg_t, inv_t):
    """Uniform element of Sp4(q) for the antidiagonal form diag-reversed
    (1, 1, -1, -1).  Columns are built left to right: each one solves
    the pairing constraints against the previous columns, with the free
    coordinates drawn uniformly; column 1 rejects the span of column 0.
    The count (q^4-1)(q^3-q) q^2 q matches the group order exactly."""
    c0 = np.empty(4, dtype=np.int64)
    c1 = np.empty(4, dtype=np.int64)
    c2 = np.empty(4, dtype=np.int64)
    c3 = np.empty(4, dtype=np.int64)
    wrow = np.empty(4, dtype=np.int64)
    W = np.empty((3, 4), dtype=np.int64)
    rhs = np.empty(3, dtype=np.int64)

    v, ctr = k_draw_below(seed, trial, ctr, q * q * q * q - 1)
    v += 1
    for i in range(4):
        c0[i] = v % q
        v //= q

    # B(x, y) = x0 y3 + x1 y2 - x2 y1 - x3 y0; as a functional of y the
    # coefficient vector for x = c is (-c3, -c2, c1, c0)
    while True:
        k_symp_w(wrow, c0)
        W[0, 0] = neg_t[wrow[0]]
        W[0, 1] = neg_t[wrow[1]]
        W[0, 2] = wrow[2]
        W[0, 3] = wrow[3]
        rhs[0] = 0
        fv, ctr = k_draw_below(seed, trial, ctr, q * q * q)
        k_fill_column(c1, W[:1], rhs[:1], 1, fv, q, mul_t, add_t,
                      neg_t, inv_t)
        # reject scalar multiples of c0
        pivot = -1
        for i in range(4):
            if c0[i] != 0:
                pivot = i
                break
        lam = mul_t[c1[pivot], inv_t[c0[pivot]]]
        dep = True
        for i in range(4):
            if c1[i] != mul_t[lam, c0[i]]:
                dep = False
                break
        if not dep:
            break

    k_symp_w(wrow, c0)
    W[0, 0] = neg_t[wrow[0]]
    W[0, 1] = neg_t[wrow[1]]
    W[0, 2] = wrow[2]
    W[0, 3] = wrow[3]
    k_symp_w(wrow, c1)
    W[1, 0] = neg_t[wrow[0]]
    W[1, 1] = neg_t[wrow[1]]
    W[1, 2] = wrow[2]
    W[1, 3] = wrow[3]
    rhs[0] = 0
    rhs[1] = 1
    fv, ctr = k_draw_below(seed, trial, ctr, q * q)
    k_fill_column(c2, W[:2], rhs[:2], 2, fv, q, mul_t, add_t, neg_t, inv_t)

    k_symp_w(wrow, c0)
    W[0, 0] = neg_t[wrow[0]]
    W[0, 1] = neg_t[wrow[1]]
    W[0, 2] = wrow[2]
    W[0, 3] = wrow[3]
    k_symp_w(wrow, c1)
    W[1, 0] = neg_t[wrow[0]]
    W[1, 1] = neg_t[wrow[1]]
    W[1, 2] = wrow[2]
    W[1, 3] = wrow[3]
    k_symp_w(wrow, c2)
    W[2, 0] = neg_t[wrow[0]]
    W[2, 1] = neg_t[wrow[1]]
    W[2, 2] = wrow[2]
    W[2, 3] = wrow[3]
    rhs[0] = 1
    rhs[1] = 0
    rhs[2] = 0
    fv, ctr = k_draw_below(seed, trial, ctr, q)
    k_fill_column(c3, W, rhs, 3, fv, q, mul_t, add_t, neg_t, inv_t)

    for i in range(4):
        out[i * 4 + 0] = c0[i]
        out[i * 4 + 1] = c1[i]
        out[i * 4 + 2] = c2[i]
        out[i * 4 + 3] = c3[i]
    return ctr


# --------------------------------------------------- SL2 classification

@maybe_njit
def _lcm64(a, b):
    x, y = a, b
    while y:
        x, y = y, x % y
    return a // x * b


@maybe_njit
def k_trace_field_walk(x, y, a, p, maxlen, mul_t, add_t, neg_t, subdeg):
    """Degree over F_p of the field generated by traces of all reduced
    words of length <= maxlen in x, y and inverses (2x2 only).  Walks
    the word tree depth first, reusing prefix products; stops early the
    moment the running lcm reaches a."""
    mats = np.empty((4, 4), dtype=np.int64)
    for t in range(4):
        mats[0, t] = x[t]
        mats[1, t] = y[t]
    k_inv2(mats[2], x, mul_t, neg_t)
    k_inv2(mats[3], y, mul_t, neg_t)

    stack = np.empty((maxlen + 1, 4), dtype=np.int64)
    letter = np.empty(maxlen + 1, dtype=np.int64)
    nxt = np.zeros(maxlen + 1, dtype=np.int64)
    k_identity(stack[0], 2)
    lcm = np.int64(1)
    depth = 0
    while True:
        c = nxt[depth]
        # skip the letter that cancels against the last one
        while c < 4 and depth > 0 and c == (letter[depth] + 2) % 4:
            c += 1
        if c > 3:
            depth -= 1
            if depth < 0:
                return lcm
            continue
        nxt[depth] = c + 1
        k_matmul(stack[depth + 1], stack[depth], mats[c], 2, mul_t, add_t)
        letter[depth + 1] = c
        tr = add_t[stack[depth + 1][0], stack[depth + 1][3]]
        lcm = _lcm64(lcm, subdeg[tr])
        if lcm >= a:
            return lcm
        if depth + 1 < maxlen:
            depth += 1
            nxt[depth] = 0
    return lcm


@maybe_njit
def k_dickson_sl2(x, y, q, p, a, mul_t, add_t, neg_t, inv_t, subdeg,
                  scalars, capB, PB):
    """Decide whether x, y generate SL2(q), q >= 4, with a witness.

    Returns (generates, witness, param, method).  The decision tree:
    commutator trace 2 means reducible (Borel when a common rational
    eigenline exists); otherwise the trace field of the pair detects
    conjugates of subfield groups; cheap order certificates rule out
    the dihedral and A4/S4/A5 cases; anything still open goes to a
    closure capped at capB, past which no proper subgroup exists."""
    two = np.int64(add_t[1, 1])
    comm = np.empty(4, dtype=np.int64)
    t1 = np.empty(4, dtype=np.int64)
    t2 = np.empty(4, dtype=np.int64)
    k_inv2(t1, x, mul_t, neg_t)
    k_inv2(t2, y, mul_t, neg_t)
    xy = np.empty(4, dtype=np.int64)
    k_matmul(xy, x, y, 2, mul_t, add_t)
    k_matmul(comm, xy, t1, 2, mul_t, add_t)
    w4 = np.empty(4, dtype=np.int64)
    k_matmul(w4, comm, t2, 2, mul_t, add_t)
    ctr_tr = np.int64(add_t[w4[0], w4[3]])

    if ctr_tr == two:
        # absolutely reducible; look for a shared rational eigenline
        for t in range(q + 1):
            if t < q:
                v0, v1 = np.int64(1), np.int64(t)
            else:
                v0, v1 = np.int64(0), np.int64(1)
            ok = True
            for m in range(2):
                mm = x if m == 0 else y
                u0 = add_t[mul_t[mm[0], v0], mul_t[mm[1], v1]]
                u1 = add_t[mul_t[mm[2], v0], mul_t[mm[3], v1]]
                cross = add_t[mul_t[u0, v1], neg_t[mul_t[u1, v0]]]
                if cross != 0:
                    ok = False
                    break
            if ok:
                return False, W_BOREL, np.int64(t), M_CERT
        return False, W_REDUCIBLE, np.int64(0), M_CERT

    guard = False
    if a > 1:
        b = k_trace_field_walk(x, y, a, p, 8, mul_t, add_t, neg_t, subdeg)
        if b < a:
            return False, W_SUBFIELD, np.int64(b), M_CERT
        # the index-2-field trick: a proper subgroup of twisted type over
        # F_{q^(1/2)} keeps every commutator trace in that subfield
        if p != 2 and a % 2 == 0 and (a // 2) % subdeg[ctr_tr] == 0:
            guard = True

    if not guard:
        # order certificates: some word of projective order > 5 kills
        # A4/S4/A5; two non-commuting words of projective order > 2
        # kill the dihedral family
        cand = np.empty((6, 4), dtype=np.int64)
        for t in range(4):
            cand[0, t] = x[t]
            cand[1, t] = y[t]
            cand[2, t] = xy[t]
        k_matmul(cand[3], y, x, 2, mul_t, add_t)
        k_matmul(cand[4], x, xy, 2, mul_t, add_t)
        k_matmul(cand[5], xy, y, 2, mul_t, add_t)
        ords = np.empty(6, dtype=np.int64)
        big = False
        for i in range(6):
            ords[i] = k_order_proj(cand[i], 2, 5, mul_t, add_t)
            if ords[i] == 0:
                big = True
        not_dih = False
        if big:
            for i in range(6):
                if ords[i] == 0 or ords[i] >= 3:
                    for j in range(i + 1, 6):
                        if ords[j] == 0 or ords[j] >= 3:
                            k_matmul(t1, cand[i], cand[j], 2, mul_t, add_t)
                            k_matmul(t2, cand[j], cand[i], 2, mul_t, add_t)
                            # projective commuting: t1 = s t2 for a scalar s
                            same = False
                            for si in range(scalars.shape[0]):
                                s = scalars[si]
                                eq = True
                                for t in range(4):
                                    if t1[t] != mul_t[s, t2[t]]:
                                        eq = False
                                        break
                                if eq:
                                    same = True
                                    break
                            if not same:
                                not_dih = True
                                break
                    if not_dih:
                        break
        if big and not_dih:
            return True, W_NONE, np.int64(0), M_CERT

    # capped closure settles everything else
    gens = np.empty((2, 4), dtype=np.int64)
    for t in range(4):
        gens[0, t] = x[t]
        gens[1, t] = y[t]
    one = np.ones(1, dtype=np.int64)
    keys = np.full(PB, -1, dtype=np.int64)
    queue = np.empty((capB + 1, 4), dtype=np.int64)
    status, size = k_closure(gens, 2, 2, q, mul_t, add_t, one,
                             capB + 1, capB, PB, keys, queue)
    if status == S_OVER:
        return True, W_NONE, np.int64(size), M_CLOSURE
    # complete proper closure: name the projective image when it is one
    # of the small famous ones, by size and involution count
    z = np.int64(0)
    invol = np.int64(0)
    for e in range(size):
        if k_is_scalar(queue[e], 2):
            z += 1
        else:
            k_matmul(t1, queue[e], queue[e], 2, mul_t, add_t)
            if k_is_scalar(t1, 2):
                invol += 1
    proj = size // z
    pinv = invol // z
    if proj == 12 or proj == 24 or proj == 60:
        if (proj == 12 and pinv == 3) or (proj == 24 and pinv == 9) \
                or (proj == 60 and pinv == 15):
            return False, W_EXCEPTIONAL, np.int64(proj), M_CLOSURE
        return False, W_DIHEDRAL, np.int64(proj), M_CLOSURE
    return False, W_CLOSURE, np.int64(size), M_CLOSURE


@maybe_njit
def k_witness_category(generates, witness):
    if generates:
        return C_GEN
    if witness == W_BOREL or witness == W_REDUCIBLE:
        return C_REDUCIBLE
    if witness == W_SUBFIELD:
        return C_SUBFIELD
    return C_OTHER


# ------------------------------------------------------------ MC blocks

@maybe_njit
def k_mc_sl2_block(seed, trial_lo, n_trials, q, p, a, mode, r, s,
                   projective, mul_t, add_t, neg_t, inv_t, subdeg,
                   scalars, capB, PB, counts):
    """Monte Carlo block for the SL2 family: counts[c] accumulates the
    witness categories over trials trial_lo .. trial_lo+n_trials-1.

    mode 0 draws uniform pairs from the group; mode 1 rejection-samples
    to orders (r, s), measured projectively when projective is set.
    Returns 0, or 1 when order rejection seems hopeless."""
    x = np.empty(4, dtype=np.int64)
    y = np.empty(4, dtype=np.int64)
    ordcap = 2 * q + 2
    for i in range(n_trials):
        trial = trial_lo + i
        ctr = np.int64(0)
        if mode == 0:
            ctr = k_sample_sl2(x, seed, trial, ctr, q, mul_t, add_t,
                               neg_t, inv_t)
            ctr = k_sample_sl2(y, seed, trial, ctr, q, mul_t, add_t,
                               neg_t, inv_t)
        else:
            found = 0
            for _att in range(100000):
                ctr = k_sample_sl2(x, seed, trial, ctr, q, mul_t, add_t,
                                   neg_t, inv_t)
                if projective:
                    o = k_order_proj(x, 2, ordcap, mul_t, add_t)
                else:
                    o = k_order_linear(x, 2, ordcap, mul_t, add_t)
                if o == r:
                    found = 1
                    break
            if found == 0:
                return 1
            found = 0
            for _att in range(100000):
                ctr = k_sample_sl2(y, seed, trial, ctr, q, mul_t, add_t,
                                   neg_t, inv_t)
                if projective:
                    o = k_order_proj(y, 2, ordcap, mul_t, add_t)
                else:
                    o = k_order_linear(y, 2, ordcap, mul_t, add_t)
                if o == s:
                    found = 1
                    break
            if found == 0:
                return 1
        gen, wit, _par, _meth = k_dickson_sl2(
            x, y, q, p, a, mul_t, add_t, neg_t, inv_t, subdeg,
            scalars, capB, PB)
        counts[k_witness_category(gen, wit)] += 1
    return 0


@maybe_njit
def k_decay_block(seed, trial_lo, n_trials, q, a, letters, wlen,
                  mul_t, add_t, neg_t, inv_t, subdeg):
    """Count trials whose word evaluation has a trace lying in a proper
    subfield.  The pair is drawn uniformly from SL2(q) per trial."""
    mats = np.empty((4, 4), dtype=np.int64)
    w = np.empty(4, dtype=np.int64)
    t = np.empty(4, dtype=np.int64)
    hits = np.int64(0)
    for i in range(n_trials):
        trial = trial_lo + i
        ctr = np.int64(0)
        ctr = k_sample_sl2(mats[0], seed, trial, ctr, q, mul_t, add_t,
                           neg_t, inv_t)
        ctr = k_sample_sl2(mats[1], seed, trial, ctr, q, mul_t, add_t,
                           neg_t, inv_t)
        k_inv2(mats[2], mats[0], mul_t, neg_t)
        k_inv2(mats[3], mats[1], mul_t, neg_t)
        k_identity(w, 2)
        for j in range(wlen):
            k_matmul(t, w, mats[letters[j]], 2, mul_t, add_t)
            for u in range(4):
                w[u] = t[u]
        tr = add_t[w[0], w[3]]
        if subdeg[tr] < a:
            hits += 1
    return hits

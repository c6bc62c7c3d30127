"""Vectorized numpy implementations of the hot kernels.

This is the fallback backend used when numba is unavailable or disabled
via the environment flag.  Each routine reproduces the corresponding
kernels.py result exactly: the RNG consumes the same per-trial counter
stream lane by lane, so samples, counts and reports come out bitwise
identical to the compiled path.  Rare branches (symplectic sampling,
undecided classifier cases) drop down to the interpreted scalar
reference, obtained from the kernel functions themselves.

Set orders can differ internally (frontier search instead of one queue),
so closure results are exposed as status, size and a code-sorted element
block rather than a discovery-ordered queue.
"""

import numpy as np

from . import kernels as K

_U1 = np.uint64(1)
_U20 = np.uint64(20)
_UMAX = np.uint64(0xFFFFFFFFFFFFFFFF)
_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


def _py(fn):
    """Interpreted body of a possibly-jitted kernel."""
    return getattr(fn, "py_func", fn)


# ------------------------------------------------------------------ rng

def np_mix64(z):
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def np_draw_u64(seed, trials, ctrs):
    key = (trials.astype(np.uint64) << _U20) + ctrs.astype(np.uint64) + _U1
    return np_mix64(np.uint64(seed) + key * _GAMMA)


def np_draw_below(seed, trials, ctrs, n):
    """Per-lane rejection sampling below n; ctrs advance in place just
    like the scalar kernel would advance them."""
    m = trials.shape[0]
    out = np.zeros(m, dtype=np.int64)
    nu = np.uint64(n)
    rem = ((_UMAX % nu) + _U1) % nu
    active = np.ones(m, dtype=bool)
    while active.any():
        idx = np.nonzero(active)[0]
        v = np_draw_u64(seed, trials[idx], ctrs[idx])
        ctrs[idx] += 1
        ok = (v <= _UMAX - rem) if rem != 0 else np.ones(len(idx), bool)
        good = idx[ok]
        out[good] = (v[ok] % nu).astype(np.int64)
        active[good] = False
    return out


# ------------------------------------------------------- batched algebra

def np_matmul(X, Y, d, mul_t, add_t):
    """Row-flattened batched matrix product with table arithmetic.
    X is (m, d*d); Y is (m, d*d) or a single flat (d*d,) matrix."""
    single = Y.ndim == 1
    m = X.shape[0]
    out = np.empty((m, d * d), dtype=np.int64)
    for i in range(d):
        for j in range(d):
            ycol = Y[j] if single else Y[:, j]
            acc = mul_t[X[:, i * d], ycol].astype(np.int64)
            for k in range(1, d):
                ycol = Y[k * d + j] if single else Y[:, k * d + j]
                acc = add_t[acc, mul_t[X[:, i * d + k], ycol]].astype(np.int64)
            out[:, i * d + j] = acc
    return out


def np_encode(X, q):
    codes = np.zeros(X.shape[0], dtype=np.int64)
    for t in range(X.shape[1]):
        codes = codes * q + X[:, t]
    return codes


def np_canon_codes(X, q, scalars, mul_t):
    best = None
    for s in scalars:
        codes = np_encode(mul_t[int(s), X].astype(np.int64), q)
        best = codes if best is None else np.minimum(best, codes)
    return best


def np_is_scalar(X, d):
    ok = X[:, 0] != 0
    for i in range(d):
        for j in range(d):
            if i == j:
                ok &= X[:, i * d + i] == X[:, 0]
            else:
                ok &= X[:, i * d + j] == 0
    return ok


def np_trace(X, d, add_t):
    acc = X[:, 0]
    for i in range(1, d):
        acc = add_t[acc, X[:, i * d + i]].astype(np.int64)
    return acc


def np_inv2(X, mul_t, neg_t):
    out = np.empty_like(X)
    out[:, 0] = X[:, 3]
    out[:, 1] = neg_t[X[:, 1]]
    out[:, 2] = neg_t[X[:, 2]]
    out[:, 3] = X[:, 0]
    return out


# -------------------------------------------------------------- closure

def _new_codes(codes, seen):
    pos = np.searchsorted(seen, codes)
    pos_c = np.minimum(pos, len(seen) - 1)
    return (pos == len(seen)) | (seen[pos_c] != codes)


def np_closure(gens, d, q, mul_t, add_t, scalars, cap, stop_over):
    """Frontier-batched subgroup closure.  Returns (status, size, elems)
    where elems rows are sorted by canonical code.  Status and size
    agree with k_closure; on an early stop the size reads stop_over+1
    and elems holds only what was gathered."""
    d2 = d * d
    ident = np.zeros((1, d2), dtype=np.int64)
    for i in range(d):
        ident[0, i * d + i] = 1
    blocks = [ident]
    seen = np_canon_codes(ident, q, scalars, mul_t)
    frontier = ident
    size = 1
    while frontier.shape[0]:
        prods = np.concatenate([np_matmul(frontier, g, d, mul_t, add_t)
                                for g in gens])
        codes = np_canon_codes(prods, q, scalars, mul_t)
        codes, first = np.unique(codes, return_index=True)
        prods = prods[first]
        fresh = _new_codes(codes, seen)
        codes, prods = codes[fresh], prods[fresh]
        if codes.shape[0] == 0:
            break
        if stop_over > 0 and size + codes.shape[0] > stop_over:
            return K.S_OVER, stop_over + 1, np.concatenate(blocks)
        if size + codes.shape[0] > cap:
            return K.S_CAP, cap, np.concatenate(blocks)
        size += codes.shape[0]
        order = np.argsort(codes)
        frontier = prods[order]
        blocks.append(frontier)
        seen = np.sort(np.concatenate([seen, codes]))
    elems = np.concatenate(blocks)
    order = np.argsort(np_canon_codes(elems, q, scalars, mul_t))
    return K.S_COMPLETE, size, elems[order]


def np_conj_class(x, gens, ginvs, d, q, mul_t, add_t, scalars, cap):
    """Conjugation orbit of x, frontier style; same contract as
    np_closure without the early stop."""
    d2 = d * d
    frontier = x.reshape(1, d2)
    blocks = [frontier]
    seen = np_canon_codes(frontier, q, scalars, mul_t)
    size = 1
    while frontier.shape[0]:
        parts = []
        for g, gi in zip(gens, ginvs):
            half = np_matmul(frontier, g, d, mul_t, add_t)
            parts.append(_left_mul(gi, half, d, mul_t, add_t))
        prods = np.concatenate(parts)
        codes = np_canon_codes(prods, q, scalars, mul_t)
        codes, first = np.unique(codes, return_index=True)
        prods = prods[first]
        fresh = _new_codes(codes, seen)
        codes, prods = codes[fresh], prods[fresh]
        if codes.shape[0] == 0:
            break
        if size + codes.shape[0] > cap:
            return K.S_CAP, cap, np.concatenate(blocks)
        size += codes.shape[0]
        order = np.argsort(codes)
        frontier = prods[order]
        blocks.append(frontier)
        seen = np.sort(np.concatenate([seen, codes]))
    elems = np.concatenate(blocks)
    order = np.argsort(np_canon_codes(elems, q, scalars, mul_t))
    return K.S_COMPLETE, size, elems[order]


def _left_mul(g, X, d, mul_t, add_t):
    """g . X_t for a single flat matrix g against a batch X."""
    m = X.shape[0]
    out = np.empty_like(X)
    for i in range(d):
        for j in range(d):
            acc = mul_t[int(g[i * d]), X[:, j]].astype(np.int64)
            for k in range(1, d):
                acc = add_t[acc, mul_t[int(g[i * d + k]),
                                       X[:, k * d + j]]].astype(np.int64)
            out[:, i * d + j] = acc
    return out


# ------------------------------------------------------------- samplers

def np_sample_sl2(seed, trials, ctrs, q, mul_t, add_t, neg_t, inv_t):
    """Batch of uniform SL2(q) draws, one per trial lane; mirrors
    k_sample_sl2 draw for draw."""
    m = trials.shape[0]
    v = np_draw_below(seed, trials, ctrs, q * q - 1) + 1
    a = v % q
    b = v // q
    w = np_draw_below(seed, trials, ctrs, q)
    out = np.empty((m, 4), dtype=np.int64)
    out[:, 0] = a
    out[:, 1] = b
    nz = a != 0
    # a nonzero: c free, d = (1 + b c)/a; a zero: c = -1/b, d free
    c = np.where(nz, w, 0)
    c_zero = neg_t[inv_t[np.where(nz, 1, b)]]
    c = np.where(nz, c, c_zero)
    dd_nz = mul_t[inv_t[np.where(nz, a, 1)],
                  add_t[1, mul_t[b, c]].astype(np.int64)].astype(np.int64)
    dd = np.where(nz, dd_nz, w)
    out[:, 2] = c
    out[:, 3] = dd
    return out


def _np_draw_below_at(seed, trials, ctrs, idx, n):
    """Draw for a subset of lanes, advancing only their counters."""
    sub_ctr = ctrs[idx].copy()
    vals = np_draw_below(seed, trials[idx], sub_ctr, n)
    ctrs[idx] = sub_ctr
    return vals


def np_sample_sl3(seed, trials, ctrs, q, mul_t, add_t, neg_t, inv_t):
    m = trials.shape[0]
    out = np.empty((m, 9), dtype=np.int64)
    active = np.arange(m)
    while active.shape[0]:
        block = np.empty((active.shape[0], 9), dtype=np.int64)
        for t in range(9):
            block[:, t] = _np_draw_below_at(seed, trials, ctrs, active, q)
        det = _np_det3(block, mul_t, add_t, neg_t)
        ok = det != 0
        lanes = active[ok]
        good = block[ok]
        di = inv_t[det[ok]]
        for t in range(3):
            good[:, t] = mul_t[di, good[:, t]]
        out[lanes] = good
        active = active[~ok]
    return out


def _np_det3(X, mul_t, add_t, neg_t):
    m0 = add_t[mul_t[X[:, 4], X[:, 8]],
               neg_t[mul_t[X[:, 5], X[:, 7]]]].astype(np.int64)
    m1 = add_t[mul_t[X[:, 3], X[:, 8]],
               neg_t[mul_t[X[:, 5], X[:, 6]]]].astype(np.int64)
    m2 = add_t[mul_t[X[:, 3], X[:, 7]],
               neg_t[mul_t[X[:, 4], X[:, 6]]]].astype(np.int64)
    acc = mul_t[X[:, 0], m0].astype(np.int64)
    acc = add_t[acc, neg_t[mul_t[X[:, 1], m1]]].astype(np.int64)
    return add_t[acc, mul_t[X[:, 2], m2]].astype(np.int64)


def np_sample_sp4(seed, trials, ctrs, q, mul_t, add_t, neg_t, inv_t):
    """Symplectic sampling stays scalar (data-dependent pivoting); runs
    the interpreted kernel per lane, so draws still match exactly."""
    m = trials.shape[0]
    out = np.empty((m, 16), dtype=np.int64)
    fn = _py(K.k_sample_sp4)
    with np.errstate(over="ignore"):
        for i in range(m):
            ctrs[i] = fn(out[i], np.uint64(seed), int(trials[i]),
                         int(ctrs[i]), q, mul_t, add_t, neg_t, inv_t)
    return out


# ------------------------------------------------------------ MC blocks

def np_mc_sl2_block(seed, trial_lo, n_trials, q, p, a, mode, r, s,
                    projective, mul_t, add_t, neg_t, inv_t, subdeg,
                    scalars, capB, PB, counts):
    """Numpy twin of k_mc_sl2_block with identical counts.

    Mode 0 vectorizes sampling and the generating-certificate fast
    path; lanes it cannot certify fall through to the interpreted
    classifier.  Mode 1 (order rejection) is rare in practice and runs
    fully interpreted."""
    dickson = _py(K.k_dickson_sl2)
    if mode != 0:
        x = np.empty(4, dtype=np.int64)
        y = np.empty(4, dtype=np.int64)
        sample = _py(K.k_sample_sl2)
        oproj = _py(K.k_order_proj)
        olin = _py(K.k_order_linear)
        ordcap = 2 * q + 2
        with np.errstate(over="ignore"):
            for i in range(n_trials):
                trial = trial_lo + i
                ctr = 0
                ok = False
                for mat, want in ((x, r), (y, s)):
                    ok = False
                    for _ in range(100000):
                        ctr = sample(mat, np.uint64(seed), trial, ctr, q,
                                     mul_t, add_t, neg_t, inv_t)
                        o = (oproj if projective else olin)(
                            mat, 2, ordcap, mul_t, add_t)
                        if o == want:
                            ok = True
                            break
                    if not ok:
                        return 1
                gen, wit, _p2, _m2 = dickson(x, y, q, p, a, mul_t, add_t,
                                             neg_t, inv_t, subdeg, scalars,
                                             capB, PB)
                counts[K.k_witness_category(gen, wit)] += 1
        return 0

    trials = np.arange(trial_lo, trial_lo + n_trials, dtype=np.int64)
    ctrs = np.zeros(n_trials, dtype=np.int64)
    X = np_sample_sl2(seed, trials, ctrs, q, mul_t, add_t, neg_t, inv_t)
    Y = np_sample_sl2(seed, trials, ctrs, q, mul_t, add_t, neg_t, inv_t)
    cat = np_classify_sl2(X, Y, q, p, a, mul_t, add_t, neg_t, inv_t,
                          subdeg, scalars, capB, PB)
    for c in range(5):
        counts[c] += int((cat == c).sum())
    return 0


def np_classify_sl2(X, Y, q, p, a, mul_t, add_t, neg_t, inv_t, subdeg,
                    scalars, capB, PB):
    """Witness categories for a batch of SL2 pairs; certificate checks
    are vectorized, everything undecided goes through the interpreted
    classifier one pair at a time."""
    m = X.shape[0]
    cat = np.full(m, -1, dtype=np.int64)
    two = int(add_t[1, 1])

    Xi = np_inv2(X, mul_t, neg_t)
    Yi = np_inv2(Y, mul_t, neg_t)
    XY = np_matmul(X, Y, 2, mul_t, add_t)
    comm = np_matmul(np_matmul(XY, Xi, 2, mul_t, add_t), Yi, 2,
                     mul_t, add_t)
    ctr_tr = np_trace(comm, 2, add_t)
    open_m = ctr_tr != two  # trace 2 pairs are settled scalar-side

    # subfield walk fast reject: traces of x, y, xy, [x,y] usually
    # already generate the whole field
    walk_ok = np.ones(m, dtype=bool)
    guard = np.zeros(m, dtype=bool)
    if a > 1:
        lcm = np.ones(m, dtype=np.int64)
        for Wm in (X, Y, XY, comm):
            sd = subdeg[np_trace(Wm, 2, add_t)]
            g = np.gcd(lcm, sd)
            lcm = lcm // g * sd
        walk_ok = lcm >= a
        if p != 2 and a % 2 == 0:
            guard = (a // 2) % subdeg[ctr_tr] == 0

    # order certificates, vectorized over the six candidate words
    cands = [X, Y, XY, np_matmul(Y, X, 2, mul_t, add_t),
             np_matmul(X, XY, 2, mul_t, add_t),
             np_matmul(XY, Y, 2, mul_t, add_t)]
    ords = np.empty((6, m), dtype=np.int64)
    for ci, C in enumerate(cands):
        o = np.zeros(m, dtype=np.int64)
        Wp = C.copy()
        for k in range(1, 6):
            hit = (o == 0) & np_is_scalar(Wp, 2)
            o[hit] = k
            Wp = np_matmul(Wp, C, 2, mul_t, add_t)
        ords[ci] = o
    big = (ords == 0).any(axis=0)
    not_dih = np.zeros(m, dtype=bool)
    for i in range(6):
        oi = (ords[i] == 0) | (ords[i] >= 3)
        for j in range(i + 1, 6):
            oj = (ords[j] == 0) | (ords[j] >= 3)
            pair_ok = oi & oj & ~not_dih
            if not pair_ok.any():
                continue
            UV = np_matmul(cands[i], cands[j], 2, mul_t, add_t)
            VU = np_matmul(cands[j], cands[i], 2, mul_t, add_t)
            proj_eq = np.zeros(m, dtype=bool)
            for s in scalars:
                eq = np.ones(m, dtype=bool)
                for t in range(4):
                    eq &= UV[:, t] == mul_t[int(s), VU[:, t]]
                proj_eq |= eq
            not_dih |= pair_ok & ~proj_eq

    certified = open_m & walk_ok & ~guard & big & not_dih
    cat[certified] = K.C_GEN

    rest = np.nonzero(cat < 0)[0]
    dickson = _py(K.k_dickson_sl2)
    with np.errstate(over="ignore"):
        for i in rest:
            gen, wit, _p2, _m2 = dickson(
                X[i].copy(), Y[i].copy(), q, p, a, mul_t, add_t, neg_t,
                inv_t, subdeg, scalars, capB, PB)
            cat[i] = K.k_witness_category(gen, wit)
    return cat


def np_decay_block(seed, trial_lo, n_trials, q, a, letters, mul_t,
                   add_t, neg_t, inv_t, subdeg):
    """Vectorized twin of k_decay_block; same hit count."""
    trials = np.arange(trial_lo, trial_lo + n_trials, dtype=np.int64)
    ctrs = np.zeros(n_trials, dtype=np.int64)
    X = np_sample_sl2(seed, trials, ctrs, q, mul_t, add_t, neg_t, inv_t)
    Y = np_sample_sl2(seed, trials, ctrs, q, mul_t, add_t, neg_t, inv_t)
    mats = [X, Y, np_inv2(X, mul_t, neg_t), np_inv2(Y, mul_t, neg_t)]
    W = np.zeros((n_trials, 4), dtype=np.int64)
    W[:, 0] = 1
    W[:, 3] = 1
    for c in letters:
        W = np_matmul(W, mats[int(c)], 2, mul_t, add_t)
    tr = np_trace(W, 2, add_t)
    return int((subdeg[tr] < a).sum())

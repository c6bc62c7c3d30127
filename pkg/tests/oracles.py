"""Tiny independent reimplementations used as oracles by the tests.

Everything here favors obviousness over speed: python ints, tuples and
sets only, no package imports.  2x2 matrices are flat tuples (a, b, c,
d) of field indexes in the prime-field case, or of python ints mod p.
"""


def poly_mulmod(u, v, mod, p):
    """Multiply coefficient lists (constant first) modulo mod over F_p."""
    out = [0] * (len(u) + len(v) - 1)
    for i, ui in enumerate(u):
        for j, vj in enumerate(v):
            out[i + j] = (out[i + j] + ui * vj) % p
    deg = len(mod) - 1
    while len(out) > deg:
        top = out.pop()
        for k in range(deg):
            out[-deg + k] = (out[-deg + k] - top * mod[k]) % p
    while len(out) < deg:
        out.append(0)
    return out


def mat_mul(x, y, p):
    a, b, c, d = x
    e, f, g, h = y
    return ((a * e + b * g) % p, (a * f + b * h) % p,
            (c * e + d * g) % p, (c * f + d * h) % p)


def mat_order(x, p):
    acc = x
    n = 1
    while acc != (1, 0, 0, 1):
        acc = mat_mul(acc, x, p)
        n += 1
        assert n <= p ** 4
    return n


def closure_set(gens, p):
    """Plain set closure of 2x2 matrices over F_p under multiplication."""
    seen = set(gens)
    frontier = list(gens)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = mat_mul(x, g, p)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def sl2_elements(p):
    out = []
    for a in range(p):
        for b in range(p):
            for c in range(p):
                for d in range(p):
                    if (a * d - b * c) % p == 1:
                        out.append((a, b, c, d))
    return out


def wilson_scipy(successes, trials):
    from scipy.stats import binomtest
    res = binomtest(successes, trials)
    ci = res.proportion_ci(confidence_level=0.95, method="wilson")
    return ci.low, ci.high

"""Exact and Monte Carlo generation probabilities.

Exact values fix one representative per conjugacy class of the first
argument (generation is conjugation invariant, and conjugation permutes
the partner class), so a pair count over C x D costs |D| closures, not
|C| |D|.  Results are exact Fractions.

Monte Carlo runs in blocks of trials; each trial consumes its own
counter-based stream, so estimates are bitwise reproducible for a given
seed regardless of block size, thread count or backend.  Intervals are
Wilson score intervals at 95 percent.  Trials an incomplete method could
not decide are reported separately and bracket the estimate: the point
estimate counts them as failures, the optimistic variant as successes.

The decay experiment measures how often a fixed word evaluated at a
uniform pair has its trace inside a proper subfield; the scaled column
multiplies by sqrt(q), the growth rate suggested by counting points on
the trace variety.
"""

import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import batchops as Bops
from . import gentest, kernels as K, matgrp, words
from .backend import resolve_backend
from .errors import InvalidConfig
from .rng import Stream, derive_seed

Z95 = 1.959963984540054
DEFAULT_BLOCK = 4096
CATEGORY_NAMES = ("generates", "proper_reducible", "proper_subfield",
                  "proper_other", "inconclusive")


def wilson_interval(successes: int, trials: int, z: float = Z95):
    """Wilson score interval for a binomial proportion."""
    if trials <= 0:
        raise InvalidConfig("need at least one trial")
    n = trials
    phat = successes / n
    z2 = z * z
    denom = 1.0 + z2 / n
    center = (phat + z2 / (2 * n)) / denom
    half = (z / denom) * math.sqrt(phat * (1 - phat) / n
                                   + z2 / (4 * n * n))
    return max(0.0, center - half), min(1.0, center + half)


# ------------------------------------------------------------ exact side

@dataclass
class ExactCell:
    """Exact pair count between two conjugacy classes (or ALL x ALL)."""

    label_c: str
    label_d: str
    hits: int        # generating pairs with x fixed to the class rep
    partners: int    # size of the partner class
    weight: int      # size of the first class

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.hits, self.partners)


@dataclass
class ExactResult:
    group: matgrp.GroupSpec
    r: int | None
    s: int | None
    cells: list
    pairs: int            # total pair count N_r N_s (or |G|^2)
    numerator: int        # weighted generating pairs
    empty: bool = False
    restricted: bool = False   # True when limited to one class pair

    @property
    def P(self) -> Fraction:
        if self.pairs == 0:
            return Fraction(0, 1)
        return Fraction(self.numerator, self.pairs)

    @property
    def counts(self):
        gen = self.numerator
        return (gen, 0, 0, self.pairs - gen, 0)


def _class_labels(classes):
    """Order-plus-letter labels; letters count same-order classes in
    their sorted position."""
    seen = {}
    out = []
    for c in classes:
        i = seen.get(c.r, 0)
        seen[c.r] = i + 1
        out.append(f"{c.r}{chr(ord('a') + i)}")
    return out


def _pair_generates(group, x, y, stop, be):
    t = group.tables()
    scal = group.scalars()
    gens = np.stack([x, y])
    if be == "numba":
        P = matgrp._hash_prime(stop + 1)
        keys = np.full(P, -1, dtype=np.int64)
        queue = np.empty((stop + 2, group.d * group.d), dtype=np.int64)
        status, _size = K.k_closure(gens, 2, group.d, group.q, t.mul,
                                    t.add, scal, stop + 1, stop, P,
                                    keys, queue)
    else:
        status, _size, _e = Bops.np_closure([x, y], group.d, group.q,
                                            t.mul, t.add, scal,
                                            stop + 1, stop)
    return status == K.S_OVER


def exact_P(group, r=None, s=None, cap=matgrp.DEFAULT_ENUM_CAP,
            backend=None) -> ExactResult:
    """Exact generation probability for uniform (x, y) with x of order
    r and y of order s; both None means uniform over the whole group.
    Needs the group to be enumerable under cap."""
    if (r is None) != (s is None):
        raise InvalidConfig("give both orders or neither")
    be = resolve_backend(backend)
    stop = group.order // 2
    if r is None:
        classes_c = matgrp.conjugacy_partition(group, cap, backend)
        whole = matgrp.enumerate_group(group, cap, backend)
        partners = [("ALL", whole)]
        n_c = n_d = group.order
    else:
        classes_c = matgrp.elements_of_order(group, r, cap, backend)
        classes_d = matgrp.elements_of_order(group, s, cap, backend)
        n_c = sum(c.size for c in classes_c)
        n_d = sum(c.size for c in classes_d)
        if n_c == 0 or n_d == 0:
            return ExactResult(group, r, s, [], 0, 0, empty=True)
        partners = list(zip(_class_labels(classes_d),
                            [cd.elements for cd in classes_d]))
    labels_c = _class_labels(classes_c)
    cells = []
    numerator = 0
    for i, cls in enumerate(classes_c):
        rep = cls.elements[0]
        for lab_d, delems in partners:
            hits = 0
            for k in range(delems.shape[0]):
                if _pair_generates(group, rep, delems[k], stop, be):
                    hits += 1
            cells.append(ExactCell(labels_c[i], lab_d, hits,
                                   delems.shape[0], cls.size))
            numerator += cls.size * hits
    pairs = n_c * n_d
    return ExactResult(group, r, s, cells, pairs, numerator)


def _parse_class_label(label: str):
    m = re.fullmatch(r"(\d+)([a-z])", label.strip())
    if not m:
        raise InvalidConfig(f"bad class label {label!r} (want e.g. 2a)")
    return int(m.group(1)), ord(m.group(2)) - ord("a")


def exact_P_classes(group, label_c: str, label_d: str,
                    cap=matgrp.DEFAULT_ENUM_CAP, backend=None) -> ExactResult:
    """Exact generation probability restricted to a single pair of
    conjugacy classes, named by order-plus-letter labels."""
    r, ic = _parse_class_label(label_c)
    s, id_ = _parse_class_label(label_d)
    be = resolve_backend(backend)
    classes_c = matgrp.elements_of_order(group, r, cap, backend)
    classes_d = matgrp.elements_of_order(group, s, cap, backend)
    if ic >= len(classes_c) or id_ >= len(classes_d):
        raise InvalidConfig(
            f"no class {label_c}/{label_d} in {group.name}: found "
            f"{len(classes_c)} of order {r}, {len(classes_d)} of order {s}")
    cls, cld = classes_c[ic], classes_d[id_]
    stop = group.order // 2
    rep = cls.elements[0]
    hits = 0
    for k in range(cld.size):
        if _pair_generates(group, rep, cld.elements[k], stop, be):
            hits += 1
    cell = ExactCell(label_c, label_d, hits, cld.size, cls.size)
    return ExactResult(group, r, s, [cell], cls.size * cld.size,
                       cls.size * hits, restricted=True)


# -------------------------------------------------------- Monte Carlo

@dataclass
class EstimateReport:
    group: matgrp.GroupSpec
    mode: str                 # "whole" or "order"
    label_c: str
    label_d: str
    trials: int
    counts: tuple             # five category counts
    seed: int

    @property
    def generates(self):
        return self.counts[0]

    @property
    def inconclusive(self):
        return self.counts[4]

    @property
    def point(self):
        return self.generates / self.trials

    @property
    def pessimistic_point(self):
        return self.point

    @property
    def optimistic_point(self):
        return (self.generates + self.inconclusive) / self.trials

    @property
    def interval(self):
        return wilson_interval(self.generates, self.trials)

    @property
    def lo95(self):
        return self.interval[0]

    @property
    def hi95(self):
        return self.interval[1]


def _mc_blocks(trials, block):
    lo = 0
    while lo < trials:
        yield lo, min(block, trials - lo)
        lo += block


def _run_sl2_block(group, seed, lo, n, mode, r, s, be):
    t = group.tables()
    capB = gentest.sl2_closure_bound(group)
    PB = matgrp._hash_prime(capB)
    scal = gentest._sl2_scalars(group)
    counts = np.zeros(5, dtype=np.int64)
    mode_i = 0 if mode == "whole" else 1
    proj = 1 if group.quotient else 0
    if be == "numba":
        status = K.k_mc_sl2_block(np.uint64(seed), lo, n, group.q,
                                  group.p, group.a, mode_i, r or 0, s or 0,
                                  proj, t.mul, t.add, t.neg, t.inv,
                                  t.subdeg, scal, capB, PB, counts)
    else:
        status = Bops.np_mc_sl2_block(seed, lo, n, group.q, group.p,
                                      group.a, mode_i, r or 0, s or 0,
                                      proj, t.mul, t.add, t.neg, t.inv,
                                      t.subdeg, scal, capB, PB, counts)
    if status != 0:
        raise InvalidConfig(
            f"could not find elements of order {r}/{s} in {group.name}")
    return counts


def _run_generic_block(group, seed, lo, n, mode, r, s, be):
    counts = np.zeros(5, dtype=np.int64)
    for i in range(n):
        stream = Stream(seed, trial=lo + i)
        if mode == "whole":
            x = matgrp.sample_uniform(group, stream, be)
            y = matgrp.sample_uniform(group, stream, be)
        else:
            x = matgrp.sample_of_order(group, r, stream, backend=be)
            y = matgrp.sample_of_order(group, s, stream, backend=be)
        v = gentest.generation_verdict([x, y], backend=be)
        counts[gentest.witness_category(v)] += 1
    return counts


def monte_carlo_P(group, trials, seed, mode="whole", r=None, s=None,
                  threads=1, block=DEFAULT_BLOCK,
                  backend=None) -> EstimateReport:
    """Monte Carlo estimate of the generation probability.

    mode "whole" draws uniform pairs; mode "order" rejection-samples
    pairs with the given element orders (projective orders in a
    quotient group).  Identical output for any threads/block split."""
    if trials <= 0:
        raise InvalidConfig("trials must be positive")
    if mode not in ("whole", "order"):
        raise InvalidConfig(f"unknown mode {mode!r}")
    if mode == "order" and (r is None or s is None):
        raise InvalidConfig("order mode needs r and s")
    be = resolve_backend(backend)
    sl2_fast = group.family == "SL2" and group.q >= 4
    runner = _run_sl2_block if sl2_fast else _run_generic_block
    blocks = list(_mc_blocks(trials, block))
    total = np.zeros(5, dtype=np.int64)
    if threads <= 1:
        for lo, n in blocks:
            total += runner(group, seed, lo, n, mode, r, s, be)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futs = [pool.submit(runner, group, seed, lo, n, mode, r, s, be)
                    for lo, n in blocks]
            for f in futs:
                total += f.result()
    labels = ("ALL", "ALL") if mode == "whole" else (str(r), str(s))
    return EstimateReport(group, mode, labels[0], labels[1], trials,
                          tuple(int(c) for c in total), seed)


# --------------------------------------------------------------- sweeps

def sweep(family, q_values, trials, master_seed, mode="whole", r=None,
          s=None, threads=1, backend=None):
    """One estimate per q, each with its own derived seed, so any row
    can be reproduced in isolation."""
    out = []
    for q in q_values:
        group = matgrp.parse_group(family, q)
        seed = derive_seed(master_seed, family.upper(), q)
        out.append(monte_carlo_P(group, trials, seed, mode=mode, r=r,
                                 s=s, threads=threads, backend=backend))
    return out


# ---------------------------------------------------------------- decay

@dataclass
class DecayRow:
    p: int
    a: int
    word: str
    trials: int
    fraction: object      # Fraction when exact, float otherwise
    exact: bool

    @property
    def q(self):
        return self.p ** self.a

    @property
    def scaled(self):
        return float(self.fraction) * math.sqrt(self.q)


def subfield_trace_decay(p, a, word="ABab", trials=100000, seed=0,
                         exact=False, backend=None) -> DecayRow:
    """Fraction of uniform SL2(p^a) pairs whose word trace falls in a
    proper subfield.  The default word is the commutator.  With exact
    set, every pair of the group is counted (small q only)."""
    if a < 2:
        raise InvalidConfig("decay needs an extension field (a >= 2)")
    codes = words.parse_word(word)
    group = matgrp.GroupSpec("SL2", p, a)
    t = group.tables()
    if exact:
        elems = matgrp.enumerate_group(group, backend=backend)
        n = elems.shape[0]
        hits = 0
        # evaluate the word on every ordered pair, one x at a time
        ys = elems
        yinv = _batch_inverse2(ys, t)
        for i in range(n):
            x = elems[i]
            xinv = _batch_inverse2(x[None, :], t)[0]
            w = np.broadcast_to(np.array([1, 0, 0, 1], dtype=np.int64),
                                (n, 4)).copy()
            for c in codes:
                if c == 0:
                    w = Bops.np_matmul(w, x, 2, t.mul, t.add)
                elif c == 2:
                    w = Bops.np_matmul(w, xinv, 2, t.mul, t.add)
                elif c == 1:
                    w = Bops.np_matmul(w, ys, 2, t.mul, t.add)
                else:
                    w = Bops.np_matmul(w, yinv, 2, t.mul, t.add)
            tr = Bops.np_trace(w, 2, t.add)
            hits += int((t.subdeg[tr] < a).sum())
        return DecayRow(p, a, word, n * n, Fraction(hits, n * n), True)
    if trials <= 0:
        raise InvalidConfig("trials must be positive")
    be = resolve_backend(backend)
    arr = np.array(codes, dtype=np.int64)
    if be == "numba":
        hits = int(K.k_decay_block(np.uint64(seed), 0, trials, group.q,
                                   a, arr, len(codes), t.mul, t.add,
                                   t.neg, t.inv, t.subdeg))
    else:
        hits = int(Bops.np_decay_block(seed, 0, trials, group.q, a, arr,
                                       t.mul, t.add, t.neg, t.inv,
                                       t.subdeg))
    return DecayRow(p, a, word, trials, hits / trials, False)


def _batch_inverse2(X, t):
    out = np.empty_like(X)
    out[:, 0] = X[:, 3]
    out[:, 1] = t.neg[X[:, 1]]
    out[:, 2] = t.neg[X[:, 2]]
    out[:, 3] = X[:, 0]
    return out

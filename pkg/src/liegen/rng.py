"""Deterministic counter-based randomness.

Every experiment draws from a pure function ``draw_u64(seed, trial, ctr)``
so that results are bitwise independent of thread count, block size and
backend: trial t always sees the same stream no matter who computes it.
The function is splitmix64 evaluated at stream position trial*2^20 + ctr,
which is injective as long as a single trial consumes fewer than 2^20 raw
draws (asserted; real consumption is a few dozen).

Bounded draws use rejection, not modulo, so they are exactly uniform.

Sub-experiment seeds are derived from the master seed with blake2b over a
textual key, e.g. ``derive_seed(master, "sweep", q)``; the same derivation
is used by the CLI so runs are reproducible from (master seed, experiment
name, parameter) alone.
"""

import hashlib

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
CTR_BITS = 20
CTR_LIMIT = 1 << CTR_BITS


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def draw_u64(seed: int, trial: int, ctr: int) -> int:
    assert 0 <= ctr < CTR_LIMIT
    pos = ((trial << CTR_BITS) + ctr + 1) & MASK64
    return mix64((seed + pos * GAMMA) & MASK64)


def draw_below(seed: int, trial: int, ctr: int, n: int):
    """Uniform value in [0, n) by rejection; returns (value, next ctr)."""
    assert n > 0
    lim = ((1 << 64) // n) * n
    while True:
        u = draw_u64(seed, trial, ctr)
        ctr += 1
        if u < lim:
            return u % n, ctr


def derive_seed(master: int, *parts) -> int:
    """64-bit sub-seed from the master seed and a textual key."""
    key = "|".join(str(p) for p in (master,) + parts)
    dig = hashlib.blake2b(key.encode(), digest_size=8).digest()
    return int.from_bytes(dig, "big")


class Stream:
    """Stateful view of one trial's draw stream (scalar convenience API)."""

    __slots__ = ("seed", "trial", "ctr")

    def __init__(self, seed: int, trial: int = 0):
        self.seed = seed & MASK64
        self.trial = trial
        self.ctr = 0

    def below(self, n: int) -> int:
        v, self.ctr = draw_below(self.seed, self.trial, self.ctr, n)
        return v

    def next_trial(self):
        self.trial += 1
        self.ctr = 0
        return self

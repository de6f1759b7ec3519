"""Seedable randomness source.

Every prover/keygen operation takes one of these explicitly; scenarios and
the bench seed it from MTKT_SEED so whole runs replay byte-for-byte.
Unseeded sources draw from the OS.
"""

import os
import random


class Rng:
    def __init__(self, seed=None):
        if seed is None:
            seed = int.from_bytes(os.urandom(32), "big")
        self._r = random.Random(seed)

    def bytes(self, n):
        return self._r.getrandbits(8 * n).to_bytes(n, "big") if n else b""

    def randint_below(self, bound):
        return self._r.randrange(bound)

    def scalar(self, p):
        """Uniform in [0, p)."""
        while True:
            v = self._r.getrandbits(p.bit_length())
            if v < p:
                return v

    def scalar_nonzero(self, p):
        """Uniform in [1, p), the paper's Z_p* sampling."""
        while True:
            v = self.scalar(p)
            if v != 0:
                return v

    def randbits(self, k):
        return self._r.getrandbits(k)

    def shuffle(self, seq):
        self._r.shuffle(seq)


def from_env(default_seed=None):
    """Rng seeded from MTKT_SEED when set, else from default_seed/OS entropy."""
    env = os.environ.get("MTKT_SEED")
    if env is not None:
        return Rng(int(env))
    return Rng(default_seed)

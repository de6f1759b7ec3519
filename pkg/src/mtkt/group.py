"""Typed bilinear-group layer: elements, context, serialization, hashing.

Scalars are plain ints mod the group order p.  G1 points carry Jacobian
coordinates internally; equality and encoding normalize.  All element
operations bump a module-level operation counter (the bench's "group op"
column); pairing evaluations are counted per GroupContext.
"""

import hashlib
import threading

from gmpy2 import mpz

from . import bn256 as bn
from .errors import InvalidEncoding
from .wire import i2b32, b322i, lp

P = int(bn.P)
Q = int(bn.Q)

G1_BYTES = 33
G2_BYTES = 128


class OpCounter:
    """Counts G1/G2/GT operations performed through the wrappers."""

    __slots__ = ("count",)

    def __init__(self):
        self.count = 0

    def add(self, n=1):
        self.count += n

    def reset(self):
        self.count = 0


GROUP_OPS = OpCounter()


class G1Element:
    __slots__ = ("_pt",)

    def __init__(self, pt):
        self._pt = pt  # Jacobian tuple or None

    def __mul__(self, other):
        GROUP_OPS.add()
        return G1Element(bn.g1_add(self._pt, other._pt))

    def __pow__(self, e):
        GROUP_OPS.add()
        return G1Element(bn.g1_mul(self._pt, int(e) % P))

    def inverse(self):
        GROUP_OPS.add()
        return G1Element(bn.g1_neg(self._pt))

    def __eq__(self, other):
        return isinstance(other, G1Element) and bn.g1_eq(self._pt, other._pt)

    def __hash__(self):
        return hash(self.encode())

    @property
    def is_identity(self):
        return self._pt is None or self._pt[2] == 0

    def encode(self):
        """33 bytes: sign byte (2 | y&1) then big-endian x; identity is all zero."""
        aff = bn.g1_affine(self._pt)
        if aff is None:
            return b"\x00" + b"\x00" * 32
        x, y = aff
        return bytes([2 | (int(y) & 1)]) + int(x).to_bytes(32, "big")

    def __repr__(self):
        return f"G1({self.encode().hex()[:18]}..)"


def decode_g1(data):
    if len(data) != G1_BYTES:
        raise InvalidEncoding(f"G1 point must be {G1_BYTES} bytes, got {len(data)}")
    if data[0] == 0:
        if any(data[1:]):
            raise InvalidEncoding("bad identity encoding")
        return G1Element(None)
    if data[0] not in (2, 3):
        raise InvalidEncoding("bad G1 prefix byte")
    x = int.from_bytes(data[1:], "big")
    if x >= Q:
        raise InvalidEncoding("G1 x-coordinate out of field")
    y = bn.fq_sqrt((mpz(x) ** 3 + bn.B) % bn.Q)
    if y is None:
        raise InvalidEncoding("not a curve x-coordinate")
    if (int(y) & 1) != (data[0] & 1):
        y = bn.Q - y
    # the curve group has prime order p, so on-curve already implies subgroup
    return G1Element((mpz(x), y, mpz(1)))


class G2Element:
    __slots__ = ("_pt",)

    def __init__(self, pt):
        self._pt = pt  # affine Fq2 pair or None

    def __mul__(self, other):
        GROUP_OPS.add()
        return G2Element(bn.g2_add(self._pt, other._pt))

    def __pow__(self, e):
        GROUP_OPS.add()
        return G2Element(bn.g2_mul(self._pt, int(e) % P))

    def inverse(self):
        GROUP_OPS.add()
        return G2Element(bn.g2_neg(self._pt))

    def __eq__(self, other):
        return isinstance(other, G2Element) and self._pt == other._pt

    def __hash__(self):
        return hash(self.encode())

    @property
    def is_identity(self):
        return self._pt is None

    def encode(self):
        """128 bytes, uncompressed: x0 | x1 | y0 | y1 big-endian; identity all zero."""
        if self._pt is None:
            return b"\x00" * G2_BYTES
        (x0, x1), (y0, y1) = self._pt
        return b"".join(int(c).to_bytes(32, "big") for c in (x0, x1, y0, y1))

    def __repr__(self):
        return f"G2({self.encode().hex()[:18]}..)"


def decode_g2(data):
    if len(data) != G2_BYTES:
        raise InvalidEncoding(f"G2 point must be {G2_BYTES} bytes, got {len(data)}")
    if not any(data):
        return G2Element(None)
    c = [mpz(int.from_bytes(data[i:i + 32], "big")) for i in range(0, 128, 32)]
    if any(v >= bn.Q for v in c):
        raise InvalidEncoding("G2 coordinate out of field")
    pt = ((c[0], c[1]), (c[2], c[3]))
    if not bn.g2_on_curve(pt):
        raise InvalidEncoding("G2 point not on twist")
    if not bn.g2_in_subgroup(pt):
        raise InvalidEncoding("G2 point outside order-p subgroup")
    return G2Element(pt)


class GTElement:
    __slots__ = ("_v",)

    def __init__(self, v):
        self._v = v

    def __mul__(self, other):
        GROUP_OPS.add()
        return GTElement(bn.f12_mul(self._v, other._v))

    def __pow__(self, e):
        GROUP_OPS.add()
        return GTElement(bn.f12_pow(self._v, int(e) % P))

    def inverse(self):
        GROUP_OPS.add()
        return GTElement(bn.f12_inv(self._v))

    def __eq__(self, other):
        return isinstance(other, GTElement) and self._v == other._v

    @property
    def is_identity(self):
        return self._v == bn.F12_ONE

    def encode(self):
        parts = []
        for c6 in self._v:
            for c2 in c6:
                parts.extend(int(x).to_bytes(32, "big") for x in c2)
        return b"".join(parts)


def g1_identity():
    return G1Element(None)


def multiexp_g1(pairs):
    """Product of base^exp over (G1Element, int) pairs, one shared ladder."""
    GROUP_OPS.add(len(pairs))
    return G1Element(bn.g1_multiexp([(b._pt, e) for b, e in pairs]))


def hash_to_scalar(domain_tag, parts):
    """SHA-256 over domain_tag || length-prefixed parts, reduced mod p."""
    h = hashlib.sha256()
    h.update(domain_tag)
    for part in parts:
        h.update(lp(part))
    return int.from_bytes(h.digest(), "big") % P


def transcript_digest(domain_tag, parts):
    """The 32-byte inner digest of a split Fiat-Shamir transcript."""
    h = hashlib.sha256()
    h.update(domain_tag)
    for part in parts:
        h.update(lp(part))
    return h.digest()


def challenge_scalar(domain_tag, parts, ch):
    """Challenge for the interactive proofs: the item list is hashed in
    order, the verifier nonce ch enters last.  Split provers store the
    inner digest and finish with one hash when ch arrives."""
    return hash_to_scalar(domain_tag, [transcript_digest(domain_tag, parts), i2b32(ch)])


_GEN_TAGS_G1 = ("gen:g", "gen:g0", "gen:g1", "gen:gt", "gen:gT", "gen:gU",
                "gen:h", "gen:G", "gen:H")
_GEN_TAGS_G2 = ("gen:g2", "gen:g3")

_generator_cache = None


def _generators():
    global _generator_cache
    if _generator_cache is None:
        g1s = tuple(G1Element(bn.hash_to_g1(t.encode())) for t in _GEN_TAGS_G1)
        g2s = tuple(G2Element(bn.hash_to_g2(t.encode())) for t in _GEN_TAGS_G2)
        seen = set()
        for el in g1s:
            if el.is_identity:
                raise RuntimeError("generator derivation produced identity")
            enc = el.encode()
            if enc in seen:
                raise RuntimeError("generator derivation produced duplicates")
            seen.add(enc)
        for el in g2s:
            if el.is_identity or not bn.g2_in_subgroup(el._pt):
                raise RuntimeError("G2 generator derivation failed")
        _generator_cache = (g1s, g2s)
    return _generator_cache


class GroupContext:
    """The bilinear setting: order, generators, pairing with evaluation counter.

    Immutable after construction except the pairing counter, which tolerates
    concurrent increments.  Every actor in the simulator holds its own
    context so pairing counts attribute per role.
    """

    def __init__(self):
        g1s, g2s = _generators()
        self.p = P
        self.q = Q
        (self.g, self.g0, self.g1, self.gt, self.gT, self.gU,
         self.h, self.G, self.H) = g1s
        self.g2, self.g3 = g2s
        self._pairing_count = 0
        self._lock = threading.Lock()

    @property
    def pairing_count(self):
        return self._pairing_count

    def reset_pairing_count(self):
        with self._lock:
            self._pairing_count = 0

    def pair(self, a, b):
        """e(a, b) for a in G1, b in G2; increments the pairing counter."""
        with self._lock:
            self._pairing_count += 1
        return GTElement(bn.pairing(a._pt, b._pt))

    def hash_to_scalar(self, domain_tag, parts):
        return hash_to_scalar(domain_tag, parts)

    def random_scalar(self, rng):
        return rng.scalar_nonzero(self.p)


def default_context():
    """Fresh BN-256 context with the Appendix-style parameters; generators are
    derived from fixed tags so independent processes agree byte-for-byte."""
    return GroupContext()

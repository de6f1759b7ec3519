"""Validator authentication: RSA with a 1984-bit modulus and short public
exponent 65537, deterministic PKCS#1 v1.5 padding over SHA-256.

Implemented on gmpy2 rather than a library so key generation draws from
the seedable Rng (scenario transcripts must replay byte-identically).
"""

import hashlib
import math
from dataclasses import dataclass

import gmpy2

RSA_BITS = 1984
RSA_EXPONENT = 65537

_SHA256_DIGESTINFO = bytes.fromhex("3031300d060960864801650304020105000420")


@dataclass(frozen=True)
class RsaPublicKey:
    n: int
    e: int

    @property
    def byte_len(self):
        return (self.n.bit_length() + 7) // 8


@dataclass(frozen=True)
class RsaKeyPair:
    public: RsaPublicKey
    d: int


def rsa_keygen(rng, bits=RSA_BITS, e=RSA_EXPONENT):
    half = bits // 2
    while True:
        def prime():
            while True:
                cand = rng.randbits(half) | (1 << (half - 1)) | 1
                p = int(gmpy2.next_prime(cand))
                if p.bit_length() == half:
                    return p
        p, q = prime(), prime()
        if p == q:
            continue
        n = p * q
        if n.bit_length() != bits:
            continue
        phi = (p - 1) * (q - 1)
        if math.gcd(e, phi) != 1:
            continue
        return RsaKeyPair(RsaPublicKey(n, e), pow(e, -1, phi))


def _emsa_pkcs1v15(msg, k):
    t = _SHA256_DIGESTINFO + hashlib.sha256(msg).digest()
    ps_len = k - 3 - len(t)
    if ps_len < 8:
        raise ValueError("modulus too small for PKCS#1 v1.5")
    return b"\x00\x01" + b"\xff" * ps_len + b"\x00" + t


def rsa_sign(key, msg):
    k = key.public.byte_len
    em = int.from_bytes(_emsa_pkcs1v15(msg, k), "big")
    return int(gmpy2.powmod(em, key.d, key.public.n)).to_bytes(k, "big")


def rsa_verify(pub, msg, sig):
    k = pub.byte_len
    if len(sig) != k:
        return False
    s = int.from_bytes(sig, "big")
    if s >= pub.n:
        return False
    em = int(gmpy2.powmod(s, pub.e, pub.n)).to_bytes(k, "big")
    return em == _emsa_pkcs1v15(msg, k)

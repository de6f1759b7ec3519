"""Revocation cryptosystems: ElGamal over G1 and Paillier over Z_{n^2},
both with t-of-n threshold decryption under a trusted dealer, plus the
proof linking a Paillier plaintext to a commitment exponent.

ElGamal shares live mod the prime group order, so plain Shamir/Lagrange
recombination in the exponent works.  The Paillier decryption exponent
lives mod n*lcm(a-1,b-1), which has small factors, so recombination uses
factorial-scaled integer Lagrange coefficients and divides the scaling out
of the plaintext afterwards.
"""

import math
from dataclasses import dataclass

import gmpy2
from gmpy2 import mpz

from .errors import InsufficientShares
from .group import G1Element, P, multiexp_g1
from .wire import Reader, lp_int

TAG_PI1 = b"mtkt/pi1/v1"


# --- Shamir sharing ----------------------------------------------------------


@dataclass(frozen=True)
class Share:
    index: int
    value: int
    threshold: int
    parties: int

    def serialize(self):
        return b"".join([self.index.to_bytes(4, "big"),
                         self.threshold.to_bytes(4, "big"),
                         self.parties.to_bytes(4, "big"),
                         lp_int(self.value)])

    @classmethod
    def deserialize(cls, data):
        r = Reader(data)
        idx, t, n = r.u32(), r.u32(), r.u32()
        value = r.lp_int()
        r.done()
        return cls(idx, value, t, n)


def shamir_share(secret, t, n, modulus, rng):
    if not 1 <= t <= n:
        raise ValueError("need 1 <= t <= n")
    coeffs = [secret % modulus] + [rng.randint_below(modulus) for _ in range(t - 1)]
    shares = []
    for i in range(1, n + 1):
        acc = 0
        for c in reversed(coeffs):
            acc = (acc * i + c) % modulus
        shares.append(Share(i, acc, t, n))
    return shares


def _check_quorum(fragments):
    if not fragments:
        raise InsufficientShares("no shares supplied")
    t = fragments[0][3] if isinstance(fragments[0], tuple) else fragments[0].threshold
    idxs = [f[0] if isinstance(f, tuple) else f.index for f in fragments]
    if len(set(idxs)) != len(idxs):
        raise InsufficientShares("duplicate share indices")
    if len(idxs) < t:
        raise InsufficientShares(f"got {len(idxs)} fragments, threshold is {t}")
    return idxs


def lagrange_at_zero(indices, modulus):
    """lambda_i such that f(0) = sum lambda_i * f(i) mod a prime modulus."""
    coeffs = {}
    for i in indices:
        num, den = 1, 1
        for j in indices:
            if j != i:
                num = num * (-j) % modulus
                den = den * (i - j) % modulus
        coeffs[i] = num * pow(den, -1, modulus) % modulus
    return coeffs


# --- ElGamal over G1 ---------------------------------------------------------


@dataclass(frozen=True)
class ElGamalCiphertext:
    C1: G1Element
    C2: G1Element

    def serialize(self):
        return self.C1.encode() + self.C2.encode()


@dataclass(frozen=True)
class ElGamalKeys:
    x_T: int
    h_T: G1Element
    shares: tuple


def elgamal_keygen(ctx, t, n, rng):
    x_T = rng.scalar_nonzero(P)
    shares = tuple(shamir_share(x_T, t, n, P, rng))
    return ElGamalKeys(x_T, ctx.gT ** x_T, shares)


def elgamal_encrypt(ctx, h_T, m, r):
    return ElGamalCiphertext(ctx.gT ** r, m * (h_T ** r))


def elgamal_decrypt(ctx, x_T, ct):
    return ct.C2 * (ct.C1 ** x_T).inverse()


def elgamal_rerandomize(ctx, h_T, ct, r2):
    return ElGamalCiphertext(ct.C1 * (ctx.gT ** r2), ct.C2 * (h_T ** r2))


@dataclass(frozen=True)
class ElGamalFragment:
    index: int
    value: G1Element
    threshold: int
    parties: int


def elgamal_partial_decrypt(share, ct):
    return ElGamalFragment(share.index, ct.C1 ** share.value,
                           share.threshold, share.parties)


def elgamal_combine(fragments, ct):
    """Lagrange recombination in the exponent; needs >= threshold fragments."""
    idxs = _check_quorum(fragments)
    lam = lagrange_at_zero(idxs, P)
    c1x = multiexp_g1([(f.value, lam[f.index]) for f in fragments])
    return ct.C2 * c1x.inverse()


# --- Paillier ----------------------------------------------------------------


@dataclass(frozen=True)
class PaillierPublicKey:
    n: int

    @property
    def g_P(self):
        return self.n + 1

    @property
    def n2(self):
        return self.n * self.n


@dataclass(frozen=True)
class PaillierKeys:
    public: PaillierPublicKey
    a: int
    b: int
    dec_exp: int  # lcm(a-1,b-1) * (lcm^-1 mod n), the paper's Pi*K
    share_modulus: int  # n * lcm(a-1, b-1)
    shares: tuple


def _random_prime(bits, rng):
    while True:
        cand = rng.randbits(bits) | (1 << (bits - 1)) | 1
        p = int(gmpy2.next_prime(cand))
        if p.bit_length() == bits:
            return p


def paillier_keygen(rng, t=1, n_parties=1, bits=2048):
    """Modulus of at least `bits` bits; decryption exponent threshold-shared
    mod n*lcm so partial decryptions recombine in the exponent."""
    half = bits // 2
    while True:
        a = _random_prime(half, rng)
        b = _random_prime(half, rng)
        if a == b:
            continue
        n = a * b
        if n.bit_length() < bits:
            continue
        if math.gcd(n, (a - 1) * (b - 1)) == 1:
            break
    lam = math.lcm(a - 1, b - 1)
    K = pow(lam, -1, n)
    d = (lam * K) % (n * lam)
    shares = tuple(shamir_share(d, t, n_parties, n * lam, rng))
    return PaillierKeys(PaillierPublicKey(n), a, b, d, n * lam, shares)


def paillier_encrypt(pk, m, j):
    """C = g_P^m * j^n mod n^2; j must be a unit mod n."""
    if not 0 <= m < pk.n:
        raise ValueError("plaintext out of range")
    if math.gcd(j, pk.n) != 1:
        raise ValueError("randomizer not coprime with modulus")
    n2 = pk.n2
    gm = (1 + m * pk.n) % n2  # (1+n)^m collapses mod n^2
    return gm * int(gmpy2.powmod(j, pk.n, n2)) % n2


def paillier_decrypt(sk, C):
    n2 = sk.public.n2
    return (int(gmpy2.powmod(C, sk.dec_exp, n2)) - 1) // sk.public.n % sk.public.n


@dataclass(frozen=True)
class PaillierFragment:
    index: int
    value: int
    threshold: int
    parties: int


def paillier_partial_decrypt(pk, share, C):
    return PaillierFragment(share.index, int(gmpy2.powmod(C, share.value, pk.n2)),
                            share.threshold, share.parties)


def paillier_combine(pk, fragments):
    """Integer-Lagrange recombination: exponents are scaled by parties! so
    no division happens mod the unknown-order group, then the scaling is
    divided out of the plaintext mod n."""
    idxs = _check_quorum(fragments)
    parties = fragments[0].parties
    delta = math.factorial(parties)
    n2 = pk.n2
    acc = 1
    for f in fragments:
        num, den = delta, 1
        for j in idxs:
            if j != f.index:
                num *= -j
                den *= f.index - j
        nu = num // den  # exact by construction
        base = f.value if nu >= 0 else int(gmpy2.invert(f.value, n2))
        acc = acc * int(gmpy2.powmod(base, abs(nu), n2)) % n2
    m_scaled = (acc - 1) // pk.n % pk.n
    return m_scaled * pow(delta, -1, pk.n) % pk.n


# --- proof that a Paillier ciphertext encrypts a committed exponent ---------

STAT_MASK_BITS = 2 * 128


@dataclass
class Pi1Proof:
    """Integer-response sigma proof for Com = g1^s1  /\\  C0 = g_P^s1 j^n.

    z_m is never reduced mod p: G1 exponentiation absorbs the reduction on
    one side while the Paillier side needs the integer value."""

    u1: G1Element
    u2: int
    c: int
    z_m: int
    z_j: int

    def serialize(self):
        return b"".join([self.u1.encode(), lp_int(self.u2), lp_int(self.c),
                         lp_int(self.z_m), lp_int(self.z_j)])


def _pi1_challenge(ctx, pk, Com, C0, u1, u2):
    return ctx.hash_to_scalar(
        TAG_PI1, [lp_int(pk.n), Com.encode(), lp_int(C0), u1.encode(), lp_int(u2)])


def pi1_prove(ctx, pk, s1, j, Com, C0, rng):
    mask_bits = P.bit_length() + STAT_MASK_BITS
    m_r = rng.randbits(mask_bits)
    while True:
        j_r = 1 + rng.randint_below(pk.n - 1)
        if math.gcd(j_r, pk.n) == 1:
            break
    n2 = pk.n2
    u1 = ctx.g1 ** m_r
    u2 = (1 + m_r * pk.n) % n2 * int(gmpy2.powmod(j_r, pk.n, n2)) % n2
    c = _pi1_challenge(ctx, pk, Com, C0, u1, u2)
    z_m = m_r + c * s1  # over the integers
    z_j = j_r * int(gmpy2.powmod(j, c, pk.n)) % pk.n
    return Pi1Proof(u1, u2, c, z_m, z_j)


def pi1_verify(ctx, pk, Com, C0, proof):
    if proof.c != _pi1_challenge(ctx, pk, Com, C0, proof.u1, proof.u2):
        return False
    if ctx.g1 ** proof.z_m != proof.u1 * (Com ** proof.c):
        return False
    n2 = pk.n2
    lhs = (1 + proof.z_m % pk.n * pk.n) % n2 \
        * int(gmpy2.powmod(proof.z_j, pk.n, n2)) % n2
    rhs = proof.u2 * int(gmpy2.powmod(C0, proof.c, n2)) % n2
    return lhs == rhs

"""Pairing-free set-membership proof.

The issuer publishes BB signatures A_k = g^(1/(y+k)) on every element of
Phi = [1..max_ticket].  A prover holding the committed element k blinds
A_k into B = A_k^l, sends D = B1^k g^l (= B^y) and proves knowledge of an
opening; possession of a valid A_k is what makes the relation satisfiable,
so membership follows.  The prover never evaluates a pairing.  A verifier
holding y recomputes D = B^y and needs no pairings either; a public
verifier checks e(D, g3) = e(B, Y) instead.
"""

from dataclasses import dataclass

from .errors import (DegenerateExponent, InvalidEncoding,
                     NoSignatureForElement, SessionConsumed)
from .group import (G1Element, G2Element, P, challenge_scalar, decode_g1,
                    hash_to_scalar, multiexp_g1, transcript_digest)
from .wire import Reader, b322i, i2b32

TAG_SMP = b"mtkt/smp/v1"


class VerifyResult:
    """Truthy verdict carrying the first failing check's name."""

    __slots__ = ("ok", "failed_check")

    def __init__(self, ok, failed_check=None):
        self.ok = ok
        self.failed_check = failed_check

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return "accept" if self.ok else f"reject({self.failed_check})"


ACCEPT = VerifyResult(True)


def reject(check):
    return VerifyResult(False, check)


@dataclass(frozen=True)
class SignedSet:
    """Phi = [1..max_ticket] with its published signature table and issuer key."""

    max_ticket: int
    sigs: dict  # k -> A_k
    Y: G2Element

    def contains(self, k):
        return 1 <= k <= self.max_ticket


@dataclass(frozen=True)
class SecretKey:
    y: int


@dataclass(frozen=True)
class Public:
    Y: G2Element


def issue_set(ctx, y, max_ticket, rng=None):
    """Sign every element of [1..max_ticket]; a degenerate y+k means re-key."""
    if max_ticket < 1:
        raise ValueError("max_ticket must be >= 1")
    sigs = {}
    for k in range(1, max_ticket + 1):
        e = (y + k) % P
        if e == 0:
            raise DegenerateExponent("y + k = 0 for a set element; re-key")
        sigs[k] = ctx.g ** pow(e, P - 2, P)
    return SignedSet(max_ticket, sigs, ctx.g3 ** y)


@dataclass
class SmpProof:
    Com: G1Element
    B: G1Element
    D: G1Element | None  # omitted on the wire in secret-key mode
    c: int
    s1: int
    s2: int
    s3: int

    def serialize(self, include_d=True):
        flag = 1 if (include_d and self.D is not None) else 0
        out = [bytes([flag]), self.Com.encode(), self.B.encode()]
        if flag:
            out.append(self.D.encode())
        out.extend(i2b32(v) for v in (self.c, self.s1, self.s2, self.s3))
        return b"".join(out)

    @classmethod
    def deserialize(cls, data):
        r = Reader(data)
        flag = r.u8()
        if flag not in (0, 1):
            raise InvalidEncoding("bad SmpProof flag byte")
        com = decode_g1(r.take(33))
        b = decode_g1(r.take(33))
        d = decode_g1(r.take(33)) if flag else None
        vals = [b322i(r.take(32), P) for _ in range(4)]
        r.done()
        return cls(com, b, d, *vals)


class SmpSession:
    """Single-use prover session: all group work happens at construction,
    finalization is one hash plus three mod-p multiply-adds."""

    def __init__(self, Com, B, B1, D, digest, k, nu, l, masks):
        self.Com = Com
        self.B = B
        self.B1 = B1
        self.D = D
        self.digest = digest
        self._witness = (k % P, nu % P, l % P)
        self._masks = masks
        self._consumed = False


def smp_precompute(ctx, signed_set, k, nu, h_T, rng):
    """Fig.-4-shaped precomputation; zero pairing evaluations.

    Raises NoSignatureForElement when k is outside the set: without A_k the
    session cannot even be constructed, which is the soundness barrier."""
    if not signed_set.contains(k):
        raise NoSignatureForElement(f"{k} not in [1..{signed_set.max_ticket}]")
    A_k = signed_set.sigs[k]
    l = rng.scalar_nonzero(P)
    Com = multiexp_g1([(ctx.g1, k), (h_T, nu)])
    B = A_k ** l
    B1 = B.inverse()
    D = multiexp_g1([(B1, k), (ctx.g, l)])
    k1, l1, r1 = (rng.scalar_nonzero(P) for _ in range(3))
    Com1 = multiexp_g1([(ctx.g1, k1), (h_T, r1)])
    D1 = multiexp_g1([(B1, k1), (ctx.g, l1)])
    digest = transcript_digest(TAG_SMP, [p.encode() for p in (Com, B, D, Com1, D1)])
    return SmpSession(Com, B, B1, D, digest, k, nu, l, (k1, r1, l1))


def smp_finalize(session, ch):
    """Fold the verifier nonce into the stored transcript digest and emit
    the responses.  Sessions are strictly single use."""
    if session._consumed:
        raise SessionConsumed("set-membership session already finalized")
    session._consumed = True
    c = hash_to_scalar(TAG_SMP, [session.digest, i2b32(ch)])
    k, nu, l = session._witness
    k1, r1, l1 = session._masks
    s1 = (k1 + c * k) % P
    s2 = (r1 + c * nu) % P
    s3 = (l1 + c * l) % P
    return SmpProof(session.Com, session.B, session.D, c, s1, s2, s3)


def smp_verify(ctx, proof, ch, mode, h_T):
    """Verify in secret-key mode (zero pairings; D recomputed as B^y) or
    public mode (exactly two pairings).  Rejects name the failing check."""
    if proof.B.is_identity:
        return reject("B=1")
    if isinstance(mode, SecretKey):
        D = proof.B ** mode.y
        if proof.D is not None and proof.D != D:
            return reject("D-mismatch")
    else:
        D = proof.D
        if D is None:
            return reject("missing-D")
        if ctx.pair(D, ctx.g3) != ctx.pair(proof.B, mode.Y):
            return reject("pairing")
    B1 = proof.B.inverse()
    c = proof.c
    Ctilde = multiexp_g1([(ctx.g1, proof.s1), (h_T, proof.s2), (proof.Com, -c)])
    Dtilde = multiexp_g1([(B1, proof.s1), (ctx.g, proof.s3), (D, -c)])
    expect = challenge_scalar(
        TAG_SMP, [p.encode() for p in (proof.Com, proof.B, D, Ctilde, Dtilde)], ch)
    if c != expect:
        return reject("challenge")
    return ACCEPT


# --- honest-verifier simulator (zero-knowledge surrogate) -------------------


@dataclass(frozen=True)
class SmpTranscript:
    Com: G1Element
    B: G1Element
    D: G1Element
    Com1: G1Element
    D1: G1Element
    c: int
    s1: int
    s2: int
    s3: int


def smp_simulate(ctx, signed_set, Com, h_T, rng):
    """Appendix-style simulator: pick k in Phi and l, shape B and D from the
    public signature table, then sample (c, s1, s2, s3) and solve for the
    witness commitments."""
    k = 1 + rng.randint_below(signed_set.max_ticket)
    l = rng.scalar_nonzero(P)
    B = signed_set.sigs[k] ** l
    B1 = B.inverse()
    D = multiexp_g1([(B1, k), (ctx.g, l)])
    c, s1, s2, s3 = (rng.scalar_nonzero(P) for _ in range(4))
    Com1 = multiexp_g1([(ctx.g1, s1), (h_T, s2), (Com, -c)])
    D1 = multiexp_g1([(B1, s1), (ctx.g, s3), (D, -c)])
    return SmpTranscript(Com, B, D, Com1, D1, c, s1, s2, s3)


def smp_verify_transcript(ctx, tr, h_T, mode):
    """Equation-level verification of an interactive transcript (the hash
    is not involved; this is the 3-move sigma view the simulator targets)."""
    if tr.B.is_identity:
        return False
    if isinstance(mode, SecretKey):
        if tr.D != tr.B ** mode.y:
            return False
    else:
        if ctx.pair(tr.D, ctx.g3) != ctx.pair(tr.B, mode.Y):
            return False
    B1 = tr.B.inverse()
    ok1 = tr.Com1 == multiexp_g1([(ctx.g1, tr.s1), (h_T, tr.s2), (tr.Com, -tr.c)])
    ok2 = tr.D1 == multiexp_g1([(B1, tr.s1), (ctx.g, tr.s3), (tr.D, -tr.c)])
    return ok1 and ok2

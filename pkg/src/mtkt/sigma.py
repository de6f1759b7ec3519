"""Sigma-protocol building blocks.

One representation-proof engine covers every knowledge proof here: a
statement is a list of target equations ``target_j = prod_i base_ji ^
w[wiring_ji]`` over shared witness indices, which is exactly the shape of
the credential-issuance proof, the discrete-log-equality signatures, the
Schnorr user signature and the big 13-witness validation proof.  Bases and
targets may live in G1 or G2; elements only need *, **, inverse, encode.

Two challenge modes exist, both used by the protocols:
  - bound_challenge=c: classic interactive sigma flow, c supplied outside
    (the extractor and simulator tests drive this mode);
  - Fiat-Shamir: c = H(tag, statement digest, commitments, extra parts).
"""

import hashlib
from dataclasses import dataclass

from .errors import InvalidEncoding
from .group import (G1Element, G2Element, P, decode_g1, decode_g2,
                    hash_to_scalar, multiexp_g1)
from .wire import Reader, i2b32, lp

TAG_REP = b"mtkt/rep/v1"
TAG_SCHNORR = b"mtkt/schnorr/v1"
TAG_DLEQ = b"mtkt/dleq/v1"


@dataclass(frozen=True)
class PedersenCommitment:
    value: G1Element
    message: int
    randomness: int
    base1: G1Element
    base2: G1Element


def pedersen_commit(ctx, m, nu, base1, base2):
    """value = base1^m * base2^nu, opening retained on the prover side."""
    if base1.is_identity or base2.is_identity:
        raise ValueError("identity base breaks binding")
    value = multiexp_g1([(base1, m), (base2, nu)])
    return PedersenCommitment(value, m % P, nu % P, base1, base2)


class RepStatement:
    """Targets, per-target base lists, and the witness wiring.

    wiring[j][i] names which of the arity shared witnesses exponentiates
    bases[j][i]; reusing an index across slots is what expresses "the same
    secret appears in both equations".
    """

    def __init__(self, targets, bases, wiring, arity):
        targets = tuple(targets)
        bases = tuple(tuple(bs) for bs in bases)
        wiring = tuple(tuple(ws) for ws in wiring)
        if not (len(targets) == len(bases) == len(wiring)):
            raise ValueError("statement shape mismatch")
        used = set()
        for bs, ws in zip(bases, wiring):
            if len(bs) != len(ws):
                raise ValueError("wiring shape mismatch")
            used.update(ws)
        if used != set(range(arity)):
            raise ValueError("every witness index must appear in >=1 slot")
        self.targets = targets
        self.bases = bases
        self.wiring = wiring
        self.arity = arity

    def digest(self):
        h = hashlib.sha256()
        h.update(b"mtkt/stmt/v1")
        h.update(bytes([self.arity]))
        for target, bs, ws in zip(self.targets, self.bases, self.wiring):
            h.update(lp(target.encode()))
            h.update(bytes([len(bs)]))
            for base, w in zip(bs, ws):
                h.update(lp(base.encode()))
                h.update(bytes([w]))
        return h.digest()

    def _product(self, bs, exps, tail=None):
        if tail is not None and all(isinstance(b, G1Element) for b in bs) \
                and isinstance(tail[0], G1Element):
            return multiexp_g1(list(zip(bs, exps)) + [tail])
        if all(isinstance(b, G1Element) for b in bs) and tail is None:
            return multiexp_g1(list(zip(bs, exps)))
        acc = None
        for b, e in list(zip(bs, exps)) + ([tail] if tail else []):
            term = b ** e
            acc = term if acc is None else acc * term
        return acc

    def eval_with(self, exps):
        """[prod bases^exps[w]] per target: witness commitments for masks,
        the self-check for real witnesses."""
        return [self._product(bs, [exps[w] for w in ws])
                for bs, ws in zip(self.bases, self.wiring)]

    def recompute(self, responses, challenge):
        """Verifier's tilde values: prod bases^resp * target^(-c)."""
        return [self._product(bs, [responses[w] for w in ws], tail=(t, -challenge))
                for t, bs, ws in zip(self.targets, self.bases, self.wiring)]


@dataclass
class ProofBundle:
    commitments: list
    challenge: int
    responses: list
    statement_digest: bytes

    def serialize(self):
        out = [self.statement_digest, len(self.commitments).to_bytes(4, "big")]
        for c in self.commitments:
            kind = 1 if isinstance(c, G1Element) else 2
            out.append(bytes([kind]))
            out.append(c.encode())
        out.append(i2b32(self.challenge))
        out.append(len(self.responses).to_bytes(4, "big"))
        out.extend(i2b32(r) for r in self.responses)
        return b"".join(out)

    @classmethod
    def deserialize(cls, data):
        r = Reader(data)
        digest = r.take(32)
        commitments = []
        for _ in range(r.u32()):
            kind = r.u8()
            if kind == 1:
                commitments.append(decode_g1(r.take(33)))
            elif kind == 2:
                commitments.append(decode_g2(r.take(128)))
            else:
                raise InvalidEncoding(f"unknown element kind {kind}")
        challenge = int.from_bytes(r.take(32), "big")
        if challenge >= P:
            raise InvalidEncoding("non-canonical challenge")
        responses = []
        for _ in range(r.u32()):
            v = int.from_bytes(r.take(32), "big")
            if v >= P:
                raise InvalidEncoding("non-canonical response")
            responses.append(v)
        r.done()
        return cls(commitments, challenge, responses, digest)


def _fs_challenge(stmt_digest, commitments, extra):
    parts = [stmt_digest] + [c.encode() for c in commitments] + list(extra)
    return hash_to_scalar(TAG_REP, parts)


def rep_prove(ctx, stmt, witness, rng, bound_challenge=None, extra=(),
              masks=None, challenge_fn=None):
    """Standard sigma flow over a representation statement.

    bound_challenge, when given, is the verifier's challenge (interactive
    mode); otherwise Fiat-Shamir.  masks is a test hook for forced-
    transcript extraction; production callers let the rng draw them.
    """
    witness = [w % P for w in witness]
    if stmt.eval_with(witness) != list(stmt.targets):
        raise ValueError("witness does not satisfy the statement")
    if masks is None:
        masks = [rng.scalar_nonzero(P) for _ in range(stmt.arity)]
    commitments = stmt.eval_with(masks)
    if bound_challenge is not None:
        c = bound_challenge % P
    elif challenge_fn is not None:
        c = challenge_fn(commitments)
    else:
        c = _fs_challenge(stmt.digest(), commitments, extra)
    responses = [(m + c * w) % P for m, w in zip(masks, witness)]
    return ProofBundle(commitments, c, responses, stmt.digest())


def rep_verify(ctx, stmt, proof, bound_challenge=None, extra=(), challenge_fn=None):
    """Recompute commitments from the responses, re-derive the challenge,
    compare everything carried in the bundle.  Returns accept/reject."""
    if len(proof.responses) != stmt.arity:
        return False
    if proof.statement_digest != stmt.digest():
        return False
    recomputed = stmt.recompute(proof.responses, proof.challenge)
    if len(recomputed) != len(proof.commitments) or \
            any(a != b for a, b in zip(recomputed, proof.commitments)):
        return False
    if bound_challenge is not None:
        return proof.challenge == bound_challenge % P
    if challenge_fn is not None:
        return proof.challenge == challenge_fn(recomputed)
    return proof.challenge == _fs_challenge(stmt.digest(), recomputed, extra)


def simulate_bundle(ctx, stmt, rng, challenge=None):
    """Honest-verifier simulator: sample challenge and responses first,
    solve for the commitments.  Output verifies in interactive mode."""
    c = rng.scalar_nonzero(P) if challenge is None else challenge % P
    responses = [rng.scalar_nonzero(P) for _ in range(stmt.arity)]
    commitments = stmt.recompute(responses, c)
    return ProofBundle(commitments, c, responses, stmt.digest())


def extract_witness(proof1, proof2):
    """Two-transcript special-soundness extractor: same commitments,
    distinct challenges give w_i = (s_i - s~_i) / (c - c~) mod p."""
    dc = (proof1.challenge - proof2.challenge) % P
    if dc == 0:
        raise ValueError("challenges must differ")
    dcinv = pow(dc, P - 2, P)
    return [((s1 - s2) * dcinv) % P
            for s1, s2 in zip(proof1.responses, proof2.responses)]


# --- discrete-log equality (Chaum-Pedersen shape) --------------------------


def dleq_statement(base_a, target_a, base_b, target_b):
    return RepStatement(targets=(target_a, target_b),
                        bases=((base_a,), (base_b,)),
                        wiring=((0,), (0,)), arity=1)


def dleq_sign(ctx, y, base_a, base_b, rng, extra=()):
    """Signature of knowledge that log_{base_a}(base_a^y) = log_{base_b}(base_b^y)."""
    ta = base_a ** y
    tb = base_b ** y
    stmt = dleq_statement(base_a, ta, base_b, tb)
    proof = rep_prove(ctx, stmt, [y], rng, extra=extra)
    return ta, tb, proof


def dleq_verify(ctx, base_a, target_a, base_b, target_b, proof, extra=()):
    stmt = dleq_statement(base_a, target_a, base_b, target_b)
    return rep_verify(ctx, stmt, proof, extra=extra)


# --- Schnorr signatures -----------------------------------------------------


def schnorr_sign(ctx, x, pub, msg, rng):
    """Schnorr signature under pub = gU^x; challenge layout is
    H(tag, commitment, pub, msg)."""
    stmt = RepStatement((pub,), ((ctx.gU,),), ((0,),), 1)

    def layout(commitments):
        return hash_to_scalar(TAG_SCHNORR, [commitments[0].encode(), pub.encode(), msg])

    return rep_prove(ctx, stmt, [x], rng, challenge_fn=layout)


def schnorr_verify(ctx, pub, msg, proof):
    stmt = RepStatement((pub,), ((ctx.gU,),), ((0,),), 1)

    def layout(commitments):
        return hash_to_scalar(TAG_SCHNORR, [commitments[0].encode(), pub.encode(), msg])

    return rep_verify(ctx, stmt, proof, challenge_fn=layout)

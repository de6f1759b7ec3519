"""Boneh-Boyen signatures, plain and extended form.

Plain form signs set elements: A = g^(1/(y+m)), public key Y = g3^y.
Verification runs either through the pairing equation or, for a holder of
y, through one exponentiation (A^(y+m) == g) with no pairings at all.
The extended form is the permission token A = (g1^s h)^(1/(gamma+r)) with
keys W' = g0^gamma, W = g2^gamma, plus the issuance proof and the
pairing-free possession proof used during validation.
"""

from dataclasses import dataclass, field

from .errors import DegenerateExponent
from .group import G1Element, G2Element, P, multiexp_g1
from .sigma import RepStatement, dleq_statement, rep_prove, rep_verify


@dataclass(frozen=True)
class BBKeyPair:
    """role "set": secret y, public Y = g3^y, base g.
    role "token": secret gamma, public W' = g0^gamma and W = g2^gamma."""

    role: str
    secret: int
    public_g2: G2Element
    public_g1: G1Element | None = None


def keygen_set(ctx, rng):
    y = rng.scalar_nonzero(P)
    return BBKeyPair("set", y, ctx.g3 ** y)


def keygen_token(ctx, rng):
    gamma = rng.scalar_nonzero(P)
    return BBKeyPair("token", gamma, ctx.g2 ** gamma, ctx.g0 ** gamma)


def bb_sign(ctx, key, m):
    """A = g^(1/(y+m)); raises on the measure-zero y+m = 0 message."""
    e = (key.secret + m) % P
    if e == 0:
        raise DegenerateExponent("y + m = 0 mod p")
    return ctx.g ** pow(e, P - 2, P)


def bb_verify_pairing(ctx, Y, m, A):
    """Pairing check e(A, Y*g3^m) == e(g, g3); two pairing evaluations."""
    lhs = ctx.pair(A, Y * (ctx.g3 ** m))
    rhs = ctx.pair(ctx.g, ctx.g3)
    return lhs == rhs


def bb_verify_secret(ctx, y, m, A):
    """Holder-of-y check A^(y+m) == g; zero pairings."""
    if A.is_identity:
        return False
    return A ** ((y + m) % P) == ctx.g


def bb_sign_with_dleq(ctx, key, m, rng):
    """Signature plus the discrete-log-equality signature of knowledge
    binding Y = g3^y and A^y = g * A^(-m), so third parties verify the
    signature without pairings."""
    A = bb_sign(ctx, key, m)
    t2 = ctx.g * (A ** (-m % P))  # = A^y
    stmt = dleq_statement(ctx.g3, key.public_g2, A, t2)
    proof = rep_prove(ctx, stmt, [key.secret], rng)
    return A, proof


def bb_verify_dleq(ctx, Y, m, A, proof):
    if A.is_identity:
        return False
    t2 = ctx.g * (A ** (-m % P))
    stmt = dleq_statement(ctx.g3, Y, A, t2)
    return rep_verify(ctx, stmt, proof)


# --- extended form (permission tokens) --------------------------------------


def extended_bb_issue(ctx, gamma, c, rng):
    """Token on the commitment c = g1^s: fresh r, A = (c*h)^(1/(gamma+r)),
    and the issuance proof of gamma binding W' = g0^gamma with
    A^gamma = c*h*A^(-r).  Degenerate r is silently resampled so issuance
    failures cannot leak gamma."""
    while True:
        r = rng.scalar_nonzero(P)
        e = (gamma + r) % P
        if e != 0:
            break
    A = (c * ctx.h) ** pow(e, P - 2, P)
    target2 = multiexp_g1([(c, 1), (ctx.h, 1), (A, -r % P)])  # = A^gamma
    stmt = dleq_statement(ctx.g0, ctx.g0 ** gamma, A, target2)
    proof = rep_prove(ctx, stmt, [gamma], rng)
    return A, r, proof


def extended_bb_verify_issue(ctx, Wprime, A, r, c, proof):
    """User-side check of the issuance proof; no pairings."""
    if A.is_identity:
        return False
    target2 = multiexp_g1([(c, 1), (ctx.h, 1), (A, -r % P)])
    stmt = dleq_statement(ctx.g0, Wprime, A, target2)
    return rep_verify(ctx, stmt, proof)


@dataclass(frozen=True)
class PossessionCommit:
    """Blinded token material for the validation proof: B0 = A^alpha,
    Bprime = B0^(-1), C = g1^(alpha*s) * h^alpha * Bprime^r."""

    B0: G1Element
    Bprime: G1Element
    C: G1Element
    beta: int  # alpha * s mod p


def bb_possession_prove(ctx, A, r, s, alpha):
    if alpha % P == 0:
        raise ValueError("alpha must be nonzero")
    B0 = A ** alpha
    Bprime = B0.inverse()
    beta = (alpha * s) % P
    C = multiexp_g1([(ctx.g1, beta), (ctx.h, alpha), (Bprime, r)])
    return PossessionCommit(B0, Bprime, C, beta)


def possession_statement(ctx, C, Bprime):
    """C = g1^beta * h^alpha * Bprime^r over witnesses (beta, alpha, r)."""
    return RepStatement((C,), ((ctx.g1, ctx.h, Bprime),), ((0, 1, 2),), 3)


def possession_check_secret(ctx, gamma, pc):
    """Verifier-with-gamma identity C == B0^gamma; zero pairings."""
    return pc.C == pc.B0 ** gamma


def possession_check_pairing(ctx, W, pc):
    """Public identity e(C, g2) == e(B0, W); two pairing evaluations."""
    return ctx.pair(pc.C, ctx.g2) == ctx.pair(pc.B0, W)

"""The m-ticketing protocol: setup, registration, permission-token request,
ticket generation/validation with a precompute/real-time split, validator
authentication, revocation and duplicate detection, post-payment reporting.

The four-flow token request and the two-flow registration are exposed as
per-message step functions (the simulator drives them over a byte channel)
plus run_* conveniences for direct use.
"""

import math
from dataclasses import dataclass, field

from . import rsa_auth
from .bb import extended_bb_issue, extended_bb_verify_issue
from .encryption import (ElGamalCiphertext, PaillierPublicKey,
                         elgamal_encrypt, elgamal_keygen, elgamal_combine,
                         elgamal_partial_decrypt, paillier_combine,
                         paillier_encrypt, paillier_keygen,
                         paillier_partial_decrypt, pi1_prove, pi1_verify)
from .errors import (BadSignature, BadValidatorSignature, DegenerateExponent,
                     DuplicateUser, IndexAlreadyUsed, IndexOutOfRange,
                     InvalidEncoding, ProtocolAbort, QuotaExhausted,
                     SessionConsumed, TokenExpired)
from .group import (G1Element, G2Element, P, challenge_scalar, decode_g1,
                    hash_to_scalar, multiexp_g1, transcript_digest)
from .ledger import Ledger, RegistrationRecord, UsedTicketRecord
from .setmember import ACCEPT, SignedSet, issue_set, reject
from .sigma import RepStatement, schnorr_sign, schnorr_verify
from .wire import Reader, b322i, i2b32

TAG_VALIDATE = b"mtkt/validate/v1"
TAG_REPORT = b"mtkt/report/v1"

SESSION_BYTES = 24 * 32 + 10 * 33 + 32  # 1130

# witness indices of the validation proof, in response order
# (s1, s2, s3, w1..w6, w8, w10, w11, w12)
W_K, W_NU, W_L, W_A, W_S, W_R2, W_BETA, W_ALPHA, W_R, W_R3, W_R5, W_DELTA, W_F = range(13)
_SESSION_WITNESSES = (W_K, W_NU, W_L, W_A, W_R2, W_BETA, W_ALPHA, W_R3, W_R5, W_DELTA, W_F)


# --- key material and public parameters --------------------------------------


@dataclass
class PublicParameters:
    ctx: object
    max_ticket: int
    deadline: int  # unix seconds; token validity end
    W: G2Element          # g2^gamma
    Wprime: G1Element     # g0^gamma
    Y: G2Element          # g3^y
    h_T: G1Element        # ElGamal threshold public key
    paillier: PaillierPublicKey
    signed_set: SignedSet
    validator_rsa: rsa_auth.RsaPublicKey


@dataclass
class TAKeys:
    gamma: int
    y: int
    validator_rsa: rsa_auth.RsaKeyPair


@dataclass
class RevocationSecrets:
    """Dealer view; authority i holds (elgamal.shares[i], paillier.shares[i])."""

    elgamal: object
    paillier: object


def setup(max_ticket, deadline, t, n_authorities, rng, paillier_bits=2048):
    """Generate every key pair, publish the signed set, assemble parameters."""
    from .group import default_context
    ctx = default_context()
    gamma = rng.scalar_nonzero(P)
    y = rng.scalar_nonzero(P)
    signed_set = issue_set(ctx, y, max_ticket)
    eg = elgamal_keygen(ctx, t, n_authorities, rng)
    pai = paillier_keygen(rng, t, n_authorities, bits=paillier_bits)
    rsa = rsa_auth.rsa_keygen(rng)
    pp = PublicParameters(ctx, max_ticket, deadline,
                          ctx.g2 ** gamma, ctx.g0 ** gamma, signed_set.Y,
                          eg.h_T, pai.public, signed_set, rsa.public)
    return pp, TAKeys(gamma, y, rsa), RevocationSecrets(eg, pai)


@dataclass
class UserKeys:
    id_u: str
    x_U: int
    h_U: G1Element


def user_keygen(ctx, id_u, rng):
    x = rng.scalar_nonzero(P)
    return UserKeys(id_u, x, ctx.gU ** x)


@dataclass
class PermissionToken:
    A: G1Element
    r: int
    s: int  # card-side secret
    max_ticket: int
    deadline: int
    used: set = field(default_factory=set)

    @property
    def remaining(self):
        return [k for k in range(1, self.max_ticket + 1) if k not in self.used]

    def serial(self, ctx, k):
        e = (self.s + k + 1) % P
        if e == 0:
            raise DegenerateExponent("s + k + 1 = 0")
        return ctx.gt ** pow(e, P - 2, P)


# --- registration (challenge/response on the user key) ----------------------


def register_begin(pp, db_reg, id_u, h_U, rng):
    """TA side: refuse duplicates, hand out a random challenge."""
    if db_reg.find_user(id_u) is not None:
        raise DuplicateUser(id_u)
    return rng.bytes(32)


def register_finish(pp, db_reg, id_u, h_U, rc, mu):
    """TA side: verify the Schnorr response, persist (ID_U, h_U)."""
    if db_reg.find_user(id_u) is not None:
        raise DuplicateUser(id_u)
    if not schnorr_verify(pp.ctx, h_U, rc, mu):
        raise BadSignature("registration challenge signature")
    rec = RegistrationRecord(id_u=id_u, h_U=h_U)
    db_reg.append(rec)
    return rec


def run_registration(pp, db_reg, user, rng):
    rc = register_begin(pp, db_reg, user.id_u, user.h_U, rng)
    mu = schnorr_sign(pp.ctx, user.x_U, user.h_U, rc, rng)
    return register_finish(pp, db_reg, user.id_u, user.h_U, rc, mu)


# --- permission token request (four flows) ----------------------------------


@dataclass
class TokenUserState:
    user: UserKeys
    s1: int
    j: int
    Com: G1Element
    C0: int
    A: G1Element = None
    r: int = None
    g1s2: G1Element = None


def token_request_begin(pp, user, rng):
    """User flow 1: commit to s1 in G1 and under Paillier, prove equality."""
    s1 = rng.scalar_nonzero(P)
    j = 1 + rng.randint_below(pp.paillier.n - 1)
    while math.gcd(j, pp.paillier.n) != 1:
        j = 1 + rng.randint_below(pp.paillier.n - 1)
    Com = pp.ctx.g1 ** s1
    C0 = paillier_encrypt(pp.paillier, s1, j)
    pi1 = pi1_prove(pp.ctx, pp.paillier, s1, j, Com, C0, rng)
    return TokenUserState(user, s1, j, Com, C0), (Com, C0, pi1)


@dataclass
class TokenTAState:
    id_u: str
    h_U: G1Element
    Com: G1Element
    C0: int
    s2: int
    r: int
    A: G1Element
    c: G1Element


def token_request_respond(pp, ta_keys, db_reg, id_u, msg1, rng):
    """TA flow: verify the cross proof, blind-issue the extended signature."""
    Com, C0, pi1 = msg1
    rec = db_reg.find_user(id_u)
    if rec is None:
        raise ProtocolAbort("register", f"unknown user {id_u}")
    if not pi1_verify(pp.ctx, pp.paillier, Com, C0, pi1):
        raise ProtocolAbort("pi1", "commitment/ciphertext cross proof failed")
    s2 = rng.scalar_nonzero(P)
    c = Com * (pp.ctx.g1 ** s2)  # = g1^(s1+s2)
    A, r, pi2 = extended_bb_issue(pp.ctx, ta_keys.gamma, c, rng)
    state = TokenTAState(id_u, rec.h_U, Com, C0, s2, r, A, c)
    return state, (A, r, pp.ctx.g1 ** s2, pi2)


def token_request_confirm(pp, state, msg2, rng):
    """User flow 2: check the issuance proof (no pairings), sign the view."""
    A, r, g1s2, pi2 = msg2
    c = state.Com * g1s2
    if not extended_bb_verify_issue(pp.ctx, pp.Wprime, A, r, c, pi2):
        raise ProtocolAbort("pi2", "token issuance proof failed")
    state.A, state.r, state.g1s2 = A, r, g1s2
    msg = A.encode() + state.Com.encode() + g1s2.encode()
    mu = schnorr_sign(pp.ctx, state.user.x_U, state.user.h_U, msg, rng)
    return mu


def token_request_finish(pp, ta_state, db_reg, mu):
    """TA flow: verify the user's signature, persist the view, release s2."""
    msg = ta_state.A.encode() + ta_state.Com.encode() + \
        (pp.ctx.g1 ** ta_state.s2).encode()
    if not schnorr_verify(pp.ctx, ta_state.h_U, msg, mu):
        raise ProtocolAbort("mu", "user signature on token view failed")
    rec = RegistrationRecord(id_u=ta_state.id_u, h_U=ta_state.h_U,
                             A=ta_state.A, C0=ta_state.C0, s2=ta_state.s2,
                             c=ta_state.c, mu=mu)
    db_reg.append(rec)
    return rec, ta_state.s2


def token_request_complete(pp, state, s2):
    s = (state.s1 + s2) % P
    return PermissionToken(state.A, state.r, s, pp.max_ticket, pp.deadline)


def run_token_request(pp, ta_keys, db_reg, user, rng):
    state, msg1 = token_request_begin(pp, user, rng)
    ta_state, msg2 = token_request_respond(pp, ta_keys, db_reg, user.id_u, msg1, rng)
    mu = token_request_confirm(pp, state, msg2, rng)
    record, s2 = token_request_finish(pp, ta_state, db_reg, mu)
    return token_request_complete(pp, state, s2), record


# --- validation proof statement ----------------------------------------------


def ticket_statement(ctx, h_T, C1, C2, Tp, Tpp, C, Com, D, K, L,
                     Bprime, B1, B_k):
    """The 13-witness representation statement of the validation proof, in
    the exact order its witness commitments enter the challenge hash."""
    return RepStatement(
        targets=(C1, C2, Tp, Tpp, C, Tpp, Com, D, K, L),
        bases=((ctx.gT,),
               (ctx.g1, h_T),
               (ctx.G, ctx.H),
               (Tp, ctx.H),
               (ctx.g1, ctx.h, Bprime),
               (ctx.G, ctx.H),
               (ctx.g1, h_T),
               (B1, ctx.g),
               (B_k,),
               (ctx.g1, h_T)),
        wiring=((W_A,),
                (W_S, W_A),
                (W_S, W_R2),
                (W_ALPHA, W_R3),
                (W_BETA, W_ALPHA, W_R),
                (W_BETA, W_R5),
                (W_K, W_NU),
                (W_K, W_L),
                (W_DELTA,),
                (W_DELTA, W_F)),
        arity=13)


@dataclass
class MTicket:
    """One transmitted ticket: serial number, ElGamal encryption of g1^s,
    and the composite validation proof.  The index k never leaves the card."""

    B_k: G1Element
    E: ElGamalCiphertext
    C: G1Element | None
    B0: G1Element
    Tp: G1Element
    Tpp: G1Element
    Com: G1Element
    B: G1Element
    D: G1Element | None
    c: int
    responses: tuple

    def serialize(self, include_cd=True):
        has_c = include_cd and self.C is not None
        has_d = include_cd and self.D is not None
        flag = (1 if has_c else 0) | (2 if has_d else 0)
        out = [bytes([flag]), self.B_k.encode(), self.E.C1.encode(),
               self.E.C2.encode()]
        if has_c:
            out.append(self.C.encode())
        out.extend(p.encode() for p in (self.B0, self.Tp, self.Tpp, self.Com, self.B))
        if has_d:
            out.append(self.D.encode())
        out.append(i2b32(self.c))
        out.extend(i2b32(r) for r in self.responses)
        return b"".join(out)

    @classmethod
    def deserialize(cls, data):
        r = Reader(data)
        flag = r.u8()
        if flag not in (0, 1, 2, 3):
            raise InvalidEncoding("bad MTicket flag byte")
        B_k = decode_g1(r.take(33))
        C1 = decode_g1(r.take(33))
        C2 = decode_g1(r.take(33))
        C = decode_g1(r.take(33)) if flag & 1 else None
        B0, Tp, Tpp, Com, B = (decode_g1(r.take(33)) for _ in range(5))
        D = decode_g1(r.take(33)) if flag & 2 else None
        c = b322i(r.take(32), P)
        responses = tuple(b322i(r.take(32), P) for _ in range(13))
        r.done()
        return cls(B_k, ElGamalCiphertext(C1, C2), C, B0, Tp, Tpp, Com, B, D,
                   c, responses)


class TicketSession:
    """Precomputed material for one ticket.  Construction does every group
    operation; issuing later costs one hash and 13 multiply-adds mod p.
    Serializes to exactly 24 scalars + 10 points + 1 digest = 1130 bytes."""

    def __init__(self, token, k, points, digest, masks, witnesses):
        self.token = token
        self.k = k
        self.points = points  # (B_k, C1, C2, C, B0, Tp, Tpp, Com, B, D)
        self.digest = digest
        self.masks = masks          # 13 scalars
        self.witnesses = witnesses  # 11 scalars, _SESSION_WITNESSES order
        self.consumed = False

    def serialize(self):
        out = [i2b32(m) for m in self.masks]
        out.extend(i2b32(w) for w in self.witnesses)
        out.extend(p.encode() for p in self.points)
        out.append(self.digest)
        blob = b"".join(out)
        assert len(blob) == SESSION_BYTES
        return blob

    @classmethod
    def deserialize(cls, data, token):
        r = Reader(data)
        masks = tuple(b322i(r.take(32), P) for _ in range(13))
        witnesses = tuple(b322i(r.take(32), P) for _ in range(11))
        points = tuple(decode_g1(r.take(33)) for _ in range(10))
        digest = r.take(32)
        r.done()
        return cls(token, int(witnesses[0]), points, digest, masks, witnesses)


def ticket_precompute(pp, token, k, rng):
    """Fig.-7-shaped precomputation block; zero pairing evaluations."""
    ctx = pp.ctx
    if not 1 <= k <= token.max_ticket:
        raise IndexOutOfRange(f"k={k} outside [1..{token.max_ticket}]")
    if k in token.used:
        raise IndexAlreadyUsed(f"k={k}")
    s, r = token.s, token.r
    B_k = token.serial(ctx, k)  # raises DegenerateExponent on s+k+1 = 0
    a = rng.scalar_nonzero(P)
    C1 = ctx.gT ** a
    C2 = multiexp_g1([(ctx.g1, s), (pp.h_T, a)])
    alpha = rng.scalar_nonzero(P)
    B0 = token.A ** alpha
    Bprime = B0.inverse()
    beta = (alpha * s) % P
    C = multiexp_g1([(ctx.g1, beta), (ctx.h, alpha), (Bprime, r)])
    r2 = rng.scalar_nonzero(P)
    r3 = rng.scalar_nonzero(P)
    Tp = multiexp_g1([(ctx.G, s), (ctx.H, r2)])
    Tpp = multiexp_g1([(Tp, alpha), (ctx.H, r3)])
    r5 = (r3 + alpha * r2) % P
    nu = rng.scalar_nonzero(P)
    Com = multiexp_g1([(ctx.g1, k), (pp.h_T, nu)])
    A_k = pp.signed_set.sigs[k]
    l = rng.scalar_nonzero(P)
    B = A_k ** l
    B1 = B.inverse()
    D = multiexp_g1([(B1, k), (ctx.g, l)])
    delta = (s + k) % P
    f = (a + nu) % P
    K = ctx.gt * B_k.inverse()
    L = C2 * Com
    stmt = ticket_statement(ctx, pp.h_T, C1, C2, Tp, Tpp, C, Com, D, K, L,
                            Bprime, B1, B_k)
    masks = tuple(rng.scalar_nonzero(P) for _ in range(13))
    wit_comms = stmt.eval_with(masks)
    prefix = [C, C1, C2, B0, Tp, Tpp, Com, B, D, K] + wit_comms
    digest = transcript_digest(TAG_VALIDATE, [p.encode() for p in prefix])
    witnesses = (k, nu, l, a, r2, beta, alpha, r3, r5, delta, f)
    points = (B_k, C1, C2, C, B0, Tp, Tpp, Com, B, D)
    return TicketSession(token, k, points, digest, masks, witnesses)


def ticket_issue(session, ch, now):
    """Real-time step: one hash finalization, thirteen multiply-adds.
    Consumes the session and the ticket index."""
    if session.consumed:
        raise SessionConsumed("ticket session already issued")
    token = session.token
    if len(token.used) >= token.max_ticket:
        raise QuotaExhausted(f"{token.max_ticket} tickets already issued")
    if now >= token.deadline:
        raise TokenExpired(f"now={now} >= deadline={token.deadline}")
    if session.k in token.used:
        raise IndexAlreadyUsed(f"k={session.k}")
    c = hash_to_scalar(TAG_VALIDATE, [session.digest, i2b32(ch)])
    w = list(session.witnesses)
    full = w[:4] + [token.s] + w[4:7] + [token.r] + w[7:]
    responses = tuple((m + c * wi) % P for m, wi in zip(session.masks, full))
    session.consumed = True
    token.used.add(session.k)
    B_k, C1, C2, C, B0, Tp, Tpp, Com, B, D = session.points
    return MTicket(B_k, ElGamalCiphertext(C1, C2), C, B0, Tp, Tpp, Com, B, D,
                   c, responses)


@dataclass(frozen=True)
class SecretKeys:
    gamma: int
    y: int


@dataclass(frozen=True)
class Public:
    pass


PUBLIC = Public()


def ticket_verify(pp, ticket, ch, mode):
    """Either zero pairings (holder of gamma and y recomputes C and D) or
    exactly four (the two pairing equations).  Verdicts name the first
    failing check."""
    ctx = pp.ctx
    if ticket.B.is_identity:
        return reject("B=1")
    if ticket.B0.is_identity:
        return reject("B0=1")
    if isinstance(mode, SecretKeys):
        D = ticket.B ** mode.y
        C = ticket.B0 ** mode.gamma
        if ticket.D is not None and ticket.D != D:
            return reject("D-mismatch")
        if ticket.C is not None and ticket.C != C:
            return reject("C-mismatch")
    else:
        D, C = ticket.D, ticket.C
        if D is None or C is None:
            return reject("missing-C-or-D")
        if ctx.pair(D, ctx.g3) != ctx.pair(ticket.B, pp.Y):
            return reject("set-signature-pairing")
        if ctx.pair(C, ctx.g2) != ctx.pair(ticket.B0, pp.W):
            return reject("token-pairing")
    C1, C2 = ticket.E.C1, ticket.E.C2
    K = ctx.gt * ticket.B_k.inverse()
    L = C2 * ticket.Com
    B1 = ticket.B.inverse()
    Bprime = ticket.B0.inverse()
    stmt = ticket_statement(ctx, pp.h_T, C1, C2, ticket.Tp, ticket.Tpp, C,
                            ticket.Com, D, K, L, Bprime, B1, ticket.B_k)
    if len(ticket.responses) != 13:
        return reject("shape")
    tildes = stmt.recompute(list(ticket.responses), ticket.c)
    prefix = [C, C1, C2, ticket.B0, ticket.Tp, ticket.Tpp, ticket.Com,
              ticket.B, D, K] + tildes
    expect = challenge_scalar(TAG_VALIDATE, [p.encode() for p in prefix], ch)
    if ticket.c != expect:
        return reject("challenge")
    return ACCEPT


# --- validator authentication -------------------------------------------------


def card_auth_challenge(rng):
    return rng.bytes(32)


def validator_auth_respond(rsa_keys, rc_v, now):
    ts = int(now)
    sig = rsa_auth.rsa_sign(rsa_keys, rc_v + ts.to_bytes(8, "big"))
    return ts, sig


def card_auth_check(pp, token, rc_v, ts, sig):
    """Card-side checks: signature, token validity window, quota."""
    if not rsa_auth.rsa_verify(pp.validator_rsa, rc_v + int(ts).to_bytes(8, "big"), sig):
        raise BadValidatorSignature("validator RSA response")
    if ts >= token.deadline:
        raise TokenExpired(f"TS={ts} >= deadline={token.deadline}")
    if len(token.used) >= token.max_ticket:
        raise QuotaExhausted("no tickets left on this token")


def run_validator_auth(pp, token, rsa_keys, now, rng):
    rc_v = card_auth_challenge(rng)
    ts, sig = validator_auth_respond(rsa_keys, rc_v, now)
    card_auth_check(pp, token, rc_v, ts, sig)


# --- revocation ----------------------------------------------------------------


def ident_user(pp, elgamal_shares, db_reg, ticket):
    """Threshold-decrypt E to g1^s, look the commitment up in DB_REG.
    Returns the user id, or None when the commitment is unregistered."""
    frags = [elgamal_partial_decrypt(sh, ticket.E) for sh in elgamal_shares]
    g1s = elgamal_combine(frags, ticket.E)
    for rec in db_reg.token_records():
        if rec.c == g1s:
            return rec.id_u
    return None


def ident_ticket(pp, paillier_shares, record):
    """Recover s = s1 + s2 from the stored view, enumerate every serial
    number the token can produce."""
    frags = [paillier_partial_decrypt(pp.paillier, sh, record.C0)
             for sh in paillier_shares]
    s1 = paillier_combine(pp.paillier, frags)
    s = (s1 + record.s2) % P
    serials = []
    for k in range(1, pp.max_ticket + 1):
        e = (s + k + 1) % P
        serials.append(pp.ctx.gt ** pow(e, P - 2, P))
    return serials


def ident_duplicate(B_k, db_used):
    """Multiplicity of a serial number across validated and reported tickets."""
    needle = B_k.encode() if isinstance(B_k, G1Element) else bytes(B_k)
    return sum(1 for rec in db_used.records if rec.ticket.B_k.encode() == needle)


# --- post-payment reporting -----------------------------------------------------


REPORT_VALIDATOR_ID = "REPORT"


def report_challenge(B_k, day):
    return hash_to_scalar(TAG_REPORT, [B_k.encode(), int(day).to_bytes(8, "big")])


@dataclass
class UsageReport:
    day: int
    tickets: list


def report_unused(pp, token, now, rng):
    """Generate a full ticket for every unused index; reporting consumes the
    remaining quota by design, so QuotaExhausted cannot fire here."""
    day = int(now) // 86400
    tickets = []
    for k in list(token.remaining):
        session = ticket_precompute(pp, token, k, rng)
        ch = report_challenge(session.points[0], day)
        tickets.append(ticket_issue(session, ch, now))
    return UsageReport(day, tickets)


def verify_report(pp, report, mode):
    """TA-side check of a usage report; every entry must verify."""
    results = []
    for t in report.tickets:
        ch = report_challenge(t.B_k, report.day)
        results.append(ticket_verify(pp, t, ch, mode))
    return results


def absorb_report(db_used, report, dt):
    for t in report.tickets:
        db_used.append(UsedTicketRecord(t, REPORT_VALIDATOR_ID, dt))

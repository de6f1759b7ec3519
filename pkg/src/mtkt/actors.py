"""Multi-actor simulation: Card, Validator, TransportAuthority, Revocation
authorities, wired over an in-process byte channel with hex transcripts.

Every actor owns a private GroupContext so pairing evaluations attribute
per role, and never holds another role's secrets: the Card has only its
user key and token; the Validator holds the TA signing secrets only when
the scenario runs in with-keys (pairing-free) mode.
"""

import dataclasses
from dataclasses import dataclass, field

from . import protocol as pr
from .group import default_context
from .ledger import Ledger, UsedTicketRecord
from .rng import Rng
from .sigma import ProofBundle
from .wire import Reader, i2b32, lp, lp_int

EPOCH = 1_700_000_000


class Clock:
    """Virtual time; scenarios advance it deterministically."""

    def __init__(self, start=EPOCH):
        self.now = start

    def tick(self, seconds=1):
        self.now += seconds
        return self.now


class Transcript:
    """Ordered log of every wire frame, hex-encoded, plus note lines."""

    def __init__(self):
        self.lines = []
        self._seq = 0

    def frame(self, frm, to, payload):
        self.lines.append(f"{self._seq:04d} {frm}->{to} {payload.hex()}")
        self._seq += 1
        return payload

    def note(self, text):
        self.lines.append(f"# {text}")

    def render(self):
        return "\n".join(self.lines) + "\n"

    def write(self, path):
        with open(path, "w") as fh:
            fh.write(self.render())


def fresh_view(pp):
    """Copy of the public parameters with a private pairing counter."""
    return dataclasses.replace(pp, ctx=default_context())


@dataclass
class CardActor:
    user: pr.UserKeys
    pp: pr.PublicParameters
    token: pr.PermissionToken = None

    @property
    def name(self):
        return f"card:{self.user.id_u}"

    def clone(self):
        """A physical clone of the SIM state (the attack the duplicate
        detection countermeasures exist for)."""
        token = None
        if self.token is not None:
            token = pr.PermissionToken(self.token.A, self.token.r, self.token.s,
                                       self.token.max_ticket, self.token.deadline,
                                       set(self.token.used))
        user = pr.UserKeys(self.user.id_u, self.user.x_U, self.user.h_U)
        return CardActor(user, fresh_view(self.pp), token)

    def state_bytes(self):
        """Serialized persistent card state; holds no other role's secrets."""
        out = [lp(self.user.id_u.encode()), i2b32(self.user.x_U),
               self.user.h_U.encode()]
        if self.token is None:
            out.append(b"\x00")
        else:
            t = self.token
            used = sorted(t.used)
            out.extend([b"\x01", t.A.encode(), i2b32(t.r), i2b32(t.s),
                        t.max_ticket.to_bytes(4, "big"),
                        int(t.deadline).to_bytes(8, "big"),
                        len(used).to_bytes(4, "big")])
            out.extend(k.to_bytes(4, "big") for k in used)
        return b"".join(out)


@dataclass
class ValidatorActor:
    id_v: str
    pp: pr.PublicParameters
    rsa: object
    secret_mode: pr.SecretKeys = None  # set when provisioned with gamma, y

    @property
    def name(self):
        return f"validator:{self.id_v}"

    @property
    def mode(self):
        return self.secret_mode if self.secret_mode is not None else pr.PUBLIC


@dataclass
class TAActor:
    pp: pr.PublicParameters
    keys: pr.TAKeys
    ledger: Ledger

    name = "ta"


@dataclass
class RevocationActor:
    index: int
    elgamal_share: object
    paillier_share: object

    @property
    def name(self):
        return f"ra:{self.index}"


@dataclass
class World:
    """One deployed system: parameters, actors, ledger, clock, transcript."""

    pp: pr.PublicParameters
    ta: TAActor
    validator: ValidatorActor
    authorities: list
    revocation: pr.RevocationSecrets
    clock: Clock
    transcript: Transcript
    rng: Rng
    cards: dict = field(default_factory=dict)

    @classmethod
    def build(cls, max_ticket=10, t=2, n_authorities=3, seed=0,
              lifetime=30 * 86400, with_keys=True, paillier_bits=2048):
        rng = Rng(seed)
        clock = Clock()
        deadline = clock.now + lifetime
        pp, ta_keys, rev = pr.setup(max_ticket, deadline, t, n_authorities,
                                    rng, paillier_bits=paillier_bits)
        ta = TAActor(fresh_view(pp), ta_keys, Ledger())
        mode = pr.SecretKeys(ta_keys.gamma, ta_keys.y) if with_keys else None
        validator = ValidatorActor("V1", fresh_view(pp), ta_keys.validator_rsa,
                                   mode)
        authorities = [RevocationActor(i + 1, rev.elgamal.shares[i],
                                       rev.paillier.shares[i])
                       for i in range(n_authorities)]
        return cls(pp, ta, validator, authorities, rev, clock, Transcript(), rng)

    def new_card(self, id_u):
        user = pr.user_keygen(self.pp.ctx, id_u, self.rng)
        card = CardActor(user, fresh_view(self.pp))
        self.cards[id_u] = card
        return card

    # --- message-level protocol drivers -------------------------------------

    def register(self, card):
        tr, ta = self.transcript, self.ta
        tr.frame(card.name, ta.name, lp(card.user.id_u.encode()) + card.user.h_U.encode())
        rc = pr.register_begin(ta.pp, ta.ledger.reg, card.user.id_u,
                               card.user.h_U, self.rng)
        tr.frame(ta.name, card.name, rc)
        mu = pr.schnorr_sign(card.pp.ctx, card.user.x_U, card.user.h_U, rc, self.rng)
        tr.frame(card.name, ta.name, lp(mu.serialize()))
        return pr.register_finish(ta.pp, ta.ledger.reg, card.user.id_u,
                                  card.user.h_U, rc, mu)

    def request_token(self, card):
        tr, ta = self.transcript, self.ta
        state, msg1 = pr.token_request_begin(card.pp, card.user, self.rng)
        Com, C0, pi1 = msg1
        tr.frame(card.name, ta.name,
                 Com.encode() + lp_int(C0) + lp(pi1.serialize()))
        ta_state, msg2 = pr.token_request_respond(ta.pp, ta.keys, ta.ledger.reg,
                                                  card.user.id_u, msg1, self.rng)
        A, r, g1s2, pi2 = msg2
        tr.frame(ta.name, card.name,
                 A.encode() + i2b32(r) + g1s2.encode() + lp(pi2.serialize()))
        mu = pr.token_request_confirm(card.pp, state, msg2, self.rng)
        tr.frame(card.name, ta.name, lp(mu.serialize()))
        record, s2 = pr.token_request_finish(ta.pp, ta_state, ta.ledger.reg, mu)
        tr.frame(ta.name, card.name, i2b32(s2))
        card.token = pr.token_request_complete(card.pp, state, s2)
        return record

    def validate(self, card, session=None):
        """Full validation: validator auth, challenge, issue, verify, store.
        Returns (ticket, verdict)."""
        tr, val = self.transcript, self.validator
        rc_v = pr.card_auth_challenge(self.rng)
        tr.frame(card.name, val.name, rc_v)
        ts, sig = pr.validator_auth_respond(val.rsa, rc_v, self.clock.now)
        tr.frame(val.name, card.name, ts.to_bytes(8, "big") + lp(sig))
        pr.card_auth_check(card.pp, card.token, rc_v, ts, sig)
        if session is None:
            k = min(card.token.remaining)
            session = pr.ticket_precompute(card.pp, card.token, k, self.rng)
        ch = self.rng.scalar_nonzero(card.pp.ctx.p)
        tr.frame(val.name, card.name, i2b32(ch))
        ticket = pr.ticket_issue(session, ch, self.clock.now)
        include_cd = val.secret_mode is None
        wire = ticket.serialize(include_cd=include_cd)
        tr.frame(card.name, val.name, wire)
        received = pr.MTicket.deserialize(wire)
        verdict = pr.ticket_verify(val.pp, received, ch, val.mode)
        dt = self.clock.tick()
        if verdict:
            store = received.serialize()
            tr.frame(val.name, self.ta.name,
                     lp(store) + lp(val.id_v.encode()) + dt.to_bytes(8, "big"))
            self.ta.ledger.used.append(
                UsedTicketRecord(pr.MTicket.deserialize(store), val.id_v, dt))
        return ticket, verdict

    def report(self, card, absorb=False):
        """Card reports every unused ticket to the TA back end."""
        tr, ta = self.transcript, self.ta
        report = pr.report_unused(card.pp, card.token, self.clock.now, self.rng)
        payload = report.day.to_bytes(8, "big") + b"".join(
            lp(t.serialize()) for t in report.tickets)
        tr.frame(card.name, ta.name, payload)
        mode = pr.SecretKeys(ta.keys.gamma, ta.keys.y)
        verdicts = pr.verify_report(ta.pp, report, mode)
        if absorb and all(verdicts):
            pr.absorb_report(ta.ledger.used, report, self.clock.tick())
        return report, verdicts

    # --- revocation helpers ---------------------------------------------------

    def ident_user(self, ticket, n_shares=None):
        shares = [a.elgamal_share for a in self.authorities]
        if n_shares is not None:
            shares = shares[:n_shares]
        return pr.ident_user(self.ta.pp, shares, self.ta.ledger.reg, ticket)

    def ident_ticket(self, id_u, n_shares=None):
        shares = [a.paillier_share for a in self.authorities]
        if n_shares is not None:
            shares = shares[:n_shares]
        record = self.ta.ledger.reg.latest_token_record(id_u)
        return pr.ident_ticket(self.ta.pp, shares, record)

"""Persistent protocol state: DB_REG and DB_UsedTickets.

File format: one record per line, hex-encoded, each a versioned
length-prefixed binary blob (version byte, kind byte, payload).  Records
are append-only; registration writes a base row, a completed token request
appends a full row for the same user and the latest row wins.
"""

from dataclasses import dataclass, field

from .errors import ParseError
from .group import G1Element, decode_g1
from .wire import Reader, i2b32, lp, lp_int

FORMAT_VERSION = 1
KIND_REGISTRATION = 1
KIND_USED_TICKET = 2


@dataclass
class RegistrationRecord:
    id_u: str
    h_U: G1Element
    A: G1Element = None
    C0: int = None
    s2: int = None
    c: G1Element = None
    mu: object = None  # Schnorr ProofBundle

    @property
    def has_token(self):
        return self.A is not None

    def serialize(self):
        out = [bytes([FORMAT_VERSION, KIND_REGISTRATION]),
               lp(self.id_u.encode()), self.h_U.encode()]
        if self.has_token:
            out.append(b"\x01")
            out.extend([self.A.encode(), lp_int(self.C0), i2b32(self.s2),
                        self.c.encode(), lp(self.mu.serialize())])
        else:
            out.append(b"\x00")
        return b"".join(out)

    @classmethod
    def _parse(cls, r):
        from .sigma import ProofBundle
        id_u = r.lp().decode()
        h_U = decode_g1(r.take(33))
        if r.u8():
            A = decode_g1(r.take(33))
            C0 = r.lp_int()
            s2 = int.from_bytes(r.take(32), "big")
            c = decode_g1(r.take(33))
            mu = ProofBundle.deserialize(r.lp())
            return cls(id_u, h_U, A, C0, s2, c, mu)
        return cls(id_u, h_U)


@dataclass
class UsedTicketRecord:
    ticket: object  # MTicket
    id_v: str
    dt: int

    def serialize(self):
        return b"".join([bytes([FORMAT_VERSION, KIND_USED_TICKET]),
                         lp(self.id_v.encode()),
                         int(self.dt).to_bytes(8, "big"),
                         lp(self.ticket.serialize())])

    @classmethod
    def _parse(cls, r):
        from .protocol import MTicket
        id_v = r.lp().decode()
        dt = r.u64()
        ticket = MTicket.deserialize(r.lp())
        return cls(ticket, id_v, dt)


class DBReg:
    def __init__(self):
        self.records = []

    def append(self, rec):
        self.records.append(rec)

    def find_user(self, id_u):
        for rec in self.records:
            if rec.id_u == id_u:
                return rec
        return None

    def token_records(self):
        return [r for r in self.records if r.has_token]

    def latest_token_record(self, id_u):
        for rec in reversed(self.records):
            if rec.id_u == id_u and rec.has_token:
                return rec
        return None


class DBUsed:
    def __init__(self):
        self.records = []

    def append(self, rec):
        self.records.append(rec)

    def __len__(self):
        return len(self.records)


@dataclass
class Ledger:
    reg: DBReg = field(default_factory=DBReg)
    used: DBUsed = field(default_factory=DBUsed)


def db_store(path, ledger):
    with open(path, "w") as fh:
        for rec in ledger.reg.records:
            fh.write(rec.serialize().hex() + "\n")
        for rec in ledger.used.records:
            fh.write(rec.serialize().hex() + "\n")


def db_load(path):
    ledger = Ledger()
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                blob = bytes.fromhex(line)
            except ValueError:
                raise ParseError("not hex", position=f"line {lineno}")
            try:
                r = Reader(blob)
                version, kind = r.u8(), r.u8()
                if version != FORMAT_VERSION:
                    raise ParseError(f"unknown version {version}",
                                     position=f"line {lineno}")
                if kind == KIND_REGISTRATION:
                    rec = RegistrationRecord._parse(r)
                    r.done()
                    ledger.reg.append(rec)
                elif kind == KIND_USED_TICKET:
                    rec = UsedTicketRecord._parse(r)
                    r.done()
                    ledger.used.append(rec)
                else:
                    raise ParseError(f"unknown record kind {kind}",
                                     position=f"line {lineno}")
            except ParseError:
                raise
            except Exception as exc:
                raise ParseError(f"corrupt record: {exc}",
                                 position=f"line {lineno} byte {r.pos}")
    return ledger

"""Binary persistence for keys, parameters, and card state.

All files are length-prefixed binary per wire.py: scalars 32-byte
big-endian, points in their group encodings, large integers
length-prefixed.  Share files carry (index, value, threshold, parties).
"""

import math

from . import protocol as pr
from . import rsa_auth
from .encryption import ElGamalKeys, PaillierKeys, PaillierPublicKey, Share
from .group import decode_g1, decode_g2, default_context
from .setmember import SignedSet
from .wire import Reader, b322i, i2b32, lp, lp_int


def save_pp(pp):
    out = [pp.max_ticket.to_bytes(4, "big"), int(pp.deadline).to_bytes(8, "big"),
           pp.W.encode(), pp.Wprime.encode(), pp.Y.encode(), pp.h_T.encode(),
           lp_int(pp.paillier.n), lp_int(pp.validator_rsa.n),
           lp_int(pp.validator_rsa.e)]
    for k in range(1, pp.max_ticket + 1):
        out.append(pp.signed_set.sigs[k].encode())
    return b"".join(out)


def load_pp(data):
    ctx = default_context()
    r = Reader(data)
    max_ticket = r.u32()
    deadline = r.u64()
    W = decode_g2(r.take(128))
    Wprime = decode_g1(r.take(33))
    Y = decode_g2(r.take(128))
    h_T = decode_g1(r.take(33))
    n = r.lp_int()
    rsa_n = r.lp_int()
    rsa_e = r.lp_int()
    sigs = {k: decode_g1(r.take(33)) for k in range(1, max_ticket + 1)}
    r.done()
    return pr.PublicParameters(ctx, max_ticket, deadline, W, Wprime, Y, h_T,
                               PaillierPublicKey(n),
                               SignedSet(max_ticket, sigs, Y),
                               rsa_auth.RsaPublicKey(rsa_n, rsa_e))


def save_ta(ta):
    return b"".join([i2b32(ta.gamma), i2b32(ta.y),
                     lp_int(ta.validator_rsa.public.n),
                     lp_int(ta.validator_rsa.public.e),
                     lp_int(ta.validator_rsa.d)])


def load_ta(data):
    r = Reader(data)
    gamma = b322i(r.take(32))
    y = b322i(r.take(32))
    n, e, d = r.lp_int(), r.lp_int(), r.lp_int()
    r.done()
    return pr.TAKeys(gamma, y, rsa_auth.RsaKeyPair(rsa_auth.RsaPublicKey(n, e), d))


def _save_shares(shares):
    return len(shares).to_bytes(4, "big") + b"".join(
        lp(s.serialize()) for s in shares)


def _load_shares(r):
    return tuple(Share.deserialize(r.lp()) for _ in range(r.u32()))


def save_revocation(rev):
    eg, pai = rev.elgamal, rev.paillier
    return b"".join([i2b32(eg.x_T), eg.h_T.encode(), _save_shares(eg.shares),
                     lp_int(pai.a), lp_int(pai.b), _save_shares(pai.shares)])


def load_revocation(data):
    r = Reader(data)
    x_T = b322i(r.take(32))
    h_T = decode_g1(r.take(33))
    eg_shares = _load_shares(r)
    a, b = r.lp_int(), r.lp_int()
    pai_shares = _load_shares(r)
    r.done()
    n = a * b
    lam = math.lcm(a - 1, b - 1)
    d = (lam * pow(lam, -1, n)) % (n * lam)
    pai = PaillierKeys(PaillierPublicKey(n), a, b, d, n * lam, pai_shares)
    return pr.RevocationSecrets(ElGamalKeys(x_T, h_T, eg_shares), pai)


def save_card(user, token=None):
    out = [lp(user.id_u.encode()), i2b32(user.x_U), user.h_U.encode()]
    if token is None:
        out.append(b"\x00")
    else:
        used = sorted(token.used)
        out.extend([b"\x01", token.A.encode(), i2b32(token.r), i2b32(token.s),
                    token.max_ticket.to_bytes(4, "big"),
                    int(token.deadline).to_bytes(8, "big"),
                    len(used).to_bytes(4, "big")])
        out.extend(k.to_bytes(4, "big") for k in used)
    return b"".join(out)


def load_card(data, ctx):
    r = Reader(data)
    id_u = r.lp().decode()
    x_U = b322i(r.take(32))
    h_U = decode_g1(r.take(33))
    user = pr.UserKeys(id_u, x_U, h_U)
    token = None
    if r.u8():
        A = decode_g1(r.take(33))
        rr = b322i(r.take(32))
        s = b322i(r.take(32))
        max_ticket = r.u32()
        deadline = r.u64()
        used = {r.u32() for _ in range(r.u32())}
        token = pr.PermissionToken(A, rr, s, max_ticket, deadline, used)
    r.done()
    return user, token

"""Set-membership proof: completeness, soundness barriers, both verifier
modes, pairing counts, simulator, extraction."""

import pytest

from mtkt.errors import (DegenerateExponent, InvalidEncoding,
                         NoSignatureForElement, ParseError, SessionConsumed)
from mtkt.group import default_context
from mtkt.rng import Rng
from mtkt.setmember import (Public, SecretKey, SmpProof, SmpSession,
                            issue_set, smp_finalize, smp_precompute,
                            smp_simulate, smp_verify, smp_verify_transcript)


@pytest.fixture(scope="module")
def setup10():
    ctx = default_context()
    rng = Rng(21)
    y = rng.scalar_nonzero(ctx.p)
    sset = issue_set(ctx, y, 10)
    h_T = ctx.gT ** rng.scalar_nonzero(ctx.p)
    return ctx, rng, y, sset, h_T


def _prove(ctx, rng, sset, h_T, k, ch=None):
    nu = rng.scalar_nonzero(ctx.p)
    session = smp_precompute(ctx, sset, k, nu, h_T, rng)
    if ch is None:
        ch = rng.scalar_nonzero(ctx.p)
    return smp_finalize(session, ch), ch


def test_issue_set_sizes(setup10):
    ctx, rng, y, sset, _ = setup10
    assert len(sset.sigs) == 10
    one = issue_set(ctx, y, 1)
    assert set(one.sigs) == {1}
    assert one.sigs[1] == ctx.g ** pow((y + 1) % ctx.p, ctx.p - 2, ctx.p)


def test_issued_signatures_by_direct_exponentiation(setup10):
    ctx, _, y, sset, _ = setup10
    for k, A_k in sset.sigs.items():
        assert A_k ** ((y + k) % ctx.p) == ctx.g


def test_issued_signatures_pairing_verify(setup10):
    ctx, _, _, sset, _ = setup10
    for k in (1, 5, 10):
        lhs = ctx.pair(sset.sigs[k], sset.Y * (ctx.g3 ** k))
        assert lhs == ctx.pair(ctx.g, ctx.g3)


def test_precompute_d_is_b_to_the_y(setup10):
    ctx, rng, y, sset, h_T = setup10
    session = smp_precompute(ctx, sset, 3, rng.scalar_nonzero(ctx.p), h_T, rng)
    assert session.D == session.B ** y


def test_precompute_out_of_set(setup10):
    ctx, rng, _, sset, h_T = setup10
    with pytest.raises(NoSignatureForElement):
        smp_precompute(ctx, sset, 11, 1, h_T, rng)
    with pytest.raises(NoSignatureForElement):
        smp_precompute(ctx, sset, 0, 1, h_T, rng)


def test_precompute_performs_no_pairings(setup10):
    _, rng, _, sset, h_T = setup10
    ctx = default_context()
    sset_local = issue_set(ctx, 12345, 5)
    before = ctx.pairing_count
    smp_precompute(ctx, sset_local, 2, 7, h_T, rng)
    assert ctx.pairing_count == before == 0


def test_honest_proof_accepts_in_both_modes(setup10):
    ctx, rng, y, sset, h_T = setup10
    proof, ch = _prove(ctx, rng, sset, h_T, 7)
    assert smp_verify(ctx, proof, ch, SecretKey(y), h_T)
    assert smp_verify(ctx, proof, ch, Public(sset.Y), h_T)


def test_proof_shape(setup10):
    ctx, rng, _, sset, h_T = setup10
    proof, _ = _prove(ctx, rng, sset, h_T, 2)
    assert all(0 <= v < ctx.p for v in (proof.c, proof.s1, proof.s2, proof.s3))
    assert len(proof.serialize()) == 1 + 3 * 33 + 4 * 32
    assert len(proof.serialize(include_d=False)) == 1 + 2 * 33 + 4 * 32


def test_session_single_use(setup10):
    ctx, rng, _, sset, h_T = setup10
    session = smp_precompute(ctx, sset, 4, rng.scalar_nonzero(ctx.p), h_T, rng)
    smp_finalize(session, 77)
    with pytest.raises(SessionConsumed):
        smp_finalize(session, 78)


def test_forced_dual_challenge_extraction(setup10):
    # k = (s1 - s~1)/(c - c~), and nu, l come out the same way
    ctx, rng, y, sset, h_T = setup10
    k, nu = 6, rng.scalar_nonzero(ctx.p)
    session = smp_precompute(ctx, sset, k, nu, h_T, rng)
    twin = SmpSession(session.Com, session.B, session.B1, session.D,
                      session.digest, *session._witness, session._masks)
    p1 = smp_finalize(session, 1000)
    p2 = smp_finalize(twin, 2000)
    assert p1.c != p2.c
    dc_inv = pow((p1.c - p2.c) % ctx.p, ctx.p - 2, ctx.p)
    k_x = (p1.s1 - p2.s1) * dc_inv % ctx.p
    nu_x = (p1.s2 - p2.s2) * dc_inv % ctx.p
    l_x = (p1.s3 - p2.s3) * dc_inv % ctx.p
    assert k_x == k
    assert nu_x == nu
    # recovered l reconstructs the blinded signature: A_k = B^(1/l)
    A_k = p1.B ** pow(l_x, ctx.p - 2, ctx.p)
    assert A_k == sset.sigs[k]
    assert A_k ** ((y + k) % ctx.p) == ctx.g


def test_b_identity_rejected_first(setup10):
    ctx, rng, y, sset, h_T = setup10
    proof, ch = _prove(ctx, rng, sset, h_T, 1)
    from mtkt.group import G1Element
    proof.B = G1Element(None)
    r1 = smp_verify(ctx, proof, ch, SecretKey(y), h_T)
    r2 = smp_verify(ctx, proof, ch, Public(sset.Y), h_T)
    assert not r1 and r1.failed_check == "B=1"
    assert not r2 and r2.failed_check == "B=1"


def test_forged_d_rejected(setup10):
    ctx, rng, y, sset, h_T = setup10
    proof, ch = _prove(ctx, rng, sset, h_T, 5)
    proof.D = proof.D * ctx.g
    assert not smp_verify(ctx, proof, ch, SecretKey(y), h_T)
    r = smp_verify(ctx, proof, ch, Public(sset.Y), h_T)
    assert not r and r.failed_check == "pairing"


def test_pairing_counts_per_mode(setup10):
    _, rng, y, sset0, h_T = setup10
    ctx = default_context()
    y2 = rng.scalar_nonzero(ctx.p)
    sset = issue_set(ctx, y2, 5)
    proof, ch = _prove(ctx, rng, sset, h_T, 3)
    ctx.reset_pairing_count()
    assert smp_verify(ctx, proof, ch, SecretKey(y2), h_T)
    assert ctx.pairing_count == 0
    assert smp_verify(ctx, proof, ch, Public(sset.Y), h_T)
    assert ctx.pairing_count == 2


def test_cross_mode_agreement_on_mutations(setup10):
    ctx, rng, y, sset, h_T = setup10
    proof, ch = _prove(ctx, rng, sset, h_T, 8)
    data = proof.serialize()
    secret, public = SecretKey(y), Public(sset.Y)
    agree = 0
    for i in range(1000):
        mutated = bytearray(data)
        if i % 2 == 0:  # single bit flip
            bit = (i // 2) % (8 * len(data))
            mutated[bit // 8] ^= 1 << (bit % 8)
        else:  # single-field scalar tweak
            pos = 1 + 3 * 33 + 32 * (i % 4) + 31
            mutated[pos] = (mutated[pos] + 1 + i % 254) % 256
        try:
            cand = SmpProof.deserialize(bytes(mutated))
        except (InvalidEncoding, ParseError):
            agree += 1  # undecodable for both modes alike
            continue
        v1 = bool(smp_verify(ctx, cand, ch, secret, h_T))
        v2 = bool(smp_verify(ctx, cand, ch, public, h_T))
        assert v1 == v2
        assert not v1
        agree += 1
    assert agree == 1000


def test_completeness_sweep_small_sets():
    ctx = default_context()
    rng = Rng(22)
    h_T = ctx.gT ** rng.scalar_nonzero(ctx.p)
    for max_ticket in (1, 5, 10):
        y = rng.scalar_nonzero(ctx.p)
        sset = issue_set(ctx, y, max_ticket)
        for k in range(1, max_ticket + 1):
            proof, ch = _prove(ctx, rng, sset, h_T, k)
            assert smp_verify(ctx, proof, ch, SecretKey(y), h_T)
            assert smp_verify(ctx, proof, ch, Public(sset.Y), h_T)


def test_simulator_transcripts_verify(setup10):
    # Sim chooses (c, s1, s2, s3) first and solves for Com1, D1; the
    # transcript must satisfy both verifier-side equation sets
    ctx, rng, y, sset, h_T = setup10
    Com = (ctx.g1 ** rng.scalar_nonzero(ctx.p)) * (h_T ** rng.scalar_nonzero(ctx.p))
    for _ in range(5):
        tr = smp_simulate(ctx, sset, Com, h_T, rng)
        assert smp_verify_transcript(ctx, tr, h_T, SecretKey(y))
        assert smp_verify_transcript(ctx, tr, h_T, Public(sset.Y))


def test_degenerate_set_issue():
    ctx = default_context()
    y = ctx.p - 2  # y + 2 = 0 mod p
    with pytest.raises(DegenerateExponent):
        issue_set(ctx, y, 5)


def test_wire_round_trip_both_forms(setup10):
    ctx, rng, y, sset, h_T = setup10
    proof, ch = _prove(ctx, rng, sset, h_T, 9)
    full = SmpProof.deserialize(proof.serialize())
    assert smp_verify(ctx, full, ch, Public(sset.Y), h_T)
    slim = SmpProof.deserialize(proof.serialize(include_d=False))
    assert slim.D is None
    assert smp_verify(ctx, slim, ch, SecretKey(y), h_T)
    r = smp_verify(ctx, slim, ch, Public(sset.Y), h_T)
    assert not r and r.failed_check == "missing-D"

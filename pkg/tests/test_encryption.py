"""ElGamal and Paillier with threshold decryption, and the Pi1 cross proof."""

import itertools

import pytest

from mtkt.encryption import (InsufficientShares, Share, elgamal_combine,
                             elgamal_decrypt, elgamal_encrypt, elgamal_keygen,
                             elgamal_partial_decrypt, elgamal_rerandomize,
                             paillier_combine, paillier_decrypt,
                             paillier_encrypt, paillier_keygen,
                             paillier_partial_decrypt, pi1_prove, pi1_verify,
                             shamir_share, STAT_MASK_BITS)
from mtkt.rng import Rng


def test_elgamal_round_trip(ctx, rng):
    keys = elgamal_keygen(ctx, 1, 1, rng)
    m = ctx.g1 ** rng.scalar_nonzero(ctx.p)
    ct = elgamal_encrypt(ctx, keys.h_T, m, rng.scalar_nonzero(ctx.p))
    assert elgamal_decrypt(ctx, keys.x_T, ct) == m


def test_elgamal_randomization(ctx, rng):
    keys = elgamal_keygen(ctx, 1, 1, rng)
    m = ctx.g1 ** 5
    c1 = elgamal_encrypt(ctx, keys.h_T, m, 111)
    c2 = elgamal_encrypt(ctx, keys.h_T, m, 222)
    assert (c1.C1, c1.C2) != (c2.C1, c2.C2)
    assert elgamal_decrypt(ctx, keys.x_T, c1) == elgamal_decrypt(ctx, keys.x_T, c2)


def test_elgamal_rerandomization_identity(ctx, rng):
    keys = elgamal_keygen(ctx, 1, 1, rng)
    m = ctx.g1 ** 9
    r1, r2 = rng.scalar_nonzero(ctx.p), rng.scalar_nonzero(ctx.p)
    direct = elgamal_encrypt(ctx, keys.h_T, m, (r1 + r2) % ctx.p)
    rerand = elgamal_rerandomize(ctx, keys.h_T, elgamal_encrypt(ctx, keys.h_T, m, r1), r2)
    assert direct.C1 == rerand.C1 and direct.C2 == rerand.C2


def test_elgamal_threshold_matches_direct(ctx, rng):
    keys = elgamal_keygen(ctx, 2, 3, rng)
    m = ctx.g1 ** rng.scalar_nonzero(ctx.p)
    ct = elgamal_encrypt(ctx, keys.h_T, m, rng.scalar_nonzero(ctx.p))
    direct = elgamal_decrypt(ctx, keys.x_T, ct)
    frags = [elgamal_partial_decrypt(s, ct) for s in keys.shares[:2]]
    assert elgamal_combine(frags, ct) == direct == m


@pytest.mark.parametrize("t,n", [(1, 1), (2, 3), (3, 5)])
def test_elgamal_all_minimal_subsets_agree(ctx, t, n):
    rng = Rng(100 + t)
    keys = elgamal_keygen(ctx, t, n, rng)
    m = ctx.g1 ** rng.scalar_nonzero(ctx.p)
    ct = elgamal_encrypt(ctx, keys.h_T, m, rng.scalar_nonzero(ctx.p))
    for subset in itertools.combinations(keys.shares, t):
        frags = [elgamal_partial_decrypt(s, ct) for s in subset]
        assert elgamal_combine(frags, ct) == m
    if t > 1:
        for subset in itertools.combinations(keys.shares, t - 1):
            frags = [elgamal_partial_decrypt(s, ct) for s in subset]
            with pytest.raises(InsufficientShares):
                elgamal_combine(frags, ct)


def test_elgamal_single_share_insufficient(ctx, rng):
    keys = elgamal_keygen(ctx, 2, 3, rng)
    ct = elgamal_encrypt(ctx, keys.h_T, ctx.g1, 5)
    with pytest.raises(InsufficientShares):
        elgamal_combine([elgamal_partial_decrypt(keys.shares[0], ct)], ct)


def test_duplicate_share_indices_rejected(ctx, rng):
    keys = elgamal_keygen(ctx, 2, 3, rng)
    ct = elgamal_encrypt(ctx, keys.h_T, ctx.g1, 5)
    f = elgamal_partial_decrypt(keys.shares[0], ct)
    with pytest.raises(InsufficientShares):
        elgamal_combine([f, f], ct)


def test_shamir_share_file_round_trip(rng):
    shares = shamir_share(123456789, 2, 3, 10 ** 30 + 57, rng)
    for s in shares:
        assert Share.deserialize(s.serialize()) == s


def test_paillier_round_trip(paillier_23, rng):
    pk = paillier_23.public
    m = rng.scalar_nonzero(2 ** 255)
    j = 1 + rng.randint_below(pk.n - 1)
    assert paillier_decrypt(paillier_23, paillier_encrypt(pk, m, j)) == m


def test_paillier_zero(paillier_23):
    pk = paillier_23.public
    assert paillier_decrypt(paillier_23, paillier_encrypt(pk, 0, 7)) == 0


def test_paillier_modulus_size(paillier_23):
    assert paillier_23.public.n.bit_length() >= 2048
    assert paillier_23.a != paillier_23.b
    assert paillier_23.a.bit_length() == paillier_23.b.bit_length()


def test_paillier_binomial_identity(paillier_23):
    # unrandomized ciphertext (j = 1): C = (1+n)^m = 1 + m*n mod n^2
    pk = paillier_23.public
    m = 3141592653589793
    C = paillier_encrypt(pk, m, 1)
    assert C == (1 + m * pk.n) % pk.n2
    assert paillier_decrypt(paillier_23, C) == m


def test_paillier_rejects_bad_randomizer(paillier_23):
    pk = paillier_23.public
    with pytest.raises(ValueError):
        paillier_encrypt(pk, 1, 0)
    with pytest.raises(ValueError):
        paillier_encrypt(pk, 1, paillier_23.a)  # shares a factor with n
    with pytest.raises(ValueError):
        paillier_encrypt(pk, pk.n, 7)  # out-of-range plaintext


def test_paillier_threshold_all_minimal_subsets(paillier_23, rng):
    pk = paillier_23.public
    m = rng.scalar_nonzero(2 ** 200)
    C = paillier_encrypt(pk, m, 1 + rng.randint_below(pk.n - 1))
    for subset in itertools.combinations(paillier_23.shares, 2):
        frags = [paillier_partial_decrypt(pk, s, C) for s in subset]
        assert paillier_combine(pk, frags) == m
    for s in paillier_23.shares:
        with pytest.raises(InsufficientShares):
            paillier_combine(pk, [paillier_partial_decrypt(pk, s, C)])


def test_paillier_threshold_3_of_5():
    rng = Rng(31)
    keys = paillier_keygen(rng, t=3, n_parties=5)
    pk = keys.public
    m = 987654321987654321
    C = paillier_encrypt(pk, m, 1 + rng.randint_below(pk.n - 1))
    for subset in itertools.combinations(keys.shares, 3):
        frags = [paillier_partial_decrypt(pk, s, C) for s in subset]
        assert paillier_combine(pk, frags) == m
    frags = [paillier_partial_decrypt(pk, s, C) for s in keys.shares[:2]]
    with pytest.raises(InsufficientShares):
        paillier_combine(pk, frags)


def test_pi1_round_trip(ctx, paillier_23, rng):
    pk = paillier_23.public
    s1 = rng.scalar_nonzero(ctx.p)
    j = 1 + rng.randint_below(pk.n - 1)
    Com = ctx.g1 ** s1
    C0 = paillier_encrypt(pk, s1, j)
    proof = pi1_prove(ctx, pk, s1, j, Com, C0, rng)
    assert pi1_verify(ctx, pk, Com, C0, proof)


def test_pi1_cross_binding(ctx, paillier_23, rng):
    # C0 encrypting s1+1 under a commitment to s1 must not verify
    pk = paillier_23.public
    s1 = rng.scalar_nonzero(ctx.p)
    j = 1 + rng.randint_below(pk.n - 1)
    Com = ctx.g1 ** s1
    C0_bad = paillier_encrypt(pk, s1 + 1, j)
    proof = pi1_prove(ctx, pk, s1, j, Com, C0_bad, rng)
    assert not pi1_verify(ctx, pk, Com, C0_bad, proof)
    C0 = paillier_encrypt(pk, s1, j)
    proof2 = pi1_prove(ctx, pk, s1, j, Com, C0, rng)
    proof2.z_m += 1
    assert not pi1_verify(ctx, pk, Com, C0, proof2)


def test_pi1_response_bit_length_bound(ctx, paillier_23, rng):
    # z_m = m_r + c*s1 over the integers stays within |p| + 256 + 1 bits;
    # sampled over 10^3 honest response computations plus full proofs
    pk = paillier_23.public
    bound = ctx.p.bit_length() + STAT_MASK_BITS + 1
    mask_bits = ctx.p.bit_length() + STAT_MASK_BITS
    for _ in range(1000):
        m_r = rng.randbits(mask_bits)
        c = rng.scalar_nonzero(ctx.p)
        s1 = rng.scalar_nonzero(ctx.p)
        assert (m_r + c * s1).bit_length() <= bound
    for _ in range(5):
        s1 = rng.scalar_nonzero(ctx.p)
        j = 1 + rng.randint_below(pk.n - 1)
        Com = ctx.g1 ** s1
        C0 = paillier_encrypt(pk, s1, j)
        proof = pi1_prove(ctx, pk, s1, j, Com, C0, rng)
        assert proof.z_m.bit_length() <= bound
        assert pi1_verify(ctx, pk, Com, C0, proof)

import itertools
import random

import pytest

from privzone import ParameterError, token_matches
from privzone import hve
from privzone.hve import (
    GroupElement,
    GroupParams,
    MockPairingGroup,
    PairingCounter,
    TargetElement,
    ciphertext_from_json,
    ciphertext_to_json,
    encrypt,
    gen_token,
    params_from_json,
    params_to_json,
    public_key_from_json,
    public_key_to_json,
    query,
    random_message,
    secret_key_from_json,
    secret_key_to_json,
    setup,
    token_from_json,
    token_to_json,
)


@pytest.fixture(scope="module")
def system():
    params = GroupParams.generate(width=3, bits=32, seed=100)
    pk, sk = setup(params, seed=101)
    message = random_message(params, seed=102)
    return params, pk, sk, message


class TestGroupParams:
    def test_generate_produces_distinct_primes(self):
        params = GroupParams.generate(width=4, bits=32, seed=0)
        assert params.p != params.q
        assert params.n == params.p * params.q
        assert params.p.bit_length() >= 32

    def test_deterministic_generation(self):
        a = GroupParams.generate(width=4, bits=32, seed=5)
        b = GroupParams.generate(width=4, bits=32, seed=5)
        assert (a.p, a.q) == (b.p, b.q)

    def test_equal_primes_rejected(self):
        with pytest.raises(ParameterError):
            GroupParams(p=101, q=101, width=2)

    def test_composite_rejected(self):
        with pytest.raises(ParameterError):
            GroupParams(p=91, q=97, width=2)  # 91 = 7 * 13

    def test_width_positive(self):
        with pytest.raises(ParameterError):
            GroupParams(p=101, q=103, width=0)


class TestMockGroupLaws:
    def test_bilinearity(self, system):
        params, _, _, _ = system
        group = MockPairingGroup(params, counter=PairingCounter())
        rng = random.Random(1)
        for _ in range(50):
            a = GroupElement(rng.randrange(params.p), rng.randrange(params.q))
            b = GroupElement(rng.randrange(params.p), rng.randrange(params.q))
            u = rng.randrange(1, 1000)
            v = rng.randrange(1, 1000)
            lhs = group.pair(group.power(a, u), group.power(b, v))
            rhs = group.power(group.pair(a, b), u * v)
            assert lhs == rhs

    def test_subgroup_orthogonality(self, system):
        params, _, _, _ = system
        group = MockPairingGroup(params, counter=PairingCounter())
        rng = random.Random(2)
        for _ in range(20):
            p_elem = GroupElement(rng.randrange(1, params.p), 0)
            q_elem = GroupElement(0, rng.randrange(1, params.q))
            assert group.pair(p_elem, q_elem) == group.target_identity()

    def test_inverse_cancels(self, system):
        params, _, _, _ = system
        group = MockPairingGroup(params)
        e = GroupElement(12345, 6789)
        assert group.mul(e, group.inverse(e)) == group.identity()

    def test_mixing_group_types_rejected(self, system):
        params, _, _, _ = system
        group = MockPairingGroup(params)
        with pytest.raises(ParameterError):
            group.mul(GroupElement(1, 1), TargetElement(1, 1))


class TestSetup:
    def test_structural_width(self, system):
        _, pk, sk, _ = system
        assert len(pk.big_u) == len(pk.big_h) == len(pk.big_w) == 3
        assert len(sk.u) == len(sk.h) == len(sk.w) == 3

    def test_secret_components_live_in_gp(self, system):
        _, _, sk, _ = system
        for elem in (sk.g, sk.v) + sk.u + sk.h + sk.w:
            assert elem.exp_q == 0

    def test_stripping_blinding_recovers_v(self, system):
        _, pk, sk, _ = system
        assert GroupElement(pk.big_v.exp_p, 0) == sk.v
        assert pk.big_v.exp_q != 0

    def test_a_is_pairing_of_g_v_raised(self, system):
        params, pk, sk, _ = system
        group = MockPairingGroup(params, counter=PairingCounter())
        assert pk.big_a == group.power(group.pair(sk.g, sk.v), sk.a)

    def test_deterministic(self, system):
        params, _, _, _ = system
        pk1, sk1 = setup(params, seed=7)
        pk2, sk2 = setup(params, seed=7)
        assert pk1 == pk2 and sk1 == sk2
        pk3, _ = setup(params, seed=8)
        assert pk3 != pk1


class TestEncrypt:
    def test_structure(self, system):
        params, pk, _, msg = system
        ct = encrypt(pk, "000", msg, seed=3)
        assert ct.width == 3
        assert len(ct.c_pairs) == 3

    def test_star_in_index_rejected(self, system):
        _, pk, _, msg = system
        with pytest.raises(ParameterError):
            encrypt(pk, "0*0", msg, seed=3)

    def test_wrong_width_rejected(self, system):
        _, pk, _, msg = system
        with pytest.raises(ParameterError):
            encrypt(pk, "0000", msg, seed=3)

    def test_fresh_randomness_changes_every_component(self, system):
        _, pk, _, msg = system
        a = encrypt(pk, "110", msg, seed=4)
        b = encrypt(pk, "110", msg, seed=5)
        assert a.c_prime != b.c_prime
        assert a.c0 != b.c0
        for (a1, a2), (b1, b2) in zip(a.c_pairs, b.c_pairs):
            assert a1 != b1 and a2 != b2

    def test_deterministic_for_fixed_seed(self, system):
        _, pk, _, msg = system
        assert encrypt(pk, "110", msg, seed=4) == encrypt(pk, "110", msg, seed=4)


class TestGenToken:
    def test_star_pattern_positions(self, system):
        _, _, sk, _ = system
        tk = gen_token(sk, "*00", seed=6)
        assert tk.positions == (1, 2)

    def test_full_pattern(self, system):
        _, _, sk, _ = system
        assert len(gen_token(sk, "000", seed=6).components) == 3

    def test_all_star_token(self, system):
        params, _, sk, _ = system
        tk = gen_token(sk, "***", seed=6)
        group = MockPairingGroup(params)
        assert tk.components == ()
        assert tk.k0 == group.power(sk.g, sk.a)

    def test_bad_pattern_rejected(self, system):
        _, _, sk, _ = system
        with pytest.raises(ParameterError):
            gen_token(sk, "0?0", seed=6)
        with pytest.raises(ParameterError):
            gen_token(sk, "00", seed=6)


class TestQuery:
    def test_match_returns_message(self, system):
        _, pk, sk, msg = system
        ct = encrypt(pk, "000", msg, seed=8)
        tk = gen_token(sk, "*00", seed=9)
        assert query(ct, tk, {msg}, counter=PairingCounter()) == msg

    def test_nonmatch_returns_bottom(self, system):
        _, pk, sk, msg = system
        ct = encrypt(pk, "110", msg, seed=8)
        tk = gen_token(sk, "*00", seed=9)
        assert query(ct, tk, {msg}, counter=PairingCounter()) is None

    def test_all_star_matches_everything(self, system):
        _, pk, sk, msg = system
        tk = gen_token(sk, "***", seed=10)
        for index in ("000", "011", "111"):
            ct = encrypt(pk, index, msg, seed=11)
            assert query(ct, tk, {msg}, counter=PairingCounter()) == msg

    def test_mismatched_params_rejected(self, system):
        _, pk, _, msg = system
        other = GroupParams.generate(width=3, bits=32, seed=999)
        _, sk_other = setup(other, seed=1)
        ct = encrypt(pk, "000", msg, seed=8)
        tk = gen_token(sk_other, "*00", seed=9)
        with pytest.raises(ParameterError):
            query(ct, tk, {msg})

    def test_exhaustive_width3_against_symbolic_matching(self):
        params = GroupParams.generate(width=3, bits=32, seed=200)
        pk, sk = setup(params, seed=201)
        msg = random_message(params, seed=202)
        counter = PairingCounter()
        for i, bits in enumerate(itertools.product("01", repeat=3)):
            index = "".join(bits)
            ct = encrypt(pk, index, msg, seed=300 + i)
            for j, pat in enumerate(itertools.product("01*", repeat=3)):
                pattern = "".join(pat)
                tk = gen_token(sk, pattern, seed=400 + j)
                got = query(ct, tk, {msg}, counter=counter)
                assert (got == msg) == token_matches(pattern, index), (pattern, index)

    def test_random_width12_against_symbolic_matching(self):
        params = GroupParams.generate(width=12, bits=32, seed=210)
        pk, sk = setup(params, seed=211)
        msg = random_message(params, seed=212)
        rng = random.Random(213)
        counter = PairingCounter()
        for trial in range(500):
            index = "".join(rng.choice("01") for _ in range(12))
            pattern = "".join(rng.choice("01*") for _ in range(12))
            ct = encrypt(pk, index, msg, seed=rng.randrange(2**60))
            tk = gen_token(sk, pattern, seed=rng.randrange(2**60))
            got = query(ct, tk, {msg}, counter=counter)
            assert (got == msg) == token_matches(pattern, index)

    def test_nonmatch_never_lands_in_singleton_domain(self, system):
        _, pk, sk, msg = system
        rng = random.Random(214)
        for _ in range(200):
            tk = gen_token(sk, "*11", seed=rng.randrange(2**60))
            ct = encrypt(pk, "000", msg, seed=rng.randrange(2**60))
            assert query(ct, tk, {msg}, counter=PairingCounter()) is None


class TestPairingCounter:
    def test_query_adds_one_plus_two_j(self, system):
        _, pk, sk, msg = system
        counter = PairingCounter()
        ct = encrypt(pk, "000", msg, seed=20)
        query(ct, gen_token(sk, "*00", seed=21), {msg}, counter=counter)
        assert counter.snapshot() == 5

    def test_accumulation_and_reset(self, system):
        _, pk, sk, msg = system
        counter = PairingCounter()
        ct = encrypt(pk, "000", msg, seed=20)
        query(ct, gen_token(sk, "000", seed=21), {msg}, counter=counter)  # 7
        query(ct, gen_token(sk, "***", seed=22), {msg}, counter=counter)  # 1
        assert counter.snapshot() == 8
        counter.reset()
        assert counter.snapshot() == 0

    def test_global_counter_functions(self, system):
        _, pk, sk, msg = system
        hve.reset_pairing_counter()
        ct = encrypt(pk, "000", msg, seed=20)
        query(ct, gen_token(sk, "*0*", seed=23), {msg})
        assert hve.pairing_counter_snapshot() == 3
        hve.reset_pairing_counter()
        assert hve.pairing_counter_snapshot() == 0


class TestJsonRoundTrips:
    def test_params_tagged_insecure(self, system):
        params, _, _, _ = system
        obj = params_to_json(params)
        assert obj["insecure_mock"] is True
        assert params_from_json(obj) == params

    def test_key_round_trips(self, system):
        _, pk, sk, _ = system
        assert public_key_from_json(public_key_to_json(pk)) == pk
        assert secret_key_from_json(secret_key_to_json(sk)) == sk

    def test_ciphertext_and_token_round_trips(self, system):
        _, pk, sk, msg = system
        ct = encrypt(pk, "010", msg, seed=30)
        tk = gen_token(sk, "0*0", seed=31)
        assert ciphertext_from_json(ciphertext_to_json(ct)) == ct
        assert token_from_json(token_to_json(tk)) == tk

    def test_json_is_serializable(self, system):
        import json

        _, pk, sk, msg = system
        ct = encrypt(pk, "010", msg, seed=30)
        text = json.dumps(ciphertext_to_json(ct))
        assert ciphertext_from_json(json.loads(text)) == ct

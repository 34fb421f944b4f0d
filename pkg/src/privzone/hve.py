"""Hidden-vector-encryption engine over a mock composite-order group.

Implements the four scheme phases (setup, encryption, token generation,
query) against a symmetric bilinear group of order N = P*Q.  The shipped
backend represents a group element g_p^x * g_q^y by its exponent pair
(x mod P, y mod Q), which reproduces the scheme's algebra exactly —
including subgroup orthogonality, where pairing a pure G_p element with a
pure G_q element yields the target identity — while being trivially
breakable.  It exists to validate matching semantics and to count pairing
evaluations, never to protect data.

A query evaluates

    M = C' * prod_{i in J} e(C_i1, K_i1) * e(C_i2, K_i2) / e(C_0, K_0)

and costs 1 + 2*|J| pairings, where J is the set of non-star token
positions.  Results outside the registered valid-message domain read as
"no match".
"""

from __future__ import annotations

import random
import threading
from dataclasses import dataclass
from typing import Container, Optional

from .errors import ParameterError


@dataclass(frozen=True)
class GroupElement:
    """g_p^exp_p * g_q^exp_q in the source group."""

    exp_p: int
    exp_q: int


@dataclass(frozen=True)
class TargetElement:
    """e(g_p,g_p)^exp_p * e(g_q,g_q)^exp_q in the target group."""

    exp_p: int
    exp_q: int


class PairingCounter:
    """Thread-safe monotone count of pairing evaluations."""

    def __init__(self):
        self._lock = threading.Lock()
        self._count = 0

    def add(self, amount: int = 1):
        with self._lock:
            self._count += amount

    def snapshot(self) -> int:
        with self._lock:
            return self._count

    def reset(self):
        with self._lock:
            self._count = 0


_GLOBAL_COUNTER = PairingCounter()


def pairing_counter_snapshot() -> int:
    """Pairing evaluations since the last reset (each query adds 1+2|J|)."""
    return _GLOBAL_COUNTER.snapshot()


def reset_pairing_counter():
    _GLOBAL_COUNTER.reset()


def _is_prime(n: int) -> bool:
    from sympy import isprime

    return bool(isprime(n))


@dataclass(frozen=True)
class GroupParams:
    """Two distinct primes and the pattern width of the system."""

    p: int
    q: int
    width: int

    def __post_init__(self):
        if self.width < 1:
            raise ParameterError("width must be >= 1")
        if self.p == self.q:
            raise ParameterError("P and Q must be distinct")
        if self.p < 3 or self.q < 3 or not (_is_prime(self.p) and _is_prime(self.q)):
            raise ParameterError("P and Q must be primes")

    @property
    def n(self) -> int:
        return self.p * self.q

    @classmethod
    def generate(cls, width: int, bits: int = 32, seed: int = 0) -> "GroupParams":
        from sympy import nextprime

        if bits < 4:
            raise ParameterError("prime bit length must be at least 4")
        rng = random.Random(seed)
        p = int(nextprime(rng.randrange(1 << (bits - 1), 1 << bits)))
        q = p
        while q == p:
            q = int(nextprime(rng.randrange(1 << (bits - 1), 1 << bits)))
        return cls(p=p, q=q, width=width)


class MockPairingGroup:
    """Exponent-pair arithmetic backend for the composite-order group.

    Duck-typed operation set (multiply, power, inverse, pair); a faithful
    pairing backend could replace it behind the same methods.
    """

    def __init__(self, params: GroupParams, counter: Optional[PairingCounter] = None):
        self.params = params
        self.counter = counter if counter is not None else _GLOBAL_COUNTER

    def identity(self) -> GroupElement:
        return GroupElement(0, 0)

    def target_identity(self) -> TargetElement:
        return TargetElement(0, 0)

    def mul(self, a, b):
        if type(a) is not type(b):
            raise ParameterError("cannot multiply source and target elements")
        return type(a)(
            (a.exp_p + b.exp_p) % self.params.p,
            (a.exp_q + b.exp_q) % self.params.q,
        )

    def power(self, a, k: int):
        return type(a)((a.exp_p * k) % self.params.p, (a.exp_q * k) % self.params.q)

    def inverse(self, a):
        return type(a)(-a.exp_p % self.params.p, -a.exp_q % self.params.q)

    def pair(self, a: GroupElement, b: GroupElement) -> TargetElement:
        # e(g_p^x1 g_q^y1, g_p^x2 g_q^y2) = e(g_p,g_p)^(x1 x2) e(g_q,g_q)^(y1 y2);
        # the cross terms vanish because e(g_p, g_q) has order dividing gcd(P,Q)=1.
        self.counter.add(1)
        return TargetElement(
            (a.exp_p * b.exp_p) % self.params.p,
            (a.exp_q * b.exp_q) % self.params.q,
        )


@dataclass(frozen=True)
class HveSecretKey:
    params: GroupParams
    gq: GroupElement
    a: int
    g: GroupElement
    v: GroupElement
    u: tuple[GroupElement, ...]
    h: tuple[GroupElement, ...]
    w: tuple[GroupElement, ...]


@dataclass(frozen=True)
class HvePublicKey:
    params: GroupParams
    gq: GroupElement
    big_v: GroupElement
    big_a: TargetElement
    big_u: tuple[GroupElement, ...]
    big_h: tuple[GroupElement, ...]
    big_w: tuple[GroupElement, ...]


@dataclass(frozen=True)
class HveCiphertext:
    params: GroupParams
    c_prime: TargetElement
    c0: GroupElement
    c_pairs: tuple[tuple[GroupElement, GroupElement], ...]

    @property
    def width(self) -> int:
        return len(self.c_pairs)


@dataclass(frozen=True)
class HveToken:
    params: GroupParams
    pattern: str
    k0: GroupElement
    components: tuple[tuple[int, GroupElement, GroupElement], ...]

    @property
    def positions(self) -> tuple[int, ...]:
        return tuple(i for i, _, _ in self.components)


def setup(params: GroupParams, seed: int) -> tuple[HvePublicKey, HveSecretKey]:
    """Draw the key pair; G_p members of the public key get G_q blinding."""
    rng = random.Random(seed)
    group = MockPairingGroup(params)
    p, q, width = params.p, params.q, params.width

    gq = GroupElement(0, rng.randrange(1, q))
    a = rng.randrange(1, p)
    g = GroupElement(rng.randrange(1, p), 0)
    v = GroupElement(rng.randrange(1, p), 0)
    u = tuple(GroupElement(rng.randrange(1, p), 0) for _ in range(width))
    h = tuple(GroupElement(rng.randrange(1, p), 0) for _ in range(width))
    w = tuple(GroupElement(rng.randrange(1, p), 0) for _ in range(width))

    blind = lambda e: group.mul(e, GroupElement(0, rng.randrange(1, q)))
    big_v = blind(v)
    big_a = group.power(group.pair(g, v), a)
    big_u = tuple(blind(e) for e in u)
    big_h = tuple(blind(e) for e in h)
    big_w = tuple(blind(e) for e in w)

    pk = HvePublicKey(params, gq, big_v, big_a, big_u, big_h, big_w)
    sk = HveSecretKey(params, gq, a, g, v, u, h, w)
    return pk, sk


def _check_index(index: str, width: int):
    if len(index) != width:
        raise ParameterError(f"index width {len(index)} != system width {width}")
    if any(ch not in "01" for ch in index):
        raise ParameterError("users encrypt concrete locations: bits must be 0/1")


def encrypt(pk: HvePublicKey, index: str, message: TargetElement, seed: int) -> HveCiphertext:
    """Encrypt a concrete cell index with fresh randomness from the seed."""
    params = pk.params
    _check_index(index, params.width)
    rng = random.Random(seed)
    group = MockPairingGroup(params)
    s = rng.randrange(params.n)
    z = GroupElement(0, rng.randrange(1, params.q))

    c_prime = group.mul(message, group.power(pk.big_a, s))
    c0 = group.mul(group.power(pk.big_v, s), z)
    pairs = []
    for i, bit in enumerate(index):
        z1 = GroupElement(0, rng.randrange(1, params.q))
        z2 = GroupElement(0, rng.randrange(1, params.q))
        base = group.mul(group.power(pk.big_u[i], int(bit)), pk.big_h[i])
        c1 = group.mul(group.power(base, s), z1)
        c2 = group.mul(group.power(pk.big_w[i], s), z2)
        pairs.append((c1, c2))
    return HveCiphertext(params=params, c_prime=c_prime, c0=c0, c_pairs=tuple(pairs))


def gen_token(sk: HveSecretKey, pattern: str, seed: int) -> HveToken:
    """Issue a search token; components exist only at non-star positions."""
    params = sk.params
    if len(pattern) != params.width:
        raise ParameterError(f"pattern width {len(pattern)} != system width {params.width}")
    if any(ch not in "01*" for ch in pattern):
        raise ParameterError("patterns are strings over {0,1,*}")
    rng = random.Random(seed)
    group = MockPairingGroup(params)

    k0 = group.power(sk.g, sk.a)
    components = []
    for i, ch in enumerate(pattern):
        if ch == "*":
            continue
        r1 = rng.randrange(1, params.p)
        r2 = rng.randrange(1, params.p)
        base = group.mul(group.power(sk.u[i], int(ch)), sk.h[i])
        k0 = group.mul(k0, group.mul(group.power(base, r1), group.power(sk.w[i], r2)))
        components.append((i, group.power(sk.v, r1), group.power(sk.v, r2)))
    return HveToken(params=params, pattern=pattern, k0=k0, components=tuple(components))


def query(
    ct: HveCiphertext,
    token: HveToken,
    valid_messages: Container[TargetElement],
    counter: Optional[PairingCounter] = None,
) -> Optional[TargetElement]:
    """Attempt message recovery; None means no match (result outside domain).

    Costs exactly 1 + 2*|J| pairing evaluations on the counter.
    """
    if ct.params != token.params:
        raise ParameterError("ciphertext and token use different parameters")
    group = MockPairingGroup(ct.params, counter=counter)
    numerator = group.target_identity()
    for i, k1, k2 in token.components:
        c1, c2 = ct.c_pairs[i]
        numerator = group.mul(numerator, group.mul(group.pair(c1, k1), group.pair(c2, k2)))
    denominator = group.pair(ct.c0, token.k0)
    result = group.mul(ct.c_prime, group.mul(numerator, group.inverse(denominator)))
    return result if result in valid_messages else None


def random_message(params: GroupParams, seed: int) -> TargetElement:
    rng = random.Random(seed)
    return TargetElement(rng.randrange(params.p), rng.randrange(params.q))


# ---------------------------------------------------------------------------
# JSON serialization: residue pairs plus a params header tagged insecure.


def params_to_json(params: GroupParams) -> dict:
    return {"P": params.p, "Q": params.q, "width": params.width, "insecure_mock": True}


def params_from_json(obj: dict) -> GroupParams:
    return GroupParams(p=obj["P"], q=obj["Q"], width=obj["width"])


def _elem(e) -> list[int]:
    return [e.exp_p, e.exp_q]


def _group_elem(pair: list) -> GroupElement:
    return GroupElement(int(pair[0]), int(pair[1]))


def _target_elem(pair: list) -> TargetElement:
    return TargetElement(int(pair[0]), int(pair[1]))


def public_key_to_json(pk: HvePublicKey) -> dict:
    return {
        "params": params_to_json(pk.params),
        "gq": _elem(pk.gq),
        "V": _elem(pk.big_v),
        "A": _elem(pk.big_a),
        "U": [_elem(e) for e in pk.big_u],
        "H": [_elem(e) for e in pk.big_h],
        "W": [_elem(e) for e in pk.big_w],
    }


def public_key_from_json(obj: dict) -> HvePublicKey:
    return HvePublicKey(
        params=params_from_json(obj["params"]),
        gq=_group_elem(obj["gq"]),
        big_v=_group_elem(obj["V"]),
        big_a=_target_elem(obj["A"]),
        big_u=tuple(_group_elem(e) for e in obj["U"]),
        big_h=tuple(_group_elem(e) for e in obj["H"]),
        big_w=tuple(_group_elem(e) for e in obj["W"]),
    )


def secret_key_to_json(sk: HveSecretKey) -> dict:
    return {
        "params": params_to_json(sk.params),
        "gq": _elem(sk.gq),
        "a": sk.a,
        "g": _elem(sk.g),
        "v": _elem(sk.v),
        "u": [_elem(e) for e in sk.u],
        "h": [_elem(e) for e in sk.h],
        "w": [_elem(e) for e in sk.w],
    }


def secret_key_from_json(obj: dict) -> HveSecretKey:
    return HveSecretKey(
        params=params_from_json(obj["params"]),
        gq=_group_elem(obj["gq"]),
        a=int(obj["a"]),
        g=_group_elem(obj["g"]),
        v=_group_elem(obj["v"]),
        u=tuple(_group_elem(e) for e in obj["u"]),
        h=tuple(_group_elem(e) for e in obj["h"]),
        w=tuple(_group_elem(e) for e in obj["w"]),
    )


def ciphertext_to_json(ct: HveCiphertext) -> dict:
    return {
        "params": params_to_json(ct.params),
        "c_prime": _elem(ct.c_prime),
        "c0": _elem(ct.c0),
        "pairs": [[_elem(c1), _elem(c2)] for c1, c2 in ct.c_pairs],
    }


def ciphertext_from_json(obj: dict) -> HveCiphertext:
    return HveCiphertext(
        params=params_from_json(obj["params"]),
        c_prime=_target_elem(obj["c_prime"]),
        c0=_group_elem(obj["c0"]),
        c_pairs=tuple((_group_elem(c1), _group_elem(c2)) for c1, c2 in obj["pairs"]),
    )


def token_to_json(tk: HveToken) -> dict:
    return {
        "params": params_to_json(tk.params),
        "pattern": tk.pattern,
        "k0": _elem(tk.k0),
        "components": [[i, _elem(k1), _elem(k2)] for i, k1, k2 in tk.components],
    }


def token_from_json(obj: dict) -> HveToken:
    return HveToken(
        params=params_from_json(obj["params"]),
        pattern=obj["pattern"],
        k0=_group_elem(obj["k0"]),
        components=tuple(
            (int(i), _group_elem(k1), _group_elem(k2)) for i, k1, k2 in obj["components"]
        ),
    )

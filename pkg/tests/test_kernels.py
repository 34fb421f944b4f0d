import itertools
import random

import pytest

from privzone import ParameterError, kernels
from privzone.kernels import available_backends, minimize_patterns, prime_implicants, select_cover

HAS_COMPILED = "compiled" in available_backends()

needs_compiled = pytest.mark.skipif(not HAS_COMPILED, reason="compiled kernel not built")


def brute_force_primes(minterms, width):
    """Oracle: enumerate every cube, keep those inside the set and maximal."""
    on = set(minterms)

    def cube_minterms(value, mask):
        free = [b for b in range(width) if mask >> b & 1]
        for bits in itertools.product((0, 1), repeat=len(free)):
            v = value
            for b, bit in zip(free, bits):
                v |= bit << b
            yield v

    inside = set()
    for mask in range(1 << width):
        value_bits = [b for b in range(width) if not mask >> b & 1]
        for bits in itertools.product((0, 1), repeat=len(value_bits)):
            value = 0
            for b, bit in zip(value_bits, bits):
                value |= bit << b
            if all(m in on for m in cube_minterms(value, mask)):
                inside.add((value, mask))
    primes = set()
    for value, mask in inside:
        maximal = True
        for b in range(width):
            if not mask >> b & 1:
                if (value & ~(1 << b), mask | 1 << b) in inside:
                    maximal = False
                    break
        if maximal:
            primes.add((value, mask))
    return sorted(primes)


def random_instance(rng, max_width=6):
    width = rng.randrange(1, max_width + 1)
    universe = list(range(1 << width))
    k = rng.randrange(1, len(universe) + 1)
    return sorted(rng.sample(universe, k)), width


class TestPrimeImplicants:
    def test_against_brute_force(self):
        rng = random.Random(50)
        for _ in range(120):
            minterms, width = random_instance(rng)
            assert prime_implicants(minterms, width, backend="python") == brute_force_primes(
                minterms, width
            )

    @needs_compiled
    def test_compiled_against_brute_force(self):
        rng = random.Random(51)
        for _ in range(120):
            minterms, width = random_instance(rng)
            assert prime_implicants(minterms, width, backend="compiled") == brute_force_primes(
                minterms, width
            )


class TestBackendParity:
    @needs_compiled
    def test_primes_identical(self):
        rng = random.Random(52)
        for _ in range(150):
            minterms, width = random_instance(rng, max_width=10)
            py = prime_implicants(minterms, width, backend="python")
            cy = prime_implicants(minterms, width, backend="compiled")
            assert py == cy

    @needs_compiled
    def test_cover_identical(self):
        rng = random.Random(53)
        for _ in range(150):
            minterms, width = random_instance(rng, max_width=10)
            py = minimize_patterns(minterms, width, backend="python")
            cy = minimize_patterns(minterms, width, backend="compiled")
            assert py == cy

    @needs_compiled
    def test_cover_identical_sparse_wide(self):
        rng = random.Random(55)
        for _ in range(20):
            width = rng.randrange(11, 17)
            k = rng.randrange(1, 200)
            minterms = sorted(rng.sample(range(1 << width), k))
            py = minimize_patterns(minterms, width, backend="python")
            cy = minimize_patterns(minterms, width, backend="compiled")
            assert py == cy


class TestCoverProperties:
    @pytest.mark.parametrize("backend", ["python"] + (["compiled"] if HAS_COMPILED else []))
    def test_exact_disjoint_cover(self, backend):
        rng = random.Random(54)
        for _ in range(100):
            minterms, width = random_instance(rng, max_width=8)
            cubes = minimize_patterns(minterms, width, backend=backend)
            covered = set()
            for value, mask in cubes:
                members = set()
                sub = mask
                while True:
                    members.add(value | sub)
                    if sub == 0:
                        break
                    sub = (sub - 1) & mask
                assert members <= set(minterms)  # never outside the alert set
                assert not members & covered  # disjoint from earlier cubes
                covered |= members
            assert covered == set(minterms)


class TestDispatch:
    def test_wide_patterns_fall_back_to_python(self):
        minterms = [0, 1 << 40]
        cubes = minimize_patterns(minterms, 41)
        assert len(cubes) >= 1

    @needs_compiled
    def test_compiled_rejects_wide_patterns(self):
        with pytest.raises(ParameterError):
            minimize_patterns([0, 1], 41, backend="compiled")

    def test_unknown_backend(self):
        with pytest.raises(ParameterError):
            minimize_patterns([0, 1], 2, backend="nope")

    def test_env_override(self, monkeypatch):
        monkeypatch.setenv("PRIVZONE_KERNEL", "python")
        assert kernels.default_backend(4) == "python"
        monkeypatch.delenv("PRIVZONE_KERNEL")
        if HAS_COMPILED:
            assert kernels.default_backend(4) == "compiled"
        assert kernels.default_backend(100) == "python" or not HAS_COMPILED

    def test_select_cover_reexport(self):
        primes = prime_implicants([0, 1], 1, backend="python")
        assert select_cover(primes, [0, 1], 1, backend="python") == [(0, 1)]

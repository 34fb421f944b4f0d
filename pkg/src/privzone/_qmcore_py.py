"""Pure-Python minimization kernels.

Cubes are (value, mask) integer pairs over ``width`` bits: mask bits are
star positions, value bits are fixed (zero at star positions).  Bit k of
an integer corresponds to string position width-1-k.

The compiled twin in ``_qmcore`` implements the same two functions with
identical outputs for widths up to 32; parity is enforced by tests.
"""

from __future__ import annotations


def prime_implicants(minterms: list[int], width: int) -> list[tuple[int, int]]:
    """Maximal cubes lying entirely inside the minterm set.

    Iteratively merges same-mask cubes differing in exactly one non-star
    bit; cubes that never merge are prime.  Returned sorted by (value,
    mask).
    """
    full = (1 << width) - 1
    level = {(v, 0) for v in minterms}
    primes = []
    while level:
        used = set()
        nxt = set()
        for v, m in level:
            free = full & ~m
            while free:
                bit = free & -free
                free ^= bit
                if (v ^ bit, m) in level:
                    used.add((v, m))
                    nxt.add((v & ~bit, m | bit))
        primes.extend(c for c in level if c not in used)
        level = nxt
    primes.sort()
    return primes


def _cube_minterm_bits(value: int, mask: int, position: dict[int, int]) -> int:
    bits = 0
    sub = mask
    while True:
        bits |= 1 << position[value | sub]
        if sub == 0:
            return bits
        sub = (sub - 1) & mask


def select_cover(
    primes: list[tuple[int, int]], minterms: list[int], width: int
) -> list[tuple[int, int]]:
    """Greedy disjoint exact cover of the minterms by primes or singletons.

    Every selected cube lies inside the minterm set (no false positives)
    and is pattern-disjoint from the previously selected ones, so each
    index matches at most one emitted token.  Singleton cubes guarantee
    termination when no prime is disjoint from the current selection.
    Ties break on (fewest stars, value, mask) for determinism.
    """
    position = {v: i for i, v in enumerate(minterms)}
    candidates = sorted(set(primes) | {(v, 0) for v in minterms})
    coverage = [_cube_minterm_bits(v, m, position) for v, m in candidates]
    non_stars = [width - m.bit_count() for _, m in candidates]
    blocked = [False] * len(candidates)
    covered = 0
    everything = (1 << len(minterms)) - 1
    chosen = []
    while covered != everything:
        best = -1
        best_key = None
        for i, (v, m) in enumerate(candidates):
            if blocked[i]:
                continue
            new = (coverage[i] & ~covered).bit_count()
            if new == 0:
                continue
            key = (-new, non_stars[i], v, m)
            if best_key is None or key < best_key:
                best_key = key
                best = i
        bv, bm = candidates[best]
        chosen.append((bv, bm))
        covered |= coverage[best]
        for i, (v, m) in enumerate(candidates):
            # Patterns overlap unless some position is fixed differently.
            if not blocked[i] and not ((bv ^ v) & ~bm & ~m):
                blocked[i] = True
    return chosen

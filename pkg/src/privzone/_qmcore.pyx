# distutils: language = c++
# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled minimization kernels (widths up to 32 bits).

Same contract and same outputs as privzone._qmcore_py; cubes are packed
into 64-bit keys as (mask << 32) | value for hashing.
"""

from libc.stdint cimport uint64_t, int64_t
from libcpp.unordered_set cimport unordered_set
from libcpp.unordered_map cimport unordered_map
from libcpp.vector cimport vector
from libcpp.algorithm cimport sort as cpp_sort

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil


cdef inline uint64_t _pack(uint64_t value, uint64_t mask) nogil:
    return (mask << 32) | value


def prime_implicants(minterms, int width):
    """Maximal cubes inside the minterm set, sorted by (value, mask)."""
    if width > 32:
        raise ValueError("compiled kernel supports widths up to 32")
    cdef uint64_t full = (<uint64_t>1 << width) - 1
    cdef vector[uint64_t] level
    cdef unordered_set[uint64_t] level_set
    cdef unordered_set[uint64_t] used
    cdef unordered_set[uint64_t] nxt_set
    cdef vector[uint64_t] primes
    cdef uint64_t cube, v, m, free, bit, partner
    cdef size_t i

    for value in minterms:
        level.push_back(_pack(<uint64_t>value, 0))

    while level.size() > 0:
        level_set.clear()
        used.clear()
        nxt_set.clear()
        for i in range(level.size()):
            level_set.insert(level[i])
        for i in range(level.size()):
            cube = level[i]
            v = cube & <uint64_t>0xffffffff
            m = cube >> 32
            free = full & ~m
            while free:
                bit = free & (~free + 1)
                free ^= bit
                partner = _pack(v ^ bit, m)
                if level_set.count(partner):
                    used.insert(cube)
                    nxt_set.insert(_pack(v & ~bit, m | bit))
        for i in range(level.size()):
            cube = level[i]
            if used.count(cube) == 0:
                primes.push_back(cube)
        level.assign(nxt_set.begin(), nxt_set.end())

    # Sort by (value, mask) to match the pure-Python ordering.
    cdef vector[uint64_t] order
    for i in range(primes.size()):
        cube = primes[i]
        order.push_back(((cube & <uint64_t>0xffffffff) << 32) | (cube >> 32))
    cpp_sort(order.begin(), order.end())
    out = []
    for i in range(order.size()):
        out.append((int(order[i] >> 32), int(order[i] & <uint64_t>0xffffffff)))
    return out


def select_cover(primes, minterms, int width):
    """Greedy disjoint exact cover; mirrors _qmcore_py.select_cover."""
    if width > 32:
        raise ValueError("compiled kernel supports widths up to 32")
    cdef int n_min = len(minterms)
    cdef unordered_map[uint64_t, int] position
    cdef int i, j
    for i in range(n_min):
        position[<uint64_t>minterms[i]] = i

    # Candidates: primes plus singleton cubes, dedup, sorted by (value, mask).
    cdef unordered_set[uint64_t] cand_set
    cdef vector[uint64_t] order
    cdef uint64_t key, v, m
    for value, mask in primes:
        key = (<uint64_t>value << 32) | <uint64_t>mask
        if cand_set.count(key) == 0:
            cand_set.insert(key)
            order.push_back(key)
    for value in minterms:
        key = <uint64_t>value << 32
        if cand_set.count(key) == 0:
            cand_set.insert(key)
            order.push_back(key)
    cpp_sort(order.begin(), order.end())

    cdef int n_cand = <int>order.size()
    cdef int n_words = (n_min + 63) // 64
    cdef vector[uint64_t] coverage
    coverage.resize(<size_t>n_cand * n_words, 0)
    cdef vector[int] non_stars
    non_stars.resize(n_cand)
    cdef vector[uint64_t] values
    cdef vector[uint64_t] masks
    values.resize(n_cand)
    masks.resize(n_cand)
    cdef uint64_t sub
    cdef int idx
    for i in range(n_cand):
        v = order[i] >> 32
        m = order[i] & <uint64_t>0xffffffff
        values[i] = v
        masks[i] = m
        non_stars[i] = width - __builtin_popcountll(m)
        sub = m
        while True:
            idx = position[v | sub]
            coverage[<size_t>i * n_words + (idx >> 6)] |= <uint64_t>1 << (idx & 63)
            if sub == 0:
                break
            sub = (sub - 1) & m

    cdef vector[uint64_t] covered
    covered.resize(n_words, 0)
    cdef vector[char] blocked
    blocked.resize(n_cand, 0)

    cdef int n_covered = 0
    cdef int best, new, best_new, best_ns
    cdef uint64_t best_v, best_m
    chosen = []
    while n_covered < n_min:
        best = -1
        best_new = 0
        best_ns = 0
        best_v = 0
        best_m = 0
        for i in range(n_cand):
            if blocked[i]:
                continue
            new = 0
            for j in range(n_words):
                new += __builtin_popcountll(coverage[<size_t>i * n_words + j] & ~covered[j])
            if new == 0:
                continue
            # key = (-new, non_stars, value, mask); keep the smallest.
            if (
                best < 0
                or new > best_new
                or (new == best_new and (
                    non_stars[i] < best_ns
                    or (non_stars[i] == best_ns and (
                        values[i] < best_v
                        or (values[i] == best_v and masks[i] < best_m)))))
            ):
                best = i
                best_new = new
                best_ns = non_stars[i]
                best_v = values[i]
                best_m = masks[i]
        chosen.append((int(values[best]), int(masks[best])))
        for j in range(n_words):
            covered[j] |= coverage[<size_t>best * n_words + j]
        n_covered += best_new
        for i in range(n_cand):
            if not blocked[i] and ((best_v ^ values[i]) & ~best_m & ~masks[i]) == 0:
                blocked[i] = 1
    return chosen

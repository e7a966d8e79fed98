"""The generator is pinned against an independent re-implementation of the
published splitmix64 + xoshiro256** algorithms, written here in a different
style from the library's version."""

from fractions import Fraction

import pytest

from faqrank.sampling import Xoshiro256StarStar, largest_remainder

M64 = 2**64


def _reference_stream(seed, count):
    # splitmix64 seeding
    state = []
    x = seed % M64
    for _ in range(4):
        x = (x + 0x9E3779B97F4A7C15) % M64
        z = x
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) % M64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) % M64
        state.append(z ^ (z >> 31))
    s0, s1, s2, s3 = state

    def rot(v, k):
        return ((v << k) % M64) | (v >> (64 - k))

    out = []
    for _ in range(count):
        out.append((rot((s1 * 5) % M64, 7) * 9) % M64)
        t = (s1 << 17) % M64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = rot(s3, 45)
    return out


@pytest.mark.parametrize("seed", [0, 1, 42, 2**63, 2**64 - 1, 123456789])
def test_xoshiro_matches_reference_algorithm(seed):
    rng = Xoshiro256StarStar(seed)
    assert [rng.next_u64() for _ in range(500)] == _reference_stream(seed, 500)


def test_outputs_in_64_bit_range():
    rng = Xoshiro256StarStar(7)
    for _ in range(1000):
        assert 0 <= rng.next_u64() < M64


def test_randbelow_bounds_and_determinism():
    a = Xoshiro256StarStar(99)
    b = Xoshiro256StarStar(99)
    for n in (1, 2, 7, 10, 1000, 2**40):
        va = [a.randbelow(n) for _ in range(50)]
        vb = [b.randbelow(n) for _ in range(50)]
        assert va == vb
        assert all(0 <= v < n for v in va)


def test_shuffle_is_a_permutation_and_seed_stable():
    items = list(range(100))
    first = list(items)
    Xoshiro256StarStar(5).shuffle(first)
    second = list(items)
    Xoshiro256StarStar(5).shuffle(second)
    assert first == second
    assert sorted(first) == items
    third = list(items)
    Xoshiro256StarStar(6).shuffle(third)
    assert sorted(third) == items


def test_sample_without_replacement():
    rng = Xoshiro256StarStar(11)
    picked = rng.sample(list(range(30)), 12)
    assert len(picked) == 12
    assert len(set(picked)) == 12
    assert all(0 <= v < 30 for v in picked)
    with pytest.raises(ValueError):
        rng.sample([1, 2], 3)


def _apportion_oracle(total, weights):
    """Brute largest-remainder in exact arithmetic, computed independently."""
    s = sum(Fraction(w) for w in weights)
    shares = [Fraction(total) * Fraction(w) / s for w in weights]
    floors = [int(x) for x in shares]
    rem = total - sum(floors)
    order = sorted(range(len(weights)), key=lambda i: (floors[i] - shares[i], i))
    for i in order[:rem]:
        floors[i] += 1
    return floors


def test_largest_remainder_examples():
    assert largest_remainder(1200, (7, 1, 2)) == [840, 120, 240]
    assert largest_remainder(10, (1, 0, 0)) == [10, 0, 0]
    assert largest_remainder(100, (1, 3, 6)) == [10, 30, 60]


def test_largest_remainder_matches_oracle():
    import random

    gen = random.Random(2024)
    for _ in range(300):
        k = gen.randint(1, 6)
        weights = [gen.randint(0, 9) for _ in range(k)]
        if sum(weights) == 0:
            weights[gen.randrange(k)] = 1
        total = gen.randint(0, 500)
        got = largest_remainder(total, weights)
        assert got == _apportion_oracle(total, weights)
        assert sum(got) == total


def test_largest_remainder_rejects_bad_input():
    with pytest.raises(ValueError):
        largest_remainder(10, ())
    with pytest.raises(ValueError):
        largest_remainder(10, (0, 0))
    with pytest.raises(ValueError):
        largest_remainder(10, (-1, 2))

import math
import random

import pytest

from choicedict.carray import CAryArray


def fuzz_against_list(spec, b, nops, seed, check_every=1):
    """Random writes mirrored into a plain list, reads compared."""
    arr = CAryArray(spec, b=b)
    n = arr.n
    bases = []
    for c, cnt in spec:
        bases.extend([c] * cnt)
    model = [0] * n
    rng = random.Random(seed)
    for step in range(nops):
        i = rng.randrange(n)
        if rng.random() < 0.6:
            v = rng.randrange(bases[i])
            arr.write(i, v)
            model[i] = v
        else:
            assert arr.read(i) == model[i]
        if check_every and step % check_every == 0:
            j = rng.randrange(n)
            assert arr.read(j) == model[j]
    return arr, model


BASES = [2, 3, 5, 6, 10, 257]


@pytest.mark.parametrize("c", BASES)
def test_single_base_matches_plain_list(c):
    arr, model = fuzz_against_list([(c, 3000)], b=8, nops=40000, seed=c)
    for i in range(0, 3000, 7):
        assert arr.read(i) == model[i]


@pytest.mark.parametrize("c", BASES)
def test_tiny_chunks_full_compare(c):
    # b=2 forces many short chunks, single-leaf trees, and ragged tails
    n = 25
    arr = CAryArray([(c, n)], b=2)
    model = [0] * n
    rng = random.Random(1000 + c)
    for _ in range(1500):
        i = rng.randrange(n)
        v = rng.randrange(c)
        arr.write(i, v)
        model[i] = v
        assert [arr.read(j) for j in range(n)] == model


def test_mixed_runs_match_plain_list():
    spec = [(3, 1000), (1, 500), (257, 800), (2, 1200), (3, 700)]
    arr, model = fuzz_against_list(spec, b=8, nops=60000, seed=42)
    n = arr.n
    for i in range(0, n, 11):
        assert arr.read(i) == model[i]


def test_deep_tree_with_ragged_levels():
    # chunk of 4096 digits at base 3 gives an eight-level tree whose node
    # counts 228, 114, 57, 29, 15, 8, 4, 2, 1 hit both ragged cases
    fuzz_against_list([(3, 1 << 14)], b=12, nops=30000, seed=7)


def test_chunk_boundary_writes_leave_neighbours_alone():
    c, n, b = 5, 2100, 8
    arr = CAryArray([(c, n)], b=b)
    model = [0] * n
    rng = random.Random(99)
    spots = []
    for edge in range(0, n, 1 << b):
        spots.extend(x for x in (edge - 1, edge, edge + 1) if 0 <= x < n)
    for _ in range(4000):
        i = rng.choice(spots)
        v = rng.randrange(c)
        arr.write(i, v)
        model[i] = v
        for j in (i - 2, i - 1, i, i + 1, i + 2, rng.randrange(n)):
            if 0 <= j < n:
                assert arr.read(j) == model[j]


def test_base_one_run_stores_nothing():
    arr = CAryArray([(1, 1000)])
    assert arr.bits_used <= 64
    assert arr.read(0) == 0 and arr.read(999) == 0
    arr.write(500, 0)
    assert arr.read(500) == 0
    with pytest.raises(ValueError):
        arr.write(500, 1)


def test_base_two_run_costs_a_bit_array():
    n = 10**5
    arr = CAryArray([(2, n)], b=12)
    # every split domain is a power of two, so the payload is exactly n bits
    assert arr.bits_used <= n + 64


def test_entropy_bound_base_three_at_scale():
    n = 10**5
    b = 16
    arr = CAryArray([(3, n)], b=b)
    slack = 64 * (n / 2**b + math.log2(n) + 1)
    assert arr.bits_used <= n * math.log2(3) + slack
    assert arr.table_bits <= 64 * 1024


def test_entropy_bound_mixed_runs():
    spec = [(3, 40000), (10, 30000), (257, 20000), (2, 10000)]
    b = 10
    arr = CAryArray(spec, b=b)
    n = arr.n
    entropy = sum(cnt * math.log2(c) for c, cnt in spec)
    slack = 64 * (n / 2**b + math.log2(n) + 1)
    assert arr.bits_used <= entropy + slack


def test_huge_base_single_digit_leaves():
    # base above n**2 packs one digit per leaf
    arr, model = fuzz_against_list([(1 << 40, 600)], b=6, nops=6000, seed=3)
    assert arr.bits_used <= 600 * 40 + 64 * (600 / 64 + 11)


def test_fresh_array_reads_zero_everywhere():
    arr = CAryArray([(7, 500)], b=5)
    assert all(arr.read(i) == 0 for i in range(500))


def test_rejects_bad_shapes():
    with pytest.raises(ValueError):
        CAryArray([])
    with pytest.raises(ValueError):
        CAryArray([(0, 5)])
    with pytest.raises(ValueError):
        CAryArray([(3, 0)])
    with pytest.raises(TypeError):
        CAryArray([(3.0, 5)])
    with pytest.raises(ValueError):
        CAryArray([(3, 5)], b=0)
    with pytest.raises(ValueError):
        CAryArray([(3, 5)], b=31)
    arr = CAryArray([(3, 5)])
    with pytest.raises(IndexError):
        arr.read(5)
    with pytest.raises(IndexError):
        arr.write(-1, 0)
    with pytest.raises(ValueError):
        arr.write(0, 3)


def test_len_and_defaults():
    arr = CAryArray([(3, 5), (4, 2)])
    assert len(arr) == 7
    assert CAryArray([(2, 1)]).b == 1

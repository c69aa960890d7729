import random
from array import array

import pytest

from choicedict.lazyinit import InitFreeArray, LazyAllocator, interleave_layout
from choicedict.wordops import PackedVector


def garbage_limbs(nwords, seed):
    rng = random.Random(seed)
    return array("Q", [rng.randrange(1 << 64) for _ in range(nwords)])


def garbage_for(n, seed):
    f = max(1, (n - 1).bit_length())
    nwords = (n * f + 63) >> 6
    return garbage_limbs(nwords, seed), garbage_limbs(nwords, seed + 1)


@pytest.mark.parametrize("n", [1, 2, 3, 64, 65, 1000])
@pytest.mark.parametrize("seed", [0, 1, 0xDEAD])
def test_allocator_on_garbage(n, seed):
    g, ginv = garbage_for(n, seed)
    alloc = LazyAllocator(n, backing_g=g, backing_ginv=ginv)
    model = {}
    rng = random.Random(seed * 31 + n)
    for _ in range(600):
        ell = rng.randrange(1, n + 1)
        if rng.random() < 0.5:
            got = alloc.allocate(ell)
            if ell not in model:
                model[ell] = len(model) + 1
            assert got == model[ell]
        assert alloc.g_lookup(ell) == model.get(ell, 0)
    # values are distinct and fill a prefix of {1..n}
    vals = sorted(model.values())
    assert vals == list(range(1, len(model) + 1))


def test_allocator_space_bound():
    for n in (1, 2, 100, 10**4):
        alloc = LazyAllocator(n)
        logn = max(1, (n - 1).bit_length())
        assert alloc.bits_used <= 2 * (((n * logn + 63) >> 6) << 6) + 64


def test_allocator_fresh_is_zero_function():
    alloc = LazyAllocator(17)
    assert all(alloc.g_lookup(ell) == 0 for ell in range(1, 18))


@pytest.mark.parametrize("cell_bits", [1, 3, 7, 13, 20, 64])
@pytest.mark.parametrize("default_kind", ["zero", "const", "affine"])
def test_init_free_array_on_garbage(cell_bits, default_kind):
    n = 150
    mask = (1 << cell_bits) - 1
    if default_kind == "zero":
        default = None
        rule = lambda i: 0
    elif default_kind == "const":
        rule = lambda i: 5 & mask
        default = rule
    else:
        rule = lambda i: (3 * i + 1) & mask
        default = rule
    nwords = (n * cell_bits + 63) >> 6
    arr = InitFreeArray(
        n,
        cell_bits,
        default=default,
        backing=garbage_limbs(nwords, 0xAB),
        track_backing=(
            garbage_limbs((max(1, nwords) * max(1, (max(1, nwords) - 1).bit_length()) + 63) >> 6, 1),
            garbage_limbs((max(1, nwords) * max(1, (max(1, nwords) - 1).bit_length()) + 63) >> 6, 2),
        ),
    )
    model = {}
    rng = random.Random(cell_bits * 977 + len(default_kind))
    for _ in range(1500):
        i = rng.randrange(n)
        if rng.random() < 0.5:
            v = rng.choice([0, rule(i), mask, rng.randrange(mask + 1)])
            arr.arr_write(i, v)
            model[i] = v
        j = rng.randrange(n)
        assert arr.arr_read(j) == model.get(j, rule(j))


def test_init_free_array_write_then_default_value_roundtrip():
    arr = InitFreeArray(10, 8, default=lambda i: 42)
    assert arr.arr_read(3) == 42
    arr.arr_write(3, 0)
    assert arr.arr_read(3) == 0
    arr.arr_write(3, 42)
    assert arr.arr_read(3) == 42


def test_interleave_layout_round_robin_example():
    lay = interleave_layout(2, [10 * 64, 3 * 64])
    assert lay.regime == "round_robin"
    assert [lay.addr(1, j) for j in range(4)] == [0, 2, 4, 6]
    assert [lay.addr(2, j) for j in range(4)] == [1, 3, 5, 7]
    assert lay.total_words == 20


def test_interleave_layout_packed_regime():
    lay = interleave_layout(3, [5, 9, 2])
    assert lay.regime == "packed"
    # header of 16 + 3 bits, then payloads in stream order
    assert lay.bit_addr(1, 0) == 19
    assert lay.bit_addr(2, 0) == 24
    assert lay.bit_addr(3, 1) == 34
    assert lay.total_words == 1


def test_interleave_layout_space_bound():
    # round-robin occupies at most k * max-stream words
    for k, sizes in [(2, [640, 192]), (4, [64, 64, 64, 6400]), (3, [100, 200, 300])]:
        lay = interleave_layout(k, sizes)
        if lay.regime == "round_robin":
            assert lay.total_words == k * max((s + 63) >> 6 for s in sizes)


def test_interleave_layout_disjoint_addresses():
    lay = interleave_layout(3, [640, 640, 640])
    seen = set()
    for i in (1, 2, 3):
        for j in range(10):
            a = lay.addr(i, j)
            assert a not in seen
            seen.add(a)
    assert max(seen) < lay.total_words

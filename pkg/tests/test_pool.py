import math
import random
from collections import Counter

import pytest

from choicedict.pool import (
    DeltaCode,
    Pool,
    SortedStack,
    _BitString,
    decode_backward,
    decode_bidir_back,
    decode_bidir_fwd,
    encode_backward,
    encode_bidir,
)


def test_backward_code_roundtrip():
    rng = random.Random(11)
    ds = [0, 1, 2, 3, 7, 8, 63, 64, 1023, (1 << 40) + 17]
    ds += [rng.randrange(1 << rng.randrange(1, 50)) for _ in range(3000)]
    bs = _BitString()
    ends = []
    for d in ds:
        v, w = encode_backward(d)
        assert w == DeltaCode.cost_backward(d)
        bs.append(v, w)
        ends.append(bs.nbits)
    for d, end in zip(reversed(ds), reversed(ends)):
        got, start = decode_backward(bs, end)
        assert got == d
        assert end - start == DeltaCode.cost_backward(d)


def test_bidirectional_code_decodes_from_both_ends():
    rng = random.Random(12)
    ds = [0, 1, 5, 100, (1 << 33) - 1]
    ds += [rng.randrange(1 << rng.randrange(1, 40)) for _ in range(2000)]
    bs = _BitString()
    bounds = []
    for d in ds:
        v, w = encode_bidir(d)
        assert w == DeltaCode.cost_bidir(d)
        start = bs.nbits
        bs.append(v, w)
        bounds.append((start, bs.nbits))
    for d, (start, end) in zip(ds, bounds):
        fd, fe = decode_bidir_fwd(bs, start)
        bd, bstart = decode_bidir_back(bs, end)
        assert fd == d and fe == end
        assert bd == d and bstart == start


def test_sorted_stack_push_pop_discipline():
    st = SortedStack(100)
    assert st.pop() == 0
    assert st.sorted_push(5)
    assert st.sorted_push(5)
    assert not st.sorted_push(4)
    assert st.sorted_push(90)
    assert st.top == 90
    assert len(st) == 3
    assert st.pop() == 90
    assert st.pop() == 5
    assert st.pop() == 5
    assert st.pop() == 0
    assert st.top == 0
    with pytest.raises(ValueError):
        st.sorted_push(0)
    with pytest.raises(ValueError):
        st.sorted_push(101)


@pytest.mark.parametrize("n,nops,seed", [(7, 4000, 3), (10**6, 20000, 4)])
def test_sorted_stack_matches_list_oracle(n, nops, seed):
    rng = random.Random(seed)
    st = SortedStack(n)
    ref = []
    for _ in range(nops):
        if rng.random() < 0.6:
            x = rng.randint(1, n)
            pushed = st.sorted_push(x)
            if not ref or x >= ref[-1]:
                assert pushed
                ref.append(x)
            else:
                assert not pushed
        else:
            assert st.pop() == (ref.pop() if ref else 0)
        assert len(st) == len(ref)
        assert st.top == (ref[-1] if ref else 0)


@pytest.mark.parametrize("n,m,seed", [(1 << 20, 1, 0), (1 << 20, 1000, 1),
                                      (2 * 10**4, 10**4, 2)])
def test_sorted_stack_space_bound(n, m, seed):
    rng = random.Random(seed)
    st = SortedStack(n)
    for x in sorted(rng.randint(1, n) for _ in range(m)):
        assert st.sorted_push(x)
    q = (n - 1) / (m + 1)
    bound = m * math.log2(q + 1)
    bound += 16 * (m * math.log2(math.log2(q + 4) + 2) + math.log2(n) + 1)
    assert st.bits_used <= bound


def drive_pool(pool, shadow, rng, nops, p_insert, lo=None, hi=None):
    lo = 1 if lo is None else lo
    hi = pool.n if hi is None else hi
    for _ in range(nops):
        if rng.random() < p_insert or not shadow:
            x = rng.randint(lo, hi)
            pool.insert(x)
            shadow[x] += 1
        else:
            v = pool.extract_choice()
            assert shadow[v] > 0, "extracted an element that was not stored"
            shadow[v] -= 1
            if not shadow[v]:
                del shadow[v]
        assert pool.total() == sum(shadow.values())


def drain(pool):
    while pool.merge_step():
        pass


@pytest.mark.parametrize("n,nops,seed", [(16, 40000, 5), (1000, 40000, 6)])
def test_pool_multiset_shadow_fuzz(n, nops, seed):
    rng = random.Random(seed)
    pool = Pool(n)
    shadow = Counter()
    for chunk in range(4):
        drive_pool(pool, shadow, rng, nops // 4, 0.55)
        drain(pool)
        assert pool._dump() == sorted(shadow.elements())
    assert pool.deadline_misses == 0


def test_pool_large_universe_fuzz():
    rng = random.Random(7)
    pool = Pool(10**6)
    shadow = Counter()
    drive_pool(pool, shadow, rng, 12000, 0.8)
    drive_pool(pool, shadow, rng, 18000, 0.5)
    drain(pool)
    assert pool._dump() == sorted(shadow.elements())
    assert pool.deadline_misses == 0


def test_pool_choice_peeks_next_extraction():
    rng = random.Random(8)
    pool = Pool(4096)
    shadow = Counter()
    assert pool.choice() == 0
    for _ in range(300):
        drive_pool(pool, shadow, rng, 7, 0.6)
        c = pool.choice()
        v = pool.extract_choice()
        assert c == v
        if v:
            shadow[v] -= 1
            if not shadow[v]:
                del shadow[v]


@pytest.mark.parametrize("seed", range(4))
def test_pool_merge_instances_decode_sorted_union(seed):
    rng = random.Random(100 + seed)
    for _ in range(50):
        n = rng.choice([64, 1000, 1 << 20])
        pool = Pool(n)
        vals = [rng.randint(1, n) for _ in range(rng.randint(1, 400))]
        for v in vals:
            pool.insert(v)
        drain(pool)
        assert pool._dump() == sorted(vals)
        assert pool.deadline_misses == 0


@pytest.mark.parametrize("m", [10, 100, 1000])
def test_pool_space_curve(m):
    n = 10**6
    rng = random.Random(m)
    pool = Pool(n)
    for _ in range(m):
        pool.insert(rng.randint(1, n))
    for _ in range(3000):
        pool.insert(rng.randint(1, n))
        pool.extract_choice()
    drain(pool)
    assert pool.total() == m
    bound = 16 * m * math.log2(2 + n / (m + 1)) + 1024
    assert pool.bits_used <= bound
    assert pool.deadline_misses == 0


def test_pool_iteration_enumerates_snapshot_exactly():
    pool = Pool(64)
    vals = [3, 1, 4, 1, 5, 9, 2, 6]
    for v in vals:
        pool.insert(v)
    assert not pool.iter_more()
    assert pool.iter_next() == 0
    pool.iter_init()
    seen = []
    while pool.iter_more():
        seen.append(pool.iter_next())
    assert sorted(seen) == sorted(vals)
    assert pool.iter_next() == 0
    assert pool.total() == len(vals)


def test_pool_iteration_survives_reorganization():
    rng = random.Random(9)
    pool = Pool(1024)
    vals = [rng.randint(1, 1024) for _ in range(200)]
    for v in vals:
        pool.insert(v)
    drain(pool)
    pool.iter_init()
    seen = [pool.iter_next() for _ in range(20)]
    for _ in range(400):
        pool.insert(rng.randint(1, 1024))
    while pool.iter_more():
        seen.append(pool.iter_next())
    assert sorted(seen) == sorted(vals)
    assert pool.total() == 600
    assert pool.deadline_misses == 0


@pytest.mark.parametrize("n,nops,seed", [(16, 15000, 10), (1000, 15000, 11)])
def test_pool_robust_iteration_audit(n, nops, seed):
    rng = random.Random(seed)
    pool = Pool(n)
    shadow = Counter()
    snap = Counter()
    enumerated = Counter()
    extracted = Counter()
    iterating = False

    def finish_check():
        for x in snap:
            assert enumerated[x] <= snap[x]
            assert enumerated[x] >= snap[x] - extracted[x]
        for x in enumerated:
            assert enumerated[x] <= snap[x]

    for _ in range(nops):
        r = rng.random()
        if r < 0.40:
            x = rng.randint(1, n)
            pool.insert(x)
            shadow[x] += 1
        elif r < 0.70:
            v = pool.extract_choice()
            if v:
                assert shadow[v] > 0
                shadow[v] -= 1
                if iterating:
                    extracted[v] += 1
        elif r < 0.95:
            if iterating and pool.iter_more():
                v = pool.iter_next()
                assert shadow[v] > 0, "enumerated element is not present"
                enumerated[v] += 1
                assert enumerated[v] <= snap[v]
            elif iterating:
                finish_check()
                iterating = False
        else:
            pool.iter_init()
            snap = Counter(shadow)
            enumerated = Counter()
            extracted = Counter()
            iterating = True
    if iterating:
        while pool.iter_more():
            v = pool.iter_next()
            assert shadow[v] > 0
            enumerated[v] += 1
        finish_check()
    assert pool.deadline_misses == 0


def test_pool_run_copy_tables_agree_with_direct_merge():
    rng = random.Random(13)
    fast = Pool(1000, chunk_bits=16)
    fast.build_tables_now()
    slow = Pool(1000)
    shadow = Counter()
    for wave in range(3):
        for _ in range(400):
            x = rng.randint(1, 60)
            fast.insert(x)
            slow.insert(x)
            shadow[x] += 1
        drain(fast)
        drain(slow)
        assert fast._dump() == slow._dump() == sorted(shadow.elements())
    assert fast.table_hits > 0
    assert slow.table_hits == 0
    assert fast.deadline_misses == slow.deadline_misses == 0


def test_pool_space_returns_after_churn():
    rng = random.Random(14)
    pool = Pool(10**6)
    for _ in range(5000):
        pool.insert(rng.randint(1, 10**6))
    while pool.total():
        pool.extract_choice()
    drain(pool)
    assert pool.extract_choice() == 0
    assert pool.bits_used <= 4096


def test_pool_rejects_bad_arguments():
    with pytest.raises(ValueError):
        Pool(0)
    with pytest.raises(ValueError):
        Pool(10, merge_parcels=0)
    pool = Pool(10)
    with pytest.raises(ValueError):
        pool.insert(0)
    with pytest.raises(ValueError):
        pool.insert(11)
    with pytest.raises(ValueError):
        pool.build_tables_now()
    assert pool.extract_choice() == 0
    assert not pool.merge_step()
    assert len(pool) == 0
    assert pool.empty


def test_pool_tiny_universe_exercises_switches():
    rng = random.Random(15)
    pool = Pool(1)
    shadow = 0
    for _ in range(5000):
        if rng.random() < 0.5:
            pool.insert(1)
            shadow += 1
        else:
            got = pool.extract_choice()
            assert got == (1 if shadow else 0)
            shadow = max(0, shadow - 1)
    drain(pool)
    assert pool.total() == shadow
    assert pool._dump() == [1] * shadow

import random

import pytest

from choicedict.atomic import AtomicColorDict
from choicedict.nonsys import CompactChoiceDict, LeafDict, TreeDict, _Geometry
from choicedict.oracles import minimize, random_trace, replay_compare

PALETTES = [(2, 1), (2, 2), (4, 1), (4, 2), (8, 1)]


# -- record geometry ----------------------------------------------------

def test_geometry_invariants():
    for c, t in PALETTES:
        g = _Geometry.get(c, t)
        assert g.W == 2 * g.d * c * c * g.f * t
        assert g.wp * g.f == g.W
        assert g.ngroups * g.gdigits == g.wp
        assert g.paybits == c * g.d * t
        # markers and spares never collide with each other or the packed
        # chunk payload
        spare_all = 0
        for pos in g.spare_pos:
            assert not (spare_all >> pos) & 1
            spare_all |= 1 << pos
        assert spare_all & g.mark_all == 0
        assert (spare_all | g.mark_all) & g.chunk_pack == 0


def test_parallel_division_by_multiplication():
    # every chunk field is divided at once; products straddle three
    # fields, so correctness over the full digit range matters
    for c, t in ((4, 2), (8, 1)):
        g = _Geometry.get(c, t)
        lim = g.q ** c
        rng = random.Random(c * 7 + t)
        if lim <= 128:
            samples = range(lim)
        else:
            samples = [rng.randrange(lim) for _ in range(4000)]
        for a in samples:
            spot = rng.randrange(g.nchunk)
            x = a << (spot * g.chunk)
            for i in range(g.nchunk):
                if i != spot:
                    x |= rng.randrange(lim) << (i * g.chunk)
            out = g._div_all(x)
            got = (out >> (spot * g.chunk)) & ((1 << g.packw) - 1)
            assert got == a // g.q


def random_word_missing(g, gap, rng):
    """A standard record whose digits avoid color `gap`."""
    w = 0
    for m in range(1, g.wp + 1):
        j = rng.randrange(g.c - 1)
        if j >= gap:
            j += 1
        if rng.random() < 0.35:
            j = 0 if gap != 0 else (1 if gap != 1 else 2)
        w = g.std_setcolor(w, j, m)
    return w


@pytest.mark.parametrize("c,t", PALETTES)
def test_gap_roundtrip(c, t):
    g = _Geometry.get(c, t)
    rng = random.Random(c * 13 + t)
    for _ in range(250):
        gap = rng.randrange(c)
        w = random_word_missing(g, gap, rng)
        enc = g.encode_gap(w, gap)
        assert g.decode_gap(enc, gap) == w
        # reads agree without decoding
        for _ in range(8):
            m = rng.randrange(1, g.wp + 1)
            assert g.gap_color(enc, gap, m) == g.std_color(w, m)


@pytest.mark.parametrize("c,t", PALETTES)
def test_gap_form_markers_track_presence(c, t):
    g = _Geometry.get(c, t)
    rng = random.Random(c * 17 + t)
    for _ in range(150):
        gap = rng.randrange(c)
        w = random_word_missing(g, gap, rng)
        rec = LeafDict(c, t, word=w)
        want = rec.presence()
        rec.to_gap(gap)
        assert rec.presence() == want
        rec.to_standard()
        assert rec.word == w


def test_all_zero_record_codes_around_any_absent_color():
    for c, t in PALETTES:
        g = _Geometry.get(c, t)
        for gap in range(1, c):
            enc = g.encode_gap(0, gap)
            assert g.decode_gap(enc, gap) == 0
            for m in (1, g.wp // 2, g.wp):
                assert g.gap_color(enc, gap, m) == 0


def test_spare_bits_survive_payload_writes():
    for c, t in PALETTES:
        g = _Geometry.get(c, t)
        rng = random.Random(c + t)
        gap = c - 1
        w = random_word_missing(g, gap, rng)
        rec = LeafDict(c, t, word=w)
        rec.to_gap(gap)
        pay = rng.getrandbits(g.paybits)
        rec.spare = pay
        for _ in range(40):
            m = rng.randrange(1, g.wp + 1)
            j = rng.randrange(c - 1)
            if j >= gap:
                j += 1
            rec.setcolor(j, m)
            assert rec.spare == pay
        rec.spare = 0
        rec.to_standard()
        for m in range(1, g.wp + 1):
            assert rec.color(m) in set(range(c)) - {gap}


def test_writing_the_coded_out_color_is_rejected():
    rec = LeafDict(4, 1)
    rec.to_gap(2)
    with pytest.raises(ValueError):
        rec.setcolor(2, 1)
    rec.to_standard()
    rec.setcolor(2, 1)
    assert rec.color(1) == 2


@pytest.mark.parametrize("c,t", PALETTES)
def test_gap_successor_matches_scan(c, t):
    g = _Geometry.get(c, t)
    rng = random.Random(c * 29 + t)
    for _ in range(60):
        gap = rng.randrange(c)
        w = random_word_missing(g, gap, rng)
        enc = g.encode_gap(w, gap)
        cols = [g.std_color(w, m) for m in range(1, g.wp + 1)]
        for j in range(c):
            for m in (0, 1, g.wp // 3, g.wp - 1, g.wp):
                want = 0
                for l in range(m + 1, g.wp + 1):
                    if cols[l - 1] == j:
                        want = l
                        break
                assert g.gap_successor(enc, gap, j, m) == want


@pytest.mark.parametrize("c,t", [(2, 1), (4, 1), (8, 1)])
def test_leaf_record_matches_flat_dictionary(c, t):
    g = _Geometry.get(c, t)
    rec = LeafDict(c, t)
    ref = AtomicColorDict(g.wp, c)
    rng = random.Random(c * 31)
    gapped = False
    for _ in range(1500):
        m = rng.randrange(1, g.wp + 1)
        j = rng.randrange(c)
        if gapped and j == rec.gap:
            # the coded-out color must be restored before writing it
            rec.to_standard()
            gapped = False
        rec.setcolor(j, m)
        ref.setcolor(j, m)
        assert rec.color(m) == j
        if rng.random() < 0.05:
            pres = rec.presence()
            if gapped:
                rec.to_standard()
                gapped = False
            elif pres.bit_count() < c:
                absent = next(x for x in range(c) if not (pres >> x) & 1)
                rec.to_gap(absent)
                gapped = True
        if rng.random() < 0.1:
            m2 = rng.randrange(0, g.wp + 1)
            j2 = rng.randrange(c)
            assert rec.successor(j2, m2) == ref.successor(j2, m2)
    for m in range(1, g.wp + 1):
        assert rec.color(m) == ref.color(m)


# -- one tree -----------------------------------------------------------

def tree_audit(td, ref, n):
    for l in range(1, n + 1):
        assert td.color(l) == ref[l - 1], l
    c = td.g.c
    for j in range(c):
        for l0 in (0, 1, n // 2, n - 1, n):
            want = 0
            for l in range(l0 + 1, n + 1):
                if ref[l - 1] == j:
                    want = l
                    break
            assert td.successor(j, l0) == want, (j, l0)
        got = td.choice(j)
        if got:
            assert ref[got - 1] == j
        else:
            assert j not in ref
        assert td.has_color(j) == (j in ref)


def run_tree_fuzz(c, t, nl, seed, ops, flip=False, audit_every=97):
    g = _Geometry.get(c, t)
    rng = random.Random(seed)
    td = TreeDict(g, n_leaves=nl, scribble=rng)
    n = td.universe_size
    base_bits = td.bits_used
    ref = [0] * n
    hot = [rng.randrange(1, n + 1) for _ in range(max(2, n // 50))]
    for op in range(ops):
        bias = 0.8 if flip else 0.6
        l = rng.choice(hot) if rng.random() < bias else rng.randrange(1, n + 1)
        j = rng.randrange(c)
        if td.color(l) == j:
            j = (j + 1) % c
        td.setcolor(j, l)
        ref[l - 1] = j
        assert td.color(l) == j, (op, l, j)
        if op % audit_every == 0:
            tree_audit(td, ref, n)
    tree_audit(td, ref, n)
    assert td.bits_used == base_bits


TREE_CONFIGS = [
    (2, 2, None, 3000, False),
    (4, 2, None, 3000, False),
    (8, 1, None, 2500, False),
    (2, 1, None, 2500, False),
    (4, 1, None, 2500, False),
]


@pytest.mark.parametrize("c,t,nl,ops,flip", TREE_CONFIGS)
def test_tree_matches_shadow(c, t, nl, ops, flip):
    run_tree_fuzz(c, t, nl, seed=c * 100 + t * 7, ops=ops, flip=flip)


FLIP_CONFIGS = [
    # hammering few positions drives records through the present-to-
    # absent and absent-to-everything transitions, where path heads can
    # appear or vanish away from the updated leaf
    (2, 2, None, 3000),
    (2, 2, 61, 2500),
    (2, 1, 15, 2500),
    (2, 2, 9, 2500),
    (4, 2, 3, 2000),
]


@pytest.mark.parametrize("c,t,nl,ops", FLIP_CONFIGS)
def test_tree_full_and_empty_record_flips(c, t, nl, ops):
    run_tree_fuzz(c, t, nl, seed=c * 37 + (nl or 0), ops=ops, flip=True)


PARTIAL_CONFIGS = [
    (2, 2, 1, 1500),
    (2, 2, 3, 2000),
    (4, 2, 3, 2000),
    (2, 1, 5, 2000),
    (8, 1, 1, 1200),
    (2, 2, 63, 2000),
]


@pytest.mark.parametrize("c,t,nl,ops", PARTIAL_CONFIGS)
def test_tree_partial_rightmost_subtrees(c, t, nl, ops):
    # trees cut short on the right exercise narrow nodes and single
    # child chains
    run_tree_fuzz(c, t, nl, seed=c * 53 + nl, ops=ops, flip=(c == 2))


def test_tree_tolerates_garbage_backing():
    for c, t in ((2, 2), (4, 2), (8, 1)):
        g = _Geometry.get(c, t)
        rng = random.Random(c + t)
        td = TreeDict(g, scribble=rng)
        n = td.universe_size
        for l in (1, 2, n // 2, n):
            assert td.color(l) == 0
            assert td.successor(0, l - 1) == l
        for j in range(1, c):
            assert td.choice(j) == 0
            assert td.successor(j, 0) == 0
        assert td.choice(0) == 1


def test_tree_rejects_bad_arguments():
    g = _Geometry.get(2, 1)
    td = TreeDict(g)
    with pytest.raises(ValueError):
        td.color(0)
    with pytest.raises(ValueError):
        td.color(td.universe_size + 1)
    with pytest.raises(ValueError):
        td.setcolor(2, 1)
    with pytest.raises(ValueError):
        TreeDict(g, n_leaves=0)
    with pytest.raises(ValueError):
        TreeDict(g, n_leaves=g.N + 1)


# -- the composed dictionary --------------------------------------------

COMPACT_CONFIGS = []
for _n in (1, 2, 63, 64, 65, 513, 1000):
    for _c in (1, 2, 4, 8):
        COMPACT_CONFIGS.append((_n, _c, 1 + (_n + _c) % 2))
COMPACT_CONFIGS.append((3000, 2, 2))
COMPACT_CONFIGS.append((3000, 4, 1))


def replay(n, c, t, nops, seed, features=("choice", "iterate")):
    trace = random_trace(n, c, nops, seed, features=features)
    make = lambda nn, cc: CompactChoiceDict(nn, cc, t)
    try:
        replay_compare(make, trace, check_every=500)
    except AssertionError:
        small = minimize(make, trace, check_every=500)
        replay_compare(make, small, check_every=1)
        raise


@pytest.mark.parametrize("n,c,t", COMPACT_CONFIGS)
def test_compact_matches_oracle(n, c, t):
    replay(n, c, t, nops=1500, seed=n * 100 + c * 10 + t)


def test_compact_rejects_unsupported_palettes():
    with pytest.raises(ValueError):
        CompactChoiceDict(100, 3)
    with pytest.raises(ValueError):
        CompactChoiceDict(100, 6)
    with pytest.raises(ValueError):
        CompactChoiceDict(0, 2)
    with pytest.raises(ValueError):
        CompactChoiceDict(100, 2, 0)


def test_compact_space_is_entropy_plus_lower_order():
    n = 1 << 20
    d2 = CompactChoiceDict(n, 2, 2)
    assert d2.bits_used <= n + n // 16 + 10 ** 4
    d4 = CompactChoiceDict(n, 4, 2)
    assert d4.bits_used <= 2 * n + n // 4 + 10 ** 5


def test_compact_space_does_not_drift_under_updates():
    rng = random.Random(5)
    d = CompactChoiceDict(50000, 4, 2)
    before = d.bits_used
    for _ in range(3000):
        d.setcolor(rng.randrange(4), rng.randrange(1, 50001))
    assert d.bits_used == before
    d.iter_init(1)
    assert d.bits_used == before + 64


def test_compact_single_color_is_free():
    d = CompactChoiceDict(10 ** 9, 1)
    assert d.bits_used == 64
    assert d.color(12345) == 0
    assert d.choice(0) == 1
    d.setcolor(0, 99)
    d.iter_init(0)
    seen = [d.iter_next(0) for _ in range(3)]
    assert seen == [1, 2, 3]
    assert d.iter_more(0)

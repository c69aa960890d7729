"""Rank and select over color classes in near-entropy space.

The universe splits into segments of a few hundred positions.  A
touched segment keeps its colors as packed digit groups plus, per
color, prefix sums of per-range occurrence counts, which makes rank
and select inside the segment exact, order-respecting and cheap.
Untouched segments answer arithmetically as all-color-0.

Globally the members of one color are ordered class by class: a
segment's class for color j is how many j-members it holds (its
j-weight), with color 0 keyed complementarily so that a fresh
structure sits entirely in class 0 and costs no setup writes.  A
searchable prefix-sums array over per-class member totals translates
a global rank into (class, member index, offset); a stable-ranking
dense dictionary over segments resolves the member index to a
segment; the segment resolves the offset to a position.  The induced
bijection between {1..|S_j|} and S_j is arbitrary but stays fixed
while no color changes, which is all p_rank and p_select promise,
and p_select(j, random(|S_j|)) therefore samples S_j uniformly.

Digit-group codec and popcount/select helper tables are shared by
all segments of a structure; small index spaces are filled eagerly,
large ones hand out codes in first-seen order so only reachable
entries ever exist.  Iteration per color walks a planted two-class
dictionary of nonempty segments and then sweeps the segment by
position, so recoloring during the walk stays safe and the rank
bijection is left untouched.
"""

import random
from math import isqrt, log2

from .carray import CAryArray
from .dense import DenseChoiceDict
from .trie import SystematicChoiceDict
from .wordops import PackedVector, field_rank, ones_pattern, parallel_leq


def default_rng(seed=0):
    """The documented sampling generator: the stdlib Mersenne Twister.

    Anything with randrange(k) works in its place.  To split, seed
    children from getrandbits(64) of the parent.
    """
    return random.Random(seed)


_ONES = {}
_RAMPS = {}


def _ones(m, f):
    v = _ONES.get((m, f))
    if v is None:
        v = _ONES[(m, f)] = ones_pattern(m, f)
    return v


def _ramp(m, f, cap):
    v = _RAMPS.get((m, f, cap))
    if v is None:
        v = 0
        for i in range(m):
            v |= cap * (i + 1) << (i * f)
        _RAMPS[(m, f, cap)] = v
    return v


class _PackedPrefix:
    """Nonnegative counters in one packed word with constant-time
    prefix sums and searches via a single multiplication.

    All counters and every prefix sum must stay below 2**(fw-1); the
    callers here bound both by a structure capacity and pick fw
    accordingly.  A multiplication by the all-ones field pattern turns
    the counter word into its prefix-sum word, and threshold searches
    run field-parallel on that product, so no query walks the fields.
    One such array covers a few hundred entries; the heavyweight
    tree-backed prefix structure only pays off at far larger shapes.
    """

    __slots__ = ("m", "fw", "_fmask", "_mask", "_vec", "_tot", "_pref")

    def __init__(self, m, fw):
        self.m = m
        self.fw = fw
        self._fmask = (1 << fw) - 1
        self._mask = (1 << (m * fw)) - 1
        self._vec = 0
        self._tot = 0
        self._pref = 0

    def value(self, j):
        return (self._vec >> ((j - 1) * self.fw)) & self._fmask

    def update(self, j, d):
        if not 1 <= j <= self.m:
            raise IndexError("entry index out of range")
        if d == 0:
            return
        v = self.value(j) + d
        if v < 0:
            raise ValueError("entry would become negative")
        if self._tot + d >= 1 << (self.fw - 1):
            raise ValueError("total would overflow the field width")
        self._vec += d << ((j - 1) * self.fw)
        self._tot += d
        self._pref = None

    def _prefix(self):
        p = self._pref
        if p is None:
            p = self._pref = (self._vec * _ones(self.m, self.fw)) & self._mask
        return p

    def sum(self, j):
        if j == 0:
            return 0
        return (self._prefix() >> ((j - 1) * self.fw)) & self._fmask

    def total(self):
        return self._tot

    def search(self, x):
        """First j with sum(j) >= x, or m+1 when the total is short."""
        if x > self._tot:
            return self.m + 1
        return field_rank(self._prefix(), x - 1, self.m, self.fw) + 1

    def search_complement(self, x, cap):
        """First j with cap*j - sum(j) >= x, or m+1.  Every entry must
        stay at most cap."""
        if x > cap * self.m - self._tot:
            return self.m + 1
        d = _ramp(self.m, self.fw, cap) - self._prefix()
        return field_rank(d, x - 1, self.m, self.fw) + 1

    @property
    def bits_used(self):
        return self.m * self.fw + 128


class RankSelectTables:
    """Digit-group codec plus popcount and select helpers, shared by
    every segment of one structure.

    A group of rp color values travels as one big digit.  For a power
    of two colors the packed group is its own code and no tables are
    kept.  Otherwise a small index space gets the positional code
    built eagerly; a large one assigns codes in first-seen order, so
    decode only ever sees codes encode handed out.

    Counting helpers work on a binarized group: 0/1 fields marking one
    color's positions, grouped into rbar blocks of rbar fields.  One
    cached sequence of per-block prefix sums plus one of within-block
    prefix sums answer prefix counts and k-th-occurrence queries with
    two lookups each.
    """

    def __init__(self, c, r):
        if c < 2 or r < 1:
            raise ValueError("need c >= 2 and r >= 1")
        f = max(1, (c - 1).bit_length())
        s = isqrt((r + 1) // 2)
        if 2 * s * s < r:
            s += 1
        # big digits must stay below one word for the digit stores
        while s > 1 and s * s * f > 62:
            s -= 1
        self.c = c
        self.f = f
        self.rbar = s
        self.rp = s * s
        self.C = c ** self.rp
        self.loose_bits = self.rp * f
        self.fld = self.rp.bit_length()
        self.fld2 = s.bit_length()
        self.block_bits = s * f
        self.block_mask = (1 << self.block_bits) - 1
        self.identity = c & (c - 1) == 0
        self.eager = self.loose_bits <= 20
        self._enc = self._dec = None
        if not self.identity:
            if self.eager:
                enc = [0] * (1 << self.loose_bits)
                dec = [0] * self.C
                for big in range(self.C):
                    v, loose = big, 0
                    for i in range(self.rp):
                        loose |= (v % c) << (i * f)
                        v //= c
                    dec[big] = loose
                    enc[loose] = big
                self._enc, self._dec = enc, dec
            else:
                self._enc, self._dec = {0: 0}, [0]
        self._yr1 = {}
        self._yr2 = {}

    def encode(self, loose):
        if self.identity:
            return loose
        if self.eager:
            return self._enc[loose]
        big = self._enc.get(loose)
        if big is None:
            big = len(self._dec)
            self._enc[loose] = big
            self._dec.append(loose)
        return big

    def decode(self, big):
        if self.identity:
            return big
        return self._dec[big]

    def binarize(self, loose, j):
        """0/1 fields marking where the group holds color j."""
        le = parallel_leq(loose, j, self.rp, self.f)
        if j:
            le ^= parallel_leq(loose, j - 1, self.rp, self.f)
        return le

    def _blocks1(self, vec):
        seq = self._yr1.get(vec)
        if seq is None:
            seq = run = 0
            for i in range(self.rbar):
                blk = (vec >> (i * self.block_bits)) & self.block_mask
                run += bin(blk).count("1")
                seq |= run << (i * self.fld)
            self._yr1[vec] = seq
        return seq

    def _blocks2(self, blk):
        seq = self._yr2.get(blk)
        if seq is None:
            seq = run = 0
            for i in range(self.rbar):
                run += (blk >> (i * self.f)) & 1
                seq |= run << (i * self.fld2)
            self._yr2[blk] = seq
        return seq

    def vec_prefix(self, vec, p):
        """Number of 1-fields among the first p fields, for p >= 1."""
        i = (p + self.rbar - 1) // self.rbar
        base = 0
        if i > 1:
            base = (self._blocks1(vec) >> ((i - 2) * self.fld)) \
                & ((1 << self.fld) - 1)
        blk = (vec >> ((i - 1) * self.block_bits)) & self.block_mask
        rem = p - (i - 1) * self.rbar
        return base + ((self._blocks2(blk) >> ((rem - 1) * self.fld2))
                       & ((1 << self.fld2) - 1))

    def vec_select(self, vec, k):
        """1-based field index of the k-th 1-field, or 0 if none."""
        seq = self._blocks1(vec)
        fmask = (1 << self.fld) - 1
        if k > (seq >> ((self.rbar - 1) * self.fld)) & fmask:
            return 0
        i = field_rank(seq, k - 1, self.rbar, self.fld) + 1
        prev = (seq >> ((i - 2) * self.fld)) & fmask if i > 1 else 0
        blk = (vec >> ((i - 1) * self.block_bits)) & self.block_mask
        pos = field_rank(self._blocks2(blk), k - prev - 1, self.rbar,
                         self.fld2) + 1
        return (i - 1) * self.rbar + pos

    def count_upto(self, loose, j, p):
        return self.vec_prefix(self.binarize(loose, j), p) if p else 0

    @property
    def bits_used(self):
        bits = 64
        cw = max(1, (self.C - 1).bit_length())
        if self._enc is not None:
            if self.eager:
                bits += (1 << self.loose_bits) * cw + self.C * self.loose_bits
            else:
                bits += 2 * len(self._dec) * (self.loose_bits + cw)
        bits += len(self._yr1) * (self.loose_bits + self.rbar * self.fld)
        bits += len(self._yr2) * (self.block_bits + self.rbar * self.fld2)
        return bits


class SegmentRankSelect:
    """Exact order-respecting rank/select over one zero-initialized
    segment with c colors.

    Color values live in digit groups; ranges of t groups carry, per
    color, one entry of a packed prefix-counter array.  Color 0 is
    stored as complement-to-capacity, so a fresh segment holds no
    nonzero entry anywhere and ranges settle their digits only when
    first written.  With two colors the complemented color-0 counters
    and the color-1 counters are the same sequence and share storage.
    select(j, k) returns the k-th position of color j in increasing
    position order, 0 past the last.
    """

    __slots__ = ("n", "c", "t", "tb", "s_full", "n_big", "n_rng",
                 "_dv", "_da", "_ps", "_rinit")

    def __init__(self, n, c, t, tables):
        if n < 1:
            raise ValueError("universe must not be empty")
        if t < 1:
            raise ValueError("t must be positive")
        if tables.c != c:
            raise ValueError("tables built for a different color count")
        self.n = n
        self.c = c
        self.t = t
        self.tb = tables
        rp = tables.rp
        self.s_full = rp * t
        self.n_big = -(-n // rp)
        self.n_rng = -(-self.n_big // t)
        if tables.identity:
            self._dv = PackedVector(self.n_big, tables.loose_bits)
            self._da = None
        else:
            self._dv = None
            last = min(rp, n - (self.n_big - 1) * rp)
            if tables.eager:
                runs = []
                if self.n_big > 1:
                    runs.append((tables.C, self.n_big - 1))
                runs.append((c ** last, 1))
            else:
                # first-seen codes can exceed the short group's range
                runs = [(tables.C, self.n_big)]
            self._da = CAryArray(runs)
        fw = (self.s_full * self.n_rng).bit_length() + 1
        if c == 2:
            shared = _PackedPrefix(self.n_rng, fw)
            self._ps = [shared, shared]
        else:
            self._ps = [_PackedPrefix(self.n_rng, fw) for _ in range(c)]
        self._rinit = SystematicChoiceDict(self.n_rng)

    def _digit(self, g):
        return self._dv.get(g) if self._da is None else self._da.read(g)

    def _set_digit(self, g, v):
        if self._da is None:
            self._dv.set(g, v)
        else:
            self._da.write(g, v)

    def _rw(self, g):
        return min(self.tb.rp, self.n - g * self.tb.rp)

    def count(self, j):
        if not 0 <= j < self.c:
            return 0
        if j == 0:
            return self.n - self._ps[0].total()
        return self._ps[j].total()

    def _true_sum(self, j, i):
        """Occurrences of j in ranges 1..i."""
        if i == 0:
            return 0
        if j == 0:
            return min(i * self.s_full, self.n) - self._ps[0].sum(i)
        return self._ps[j].sum(i)

    def color(self, pos):
        if not 1 <= pos <= self.n:
            raise IndexError("position out of range")
        tb = self.tb
        g = (pos - 1) // tb.rp
        if not self._rinit.color(g // self.t + 1):
            return 0
        loose = tb.decode(self._digit(g))
        return (loose >> (((pos - 1) % tb.rp) * tb.f)) & ((1 << tb.f) - 1)

    def setcolor(self, j, pos):
        if not 0 <= j < self.c:
            raise ValueError("color out of range")
        j0 = self.color(pos)
        if j0 == j:
            return
        tb = self.tb
        g = (pos - 1) // tb.rp
        rng = g // self.t + 1
        if not self._rinit.color(rng):
            for gg in range((rng - 1) * self.t,
                            min(rng * self.t, self.n_big)):
                self._set_digit(gg, 0)
            self._rinit.setcolor(1, rng)
        sh = ((pos - 1) % tb.rp) * tb.f
        loose = tb.decode(self._digit(g))
        loose = (loose & ~(((1 << tb.f) - 1) << sh)) | (j << sh)
        self._set_digit(g, tb.encode(loose))
        if self._ps[j0] is self._ps[j]:
            # two colors: one shared counter array, one net move
            self._ps[1].update(rng, 1 if j == 1 else -1)
        else:
            self._ps[j0].update(rng, 1 if j0 == 0 else -1)
            self._ps[j].update(rng, -1 if j == 0 else 1)

    def rank_upto(self, j, pos):
        """Occurrences of j at positions 1..pos; pos may be 0."""
        if pos == 0:
            return 0
        if not 1 <= pos <= self.n:
            raise IndexError("position out of range")
        tb = self.tb
        g = (pos - 1) // tb.rp
        rng = g // self.t
        if not self._rinit.color(rng + 1):
            return self._true_sum(j, rng) + \
                (pos - rng * self.s_full if j == 0 else 0)
        k = self._true_sum(j, rng)
        for gg in range(rng * self.t, g):
            k += tb.count_upto(tb.decode(self._digit(gg)), j, self._rw(gg))
        return k + tb.count_upto(tb.decode(self._digit(g)), j,
                                 (pos - 1) % tb.rp + 1)

    def rank(self, pos):
        """(color of pos, its rank within that color by position)."""
        j = self.color(pos)
        return j, self.rank_upto(j, pos)

    def select(self, j, k):
        if not 0 <= j < self.c:
            return 0
        if k < 1 or k > self.count(j):
            return 0
        if j == 0:
            i = self._ps[0].search_complement(k, self.s_full)
        else:
            i = self._ps[j].search(k)
        m = k - self._true_sum(j, i - 1)
        if not self._rinit.color(i):
            return (i - 1) * self.s_full + m
        tb = self.tb
        for g in range((i - 1) * self.t, min(i * self.t, self.n_big)):
            vec = tb.binarize(tb.decode(self._digit(g)), j)
            cnt = tb.vec_prefix(vec, self._rw(g))
            if m <= cnt:
                return g * tb.rp + tb.vec_select(vec, m)
            m -= cnt
        raise AssertionError("select lost its target inside a range")

    @property
    def bits_used(self):
        bits = (self._dv.bits_used if self._da is None
                else self._da.bits_used)
        bits += self._ps[0].bits_used
        if self._ps[1] is not self._ps[0]:
            for ps in self._ps[1:]:
                bits += ps.bits_used
        return bits + self._rinit.bits_used + 4 * 64


class ColorWeightIndex:
    """Choice dictionary over {1..n} with c colors, p_rank, p_select,
    uniform sampling and robust per-color iteration.

    p_rank(L) and p_select(j, k) are mutually inverse and stable while
    no setcolor intervenes; the bijection behind them is otherwise
    unspecified.  Iteration never perturbs it.
    """

    __slots__ = ("n", "c", "t", "N", "segs", "full", "rem", "tables",
                 "_d", "_dp", "_pl", "_bot", "_star", "_it")

    def __init__(self, n, c, t=1):
        if n < 1 or c < 1 or t < 1:
            raise ValueError("need n >= 1, c >= 1 and t >= 1")
        self.n = n
        self.c = c
        self.t = t
        self._it = {}
        if c == 1:
            # one color: every answer is arithmetic
            self.N = n
            return
        lg = max(1, (n - 1).bit_length())
        self.N = min(n, max(1, t * lg * lg))
        self.segs = -(-n // self.N)
        self.full = n // self.N
        self.rem = n - self.full * self.N
        if c * c >= n:
            r = 1
        else:
            r = max(1, int((n.bit_length() - 1) / (2 * log2(c))))
        self.tables = RankSelectTables(c, r)
        fw = n.bit_length() + 1
        self._d = [None] * c
        self._dp = [None] * c
        for j in range(1, c):
            self._d[j] = DenseChoiceDict(self.segs, self.N + 1)
            self._dp[j] = _PackedPrefix(self.N + 1, fw)
        if self.full:
            self._d[0] = DenseChoiceDict(self.full, self.N + 1)
            dp0 = _PackedPrefix(self.N + 1, fw)
            dp0.update(1, self.N * self.full)
            self._dp[0] = dp0
        self._pl = [DenseChoiceDict(self.segs, 2) for _ in range(c)]
        self._bot = [None] * self.segs
        self._star = SystematicChoiceDict(self.segs + c)
        for j in range(c):
            self._star.setcolor(1, self.segs + j + 1)

    @property
    def universe_size(self):
        return self.n

    def _seg_size(self, s):
        return self.N if s <= self.full else self.rem

    def _bottom(self, s):
        bt = self._bot[s - 1]
        if bt is None:
            bt = SegmentRankSelect(self._seg_size(s), self.c, self.t,
                                   self.tables)
            self._bot[s - 1] = bt
            self._star.setcolor(1, s)
        return bt

    def _count0_rem(self):
        if not self.rem:
            return 0
        bt = self._bot[self.segs - 1]
        return self.rem if bt is None else bt.count(0)

    def color(self, ell):
        if not 1 <= ell <= self.n:
            raise IndexError("element out of range")
        if self.c == 1:
            return 0
        s = (ell - 1) // self.N + 1
        bt = self._bot[s - 1]
        return 0 if bt is None else bt.color(ell - (s - 1) * self.N)

    def size(self, j):
        if not 0 <= j < self.c:
            return 0
        if self.c == 1:
            return self.n
        if j == 0:
            base = 0 if self._dp[0] is None else self._dp[0].total()
            return base + self._count0_rem()
        return self._dp[j].total()

    def _shift_weight(self, s, x, d):
        """Move segment s between the weight classes of color x after
        its x-count changed by d; returns the new count."""
        if x == 0:
            if s > self.full:
                return self._bot[s - 1].count(0)
            key = self._d[0].color(s)
            nkey = key - d
            self._d[0].setcolor(nkey, s)
            dp = self._dp[0]
            dp.update(key + 1, -(self.N - key))
            dp.update(nkey + 1, self.N - nkey)
            return self.N - nkey
        dd = self._d[x]
        w = dd.color(s)
        nw = w + d
        dd.setcolor(nw, s)
        dp = self._dp[x]
        dp.update(w + 1, -w)
        dp.update(nw + 1, nw)
        return nw

    def setcolor(self, j, ell):
        if not 0 <= j < self.c:
            raise ValueError("color out of range")
        j0 = self.color(ell)
        if j0 == j:
            return
        s = (ell - 1) // self.N + 1
        bt = self._bottom(s)
        bt.setcolor(j, ell - (s - 1) * self.N)
        lost = self._shift_weight(s, j0, -1)
        won = self._shift_weight(s, j, 1)
        if lost == 0:
            self._pl[j0].setcolor(1 if j0 == 0 else 0, s)
        if won == 1:
            self._pl[j].setcolor(0 if j == 0 else 1, s)

    def p_rank(self, ell):
        if not 1 <= ell <= self.n:
            raise IndexError("element out of range")
        if self.c == 1:
            return ell
        s = (ell - 1) // self.N + 1
        bt = self._bot[s - 1]
        if bt is None:
            j, kin = 0, ell - (s - 1) * self.N
        else:
            j, kin = bt.rank(ell - (s - 1) * self.N)
        if j == 0:
            if s > self.full:
                base = 0 if self._dp[0] is None else self._dp[0].total()
                return base + kin
            key = self._d[0].color(s)
            q = self._d[0].p_rank(s)
            return self._dp[0].sum(key) + (q - 1) * (self.N - key) + kin
        w = self._d[j].color(s)
        q = self._d[j].p_rank(s)
        return self._dp[j].sum(w) + (q - 1) * w + kin

    def p_select(self, j, k):
        if not 0 <= j < self.c or k < 1:
            return 0
        if self.c == 1:
            return k if k <= self.n else 0
        if j == 0:
            dp = self._dp[0]
            head = 0 if dp is None else dp.total()
            if k > head:
                k -= head
                if self.rem and k <= self._count0_rem():
                    bt = self._bot[self.segs - 1]
                    pos = k if bt is None else bt.select(0, k)
                    return self.full * self.N + pos
                return 0
            e = dp.search(k)
            key = e - 1
            wt = self.N - key
            p = k - dp.sum(e - 1)
            q = -(-p // wt)
            s = self._d[0].p_select(key, q)
            kin = p - (q - 1) * wt
            bt = self._bot[s - 1]
            pos = kin if bt is None else bt.select(0, kin)
            return (s - 1) * self.N + pos
        dp = self._dp[j]
        if k > dp.total():
            return 0
        e = dp.search(k)
        wt = e - 1
        p = k - dp.sum(e - 1)
        q = -(-p // wt)
        s = self._d[j].p_select(wt, q)
        return (s - 1) * self.N + self._bot[s - 1].select(j, p - (q - 1) * wt)

    def choice(self, j):
        return self.p_select(j, 1)

    def uniform_choice(self, j, rng):
        """A uniform member of S_j, or 0 on empty; rng supplies
        randrange and controls determinism."""
        sz = self.size(j)
        if sz == 0:
            return 0
        return self.p_select(j, 1 + rng.randrange(sz))

    # -- iteration: planted nonempty-segment walk, position sweep within

    def _seg_next(self, s, j, pos):
        bt = self._bot[s - 1]
        if bt is None:
            if j == 0 and pos < self._seg_size(s):
                return pos + 1
            return 0
        return bt.select(j, bt.rank_upto(j, pos) + 1)

    def iter_init(self, j):
        if not 0 <= j < self.c:
            return
        if self.c == 1:
            self._it[0] = {"seg": 0, "pos": 0, "on": True}
            return
        self._pl[j].iter_init(0 if j == 0 else 1)
        self._it[j] = {"seg": 0, "pos": 0, "on": True}

    def iter_more(self, j):
        st = self._it.get(j)
        if not st or not st["on"]:
            return False
        if self.c == 1:
            return st["pos"] < self.n
        if st["seg"] and self._seg_next(st["seg"], j, st["pos"]):
            return True
        return self._pl[j].iter_more(0 if j == 0 else 1)

    def iter_next(self, j):
        st = self._it.get(j)
        if not st or not st["on"]:
            return 0
        if self.c == 1:
            nxt = st["pos"] + 1
            if nxt > self.n:
                st["on"] = False
                return 0
            st["pos"] = nxt
            return nxt
        side = 0 if j == 0 else 1
        while True:
            if st["seg"]:
                nxt = self._seg_next(st["seg"], j, st["pos"])
                if nxt:
                    st["pos"] = nxt
                    return (st["seg"] - 1) * self.N + nxt
            s = self._pl[j].iter_next(side)
            if s == 0:
                st["on"] = False
                return 0
            st["seg"] = s
            st["pos"] = 0

    @property
    def bits_used(self):
        if self.c == 1:
            return 128
        bits = 8 * 64 + self.tables.bits_used + self._star.bits_used
        for bt in self._bot:
            if bt is not None:
                bits += bt.bits_used
        for j in range(self.c):
            if self._d[j] is not None:
                bits += self._d[j].bits_used
            if self._dp[j] is not None:
                bits += self._dp[j].bits_used
            bits += self._pl[j].bits_used
        return bits

    def check_invariants(self):
        """Recount weights, classes and planted flags from the segment
        colors; raises on any drift.  Test hook, not O(t)."""
        if self.c == 1:
            return
        hists = [dict() for _ in range(self.c)]
        for s in range(1, self.segs + 1):
            bt = self._bot[s - 1]
            counts = [0] * self.c
            if bt is None:
                counts[0] = self._seg_size(s)
            else:
                for j in range(self.c):
                    counts[j] = bt.count(j)
            assert sum(counts) == self._seg_size(s)
            for j in range(1, self.c):
                w = counts[j]
                assert self._d[j].color(s) == w, (s, j)
                hists[j][w] = hists[j].get(w, 0) + 1
                flag = self._pl[j].color(s)
                assert flag == (1 if w else 0), (s, j)
            flag0 = self._pl[0].color(s)
            assert flag0 == (0 if counts[0] else 1), s
            if s <= self.full:
                key = self.N - counts[0]
                assert self._d[0].color(s) == key, s
                hists[0][key] = hists[0].get(key, 0) + 1
        for j in range(1, self.c):
            dp = self._dp[j]
            for i in range(self.N + 1):
                assert dp.value(i + 1) == i * hists[j].get(i, 0), (j, i)
        if self.full:
            dp = self._dp[0]
            for key in range(self.N + 1):
                want = (self.N - key) * hists[0].get(key, 0)
                assert dp.value(key + 1) == want, key

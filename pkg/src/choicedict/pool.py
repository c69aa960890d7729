"""Multisets of bounded integers in near-optimal space with background reorganization.

The pool stores a multiset over {1..n} and offers insert, removal of an
arbitrary element, and robust iteration.  Elements live in one of six
regions: two difference-coded sorted streams (reservoirs), two arrays of
fixed-width cells (buffers), and the transient arrays of an in-flight
sort or merge.  New elements always enter the active buffer.  Once the
active buffer is both long enough and at least as large in bits as its
reservoir, it is frozen, the other (empty) buffer becomes active, and a
background process radix-sorts the frozen buffer and merges it with the
frozen reservoir into the other reservoir.  The background process is
driven by a fixed parcel budget per mutation, so every operation stays
constant-time while the reorganization deadline obligations hold; the
obligations themselves are enforced with runtime assertions.

Differences between consecutive stream elements are stored as
self-delimiting codes that can be decoded from either end, which is what
makes popping the stream tail, shrinking iteration areas backwards, and
splicing raw code runs during a merge all constant-time.
"""

from math import isqrt

from .wordops import PackedVector, get_bits, set_bits


def _lam(d):
    """Bit length of the code payload for difference d (one more than floor log)."""
    return (d + 1).bit_length()


def encode_backward(d):
    """Backward-decodable code of d >= 0 as (value, width), LSB-first.

    Layout from low stream offsets: payload, payload length, a marker 1,
    then as many 0 bits as the length field is wide.  A reader at the
    high end counts zeros to the marker, which sizes everything else.
    """
    L = _lam(d)
    ell = _lam(L)
    return d | (L << L) | (1 << (L + ell)), L + 2 * ell + 1


def decode_backward(bs, end):
    """Decode the code ending at bit offset end; returns (d, start)."""
    z = 0
    while not bs.bit(end - 1 - z):
        z += 1
    L = bs.read(end - 1 - z - z, z)
    start = end - (L + 2 * z + 1)
    return bs.read(start, L), start


def encode_bidir(d):
    """Two-way decodable code of d >= 0 as (value, width), LSB-first.

    The backward layout plus a mirrored zeros-marker-length prefix, so a
    reader at either end can size the code without touching the other.
    """
    L = _lam(d)
    ell = _lam(L)
    v = (1 << ell) | (L << (ell + 1)) | (d << (2 * ell + 1))
    v |= L << (2 * ell + 1 + L)
    v |= 1 << (3 * ell + 1 + L)
    return v, L + 4 * ell + 2


def decode_bidir_fwd(bs, pos):
    """Decode the code starting at bit offset pos; returns (d, end)."""
    z = 0
    while not bs.bit(pos + z):
        z += 1
    L = bs.read(pos + z + 1, z)
    return bs.read(pos + 2 * z + 1, L), pos + L + 4 * z + 2


def decode_bidir_back(bs, end):
    """Decode the code ending at bit offset end; returns (d, start)."""
    z = 0
    while not bs.bit(end - 1 - z):
        z += 1
    L = bs.read(end - 1 - z - z, z)
    start = end - (L + 4 * z + 2)
    return bs.read(start + 2 * z + 1, L), start


class DeltaCode:
    """Namespace for the difference codes used by the stream structures."""

    encode_backward = staticmethod(encode_backward)
    decode_backward = staticmethod(decode_backward)
    encode_bidir = staticmethod(encode_bidir)
    decode_bidir_fwd = staticmethod(decode_bidir_fwd)
    decode_bidir_back = staticmethod(decode_bidir_back)

    @staticmethod
    def cost_backward(d):
        return _lam(d) + 2 * _lam(_lam(d)) + 1

    @staticmethod
    def cost_bidir(d):
        return _lam(d) + 4 * _lam(_lam(d)) + 2


class _BitString:
    """Growable bit buffer over 64-bit words with end append and end trim."""

    __slots__ = ("words", "nbits")

    def __init__(self):
        self.words = []
        self.nbits = 0

    def append(self, value, width):
        need = (self.nbits + width + 63) >> 6
        while len(self.words) < need:
            self.words.append(0)
        set_bits(self.words, self.nbits, width, value)
        self.nbits += width

    def read(self, off, width):
        return get_bits(self.words, off, width)

    def write(self, off, width, value):
        set_bits(self.words, off, width, value)

    def bit(self, i):
        return (self.words[i >> 6] >> (i & 63)) & 1

    def trim_to(self, nb):
        self.nbits = nb
        need = (nb + 63) >> 6
        if len(self.words) > need + 1:
            del self.words[need + 1:]

    def ensure(self, nbits):
        need = (nbits + 63) >> 6
        while len(self.words) < need:
            self.words.append(0)

    def clear(self):
        self.words = []
        self.nbits = 0

    @property
    def word_bits(self):
        return 64 * len(self.words)


class SortedStack:
    """Stack of nondecreasing integers from {1..n} in near-entropy space.

    sorted_push(x) appends x only when x is at least the current top;
    pop() removes and returns the top, or 0 when empty.  The content is
    a single bit string of backward-decodable difference codes, closed
    by a code for the gap from the top to the universe bound, so both
    operations touch only the tail.
    """

    __slots__ = ("n", "_bs", "_count", "_top")

    def __init__(self, n):
        if not isinstance(n, int) or n < 1:
            raise ValueError("universe bound must be a positive integer")
        self.n = n
        self._bs = _BitString()
        self._count = 0
        self._top = 1
        v, w = encode_backward(n - 1)
        self._bs.append(v, w)

    def __len__(self):
        return self._count

    @property
    def top(self):
        return self._top if self._count else 0

    def sorted_push(self, x):
        if not 1 <= x <= self.n:
            raise ValueError("element out of range")
        if x < self._top:
            return False
        _, start = decode_backward(self._bs, self._bs.nbits)
        self._bs.trim_to(start)
        v, w = encode_backward(x - self._top)
        self._bs.append(v, w)
        v, w = encode_backward(self.n - x)
        self._bs.append(v, w)
        self._top = x
        self._count += 1
        return True

    def pop(self):
        if not self._count:
            return 0
        r = self._top
        _, start = decode_backward(self._bs, self._bs.nbits)
        self._bs.trim_to(start)
        d, start = decode_backward(self._bs, self._bs.nbits)
        self._bs.trim_to(start)
        self._count -= 1
        self._top = r - d if self._count else 1
        v, w = encode_backward(self.n - self._top)
        self._bs.append(v, w)
        return r

    @property
    def bits_used(self):
        return self._bs.word_bits + 192


class _Reservoir:
    """Sorted difference stream with per-element flag bits and live labels.

    Each element is a record [flag][diff code][flag=1: two label codes]
    [flag], decodable from either end.  In area mode liveness is the
    prefix of length area_cnt and in-stream flags are ignored; in list
    mode flagged records chain backwards through their labels and
    head_pos/head_val cache the chain head.
    """

    __slots__ = ("bs", "count", "last", "mode", "area_cnt", "area_pos",
                 "area_val", "head_pos", "head_val", "live_cnt")

    def __init__(self):
        self.bs = _BitString()
        self.count = 0
        self.last = 1
        self.mode = "A"
        self.area_cnt = 0
        self.area_pos = 0
        self.area_val = 1
        self.head_pos = -1
        self.head_val = 0
        self.live_cnt = 0

    def reset(self, mode):
        self.bs.clear()
        self.count = 0
        self.last = 1
        self.mode = mode
        self.area_cnt = 0
        self.area_pos = 0
        self.area_val = 1
        self.head_pos = -1
        self.head_val = 0
        self.live_cnt = 0

    def mark_all_live(self):
        self.mode = "A"
        self.area_cnt = self.count
        self.area_pos = self.bs.nbits
        self.area_val = self.last
        self.head_pos = -1
        self.head_val = 0
        self.live_cnt = 0

    def append(self, v, flag):
        bs = self.bs
        d = v - self.last
        bs.append(flag, 1)
        val, w = encode_bidir(d)
        bs.append(val, w)
        if flag:
            anchor = bs.nbits
            if self.live_cnt:
                dp = anchor - self.head_pos
                dv = v - self.head_val
            else:
                dp = dv = 0
            val, w = encode_bidir(dp)
            bs.append(val, w)
            val, w = encode_bidir(dv)
            bs.append(val, w)
            self.head_pos = anchor
            self.head_val = v
            self.live_cnt += 1
        bs.append(flag, 1)
        self.count += 1
        self.last = v

    def scan_back(self, end):
        """Record boundary before the record ending at end: (diff, start)."""
        bs = self.bs
        f = bs.bit(end - 1)
        e = end - 1
        if f:
            _, e = decode_bidir_back(bs, e)
            _, e = decode_bidir_back(bs, e)
        d, e = decode_bidir_back(bs, e)
        return d, e - 1

    def read_fwd(self, pos):
        """Record at pos: (diff, stream flag, end)."""
        bs = self.bs
        f = bs.bit(pos)
        p = pos + 1
        d, p = decode_bidir_fwd(bs, p)
        if f:
            _, p = decode_bidir_fwd(bs, p)
            _, p = decode_bidir_fwd(bs, p)
        return d, f, p + 1

    def pop(self):
        """Remove the stream tail; returns (value, was_live)."""
        bs = self.bs
        v = self.last
        f = bs.bit(bs.nbits - 1)
        e = bs.nbits - 1
        was_live = False
        if f:
            dv, e = decode_bidir_back(bs, e)
            dp, e = decode_bidir_back(bs, e)
            if self.mode == "L" and e == self.head_pos:
                self.live_cnt -= 1
                was_live = True
                if dp:
                    self.head_pos = e - dp
                    self.head_val = v - dv
                else:
                    self.head_pos = -1
                    self.head_val = 0
        d, e = decode_bidir_back(bs, e)
        e -= 1
        if self.mode == "A" and self.area_cnt == self.count and self.count:
            was_live = True
            self.area_cnt -= 1
        self.count -= 1
        self.last = v - d if self.count else 1
        bs.trim_to(e)
        if self.mode == "A" and was_live:
            self.area_pos = e
            self.area_val = self.last
        return v, was_live

    def enum_area(self):
        """Enumerate the last element of the live area and shrink it."""
        v = self.area_val
        d, start = self.scan_back(self.area_pos)
        self.area_pos = start
        self.area_val = v - d
        self.area_cnt -= 1
        return v

    def enum_list(self):
        """Enumerate the live-list head and advance down the chain."""
        v = self.head_val
        bs = self.bs
        dp, p = decode_bidir_fwd(bs, self.head_pos)
        dv, _ = decode_bidir_fwd(bs, p)
        if dp:
            self.head_pos -= dp
            self.head_val = v - dv
        else:
            self.head_pos = -1
            self.head_val = 0
        self.live_cnt -= 1
        return v


class _Buffer:
    """Unsorted array of fixed-width cells with a live prefix counter."""

    __slots__ = ("bs", "count", "area_cnt", "cw")

    def __init__(self, cw):
        self.bs = _BitString()
        self.count = 0
        self.area_cnt = 0
        self.cw = cw

    def push(self, cell):
        self.bs.append(cell, self.cw)
        self.count += 1

    def cell(self, i):
        return self.bs.read(i * self.cw, self.cw)

    def pop(self):
        """Remove the last cell; returns (cell, was_live)."""
        c = self.cell(self.count - 1)
        self.count -= 1
        self.bs.trim_to(self.count * self.cw)
        if self.area_cnt > self.count:
            self.area_cnt = self.count
            return c, True
        return c, False

    def clear(self):
        self.bs.clear()
        self.count = 0
        self.area_cnt = 0


_IDLE = 0
_S_CNT_LO = 1
_S_PFX_LO = 2
_S_PLACE_LO = 3
_S_CNT_HI = 4
_S_PFX_HI = 5
_S_PLACE_HI = 6
_MERGE = 7


class Pool:
    """Multiset over {1..n} with constant-time insert, extract, and iteration.

    insert(x) adds one copy of x; extract_choice() removes and returns
    some element (0 when empty); choice() is the nondestructive peek.
    iter_init()/iter_more()/iter_next() enumerate exactly the elements
    present at iter_init time that are not removed before being seen,
    regardless of interleaved mutation.

    merge_parcels and table_parcels set the background budget charged to
    every mutation; merge_step() runs a single background parcel by hand
    and reports whether work remains.  chunk_bits overrides the lookup
    window used to splice whole runs of dead difference codes during a
    merge (the window only pays for itself on very wide words, so the
    automatic choice of one fifth of the universe bit length engages the
    tables rarely; the override exists to exercise the path).
    """

    _TABLE_MIN = 7
    _TABLE_MAX = 16

    def __init__(self, n, *, merge_parcels=8, table_parcels=8,
                 chunk_bits=None, strict_deadlines=True):
        if not isinstance(n, int) or n < 1:
            raise ValueError("universe bound must be a positive integer")
        if merge_parcels < 1 or table_parcels < 0:
            raise ValueError("parcel budgets out of range")
        self.n = n
        self.kb = max(1, (n - 1).bit_length())
        self.cw = self.kb + 1
        self.s = max(1, isqrt(n))
        self.merge_parcels = merge_parcels
        self.table_parcels = table_parcels
        self.strict_deadlines = strict_deadlines
        if chunk_bits is None:
            chunk_bits = max(1, n.bit_length() - 1) // 5
        self.w5 = chunk_bits
        self.table_enabled = self._TABLE_MIN <= self.w5 <= self._TABLE_MAX
        self._tab = None
        self._tab_next = 0
        self._tab_pinned = False
        self.table_hits = 0
        self.deadline_misses = 0
        self.fallback_drains = 0
        self.R = [_Reservoir(), _Reservoir()]
        self.B = [_Buffer(self.cw), _Buffer(self.cw)]
        self.a = 0
        self._count = 0
        # Worst-case record bits over cell bits bounds how much background
        # work one extraction's budget must cover before the reservoir can
        # drain; below the floor the sort could outlive its element supply.
        max_rec = DeltaCode.cost_bidir(n - 1) + 2
        self._parcel_floor = 2 + (6 * max_rec + self.cw - 1) // self.cw
        self._ph = _IDLE
        self._i = 0
        self._acc = 0
        self._C1 = None
        self._C2 = None
        self._T1 = None
        self._T2 = None
        self._f = 0
        self._frozen_cnt = 0
        self._frozen_area = 0
        self._frozen_pending = 0
        self._t_pos = 0
        self._t_hi = 0
        self._m_src_pos = 0
        self._m_src_idx = 0
        self._m_src_val = 1
        self._src_start_cnt = 0
        self.iter_active = False
        self.total_live = 0
        self._h_lo = (self.kb + 1) // 2
        self._h_hi = self.kb - self._h_lo

    # -- basic queries ------------------------------------------------

    def __len__(self):
        return self._count

    @property
    def empty(self):
        return self._count == 0

    def total(self):
        return self._count

    # -- mutation -----------------------------------------------------

    def insert(self, x):
        if not 1 <= x <= self.n:
            raise ValueError("element out of range")
        self.B[self.a].push((x - 1) << 1)
        self._count += 1
        self._charge()
        self._maybe_switch()

    def extract_choice(self):
        if not self._count:
            return 0
        v, was_live = self._extract_once()
        self._count -= 1
        if self.iter_active and was_live:
            self.total_live -= 1
        self._charge()
        self._maybe_switch()
        return v

    def choice(self):
        if not self._count:
            return 0
        return self._peek()

    def merge_step(self):
        """Run one background parcel; True while background work remains."""
        if self._ph != _IDLE:
            self._bg(1)
        else:
            self._maybe_switch()
        return self._ph != _IDLE

    # -- robust iteration --------------------------------------------

    def iter_init(self):
        while self._ph != _IDLE:
            self._bg(1024)
        for r in self.R:
            r.mark_all_live()
        for b in self.B:
            b.area_cnt = b.count
        self.iter_active = True
        self.total_live = self._count

    def iter_more(self):
        return self.iter_active and self.total_live > 0

    def iter_next(self):
        if not self.iter_more():
            return 0
        while True:
            v = self._enum_visible()
            if v:
                self.total_live -= 1
                return v
            assert self._ph != _IDLE, "live count out of sync with regions"
            self._bg(256)

    def _enum_visible(self):
        for k in (0, 1):
            r = self.R[k]
            consumed = self._m_src_idx if (
                self._ph == _MERGE and k == self._f) else 0
            if r.mode == "A":
                if r.area_cnt - consumed > 0:
                    return r.enum_area()
            elif r.live_cnt > 0:
                return r.enum_list()
        act = self.B[self.a]
        if act.area_cnt > 0:
            act.area_cnt -= 1
            return (act.cell(act.area_cnt) >> 1) + 1
        if self._ph == _IDLE:
            frz = self.B[1 - self.a]
            if frz.area_cnt > 0:
                frz.area_cnt -= 1
                return (frz.cell(frz.area_cnt) >> 1) + 1
        return 0

    # -- space accounting --------------------------------------------

    @property
    def bits_used(self):
        bits = 512
        for r in self.R:
            bits += r.bs.word_bits + 256
        for b in self.B:
            bits += b.bs.word_bits + 192
        for pv in (self._C1, self._C2):
            if pv is not None:
                bits += pv.bits_used
        for t in (self._T1, self._T2):
            if t is not None:
                bits += t.word_bits
        if self._tab is not None:
            bits += 48 * len(self._tab)
        return bits

    # -- extraction internals ----------------------------------------

    def _extract_once(self):
        if self._ph == _IDLE:
            for r in (self.R[self.a], self.R[1 - self.a]):
                if r.count:
                    return r.pop()
            for b in (self.B[self.a], self.B[1 - self.a]):
                if b.count:
                    c, live = b.pop()
                    return (c >> 1) + 1, live
            raise AssertionError("count positive but no region nonempty")
        if self._ph == _MERGE:
            out = self.R[1 - self._f]
            if out.count:
                return out.pop()
            src = self.R[self._f]
            if src.count > self._m_src_idx:
                return src.pop()
            if self._t_hi > self._t_pos:
                self._t_hi -= 1
                c = self._T2.read(self._t_hi * self.cw, self.cw)
                if c & 1:
                    self._frozen_pending -= 1
                return (c >> 1) + 1, bool(c & 1)
            act = self.B[self.a]
            if act.count:
                c, live = act.pop()
                return (c >> 1) + 1, live
        else:
            src = self.R[self._f]
            if src.count:
                return src.pop()
            if self._src_start_cnt >= 2 * self.s:
                self.deadline_misses += 1
                if self.strict_deadlines:
                    raise AssertionError(
                        "reservoir drained before its buffer was sorted")
            act = self.B[self.a]
            if act.count:
                c, live = act.pop()
                return (c >> 1) + 1, live
        self.fallback_drains += 1
        while self._ph != _IDLE:
            self._bg(1024)
        return self._extract_once()

    def _peek(self):
        if self._ph == _IDLE:
            for r in (self.R[self.a], self.R[1 - self.a]):
                if r.count:
                    return r.last
            for b in (self.B[self.a], self.B[1 - self.a]):
                if b.count:
                    return (b.cell(b.count - 1) >> 1) + 1
        elif self._ph == _MERGE:
            out = self.R[1 - self._f]
            if out.count:
                return out.last
            src = self.R[self._f]
            if src.count > self._m_src_idx:
                return src.last
            if self._t_hi > self._t_pos:
                return (self._T2.read((self._t_hi - 1) * self.cw,
                                      self.cw) >> 1) + 1
            act = self.B[self.a]
            if act.count:
                return (act.cell(act.count - 1) >> 1) + 1
        else:
            src = self.R[self._f]
            if src.count:
                return src.last
            act = self.B[self.a]
            if act.count:
                return (act.cell(act.count - 1) >> 1) + 1
            frz = self.B[self._f]
            if frz.count:
                return (frz.cell(frz.count - 1) >> 1) + 1
        raise AssertionError("count positive but nothing to peek")

    # -- background scheduling ---------------------------------------

    def _charge(self):
        if self._table_work_active():
            self._tbl(self.table_parcels)
            budget = max(self.merge_parcels,
                         self._parcel_floor - self.table_parcels)
        else:
            budget = max(self.merge_parcels + self.table_parcels,
                         self._parcel_floor)
        self._bg(budget)

    def _maybe_switch(self):
        if self._ph != _IDLE:
            return
        act = self.B[self.a]
        if act.count < 2 * self.s or act.bs.nbits < self.R[self.a].bs.nbits:
            return
        if self.table_enabled and not self._table_ready():
            self.deadline_misses += 1
            if self.strict_deadlines:
                raise AssertionError(
                    "lookup tables not ready at buffer freeze")
        f = self.a
        self.a = 1 - f
        self._f = f
        frz = self.B[f]
        self._frozen_cnt = frz.count
        self._frozen_area = frz.area_cnt if self.iter_active else 0
        self._frozen_pending = self._frozen_area
        out = self.R[self.a]
        assert out.count == 0, "merge target reservoir not empty"
        out.reset("L" if self.iter_active else "A")
        self._src_start_cnt = self.R[f].count
        self._ph = _S_CNT_LO
        self._i = 0
        self._acc = 0

    def _bg(self, parcels):
        while parcels > 0 and self._ph != _IDLE:
            ph = self._ph
            if ph == _MERGE:
                self._merge_one()
            elif ph == _S_CNT_LO:
                self._sort_count(low=True)
            elif ph == _S_PFX_LO:
                self._sort_prefix(low=True)
            elif ph == _S_PLACE_LO:
                self._sort_place(low=True)
            elif ph == _S_CNT_HI:
                self._sort_count(low=False)
            elif ph == _S_PFX_HI:
                self._sort_prefix(low=False)
            else:
                self._sort_place(low=False)
            parcels -= 1

    # -- radix sort stages -------------------------------------------

    def _counter_vec(self, slots):
        return PackedVector(slots, max(1, self._frozen_cnt.bit_length() + 1))

    def _sort_count(self, low):
        if self._i == 0:
            slots = 1 << (self._h_lo if low else max(1, self._h_hi))
            if low:
                self._C1 = self._counter_vec(slots)
            else:
                self._C2 = self._counter_vec(slots)
        if self._i >= self._frozen_cnt:
            self._ph = _S_PFX_LO if low else _S_PFX_HI
            self._i = 0
            self._acc = 0
            return
        if low:
            key = self.B[self._f].cell(self._i) >> 1
            self._C1.add(key & ((1 << self._h_lo) - 1), 1)
        else:
            key = self._T1.read(self._i * self.cw, self.cw) >> 1
            self._C2.add(key >> self._h_lo, 1)
        self._i += 1

    def _sort_prefix(self, low):
        cv = self._C1 if low else self._C2
        if self._i >= cv.m:
            self._ph = _S_PLACE_LO if low else _S_PLACE_HI
            self._i = 0
            return
        c = cv.get(self._i)
        cv.set(self._i, self._acc)
        self._acc += c
        self._i += 1

    def _sort_place(self, low):
        if self._i == 0:
            t = _BitString()
            t.ensure(self._frozen_cnt * self.cw)
            if low:
                self._T1 = t
            else:
                self._T2 = t
        if self._i >= self._frozen_cnt:
            if low:
                self._C1 = None
                self._ph = _S_CNT_HI
                self._i = 0
            else:
                self._T1 = None
                self._C2 = None
                self._start_merge()
            return
        if low:
            cell = self.B[self._f].cell(self._i)
            if self._i < self._frozen_area:
                cell |= 1
            key = cell >> 1
            slot = key & ((1 << self._h_lo) - 1)
            pos = self._C1.get(slot)
            self._C1.set(slot, pos + 1)
            self._T1.write(pos * self.cw, self.cw, cell)
        else:
            cell = self._T1.read(self._i * self.cw, self.cw)
            slot = (cell >> 1) >> self._h_lo
            pos = self._C2.get(slot)
            self._C2.set(slot, pos + 1)
            self._T2.write(pos * self.cw, self.cw, cell)
        self._i += 1

    def _start_merge(self):
        self.B[self._f].clear()
        self._ph = _MERGE
        self._t_pos = 0
        self._t_hi = self._frozen_cnt
        self._m_src_pos = 0
        self._m_src_idx = 0
        self._m_src_val = 1

    # -- merge --------------------------------------------------------

    def _merge_one(self):
        src = self.R[self._f]
        out = self.R[1 - self._f]
        have_src = src.count > self._m_src_idx
        have_buf = self._t_hi > self._t_pos
        if not have_src and not have_buf:
            self._finish_merge()
            return
        if have_src and self._try_run_copy(src, out):
            return
        if have_src:
            d, f, end = src.read_fwd(self._m_src_pos)
            sval = self._m_src_val + d
            if src.mode == "A":
                flag = self._m_src_idx < src.area_cnt
            else:
                flag = bool(f) and src.live_cnt > 0
        if have_buf:
            cell = self._T2.read(self._t_pos * self.cw, self.cw)
            bval = (cell >> 1) + 1
        if have_src and (not have_buf or sval <= bval):
            self._m_src_pos = end
            self._m_src_idx += 1
            self._m_src_val = sval
            if flag and src.mode == "L":
                src.live_cnt -= 1
            out.append(sval, 1 if flag and self.iter_active else 0)
        else:
            self._t_pos += 1
            bflag = cell & 1
            if bflag:
                self._frozen_pending -= 1
            out.append(bval, 1 if bflag and self.iter_active else 0)

    def _try_run_copy(self, src, out):
        tab = self._tab
        if tab is None or out.last != self._m_src_val:
            return False
        if src.mode == "A" and self._m_src_idx < src.area_cnt:
            return False
        if src.bs.nbits - self._m_src_pos < self.w5:
            return False
        win = src.bs.read(self._m_src_pos, self.w5)
        cnt, bits, dsum = tab[win]
        if not cnt or self._m_src_idx + cnt > src.count:
            return False
        if self._t_hi > self._t_pos:
            cell = self._T2.read(self._t_pos * self.cw, self.cw)
            if self._m_src_val + dsum > (cell >> 1) + 1:
                return False
        raw = src.bs.read(self._m_src_pos, bits)
        out.bs.append(raw, bits)
        out.count += cnt
        out.last += dsum
        self._m_src_pos += bits
        self._m_src_idx += cnt
        self._m_src_val = out.last
        self.table_hits += 1
        return True

    def _finish_merge(self):
        out = self.R[1 - self._f]
        src = self.R[self._f]
        act = self.B[self.a]
        if (act.count >= 2 * self.s and act.bs.nbits >= out.bs.nbits
                and out.count):
            self.deadline_misses += 1
            if self.strict_deadlines:
                raise AssertionError(
                    "merge finished after the next buffer filled up")
        src.reset("L" if self.iter_active else "A")
        self._T2 = None
        self._frozen_cnt = 0
        self._frozen_area = 0
        self._ph = _IDLE

    # -- run-copy lookup tables --------------------------------------

    def _table_work_active(self):
        if not self.table_enabled or self._tab_pinned:
            return False
        if self.B[self.a].count >= self.s:
            return not self._table_ready()
        if self._tab is not None and not self._tab_pinned:
            self._tab = None
            self._tab_next = 0
        return False

    def _table_ready(self):
        return self._tab is not None and self._tab_next >= len(self._tab)

    def _tbl(self, parcels):
        if self._tab is None:
            self._tab = [(0, 0, 0)] * (1 << self.w5)
            self._tab_next = 0
        while parcels > 0 and self._tab_next < len(self._tab):
            self._tab[self._tab_next] = self._parse_window(self._tab_next)
            self._tab_next += 1
            parcels -= 1

    def _parse_window(self, win):
        cnt = dsum = 0
        pos = 0
        w5 = self.w5
        while True:
            if pos >= w5 or (win >> pos) & 1:
                break
            p = pos + 1
            z = 0
            while p + z < w5 and not (win >> (p + z)) & 1:
                z += 1
            if p + z >= w5:
                break
            L = (win >> (p + z + 1)) & ((1 << z) - 1)
            rec = 1 + (L + 4 * z + 2) + 1
            if pos + rec > w5 or (win >> (pos + rec - 1)) & 1:
                break
            dsum += (win >> (p + 2 * z + 1)) & ((1 << L) - 1)
            cnt += 1
            pos += rec
        return cnt, pos, dsum

    def build_tables_now(self):
        """Synchronously finish the run-copy tables and pin them (test aid)."""
        if not self.table_enabled:
            raise ValueError("lookup window outside the supported range")
        self._tbl(1 << self.w5)
        self._tab_pinned = True

    # -- inspection (tests) ------------------------------------------

    def _dump(self):
        """Sorted list of all stored elements; only valid when idle."""
        assert self._ph == _IDLE, "dump requires a quiescent pool"
        out = []
        for r in self.R:
            pos = 0
            val = 1
            for _ in range(r.count):
                d, _, pos = r.read_fwd(pos)
                val += d
                out.append(val)
        for b in self.B:
            for i in range(b.count):
                out.append((b.cell(i) >> 1) + 1)
        out.sort()
        return out

"""Constant-time initialization over uninitialized memory.

`LazyAllocator` maintains a function g: {1..n} -> {0..n}, initially
all-zero, under constant-time allocate and lookup, without ever clearing
its backing arrays: an entry is trusted only if its value v satisfies
1 <= v <= mu and the inverse array points back at it, where mu counts
allocations performed so far.  Everything else in this package that
claims constant-time construction bottoms out here.

`InitFreeArray` layers a cell array on top: cells read as a default
value until first written, segments of exactly one 64-bit word are
cleared on first touch, and cell values are transcoded so that the
all-zeros pattern represents the default (the default's own pattern
takes over the meaning of zero).
"""

from array import array

from .wordops import M64, PackedVector


class LazyAllocator:
    """Mapping from {1..n} to allocation indices, no zeroing at startup.

    >>> a = LazyAllocator(10)
    >>> a.g_lookup(3)
    0
    >>> a.allocate(3)
    1
    >>> a.allocate(3)   # idempotent
    1
    >>> a.allocate(7)
    2
    >>> (a.g_lookup(3), a.g_lookup(7), a.g_lookup(1))
    (1, 2, 0)
    """

    __slots__ = ("n", "mu", "_g", "_ginv")

    def __init__(self, n, backing_g=None, backing_ginv=None):
        if n < 1:
            raise ValueError("universe must be nonempty")
        self.n = n
        self.mu = 0
        f = max(1, (n - 1).bit_length())
        self._g = PackedVector(n, f, backing=backing_g, clear=False)
        self._ginv = PackedVector(n, f, backing=backing_ginv, clear=False)

    @property
    def bits_used(self):
        return self._g.bits_used + self._ginv.bits_used + 64

    def g_lookup(self, ell):
        v = self._g.get(ell - 1) + 1
        if v <= self.mu and self._ginv.get(v - 1) + 1 == ell:
            return v
        return 0

    def allocate(self, ell):
        v = self.g_lookup(ell)
        if v:
            return v
        self.mu += 1
        v = self.mu
        self._g.set(ell - 1, v - 1)
        self._ginv.set(v - 1, ell - 1)
        return v


class InitFreeArray:
    """Array of n cells of cell_bits each, all reading as a default
    until first written, with constant-time construction.

    The default rule maps 0-based cell index to value; it must be cheap
    and deterministic.  Backing storage with arbitrary garbage may be
    supplied; segments (single 64-bit words) are cleared the first time
    a write touches them, and a cell is trusted only once every word it
    intersects has been cleared.
    """

    __slots__ = ("n", "cell_bits", "_default", "_words", "_track")

    def __init__(self, n, cell_bits, default=None, backing=None,
                 track_backing=(None, None)):
        if cell_bits < 1 or cell_bits > 64:
            raise ValueError("cell_bits out of range")
        self.n = n
        self.cell_bits = cell_bits
        self._default = default
        nwords = (n * cell_bits + 63) >> 6
        if backing is not None:
            if len(backing) < nwords:
                raise ValueError("backing too small")
            self._words = backing
        else:
            self._words = array("Q", [0]) * max(1, nwords)
        self._track = LazyAllocator(max(1, nwords), *track_backing)

    @property
    def bits_used(self):
        return 64 * len(self._words) + self._track.bits_used

    @property
    def tracking_bits(self):
        return self._track.bits_used

    def _default_value(self, i):
        return self._default(i) if self._default is not None else 0

    def _transcode(self, i, v):
        # Pattern 0 stands for the default; the default's own pattern
        # stands for 0.  Involution, so it serves both directions.
        d = self._default_value(i)
        if d == 0:
            return v
        if v == d:
            return 0
        if v == 0:
            return d
        return v

    def arr_read(self, i):
        cb = self.cell_bits
        lo = i * cb
        w0 = lo >> 6
        w1 = (lo + cb - 1) >> 6
        track = self._track
        if track.g_lookup(w0 + 1) == 0 or (
            w1 != w0 and track.g_lookup(w1 + 1) == 0
        ):
            return self._default_value(i)
        off = lo & 63
        v = self._words[w0] >> off
        if w1 != w0:
            v |= self._words[w1] << (64 - off)
        return self._transcode(i, v & ((1 << cb) - 1))

    def arr_write(self, i, value):
        cb = self.cell_bits
        lo = i * cb
        w0 = lo >> 6
        w1 = (lo + cb - 1) >> 6
        track = self._track
        words = self._words
        for s in (w0, w1) if w1 != w0 else (w0,):
            if track.g_lookup(s + 1) == 0:
                track.allocate(s + 1)
                words[s] = 0
        v = self._transcode(i, value)
        off = lo & 63
        mask = (1 << cb) - 1
        words[w0] = (words[w0] & ~((mask << off) & M64) | ((v << off) & M64)) & M64
        if w1 != w0:
            got = 64 - off
            rest = cb - got
            words[w1] = (words[w1] & ~((1 << rest) - 1)) | (v >> got)


class Layout:
    """Address map for k independent memories sharing one word sequence."""

    __slots__ = ("k", "regime", "sizes_bits", "_offsets", "total_words")

    def __init__(self, k, regime, sizes_bits, offsets, total_words):
        self.k = k
        self.regime = regime
        self.sizes_bits = tuple(sizes_bits)
        self._offsets = offsets
        self.total_words = total_words

    def addr(self, stream, j):
        """Global 0-based word index of word j of stream (1-based)."""
        if self.regime != "round_robin":
            raise ValueError("word addressing applies to the round-robin regime")
        if not 1 <= stream <= self.k:
            raise ValueError("stream out of range")
        return (stream - 1) + j * self.k

    def bit_addr(self, stream, b):
        """Global bit offset of payload bit b of stream, packed regime."""
        if self.regime != "packed":
            raise ValueError("bit addressing applies to the packed regime")
        return self._offsets[stream - 1] + b


def interleave_layout(k, sizes_bits):
    """Layout for k streams of the given bit sizes.

    While the total is at most one word, everything packs into O(1)
    words behind a unary header recording the k sizes.  Beyond that,
    words are dealt round-robin: stream i owns global words i-1, i-1+k,
    i-1+2k, ... (0-based), so the space is at most k * max stream words.
    """
    sizes_bits = list(sizes_bits)
    if len(sizes_bits) != k:
        raise ValueError("need one size per stream")
    total = sum(sizes_bits)
    if total <= 64:
        header = total + k
        offsets = []
        pos = header
        for s in sizes_bits:
            offsets.append(pos)
            pos += s
        return Layout(k, "packed", sizes_bits, offsets, (pos + 63) >> 6)
    per = max((s + 63) >> 6 for s in sizes_bits)
    return Layout(k, "round_robin", sizes_bits, None, per * k)

"""Mutable digit sequences over arbitrary alphabets at near-entropy space.

Digit ell is drawn from {0, ..., c_ell - 1}, where the bases are given as
a short run-length list of (base, count) pairs.  Storing each digit in
ceil(log2 c) bits would waste up to one bit per digit; here a run is cut
into chunks of 2**b digits and each chunk packs r consecutive digits into
one big digit, so the rounding waste is shared by r digits at once.

Within a chunk the big digits sit at the leaves of a balanced binary
tree.  Every node splits its value into raw low-order bits, written to
the chunk payload, and a narrow spill forwarded to its parent; siblings'
spills are combined into the parent's value and split again.  Spill
domains are pinned to [K, 2K] with K about n**2, which keeps the
rounding loss per node below 1/K bits, and only the root's spill is
stored verbatim.  A chunk therefore occupies at most one bit more than
the entropy of its digits.

Reads and writes walk one root-to-leaf path, decoding spills on the way
down and, for writes, re-encoding on the way back up.
"""

from array import array

from .wordops import get_bits, set_bits

_WORD_CAP = 1 << 64


def _split(domain, K):
    """Raw-bit count k and spill domain for a value drawn from [domain].

    The value v is stored as k low bits plus the spill v >> k; k is the
    largest shift that keeps the spill domain ceil(domain / 2**k) at K or
    above, so the spill never carries fewer than log2(K) bits of the
    value and the ceiling costs at most log2(1 + 1/K) bits.
    """
    if domain >= K:
        k = (domain // K).bit_length() - 1
    else:
        k = 0
    return k, (domain + (1 << k) - 1) >> k


class _ChunkShape:
    """Split constants for one (base, chunk length) combination.

    Levels are listed bottom-up.  All nodes of a level share one split
    except possibly the last, which covers the short trailing big digit
    or, on odd levels, passes a lone child's spill through unchanged.
    Each entry is (count, k_uniform, spill_uniform, k_tail, spill_tail,
    payload bit offset); the uniform stride also locates the tail node,
    since every node before it is uniform.
    """

    __slots__ = ("c", "length", "r", "powers", "levels", "root_off",
                 "root_bits", "chunk_bits")

    def __init__(self, c, length, K):
        r = 1
        p = c
        while p < K:
            r += 1
            p *= c
        self.c = c
        self.length = length
        self.r = r
        self.powers = [c ** i for i in range(r + 1)]
        m = -(-length // r)
        tail_len = length - (m - 1) * r
        k_u, s_u = _split(p, K)
        k_t, s_t = _split(c ** tail_len, K)
        if m == 1:
            k_u, s_u = k_t, s_t
        levels = [(m, k_u, s_u, k_t, s_t, 0)]
        off = (m - 1) * k_u + k_t
        cnt = m
        while cnt > 1:
            nxt = (cnt + 1) >> 1
            ku, su = _split(s_u * s_u, K)
            if cnt & 1:
                kt, st = _split(s_t, K)
            else:
                kt, st = _split(s_u * s_t, K)
            levels.append((nxt, ku, su, kt, st, off))
            off += (nxt - 1) * ku + kt
            cnt, s_u, s_t = nxt, su, st
        self.levels = levels
        self.root_off = off
        self.root_bits = (s_t - 1).bit_length()
        self.chunk_bits = off + self.root_bits


class CAryArray:
    """An array of n digits with per-position bases, near entropy bounds.

    spec is a sequence of (base, count) pairs describing the bases run by
    run; lookup cost grows with the number of runs, which is expected to
    stay small.  Cells hold 0 until written.  Base-1 runs store nothing
    and always read 0.

    >>> a = CAryArray([(3, 5), (10, 2)])
    >>> a.write(4, 2); a.write(5, 9)
    >>> a.read(4), a.read(5), a.read(0)
    (2, 9, 0)
    """

    __slots__ = ("n", "b", "_runs", "_shapes", "_words", "_payload_bits")

    def __init__(self, spec, b=None):
        pairs = []
        n = 0
        for entry in spec:
            c, cnt = entry
            if not isinstance(c, int) or not isinstance(cnt, int):
                raise TypeError("spec entries must be (int base, int count)")
            if c < 1:
                raise ValueError("digit base must be at least 1")
            if c > _WORD_CAP:
                raise ValueError("digit base must fit in one word")
            if cnt < 1:
                raise ValueError("run count must be positive")
            pairs.append((c, cnt))
            n += cnt
        if not pairs:
            raise ValueError("spec must name at least one run")
        if n > 1 << 32:
            raise ValueError("universe too large")
        if b is None:
            b = max(1, min(16, n.bit_length() - 1))
        if not 1 <= b <= 30:
            raise ValueError("chunk exponent out of range")
        self.n = n
        self.b = b
        K = max(4, n * n)
        chunk = 1 << b
        shapes = {}

        def shape_for(c, length):
            key = (c, length)
            sh = shapes.get(key)
            if sh is None:
                sh = shapes[key] = _ChunkShape(c, length, K)
            return sh

        runs = []
        start = 0
        bit_base = 0
        for c, cnt in pairs:
            if c == 1:
                runs.append((start, cnt, 1, 0, None, None, 0, 0))
            else:
                n_full, tail = divmod(cnt, chunk)
                fsh = shape_for(c, chunk) if n_full else None
                tsh = shape_for(c, tail) if tail else None
                full_bits = fsh.chunk_bits if fsh else 0
                runs.append((start, cnt, c, bit_base, fsh, tsh, n_full,
                             full_bits))
                bit_base += n_full * full_bits
                if tsh:
                    bit_base += tsh.chunk_bits
            start += cnt
        self._runs = runs
        self._shapes = shapes
        self._payload_bits = bit_base
        self._words = array("Q", bytes(8 * ((bit_base + 63) >> 6)))

    def __len__(self):
        return self.n

    @property
    def bits_used(self):
        return self._payload_bits + 64

    @property
    def table_bits(self):
        """Bits of shared split constants, reported apart from payload."""
        bits = 64 + 64 * 8 * len(self._runs)
        for sh in self._shapes.values():
            bits += 64 * 6 * len(sh.levels) + 128 * (sh.r + 1) + 256
        return bits

    def _locate(self, i):
        for run in self._runs:
            start, cnt = run[0], run[1]
            if i < start + cnt:
                c = run[2]
                if c == 1:
                    return 1, None, 0, 0
                j = i - start
                ci = j >> self.b
                if ci < run[6]:
                    return c, run[4], run[3] + ci * run[7], j & ((1 << self.b) - 1)
                return c, run[5], run[3] + run[6] * run[7], j - (run[6] << self.b)
        raise AssertionError("unreachable")

    def _leaf_value(self, shape, base, leaf):
        levels = shape.levels
        words = self._words
        s = get_bits(words, base + shape.root_off, shape.root_bits)
        for j in range(len(levels) - 1, 0, -1):
            cnt, k_u, _s_u, k_t, _s_t, off = levels[j]
            q = leaf >> j
            k = k_t if q == cnt - 1 else k_u
            y = (s << k) | get_bits(words, base + off + q * k_u, k)
            child = levels[j - 1]
            if 2 * q + 1 >= child[0]:
                s = y
            elif (leaf >> (j - 1)) & 1:
                s = y // child[2]
            else:
                s = y % child[2]
        cnt, k_u, _s_u, k_t, _s_t, off = levels[0]
        k = k_t if leaf == cnt - 1 else k_u
        return (s << k) | get_bits(words, base + off + leaf * k_u, k)

    def _set_leaf(self, shape, base, leaf, value):
        levels = shape.levels
        top = len(levels) - 1
        words = self._words
        path = []
        s = get_bits(words, base + shape.root_off, shape.root_bits)
        for j in range(top, 0, -1):
            cnt, k_u, _s_u, k_t, _s_t, off = levels[j]
            q = leaf >> j
            k = k_t if q == cnt - 1 else k_u
            y = (s << k) | get_bits(words, base + off + q * k_u, k)
            child = levels[j - 1]
            if 2 * q + 1 >= child[0]:
                path.append((q, k, off, k_u, None, 0))
                s = y
            else:
                s_dom = child[2]
                if (leaf >> (j - 1)) & 1:
                    path.append((q, k, off, k_u, s_dom, y % s_dom))
                    s = y // s_dom
                else:
                    path.append((q, k, off, k_u, s_dom, y // s_dom))
                    s = y % s_dom
        cnt, k_u, _s_u, k_t, _s_t, off = levels[0]
        k = k_t if leaf == cnt - 1 else k_u
        set_bits(words, base + off + leaf * k_u, k, value & ((1 << k) - 1))
        s = value >> k
        for j in range(1, top + 1):
            q, k, off, k_u, s_dom, s_sib = path.pop()
            if s_dom is None:
                y = s
            elif (leaf >> (j - 1)) & 1:
                y = s_sib + s_dom * s
            else:
                y = s + s_dom * s_sib
            set_bits(words, base + off + q * k_u, k, y & ((1 << k) - 1))
            s = y >> k
        set_bits(words, base + shape.root_off, shape.root_bits, s)

    def read(self, i):
        """The digit at 0-based position i (0 if never written)."""
        if not 0 <= i < self.n:
            raise IndexError("position out of range")
        c, shape, base, j = self._locate(i)
        if c == 1:
            return 0
        leaf, d = divmod(j, shape.r)
        return (self._leaf_value(shape, base, leaf) // shape.powers[d]) % c

    def write(self, i, v):
        """Store digit v at 0-based position i."""
        if not 0 <= i < self.n:
            raise IndexError("position out of range")
        c, shape, base, j = self._locate(i)
        if not 0 <= v < c:
            raise ValueError("digit out of range for its base")
        if c == 1:
            return
        leaf, d = divmod(j, shape.r)
        x = self._leaf_value(shape, base, leaf)
        p = shape.powers[d]
        old = (x // p) % c
        if old != v:
            self._set_leaf(shape, base, leaf, x + (v - old) * p)

"""Entropy-compact color dictionary for a power-of-two palette.

Colors are f-bit digits (c = 2**f) packed into wide leaf records, so n
elements cost n*f bits plus lower-order overhead.  Leaf records sit
under shallow d-ary trees.  A record that misses at least one color can
be re-coded digitwise into base c-1 ("gap coding"); the coding leaves a
sprinkling of bits unused, and those spare bits store presence markers
plus a route log for the tree above.  The trees therefore keep all of
their navigation state inside the leaf records themselves: no separate
index is allocated, and a fresh structure is two bits of root state.

Where the state of a region has to live in a record other than its own
(the region's record was re-coded and lent out its spare bits), records
swap places pairwise.  A descent from the root reconstructs the swap in
O(t) steps from the route logs, so reads stay cheap while the space
stays at n*f + o(n*f) for fixed t.

The universe is split into segments of one full tree each; per color a
systematic bit-vector dictionary marks which segments contain it, which
gives constant-depth choice and robust iteration over the whole range.
"""

from .atomic import AtomicColorDict
from .trie import SystematicChoiceDict
from .wordops import ones_pattern, parallel_leq, zero_fields

# Node status codes double as stored child codes: 0 means the subtree
# holds every color under every leaf record ("full"), 1 means it holds
# nothing but color 0 ("empty"), any other value is the presence bitmap
# of a partially colored ("light") subtree.


def _lowzero(bits):
    """Index of the lowest clear bit."""
    return (~bits & (bits + 1)).bit_length() - 1


def _combine(codes, allc):
    """Status code of a node from its children's codes."""
    for s in codes:
        if s:
            break
    else:
        return 0
    acc = 0
    for s in codes:
        acc |= allc if s == 0 else s
    return acc


class _Geometry:
    """Shape constants, bit masks and coding tables for one (c, t).

    Leaf records are simulated double words of W = 2*d*c*c*f*t bits,
    with d >= 2 chosen so one record packs w' = W/f digits and a tree of
    N = d**t leaves covers N*w' elements.  The gap coding groups digits
    c at a time (small groups, base c-1 in c*f-1 bits) and 2*c small
    groups to a big group; the top bit of every small group is left out
    of the coding.  Odd-numbered top bits hold per-color presence
    markers, even-numbered ones are the spare bits: c*d*t per record,
    exactly a route log of t child-code vectors of c*d bits.
    """

    _CACHE = {}

    @classmethod
    def get(cls, c, t):
        key = (c, t)
        geo = cls._CACHE.get(key)
        if geo is None:
            geo = cls._CACHE[key] = cls(c, t)
        return geo

    def __init__(self, c, t):
        if c < 2 or c & (c - 1):
            raise ValueError("geometry needs a power-of-two color count >= 2")
        if t < 1:
            raise ValueError("tradeoff parameter must be positive")
        self.c = c
        self.t = t
        self.f = f = c.bit_length() - 1
        unit = c * c * f * t
        self.d = d = max(2, 64 // unit)
        self.W = W = 2 * d * unit
        self.wp = wp = W // f
        self.N = d ** t
        self.allc = (1 << c) - 1
        self.fmask = (1 << f) - 1
        self.chunk = ch = c * f
        self.packw = ch - 1
        self.nchunk = wp // c
        self.bigbits = 2 * c * ch
        self.ngroups = W // self.bigbits
        self.gdigits = 2 * c * c
        self.gmask = (1 << self.bigbits) - 1
        self.cd = c * d
        self.paybits = c * d * t
        self.q = c - 1
        self.word_mask = (1 << W) - 1
        self.ones_f = ones_pattern(wp, f)
        base = ones_pattern(self.nchunk, ch)
        self.chunk_fsel = base * self.fmask
        self.chunk_pack = base * ((1 << self.packw) - 1)
        # marker and spare bit positions
        self.mark_mask = []
        for jc in range(c - 1):
            mm = 0
            for g in range(self.ngroups):
                mm |= 1 << (g * self.bigbits + (2 * jc + 1) * ch - 1)
            self.mark_mask.append(mm)
        self.mark_all = 0
        for mm in self.mark_mask:
            self.mark_all |= mm
        spare = []
        for b in range(self.paybits):
            g, k = divmod(b, c)
            spare.append(g * self.bigbits + (2 * k + 2) * ch - 1)
        self.spare_pos = tuple(spare)
        # base-(c-1) division by multiplication with the rounded-up
        # reciprocal; products span three chunks, so chunks are divided
        # in three interleaved passes
        self.invshift = 2 * ch
        self.inv = -(-(1 << self.invshift) // self.q) if self.q > 1 else 0
        sel = [0, 0, 0]
        pm = (1 << self.packw) - 1
        for s in range(self.nchunk):
            sel[s % 3] |= pm << (s * ch)
        self.sel3 = tuple(sel)
        self.ones_cd = tuple(ones_pattern(m, c) if m else 0
                             for m in range(d + 1))
        self.dpow = tuple(d ** e for e in range(t + 1))
        # lazy block coding tables, realized on first inspection
        self.B = max(1, c // 4)
        self.bdigits = self.B * c
        self.bwidth = self.bdigits * f
        self.entry_bits = self.B * self.packw + self.bwidth + (c - 1)
        self._dec = {}
        self._enc = {}
        self.table_bits = 0

    # -- standard form -------------------------------------------------

    def std_color(self, word, m):
        return (word >> ((m - 1) * self.f)) & self.fmask

    def std_setcolor(self, word, j, m):
        sh = (m - 1) * self.f
        return (word & ~(self.fmask << sh)) | (j << sh)

    def std_successor(self, word, j, m):
        """Least position > m with digit j, else 0."""
        y = word ^ (j * self.ones_f) if j else word
        zf = zero_fields(y, self.wp, self.f)
        if m:
            zf &= -1 << (m * self.f)
        if not zf:
            return 0
        return ((zf & -zf).bit_length() - 1) // self.f + 1

    def std_presence(self, word):
        pres = 0
        for j in range(self.c):
            y = word ^ (j * self.ones_f) if j else word
            if zero_fields(y, self.wp, self.f):
                pres |= 1 << j
        return pres

    # -- gap coding ----------------------------------------------------

    def encode_gap(self, word, gap):
        """Re-code a standard record that misses color `gap`.

        Digits above the gap shift down one, small groups pack to base
        c-1, marker bits record which re-coded values occur in each big
        group.  Spare bits come out zero; the caller lays in any route
        log afterwards.
        """
        leq_g = parallel_leq(word, gap, self.wp, self.f)
        if gap:
            eq = leq_g & ~parallel_leq(word, gap - 1, self.wp, self.f)
        else:
            eq = leq_g
        if eq:
            raise ValueError("gap color occurs in the record")
        x = word - (self.ones_f ^ leq_g)
        acc = 0
        for e in range(self.c - 1, -1, -1):
            acc = acc * self.q + ((x >> (e * self.f)) & self.chunk_fsel)
        out = acc
        for jc in range(self.c - 1):
            le = parallel_leq(x, jc, self.wp, self.f)
            if jc:
                le &= ~parallel_leq(x, jc - 1, self.wp, self.f)
            if not le:
                continue
            for g in range(self.ngroups):
                if (le >> (g * self.bigbits)) & self.gmask:
                    out |= 1 << (g * self.bigbits
                                 + (2 * jc + 1) * self.chunk - 1)
        return out

    def _div_all(self, acc):
        # floor division of every small-group value by c-1
        if self.q == 1:
            return acc
        out = 0
        for r in range(3):
            x = acc & self.sel3[r]
            out |= ((x * self.inv) >> self.invshift) & self.sel3[r]
        return out

    def decode_gap(self, word, gap):
        """Standard digits of a gap-coded record; markers and spare bits
        are ignored, route logs are dropped."""
        acc = word & self.chunk_pack
        dig = 0
        for e in range(self.c):
            quo = self._div_all(acc)
            rem = acc - self.q * quo if self.q > 1 else 0
            dig |= rem << (e * self.f)
            acc = quo
        if gap == 0:
            return dig + self.ones_f
        ge = self.ones_f ^ parallel_leq(dig, gap - 1, self.wp, self.f)
        return dig + ge

    # -- block tables --------------------------------------------------

    def _fill_block(self, key):
        packs = [(key >> (bi * self.packw)) & ((1 << self.packw) - 1)
                 for bi in range(self.B)]
        digits = 0
        pres = 0
        for bi, v in enumerate(packs):
            for e in range(self.c):
                if self.q > 1:
                    v, r = divmod(v, self.q)
                else:
                    r = 0
                digits |= r << ((bi * self.c + e) * self.f)
                pres |= 1 << r
        ent = (digits, pres & ((1 << (self.c - 1)) - 1))
        self._dec[key] = ent
        if digits not in self._enc:
            self._enc[digits] = (key, ent[1])
        self.table_bits += self.entry_bits
        return ent

    def _pack_block(self, digits):
        got = self._enc.get(digits)
        if got is not None:
            return got
        key = 0
        pres = 0
        for bi in range(self.B):
            v = 0
            for e in range(self.c - 1, -1, -1):
                r = (digits >> ((bi * self.c + e) * self.f)) & self.fmask
                v = v * self.q + r
                pres |= 1 << r
            key |= v << (bi * self.packw)
        ent = (digits, pres & ((1 << (self.c - 1)) - 1))
        if key not in self._dec:
            self._dec[key] = ent
            self.table_bits += self.entry_bits
        self._enc[digits] = (key, ent[1])
        return self._enc[digits]

    def _group_digits(self, word, g):
        """Re-coded digits of big group g of a gap-coded record."""
        out = 0
        chunk0 = g * 2 * self.c
        pm = (1 << self.packw) - 1
        for b0 in range(0, 2 * self.c, self.B):
            key = 0
            for bi in range(self.B):
                s = chunk0 + b0 + bi
                key |= ((word >> (s * self.chunk)) & pm) << (bi * self.packw)
            ent = self._dec.get(key)
            if ent is None:
                ent = self._fill_block(key)
            out |= ent[0] << (b0 * self.c * self.f)
        return out

    def _pack_group(self, dig):
        """Chunk bits and presence bitmap for one big group's digits."""
        out = 0
        pres = 0
        bm = (1 << self.bwidth) - 1
        pm = (1 << self.packw) - 1
        for b0 in range(0, 2 * self.c, self.B):
            key, bp = self._pack_block((dig >> (b0 * self.c * self.f)) & bm)
            pres |= bp
            for bi in range(self.B):
                out |= ((key >> (bi * self.packw)) & pm) \
                    << ((b0 + bi) * self.chunk)
        return out, pres

    def _group_first(self, dig, jj, after):
        """Least digit index >= after holding re-coded value jj, or -1."""
        le = parallel_leq(dig, jj, self.gdigits, self.f)
        if jj:
            le &= ~parallel_leq(dig, jj - 1, self.gdigits, self.f)
        if after:
            le &= -1 << (after * self.f)
        if not le:
            return -1
        return ((le & -le).bit_length() - 1) // self.f

    # -- gap-form operations -------------------------------------------

    def gap_color(self, word, gap, m):
        g = (m - 1) // self.gdigits
        dig = self._group_digits(word, g)
        v = (dig >> (((m - 1) - g * self.gdigits) * self.f)) & self.fmask
        return v if v < gap else v + 1

    def gap_setcolor(self, word, gap, j, m):
        if j == gap:
            raise ValueError("record is coded around that color; "
                             "re-code before writing it")
        g = (m - 1) // self.gdigits
        e = (m - 1) - g * self.gdigits
        dig = self._group_digits(word, g)
        jj = j if j < gap else j - 1
        old = (dig >> (e * self.f)) & self.fmask
        if old == jj:
            return word
        dig ^= (old ^ jj) << (e * self.f)
        chunks, pres = self._pack_group(dig)
        base = g * self.bigbits
        gm = self.gmask << base
        word &= ~((self.chunk_pack | self.mark_all) & gm)
        word |= chunks << base
        for jc in range(self.c - 1):
            if (pres >> jc) & 1:
                word |= 1 << (base + (2 * jc + 1) * self.chunk - 1)
        return word

    def gap_successor(self, word, gap, j, m):
        if j == gap:
            return 0
        jj = j if j < gap else j - 1
        if m:
            g0 = (m - 1) // self.gdigits
            e = self._group_first(self._group_digits(word, g0), jj,
                                  m - g0 * self.gdigits)
            if e >= 0:
                return g0 * self.gdigits + e + 1
        else:
            g0 = -1
        mk = word & self.mark_mask[jj]
        if g0 >= 0:
            mk &= -1 << ((g0 + 1) * self.bigbits)
        if not mk:
            return 0
        g1 = ((mk & -mk).bit_length() - 1) // self.bigbits
        e = self._group_first(self._group_digits(word, g1), jj, 0)
        return g1 * self.gdigits + e + 1

    # -- spare bits ----------------------------------------------------

    def spare_gather(self, word):
        v = 0
        for idx, pos in enumerate(self.spare_pos):
            v |= ((word >> pos) & 1) << idx
        return v

    def spare_scatter(self, val):
        w = 0
        for idx, pos in enumerate(self.spare_pos):
            if (val >> idx) & 1:
                w |= 1 << pos
        return w

    def route_get(self, word, si):
        base = si * self.cd
        v = 0
        for o in range(self.cd):
            v |= ((word >> self.spare_pos[base + o]) & 1) << o
        return v

    def route_set(self, word, si, nav):
        base = si * self.cd
        for o in range(self.cd):
            pos = self.spare_pos[base + o]
            word = (word & ~(1 << pos)) | (((nav >> o) & 1) << pos)
        return word


class LeafDict:
    """One leaf record with a representation tag, for standalone use.

    `gap` is None in standard form; in gap form it names the absent
    color the record is coded around.  The tree keeps its records as
    bare integers and calls the same geometry routines; this wrapper
    exists for the record-level contract and its tests.
    """

    __slots__ = ("g", "word", "gap")

    def __init__(self, c, t=1, word=0, gap=None):
        self.g = _Geometry.get(c, t)
        self.word = word
        self.gap = gap

    @property
    def universe_size(self):
        return self.g.wp

    @property
    def bits_used(self):
        return self.g.W

    def to_gap(self, gap):
        if self.gap is not None:
            raise ValueError("record is already gap-coded")
        if not 0 <= gap < self.g.c:
            raise ValueError("no such color")
        self.word = self.g.encode_gap(self.word, gap)
        self.gap = gap

    def to_standard(self):
        if self.gap is None:
            raise ValueError("record is already standard")
        self.word = self.g.decode_gap(self.word, self.gap)
        self.gap = None

    @property
    def spare(self):
        if self.gap is None:
            raise ValueError("standard records have no spare bits")
        return self.g.spare_gather(self.word)

    @spare.setter
    def spare(self, val):
        if self.gap is None:
            raise ValueError("standard records have no spare bits")
        self.word = (self.word & ~self.g.spare_scatter((1 << self.g.paybits) - 1)) \
            | self.g.spare_scatter(val)

    def _check(self, m):
        if not 1 <= m <= self.g.wp:
            raise ValueError("position out of range: %r" % (m,))

    def color(self, m):
        self._check(m)
        if self.gap is None:
            return self.g.std_color(self.word, m)
        return self.g.gap_color(self.word, self.gap, m)

    def setcolor(self, j, m):
        self._check(m)
        if not 0 <= j < self.g.c:
            raise ValueError("no such color")
        if self.gap is None:
            self.word = self.g.std_setcolor(self.word, j, m)
        else:
            self.word = self.g.gap_setcolor(self.word, self.gap, j, m)

    def successor(self, j, m):
        if not 0 <= j < self.g.c or not 0 <= m <= self.g.wp:
            return 0
        if self.gap is None:
            return self.g.std_successor(self.word, j, m)
        return self.g.gap_successor(self.word, self.gap, j, m)

    def presence(self):
        if self.gap is None:
            return self.g.std_presence(self.word)
        pres = 0
        for jc in range(self.g.c - 1):
            if self.word & self.g.mark_mask[jc]:
                j = jc if jc < self.gap else jc + 1
                pres |= 1 << j
        return pres


class _Node:
    """Descent state for one tree node."""

    __slots__ = ("hh", "k", "sc", "inq", "top", "hist", "nav", "q", "nch")

    def __init__(self, hh, k, sc, inq, top, hist, nav, nch):
        self.hh = hh
        self.k = k
        self.sc = sc
        self.inq = inq
        self.top = top
        self.hist = hist
        self.nav = nav
        self.q = -1
        self.nch = nch


class TreeDict:
    """Color dictionary over n_leaves * w' digits in one implicit tree.

    State is the record array plus two root status bits; everything
    else (child codes, which record lives where) is reconstructed per
    operation from route logs held in spare bits.  A record region
    whose range misses a color may be gap-coded and serve as the log
    carrier of the thin path through it; the path's end record and the
    leftmost record under the path's head swap storage slots.  With
    `scribble` the record array starts as garbage, which a fresh
    (all-empty) tree must tolerate.
    """

    __slots__ = ("g", "nl", "h", "root_full", "root_empty", "_n_at")

    def __init__(self, geom, n_leaves=None, scribble=None):
        self.g = geom
        nl = geom.N if n_leaves is None else n_leaves
        if not 1 <= nl <= geom.N:
            raise ValueError("leaf count out of range")
        self.nl = nl
        if scribble is not None:
            self.h = [scribble.getrandbits(geom.W) for _ in range(nl)]
        else:
            self.h = [0] * nl
        self.root_full = False
        self.root_empty = True
        self._n_at = tuple(-(-nl // geom.dpow[hh])
                           for hh in range(geom.t + 1))

    @property
    def universe_size(self):
        return self.nl * self.g.wp

    @property
    def bits_used(self):
        return self.nl * self.g.W + 2

    # -- descent machinery ---------------------------------------------

    def _nch(self, hh, k):
        d = self.g.d
        return min(k * d, self._n_at[hh - 1]) - (k - 1) * d

    def _lml(self, hh, k):
        return (k - 1) * self.g.dpow[hh] + 1

    def _pref(self, nav, nch):
        """Preferred child slot: leftmost light, else leftmost empty."""
        c = self.g.c
        cm = self.g.allc
        fallback = -1
        for s in range(nch):
            code = (nav >> (s * c)) & cm
            if code == 1:
                if fallback < 0:
                    fallback = s
            elif code != 0:
                return s
        return fallback

    def _root(self):
        g = self.g
        t = g.t
        nch = self._n_at[t - 1]
        if self.root_full:
            return _Node(t, 1, 0, False, False, 0, 0, nch)
        if self.root_empty:
            return _Node(t, 1, 1, False, False, 0, g.ones_cd[nch], nch)
        nav = g.route_get(self.h[0], 0)
        pres = 0
        for s in range(nch):
            code = (nav >> (s * g.c)) & g.allc
            pres |= g.allc if code == 0 else code
        return _Node(t, 1, pres, True, True, 1, nav, nch)

    def _step(self, e, slot):
        """Child `slot` of node `e`, with status, membership and log
        source worked out from the parent's state alone."""
        g = self.g
        hh = e.hh - 1
        k = (e.k - 1) * g.d + slot + 1
        if e.sc == 0:
            csc = 0
        elif e.sc == 1:
            csc = 1
        else:
            csc = (e.nav >> (slot * g.c)) & g.allc
        inq = False
        top = False
        hist = 0
        if e.sc == 1:
            inq = e.inq and slot == 0
            hist = e.hist if inq else 0
        elif e.sc != 0:
            pref = self._pref(e.nav, e.nch)
            if csc == 1 or (csc != 0 and hh == 0):
                inq = slot == pref
                hist = e.hist if inq else 0
            elif csc != 0:
                inq = True
                top = slot != pref
                hist = self._lml(hh, k) if top else e.hist
        if hh == 0:
            return _Node(hh, k, csc, inq, top, hist, 0, 0)
        nch = self._nch(hh, k)
        if csc == 0:
            nav = 0
        elif csc == 1:
            nav = g.ones_cd[nch]
        else:
            nav = g.route_get(self.h[hist - 1], g.t - hh)
        return _Node(hh, k, csc, inq, top, hist, nav, nch)

    def _descend(self, i):
        """Trail of nodes from the root to leaf i, each inner entry
        remembering the slot taken."""
        g = self.g
        trail = [self._root()]
        e = trail[0]
        for hh in range(g.t, 0, -1):
            anc = (i - 1) // g.dpow[hh - 1] + 1
            slot = anc - (e.k - 1) * g.d - 1
            e.q = slot
            e = self._step(e, slot)
            trail.append(e)
        return trail

    def _seek_tip(self, e):
        """Follow preferred children from e down to the path's end."""
        while e.hh:
            if e.sc == 1:
                slot = 0
            else:
                slot = self._pref(e.nav, e.nch)
            e = self._step(e, slot)
        return e

    def _chain(self, par, slot):
        """Leftmost leaf under child `slot` of `par`, with the all-empty
        route entries of the nodes passed on the way down."""
        g = self.g
        navs = []
        hh = par.hh - 1
        k = (par.k - 1) * g.d + slot + 1
        while hh:
            navs.append((g.t - hh, g.ones_cd[self._nch(hh, k)]))
            k = (k - 1) * g.d + 1
            hh -= 1
        return k, navs

    def _place_from(self, trail, i):
        leaf = trail[-1]
        if leaf.inq:
            return leaf.hist
        for e in trail[:-1]:
            if e.top and e.hist == i:
                return self._seek_tip(e).k
        return i

    def locate(self, i):
        """(place, code, is_tip): which slot holds leaf i's record, the
        leaf's status code, and whether i ends a thin path."""
        if not 1 <= i <= self.nl:
            raise ValueError("no such leaf")
        trail = self._descend(i)
        leaf = trail[-1]
        return self._place_from(trail, i), leaf.sc, leaf.inq

    # -- queries -------------------------------------------------------

    def _checkpos(self, l):
        if not 1 <= l <= self.universe_size:
            raise ValueError("position out of range: %r" % (l,))

    def color(self, l):
        self._checkpos(l)
        g = self.g
        i = (l - 1) // g.wp + 1
        m = l - (i - 1) * g.wp
        place, sc, tip = self.locate(i)
        if sc == 1:
            return 0
        word = self.h[place - 1]
        if tip:
            return g.gap_color(word, _lowzero(sc), m)
        return g.std_color(word, m)

    def has_color(self, j):
        r = self._root()
        if r.sc == 0:
            return True
        if r.sc == 1:
            return j == 0
        return bool((r.sc >> j) & 1)

    def choice(self, j):
        return self.successor(j, 0)

    def successor(self, j, l):
        """Least position > l with color j, else 0."""
        g = self.g
        if not 0 <= j < g.c or not 0 <= l <= self.universe_size:
            return 0
        if l:
            i = (l - 1) // g.wp + 1
            m = l - (i - 1) * g.wp
        else:
            i, m = 1, 0
        trail = self._descend(i)
        leaf = trail[-1]
        if leaf.sc == 1:
            if j == 0 and m < g.wp:
                return l + 1
        else:
            place = self._place_from(trail, i)
            word = self.h[place - 1]
            if leaf.inq:
                k = g.gap_successor(word, _lowzero(leaf.sc), j, m)
            else:
                k = g.std_successor(word, j, m)
            if k:
                return (i - 1) * g.wp + k
        # walk back up: nearest right sibling subtree showing color j
        start = None
        for dpt in range(len(trail) - 2, -1, -1):
            e = trail[dpt]
            for s in range(e.q + 1, e.nch):
                code = (e.nav >> (s * g.c)) & g.allc
                if code == 0 or (code >> j) & 1:
                    start = self._step(e, s)
                    break
            if start is not None:
                break
        if start is None:
            return 0
        cur = start
        while cur.hh:
            if cur.sc in (0, 1):
                slot = 0
            else:
                slot = -1
                for s in range(cur.nch):
                    code = (cur.nav >> (s * g.c)) & g.allc
                    if code == 0 or (code >> j) & 1:
                        slot = s
                        break
            cur = self._step(cur, slot)
        k = cur.k
        if cur.sc == 1:
            return (k - 1) * g.wp + 1
        place, sc, tip = self.locate(k)
        word = self.h[place - 1]
        if tip:
            r = g.gap_successor(word, _lowzero(sc), j, 0)
        else:
            r = g.std_successor(word, j, 0)
        return (k - 1) * g.wp + r

    # -- update --------------------------------------------------------

    def setcolor(self, j, l):
        g = self.g
        if not 0 <= j < g.c:
            raise ValueError("no such color")
        self._checkpos(l)
        i = (l - 1) // g.wp + 1
        m = l - (i - 1) * g.wp
        trail = self._descend(i)
        leaf = trail[-1]
        pi = self._place_from(trail, i)
        if leaf.sc == 1:
            j0 = 0
            gap_old = None
            others = g.wp > 1
        else:
            word = self.h[pi - 1]
            if leaf.inq:
                gap_old = _lowzero(leaf.sc)
                j0 = g.gap_color(word, gap_old, m)
                s1 = g.gap_successor(word, gap_old, j0, 0)
                others = s1 != m or g.gap_successor(word, gap_old, j0, m) != 0
            else:
                gap_old = None
                j0 = g.std_color(word, m)
                s1 = g.std_successor(word, j0, 0)
                others = s1 != m or g.std_successor(word, j0, m) != 0
        if j0 == j:
            return
        pres_old = g.allc if leaf.sc == 0 else leaf.sc
        pres_new = pres_old | (1 << j)
        if not others:
            pres_new &= ~(1 << j0)
        sc_leaf = 0 if pres_new == g.allc else pres_new
        # new codes bottom up, new child-code vectors for the trail
        L = len(trail)
        sc_new = [0] * L
        nav_new = [0] * L
        sc_new[L - 1] = sc_leaf
        child = sc_leaf
        for dpt in range(L - 2, -1, -1):
            e = trail[dpt]
            nv = (e.nav & ~(g.allc << (e.q * g.c))) | (child << (e.q * g.c))
            nav_new[dpt] = nv
            sc_new[dpt] = _combine(
                [(nv >> (s * g.c)) & g.allc for s in range(e.nch)], g.allc)
            child = sc_new[dpt]
        # new path membership top down
        inq_new = [False] * L
        inq_new[0] = sc_new[0] not in (0, 1)
        for dpt in range(1, L):
            e = trail[dpt - 1]
            psc = sc_new[dpt - 1]
            mysc = sc_new[dpt]
            if psc == 1:
                inq_new[dpt] = inq_new[dpt - 1] and e.q == 0
            elif psc == 0 or mysc == 0:
                inq_new[dpt] = False
            elif mysc != 1 and dpt < L - 1:
                inq_new[dpt] = True
            else:
                inq_new[dpt] = e.q == self._pref(nav_new[dpt - 1], e.nch)
        # membership along the trail is a prefix on both sides; the
        # boundaries decide whether paths are born or die
        bold = L
        for dpt in range(L):
            if not trail[dpt].inq:
                bold = dpt
                break
        bnew = L
        for dpt in range(L):
            if not inq_new[dpt]:
                bnew = dpt
                break
        case2 = bnew > bold
        case3 = bnew < bold

        # identification phase: all reads happen before any write
        plan = None
        pn = i
        tail_navs = ()
        if case2:
            vd = bold
            if bnew < L:
                # the born or extended path ends short of the trail: its
                # tip is the leftmost all-empty descent off trail[bnew-1]
                ps = self._pref(nav_new[bnew - 1], trail[bnew - 1].nch)
                pn, tail_navs = self._chain(trail[bnew - 1], ps)
            subA = vd == 0
            if not subA:
                par = trail[vd - 1]
                for s in range(par.q):
                    code = (par.nav >> (s * g.c)) & g.allc
                    if code not in (0, 1):
                        subA = True
                        break
            if subA:
                plan = ("2A", vd)
            else:
                par = trail[vd - 1]
                vps = 0 if par.sc == 1 else self._pref(par.nav, par.nch)
                vp = self._step(par, vps)
                hleaf = self._lml(vp.hh, vp.k)
                p = hleaf if vp.sc == 1 else self._seek_tip(vp).k
                ud = next(d for d in range(vd - 1, -1, -1)
                          if trail[d].top)
                plan = ("2B", vd, vp, hleaf, p, ud)
        elif case3:
            vd = bnew
            if leaf.inq:
                po = i
            else:
                # the dying or rerouted path ran off the trail; its old
                # tip is always an all-empty descent, found from the last
                # node that keeps its old membership
                e2 = trail[bold - 1]
                vps2 = 0 if e2.sc == 1 else self._pref(e2.nav, e2.nch)
                po = self._seek_tip(self._step(e2, vps2)).k
            if trail[vd].top:
                plan = ("3A", vd, po)
            else:
                par = trail[vd - 1]
                if sc_new[vd - 1] == 1:
                    vps = 0
                else:
                    vps = self._pref(nav_new[vd - 1], par.nch)
                vp = self._step(par, vps)
                hleaf = self._lml(vp.hh, vp.k)
                p = hleaf if vp.sc == 1 else self._seek_tip(vp).k
                ud = next(d for d in range(vd - 1, -1, -1)
                          if trail[d].top)
                plan = ("3B", vd, vp, hleaf, p, ud, po)
        # source digits for the updated record
        if leaf.sc == 1:
            dig = 0
        elif leaf.inq:
            dig = g.decode_gap(self.h[pi - 1], gap_old)
        else:
            dig = self.h[pi - 1]
        dig = g.std_setcolor(dig, j, m)
        vp_word = None
        if plan and plan[0] == "3B":
            vp = plan[2]
            if vp.sc != 1 and vp.hh == 0:
                # a standalone light record becomes the new path end
                vp_word = self.h[plan[4] - 1]

        # refresh the route logs of every surviving path along the trail
        for dpt in range(L - 1):
            e = trail[dpt]
            if e.inq:
                self.h[e.hist - 1] = g.route_set(self.h[e.hist - 1], dpt,
                                                 nav_new[dpt])
        self.root_full = sc_new[0] == 0
        self.root_empty = sc_new[0] == 1

        if plan is None:
            # the path layout is unchanged
            if leaf.inq:
                word = self.h[pi - 1]
                pay = g.spare_gather(word)
                coded = g.encode_gap(dig, _lowzero(pres_new))
                self.h[pi - 1] = coded | g.spare_scatter(pay)
            else:
                self.h[pi - 1] = dig
            return

        kind = plan[0]
        if kind == "2A":
            vd = plan[1]
            v = trail[vd]
            hleaf = self._lml(v.hh, v.k)
            pay = 0
            for dpt in range(vd, min(bnew, L - 1)):
                pay |= nav_new[dpt] << (dpt * g.cd)
            for dpt, nv in tail_navs:
                pay |= nv << (dpt * g.cd)
            if pn == i:
                coded = g.encode_gap(dig, _lowzero(pres_new))
            else:
                coded = g.encode_gap(0, 1)
            neww = coded | g.spare_scatter(pay)
            old_hh = self.h[hleaf - 1]
            self.h[hleaf - 1] = neww
            if pn == i:
                if hleaf != i:
                    self.h[i - 1] = old_hh
            elif i == hleaf:
                self.h[pn - 1] = dig
            else:
                if hleaf != pn:
                    self.h[pn - 1] = old_hh
                self.h[i - 1] = dig
            return
        if kind == "2B":
            vd, vp, hleaf, p, ud = plan[1:]
            hu = trail[ud].hist
            pay = 0
            for dpt in range(ud, min(bnew, L - 1)):
                pay |= nav_new[dpt] << (dpt * g.cd)
            for dpt, nv in tail_navs:
                pay |= nv << (dpt * g.cd)
            if pn == i:
                coded = g.encode_gap(dig, _lowzero(pres_new))
            else:
                coded = g.encode_gap(0, 1)
            neww = coded | g.spare_scatter(pay)
            a = self.h[hleaf - 1]
            b = self.h[p - 1]
            cw = self.h[hu - 1]
            if vp.sc != 1 and hleaf != p:
                self.h[p - 1] = a
            if pn != hu:
                self.h[pn - 1] = dig if i == hu else b
            self.h[hu - 1] = neww
            if vp.sc != 1:
                if vp.hh == 0:
                    self.h[p - 1] = g.decode_gap(cw, _lowzero(vp.sc))
                else:
                    self.h[hleaf - 1] = cw
            if pn != i and i != hu:
                self.h[i - 1] = dig
            return
        if kind == "3A":
            vd, po = plan[1:]
            hl3 = trail[vd].hist
            if po == i:
                old_hi = self.h[i - 1]
                self.h[i - 1] = dig
                if hl3 != i:
                    self.h[hl3 - 1] = old_hi
            else:
                # every record the dying path touched drains empty, so
                # only the updated leaf needs a tidy plain word
                self.h[i - 1] = dig
            return
        # 3B: the dying path's head hands its role to a sibling path
        vd, vp, hleaf, p, ud, po = plan[1:]
        hu = trail[ud].hist
        if vp.sc == 1:
            w = g.encode_gap(0, 1)
            kk = vp.k
            for hh2 in range(vp.hh, 0, -1):
                w = g.route_set(w, g.t - hh2,
                                g.ones_cd[self._nch(hh2, kk)])
                kk = (kk - 1) * g.d + 1
        elif vp.hh == 0:
            w = g.encode_gap(vp_word, _lowzero(vp.sc))
        else:
            w = self.h[hleaf - 1]
        for dpt in range(ud, vd):
            w = g.route_set(w, dpt, nav_new[dpt])
        old_hpo = self.h[po - 1]
        old_hp = self.h[p - 1]
        self.h[hu - 1] = w
        self.h[p - 1 if i == hu else i - 1] = dig
        if i != hu and p != hu:
            self.h[p - 1] = old_hpo
        if hleaf != p:
            self.h[hleaf - 1] = old_hp


class CompactChoiceDict:
    """c-color dictionary over {1..n} at n*log2(c) + o(n) bits.

    c must be a power of two; the dense and trie dictionaries cover
    general palettes.  The universe splits into segments of one tree
    each (a trailing stub smaller than one record is kept in a flat
    field array); per color a systematic dictionary marks the segments
    containing it, with the color-0 dictionary complemented so that a
    fresh structure costs nothing.  One more systematic dictionary
    tracks which segments were ever written, so untouched segments are
    never trusted or allocated.
    """

    __slots__ = ("n", "c", "t", "g", "seg", "m1", "tree_leaves", "tail_n",
                 "_trees", "_tail", "_upper", "_touched", "_it",
                 "_base_bits")

    def __init__(self, n, c, t=1):
        if n < 1:
            raise ValueError("universe must be nonempty")
        if c < 1:
            raise ValueError("need at least one color")
        if c & (c - 1):
            raise ValueError("color count must be a power of two; use the "
                             "dense or trie dictionaries for general c")
        if t < 1:
            raise ValueError("tradeoff parameter must be positive")
        self.n = n
        self.c = c
        self.t = t
        self._it = {}
        if c == 1:
            self.g = None
            self.seg = n
            self.m1 = 1
            self._base_bits = 64
            return
        self.g = g = _Geometry.get(c, t)
        self.seg = g.N * g.wp
        self.m1 = -(-n // self.seg)
        last = n - (self.m1 - 1) * self.seg
        self.tree_leaves = [g.N] * (self.m1 - 1) + [last // g.wp]
        self.tail_n = last % g.wp
        self._trees = [None] * self.m1
        self._tail = None
        self._upper = [SystematicChoiceDict(self.m1, t) for _ in range(c)]
        self._touched = SystematicChoiceDict(self.m1, t)
        bits = 64
        for nl in self.tree_leaves:
            if nl:
                bits += nl * g.W + 2
        if self.tail_n:
            f = g.f
            bits += 64 * ((self.tail_n * f + 63) // 64) + 64
        self._base_bits = bits

    # -- plumbing ------------------------------------------------------

    def _check(self, l):
        if not 1 <= l <= self.n:
            raise ValueError("position out of range: %r" % (l,))

    def _unit_of(self, l):
        return (l - 1) // self.seg + 1

    def _unit_size(self, u):
        if u < self.m1:
            return self.seg
        return self.n - (self.m1 - 1) * self.seg

    def _materialize(self, u):
        tr = self._trees[u - 1]
        if tr is None and self.tree_leaves[u - 1]:
            tr = TreeDict(self.g, self.tree_leaves[u - 1])
            self._trees[u - 1] = tr
        if u == self.m1 and self.tail_n and self._tail is None:
            self._tail = AtomicColorDict(self.tail_n, self.c)
        self._touched.insert(u)
        return tr

    def _tree_span(self, u):
        return self.tree_leaves[u - 1] * self.g.wp

    def _unit_has(self, u, j):
        # only called on materialized units
        tr = self._trees[u - 1]
        if tr is not None and tr.has_color(j):
            return True
        if u == self.m1 and self._tail is not None:
            return bool(self._tail.successor(j, 0))
        return False

    # -- operations ----------------------------------------------------

    def color(self, l):
        self._check(l)
        if self.c == 1:
            return 0
        u = self._unit_of(l)
        off = l - (u - 1) * self.seg
        span = self._tree_span(u)
        if off <= span:
            tr = self._trees[u - 1]
            return tr.color(off) if tr is not None else 0
        if self._tail is None:
            return 0
        return self._tail.color(off - span)

    def setcolor(self, j, l):
        self._check(l)
        if not 0 <= j < self.c:
            raise ValueError("no such color")
        if self.c == 1:
            return
        u = self._unit_of(l)
        off = l - (u - 1) * self.seg
        tr = self._materialize(u)
        span = self._tree_span(u)
        if off <= span:
            j0 = tr.color(off)
            if j0 == j:
                return
            tr.setcolor(j, off)
        else:
            j0 = self._tail.color(off - span)
            if j0 == j:
                return
            self._tail.setcolor(j, off - span)
        if j0 == 0:
            if not self._unit_has(u, 0):
                self._upper[0].insert(u)
        elif not self._unit_has(u, j0):
            self._upper[j0].delete(u)
        if j == 0:
            self._upper[0].delete(u)
        else:
            self._upper[j].insert(u)

    def _unit_successor(self, u, j, pos):
        """Least position > pos with color j inside unit u, else 0."""
        tr = self._trees[u - 1]
        span = self._tree_span(u)
        if pos < span:
            if tr is None:
                return pos + 1 if j == 0 else 0
            e = tr.successor(j, pos)
            if e:
                return e
            pos = span
        if u == self.m1 and self.tail_n:
            if self._tail is None:
                return pos + 1 if j == 0 and pos < span + self.tail_n else 0
            e = self._tail.successor(j, pos - span)
            if e:
                return span + e
        return 0

    def choice(self, j):
        if not 0 <= j < self.c:
            return 0
        if self.c == 1:
            return 1 if j == 0 else 0
        if j == 0:
            u = self._upper[0].cd_choice(0)
        else:
            u = self._upper[j].cd_choice(1)
        if u == 0:
            return 0
        e = self._unit_successor(u, j, 0)
        return (u - 1) * self.seg + e if e else 0

    # -- robust iteration ----------------------------------------------

    def iter_init(self, j):
        if not 0 <= j < self.c:
            return
        if self.c == 1:
            self._it[j] = {"pos": 0}
            return
        self._upper[j].cd_iter_init(0 if j == 0 else 1)
        self._it[j] = {"u": 0, "pos": 0, "live": True}

    def iter_more(self, j):
        st = self._it.get(j)
        if st is None:
            return False
        if self.c == 1:
            return st["pos"] < self.n
        if not st["live"]:
            return False
        if st["u"] and self._unit_successor(st["u"], j, st["pos"]):
            return True
        return self._upper[j].cd_iter_more(0 if j == 0 else 1)

    def iter_next(self, j):
        st = self._it.get(j)
        if st is None:
            return 0
        if self.c == 1:
            if st["pos"] >= self.n:
                return 0
            st["pos"] += 1
            return st["pos"]
        if not st["live"]:
            return 0
        side = 0 if j == 0 else 1
        while True:
            u = st["u"]
            if u:
                e = self._unit_successor(u, j, st["pos"])
                if e:
                    st["pos"] = e
                    return (u - 1) * self.seg + e
            u = self._upper[j].cd_iter_next(side)
            if u == 0:
                st["live"] = False
                return 0
            st["u"] = u
            st["pos"] = 0

    @property
    def bits_used(self):
        bits = self._base_bits
        if self.c == 1:
            return bits
        for up in self._upper:
            bits += up.bits_used
        bits += self._touched.bits_used
        bits += self.g.table_bits
        bits += 64 * len(self._it)
        return bits

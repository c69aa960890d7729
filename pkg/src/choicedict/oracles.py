"""Reference models and replay harnesses used to validate every backend.

The naive models here are deliberately simple (plain lists, sets,
Counters); all expected values in the test suite are either produced by
these models or checked as contracts (membership, bijectivity,
exactly-once) when an operation is allowed to return any of several
correct answers.

A `Trace` is a reproducible operation sequence for one dictionary
configuration.  `replay_compare` runs implementation and model side by
side and reports the first divergence; `minimize` shrinks a failing
trace by repeated interval deletion.
"""

import random
from collections import Counter
from dataclasses import dataclass, field


class NaiveColorDict:
    """c-color semipartition of {1..n} as a plain color list."""

    def __init__(self, n, c):
        self.n = n
        self.c = c
        self.colors = [0] * n

    def color(self, ell):
        return self.colors[ell - 1]

    def setcolor(self, j, ell):
        self.colors[ell - 1] = j

    def members(self, j):
        return {i + 1 for i, col in enumerate(self.colors) if col == j}

    def size(self, j):
        return sum(1 for col in self.colors if col == j)

    def successor(self, j, ell):
        for i in range(max(ell, 0) + 1, self.n + 1):
            if self.colors[i - 1] == j:
                return i
        return 0

    def predecessor(self, j, ell):
        for i in range(min(ell, self.n + 1) - 1, 0, -1):
            if self.colors[i - 1] == j:
                return i
        return 0


class IterationAudit:
    """Robustness bookkeeping for one in-progress iteration over S_j.

    Elements present when the iteration started and never recolored
    away must each be delivered exactly once; nothing may be delivered
    twice or while absent.
    """

    def __init__(self, j, present):
        self.j = j
        self.required = set(present)
        self.emitted = set()

    def on_setcolor(self, jnew, ell):
        if jnew != self.j:
            self.required.discard(ell)

    def on_next(self, e, current_members):
        if e == 0:
            return
        if e not in current_members:
            raise AssertionError(
                "iteration over color %d delivered absent element %d" % (self.j, e)
            )
        if e in self.emitted:
            raise AssertionError(
                "iteration over color %d delivered %d twice" % (self.j, e)
            )
        self.emitted.add(e)

    def on_finish(self):
        missing = self.required - self.emitted
        if missing:
            raise AssertionError(
                "iteration over color %d missed %s" % (self.j, sorted(missing)[:10])
            )


@dataclass
class Trace:
    n: int
    c: int
    ops: list = field(default_factory=list)
    note: str = ""


def random_trace(n, c, nops, seed, features=("choice",)):
    """A reproducible random op sequence for an (n, c) configuration."""
    rng = random.Random(seed)
    ops = []
    kinds = ["setcolor"] * 9 + ["color"] * 6
    if "choice" in features:
        kinds += ["choice"] * 2
    if "successor" in features:
        kinds += ["successor", "predecessor"]
    if "prank" in features:
        kinds += ["p_rank", "p_select"]
    if "iterate" in features:
        kinds += ["iter_init", "iter_next", "iter_next"]
    if "uniform" in features:
        kinds += ["uniform_choice"]
    if "size" in features:
        kinds += ["size"]
    for _ in range(nops):
        kind = rng.choice(kinds)
        if kind == "setcolor":
            ops.append((kind, rng.randrange(c), rng.randrange(1, n + 1)))
        elif kind == "color":
            ops.append((kind, rng.randrange(1, n + 1)))
        elif kind in ("choice", "iter_init", "iter_next", "size"):
            ops.append((kind, rng.randrange(c)))
        elif kind in ("successor", "predecessor"):
            ops.append((kind, rng.randrange(c), rng.randrange(0, n + 2)))
        elif kind == "p_rank":
            ops.append((kind, rng.randrange(1, n + 1)))
        elif kind == "p_select":
            ops.append((kind, rng.randrange(c), rng.randrange(1, n + 1)))
        elif kind == "uniform_choice":
            ops.append((kind, rng.randrange(c), rng.randrange(1 << 30)))
    return Trace(n=n, c=c, ops=ops)


class Divergence(AssertionError):
    def __init__(self, trace, index, message):
        super().__init__("op %d %r: %s" % (index, trace.ops[index], message))
        self.trace = trace
        self.index = index
        self.message = message


def replay_compare(make_impl, trace, check_every=0):
    """Run trace against implementation and model; raise Divergence on
    the first mismatch or broken contract.  check_every > 0 additionally
    audits the full color array every that many operations.
    """
    n, c = trace.n, trace.c
    impl = make_impl(n, c)
    model = NaiveColorDict(n, c)
    audits = {}
    ranks_seen = {}

    def fail(i, msg):
        raise Divergence(trace, i, msg)

    for i, op in enumerate(trace.ops):
        kind = op[0]
        if kind == "setcolor":
            _, j, ell = op
            impl.setcolor(j, ell)
            model.setcolor(j, ell)
            for audit in audits.values():
                audit.on_setcolor(j, ell)
            ranks_seen.clear()
        elif kind == "color":
            _, ell = op
            got, want = impl.color(ell), model.color(ell)
            if got != want:
                fail(i, "color(%d) = %d, expected %d" % (ell, got, want))
        elif kind == "choice":
            _, j = op
            got = impl.choice(j)
            members = model.members(j)
            if got == 0:
                if members:
                    fail(i, "choice(%d) = 0 but class nonempty" % j)
            elif got not in members:
                fail(i, "choice(%d) = %d not in class" % (j, got))
        elif kind in ("successor", "predecessor"):
            _, j, ell = op
            got = getattr(impl, kind)(j, ell)
            want = getattr(model, kind)(j, ell)
            if got != want:
                fail(i, "%s(%d,%d) = %d, expected %d" % (kind, j, ell, got, want))
        elif kind == "size":
            _, j = op
            got, want = impl.size(j), model.size(j)
            if got != want:
                fail(i, "size(%d) = %d, expected %d" % (j, got, want))
        elif kind == "p_rank":
            _, ell = op
            j = model.color(ell)
            k = impl.p_rank(ell)
            sz = model.size(j)
            if not 1 <= k <= sz:
                fail(i, "p_rank(%d) = %d outside 1..%d" % (ell, k, sz))
            back = impl.p_select(j, k)
            if back != ell:
                fail(i, "p_select(%d,%d) = %d, expected %d" % (j, k, back, ell))
            prev = ranks_seen.get((j, k))
            if prev is not None and prev != ell:
                fail(i, "p_rank not stable: rank %d of color %d moved %d -> %d"
                     % (k, j, prev, ell))
            ranks_seen[(j, k)] = ell
        elif kind == "p_select":
            _, j, k = op
            got = impl.p_select(j, k)
            members = model.members(j)
            if k > len(members):
                if got != 0:
                    fail(i, "p_select(%d,%d) = %d, expected 0" % (j, k, got))
            else:
                if got not in members:
                    fail(i, "p_select(%d,%d) = %d not in class" % (j, k, got))
                if impl.p_rank(got) != k:
                    fail(i, "p_select/p_rank disagree at color %d rank %d" % (j, k))
                prev = ranks_seen.get((j, k))
                if prev is not None and prev != got:
                    fail(i, "p_select not stable at color %d rank %d" % (j, k))
                ranks_seen[(j, k)] = got
        elif kind == "uniform_choice":
            _, j, r = op
            got = impl.uniform_choice(j, random.Random(r))
            members = model.members(j)
            if got == 0:
                if members:
                    fail(i, "uniform_choice(%d) = 0 but class nonempty" % j)
            elif got not in members:
                fail(i, "uniform_choice(%d) = %d not in class" % (j, got))
        elif kind == "iter_init":
            _, j = op
            impl.iter_init(j)
            audits[j] = IterationAudit(j, model.members(j))
        elif kind == "iter_next":
            _, j = op
            if j not in audits:
                continue
            if impl.iter_more(j):
                e = impl.iter_next(j)
                audits[j].on_next(e, model.members(j))
            else:
                e = impl.iter_next(j)
                if e != 0:
                    fail(i, "iter_next after exhaustion returned %d" % e)
                audits[j].on_finish()
                del audits[j]
        else:
            raise ValueError("unknown op %r" % (kind,))
        if check_every and (i + 1) % check_every == 0:
            for ell in range(1, n + 1):
                if impl.color(ell) != model.color(ell):
                    fail(i, "full audit: color(%d) drifted" % ell)
    for j, audit in list(audits.items()):
        while impl.iter_more(j):
            audit.on_next(impl.iter_next(j), model.members(j))
        audit.on_finish()


def minimize(make_impl, trace, check_every=0):
    """Shrink a failing trace by removing chunks while it still fails."""

    def fails(ops):
        t = Trace(n=trace.n, c=trace.c, ops=ops, note=trace.note)
        try:
            replay_compare(make_impl, t, check_every=check_every)
        except AssertionError:
            return True
        return False

    ops = list(trace.ops)
    if not fails(ops):
        return trace
    chunk = max(1, len(ops) // 2)
    while chunk >= 1:
        i = 0
        while i < len(ops):
            candidate = ops[:i] + ops[i + chunk:]
            if fails(candidate):
                ops = candidate
            else:
                i += chunk
        chunk //= 2
    return Trace(n=trace.n, c=trace.c, ops=ops, note=trace.note + " (minimized)")


class NaiveMultiset:
    """Reference multiset over {1..n} with time-windowed audit data."""

    def __init__(self, n):
        self.n = n
        self.counts = Counter()

    def insert(self, x):
        self.counts[x] += 1

    def remove(self, x):
        if self.counts[x] <= 1:
            del self.counts[x]
        else:
            self.counts[x] -= 1

    def total(self):
        return sum(self.counts.values())

    def snapshot(self):
        return Counter(self.counts)


class NaivePrefixSums:
    """Reference for searchable partial sums: a plain value list."""

    def __init__(self, n):
        self.values = [0] * n

    def update(self, j, delta):
        self.values[j - 1] += delta

    def sum(self, j):
        return sum(self.values[:j])

    def search(self, x):
        run = 0
        for i, v in enumerate(self.values):
            run += v
            if run >= x:
                return i + 1
        return len(self.values) + 1


class FenwickPrefixSums:
    """Reference prefix sums on a binary indexed tree, fast at scale.

    Structurally unrelated to the phase-block scheme, so agreement is
    meaningful; replaces the plain list when its linear scans would make
    a long trace quadratic.
    """

    def __init__(self, n):
        self.n = n
        self.values = [0] * (n + 1)
        self.tree = [0] * (n + 1)
        self.total = 0

    def update(self, j, delta):
        self.values[j] += delta
        self.total += delta
        while j <= self.n:
            self.tree[j] += delta
            j += j & -j

    def sum(self, j):
        s = 0
        while j:
            s += self.tree[j]
            j -= j & -j
        return s

    def search(self, x):
        if x > self.total:
            return self.n + 1
        pos = 0
        for k in range(self.n.bit_length(), -1, -1):
            nxt = pos + (1 << k)
            if nxt <= self.n and self.tree[nxt] < x:
                pos = nxt
                x -= self.tree[nxt]
        return pos + 1

    def value(self, j):
        return self.values[j]

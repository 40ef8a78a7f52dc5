"""Merged attribute checking over the reachability graph.

Each (edge, inherited-value) pair owns a lazy stream of synthesized
values.  Streams are memoized in a per-job table: re-querying a pair
replays the values already produced, in the same order, before computing
new ones, so every consumer of a shared subproblem shares its work.

Values are produced in nondecreasing derivation weight and deduplicated
(merging), which is what keeps the enumeration from exploding: two
derivations with the same semantic value are indistinguishable to every
enclosing computation, so only the first (lightest) one is kept, and a
rule returning None prunes its whole branch immediately.

The stream machinery is cursor-based rather than generator-based so that
one partially-consumed stream can feed several consumers re-entrantly.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from heapq import heappush, heappop, heapreplace
from math import inf

from .grammar import Production, Symbol
from .modgraph import INSERTION, ModEdge, ORIGINAL, UPDATE
from .reachability import (ACCEPT, ACCEPT_DEL, BINARY, EPS, REdge, STRETCH,
                           TERM, UNARY, Expansion)


class ResourceLimit(Exception):
    pass


class TimeBudgetExceeded(ResourceLimit):
    pass


class MemoryBudgetExceeded(ResourceLimit):
    pass


class Budget:
    """Cooperative wall-clock and memory accounting for one fix job."""

    __slots__ = ("deadline", "mem_limit", "mem_used", "rule_calls", "check_every")

    def __init__(self, time_limit_s: float | None = None,
                 mem_limit_bytes: int | None = None, check_every: int = 4096):
        self.deadline = None if time_limit_s is None else time.monotonic() + time_limit_s
        self.mem_limit = mem_limit_bytes
        self.mem_used = 0
        self.rule_calls = 0
        self.check_every = check_every

    def check_time(self) -> None:
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise TimeBudgetExceeded()

    def charge(self, nbytes: int) -> None:
        self.mem_used += nbytes
        if self.mem_limit is not None and self.mem_used > self.mem_limit:
            raise MemoryBudgetExceeded()

    def count_rule_call(self) -> None:
        self.rule_calls += 1
        if self.rule_calls % self.check_every == 0:
            self.check_time()


@dataclass(frozen=True, slots=True)
class TermInfo:
    """What a terminal-level edge knows about its concrete text."""

    lexeme: str | None = None   # fixed by the original program
    exclude: str | None = None  # update at a same-class position: must differ


def term_info(m: ModEdge) -> TermInfo:
    return TermInfo(lexeme=m.lexeme, exclude=m.exclude_lexeme)


class AttributeRules:
    """Interface a language frontend provides to the engine.

    All operations must be pure functions of their arguments; the memo
    table relies on that.  ``None`` returned from an inherited or
    synthesized computation prunes the branch; ``process_terminal``
    prunes by returning an empty sequence.
    """

    def root_inherited(self, env):
        raise NotImplementedError

    def process_terminal(self, sym: Symbol, info: TermInfo, inh):
        raise NotImplementedError

    def process_left_inherited(self, prod: Production, inh):
        raise NotImplementedError

    def process_right_inherited(self, prod: Production, inh, s_left):
        raise NotImplementedError

    def process_synthesized(self, prod: Production, inh, s_left, s_right):
        raise NotImplementedError

    def materialize_terminal(self, sym: Symbol, info: TermInfo, inh, synth) -> str:
        raise NotImplementedError


@dataclass(frozen=True, slots=True)
class PartialInh:
    """Inherited value of a binarization nonterminal: the original
    inherited value plus the synthesized results of the siblings already
    consumed to its left."""

    base: object
    prefix: tuple


@dataclass(frozen=True, slots=True)
class SuffixSynth:
    """Synthesized value of a binarization nonterminal: the results of the
    right-hand-side suffix it covers."""

    items: tuple


class ProductionRule:
    """Semantic functions of one pre-normalization production."""

    def child_inherited(self, j: int, inh, prefix: tuple):
        """Inherited value for rhs child ``j`` given the synthesized values
        of children ``0..j-1``.  None prunes."""
        raise NotImplementedError

    def synthesized(self, inh, children: tuple):
        """Synthesized value from all child results.  None prunes."""
        raise NotImplementedError


class BinarizedRules(AttributeRules):
    """Adapts per-origin-production rules to the normalized grammar.

    Binarization nonterminals accumulate sibling results in their
    inherited value and expand their synthesized values into suffix
    lists; the user rules fire only at origin-production boundaries.
    """

    def __init__(self, grammar, prod_rules: dict[int, ProductionRule],
                 terminal_fn, root_fn, materialize_fn):
        self._table = {}
        for p in grammar.productions:
            origin = grammar.origin_production(p)
            rule = prod_rules.get(origin.pid)
            if rule is None:
                raise ValueError(f"no semantic rule registered for {origin!r}")
            self._table[p.pid] = (rule, p.origin[1], len(origin.rhs))
        self._terminal_fn = terminal_fn
        self._root_fn = root_fn
        self._materialize_fn = materialize_fn

    def root_inherited(self, env):
        return self._root_fn(env)

    def process_terminal(self, sym, info, inh):
        return self._terminal_fn(sym, info, inh)

    def materialize_terminal(self, sym, info, inh, synth):
        return self._materialize_fn(sym, info, inh, synth)

    def process_left_inherited(self, prod, inh):
        rule, pos, k = self._table[prod.pid]
        if k <= 2:
            return rule.child_inherited(0, inh, ())
        if pos == 0:
            return rule.child_inherited(0, inh, ())
        return rule.child_inherited(pos, inh.base, inh.prefix)

    def process_right_inherited(self, prod, inh, s_left):
        rule, pos, k = self._table[prod.pid]
        if k <= 2:
            return rule.child_inherited(1, inh, (s_left,))
        base, prefix = (inh, ()) if pos == 0 else (inh.base, inh.prefix)
        if pos == k - 2:
            return rule.child_inherited(k - 1, base, prefix + (s_left,))
        return PartialInh(base, prefix + (s_left,))

    def process_synthesized(self, prod, inh, s_left, s_right):
        rule, pos, k = self._table[prod.pid]
        if k == 0:
            return rule.synthesized(inh, ())
        if k == 1:
            return rule.synthesized(inh, (s_left,))
        if k == 2:
            return rule.synthesized(inh, (s_left, s_right))
        tail = (s_left, s_right) if pos == k - 2 else (s_left,) + s_right.items
        if pos == 0:
            return rule.synthesized(inh, tail)
        return SuffixSynth(tail)


class StreamItem:
    __slots__ = ("value", "weight", "prov")

    def __init__(self, value, weight, prov):
        self.value = value
        self.weight = weight
        self.prov = prov


class CheckContext:
    """Per-job state: the rules, the memo table and the budgets."""

    def __init__(self, rules: AttributeRules, budget: Budget | None = None,
                 memo_enabled: bool = True):
        self.rules = rules
        self.budget = budget if budget is not None else Budget()
        self.memo_enabled = memo_enabled
        self.memo: dict[tuple[int, object], ValueStream] = {}
        self.in_step: set[tuple[int, object]] = set()
        self.values_produced = 0
        self.version = 0
        self._left_cache: dict = {}

    def bump_version(self) -> None:
        """Must be called whenever the reachability structure has grown:
        stream bounds are only lower bounds within one version."""
        self.version += 1

    # Rule wrappers: one counter feeds both statistics and the time budget.
    def call_terminal(self, sym, info, inh):
        self.budget.count_rule_call()
        return self.rules.process_terminal(sym, info, inh)

    def call_left(self, prod, inh):
        # Pure in (prod, inh); cached because every stream on an edge
        # re-derives the same child-inherited values.
        key = (prod.pid, inh)
        cache = self._left_cache
        if key in cache:
            return cache[key]
        self.budget.count_rule_call()
        v = self.rules.process_left_inherited(prod, inh)
        cache[key] = v
        self.budget.charge(80)
        return v

    def call_right(self, prod, inh, s_left):
        self.budget.count_rule_call()
        return self.rules.process_right_inherited(prod, inh, s_left)

    def call_synth(self, prod, inh, s_left, s_right):
        self.budget.count_rule_call()
        return self.rules.process_synthesized(prod, inh, s_left, s_right)

    def stream(self, edge: REdge, inh) -> "ValueStream":
        if not self.memo_enabled:
            return ValueStream(self, edge, inh)
        key = (edge.eid, inh)
        s = self.memo.get(key)
        if s is None:
            s = ValueStream(self, edge, inh)
            self.memo[key] = s
            self.budget.charge(320)
        return s

    def memo_entries(self) -> int:
        return len(self.memo)


class ValueStream:
    """All distinct synthesized values of one (edge, inherited) pair, in
    nondecreasing derivation weight, materialized on demand.

    Heap keys are true lower bounds for the current structure version:
    sources whose bound is momentarily unbounded (a blocked cycle, or a
    child exhausted at the current saturation level) are parked instead of
    pushed, and everything is re-keyed when the version bumps."""

    __slots__ = ("ctx", "edge", "inh", "items", "_seen", "_heap", "_parked",
                 "_synced", "_key", "_src_seq", "_version")

    def __init__(self, ctx: CheckContext, edge: REdge, inh):
        self.ctx = ctx
        self.edge = edge
        self.inh = inh
        self.items: list[StreamItem] = []
        self._seen: set = set()
        self._heap: list = []
        self._parked: list = []
        self._synced = 0
        self._key = (edge.eid, inh)
        self._src_seq = 0
        self._version = ctx.version

    # -- consumer API ---------------------------------------------------

    def ensure(self, idx: int, bound: int) -> StreamItem | None:
        """Materialize and return item ``idx`` if it exists with weight
        <= ``bound``, else None (for now: a later call with a larger bound
        may succeed once heavier derivations are reachable)."""
        while True:
            if idx < len(self.items):
                it = self.items[idx]
                return it if it.weight <= bound else None
            if self._key in self.ctx.in_step:
                return None  # cyclic re-entry: expose the prefix only
            if not self._step(bound):
                return None

    def bound_at(self, idx: int) -> float:
        """Lower bound on the weight of item ``idx``."""
        if idx < len(self.items):
            return self.items[idx].weight
        if self._key in self.ctx.in_step:
            return inf
        if self._synced == 0 and not self.items:
            # Untouched stream: the edge's own minimum is a valid bound
            # and avoids cascading source construction down long chains.
            return self.edge.min_weight
        self._refresh()
        return self._heap[0][0] if self._heap else inf

    # -- producer internals ----------------------------------------------

    def _refresh(self) -> None:
        self._sync()
        if self._version == self.ctx.version:
            return
        self._version = self.ctx.version
        entries = [(seq, src) for _, seq, src in self._heap]
        entries += [(seq, src) for seq, src in self._parked]
        self._heap = []
        self._parked = []
        for seq, src in entries:
            self._place(seq, src)

    def _place(self, seq, src) -> None:
        b = src.bound()
        if b is None:
            return
        if b == inf:
            self._parked.append((seq, src))
        else:
            heappush(self._heap, (b, seq, src))

    def _sync(self) -> None:
        exps = self.edge.expansions
        while self._synced < len(exps):
            exp = exps[self._synced]
            self._synced += 1
            src = self._make_source(exp)
            if src is not None:
                self._src_seq += 1
                self.ctx.budget.charge(200)
                self._place(self._src_seq, src)

    def _push_source(self, src) -> None:
        self._src_seq += 1
        self.ctx.budget.charge(200)
        self._place(self._src_seq, src)

    def _make_source(self, exp: Expansion):
        kind = exp.kind
        ctx = self.ctx
        if kind == TERM:
            return _TermSource(self, exp)
        if kind == EPS:
            return _EpsSource(self, exp)
        if kind in (STRETCH, ACCEPT, ACCEPT_DEL):
            child = ctx.stream(exp.left, self.inh)
            return _PassSource(self, exp, child, 1 if kind != ACCEPT else 0)
        if kind == UNARY:
            inh_b = ctx.call_left(exp.prod, self.inh)
            if inh_b is None:
                return None
            return _UnarySource(self, exp, ctx.stream(exp.left, inh_b))
        # BINARY
        inh_b = ctx.call_left(exp.prod, self.inh)
        if inh_b is None:
            return None
        return _BinExtendSource(self, exp, ctx.stream(exp.left, inh_b))

    def _step(self, bound: int) -> bool:
        """Run sources until one appends an item with weight <= ``bound``.
        Returns False when nothing more is reachable within the bound.

        Every unproductive source step still advances some cursor, arm or
        child materialization, or strictly raises the source's bound
        (cyclic re-entry reports an infinite bound), so this loop
        terminates."""
        ctx = self.ctx
        ctx.in_step.add(self._key)
        try:
            self._refresh()
            if self._parked:
                # A finished ancestor step may have unblocked parked work.
                parked, self._parked = self._parked, []
                for seq, src in parked:
                    self._place(seq, src)
            heap = self._heap
            while heap:
                b, seq, src = heappop(heap)
                nb = src.bound()
                if nb is None:
                    continue
                if nb != b:
                    self._place(seq, src)
                    continue
                if b > bound:
                    heappush(heap, (b, seq, src))
                    return False
                produced = src.step(bound)
                self._place(seq, src)
                if produced:
                    return True
            return False
        finally:
            ctx.in_step.discard(self._key)

    def _offer(self, value, weight: int, prov) -> bool:
        if value in self._seen:
            return False
        self._seen.add(value)
        self.items.append(StreamItem(value, weight, prov))
        self.ctx.values_produced += 1
        self.ctx.budget.charge(160)
        return True


class _TermSource:
    __slots__ = ("stream", "exp", "done")

    def __init__(self, stream, exp):
        self.stream = stream
        self.exp = exp
        self.done = False

    def bound(self):
        return None if self.done else self.exp.weight

    def step(self, bound):
        self.done = True
        st = self.stream
        values = st.ctx.call_terminal(self.exp.modedge.sym, term_info(self.exp.modedge), st.inh)
        appended = False
        w = self.exp.weight
        for v in values:
            if st._offer(v, w, ("term", self.exp)):
                appended = True
        return appended


class _EpsSource:
    __slots__ = ("stream", "exp", "done")

    def __init__(self, stream, exp):
        self.stream = stream
        self.exp = exp
        self.done = False

    def bound(self):
        return None if self.done else 0

    def step(self, bound):
        self.done = True
        st = self.stream
        v = st.ctx.call_synth(self.exp.prod, st.inh, None, None)
        if v is None:
            return False
        return st._offer(v, 0, ("eps", self.exp))


class _PassSource:
    """Stretch and accept expansions: same values, shifted weight."""

    __slots__ = ("stream", "exp", "child", "extra", "cur")

    def __init__(self, stream, exp, child, extra):
        self.stream = stream
        self.exp = exp
        self.child = child
        self.extra = extra
        self.cur = 0

    def bound(self):
        return self.child.bound_at(self.cur) + self.extra

    def step(self, bound):
        child = self.child
        if self.cur < len(child.items):
            it = child.items[self.cur]
            self.cur += 1
            return self.stream._offer(it.value, it.weight + self.extra,
                                      ("pass", self.exp, child, self.cur - 1))
        child.ensure(self.cur, bound - self.extra)
        return False


class _UnarySource:
    __slots__ = ("stream", "exp", "child", "cur")

    def __init__(self, stream, exp, child):
        self.stream = stream
        self.exp = exp
        self.child = child
        self.cur = 0

    def bound(self):
        return self.child.bound_at(self.cur)

    def step(self, bound):
        st = self.stream
        child = self.child
        if self.cur < len(child.items):
            it = child.items[self.cur]
            self.cur += 1
            s_a = st.ctx.call_synth(self.exp.prod, st.inh, it.value, None)
            if s_a is None:
                return False
            return st._offer(s_a, it.weight, ("unary", self.exp, child, self.cur - 1))
        child.ensure(self.cur, bound)
        return False


class _BinExtendSource:
    """Left half of the three-level loop for one A -> BC expansion: each
    left value spawns an arm source that walks the right child's stream
    under the inherited value computed from that left value."""

    __slots__ = ("stream", "exp", "left", "lcur")

    def __init__(self, stream, exp, left):
        self.stream = stream
        self.exp = exp
        self.left = left
        self.lcur = 0

    def bound(self):
        return self.left.bound_at(self.lcur) + self.exp.right.min_weight

    def step(self, bound):
        st = self.stream
        left = self.left
        if self.lcur < len(left.items):
            it = left.items[self.lcur]
            self.lcur += 1
            inh_c = st.ctx.call_right(self.exp.prod, st.inh, it.value)
            if inh_c is not None:
                st._push_source(_BinArmSource(
                    st, self.exp, left, it.value, it.weight, self.lcur - 1,
                    st.ctx.stream(self.exp.right, inh_c)))
            return False
        left.ensure(self.lcur, bound - self.exp.right.min_weight)
        return False


class _BinArmSource:
    __slots__ = ("stream", "exp", "left", "s_left", "w_left", "left_idx",
                 "right", "cur")

    def __init__(self, stream, exp, left, s_left, w_left, left_idx, right):
        self.stream = stream
        self.exp = exp
        self.left = left
        self.s_left = s_left
        self.w_left = w_left
        self.left_idx = left_idx
        self.right = right
        self.cur = 0

    def bound(self):
        return self.w_left + self.right.bound_at(self.cur)

    def step(self, bound):
        st = self.stream
        right = self.right
        if self.cur < len(right.items):
            it = right.items[self.cur]
            self.cur += 1
            s_a = st.ctx.call_synth(self.exp.prod, st.inh, self.s_left, it.value)
            if s_a is None:
                return False
            return st._offer(s_a, self.w_left + it.weight,
                             ("binary", self.exp, self.left, self.left_idx,
                              right, self.cur - 1))
        right.ensure(self.cur, bound - self.w_left)
        return False


def check_attr(edge: REdge, inh, ctx: CheckContext) -> ValueStream:
    """The deduplicated lazy stream of synthesized values for ``edge``
    under inherited value ``inh``."""
    return ctx.stream(edge, inh)


class Witness:
    """A pointer into the stream graph, sufficient to rebuild the fixed
    program for one accepted value."""

    __slots__ = ("stream", "index")

    def __init__(self, stream: ValueStream, index: int):
        self.stream = stream
        self.index = index

    @property
    def item(self) -> StreamItem:
        return self.stream.items[self.index]


def first_passing(root: REdge, env, level: int, ctx: CheckContext,
                  start_index: int = 0) -> Witness | None:
    """First synthesized value of the accept edge whose derivation weight
    is within ``level``, skipping the ``start_index`` values already
    examined at earlier levels.

    Call once per saturation checkpoint: it re-keys stream bounds, since
    the reachability structure may have grown since the last call."""
    ctx.bump_version()
    inh = ctx.rules.root_inherited(env)
    stream = check_attr(root, inh, ctx)
    it = stream.ensure(start_index, level)
    if it is None:
        return None
    return Witness(stream, start_index)

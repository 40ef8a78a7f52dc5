"""Weight-ordered grammar reachability over the modification graph.

Derived edges are labeled with nonterminals and record every way they can
be built (their expansions).  Unlike plain shortest-path saturation, an
edge is never replaced when a heavier derivation of the same label and
span appears: the extra expansion is retained, because heavier fixes may
be needed once semantic checking rejects the lighter ones.

Deletions are folded in two canonical places so that every candidate
program has exactly one derivation shape: a token-producing edge may
absorb the deletions immediately to its left, and a synthetic accept edge
(wrapping start-symbol edges that begin at v0) absorbs trailing
deletions on the right.

The engine is resumable: ``next_root_edge`` advances saturation in weight
order and reports the accept edge each time a weight level is completed,
so callers can interleave semantic checking with the search.
"""

from __future__ import annotations

from heapq import heappush, heappop

from .grammar import Grammar, Symbol
from .modgraph import DELETION, ModEdge, ModGraph

TERM = "term"
EPS = "eps"
UNARY = "unary"
BINARY = "binary"
STRETCH = "stretch"
ACCEPT = "accept"
ACCEPT_DEL = "accept_del"


class Expansion:
    """One recorded way of deriving an edge."""

    __slots__ = ("kind", "prod", "left", "right", "modedge", "weight", "seq")

    def __init__(self, kind, prod, left, right, modedge, weight, seq):
        self.kind = kind
        self.prod = prod        # normalized Production or None
        self.left = left        # child REdge or None
        self.right = right      # second child REdge or None
        self.modedge = modedge  # underlying ModEdge for term/stretch/accept_del
        self.weight = weight    # minimum total weight of this expansion
        self.seq = seq

    def __repr__(self) -> str:
        return f"<exp {self.kind} w={self.weight}>"


class REdge:
    """A reachability edge: span, symbol, minimal weight, all expansions."""

    __slots__ = ("eid", "src", "dst", "sym", "min_weight", "expansions",
                 "_exp_keys", "is_root", "settled", "enqueued_best")

    def __init__(self, eid: int, src: int, dst: int, sym: Symbol, is_root: bool):
        self.eid = eid
        self.src = src
        self.dst = dst
        self.sym = sym
        self.min_weight = -1  # set on first expansion
        self.expansions: list[Expansion] = []
        self._exp_keys: set[tuple] | None = None  # built on the second expansion
        self.is_root = is_root
        self.settled = False
        self.enqueued_best = None

    def __repr__(self) -> str:
        return f"<edge {self.src}->{self.dst} {self.sym.name} w={self.min_weight}>"


class RootYield:
    """One saturation checkpoint: the accept edge with all derivations of
    weight <= ``level`` fully present."""

    __slots__ = ("edge", "level")

    def __init__(self, edge: REdge, level: int):
        self.edge = edge
        self.level = level


class _PendingMark:
    """Sentinel queue item: when popped at its weight, the pending batch
    of deferred expansions for that weight is materialized."""

    __slots__ = ("weight",)

    def __init__(self, weight: int):
        self.weight = weight


class ReachState:
    def __init__(self, mg: ModGraph, grammar: Grammar, cap: int,
                 budget=None, instrument: bool = False):
        if not grammar.is_normalized():
            raise ValueError("reachability requires a normalized grammar")
        self.mg = mg
        self.grammar = grammar
        self.cap = cap
        self.n = mg.n
        self.budget = budget  # optional attrcheck.Budget for time/memory caps
        self.accept_sym = Symbol(len(grammar.symbols), "$accept", terminal=False)
        self.edges: dict[tuple[int, int, int], REdge] = {}
        self.out_index: dict[tuple[int, int], list[REdge]] = {}
        self.in_index: dict[tuple[int, int], list[REdge]] = {}
        self.heap: list = []
        self.pending: dict[int, list[tuple]] = {}  # weight -> deferred expansions
        self._seq = 0
        self.level = 0
        self.last_yield_level = -1
        self.edges_created = 0
        self.expansions_created = 0
        self.creation_log: list[tuple[int, int, bool]] | None = [] if instrument else None
        self._pops = 0
        self._init()

    # -- construction -------------------------------------------------

    def _next_seq(self) -> int:
        self._seq += 1
        return self._seq

    def _push(self, edge: REdge, weight: int) -> None:
        if edge.enqueued_best is not None and weight >= edge.enqueued_best:
            return
        edge.enqueued_best = weight
        heappush(self.heap, (weight, edge.is_root, self._next_seq(), edge))

    def _edge(self, src: int, dst: int, sym: Symbol) -> REdge:
        key = (src, dst, sym.sid)
        e = self.edges.get(key)
        if e is None:
            is_root = sym is self.accept_sym and src == 0 and dst == self.n
            e = REdge(self.edges_created, src, dst, sym, is_root)
            self.edges_created += 1
            self.edges[key] = e
            if self.budget is not None:
                self.budget.charge(260)
        return e

    def add_expansion(self, src: int, dst: int, sym: Symbol, kind: str,
                      prod=None, left=None, right=None, modedge=None) -> REdge | None:
        if kind == TERM:
            weight = modedge.weight
        elif kind == EPS:
            weight = 0
        elif kind == UNARY:
            weight = left.min_weight
        elif kind == BINARY:
            weight = left.min_weight + right.min_weight
        elif kind == ACCEPT:
            weight = left.min_weight
        else:  # STRETCH, ACCEPT_DEL
            weight = left.min_weight + 1
        if weight > self.cap:
            return None
        if weight > self.level:
            batch = self.pending.get(weight)
            if batch is None:
                batch = self.pending[weight] = []
                heappush(self.heap, (weight, False, self._next_seq(), _PendingMark(weight)))
            batch.append((src, dst, sym, kind, prod, left, right, modedge))
            return None
        e = self._edge(src, dst, sym)
        key = (kind,
               prod.pid if prod is not None else -1,
               left.eid if left is not None else -1,
               right.eid if right is not None else -1,
               modedge.eid if modedge is not None else -1)
        keys = e._exp_keys
        if keys is None:
            if e.expansions:
                x = e.expansions[0]
                keys = e._exp_keys = {(
                    x.kind,
                    x.prod.pid if x.prod is not None else -1,
                    x.left.eid if x.left is not None else -1,
                    x.right.eid if x.right is not None else -1,
                    x.modedge.eid if x.modedge is not None else -1)}
        if keys is not None:
            if key in keys:
                return e
            keys.add(key)
        exp = Expansion(kind, prod, left, right, modedge, weight, self._next_seq())
        e.expansions.append(exp)
        self.expansions_created += 1
        if self.budget is not None:
            self.budget.charge(150)
        if e.min_weight < 0 or weight < e.min_weight:
            e.min_weight = weight
        if self.creation_log is not None:
            self.creation_log.append((exp.seq, weight, e.is_root))
        self._push(e, weight)
        return e

    def _init(self) -> None:
        for p in self.grammar.epsilon_productions():
            for v in range(self.n + 1):
                self.add_expansion(v, v, p.lhs, EPS, prod=p)
        for m in self.mg.edges:
            if m.kind == DELETION:
                # Inert marker; deletions are folded via adjacency, but they
                # still occupy the queue like any other base edge.
                heappush(self.heap, (m.weight, False, self._next_seq(), m))
            else:
                self.add_expansion(m.src, m.dst, m.sym, TERM, modedge=m)

    def queue_size(self) -> int:
        return len(self.heap)

    def root_edge(self) -> REdge | None:
        return self.edges.get((0, self.n, self.accept_sym.sid))

    # -- saturation ----------------------------------------------------

    def _settle(self, e: REdge) -> None:
        e.settled = True
        self.out_index.setdefault((e.src, e.sym.sid), []).append(e)
        self.in_index.setdefault((e.dst, e.sym.sid), []).append(e)
        self._compose(e)

    def _compose(self, e: REdge) -> None:
        g = self.grammar
        sym = e.sym
        if sym is self.accept_sym:
            if e.dst < self.n:
                self.add_expansion(0, e.dst + 1, sym, ACCEPT_DEL,
                                   left=e, modedge=self.mg.deletion_at[e.dst])
            return
        sid = sym.sid
        for p in g.by_first.get(sid, ()):
            rhs = p.rhs
            if len(rhs) == 1:
                self.add_expansion(e.src, e.dst, p.lhs, UNARY, prod=p, left=e)
            else:
                for e2 in self.out_index.get((e.dst, rhs[1].sid), ()):
                    self.add_expansion(e.src, e2.dst, p.lhs, BINARY,
                                       prod=p, left=e, right=e2)
        for p in g.by_second.get(sid, ()):
            for e1 in self.in_index.get((e.src, p.rhs[0].sid), ()):
                self.add_expansion(e1.src, e.dst, p.lhs, BINARY,
                                   prod=p, left=e1, right=e)
        if sym.terminal and e.src < e.dst and e.src > 0:
            self.add_expansion(e.src - 1, e.dst, sym, STRETCH,
                               left=e, modedge=self.mg.deletion_at[e.src - 1])
        if sym is g.start and e.src == 0:
            self.add_expansion(0, e.dst, self.accept_sym, ACCEPT, left=e)


def init_reachability(mg: ModGraph, grammar: Grammar, cap: int | None = None,
                      budget=None, instrument: bool = False) -> ReachState:
    """Prepare saturation: epsilon self-loops are materialized and every
    base edge is queued.  ``cap`` bounds the total edit weight explored
    (default: token count, the delete-everything bound, plus headroom)."""
    if cap is None:
        cap = mg.n + 8
    return ReachState(mg, grammar, cap, budget=budget, instrument=instrument)


def next_root_edge(state: ReachState) -> RootYield | None:
    """Advance saturation and return the accept edge at the next completed
    weight level.  Returns None once the queue drains (cap exhausted)."""
    heap = state.heap
    while True:
        if not heap:
            # Queue drained: every derivation within the cap exists now.
            root = state.root_edge()
            if root is not None and state.last_yield_level < state.cap:
                state.last_yield_level = state.cap
                return RootYield(root, state.cap)
            return None
        w = heap[0][0]
        if w > state.level:
            root = state.root_edge()
            if root is not None and state.last_yield_level < state.level \
                    and root.min_weight <= state.level:
                state.last_yield_level = state.level
                return RootYield(root, state.level)
            state.level = w
            continue
        item = heappop(heap)[3]
        state._pops += 1
        if state.budget is not None and state._pops % 512 == 0:
            state.budget.check_time()
        if isinstance(item, REdge):
            if not item.settled:
                state._settle(item)
        elif isinstance(item, _PendingMark):
            batch = state.pending.pop(item.weight, ())
            add = state.add_expansion
            for src, dst, sym, kind, prod, left, right, modedge in batch:
                add(src, dst, sym, kind, prod=prod, left=left,
                    right=right, modedge=modedge)
        # ModEdge deletion markers are inert


def compose(e: REdge, state: ReachState) -> None:
    """Apply every production step available to a settled edge."""
    state._compose(e)


def reach_stats(state: ReachState) -> dict:
    """Edge counts per weight per symbol, for the debug dump."""
    per: dict[str, dict[int, int]] = {}
    for e in state.edges.values():
        sym = per.setdefault(e.sym.name, {})
        sym[e.min_weight] = sym.get(e.min_weight, 0) + 1
    return {
        "edges": state.edges_created,
        "expansions": state.expansions_created,
        "per_symbol": {name: {str(w): c for w, c in sorted(d.items())}
                       for name, d in sorted(per.items())},
    }

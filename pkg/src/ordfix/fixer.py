"""Top-level repair driver.

Builds the modification graph, alternates between advancing reachability
and attribute-checking the accept edge, and reconstructs the fixed token
sequence together with its edit script from the first surviving value's
witness.  Because root checkpoints arrive in nondecreasing weight and the
value stream per checkpoint is weight-ordered, the first value that
survives semantic checking is a minimum-edit fix.
"""

from __future__ import annotations

import sys
import threading
import time
from dataclasses import dataclass, field

from .attrcheck import (Budget, CheckContext, MemoryBudgetExceeded,
                        TimeBudgetExceeded, Witness, first_passing, term_info)
from .modgraph import INSERTION, ORIGINAL, Token, build_modgraph
from .reachability import ACCEPT, STRETCH, init_reachability, next_root_edge

# Stream recursion follows the parse spine, so depth grows with program
# length; jobs run on a roomy stack with a raised interpreter limit.
_STACK_BYTES = 256 * 1024 * 1024
_RECURSION_LIMIT = 200_000

FIXED = "fixed"
NO_FIX = "no-fix-within-cap"
TIME_LIMIT = "time-limit"
MEMORY_LIMIT = "memory-limit"


@dataclass(slots=True)
class FixRequest:
    tokens: list[Token]
    frontend: object
    env: object
    max_edits: int | None = None          # default: token count + 8
    time_limit_s: float | None = None
    memory_limit_bytes: int | None = None
    memo_enabled: bool = True

    def __post_init__(self):
        if self.max_edits is not None and self.max_edits <= 0:
            raise ValueError("max_edits must be positive")
        if self.time_limit_s is not None and self.time_limit_s <= 0:
            raise ValueError("time_limit_s must be positive")
        if self.memory_limit_bytes is not None and self.memory_limit_bytes <= 0:
            raise ValueError("memory_limit_bytes must be positive")


@dataclass(frozen=True, slots=True)
class Edit:
    pos: int   # index into the original token stream
    op: str    # insert | delete | update
    token: str


@dataclass(slots=True)
class FixResult:
    status: str
    weight: int | None = None
    fixed_tokens: list[Token] | None = None
    edits: list[Edit] = field(default_factory=list)
    stats: dict = field(default_factory=dict)
    elapsed_s: float = 0.0
    cpu_s: float = 0.0

    def to_json_dict(self, include_timing: bool = False) -> dict:
        stats = dict(self.stats)
        if include_timing:
            stats["elapsed_s"] = round(self.elapsed_s, 6)
            stats["cpu_s"] = round(self.cpu_s, 6)
        return {
            "status": self.status,
            "weight": self.weight,
            "fixed": None if self.fixed_tokens is None
                     else [t.lexeme for t in self.fixed_tokens],
            "edits": [{"pos": e.pos, "op": e.op, "token": e.token} for e in self.edits],
            "stats": stats,
        }


def fix(req: FixRequest) -> FixResult:
    """Run one repair job (in a worker thread with a deep stack)."""
    box: list = []

    def run():
        old = sys.getrecursionlimit()
        sys.setrecursionlimit(_RECURSION_LIMIT)
        try:
            box.append(_fix_job(req))
        except BaseException as exc:  # re-raised in the caller
            box.append(exc)
        finally:
            sys.setrecursionlimit(old)

    old_size = threading.stack_size(_STACK_BYTES)
    try:
        t = threading.Thread(target=run, name="ordfix-job")
        t.start()
        t.join()
    finally:
        threading.stack_size(old_size)
    out = box[0]
    if isinstance(out, BaseException):
        raise out
    return out


def _fix_job(req: FixRequest) -> FixResult:
    t0 = time.monotonic()
    c0 = time.process_time()
    fe = req.frontend
    cap = req.max_edits if req.max_edits is not None else len(req.tokens) + 8
    budget = Budget(req.time_limit_s, req.memory_limit_bytes)
    result = FixResult(status=NO_FIX)
    try:
        mg = build_modgraph(req.tokens, fe.grammar)
        state = init_reachability(mg, fe.normalized, cap=cap, budget=budget)
        rules = fe.make_rules(req.env, req.tokens)
        ctx = CheckContext(rules, budget, memo_enabled=req.memo_enabled)
        roots = 0
        while True:
            budget.check_time()
            ry = next_root_edge(state)
            if ry is None:
                result.status = NO_FIX
                break
            roots += 1
            witness = first_passing(ry.edge, req.env, ry.level, ctx)
            if witness is not None:
                fixed, edits = construct_result(witness, mg, rules)
                result.status = FIXED
                result.weight = witness.item.weight
                result.fixed_tokens = fixed
                result.edits = edits
                ok, diag = fe.check_compiles(fixed, req.env)
                if not ok:
                    raise RuntimeError(
                        f"internal error: fixer output rejected by the reference "
                        f"checker: {diag}")
                break
        result.stats = {
            "root_edges": roots,
            "reach_edges": state.edges_created,
            "reach_expansions": state.expansions_created,
            "memo_entries": ctx.memo_entries(),
            "rule_invocations": budget.rule_calls,
            "values_produced": ctx.values_produced,
            "n_tokens": len(req.tokens),
        }
    except TimeBudgetExceeded:
        result = FixResult(status=TIME_LIMIT)
    except MemoryBudgetExceeded:
        result = FixResult(status=MEMORY_LIMIT)
    result.elapsed_s = time.monotonic() - t0
    result.cpu_s = time.process_time() - c0
    return result


def construct_result(witness: Witness, mg, rules) -> tuple[list[Token], list[Edit]]:
    """Walk one witness down to its base-edge leaves in span order and
    emit the fixed token sequence plus the edit script producing it."""
    tokens: list[Token] = []
    edits: list[Edit] = []

    def walk(stream, idx):
        it = stream.items[idx]
        prov = it.prov
        kind = prov[0]
        if kind == "term":
            m = prov[1].modedge
            if m.kind == ORIGINAL:
                tokens.append(Token(m.sym, m.lexeme, len(tokens)))
            else:
                lex = rules.materialize_terminal(m.sym, term_info(m), stream.inh, it.value)
                tokens.append(Token(m.sym, lex, len(tokens)))
                op = "insert" if m.kind == INSERTION else "update"
                edits.append(Edit(m.src, op, lex))
        elif kind == "eps":
            pass
        elif kind == "pass":
            exp, child, cidx = prov[1], prov[2], prov[3]
            if exp.kind == STRETCH:
                m = exp.modedge
                edits.append(Edit(m.src, "delete", mg.tokens[m.src].lexeme))
                walk(child, cidx)
            elif exp.kind == ACCEPT:
                walk(child, cidx)
            else:  # ACCEPT_DEL
                walk(child, cidx)
                m = exp.modedge
                edits.append(Edit(m.src, "delete", mg.tokens[m.src].lexeme))
        elif kind == "unary":
            walk(prov[2], prov[3])
        else:  # binary
            walk(prov[2], prov[3])
            walk(prov[4], prov[5])

    walk(witness.stream, witness.index)
    return tokens, edits


def apply_edits(original: list[Token], edits: list[Edit]) -> list[str]:
    """Apply an edit script to the original tokens, returning lexemes.
    Inserts at one position apply in script order, before the original
    token at that position."""
    n = len(original)
    inserts: dict[int, list[str]] = {}
    replace: dict[int, tuple[str, str]] = {}
    for e in edits:
        if e.op == "insert":
            if not 0 <= e.pos <= n:
                raise ValueError(f"insert position {e.pos} out of range")
            inserts.setdefault(e.pos, []).append(e.token)
        else:
            if not 0 <= e.pos < n:
                raise ValueError(f"{e.op} position {e.pos} out of range")
            if e.pos in replace:
                raise ValueError(f"two {e.op}/update/delete edits at position {e.pos}")
            replace[e.pos] = (e.op, e.token)
    out: list[str] = []
    for p in range(n + 1):
        out.extend(inserts.get(p, ()))
        if p < n:
            action = replace.get(p)
            if action is None:
                out.append(original[p].lexeme)
            elif action[0] == "update":
                out.append(action[1])
            # delete: emit nothing
    return out

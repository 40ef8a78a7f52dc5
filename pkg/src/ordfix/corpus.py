"""Test-asset factory: seeded program generation, token-level mutation
operators, the independent-set program encoding, and the brute-force
minimal-fix oracle.

Everything here is deterministic given its seed.  The random source is
``random.Random`` (Mersenne Twister), using only integer draws
(``randrange``/``choice``/``shuffle``), whose sequences are stable across
platforms and CPython versions.

The oracle shares no code with the reachability engine: it enumerates
token strings by breadth-first edit expansion and asks the frontend's
reference checker whether each one compiles.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations

from .langs.base import Frontend, identifier_universe
from .langs.minijava import ClassInfo, MJEnv, MiniJava
from .modgraph import Token

MUTATION_GROUPS = {
    "syn": ("M.1", "M.2", "M.3", "M.4"),
    "sem": ("M.8",),
    "mix": ("M.1", "M.2", "M.3", "M.4", "M.5", "M.6", "M.7", "M.8"),
}


class GenerationError(RuntimeError):
    pass


class MutationError(RuntimeError):
    pass


class OracleCapError(RuntimeError):
    pass


@dataclass(frozen=True, slots=True)
class GenParams:
    seed: int
    classes: tuple[int, int] = (2, 4)
    fields_per_class: tuple[int, int] = (0, 2)
    methods_per_class: tuple[int, int] = (1, 3)
    target_tokens: tuple[int, int] = (30, 60)
    max_backtracks: int = 300
    max_attempts: int = 25

    def __post_init__(self):
        for lo, hi in (self.classes, self.fields_per_class,
                       self.methods_per_class, self.target_tokens):
            if lo > hi or lo < 0:
                raise ValueError("empty range in generation parameters")


@dataclass(frozen=True, slots=True)
class MutationSpec:
    operators: tuple[str, ...]
    count: int
    seed: int

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("mutation count must be >= 1")
        for op in self.operators:
            if op not in MUTATION_GROUPS["mix"]:
                raise ValueError(f"unknown mutation operator {op!r}")


@dataclass(frozen=True)
class UndirectedGraph:
    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError("self-loops are not allowed")
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise ValueError("edge endpoint out of range")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError("duplicate edge")
            seen.add(key)


def mis_alpha(g: UndirectedGraph) -> int:
    """Maximum independent set size by exhaustive search (small n only)."""
    if g.n > 20:
        raise ValueError("brute-force MIS is limited to 20 vertices")
    adj = {v: set() for v in range(1, g.n + 1)}
    for u, v in g.edges:
        adj[u].add(v)
        adj[v].add(u)
    for size in range(g.n, 0, -1):
        for subset in combinations(range(1, g.n + 1), size):
            chosen = set(subset)
            if all(not (adj[v] & chosen) for v in subset):
                return size
    return 0


# ---------------------------------------------------------------------------
# Random compilable program generation (minijava)


class _Backtrack(Exception):
    pass


class _BodyGen:
    def __init__(self, env: MJEnv, rng: random.Random, budget: int, max_backtracks: int):
        self.env = env
        self.rng = rng
        self.budget = budget
        self.max_backtracks = max_backtracks
        self.out: list[str] = []
        self.scope: dict[str, str] = dict(env.vars)
        self.decl_counter = 0
        self.backtracks = 0

    def fail(self):
        self.backtracks += 1
        if self.backtracks > self.max_backtracks:
            raise GenerationError("backtrack budget exhausted")
        raise _Backtrack()

    def emit(self, *lexemes: str):
        self.out.extend(lexemes)

    def gen_body(self, loop: int, depth: int) -> None:
        while len(self.out) < self.budget:
            mark = len(self.out)
            scope_mark = dict(self.scope)
            try:
                self.gen_stmt(loop, depth)
            except _Backtrack:
                del self.out[mark:]
                self.scope = scope_mark
                if self.rng.randrange(3) == 0:
                    break

    def gen_stmt(self, loop: int, depth: int) -> None:
        kinds = ["decl", "decl", "assign", "assign", "call", "call", "return"]
        if depth < 2:
            kinds += ["if", "while"]
        if loop > 0:
            kinds.append("break")
        kind = self.rng.choice(kinds)
        getattr(self, "gen_" + kind)(loop, depth)

    def gen_decl(self, loop: int, depth: int) -> None:
        cls = self.rng.choice(self.class_names())
        self.decl_counter += 1
        name = f"x{self.decl_counter}"
        while name in self.scope or self.env.is_class(name):
            self.decl_counter += 1
            name = f"x{self.decl_counter}"
        self.emit(cls, name, ";")
        self.scope[name] = cls

    def gen_assign(self, loop: int, depth: int) -> None:
        if not self.scope:
            self.fail()
        name = self.rng.choice(sorted(self.scope))
        self.emit(name, "=")
        self.gen_expr(self.scope[name], 2)
        self.emit(";")

    def gen_call(self, loop: int, depth: int) -> None:
        cands = []
        for name in sorted(self.scope):
            for mname, sig in self.env.methods_of(self.scope[name]):
                cands.append((name, mname, sig))
        if not cands:
            self.fail()
        name, mname, (params, _ret) = self.rng.choice(cands)
        self.emit(name, ".", mname, "(")
        for i, ptype in enumerate(params):
            if i:
                self.emit(",")
            self.gen_expr(ptype, 1)
        self.emit(")", ";")

    def gen_return(self, loop: int, depth: int) -> None:
        self.emit("return")
        self.gen_expr(None, 1)
        self.emit(";")

    def gen_break(self, loop: int, depth: int) -> None:
        self.emit("break", ";")

    def gen_if(self, loop: int, depth: int) -> None:
        self.emit("if", "(")
        self.gen_cond()
        self.emit(")", "{")
        self.gen_sub_body(loop, depth)
        self.emit("}", "else", "{")
        self.gen_sub_body(loop, depth)
        self.emit("}")

    def gen_while(self, loop: int, depth: int) -> None:
        self.emit("while", "(")
        self.gen_cond()
        self.emit(")", "{")
        self.gen_sub_body(loop + 1, depth)
        self.emit("}")

    def gen_sub_body(self, loop: int, depth: int) -> None:
        inner: dict[str, str] = dict(self.scope)
        n = self.rng.randrange(3)
        for _ in range(n):
            mark = len(self.out)
            try:
                self.gen_stmt(loop, depth + 1)
            except _Backtrack:
                del self.out[mark:]
                break
        self.scope = inner

    def gen_cond(self) -> None:
        self.gen_expr(None, 1, comparison=True)

    def class_names(self) -> list[str]:
        return [c for c in self.env.classes if c != "Object"] or ["Object"]

    def gen_expr(self, target: str | None, depth: int, comparison: bool = False) -> str:
        """Emit an expression; with ``comparison`` emit a boolean one."""
        env = self.env
        rng = self.rng
        if comparison:
            t = self.gen_expr(None, depth)
            self.emit(rng.choice(["==", "!="]))
            options = sorted(n for n, vt in self.scope.items()
                             if env.comparable(vt, t))
            if options and rng.randrange(4) > 0:
                self.emit(rng.choice(options))
            else:
                if not env.is_class(t) and t != "$null":
                    self.fail()
                self.emit("null")
            return "$bool"
        choices = ["var", "var", "new", "field", "call"]
        if target is not None:
            choices.append("null")
        rng.shuffle(choices)
        for choice in choices:
            if choice == "var":
                options = sorted(n for n, vt in self.scope.items()
                                 if target is None or env.subtype(vt, target))
                if not options:
                    continue
                name = rng.choice(options)
                self.emit(name)
                return self.scope[name]
            if choice == "null":
                self.emit("null")
                return "$null"
            if choice == "new" and depth > 0:
                options = [c for c in self.class_names()
                           if (target is None or env.subtype(c, target))
                           and not env.ctor_params(c)]
                if not options:
                    continue
                cls = rng.choice(options)
                self.emit("new", cls, "(", ")")
                return cls
            if choice == "field" and depth > 0:
                options = []
                for name in sorted(self.scope):
                    for fname, ftype in env.fields_of(self.scope[name]):
                        if target is None or env.subtype(ftype, target):
                            options.append((name, fname, ftype))
                if not options:
                    continue
                name, fname, ftype = rng.choice(options)
                self.emit(name, ".", fname)
                return ftype
            if choice == "call" and depth > 0:
                options = []
                for name in sorted(self.scope):
                    for mname, (params, ret) in env.methods_of(self.scope[name]):
                        if (target is None or env.subtype(ret, target)) \
                                and len(params) <= 1:
                            options.append((name, mname, params, ret))
                if not options:
                    continue
                name, mname, params, ret = rng.choice(options)
                self.emit(name, ".", mname, "(")
                for i, ptype in enumerate(params):
                    if i:
                        self.emit(",")
                    self.gen_expr(ptype, depth - 1)
                self.emit(")")
                return ret
        self.fail()


def _generate_env(rng: random.Random, params: GenParams) -> MJEnv:
    k = rng.randint(*params.classes)
    names = [f"C{i + 1}" for i in range(k)]
    classes: dict[str, ClassInfo] = {"Object": ClassInfo("Object", None)}
    for i, name in enumerate(names):
        sup = rng.choice(["Object"] + names[:i])
        classes[name] = ClassInfo(name, sup)
    for i, name in enumerate(names):
        info = classes[name]
        for j in range(rng.randint(*params.fields_per_class)):
            info.fields[f"f{i + 1}{j + 1}"] = rng.choice(names)
        for j in range(rng.randint(*params.methods_per_class)):
            nparams = rng.randrange(3)
            info.methods[f"m{i + 1}{j + 1}"] = (
                tuple(rng.choice(names) for _ in range(nparams)),
                rng.choice(names))
    nvars = rng.randint(1, 3)
    mj_vars = tuple((f"v{j + 1}", rng.choice(names)) for j in range(nvars))
    return MJEnv(classes, mj_vars)


def generate_program(params: GenParams, frontend: MiniJava | None = None
                     ) -> tuple[MJEnv, list[Token]]:
    """A seeded compilable method body plus its environment.

    Generation is recursive descent with semantic state threaded through;
    any dead end backtracks.  If a whole attempt exhausts its backtrack
    budget the seed is rehashed and generation retries, a bounded number
    of times.
    """
    fe = frontend if frontend is not None else _default_minijava()
    seed = params.seed
    for _ in range(params.max_attempts):
        rng = random.Random(seed)
        env = _generate_env(rng, params)
        gen = _BodyGen(env, rng, rng.randint(*params.target_tokens),
                       params.max_backtracks)
        try:
            gen.gen_body(0, 0)
        except GenerationError:
            seed = _rehash(seed)
            continue
        tokens = fe.tokens_from_lexemes(gen.out)
        ok, diag = fe.check_compiles(tokens, env)
        if not ok:
            raise GenerationError(f"generator produced a non-compiling body: {diag}")
        return env, tokens
    raise GenerationError(f"generation failed after {params.max_attempts} attempts")


def _rehash(seed: int) -> int:
    return (seed * 6364136223846793005 + 1442695040888963407) % (1 << 63)


def _default_minijava() -> MiniJava:
    from .langs import get_frontend
    return get_frontend("minijava")


# ---------------------------------------------------------------------------
# Mutation operators


def mutate(tokens: list[Token], spec: MutationSpec, frontend: Frontend
           ) -> tuple[list[Token], list[dict]]:
    """Apply ``spec.count`` operators drawn from ``spec.operators``,
    sequentially on the evolving token stream.  Returns the mutated
    tokens and the applied-operation log."""
    rng = random.Random(spec.seed)
    lexemes = [t.lexeme for t in tokens]
    kinds = [t.term for t in tokens]
    ident = frontend.ident
    vocab = [t.lexeme for t in frontend.fixed_terminals()]
    applied: list[dict] = []

    def id_positions():
        return [i for i, k in enumerate(kinds) if k is ident]

    def fixed_positions():
        return [i for i, k in enumerate(kinds) if k is not ident]

    def name_pool():
        seen = []
        for i in id_positions():
            if lexemes[i] not in seen:
                seen.append(lexemes[i])
        return seen or ["u0"]

    for _ in range(spec.count):
        for _retry in range(32):
            op = spec.operators[rng.randrange(len(spec.operators))]
            if op == "M.1":
                pos = rng.randrange(len(lexemes) + 1)
                lex = vocab[rng.randrange(len(vocab))]
                lexemes.insert(pos, lex)
                kinds.insert(pos, _fixed_sym(frontend, lex))
            elif op == "M.2":
                cands = fixed_positions()
                if not cands:
                    continue
                pos = cands[rng.randrange(len(cands))]
                del lexemes[pos], kinds[pos]
            elif op == "M.3":
                cands = fixed_positions()
                if not cands:
                    continue
                pos = cands[rng.randrange(len(cands))]
                lexemes.insert(pos + 1, lexemes[pos])
                kinds.insert(pos + 1, kinds[pos])
            elif op == "M.4":
                cands = fixed_positions()
                if not cands:
                    continue
                pos = cands[rng.randrange(len(cands))]
                others = [v for v in vocab if v != lexemes[pos]]
                lex = others[rng.randrange(len(others))]
                lexemes[pos] = lex
                kinds[pos] = _fixed_sym(frontend, lex)
            elif op == "M.5":
                pos = rng.randrange(len(lexemes) + 1)
                pool = name_pool()
                lexemes.insert(pos, pool[rng.randrange(len(pool))])
                kinds.insert(pos, ident)
            elif op == "M.6":
                cands = id_positions()
                if not cands:
                    continue
                pos = cands[rng.randrange(len(cands))]
                del lexemes[pos], kinds[pos]
            elif op == "M.7":
                cands = id_positions()
                if not cands:
                    continue
                pos = cands[rng.randrange(len(cands))]
                lexemes.insert(pos + 1, lexemes[pos])
                kinds.insert(pos + 1, ident)
            else:  # M.8
                cands = id_positions()
                if not cands:
                    continue
                pos = cands[rng.randrange(len(cands))]
                others = [n for n in name_pool() if n != lexemes[pos]]
                if not others:
                    continue
                lexemes[pos] = others[rng.randrange(len(others))]
            applied.append({"op": op, "pos": pos})
            break
        else:
            raise MutationError("no applicable operator after bounded retries")

    return frontend.tokens_from_lexemes(lexemes), applied


def _fixed_sym(frontend: Frontend, lexeme: str):
    return frontend.sym[f"'{lexeme}'"]


# ---------------------------------------------------------------------------
# Independent-set encoding


MIS_ENV_TEXT = """\
class InMIS : Object { ctor(); method InMIS addEdge(OutMIS); }
class OutMIS : Object { ctor(); method OutMIS addEdge(Object); }
"""


def mis_source(g: UndirectedGraph) -> str:
    lines = [f"InMIS v{i} ;" for i in range(1, g.n + 1)]
    for x, y in g.edges:
        lines.extend([f"v{x} . addEdge ( v{y} ) ;"] * g.n)
    return "\n".join(lines) + ("\n" if lines else "")


def encode_mis(g: UndirectedGraph, frontend: MiniJava | None = None
               ) -> tuple[MJEnv, list[Token]]:
    """The reduction program: ``n`` declarations typed ``InMIS``, then
    ``n`` identical call lines per edge.  Its minimal fix weight equals
    ``n`` minus the maximum-independent-set size: a cheapest repair
    retypes exactly the declarations outside some maximum independent
    set as ``OutMIS``."""
    fe = frontend if frontend is not None else _default_minijava()
    env = fe.parse_env(MIS_ENV_TEXT)
    return env, fe.lex(mis_source(g))


# ---------------------------------------------------------------------------
# Brute-force minimal-fix oracle


def oracle_min_fix(tokens: list[Token], frontend: Frontend, env,
                   k_max: int, max_checks: int = 5_000_000) -> int | None:
    """Least k <= k_max such that some token string within edit distance k
    passes the reference checker, by breadth-first edit enumeration.

    Documented feasibility: programs up to ~40 tokens with k_max <= 2.
    Identifier insertions and updates range over the names present in the
    program, the environment's names, and one fresh name, mirroring the
    fixer's candidate policy.  Raises OracleCapError past ``max_checks``.
    """
    fe = frontend
    names = identifier_universe(tokens, fe.ident, fe.oracle_names(env), set())
    alphabet: list[tuple] = [(t, t.lexeme) for t in fe.fixed_terminals()]
    alphabet += [(fe.ident, n) for n in names]

    checks = 0

    def check(seq: tuple) -> tuple[bool, int]:
        nonlocal checks
        checks += 1
        if checks > max_checks:
            raise OracleCapError(f"oracle exceeded {max_checks} checks")
        toks = [Token(sym, lex, i) for i, (sym, lex) in enumerate(seq)]
        ok, _, pos = fe.check_detail(toks, env)
        return ok, pos

    def edits_of(seq: tuple, limit_pos: int):
        """One-edit variants touching only positions <= limit_pos (the
        reference checker is one-pass with two-token lookahead, so edits
        strictly past failure+1 cannot change the failure)."""
        n = len(seq)
        hi = min(n, limit_pos)
        for pos in range(hi + 1):
            for entry in alphabet:
                if pos < n and entry != seq[pos]:
                    yield seq[:pos] + (entry,) + seq[pos + 1:]
                yield seq[:pos] + (entry,) + seq[pos:]
            if pos < n:
                yield seq[:pos] + seq[pos + 1:]

    start = tuple((t.term, t.lexeme) for t in tokens)
    ok, pos = check(start)
    if ok:
        return 0
    frontier: list[tuple[tuple, int]] = [(start, pos)]
    seen = {start}
    for k in range(1, k_max + 1):
        next_frontier: list[tuple[tuple, int]] = []
        keep = k < k_max  # the last level does not need storage
        for seq, fail_pos in frontier:
            for cand in edits_of(seq, fail_pos + 1):
                if keep:
                    if cand in seen:
                        continue
                    seen.add(cand)
                ok, pos = check(cand)
                if ok:
                    return k
                if keep:
                    next_frontier.append((cand, pos))
        frontier = next_frontier
    return None

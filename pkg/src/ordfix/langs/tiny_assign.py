"""The one-statement assignment language used as the worked example.

One production, ``S -> ID '=' ID ';'``, over a fixed environment of typed
variables; an assignment is well-formed exactly when both sides name
declared variables of the same type.
"""

from __future__ import annotations

from ..attrcheck import BinarizedRules, ProductionRule, TermInfo
from ..grammar import Symbol
from ..modgraph import Token
from .base import EnvError, Frontend

TOK = ("tok",)
UNIT = ("unit",)
OK = ("ok",)


class VarEnv:
    """Ordered, immutable name -> type table."""

    def __init__(self, pairs: tuple[tuple[str, str], ...]):
        self.vars = pairs
        self._map = dict(pairs)

    def lookup(self, name: str) -> str | None:
        return self._map.get(name)

    def __eq__(self, other):
        return isinstance(other, VarEnv) and self.vars == other.vars

    def __hash__(self):
        return hash(self.vars)


class _AssignRule(ProductionRule):
    def __init__(self, env: VarEnv):
        self.env = env

    def child_inherited(self, j, inh, prefix):
        if j in (0, 2):
            return ("id", self.env.vars)
        return UNIT

    def synthesized(self, inh, children):
        lhs, _, rhs, _ = children
        return OK if lhs[1] == rhs[1] else None


class TinyAssign(Frontend):
    name = "tiny-assign"
    grammar_text = """
start S;
terminal ID : identifier;
S -> ID '=' ID ';'
"""

    def parse_env(self, text: str) -> VarEnv:
        pairs: list[tuple[str, str]] = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if not (line.startswith("var ") and line.endswith(";") and ":" in line):
                raise EnvError(f"line {lineno}: expected 'var NAME : TYPE;'")
            body = line[len("var "):-1]
            name, _, typ = (s.strip() for s in body.partition(":"))
            if not name.isidentifier() or not typ.isidentifier():
                raise EnvError(f"line {lineno}: bad name or type")
            if any(n == name for n, _ in pairs):
                raise EnvError(f"line {lineno}: variable {name!r} declared twice")
            pairs.append((name, typ))
        return VarEnv(tuple(pairs))

    def env_to_text(self, env: VarEnv) -> str:
        return "".join(f"var {n} : {t};\n" for n, t in env.vars)

    def oracle_names(self, env: VarEnv) -> list[str]:
        return [n for n, _ in env.vars]

    def make_rules(self, env: VarEnv, tokens: list[Token]) -> BinarizedRules:
        rule = _AssignRule(env)
        prod_rules = {p.pid: rule for p in self.grammar.productions}

        def terminal(sym: Symbol, info: TermInfo, inh):
            if sym is not self.ident:
                return (TOK,)
            if info.lexeme is not None:
                t = env.lookup(info.lexeme)
                return ((info.lexeme, t),) if t is not None else ()
            return tuple((n, t) for n, t in env.vars if n != info.exclude)

        def materialize(sym: Symbol, info: TermInfo, inh, synth) -> str:
            return synth[0] if sym is self.ident else sym.lexeme

        return BinarizedRules(self.normalized, prod_rules, terminal,
                              lambda _env: env.vars, materialize)

    def check_detail(self, tokens: list[Token], env: VarEnv):
        want = [self.ident, self.sym["'='"], self.ident, self.sym["';'"]]
        for i, sym in enumerate(want):
            if i >= len(tokens) or tokens[i].term is not sym:
                return False, f"expected {sym.name} at token {i}", i
        if len(tokens) > 4:
            return False, "trailing tokens after statement", 4
        lt = env.lookup(tokens[0].lexeme)
        rt = env.lookup(tokens[2].lexeme)
        if lt is None:
            return False, f"undeclared variable {tokens[0].lexeme!r}", 0
        if rt is None:
            return False, f"undeclared variable {tokens[2].lexeme!r}", 2
        if lt != rt:
            return False, f"cannot assign {rt} to {lt}", 2
        return True, "ok", len(tokens)

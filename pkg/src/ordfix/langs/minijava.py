"""A small statically-typed object language for method bodies.

Pure object world: classes with single inheritance rooted at ``Object``,
fields, single-signature methods and constructors.  Statements cover
local declarations, assignments (variable and field), expression
statements, ``if``/``else`` and ``while`` with mandatory braces,
``break`` and ``return``.  Expressions are identifier references, field
access, method invocation, object construction, ``null``, parenthesized
expressions and (in)equality comparison, which is the only way to build
a boolean.

Semantic constraints: declaration before use, no redeclaration, subtype
compatible assignment and argument passing, conditions must be boolean,
``break`` only inside loops.
"""

from __future__ import annotations

import re

from ..attrcheck import BinarizedRules, ProductionRule, TermInfo
from ..grammar import Symbol
from ..modgraph import Token
from .base import EnvError, Frontend, identifier_universe

NULL = "$null"
BOOL = "$bool"
TOK = ("tok",)
UNIT = ("unit",)
OK = ("ok",)


class ClassInfo:
    def __init__(self, name: str, sup: str | None):
        self.name = name
        self.sup = sup
        self.fields: dict[str, str] = {}
        self.methods: dict[str, tuple[tuple[str, ...], str]] = {}
        self.ctor: tuple[str, ...] = ()


class MJEnv:
    """Class table plus free (pre-declared) variables."""

    def __init__(self, classes: dict[str, ClassInfo], mj_vars: tuple[tuple[str, str], ...]):
        self.classes = classes
        self.vars = mj_vars

    def is_class(self, t: str) -> bool:
        return t in self.classes

    def subtype(self, a: str, b: str) -> bool:
        if a == b:
            return True
        if a == NULL:
            return b in self.classes
        c = self.classes.get(a)
        while c is not None and c.sup is not None:
            if c.sup == b:
                return True
            c = self.classes.get(c.sup)
        return False

    def comparable(self, a: str, b: str) -> bool:
        return self.subtype(a, b) or self.subtype(b, a)

    def supers_chain(self, cls: str):
        c = self.classes.get(cls)
        while c is not None:
            yield c
            c = self.classes.get(c.sup) if c.sup is not None else None

    def field_type(self, cls: str, name: str) -> str | None:
        for c in self.supers_chain(cls):
            if name in c.fields:
                return c.fields[name]
        return None

    def fields_of(self, cls: str) -> list[tuple[str, str]]:
        out, seen = [], set()
        for c in self.supers_chain(cls):
            for n, t in c.fields.items():
                if n not in seen:
                    seen.add(n)
                    out.append((n, t))
        return out

    def method_sig(self, cls: str, name: str) -> tuple[tuple[str, ...], str] | None:
        for c in self.supers_chain(cls):
            if name in c.methods:
                return c.methods[name]
        return None

    def methods_of(self, cls: str) -> list[tuple[str, tuple[tuple[str, ...], str]]]:
        out, seen = [], set()
        for c in self.supers_chain(cls):
            for n, sig in c.methods.items():
                if n not in seen:
                    seen.add(n)
                    out.append((n, sig))
        return out

    def ctor_params(self, cls: str) -> tuple[str, ...]:
        return self.classes[cls].ctor


class IdTab:
    """Interned immutable name -> type table: hash cached, equality by
    identity on the fast path.  Tables are hashed constantly as parts of
    memo keys, so this matters."""

    __slots__ = ("pairs", "_hash")

    def __init__(self, pairs: tuple):
        self.pairs = pairs
        self._hash = hash(pairs)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return self is other or (isinstance(other, IdTab) and self.pairs == other.pairs)

    def __repr__(self):
        return f"IdTab{self.pairs!r}"

    def get(self, name: str) -> str | None:
        for n, t in self.pairs:
            if n == name:
                return t
        return None


class _TabIntern:
    def __init__(self):
        self._tabs: dict[tuple, IdTab] = {}

    def of(self, pairs: tuple) -> IdTab:
        tab = self._tabs.get(pairs)
        if tab is None:
            tab = self._tabs[pairs] = IdTab(pairs)
        return tab

    def add(self, tab: IdTab, name: str, typ: str) -> IdTab:
        return self.of(tuple(sorted(tab.pairs + ((name, typ),))))


class _Rule(ProductionRule):
    def __init__(self, child_fn, synth_fn):
        self._child = child_fn
        self._synth = synth_fn

    def child_inherited(self, j, inh, prefix):
        return self._child(j, inh, prefix)

    def synthesized(self, inh, children):
        return self._synth(inh, children)


class MiniJava(Frontend):
    name = "minijava"
    grammar_text = """
start Body;
terminal ID : identifier;

Body -> .
Body -> Stmt Body
Stmt -> ID ID ';'
Stmt -> Lhs '=' Expr ';'
Stmt -> Expr ';'
Stmt -> 'if' '(' Expr ')' '{' Body '}' 'else' '{' Body '}'
Stmt -> 'while' '(' Expr ')' '{' Body '}'
Stmt -> 'break' ';'
Stmt -> 'return' Expr ';'
Lhs -> ID
Lhs -> Primary '.' ID
Expr -> Primary
Expr -> Primary '==' Primary
Expr -> Primary '!=' Primary
Primary -> ID
Primary -> 'null'
Primary -> 'new' ID '(' Args ')'
Primary -> Primary '.' ID
Primary -> Primary '.' ID '(' Args ')'
Primary -> '(' Expr ')'
Args -> .
Args -> ArgList
ArgList -> Expr
ArgList -> Expr ',' ArgList
"""

    # -- environment ----------------------------------------------------

    def parse_env(self, text: str) -> MJEnv:
        cur = _EnvCursor(text)
        classes: dict[str, ClassInfo] = {"Object": ClassInfo("Object", None)}
        mj_vars: list[tuple[str, str]] = []

        while not cur.done():
            if cur.try_eat("class"):
                cname = cur.name()
                if cname in classes:
                    raise EnvError(f"class {cname!r} declared twice")
                cur.expect(":")
                info = ClassInfo(cname, cur.name())
                cur.expect("{")
                while not cur.try_eat("}"):
                    if cur.try_eat("ctor"):
                        info.ctor = cur.param_list()
                    elif cur.try_eat("field"):
                        ftype = cur.name()
                        fname = cur.name()
                        if fname in info.fields:
                            raise EnvError(f"field {fname!r} declared twice in {cname}")
                        info.fields[fname] = ftype
                        cur.expect(";")
                    elif cur.try_eat("method"):
                        rtype = cur.name()
                        mname = cur.name()
                        if mname in info.methods:
                            raise EnvError(f"method {mname!r} declared twice in {cname}")
                        info.methods[mname] = (cur.param_list(), rtype)
                    else:
                        raise EnvError(f"unknown member kind {cur.peek()!r} in class {cname}")
                classes[cname] = info
            elif cur.try_eat("var"):
                vname = cur.name()
                cur.expect(":")
                vtype = cur.name()
                cur.expect(";")
                if any(n == vname for n, _ in mj_vars):
                    raise EnvError(f"variable {vname!r} declared twice")
                mj_vars.append((vname, vtype))
            else:
                raise EnvError(f"unexpected {cur.peek()!r} in environment")

        env = MJEnv(classes, tuple(mj_vars))
        self._validate_env(env)
        return env

    def _validate_env(self, env: MJEnv) -> None:
        for c in env.classes.values():
            if c.name == "Object":
                continue
            if c.sup not in env.classes:
                raise EnvError(f"class {c.name}: unknown superclass {c.sup!r}")
            seen = {c.name}
            s = c.sup
            while s is not None:
                if s in seen:
                    raise EnvError(f"inheritance cycle through {c.name!r}")
                seen.add(s)
                s = env.classes[s].sup
            for t in list(c.fields.values()) + list(c.ctor):
                if t not in env.classes:
                    raise EnvError(f"class {c.name}: unknown type {t!r}")
            for params, ret in c.methods.values():
                for t in list(params) + [ret]:
                    if t not in env.classes:
                        raise EnvError(f"class {c.name}: unknown type {t!r}")
        for n, t in env.vars:
            if t not in env.classes:
                raise EnvError(f"variable {n}: unknown type {t!r}")

    def env_to_text(self, env: MJEnv) -> str:
        out = []
        for c in env.classes.values():
            if c.name == "Object":
                continue
            members = [f"ctor({', '.join(c.ctor)});"]
            members += [f"field {t} {n};" for n, t in c.fields.items()]
            members += [f"method {ret} {n}({', '.join(params)});"
                        for n, (params, ret) in c.methods.items()]
            out.append(f"class {c.name} : {c.sup} {{ {' '.join(members)} }}")
        out += [f"var {n} : {t};" for n, t in env.vars]
        return "\n".join(out) + "\n"

    def oracle_names(self, env: MJEnv) -> list[str]:
        return [n for n, _ in env.vars] + list(env.classes)

    # -- engine rules -----------------------------------------------------

    def make_rules(self, env: MJEnv, tokens: list[Token]) -> BinarizedRules:
        universe = identifier_universe(tokens, self.ident,
                                       [n for n, _ in env.vars], set(env.classes))
        tabs = _TabIntern()
        idtab0 = tabs.of(tuple(sorted(env.vars)))
        rules_by_sig = self._rules_by_sig(env, tabs)
        prod_rules = {}
        for p in self.grammar.productions:
            sig = (p.lhs.name, tuple(s.name for s in p.rhs))
            prod_rules[p.pid] = rules_by_sig[sig]

        def terminal(sym: Symbol, info: TermInfo, inh):
            if sym is not self.ident:
                return (TOK,)
            kind = inh[0]
            if kind == "cls":
                make = lambda n, _x=None: ("cls", n)
                pool = [(n, None) for n in env.classes]
            elif kind == "decl":
                idtab = inh[1]
                pool = [(n, None) for n in universe
                        if idtab.get(n) is None and n not in env.classes]
                make = lambda n, _x=None: ("nm", n)
            elif kind == "use":
                _, idtab, expected = inh
                pool = [(n, t) for n, t in idtab.pairs
                        if expected is None or env.subtype(t, expected)]
                make = lambda n, t: ("v", n, t)
            elif kind == "fld":
                pool = env.fields_of(inh[1])
                make = lambda n, t: ("f", n, t)
            else:  # "mth"
                pool = env.methods_of(inh[1])
                make = lambda n, sig: ("m", n, sig[0], sig[1])
            if info.lexeme is not None:
                return tuple(make(n, x) for n, x in pool if n == info.lexeme)
            return tuple(make(n, x) for n, x in pool if n != info.exclude)

        def materialize(sym: Symbol, info: TermInfo, inh, synth) -> str:
            return synth[1] if sym is self.ident else sym.lexeme

        def root(_env):
            return ("s", idtab0, 0)

        return BinarizedRules(self.normalized, prod_rules, terminal, root, materialize)

    def _rules_by_sig(self, env: MJEnv, tabs: _TabIntern) -> dict:
        def expr_inh(idtab, expected=None):
            return ("e", idtab, expected)

        r: dict = {}

        def rule(lhs, rhs, child_fn, synth_fn):
            r[(lhs, tuple(rhs))] = _Rule(child_fn, synth_fn)

        unit = lambda j, inh, pre: UNIT

        # Body -> .
        rule("Body", [], unit, lambda inh, ch: inh[1])

        # Body -> Stmt Body
        def body_cons_child(j, inh, pre):
            if j == 0:
                return inh
            return ("s", pre[0], inh[2])
        rule("Body", ["Stmt", "Body"], body_cons_child, lambda inh, ch: ch[1])

        # Stmt -> ID ID ';'
        def decl_child(j, inh, pre):
            if j == 0:
                return ("cls",)
            if j == 1:
                return ("decl", inh[1])
            return UNIT
        def decl_synth(inh, ch):
            return tabs.add(inh[1], ch[1][1], ch[0][1])
        rule("Stmt", ["ID", "ID", "';'"], decl_child, decl_synth)

        # Stmt -> Lhs '=' Expr ';'
        def assign_child(j, inh, pre):
            if j == 0:
                return expr_inh(inh[1])
            if j == 2:
                return expr_inh(inh[1], pre[0])
            return UNIT
        def assign_synth(inh, ch):
            return inh[1] if env.subtype(ch[2], ch[0]) else None
        rule("Stmt", ["Lhs", "'='", "Expr", "';'"], assign_child, assign_synth)

        # Stmt -> Expr ';'
        rule("Stmt", ["Expr", "';'"],
             lambda j, inh, pre: expr_inh(inh[1]) if j == 0 else UNIT,
             lambda inh, ch: inh[1])

        # Stmt -> if ( Expr ) { Body } else { Body }
        def if_child(j, inh, pre):
            if j == 2:
                return expr_inh(inh[1], BOOL)
            if j in (5, 9):
                return inh
            return UNIT
        def if_synth(inh, ch):
            return inh[1] if ch[2] == BOOL else None
        rule("Stmt", ["'if'", "'('", "Expr", "')'", "'{'", "Body", "'}'",
                      "'else'", "'{'", "Body", "'}'"], if_child, if_synth)

        # Stmt -> while ( Expr ) { Body }
        def while_child(j, inh, pre):
            if j == 2:
                return expr_inh(inh[1], BOOL)
            if j == 5:
                return ("s", inh[1], inh[2] + 1)
            return UNIT
        rule("Stmt", ["'while'", "'('", "Expr", "')'", "'{'", "Body", "'}'"],
             while_child, if_synth)

        # Stmt -> break ';'
        rule("Stmt", ["'break'", "';'"], unit,
             lambda inh, ch: inh[1] if inh[2] > 0 else None)

        # Stmt -> return Expr ';'
        rule("Stmt", ["'return'", "Expr", "';'"],
             lambda j, inh, pre: expr_inh(inh[1]) if j == 1 else UNIT,
             lambda inh, ch: inh[1])

        # Lhs -> ID
        rule("Lhs", ["ID"],
             lambda j, inh, pre: ("use", inh[1], None),
             lambda inh, ch: ch[0][2])

        # Lhs -> Primary '.' ID
        def fldsel_child(j, inh, pre):
            if j == 0:
                return expr_inh(inh[1])
            if j == 2:
                return ("fld", pre[0]) if env.is_class(pre[0]) else None
            return UNIT
        rule("Lhs", ["Primary", "'.'", "ID"], fldsel_child,
             lambda inh, ch: ch[2][2])

        # Expr -> Primary
        rule("Expr", ["Primary"], lambda j, inh, pre: inh,
             lambda inh, ch: ch[0])

        # Expr -> Primary ==/!= Primary
        def cmp_child(j, inh, pre):
            return expr_inh(inh[1]) if j in (0, 2) else UNIT
        def cmp_synth(inh, ch):
            return BOOL if env.comparable(ch[0], ch[2]) else None
        rule("Expr", ["Primary", "'=='", "Primary"], cmp_child, cmp_synth)
        rule("Expr", ["Primary", "'!='", "Primary"], cmp_child, cmp_synth)

        # Primary -> ID
        rule("Primary", ["ID"],
             lambda j, inh, pre: ("use", inh[1], inh[2]),
             lambda inh, ch: ch[0][2])

        # Primary -> null
        rule("Primary", ["'null'"], unit, lambda inh, ch: NULL)

        # Primary -> new ID ( Args )
        def new_child(j, inh, pre):
            if j == 1:
                return ("cls",)
            if j == 3:
                return ("a", inh[1], env.ctor_params(pre[1][1]), 0)
            return UNIT
        rule("Primary", ["'new'", "ID", "'('", "Args", "')'"], new_child,
             lambda inh, ch: ch[1][1])

        # Primary -> Primary '.' ID
        rule("Primary", ["Primary", "'.'", "ID"], fldsel_child,
             lambda inh, ch: ch[2][2])

        # Primary -> Primary '.' ID ( Args )
        def call_child(j, inh, pre):
            if j == 0:
                return expr_inh(inh[1])
            if j == 2:
                return ("mth", pre[0]) if env.is_class(pre[0]) else None
            if j == 4:
                return ("a", inh[1], pre[2][2], 0)
            return UNIT
        rule("Primary", ["Primary", "'.'", "ID", "'('", "Args", "')'"],
             call_child, lambda inh, ch: ch[2][3])

        # Primary -> ( Expr )
        rule("Primary", ["'('", "Expr", "')'"],
             lambda j, inh, pre: inh if j == 1 else UNIT,
             lambda inh, ch: ch[1])

        # Args -> .
        rule("Args", [], unit,
             lambda inh, ch: OK if inh[3] == len(inh[2]) else None)

        # Args -> ArgList
        rule("Args", ["ArgList"], lambda j, inh, pre: inh,
             lambda inh, ch: ch[0])

        # ArgList -> Expr
        def arg_last_child(j, inh, pre):
            _, idtab, params, idx = inh
            if idx != len(params) - 1:
                return None
            return expr_inh(idtab, params[idx])
        def arg_last_synth(inh, ch):
            return OK if env.subtype(ch[0], inh[2][inh[3]]) else None
        rule("ArgList", ["Expr"], arg_last_child, arg_last_synth)

        # ArgList -> Expr ',' ArgList
        def arg_cons_child(j, inh, pre):
            _, idtab, params, idx = inh
            if j == 0:
                if idx > len(params) - 2:
                    return None
                return expr_inh(idtab, params[idx])
            if j == 2:
                return ("a", idtab, params, idx + 1)
            return UNIT
        def arg_cons_synth(inh, ch):
            return OK if env.subtype(ch[0], inh[2][inh[3]]) else None
        rule("ArgList", ["Expr", "','", "ArgList"], arg_cons_child, arg_cons_synth)

        return r

    # -- reference checker -------------------------------------------------

    def check_detail(self, tokens: list[Token], env: MJEnv):
        chk = _Checker(self, tokens, env)
        return chk.run()


class _EnvCursor:
    def __init__(self, text: str):
        stripped = "\n".join(line.split("#", 1)[0] for line in text.splitlines())
        self.words = re.findall(r"[A-Za-z_]\w*|[{}();:,]", stripped)
        self.i = 0

    def done(self) -> bool:
        return self.i >= len(self.words)

    def peek(self) -> str:
        return self.words[self.i] if self.i < len(self.words) else "<eof>"

    def try_eat(self, tok: str) -> bool:
        if self.peek() == tok:
            self.i += 1
            return True
        return False

    def expect(self, tok: str) -> None:
        if not self.try_eat(tok):
            raise EnvError(f"expected {tok!r}, found {self.peek()!r}")

    def name(self) -> str:
        w = self.peek()
        if not w.isidentifier():
            raise EnvError(f"expected a name, found {w!r}")
        self.i += 1
        return w

    def param_list(self) -> tuple[str, ...]:
        self.expect("(")
        params: list[str] = []
        if not self.try_eat(")"):
            while True:
                params.append(self.name())
                if self.try_eat(","):
                    continue
                self.expect(")")
                break
        self.expect(";")
        return tuple(params)


class _Fail(Exception):
    def __init__(self, msg: str, pos: int):
        self.msg = msg
        self.pos = pos


class _Checker:
    """Single-pass recursive-descent parse plus type check.

    Deliberately independent of the reachability engine: this is the
    reference implementation of what "compiles" means.
    """

    def __init__(self, fe: MiniJava, tokens: list[Token], env: MJEnv):
        self.fe = fe
        self.toks = tokens
        self.env = env
        self.i = 0
        self.scope: dict[str, str] = dict(env.vars)

    def run(self):
        try:
            order: list[str] = []
            self.body(0, order)
            if self.i != len(self.toks):
                raise _Fail("trailing tokens", self.i)
            return True, "ok", len(self.toks)
        except _Fail as f:
            return False, f"token {f.pos}: {f.msg}", f.pos

    # helpers ----------------------------------------------------------

    def peek(self, k: int = 0) -> Token | None:
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else None

    def at(self, name: str, k: int = 0) -> bool:
        t = self.peek(k)
        return t is not None and t.term is self.fe.sym.get(name)

    def at_id(self, k: int = 0) -> bool:
        t = self.peek(k)
        return t is not None and t.term is self.fe.ident

    def eat(self, name: str) -> Token:
        if not self.at(name):
            raise _Fail(f"expected {name}", self.i)
        self.i += 1
        return self.toks[self.i - 1]

    def eat_id(self) -> str:
        if not self.at_id():
            raise _Fail("expected an identifier", self.i)
        self.i += 1
        return self.toks[self.i - 1].lexeme

    # grammar ----------------------------------------------------------

    def body(self, loop: int, order: list[str]) -> None:
        while self.i < len(self.toks) and not self.at("'}'"):
            self.stmt(loop, order)

    def block(self, loop: int) -> None:
        self.eat("'{'")
        inner: list[str] = []
        self.body(loop, inner)
        self.eat("'}'")
        for name in inner:
            del self.scope[name]

    def stmt(self, loop: int, order: list[str]) -> None:
        if self.at("'if'"):
            self.eat("'if'")
            self.eat("'('")
            t = self.expr()
            if t != BOOL:
                raise _Fail("condition must be boolean", self.i)
            self.eat("')'")
            self.block(loop)
            self.eat("'else'")
            self.block(loop)
            return
        if self.at("'while'"):
            self.eat("'while'")
            self.eat("'('")
            t = self.expr()
            if t != BOOL:
                raise _Fail("condition must be boolean", self.i)
            self.eat("')'")
            self.block(loop + 1)
            return
        if self.at("'break'"):
            if loop == 0:
                raise _Fail("break outside a loop", self.i)
            self.eat("'break'")
            self.eat("';'")
            return
        if self.at("'return'"):
            self.eat("'return'")
            self.expr()
            self.eat("';'")
            return
        if self.at_id() and self.at_id(1):
            cls = self.eat_id()
            if not self.env.is_class(cls):
                raise _Fail(f"unknown type {cls!r}", self.i - 1)
            name = self.eat_id()
            if name in self.scope or self.env.is_class(name):
                raise _Fail(f"name {name!r} already bound", self.i - 1)
            self.eat("';'")
            self.scope[name] = cls
            order.append(name)
            return
        # assignment, comparison statement, or expression statement
        t, lvalue = self.primary_chain()
        if self.at("'='"):
            if not lvalue:
                raise _Fail("left side of '=' is not assignable", self.i)
            self.eat("'='")
            rt = self.expr()
            if not self.env.subtype(rt, t):
                raise _Fail(f"cannot assign {rt} to {t}", self.i)
            self.eat("';'")
            return
        if self.at("'=='") or self.at("'!='"):
            self.i += 1
            rt, _ = self.primary_chain()
            if not self.env.comparable(t, rt):
                raise _Fail(f"cannot compare {t} with {rt}", self.i)
            self.eat("';'")
            return
        self.eat("';'")

    def expr(self) -> str:
        t, _ = self.primary_chain()
        if self.at("'=='") or self.at("'!='"):
            self.i += 1
            rt, _ = self.primary_chain()
            if not self.env.comparable(t, rt):
                raise _Fail(f"cannot compare {t} with {rt}", self.i)
            return BOOL
        return t

    def primary_chain(self) -> tuple[str, bool]:
        """Parse a Primary and report whether it is assignable (a bare
        variable or a trailing field access)."""
        env = self.env
        if self.at("'null'"):
            self.i += 1
            t, lvalue = NULL, False
        elif self.at("'new'"):
            self.i += 1
            cls = self.eat_id()
            if not env.is_class(cls):
                raise _Fail(f"unknown class {cls!r}", self.i - 1)
            self.eat("'('")
            self.args(env.ctor_params(cls))
            self.eat("')'")
            t, lvalue = cls, False
        elif self.at("'('"):
            self.i += 1
            t = self.expr()
            self.eat("')'")
            lvalue = False
        elif self.at_id():
            name = self.eat_id()
            if name not in self.scope:
                raise _Fail(f"undeclared identifier {name!r}", self.i - 1)
            t, lvalue = self.scope[name], True
        else:
            raise _Fail("expected an expression", self.i)
        while self.at("'.'"):
            self.i += 1
            member = self.eat_id()
            if not env.is_class(t):
                raise _Fail(f"{t} has no members", self.i - 1)
            if self.at("'('"):
                sig = env.method_sig(t, member)
                if sig is None:
                    raise _Fail(f"no method {member!r} on {t}", self.i - 1)
                self.eat("'('")
                self.args(sig[0])
                self.eat("')'")
                t, lvalue = sig[1], False
            else:
                ft = env.field_type(t, member)
                if ft is None:
                    raise _Fail(f"no field {member!r} on {t}", self.i - 1)
                t, lvalue = ft, True
        return t, lvalue

    def args(self, params: tuple[str, ...]) -> None:
        got = []
        if not self.at("')'"):
            while True:
                at = self.expr()
                got.append(at)
                if len(got) > len(params):
                    raise _Fail("too many arguments", self.i)
                if not self.env.subtype(at, params[len(got) - 1]):
                    raise _Fail(
                        f"argument {len(got)}: {at} is not a {params[len(got) - 1]}",
                        self.i)
                if self.at("','"):
                    self.i += 1
                    continue
                break
        if len(got) != len(params):
            raise _Fail(f"expected {len(params)} arguments, got {len(got)}", self.i)

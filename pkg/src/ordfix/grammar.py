"""Context-free grammars and their two-symbol normal form.

A grammar is read from a small line-oriented description (see
``parse_grammar``) and can be normalized so that every production has at
most two right-hand-side symbols, the shape required by the reachability
engine.  Binarization is left-to-right and every introduced nonterminal
keeps a link back to the production it came from, so derivations under
the normalized grammar can be mapped back to the original one.
"""

from __future__ import annotations

from dataclasses import dataclass, field

FIXED = "fixed"
IDENT = "identifier"
LITERAL = "literal"


class GrammarError(ValueError):
    """Raised for malformed grammar descriptions."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", col {col}" if col is not None else "") + ")"
        super().__init__(message + loc)
        self.line = line
        self.col = col


@dataclass(eq=False, slots=True)
class Symbol:
    """A terminal or nonterminal. Identity is by object; ``sid`` is dense per grammar."""

    sid: int
    name: str
    terminal: bool
    subkind: str | None = None  # FIXED | IDENT | LITERAL for terminals
    lexeme: str | None = None   # concrete text of FIXED terminals

    @property
    def is_class_terminal(self) -> bool:
        return self.terminal and self.subkind in (IDENT, LITERAL)

    def __repr__(self) -> str:
        return f"<{'T' if self.terminal else 'N'} {self.name}>"


@dataclass(eq=False, slots=True)
class Production:
    """``lhs -> rhs``.  ``origin`` is (pre-normalization pid, position of
    ``rhs[0]`` within that production's right-hand side)."""

    pid: int
    lhs: Symbol
    rhs: tuple[Symbol, ...]
    origin: tuple[int, int]

    def __repr__(self) -> str:
        rhs = " ".join(s.name for s in self.rhs) or "."
        return f"[{self.pid}] {self.lhs.name} -> {rhs}"


class Grammar:
    """Symbol and production tables plus lookup indexes.

    Immutable once built; safe to share between concurrent fix jobs.
    """

    def __init__(self, symbols: list[Symbol], productions: list[Production],
                 start: Symbol, source: "Grammar | None" = None):
        self.symbols = symbols
        self.productions = productions
        self.start = start
        self.source = source  # pre-normalization grammar, if this one is normalized
        self.by_name = {s.name: s for s in symbols}
        self.by_lhs: dict[int, list[Production]] = {}
        self.by_first: dict[int, list[Production]] = {}
        self.by_second: dict[int, list[Production]] = {}
        for p in productions:
            self.by_lhs.setdefault(p.lhs.sid, []).append(p)
            if len(p.rhs) >= 1:
                self.by_first.setdefault(p.rhs[0].sid, []).append(p)
            if len(p.rhs) == 2:
                self.by_second.setdefault(p.rhs[1].sid, []).append(p)

    @property
    def terminals(self) -> list[Symbol]:
        return [s for s in self.symbols if s.terminal]

    @property
    def nonterminals(self) -> list[Symbol]:
        return [s for s in self.symbols if not s.terminal]

    def is_normalized(self) -> bool:
        return all(len(p.rhs) <= 2 for p in self.productions)

    def origin_production(self, p: Production) -> Production:
        """The un-normalized production a normalized production came from."""
        src = self.source if self.source is not None else self
        return src.productions[p.origin[0]]

    def epsilon_productions(self) -> list[Production]:
        return [p for p in self.productions if not p.rhs]


def parse_grammar(text: str) -> Grammar:
    """Parse a grammar description.

    Format, one declaration per line::

        # comment
        start S;
        terminal ID : identifier;
        terminal NUM : literal;
        S -> ID '=' ID ';'
        B -> .

    Quoted strings implicitly declare fixed-lexeme terminals.  A lone dot
    as the right-hand side denotes the empty production.
    """
    symbols: list[Symbol] = []
    by_name: dict[str, Symbol] = {}
    start_name: str | None = None
    start_line = None
    # (lhs name, rhs item list, line); rhs items are ("sym", name) or ("lex", text)
    raw_prods: list[tuple[str, list[tuple[str, str]], int]] = []
    declared_terminals: dict[str, str] = {}

    def add_symbol(name: str, terminal: bool, subkind: str | None = None,
                   lexeme: str | None = None) -> Symbol:
        sym = Symbol(len(symbols), name, terminal, subkind, lexeme)
        symbols.append(sym)
        by_name[name] = sym
        return sym

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        if line.startswith("start "):
            body = line[len("start "):].strip()
            if not body.endswith(";"):
                raise GrammarError("missing ';' after start declaration", lineno)
            if start_name is not None:
                raise GrammarError("duplicate start declaration", lineno)
            start_name = body[:-1].strip()
            start_line = lineno
            continue
        if line.startswith("terminal "):
            body = line[len("terminal "):].strip()
            if not body.endswith(";"):
                raise GrammarError("missing ';' after terminal declaration", lineno)
            body = body[:-1]
            if ":" not in body:
                raise GrammarError("terminal declaration needs ': identifier' or ': literal'", lineno)
            name, kind = (part.strip() for part in body.split(":", 1))
            if kind not in (IDENT, LITERAL):
                raise GrammarError(f"unknown terminal class {kind!r}", lineno)
            if name in declared_terminals:
                raise GrammarError(f"terminal {name!r} declared twice", lineno)
            declared_terminals[name] = kind
            continue
        if "->" in line:
            lhs, _, rhs_text = line.partition("->")
            lhs = lhs.strip()
            if not lhs.isidentifier():
                raise GrammarError(f"bad left-hand side {lhs!r}", lineno)
            items = _parse_rhs(rhs_text.strip(), lineno)
            raw_prods.append((lhs, items, lineno))
            continue
        raise GrammarError(f"unrecognized declaration {line!r}", lineno)

    if start_name is None:
        raise GrammarError("no start symbol declared")

    # Nonterminals are exactly the symbols that appear as a left-hand side.
    nonterminal_names = {lhs for lhs, _, _ in raw_prods}
    if start_name in declared_terminals:
        raise GrammarError("start symbol must be a nonterminal", start_line)
    if start_name not in nonterminal_names:
        raise GrammarError(f"start symbol {start_name!r} has no productions", start_line)

    for lhs, _, _ in raw_prods:
        if lhs not in by_name:
            if lhs in declared_terminals:
                raise GrammarError(f"terminal {lhs!r} cannot have productions")
            add_symbol(lhs, terminal=False)
    for name, kind in declared_terminals.items():
        if name not in by_name:
            add_symbol(name, terminal=True, subkind=kind)

    productions: list[Production] = []
    seen: set[tuple[str, tuple[str, ...]]] = set()
    for lhs, items, lineno in raw_prods:
        rhs: list[Symbol] = []
        for kind, val in items:
            if kind == "lex":
                key = f"'{val}'"
                if key not in by_name:
                    add_symbol(key, terminal=True, subkind=FIXED, lexeme=val)
                rhs.append(by_name[key])
            else:
                if val not in by_name:
                    raise GrammarError(f"undefined symbol {val!r}", lineno)
                rhs.append(by_name[val])
        sig = (lhs, tuple(s.name for s in rhs))
        if sig in seen:
            raise GrammarError(f"duplicate production for {lhs!r}", lineno)
        seen.add(sig)
        pid = len(productions)
        productions.append(Production(pid, by_name[lhs], tuple(rhs), origin=(pid, 0)))

    return Grammar(symbols, productions, by_name[start_name])


def _strip_comment(line: str) -> str:
    out = []
    quoted = False
    for ch in line:
        if ch == "'":
            quoted = not quoted
        if ch == "#" and not quoted:
            break
        out.append(ch)
    return "".join(out)


def _parse_rhs(text: str, lineno: int) -> list[tuple[str, str]]:
    if text == ".":
        return []
    items: list[tuple[str, str]] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch == "'":
            j = text.find("'", i + 1)
            if j < 0:
                raise GrammarError("unterminated quoted lexeme", lineno, i + 1)
            lex = text[i + 1:j]
            if not lex:
                raise GrammarError("empty quoted lexeme", lineno, i + 1)
            items.append(("lex", lex))
            i = j + 1
            continue
        j = i
        while j < len(text) and (text[j].isalnum() or text[j] == "_"):
            j += 1
        if j == i:
            raise GrammarError(f"unexpected character {ch!r}", lineno, i + 1)
        items.append(("sym", text[i:j]))
        i = j
    if not items:
        raise GrammarError("empty right-hand side (use '.' for the empty production)", lineno)
    return items


def normalize(g: Grammar) -> Grammar:
    """Binarize ``g`` left-to-right: ``A -> X1 X2 .. Xk`` becomes
    ``A -> X1 A1, A1 -> X2 A2, .., A(k-2) -> X(k-1) Xk``.

    Productions that already have at most two symbols are kept unchanged.
    Idempotent: a normalized grammar is returned as-is.
    """
    if g.is_normalized():
        return g

    symbols = list(g.symbols)
    productions: list[Production] = []

    def fresh(base: Symbol, opid: int, i: int) -> Symbol:
        sym = Symbol(len(symbols), f"{base.name}@{opid}.{i}", terminal=False)
        symbols.append(sym)
        return sym

    for p in g.productions:
        if len(p.rhs) <= 2:
            productions.append(Production(len(productions), p.lhs, p.rhs, origin=(p.pid, 0)))
            continue
        k = len(p.rhs)
        heads = [p.lhs] + [fresh(p.lhs, p.pid, i) for i in range(1, k - 1)]
        for pos in range(k - 1):
            right = p.rhs[k - 1] if pos == k - 2 else heads[pos + 1]
            productions.append(
                Production(len(productions), heads[pos], (p.rhs[pos], right), origin=(p.pid, pos)))

    return Grammar(symbols, productions, g.start, source=g)

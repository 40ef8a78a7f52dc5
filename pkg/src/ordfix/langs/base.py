"""Shared frontend machinery: lexing and the frontend interface.

A frontend owns a grammar, a lexer, an environment format, the semantic
rules fed to the engine, and an independent reference checker used both
as the test oracle and as a self-check on fixer output.  The reference
checker deliberately shares no code with the reachability engine.
"""

from __future__ import annotations

from ..grammar import FIXED, Grammar, Symbol, normalize
from ..modgraph import Token


class LexError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at offset {pos})")
        self.pos = pos


class EnvError(ValueError):
    pass


def _is_word(s: str) -> bool:
    return s[0].isalpha() or s[0] == "_"


class Lexer:
    """Longest-match tokenizer over a grammar's terminal vocabulary."""

    def __init__(self, grammar: Grammar, ident: Symbol, literal: Symbol | None = None):
        self.ident = ident
        self.literal = literal
        self.keywords: dict[str, Symbol] = {}
        puncts: list[tuple[str, Symbol]] = []
        for t in grammar.terminals:
            if t.subkind == FIXED:
                if _is_word(t.lexeme):
                    self.keywords[t.lexeme] = t
                else:
                    puncts.append((t.lexeme, t))
        puncts.sort(key=lambda kv: -len(kv[0]))
        self.puncts = puncts

    def lex(self, text: str) -> list[Token]:
        tokens: list[Token] = []
        i, n = 0, len(text)
        while i < n:
            ch = text[i]
            if ch.isspace():
                i += 1
                continue
            if text.startswith("//", i):
                j = text.find("\n", i)
                i = n if j < 0 else j + 1
                continue
            if ch.isalpha() or ch == "_":
                j = i + 1
                while j < n and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                word = text[i:j]
                sym = self.keywords.get(word, self.ident)
                tokens.append(Token(sym, word, len(tokens)))
                i = j
                continue
            if ch.isdigit():
                if self.literal is None:
                    raise LexError(f"unexpected digit {ch!r}", i)
                j = i + 1
                while j < n and text[j].isdigit():
                    j += 1
                tokens.append(Token(self.literal, text[i:j], len(tokens)))
                i = j
                continue
            for lex, sym in self.puncts:
                if text.startswith(lex, i):
                    tokens.append(Token(sym, lex, len(tokens)))
                    i += len(lex)
                    break
            else:
                raise LexError(f"cannot lex character {ch!r}", i)
        return tokens


class Frontend:
    """Base class for a language frontend.  Instances are immutable rule
    tables and can be shared by concurrent jobs."""

    name: str = ""
    grammar_text: str = ""

    def __init__(self):
        from ..grammar import parse_grammar
        self.grammar = parse_grammar(self.grammar_text)
        self.normalized = normalize(self.grammar)
        self.ident = next(s for s in self.grammar.terminals if s.subkind == "identifier")
        literals = [s for s in self.grammar.terminals if s.subkind == "literal"]
        self.literal = literals[0] if literals else None
        self.lexer = Lexer(self.grammar, self.ident, self.literal)
        self.sym = self.grammar.by_name

    def lex(self, text: str) -> list[Token]:
        return self.lexer.lex(text)

    def fixed_terminals(self) -> list[Symbol]:
        return [t for t in self.grammar.terminals if t.subkind == FIXED]

    def tokens_from_lexemes(self, lexemes: list[str]) -> list[Token]:
        """Rebuild a token sequence from stored lexeme strings."""
        return self.lex(" ".join(lexemes))

    # Subclass responsibilities -----------------------------------------

    def parse_env(self, text: str):
        raise NotImplementedError

    def env_to_text(self, env) -> str:
        raise NotImplementedError

    def oracle_names(self, env) -> list[str]:
        """Environment-declared identifier names usable by the edit oracle."""
        raise NotImplementedError

    def make_rules(self, env, tokens: list[Token]):
        """Engine-facing attribute rules for one fix job."""
        raise NotImplementedError

    def check_compiles(self, tokens: list[Token], env) -> tuple[bool, str]:
        ok, msg, _ = self.check_detail(tokens, env)
        return ok, msg

    def check_detail(self, tokens: list[Token], env) -> tuple[bool, str, int]:
        """Reference check returning (ok, diagnostic, failure token index).

        The failure index is the prefix length the checker accepted before
        giving up; the edit-search oracle uses it to narrow second edits.
        """
        raise NotImplementedError


def identifier_universe(tokens: list[Token], ident: Symbol,
                        extra: list[str], reserved: set[str]) -> list[str]:
    """Candidate names for freshly-declared identifiers: names already in
    the program, then environment names, then one canonical fresh name."""
    seen: list[str] = []
    for t in tokens:
        if t.term is ident and t.lexeme not in seen:
            seen.append(t.lexeme)
    for name in extra:
        if name not in seen:
            seen.append(name)
    i = 0
    while f"u{i}" in seen or f"u{i}" in reserved:
        i += 1
    seen.append(f"u{i}")
    return seen

"""Weighted modification graph over a token sequence.

For an n-token program the graph has vertices ``v0 .. vn``.  Original
tokens become weight-0 edges ``v(i) -> v(i+1)``; every single-token edit
becomes a weight-1 edge: insertions are self-loops, updates and deletions
span ``v(i) -> v(i+1)``.  A path from ``v0`` to ``vn`` spells a candidate
program and its weight counts the edits that produce it.

Identifier-class terminals are never expanded into concrete names here:
one class-labeled edge stands for "some identifier", and an update edge
at a position that already holds an identifier carries the constraint
that the chosen name must differ from the original (so renaming a token
to itself cannot cost one edit).  Concrete names are picked later during
attribute checking.
"""

from __future__ import annotations

from dataclasses import dataclass

from .grammar import Grammar, Symbol

ORIGINAL = "original"
INSERTION = "insertion"
UPDATE = "update"
DELETION = "deletion"


@dataclass(frozen=True, slots=True)
class Token:
    term: Symbol
    lexeme: str
    pos: int

    def __repr__(self) -> str:
        return f"{self.lexeme}@{self.pos}"


@dataclass(eq=False, slots=True)
class ModEdge:
    eid: int
    src: int
    dst: int
    sym: Symbol | None  # None marks the epsilon label of deletion edges
    weight: int
    kind: str
    lexeme: str | None = None          # concrete lexeme (original edges)
    exclude_lexeme: str | None = None  # class update at a same-class position

    def __repr__(self) -> str:
        label = self.sym.name if self.sym is not None else "eps"
        return f"<{self.kind} {self.src}->{self.dst} {label} w={self.weight}>"


class ModGraph:
    """Immutable edge set for one fix job."""

    def __init__(self, tokens: list[Token], grammar: Grammar):
        self.tokens = tokens
        self.grammar = grammar
        self.n = len(tokens)
        self.edges: list[ModEdge] = []
        self.deletion_at: list[ModEdge] = []  # index i -> deletion edge (i, i+1)
        self._build()

    def _build(self) -> None:
        vocab = self.grammar.terminals
        for tok in self.tokens:
            if tok.term not in self.grammar.symbols:
                raise ValueError(f"token {tok!r} uses a terminal outside the grammar")

        def add(src: int, dst: int, sym: Symbol | None, weight: int, kind: str,
                lexeme: str | None = None, exclude: str | None = None) -> ModEdge:
            e = ModEdge(len(self.edges), src, dst, sym, weight, kind, lexeme, exclude)
            self.edges.append(e)
            return e

        for i, tok in enumerate(self.tokens):
            add(i, i + 1, tok.term, 0, ORIGINAL, lexeme=tok.lexeme)
        for v in range(self.n + 1):
            for t in vocab:
                add(v, v, t, 1, INSERTION)
        for i, tok in enumerate(self.tokens):
            for t in vocab:
                if t is tok.term:
                    if t.is_class_terminal:
                        # Same class, different concrete lexeme.
                        add(i, i + 1, t, 1, UPDATE, exclude=tok.lexeme)
                    continue
                add(i, i + 1, t, 1, UPDATE)
        for i in range(self.n):
            self.deletion_at.append(add(i, i + 1, None, 1, DELETION))

    def counts(self) -> dict[str, int]:
        out = {ORIGINAL: 0, INSERTION: 0, UPDATE: 0, DELETION: 0}
        for e in self.edges:
            out[e.kind] += 1
        return out

    def to_dot(self) -> str:
        lines = ["digraph modgraph {", "  rankdir=LR;"]
        for v in range(self.n + 1):
            lines.append(f'  v{v} [shape=circle,label="v{v}"];')
        for e in self.edges:
            label = e.sym.name if e.sym is not None else "&epsilon;"
            if e.lexeme is not None and e.sym is not None and e.sym.is_class_terminal:
                label = f"{e.lexeme}:{label}"
            if e.exclude_lexeme is not None:
                label = f"{label}&ne;{e.exclude_lexeme}"
            style = "solid" if e.kind == ORIGINAL else "dashed"
            lines.append(f'  v{e.src} -> v{e.dst} [label="{label} ({e.weight})",style={style}];')
        lines.append("}")
        return "\n".join(lines)


def build_modgraph(tokens: list[Token], grammar: Grammar) -> ModGraph:
    return ModGraph(tokens, grammar)


def path_weight(path: list[ModEdge]) -> int:
    """Sum of edge weights along a connected ``v0 -> vn`` path."""
    if not path:
        return 0
    at = path[0].src
    for e in path:
        if e.src != at:
            raise ValueError(f"disconnected path at vertex {at}: {e!r}")
        at = e.dst
    return sum(e.weight for e in path)

"""Language frontends."""

from __future__ import annotations

from .base import EnvError, Frontend, LexError
from .minijava import MiniJava
from .tiny_assign import TinyAssign

_FRONTENDS: dict[str, Frontend] = {}


def get_frontend(name: str) -> Frontend:
    fe = _FRONTENDS.get(name)
    if fe is None:
        if name == TinyAssign.name:
            fe = TinyAssign()
        elif name == MiniJava.name:
            fe = MiniJava()
        else:
            raise KeyError(f"unknown language {name!r}; "
                           f"known: {', '.join(available_languages())}")
        _FRONTENDS[name] = fe
    return fe


def available_languages() -> list[str]:
    return [TinyAssign.name, MiniJava.name]

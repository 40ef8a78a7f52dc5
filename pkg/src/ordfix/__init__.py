"""ordfix: minimal-edit repair of non-compiling programs.

Candidate repairs are enumerated in order of increasing edit count by
weighted grammar reachability over a modification graph, then filtered by
merged attribute checking of the language's semantic constraints, so the
first surviving candidate is a compilable program at minimum edit
distance from the input.
"""

from .fixer import FixRequest, FixResult, apply_edits, fix
from .langs import available_languages, get_frontend

__version__ = "0.1.0"

__all__ = [
    "FixRequest",
    "FixResult",
    "apply_edits",
    "available_languages",
    "fix",
    "get_frontend",
    "__version__",
]

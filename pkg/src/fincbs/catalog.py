"""A fixed menagerie of small posets and their downset algebras.

The algebra catalog drives countermodel search, law checks and the
exhaustive witness tests: every named poset with at most eight downsets
contributes its downset algebra.  ``separating_algebras`` is the small
sub-family (at most three elements) used to fingerprint free-algebra
terms: every subdirectly irreducible CBS on two generators has at most
three elements, so evaluation there separates the two-generator free
algebra completely.
"""

from __future__ import annotations

import functools

from .cbs import FinCbs
from .poset import Poset, build_poset

_NAMED_POSETS: tuple[tuple[str, int, tuple[tuple[int, int], ...]], ...] = (
    ("empty", 0, ()),
    ("point", 1, ()),
    ("chain2", 2, ((0, 1),)),
    ("chain3", 3, ((0, 1), (1, 2))),
    ("chain4", 4, ((0, 1), (1, 2), (2, 3))),
    ("antichain2", 2, ()),
    ("antichain3", 3, ()),
    ("vee", 3, ((0, 2), (1, 2))),
    ("wedge", 3, ((0, 1), (0, 2))),
    ("zigzag", 4, ((0, 2), (1, 2), (1, 3))),
    ("diamond", 4, ((0, 1), (0, 2), (1, 3), (2, 3))),
    ("chain2_plus_point", 3, ((0, 1),)),
    ("chain3_plus_point", 4, ((0, 1), (1, 2))),
)


@functools.lru_cache(maxsize=None)
def named_posets() -> tuple[tuple[str, Poset], ...]:
    return tuple((name, build_poset(n, covers)) for name, n, covers in _NAMED_POSETS)


@functools.lru_cache(maxsize=None)
def catalog_algebras(max_size: int = 8) -> tuple[tuple[str, FinCbs], ...]:
    """Downset algebras of the named posets, capped by carrier size."""
    from .duality import poset_to_cbs

    out = []
    for name, P in named_posets():
        algebra, _ = poset_to_cbs(P)
        if algebra.n <= max_size:
            out.append((f"downsets({name})", algebra))
    return tuple(out)


@functools.lru_cache(maxsize=None)
def separating_algebras() -> tuple[tuple[str, FinCbs], ...]:
    """The catalog algebras with at most three elements."""
    return tuple((name, L) for name, L in catalog_algebras() if L.n <= 3)

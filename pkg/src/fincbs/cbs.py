"""Finite co-Brouwerian semilattices given by explicit operation tables.

The carrier is 0..n-1 with 0 the least element.  ``join`` is a
join-semilattice operation with unit 0, and ``diff`` is adjoint to it:
``a - b <= c`` iff ``a <= b v c``.  The order is derived from the join
table (``a <= b`` iff ``a v b = b``).

Everything here is immutable after construction, so values can be shared
freely across threads.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable

from .errors import (
    FincbsError,
    FormatError,
    IndexOutOfRange,
    InvalidAlgebra,
    InvalidMorphism,
    NotJoinIrreducible,
)


@dataclass(frozen=True)
class Violation:
    """One broken law, with a witnessing tuple of elements."""

    law: str
    witness: tuple
    detail: str = ""

    def __str__(self):
        msg = f"{self.law} fails at {self.witness}"
        return f"{msg}: {self.detail}" if self.detail else msg


@dataclass(frozen=True)
class FinCbs:
    join: tuple[tuple[int, ...], ...]
    diff: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] | None = field(default=None, compare=False)

    @property
    def n(self) -> int:
        return len(self.join)

    def leq(self, a: int, b: int) -> bool:
        return self.join[a][b] == b

    def lt(self, a: int, b: int) -> bool:
        return a != b and self.join[a][b] == b

    def label(self, a: int) -> str:
        return self.labels[a] if self.labels else str(a)

    def check_index(self, *elements: int) -> None:
        for a in elements:
            if not 0 <= a < self.n:
                raise IndexOutOfRange(f"element {a} not in algebra of size {self.n}")

    def join_many(self, elements: Iterable[int]) -> int:
        acc = 0
        for a in elements:
            acc = self.join[acc][a]
        return acc

    @property
    def top(self) -> int:
        """The maximum element (the join of everything; exists by finiteness)."""
        return self.join_many(range(self.n))

    def meet(self, a: int, b: int) -> int:
        """Greatest lower bound; finite CBSes are (distributive) lattices."""
        m = self.join_many(c for c in range(self.n) if self.leq(c, a) and self.leq(c, b))
        if not (self.leq(m, a) and self.leq(m, b)):
            raise FincbsError(f"join of lower bounds of ({a}, {b}) is not a lower bound")
        return m

    def validate(self) -> list[Violation]:
        return validate_cbs(self.join, self.diff)

    @classmethod
    def from_tables(cls, join, diff, labels=None) -> "FinCbs":
        """Build and validate; raises :class:`InvalidAlgebra` on any broken law."""
        alg = cls(_as_table(join), _as_table(diff), tuple(labels) if labels else None)
        problems = alg.validate()
        if problems:
            raise InvalidAlgebra(problems)
        return alg


def _as_table(rows) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(x) for x in row) for row in rows)


def validate_cbs(join, diff) -> list[Violation]:
    """Check the semilattice laws and the difference adjunction.

    The adjunction scan subsumes the equational axioms, so a clean report
    certifies a genuine co-Brouwerian semilattice.  Malformed tables raise;
    law violations are reported.
    """
    n = len(join)
    if len(diff) != n or any(len(r) != n for r in join) or any(len(r) != n for r in diff):
        raise FormatError(f"tables must both be {n}x{n}")
    for table, name in ((join, "join"), (diff, "diff")):
        for a, row in enumerate(table):
            for b, v in enumerate(row):
                if not 0 <= v < n:
                    raise IndexOutOfRange(f"{name}[{a}][{b}] = {v} out of range")

    out = []
    for a in range(n):
        if join[a][a] != a:
            out.append(Violation("join idempotence", (a,)))
        if join[a][0] != a:
            out.append(Violation("join unit", (a, 0), "join(a, 0) must be a"))
    for a in range(n):
        for b in range(a + 1, n):
            if join[a][b] != join[b][a]:
                out.append(Violation("join commutativity", (a, b)))
    for a in range(n):
        for b in range(n):
            jab = join[a][b]
            for c in range(n):
                if join[jab][c] != join[a][join[b][c]]:
                    out.append(Violation("join associativity", (a, b, c)))
    # a - b <= c  iff  a <= b v c
    for a in range(n):
        for b in range(n):
            d = diff[a][b]
            for c in range(n):
                left = join[d][c] == c
                right = join[a][join[b][c]] == join[b][c]
                if left != right:
                    out.append(
                        Violation(
                            "difference adjunction",
                            (a, b, c),
                            f"(a-b <= c) is {left} but (a <= b v c) is {right}",
                        )
                    )
    return out


@functools.lru_cache(maxsize=None)
def join_irreducibles(L: FinCbs) -> tuple[int, ...]:
    """Elements g != 0 with g - a always 0 or g; the points of the dual poset."""
    return tuple(
        g
        for g in range(1, L.n)
        if all(L.diff[g][a] in (0, g) for a in range(L.n))
    )


def ji_components(L: FinCbs, a: int) -> tuple[int, ...]:
    """Maximal join-irreducibles below a; their join is a."""
    L.check_index(a)
    below = [g for g in join_irreducibles(L) if L.leq(g, a)]
    return tuple(g for g in below if not any(L.lt(g, h) for h in below))


def predecessor(L: FinCbs, g: int) -> int:
    """The unique maximal element below a join-irreducible."""
    L.check_index(g)
    if g not in join_irreducibles(L):
        raise NotJoinIrreducible(f"element {g} is not join-irreducible")
    return L.join_many(a for a in range(L.n) if L.lt(a, g))


def way_below(L: FinCbs, a: int, b: int) -> bool:
    """a << b: a <= b and b - a = b (a misses every component of b)."""
    L.check_index(a, b)
    return L.leq(a, b) and L.diff[b][a] == b


def generated_subalgebra(L: FinCbs, seed: Iterable[int]) -> tuple["FinCbs", "CbsMorphism"]:
    """Closure of seed (plus 0) under join and difference, with its inclusion.

    Elements of the subalgebra keep their relative order from L, so the
    inclusion map is ascending and 0 stays at index 0.
    """
    elems = {0}
    for a in seed:
        L.check_index(a)
        elems.add(a)
    while True:
        new = set()
        current = sorted(elems)
        for a, b in product(current, current):
            for v in (L.join[a][b], L.diff[a][b]):
                if v not in elems:
                    new.add(v)
        if not new:
            break
        elems |= new
    order = sorted(elems)
    pos = {e: i for i, e in enumerate(order)}
    join = tuple(tuple(pos[L.join[a][b]] for b in order) for a in order)
    diff = tuple(tuple(pos[L.diff[a][b]] for b in order) for a in order)
    labels = tuple(L.label(e) for e in order) if L.labels else None
    sub = FinCbs(join, diff, labels)
    return sub, CbsMorphism(sub, L, tuple(order))


def relabel_algebra(L: FinCbs, perm: list[int]) -> FinCbs:
    """Apply a carrier permutation (perm[old] = new); 0 must stay fixed."""
    if perm[0] != 0:
        raise FincbsError("relabeling must keep the least element at index 0")
    n = L.n
    inv = [0] * n
    for old, new in enumerate(perm):
        inv[new] = old
    join = tuple(
        tuple(perm[L.join[inv[a]][inv[b]]] for b in range(n)) for a in range(n)
    )
    diff = tuple(
        tuple(perm[L.diff[inv[a]][inv[b]]] for b in range(n)) for a in range(n)
    )
    labels = tuple(L.labels[inv[a]] for a in range(n)) if L.labels else None
    return FinCbs(join, diff, labels)


@dataclass(frozen=True)
class CbsMorphism:
    """A map preserving 0, join and difference, given element by element."""

    dom: FinCbs
    cod: FinCbs
    map: tuple[int, ...]

    def __call__(self, a: int) -> int:
        return self.map[a]

    def is_injective(self) -> bool:
        return len(set(self.map)) == len(self.map)

    def is_surjective(self) -> bool:
        return len(set(self.map)) == self.cod.n


def validate_cbs_morphism(m: CbsMorphism) -> list[Violation]:
    out = []
    if len(m.map) != m.dom.n:
        raise FormatError("morphism map length does not match its domain")
    for v in m.map:
        if not 0 <= v < m.cod.n:
            raise IndexOutOfRange(f"morphism value {v} outside codomain")
    if m.map[0] != 0:
        out.append(Violation("preserves zero", (0,)))
    for a in range(m.dom.n):
        for b in range(m.dom.n):
            if m.map[m.dom.join[a][b]] != m.cod.join[m.map[a]][m.map[b]]:
                out.append(Violation("preserves join", (a, b)))
            if m.map[m.dom.diff[a][b]] != m.cod.diff[m.map[a]][m.map[b]]:
                out.append(Violation("preserves difference", (a, b)))
    return out


def require_cbs_morphism(m: CbsMorphism) -> None:
    problems = validate_cbs_morphism(m)
    if problems:
        raise InvalidMorphism("not a CBS morphism", problems)


def compose_cbs_morphisms(outer: CbsMorphism, inner: CbsMorphism) -> CbsMorphism:
    if inner.cod != outer.dom:
        raise InvalidMorphism("composition mismatch: codomain differs from domain")
    return CbsMorphism(inner.dom, outer.cod, tuple(outer.map[v] for v in inner.map))


# --- text format -----------------------------------------------------------
#
# CBS orientation:
#   cbs <n>
#   zero <k>
#   join <i> <j> <k>       (all n*n entries)
#   diff <i> <j> <k>       (all n*n entries)
#
# Brouwerian orientation (order-reversed presentation of the same algebra):
#   bs <n>
#   one <k>
#   meet <i> <j> <k>
#   impl <i> <j> <k>
#
# Reading auto-detects the orientation from the header.  The translation is
# forced by order reversal: join <-> meet, a - b <-> b -> a, 0 <-> 1.  On
# load the distinguished constant is moved to index 0 by relabeling.


def algebra_to_text(L: FinCbs, orientation: str = "cbs") -> str:
    n = L.n
    if orientation == "cbs":
        lines = [f"cbs {n}", "zero 0"]
        for a in range(n):
            for b in range(n):
                lines.append(f"join {a} {b} {L.join[a][b]}")
        for a in range(n):
            for b in range(n):
                lines.append(f"diff {a} {b} {L.diff[a][b]}")
    elif orientation == "brouwerian":
        lines = [f"bs {n}", "one 0"]
        for a in range(n):
            for b in range(n):
                lines.append(f"meet {a} {b} {L.join[a][b]}")
        for a in range(n):
            for b in range(n):
                lines.append(f"impl {a} {b} {L.diff[b][a]}")
    else:
        raise FormatError(f"unknown orientation {orientation!r}")
    return "\n".join(lines) + "\n"


def algebra_tables_from_text(text: str):
    """Parse either orientation into CBS-oriented tables.

    Returns (join, diff, labels) with the distinguished constant relabeled
    to index 0.  Laws are not checked here; see :func:`FinCbs.from_tables`.
    """
    n = None
    kind = None
    const = None
    entries: dict[str, dict[tuple[int, int], int]] = {"j": {}, "d": {}}
    key_of = {"join": "j", "diff": "d", "meet": "j", "impl": "d"}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        word = parts[0]
        if word in ("cbs", "bs"):
            if n is not None:
                raise FormatError("duplicate header", lineno)
            if len(parts) != 2 or not parts[1].isdigit():
                raise FormatError(f"expected '{word} <n>'", lineno)
            kind, n = word, int(parts[1])
        elif word in ("zero", "one"):
            if kind is None or (word == "zero") != (kind == "cbs"):
                raise FormatError(f"{word!r} does not match the header", lineno)
            const = int(parts[1])
        elif word in key_of:
            if n is None:
                raise FormatError("table entry before header", lineno)
            if (word in ("join", "diff")) != (kind == "cbs"):
                raise FormatError(f"{word!r} does not match the header", lineno)
            if len(parts) != 4:
                raise FormatError(f"expected '{word} <i> <j> <k>'", lineno)
            try:
                i, j, k = (int(p) for p in parts[1:])
            except ValueError:
                raise FormatError("table indices must be integers", lineno) from None
            if not (0 <= i < n and 0 <= j < n and 0 <= k < n):
                raise FormatError("table entry out of range", lineno)
            cell = entries[key_of[word]]
            if (i, j) in cell:
                raise FormatError(f"duplicate {word} entry for ({i}, {j})", lineno)
            cell[(i, j)] = k
        else:
            raise FormatError(f"unknown directive {word!r}", lineno)
    if n is None:
        raise FormatError("missing 'cbs <n>' or 'bs <n>' header")
    if const is None:
        raise FormatError("missing 'zero'/'one' line")
    if not 0 <= const < n:
        raise FormatError("distinguished constant out of range")
    for key, name in (("j", "first"), ("d", "second")):
        if len(entries[key]) != n * n:
            raise FormatError(f"{name} table has {len(entries[key])} of {n * n} entries")
    first = [[entries["j"][(i, j)] for j in range(n)] for i in range(n)]
    second = [[entries["d"][(i, j)] for j in range(n)] for i in range(n)]
    if kind == "cbs":
        join, diff = first, second
    else:
        join = first
        diff = [[second[j][i] for j in range(n)] for i in range(n)]
    if const != 0:
        swap = list(range(n))
        swap[0], swap[const] = const, 0
        join = [[swap[join[swap[a]][swap[b]]] for b in range(n)] for a in range(n)]
        diff = [[swap[diff[swap[a]][swap[b]]] for b in range(n)] for a in range(n)]
    return _as_table(join), _as_table(diff)


def algebra_from_text(text: str) -> FinCbs:
    join, diff = algebra_tables_from_text(text)
    return FinCbs.from_tables(join, diff)

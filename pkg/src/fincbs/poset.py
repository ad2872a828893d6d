"""Finite posets and the downset calculus.

Elements are the integers 0..n-1.  The order is stored as one bitmask per
element (``up[i]`` holds every j with i <= j), which keeps closure,
enumeration and difference operations cheap at the sizes this library
targets (posets of at most a few dozen points).

Downsets of a finite poset form a co-Brouwerian semilattice under union,
with the difference A - B given by the downward closure of ``A minus B``;
:mod:`fincbs.duality` builds that algebra explicitly.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import (
    CycleDetected,
    FincbsError,
    FormatError,
    IndexOutOfRange,
    PosetMismatch,
    SizeLimitExceeded,
)

DEFAULT_DOWNSET_CAP = 1 << 20


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True)
class Poset:
    """A finite partial order; ``up[i]`` is the bitmask of all j with i <= j."""

    n: int
    up: tuple[int, ...]
    labels: tuple[str, ...] | None = field(default=None, compare=False)

    def leq(self, i: int, j: int) -> bool:
        return bool(self.up[i] >> j & 1)

    def lt(self, i: int, j: int) -> bool:
        return i != j and self.leq(i, j)

    @property
    def down(self) -> tuple[int, ...]:
        return _down_masks(self.up)

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else str(i)

    def check_index(self, *indices: int) -> None:
        for i in indices:
            if not 0 <= i < self.n:
                raise IndexOutOfRange(f"element {i} not in poset of size {self.n}")

    def covers(self) -> list[tuple[int, int]]:
        """Pairs (i, j) with j an immediate successor of i."""
        out = []
        for i in range(self.n):
            for j in _bits(self.up[i] & ~(1 << i)):
                between = self.up[i] & self.down[j] & ~(1 << i) & ~(1 << j)
                if not between:
                    out.append((i, j))
        return out

    def maximal_of(self, mask: int) -> list[int]:
        els = list(_bits(mask))
        return [i for i in els if not (self.up[i] & ~(1 << i) & mask)]

    def minimal_of(self, mask: int) -> list[int]:
        els = list(_bits(mask))
        return [i for i in els if not (self.down[i] & ~(1 << i) & mask)]


@functools.lru_cache(maxsize=None)
def _down_masks(up: tuple[int, ...]) -> tuple[int, ...]:
    down = [0] * len(up)
    for i, mask in enumerate(up):
        for j in _bits(mask):
            down[j] |= 1 << i
    return tuple(down)


def poset_from_up_masks(up, labels=None) -> Poset:
    """Wrap a full relation given as up-masks, verifying the order axioms.

    Used by internal constructions that compute the relation directly; a
    violation here is a library defect, not bad input.
    """
    n = len(up)
    up = tuple(up)
    for i in range(n):
        if not up[i] >> i & 1:
            raise FincbsError(f"relation not reflexive at {i}")
    for i in range(n):
        for j in _bits(up[i]):
            if j != i and up[j] >> i & 1:
                raise FincbsError(f"relation not antisymmetric at ({i}, {j})")
            if up[j] & ~up[i]:
                raise FincbsError(f"relation not transitive through ({i}, {j})")
    return Poset(n, up, tuple(labels) if labels else None)


def build_poset(n: int, covers: Iterable[tuple[int, int]], labels=None) -> Poset:
    """Build a poset from Hasse cover pairs (i, j) meaning j covers i.

    The full order is the reflexive-transitive closure of the covers.
    Raises :class:`CycleDetected` if the closure identifies distinct
    elements.
    """
    if n < 0:
        raise IndexOutOfRange(f"negative element count {n}")
    up = [1 << i for i in range(n)]
    for i, j in covers:
        if not (0 <= i < n and 0 <= j < n):
            raise IndexOutOfRange(f"cover ({i}, {j}) out of range for size {n}")
        up[i] |= 1 << j
    changed = True
    while changed:
        changed = False
        for i in range(n):
            acc = up[i]
            for j in _bits(acc):
                acc |= up[j]
            if acc != up[i]:
                up[i] = acc
                changed = True
    for i in range(n):
        for j in _bits(up[i]):
            if j != i and up[j] >> i & 1:
                raise CycleDetected(f"elements {i} and {j} are mutually below each other")
    return Poset(n, tuple(up), tuple(labels) if labels else None)


def subposet(P: Poset, keep: Iterable[int]) -> tuple[Poset, dict[int, int]]:
    """Induced subposet on ``keep``; also returns the old-to-new index map."""
    keep = sorted(set(keep))
    P.check_index(*keep)
    pos = {e: i for i, e in enumerate(keep)}
    up = []
    for e in keep:
        mask = 0
        for f in _bits(P.up[e]):
            if f in pos:
                mask |= 1 << pos[f]
        up.append(mask)
    labels = tuple(P.label(e) for e in keep) if P.labels else None
    return Poset(len(keep), tuple(up), labels), pos


@dataclass(frozen=True)
class DownSet:
    """A downward-closed subset of a poset, stored as a member bitmask."""

    poset: Poset
    members: int

    def elements(self) -> tuple[int, ...]:
        return tuple(_bits(self.members))

    def __contains__(self, i: int) -> bool:
        return bool(self.members >> i & 1)

    def __len__(self) -> int:
        return _popcount(self.members)

    def __or__(self, other: "DownSet") -> "DownSet":
        if self.poset != other.poset:
            raise PosetMismatch("downsets of different posets")
        return DownSet(self.poset, self.members | other.members)

    def __sub__(self, other: "DownSet") -> "DownSet":
        return downset_difference(self.poset, self, other)

    def issubset(self, other: "DownSet") -> bool:
        return self.members & ~other.members == 0


def downset_closure(P: Poset, elements: Iterable[int]) -> DownSet:
    """Least downset containing the given elements."""
    mask = 0
    down = P.down
    for i in elements:
        P.check_index(i)
        mask |= down[i]
    return DownSet(P, mask)


def downset_difference(P: Poset, a: DownSet, b: DownSet) -> DownSet:
    """The difference ``a - b``: the downset generated by a's elements outside b."""
    if a.poset != P or b.poset != P:
        raise PosetMismatch("downsets do not belong to the given poset")
    return downset_closure(P, _bits(a.members & ~b.members))


def all_downsets(P: Poset, max_count: int = DEFAULT_DOWNSET_CAP) -> list[DownSet]:
    """Every downset of P, sorted by bitmask value (the empty set first)."""
    order = sorted(range(P.n), key=lambda i: (_popcount(P.down[i]), i))
    masks = [0]
    for e in order:
        need = P.down[e] & ~(1 << e)
        bit = 1 << e
        masks += [m | bit for m in masks if m & need == need]
        if len(masks) > max_count:
            raise SizeLimitExceeded(
                f"poset has more than {max_count} downsets; raise the cap to proceed"
            )
    masks.sort()
    return [DownSet(P, m) for m in masks]


def is_downset(P: Poset, mask: int) -> bool:
    down = P.down
    return all(down[i] & ~mask == 0 for i in _bits(mask))


def find_isomorphism(P: Poset, Q: Poset, pair_ok=None) -> list[int] | None:
    """Order isomorphism P -> Q as an index list, or None.

    ``pair_ok(i, j)`` can veto candidate assignments; this is how callers
    restrict the search to isomorphisms commuting with given maps.
    Backtracking over degree-refined candidates; meant for small posets.
    """
    if P.n != Q.n:
        return None

    def inv(R, i):
        return (_popcount(R.down[i]), _popcount(R.up[i]))

    inv_q: dict[tuple[int, int], list[int]] = {}
    for j in range(Q.n):
        inv_q.setdefault(inv(Q, j), []).append(j)
    cands = []
    for i in range(P.n):
        js = inv_q.get(inv(P, i), [])
        if pair_ok is not None:
            js = [j for j in js if pair_ok(i, j)]
        if not js:
            return None
        cands.append(js)

    order = sorted(range(P.n), key=lambda i: len(cands[i]))
    assign: list[int | None] = [None] * P.n
    used = [False] * Q.n

    def extend(k: int) -> bool:
        if k == P.n:
            return True
        i = order[k]
        for j in cands[i]:
            if used[j]:
                continue
            ok = True
            for i2 in order[:k]:
                j2 = assign[i2]
                if P.leq(i, i2) != Q.leq(j, j2) or P.leq(i2, i) != Q.leq(j2, j):
                    ok = False
                    break
            if ok:
                assign[i] = j
                used[j] = True
                if extend(k + 1):
                    return True
                assign[i] = None
                used[j] = False
        return False

    return [int(a) for a in assign] if extend(0) else None  # type: ignore[arg-type]


def is_isomorphic(P: Poset, Q: Poset) -> bool:
    return find_isomorphism(P, Q) is not None


# --- text format -----------------------------------------------------------
#
#   poset <n>
#   cover <i> <j>        # i covered by j, zero-based
#
# '#' starts a comment; blank lines are ignored.


def poset_to_text(P: Poset) -> str:
    lines = [f"poset {P.n}"]
    lines += [f"cover {i} {j}" for i, j in P.covers()]
    return "\n".join(lines) + "\n"


def poset_from_text(text: str) -> Poset:
    n = None
    covers = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "poset":
            if n is not None:
                raise FormatError("duplicate 'poset' header", lineno)
            if len(parts) != 2 or not parts[1].isdigit():
                raise FormatError("expected 'poset <n>'", lineno)
            n = int(parts[1])
        elif parts[0] == "cover":
            if n is None:
                raise FormatError("'cover' before 'poset' header", lineno)
            if len(parts) != 3:
                raise FormatError("expected 'cover <i> <j>'", lineno)
            try:
                covers.append((int(parts[1]), int(parts[2])))
            except ValueError:
                raise FormatError("cover indices must be integers", lineno) from None
        else:
            raise FormatError(f"unknown directive {parts[0]!r}", lineno)
    if n is None:
        raise FormatError("missing 'poset <n>' header")
    return build_poset(n, covers)

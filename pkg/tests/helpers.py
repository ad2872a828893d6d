"""Shared brute-force oracles for the test suite.

Everything here is deliberately independent of the library's own clever
paths: closures by boolean matrix powering, downsets by filtering all
subsets, poset enumeration by adding maximal points, and P-morphism
enumeration by trying every partial map or every subset partition.
"""

from __future__ import annotations

from itertools import combinations, product

from fincbs.pmorph import PMorphism, partition_to_pmorphism, validate_pmorphism
from fincbs.poset import Poset, all_downsets, find_isomorphism, is_isomorphic


def closure_oracle(n, covers):
    """Reflexive-transitive closure by repeated boolean matrix multiplication."""
    rel = [[i == j for j in range(n)] for i in range(n)]
    for i, j in covers:
        rel[i][j] = True
    changed = True
    while changed:
        changed = False
        for i in range(n):
            for j in range(n):
                if not rel[i][j] and any(rel[i][k] and rel[k][j] for k in range(n)):
                    rel[i][j] = True
                    changed = True
    return rel


def downsets_oracle(P: Poset) -> list[int]:
    """All downset bitmasks by filtering every subset; only for small posets."""
    out = []
    for mask in range(1 << P.n):
        if all(
            all(P.leq(j, i) <= bool(mask >> j & 1) for j in range(P.n))
            for i in range(P.n)
            if mask >> i & 1
        ):
            out.append(mask)
    return sorted(out)


_POSET_CACHE: dict[int, list[Poset]] = {}


def posets_of_size(n: int) -> list[Poset]:
    """All posets on n points up to isomorphism.

    Built by extending each (n-1)-poset with a new maximal point over each
    downset, then deduplicating; every poset arises this way by removing a
    maximal point.
    """
    if n in _POSET_CACHE:
        return _POSET_CACHE[n]
    if n == 0:
        result = [Poset(0, ())]
    else:
        seen: list[Poset] = []
        for P in posets_of_size(n - 1):
            for D in all_downsets(P):
                up = [P.up[i] | ((1 << (n - 1)) if D.members >> i & 1 else 0)
                      for i in range(n - 1)]
                up.append(1 << (n - 1))
                cand = Poset(n, tuple(up))
                if not any(is_isomorphic(cand, Q) for Q in seen):
                    seen.append(cand)
        result = seen
    _POSET_CACHE[n] = result
    return result


def posets_up_to(n: int) -> list[Poset]:
    out = []
    for k in range(n + 1):
        out.extend(posets_of_size(k))
    return out


def all_pmorphisms(P: Poset, Q: Poset) -> list[PMorphism]:
    """Every valid P-morphism P -> Q, by filtering all partial maps."""
    out = []
    for vals in product([None] + list(range(Q.n)), repeat=P.n):
        f = PMorphism(P, Q, vals)
        if not validate_pmorphism(f):
            out.append(f)
    return out


def subset_partitions(P: Poset):
    """Every partition of every subset of P's carrier (blocks of indices)."""
    elements = list(range(P.n))

    def partitions(rest):
        if not rest:
            yield []
            return
        first, others = rest[0], rest[1:]
        for k in range(len(others) + 1):
            for extra in combinations(others, k):
                block = (first,) + extra
                remaining = [e for e in others if e not in extra]
                for more in partitions(remaining):
                    yield [block] + more

    for r in range(len(elements) + 1):
        for subset in combinations(elements, r):
            yield from partitions(list(subset))


def surjective_pmorphisms_from(P: Poset) -> list[PMorphism]:
    """Every surjective P-morphism out of P, via valid fiber partitions.

    Codomains are the canonical quotient posets, so the list is exhaustive
    up to isomorphism of the codomain.
    """
    out = []
    for blocks in subset_partitions(P):
        try:
            _, f = partition_to_pmorphism(P, blocks)
        except Exception:
            continue
        out.append(f)
    return out


def surjections_onto(P: Poset, Q: Poset) -> list[PMorphism]:
    """Every surjective P-morphism P -> Q (exactly Q, all identifications)."""
    out = []
    for blocks in subset_partitions(P):
        if len(blocks) != Q.n:
            continue
        try:
            Qq, f = partition_to_pmorphism(P, blocks)
        except Exception:
            continue
        iso = find_isomorphism(Qq, Q)
        if iso is None:
            continue
        seen_isos = _all_isomorphisms(Qq, Q)
        for psi in seen_isos:
            out.append(
                PMorphism(P, Q, tuple(None if v is None else psi[v] for v in f.map))
            )
    return out


def _all_isomorphisms(P: Poset, Q: Poset) -> list[list[int]]:
    """All order isomorphisms P -> Q by brute force over candidate maps."""
    if P.n != Q.n:
        return []
    out = []

    def extend(assign, used):
        k = len(assign)
        if k == P.n:
            out.append(list(assign))
            return
        for j in range(Q.n):
            if used[j]:
                continue
            ok = True
            for i2, j2 in enumerate(assign):
                if P.leq(k, i2) != Q.leq(j, j2) or P.leq(i2, k) != Q.leq(j2, j):
                    ok = False
                    break
            if ok:
                assign.append(j)
                used[j] = True
                extend(assign, used)
                assign.pop()
                used[j] = False

    extend([], [False] * Q.n)
    return out

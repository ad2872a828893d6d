"""Köhler's finite duality, in both directions, on objects and morphisms.

A finite poset P goes to the algebra of its downsets; a finite algebra L
goes to the poset of its join-irreducible elements.  A P-morphism
f : P -> Q dualizes to the algebra map sending a downset D of Q to the
downset generated by its preimage; an algebra map h : L -> M dualizes to
the P-morphism J(M) -> J(L) determined componentwise (see
:func:`cbs_morphism_dual`).

All constructions are checked: ``cbs_morphism_dual`` performs a mandatory
round trip through ``pmorphism_dual`` and raises loudly on mismatch.
"""

from __future__ import annotations

import functools

from .cbs import CbsMorphism, FinCbs, ji_components, join_irreducibles
from .errors import RoundTripFailure
from .pmorph import PMorphism, require_pmorphism
from .poset import (
    DEFAULT_DOWNSET_CAP,
    DownSet,
    Poset,
    _bits,
    all_downsets,
    is_isomorphic,
)


def poset_to_cbs(
    P: Poset, max_count: int = DEFAULT_DOWNSET_CAP
) -> tuple[FinCbs, tuple[DownSet, ...]]:
    """The downset algebra of P, with the canonical indexing of downsets.

    Downsets are ordered by bitmask value, so the empty set (the zero of
    the algebra) always sits at index 0.
    """
    ds = all_downsets(P, max_count)
    index = {d.members: i for i, d in enumerate(ds)}
    down = P.down
    n = len(ds)

    def diff_mask(a: int, b: int) -> int:
        acc = 0
        for e in _bits(a & ~b):
            acc |= down[e]
        return acc

    join = tuple(
        tuple(index[ds[a].members | ds[b].members] for b in range(n)) for a in range(n)
    )
    diff = tuple(
        tuple(index[diff_mask(ds[a].members, ds[b].members)] for b in range(n))
        for a in range(n)
    )
    labels = tuple(
        "{" + ",".join(P.label(e) for e in _bits(d.members)) + "}" for d in ds
    )
    return FinCbs(join, diff, labels), tuple(ds)


def cbs_to_poset(L: FinCbs) -> tuple[Poset, tuple[int, ...]]:
    """The poset of join-irreducibles of L, with the point -> element map."""
    jis = join_irreducibles(L)
    m = len(jis)
    up = []
    for i in range(m):
        mask = 0
        for j in range(m):
            if L.leq(jis[i], jis[j]):
                mask |= 1 << j
        up.append(mask)
    labels = tuple(L.label(g) for g in jis)
    return Poset(m, tuple(up), labels), jis


@functools.lru_cache(maxsize=None)
def counit_algebra(L: FinCbs) -> tuple[FinCbs, tuple[int, ...]]:
    """D(J(L)) together with the canonical iso L -> D(J(L)) as an index map.

    The iso sends an element to the downset of join-irreducibles below it;
    for a valid finite CBS this is a bijection.
    """
    P, jis = cbs_to_poset(L)
    M, ds = poset_to_cbs(P)
    index = {d.members: i for i, d in enumerate(ds)}
    iso = []
    for a in range(L.n):
        mask = 0
        for k, g in enumerate(jis):
            if L.leq(g, a):
                mask |= 1 << k
        iso.append(index[mask])
    if len(set(iso)) != L.n or M.n != L.n:
        raise RoundTripFailure(
            "element-to-component-downset map is not a bijection; input algebra invalid?"
        )
    return M, tuple(iso)


def pmorphism_dual(f: PMorphism) -> CbsMorphism:
    """The algebra map D(cod f) -> D(dom f): D goes to the downset of its preimage."""
    require_pmorphism(f)
    DQ, dsQ = poset_to_cbs(f.cod)
    DP, dsP = poset_to_cbs(f.dom)
    index_p = {d.members: i for i, d in enumerate(dsP)}
    down = f.dom.down
    vals = []
    for d in dsQ:
        mask = 0
        for p in range(f.dom.n):
            v = f.map[p]
            if v is not None and v in d:
                mask |= down[p]
        vals.append(index_p[mask])
    return CbsMorphism(DQ, DP, tuple(vals))


def cbs_morphism_dual(h: CbsMorphism) -> PMorphism:
    """The P-morphism J(cod h) -> J(dom h) dual to an algebra map.

    A point q of J(M) is defined and sent to q-bar exactly when q is a
    join-irreducible component of h(q-bar): the components of h(q-bar) are
    the maximal points of the downset representing it, which is the fiber
    of the dual map over q-bar.  The result is always round-tripped
    through :func:`pmorphism_dual`; a mismatch raises
    :class:`RoundTripFailure` and indicates a library defect.
    """
    L, M = h.dom, h.cod
    P_M, jis_M = cbs_to_poset(M)
    P_L, jis_L = cbs_to_poset(L)
    pos_M = {g: i for i, g in enumerate(jis_M)}
    alpha: list[int | None] = [None] * P_M.n
    for k, qbar in enumerate(jis_L):
        for q in ji_components(M, h.map[qbar]):
            i = pos_M[q]
            if alpha[i] is not None and alpha[i] != k:
                raise RoundTripFailure(
                    f"point {q} would be a component of two distinct images"
                )
            alpha[i] = k
    g = PMorphism(P_M, P_L, tuple(alpha))
    require_pmorphism(g)
    dual = pmorphism_dual(g)
    _, iso_L = counit_algebra(L)
    _, iso_M = counit_algebra(M)
    for a in range(L.n):
        if dual.map[iso_L[a]] != iso_M[h.map[a]]:
            raise RoundTripFailure(
                f"dual candidate does not reproduce the morphism at element {a}"
            )
    return g


def cbs_isomorphic(L1: FinCbs, L2: FinCbs) -> bool:
    """Finite CBSes are isomorphic iff their join-irreducible posets are."""
    if L1.n != L2.n:
        return False
    return is_isomorphic(cbs_to_poset(L1)[0], cbs_to_poset(L2)[0])

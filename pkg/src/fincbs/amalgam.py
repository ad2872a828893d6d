"""Coamalgamation of surjective P-morphisms and pushouts of algebra embeddings.

Given surjective P-morphisms f : P -> Q and g : R -> Q, a poset S with
surjective projections onto P and R completing a commuting square is built
pointwise: over each p in P one takes every choice of g-preimages of the
minimal values f attains above p (and symmetrically over each r in R).
Dualizing the square shows that pushouts of embeddings of finite CBSes
along embeddings are again embeddings: the amalgamation property.
"""

from __future__ import annotations

from itertools import product

from .cbs import CbsMorphism, FinCbs
from .duality import cbs_morphism_dual, counit_algebra, pmorphism_dual, poset_to_cbs
from .errors import CodomainMismatch, NotInjective, NotSurjective
from .pmorph import PMorphism, require_pmorphism
from .poset import Poset, poset_from_up_masks


def _minimal_targets(h: PMorphism, p: int) -> list[int]:
    """Minimal elements of the image of h on points above p."""
    vals = {
        h.map[a]
        for a in range(h.dom.n)
        if h.map[a] is not None and h.dom.leq(p, a)
    }
    mask = 0
    for v in vals:
        mask |= 1 << v
    return sorted(h.cod.minimal_of(mask))


def coamalgamate(
    f: PMorphism, g: PMorphism
) -> tuple[Poset, PMorphism, PMorphism]:
    """Complete two surjective P-morphisms with a common codomain to a square.

    Returns (S, f', g') with f' : S -> dom g and g' : S -> dom f both
    surjective P-morphisms satisfying f o g' = g o f' as partial maps.
    Elements of S are pairs of antichains, one from each side, kept in the
    labels for traceability.
    """
    require_pmorphism(f)
    require_pmorphism(g)
    if f.cod != g.cod:
        raise CodomainMismatch("the two morphisms must share their codomain")
    if not f.is_surjective():
        raise NotSurjective("first morphism is not surjective")
    if not g.is_surjective():
        raise NotSurjective("second morphism is not surjective")
    P, R = f.dom, g.dom

    def preimages(h: PMorphism, q: int) -> list[int]:
        return [a for a in range(h.dom.n) if h.map[a] == q]

    elems: set[tuple[tuple[int, ...], tuple[int, ...]]] = set()
    left_of: dict[tuple, int] = {}
    right_of: dict[tuple, int] = {}
    for p in range(P.n):
        qs = _minimal_targets(f, p)
        for choice in product(*(preimages(g, q) for q in qs)):
            el = ((p,), tuple(sorted(choice)))
            elems.add(el)
            left_of[el] = p
    for r in range(R.n):
        qs = _minimal_targets(g, r)
        for choice in product(*(preimages(f, q) for q in qs)):
            el = (tuple(sorted(choice)), (r,))
            elems.add(el)
            right_of[el] = r
    order = sorted(elems)
    pos = {el: i for i, el in enumerate(order)}

    def dominated(side: Poset, a: tuple[int, ...], b: tuple[int, ...]) -> bool:
        return all(any(side.leq(x, y) for x in a) for y in b)

    up = []
    for a1, a2 in order:
        mask = 0
        for j, (b1, b2) in enumerate(order):
            if dominated(P, a1, b1) and dominated(R, a2, b2):
                mask |= 1 << j
        up.append(mask)
    labels = tuple(
        "({" + ",".join(P.label(x) for x in a1) + "},{"
        + ",".join(R.label(x) for x in a2) + "})"
        for a1, a2 in order
    )
    S = poset_from_up_masks(up, labels)
    fprime = PMorphism(
        S, R, tuple(right_of.get(el) for el in order)
    )
    gprime = PMorphism(
        S, P, tuple(left_of.get(el) for el in order)
    )
    require_pmorphism(fprime)
    require_pmorphism(gprime)
    return S, fprime, gprime


def pushout_monos(
    m: CbsMorphism, n: CbsMorphism
) -> tuple[FinCbs, CbsMorphism, CbsMorphism]:
    """Pushout of two embeddings of finite CBSes; both legs are embeddings.

    Computed by dualizing to a coamalgamation square and dualizing back.
    Returns (D, j1, j2) with j1 : cod m -> D, j2 : cod n -> D injective and
    j1 o m = j2 o n.
    """
    if m.dom != n.dom:
        raise CodomainMismatch("the two embeddings must share their domain")
    if not m.is_injective():
        raise NotInjective("first morphism is not injective")
    if not n.is_injective():
        raise NotInjective("second morphism is not injective")
    fd = cbs_morphism_dual(m)  # J(cod m) -> J(dom)
    gd = cbs_morphism_dual(n)  # J(cod n) -> J(dom)
    S, fprime, gprime = coamalgamate(fd, gd)
    D, _ = poset_to_cbs(S)
    dual_g = pmorphism_dual(gprime)  # D(J(cod m)) -> D(S)
    dual_f = pmorphism_dual(fprime)  # D(J(cod n)) -> D(S)
    _, iso1 = counit_algebra(m.cod)
    _, iso2 = counit_algebra(n.cod)
    j1 = CbsMorphism(m.cod, D, tuple(dual_g.map[iso1[a]] for a in range(m.cod.n)))
    j2 = CbsMorphism(n.cod, D, tuple(dual_f.map[iso2[a]] for a in range(n.cod.n)))
    return D, j1, j2

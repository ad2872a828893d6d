"""Minimal finite extensions and their signatures.

A minimal extension of a finite CBS either adds one new join-irreducible
(first kind) or splits an existing join-irreducible into two (second
kind).  Inside the base algebra each kind is classified, up to
isomorphism over the base, by a signature:

* first kind: a pair (below, above) where ``below`` is any element and
  ``above`` is a set of pairwise incomparable join-irreducibles strictly
  over ``below`` (possibly empty) -- the new point sits exactly over the
  downset of ``below`` and under the upset of ``above``;
* second kind: (below1, below2, split) where ``split`` is join-irreducible
  and ``below1 v below2`` is its unique predecessor -- the two new points
  replace ``split``, one over each ``below_i``.

``build_extension`` realizes a signature on the dual poset and dualizes
back; ``primitive_check`` verifies that one or two elements of any
extension generate a minimal one and reads off the induced signature;
``find_primitive_generators`` recovers the generators of a given minimal
extension.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations

from .cbs import (
    CbsMorphism,
    FinCbs,
    generated_subalgebra,
    join_irreducibles,
    predecessor,
    relabel_algebra,
)
from .duality import cbs_morphism_dual, cbs_to_poset, counit_algebra, pmorphism_dual, poset_to_cbs
from .errors import (
    FormatError,
    InvalidSignature,
    NotMinimal,
    NotPrimitive,
    RoundTripFailure,
)
from .pmorph import PMorphism, classify, require_pmorphism
from .poset import Poset, poset_from_up_masks


@dataclass(frozen=True)
class FirstKind:
    below: int
    above: tuple[int, ...]

    def canonical(self) -> "FirstKind":
        return FirstKind(self.below, tuple(sorted(self.above)))


@dataclass(frozen=True)
class SecondKind:
    below1: int
    below2: int
    split: int

    def canonical(self) -> "SecondKind":
        lo, hi = sorted((self.below1, self.below2))
        return SecondKind(lo, hi, self.split)


Signature = FirstKind | SecondKind


def validate_signature(L0: FinCbs, sig: Signature) -> None:
    jis = set(join_irreducibles(L0))
    if isinstance(sig, FirstKind):
        L0.check_index(sig.below, *sig.above)
        if len(set(sig.above)) != len(sig.above):
            raise InvalidSignature("repeated join-irreducible in the upper set")
        for g in sig.above:
            if g not in jis:
                raise InvalidSignature(f"element {g} is not join-irreducible")
            if not L0.lt(sig.below, g):
                raise InvalidSignature(f"lower element {sig.below} is not strictly below {g}")
        for g, g2 in combinations(sig.above, 2):
            if L0.leq(g, g2) or L0.leq(g2, g):
                raise InvalidSignature(f"upper elements {g} and {g2} are comparable")
    elif isinstance(sig, SecondKind):
        L0.check_index(sig.below1, sig.below2, sig.split)
        if sig.split not in jis:
            raise InvalidSignature(f"element {sig.split} is not join-irreducible")
        if L0.join[sig.below1][sig.below2] != predecessor(L0, sig.split):
            raise InvalidSignature(
                "the two lower elements must join to the predecessor of the split element"
            )
    else:
        raise InvalidSignature(f"not a signature: {sig!r}")


def enumerate_signatures(L0: FinCbs) -> list[Signature]:
    """All signatures, first kind before second, lexicographically ordered.

    Second-kind signatures are listed with below1 <= below2: swapping the
    two lower elements yields the same extension up to isomorphism over
    the base, so only one representative is produced.
    """
    jis = join_irreducibles(L0)
    antichains: list[tuple[int, ...]] = []
    for r in range(len(jis) + 1):
        for combo in combinations(jis, r):
            if all(
                not L0.leq(a, b) and not L0.leq(b, a) for a, b in combinations(combo, 2)
            ):
                antichains.append(combo)
    firsts = [
        FirstKind(h, combo)
        for h in range(L0.n)
        for combo in antichains
        if all(L0.lt(h, g) for g in combo)
    ]
    firsts.sort(key=lambda s: (s.below, s.above))
    seconds = []
    for g in jis:
        pred = predecessor(L0, g)
        for h1 in range(L0.n):
            for h2 in range(h1, L0.n):
                if L0.join[h1][h2] == pred:
                    seconds.append(SecondKind(h1, h2, g))
    seconds.sort(key=lambda s: (s.below1, s.below2, s.split))
    return firsts + seconds


@dataclass(frozen=True)
class Extension:
    """An extension of finite CBSes with its embedding.

    For extensions produced by this module the carrier of ``ext`` is
    relabeled so the image of the base is the identity prefix 0..n0-1.
    ``new_elements`` holds the distinguished generators (one element for
    the first kind, the couple for the second, witnesses for axiom
    extensions); ``rule`` names the construction step for tower output.
    """

    base: FinCbs
    ext: FinCbs
    embed: CbsMorphism
    kind: str | None = None
    new_elements: tuple[int, ...] = ()
    rule: str | None = None


def dual_extension(
    L0: FinCbs,
    P: Poset,
    f: PMorphism,
    featured_masks: tuple[int, ...] = (),
    kind: str | None = None,
    rule: str | None = None,
) -> tuple[Extension, tuple[int, ...]]:
    """Dualize a surjective P-morphism f : P -> J(L0) into an extension of L0.

    The embedding is the dual of f composed with the canonical iso from L0
    to its downset algebra; the extension carrier is relabeled so that
    embedding becomes the identity prefix.  ``featured_masks`` are downset
    bitmasks of P whose relabeled element indices are returned alongside.
    """
    Q, _ = cbs_to_poset(L0)
    if f.cod != Q:
        raise RoundTripFailure("morphism codomain is not the dual poset of the base")
    require_pmorphism(f)
    emb = pmorphism_dual(f)
    _, iso = counit_algebra(L0)
    raw_ext = emb.cod
    _, dsP = poset_to_cbs(P)
    index_p = {d.members: i for i, d in enumerate(dsP)}
    embed_map = [emb.map[iso[a]] for a in range(L0.n)]
    if len(set(embed_map)) != L0.n:
        raise RoundTripFailure("dual of a surjective P-morphism must be injective")
    rest = [i for i in range(raw_ext.n) if i not in set(embed_map)]
    order = embed_map + rest  # position k holds old index order[k]
    perm = [0] * raw_ext.n
    for new, old in enumerate(order):
        perm[old] = new
    ext = relabel_algebra(raw_ext, perm)
    featured = tuple(perm[index_p[m]] for m in featured_masks)
    record = Extension(
        base=L0,
        ext=ext,
        embed=CbsMorphism(L0, ext, tuple(range(L0.n))),
        kind=kind,
        new_elements=featured,
        rule=rule,
    )
    return record, featured


def build_extension(L0: FinCbs, sig: Signature) -> Extension:
    """The minimal extension of L0 classified by the signature."""
    validate_signature(L0, sig)
    Q, jis = cbs_to_poset(L0)
    pos = {g: i for i, g in enumerate(jis)}
    if isinstance(sig, FirstKind):
        d_mask = 0
        u_mask = 0
        for i, g in enumerate(jis):
            if L0.leq(g, sig.below):
                d_mask |= 1 << i
            if any(L0.leq(go, g) for go in sig.above):
                u_mask |= 1 << i
        x = Q.n
        up = []
        for i in range(Q.n):
            mask = Q.up[i]
            if d_mask >> i & 1:
                mask |= 1 << x
            up.append(mask)
        up.append((1 << x) | u_mask)
        labels = tuple(Q.label(i) for i in range(Q.n)) + ("new",)
        P = poset_from_up_masks(up, labels)
        f = PMorphism(P, Q, tuple(range(Q.n)) + (None,))
        record, (elem,) = dual_extension(
            L0, P, f, featured_masks=(P.down[x],), kind="first"
        )
        return record
    gq = pos[sig.split]
    keep = [i for i in range(Q.n) if i != gq]
    new_of = {old: new for new, old in enumerate(keep)}
    x1, x2 = len(keep), len(keep) + 1
    d_masks = []
    for h in (sig.below1, sig.below2):
        mask = 0
        for old in keep:
            if L0.leq(jis[old], h):
                mask |= 1 << new_of[old]
        d_masks.append(mask)
    n_new = len(keep) + 2
    up = [0] * n_new
    for old in keep:
        i = new_of[old]
        mask = 1 << i
        for old2 in keep:
            if Q.lt(old, old2):
                mask |= 1 << new_of[old2]
        for t, xi in enumerate((x1, x2)):
            if d_masks[t] >> i & 1:
                mask |= 1 << xi
        up[i] = mask
    above_g = 0
    for old in keep:
        if Q.lt(gq, old):
            above_g |= 1 << new_of[old]
    up[x1] = (1 << x1) | above_g
    up[x2] = (1 << x2) | above_g
    labels = tuple(Q.label(old) for old in keep) + ("new1", "new2")
    P = poset_from_up_masks(up, labels)
    fmap: list[int | None] = [0] * n_new
    for old in keep:
        fmap[new_of[old]] = old
    fmap[x1] = gq
    fmap[x2] = gq
    P_down = P.down
    record, _ = dual_extension(
        L0,
        P,
        PMorphism(P, Q, tuple(fmap)),
        featured_masks=(P_down[x1], P_down[x2]),
        kind="second",
    )
    return record


def primitive_check(L: FinCbs, embed: CbsMorphism, candidate) -> Signature:
    """Verify that candidate generates a minimal extension over the base of embed.

    ``candidate`` is one element of L (first kind) or a pair (second
    kind).  On success returns the induced signature, phrased in base
    indices; for a pair, slot i of the signature corresponds to entry i of
    the candidate.  Raises :class:`NotPrimitive` with the violated
    condition otherwise.
    """
    base = embed.dom
    image = set(embed.map)
    preimage = {v: k for k, v in enumerate(embed.map)}
    jis0 = join_irreducibles(base)
    if isinstance(candidate, int):
        x = candidate
        L.check_index(x)
        if x in image:
            raise NotPrimitive("candidate lies in the base image", x)
        for a in jis0:
            ea = embed.map[a]
            if L.diff[ea][x] not in image:
                raise NotPrimitive("a - x leaves the base image", a)
            if L.diff[x][ea] not in (0, x):
                raise NotPrimitive("x - a is neither 0 nor x", a)
        below = base.join_many(a for a in jis0 if L.lt(embed.map[a], x))
        over = [a for a in jis0 if L.lt(x, embed.map[a])]
        above = tuple(
            sorted(a for a in over if not any(base.lt(b, a) for b in over))
        )
        sig = FirstKind(below, above)
        validate_signature(base, sig)
        return sig
    x1, x2 = candidate
    L.check_index(x1, x2)
    if x1 == x2:
        raise NotPrimitive("the two candidate elements coincide")
    if x1 in image or x2 in image:
        raise NotPrimitive("a candidate element lies in the base image")
    top = L.join[x1][x2]
    if top not in image:
        raise NotPrimitive("x1 v x2 does not come from the base", top)
    g = preimage[top]
    if g not in jis0:
        raise NotPrimitive("x1 v x2 is not the image of a join-irreducible", g)
    eg = embed.map[g]
    if L.diff[eg][x1] != x2 or L.diff[eg][x2] != x1:
        raise NotPrimitive("the difference equations for the split element fail", g)
    for a in jis0:
        if not base.lt(a, g):
            continue
        for xi in (x1, x2):
            if L.diff[embed.map[a]][xi] not in image:
                raise NotPrimitive("a - x_i leaves the base image for a below the split", a)
    lows = []
    for xi in (x1, x2):
        lows.append(base.join_many(a for a in jis0 if L.lt(embed.map[a], xi)))
    sig = SecondKind(lows[0], lows[1], g)
    validate_signature(base, sig)
    return sig


def find_primitive_generators(e: Extension):
    """The primitive element or couple generating a minimal extension."""
    dual = cbs_morphism_dual(e.embed)
    cls = classify(dual)
    if not cls.minimal:
        raise NotMinimal(
            f"extension adds {dual.dom.n - dual.cod.n} join-irreducibles, not one"
        )
    _, jis_ext = cbs_to_poset(e.ext)
    if cls.kind == "first":
        outside = [i for i in range(dual.dom.n) if dual.map[i] is None]
        return jis_ext[outside[0]]
    fat = next(b for b in dual.fibers() if len(b) == 2)
    return (jis_ext[fat[0]], jis_ext[fat[1]])


# --- text syntax -------------------------------------------------------------
#
#   first h={i} G={j,k,...}
#   second h1={i} h2={j} g={k}

_FIRST_RE = re.compile(r"^first\s+h=\{(\d+)\}\s+G=\{([\d,\s]*)\}$")
_SECOND_RE = re.compile(r"^second\s+h1=\{(\d+)\}\s+h2=\{(\d+)\}\s+g=\{(\d+)\}$")


def format_signature(sig: Signature) -> str:
    if isinstance(sig, FirstKind):
        inner = ",".join(str(g) for g in sig.above)
        return f"first h={{{sig.below}}} G={{{inner}}}"
    return f"second h1={{{sig.below1}}} h2={{{sig.below2}}} g={{{sig.split}}}"


def parse_signature(text: str) -> Signature:
    text = text.strip()
    m = _FIRST_RE.match(text)
    if m:
        gs = tuple(int(p) for p in m.group(2).replace(" ", "").split(",") if p)
        return FirstKind(int(m.group(1)), gs)
    m = _SECOND_RE.match(text)
    if m:
        return SecondKind(int(m.group(1)), int(m.group(2)), int(m.group(3)))
    raise FormatError(
        "expected 'first h={i} G={j,k,...}' or 'second h1={i} h2={j} g={k}'"
    )

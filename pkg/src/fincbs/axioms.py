"""The Splitting and Density axioms: evaluation and witness constructions.

A co-Brouwerian semilattice models the three axioms below exactly when it
is existentially closed; no finite algebra does (Density 1 always fails
at the maximum).  What a finite algebra does admit is a finite extension
witnessing any given instance, and those extensions are built here on the
dual poset:

* Splitting: for b1 v b2 << a != 0 there are nonzero a1, a2 with
  a - a1 = a2 >= b2, a - a2 = a1 >= b1, b2 - a1 = b2 - b1 and
  b1 - a2 = b1 - b2.  The witness poset carries one symbol per point of
  the dual poset and side (two sides above the points under neither
  b-downset), ordered so the two sides never mix.
* Density 1: for every c some b != 0 has c << b.  Witnessed by a new top
  point.
* Density 2: for c << a1, c << a2 (a_i nonzero) and d with a_i - d = a_i,
  some nonzero b has c << b << a1, a2 and b - d = b.  Witnessed by one
  new point per maximal element of c's downset (or a single new minimal
  point when c = 0), slipped just under chosen maximal elements of the
  a_i-downsets.

``realize_signature_via_axioms`` reproduces any signature of a finite
base through axiom-witness steps alone: second-kind signatures by
recursion on Splitting, first-kind ones by Density 1, the second-kind
realization and Density 2.  The returned tower records one extension per
witness step.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cbs import (
    CbsMorphism,
    FinCbs,
    generated_subalgebra,
    ji_components,
    join_irreducibles,
    predecessor,
    way_below,
)
from .duality import cbs_to_poset
from .errors import (
    BadRequest,
    FincbsError,
    PreconditionFailed,
    RoundTripFailure,
)
from .minext import (
    Extension,
    FirstKind,
    SecondKind,
    Signature,
    dual_extension,
    primitive_check,
    validate_signature,
)
from .pmorph import PMorphism
from .poset import poset_from_up_masks


@dataclass(frozen=True)
class AxiomReport:
    axiom: str
    satisfied: bool
    failures: tuple  # instance tuples with no witness in the algebra


def evaluate_axioms(L: FinCbs) -> dict[str, AxiomReport]:
    """Instantiate each axiom over L and search L itself for witnesses.

    Witness construction lives in the *_witness functions; this only asks
    whether the algebra already models each axiom, reporting every failing
    instance.
    """
    n = L.n
    split_failures = []
    for a in range(1, n):
        for b1 in range(n):
            for b2 in range(n):
                if not way_below(L, L.join[b1][b2], a):
                    continue
                if not _has_splitting_witness(L, a, b1, b2):
                    split_failures.append((a, b1, b2))
    dens1_failures = tuple(
        (c,)
        for c in range(n)
        if not any(b != 0 and way_below(L, c, b) for b in range(n))
    )
    dens2_failures = []
    for c in range(n):
        for a1 in range(1, n):
            if not way_below(L, c, a1):
                continue
            for a2 in range(1, n):
                if not way_below(L, c, a2):
                    continue
                for d in range(n):
                    if L.diff[a1][d] != a1 or L.diff[a2][d] != a2:
                        continue
                    if not any(
                        b != 0
                        and way_below(L, c, b)
                        and way_below(L, b, a1)
                        and way_below(L, b, a2)
                        and L.diff[b][d] == b
                        for b in range(n)
                    ):
                        dens2_failures.append((c, a1, a2, d))
    return {
        "splitting": AxiomReport("splitting", not split_failures, tuple(split_failures)),
        "density1": AxiomReport("density1", not dens1_failures, dens1_failures),
        "density2": AxiomReport("density2", not dens2_failures, tuple(dens2_failures)),
    }


def _has_splitting_witness(L: FinCbs, a: int, b1: int, b2: int) -> bool:
    for a1 in range(1, L.n):
        a2 = L.diff[a][a1]
        if (
            a2 != 0
            and L.diff[a][a2] == a1
            and L.leq(b1, a1)
            and L.leq(b2, a2)
            and L.diff[b2][a1] == L.diff[b2][b1]
            and L.diff[b1][a2] == L.diff[b1][b2]
        ):
            return True
    return False


def splitting_conclusions(L: FinCbs, a, b1, b2, a1, a2) -> list[dict]:
    """The Splitting conclusion equations, each evaluated on the tables."""
    return [
        {"equation": "a1 != 0", "holds": a1 != 0},
        {"equation": "a2 != 0", "holds": a2 != 0},
        {"equation": "a - a1 = a2", "holds": L.diff[a][a1] == a2},
        {"equation": "a - a2 = a1", "holds": L.diff[a][a2] == a1},
        {"equation": "a1 >= b1", "holds": L.leq(b1, a1)},
        {"equation": "a2 >= b2", "holds": L.leq(b2, a2)},
        {"equation": "b2 - a1 = b2 - b1", "holds": L.diff[b2][a1] == L.diff[b2][b1]},
        {"equation": "b1 - a2 = b1 - b2", "holds": L.diff[b1][a2] == L.diff[b1][b2]},
    ]


def density1_conclusions(L: FinCbs, c, b) -> list[dict]:
    return [
        {"equation": "b != 0", "holds": b != 0},
        {"equation": "c << b", "holds": way_below(L, c, b)},
    ]


def density2_conclusions(L: FinCbs, c, a1, a2, d, b) -> list[dict]:
    return [
        {"equation": "b != 0", "holds": b != 0},
        {"equation": "c << b", "holds": way_below(L, c, b)},
        {"equation": "b << a1", "holds": way_below(L, b, a1)},
        {"equation": "b << a2", "holds": way_below(L, b, a2)},
        {"equation": "b - d = b", "holds": L.diff[b][d] == b},
    ]


def splitting_witness(L0: FinCbs, a: int, b1: int, b2: int):
    """Extension realizing a Splitting instance; returns (extension, a1, a2).

    On the dual poset each point x gets a side-1 symbol unless x lies in
    the b2-downset, a side-2 symbol unless x lies in the b1-downset, and a
    single neutral symbol when it lies in both.  Symbols compare when
    their points do, except across the two sides.  a_i is the union of the
    side-i cones over the components of a.
    """
    L0.check_index(a, b1, b2)
    if a == 0 or not way_below(L0, L0.join[b1][b2], a):
        raise PreconditionFailed("need b1 v b2 << a and a != 0")
    Q, jis = cbs_to_poset(L0)
    pos = {g: i for i, g in enumerate(jis)}
    in_b1 = [L0.leq(g, b1) for g in jis]
    in_b2 = [L0.leq(g, b2) for g in jis]
    symbols: list[tuple[int, int]] = []
    for x in range(Q.n):
        if in_b1[x] and in_b2[x]:
            symbols.append((x, 0))
        if not in_b2[x]:
            symbols.append((x, 1))
        if not in_b1[x]:
            symbols.append((x, 2))
    index = {s: i for i, s in enumerate(symbols)}
    up = []
    for y, j in symbols:
        mask = 0
        for k, (x, i) in enumerate(symbols):
            if Q.leq(y, x) and {i, j} != {1, 2}:
                mask |= 1 << k
        up.append(mask)
    labels = tuple(f"xi({Q.label(x)},{i})" for x, i in symbols)
    P = poset_from_up_masks(up, labels)
    pi = PMorphism(P, Q, tuple(x for x, _ in symbols))
    down = P.down
    a1_mask = 0
    a2_mask = 0
    for g in ji_components(L0, a):
        x = pos[g]
        a1_mask |= down[index[(x, 1)]]
        a2_mask |= down[index[(x, 2)]]
    record, (w1, w2) = dual_extension(
        L0, P, pi, featured_masks=(a1_mask, a2_mask), rule="splitting"
    )
    bad = [
        e
        for e in splitting_conclusions(
            record.ext, record.embed.map[a], record.embed.map[b1],
            record.embed.map[b2], w1, w2,
        )
        if not e["holds"]
    ]
    if bad:
        raise RoundTripFailure(f"splitting construction broke its own conclusions: {bad}")
    return record, w1, w2


def density1_witness(L0: FinCbs, c: int):
    """Extension with an element strictly way above everything; returns (extension, b)."""
    L0.check_index(c)
    Q, _ = cbs_to_poset(L0)
    m = Q.n
    up = [Q.up[i] | (1 << m) for i in range(Q.n)]
    up.append(1 << m)
    labels = tuple(Q.label(i) for i in range(Q.n)) + ("new_top",)
    P = poset_from_up_masks(up, labels)
    pi = PMorphism(P, Q, tuple(range(Q.n)) + (None,))
    full = (1 << (m + 1)) - 1
    record, (b,) = dual_extension(L0, P, pi, featured_masks=(full,), rule="density1")
    bad = [
        e
        for e in density1_conclusions(record.ext, record.embed.map[c], b)
        if not e["holds"]
    ]
    if bad:
        raise RoundTripFailure(f"density1 construction broke its own conclusions: {bad}")
    return record, b


def density2_witness(L0: FinCbs, c: int, a1: int, a2: int, d: int):
    """Extension squeezing a new element between c and a1, a2; returns (extension, b)."""
    L0.check_index(c, a1, a2, d)
    if a1 == 0 or a2 == 0:
        raise PreconditionFailed("a1 and a2 must be nonzero")
    if not (way_below(L0, c, a1) and way_below(L0, c, a2)):
        raise PreconditionFailed("need c << a1 and c << a2")
    if L0.diff[a1][d] != a1 or L0.diff[a2][d] != a2:
        raise PreconditionFailed("need a1 - d = a1 and a2 - d = a2")
    Q, jis = cbs_to_poset(L0)
    c_mask = _downset_mask(L0, Q, jis, c)
    a1_mask = _downset_mask(L0, Q, jis, a1)
    a2_mask = _downset_mask(L0, Q, jis, a2)
    gammas = sorted(Q.maximal_of(c_mask))
    if not gammas:
        # a single new minimal point under one maximal element of each side
        al1 = min(Q.maximal_of(a1_mask))
        al2 = min(Q.maximal_of(a2_mask))
        beta = Q.n
        up = list(Q.up)
        up.append((1 << beta) | Q.up[al1] | Q.up[al2])
        labels = tuple(Q.label(i) for i in range(Q.n)) + ("beta",)
        P = poset_from_up_masks(up, labels)
        pi = PMorphism(P, Q, tuple(range(Q.n)) + (None,))
        b_mask = P.down[beta]
    else:
        # one new point per maximal element of c's downset, each sitting
        # over that element and under chosen maximal elements above it
        chosen = []
        for gm in gammas:
            al1 = min(x for x in Q.maximal_of(a1_mask) if Q.leq(gm, x))
            al2 = min(x for x in Q.maximal_of(a2_mask) if Q.leq(gm, x))
            chosen.append((al1, al2))
        k = len(gammas)
        up = []
        for i in range(Q.n):
            mask = Q.up[i]
            for t, gm in enumerate(gammas):
                if Q.leq(i, gm):
                    mask |= 1 << (Q.n + t)
            up.append(mask)
        for t, (al1, al2) in enumerate(chosen):
            mask = (1 << (Q.n + t)) | Q.up[al1] | Q.up[al2]
            for t2, gm2 in enumerate(gammas):
                if t2 != t and (Q.leq(al1, gm2) or Q.leq(al2, gm2)):
                    mask |= 1 << (Q.n + t2)
            up.append(mask)
        labels = tuple(Q.label(i) for i in range(Q.n)) + tuple(
            f"beta{t}" for t in range(k)
        )
        P = poset_from_up_masks(up, labels)
        pi = PMorphism(P, Q, tuple(range(Q.n)) + (None,) * k)
        b_mask = 0
        for t in range(k):
            b_mask |= P.down[Q.n + t]
    record, (b,) = dual_extension(L0, P, pi, featured_masks=(b_mask,), rule="density2")
    emb = record.embed.map
    bad = [
        e
        for e in density2_conclusions(record.ext, emb[c], emb[a1], emb[a2], emb[d], b)
        if not e["holds"]
    ]
    if bad:
        raise RoundTripFailure(f"density2 construction broke its own conclusions: {bad}")
    return record, b


def _downset_mask(L: FinCbs, Q, jis, a: int) -> int:
    mask = 0
    for i, g in enumerate(jis):
        if L.leq(g, a):
            mask |= 1 << i
    return mask


# --- realization of signatures through the axioms ----------------------------


class _Tower:
    """A chain of extensions; each step's base is the previous step's top.

    After every witness construction the ambient algebra is cut down to
    the subalgebra generated by the old elements and the kept witnesses,
    relabeled so old indices survive unchanged; element references
    therefore stay valid across pushes.
    """

    def __init__(self, base: FinCbs):
        self.base = base
        self.steps: list[Extension] = []

    @property
    def top(self) -> FinCbs:
        return self.steps[-1].ext if self.steps else self.base

    def push(self, record: Extension, keep: tuple[int, ...]) -> tuple[int, ...]:
        sub, incl = generated_subalgebra(
            record.ext, set(record.embed.map) | set(keep)
        )
        remap = {orig: i for i, orig in enumerate(incl.map)}
        top = self.top
        if [remap[record.embed.map[x]] for x in range(top.n)] != list(range(top.n)):
            raise RoundTripFailure("tower push did not keep old elements in place")
        kept = tuple(remap[k] for k in keep)
        self.steps.append(
            Extension(
                base=top,
                ext=sub,
                embed=CbsMorphism(top, sub, tuple(range(top.n))),
                kind=record.kind,
                new_elements=kept,
                rule=record.rule,
            )
        )
        return kept

    def base_embedding(self) -> CbsMorphism:
        return CbsMorphism(self.base, self.top, tuple(range(self.base.n)))


def _chain_bound(T: FinCbs, h1: int, h2: int) -> int:
    """Sum over i of the longest chain of join-irreducibles ending under h_i
    whose least member is not under the meet of h1 and h2."""
    meet = T.meet(h1, h2)
    jis = join_irreducibles(T)
    total = 0
    for h in (h1, h2):
        rel = [g for g in jis if T.leq(g, h)]
        rel.sort(key=lambda g: sum(T.leq(g2, g) for g2 in rel))
        best: dict[int, int] = {}
        for g in rel:
            start = 1 if not T.leq(g, meet) else 0
            via = max(
                (best[g2] + 1 for g2 in rel if T.lt(g2, g) and best.get(g2, 0) > 0),
                default=0,
            )
            best[g] = max(start, via)
        total += max(best.values(), default=0)
    return total


def _realize_second(tw: _Tower, h1: int, h2: int, g: int, allowance: int):
    """Primitive couple over the current top inducing (h1, h2, g).

    Follows the inductive splitting recursion; ``allowance`` enforces the
    chain-length recursion bound.
    """
    T = tw.top
    validate_signature(T, SecondKind(h1, h2, g))
    if allowance < 0:
        raise FincbsError("splitting recursion exceeded its chain-length bound")
    record, y1, y2 = splitting_witness(T, g, h1, h2)
    y1, y2 = tw.push(record, (y1, y2))
    T1 = tw.top
    if h1 == h2:
        return y1, y2
    if not T1.leq(h1, h2) and not T1.leq(h2, h1):
        y11, y12 = _realize_second(tw, h1, T1.meet(h2, y1), y1, allowance - 1)
        T2 = tw.top
        y21, y22 = _realize_second(tw, T2.meet(h1, y2), h2, y2, allowance - 1)
        T3 = tw.top
        return T3.join[y11][y21], T3.join[y12][y22]
    if T1.lt(h1, h2):
        y11, y12 = _realize_second(tw, h1, T1.meet(h2, y1), y1, allowance - 1)
        T2 = tw.top
        return y11, T2.join[y12][y2]
    y21, y22 = _realize_second(tw, T1.meet(h1, y2), h2, y2, allowance - 1)
    T2 = tw.top
    return T2.join[y21][y1], y22


def _realize_first(tw: _Tower, below: int, above: tuple[int, ...]):
    """Primitive element over the current top inducing (below, above)."""
    T = tw.top
    validate_signature(T, FirstKind(below, tuple(sorted(above))))
    if not above:
        one = T.top
        record, m = density1_witness(T, one)
        (m,) = tw.push(record, (m,))
        L1 = tw.top
        bound = _chain_bound(L1, below, one)
        x1, _ = _realize_second(tw, below, one, m, bound)
        return x1
    gs = sorted(above)
    gk = gs[-1]
    y = _realize_first(tw, below, tuple(gs[:-1]))
    ty = tw.top
    pk = predecessor(ty, gk)
    gk_prime, _ = _realize_second(tw, below, pk, gk, _chain_bound(ty, below, pk))
    t2 = tw.top
    d = T.join_many(
        b
        for b in join_irreducibles(T)
        if not any(T.leq(gi, b) for gi in gs)
    )
    for pre, name in (
        (way_below(t2, below, y), "h << y"),
        (way_below(t2, below, gk_prime), "h << g_k'"),
        (t2.diff[y][d] == y, "y - d = y"),
        (t2.diff[gk_prime][d] == gk_prime, "g_k' - d = g_k'"),
    ):
        if not pre:
            raise RoundTripFailure(f"realization precondition {name} failed")
    record, x = density2_witness(t2, below, y, gk_prime, d)
    (x,) = tw.push(record, (x,))
    return x


def realize_signature_via_axioms(L0: FinCbs, sig: Signature):
    """Realize a signature of L0 using only axiom-witness extension steps.

    Returns (tower, generators): the list of extensions performed, each
    base-to-top consecutive, and the primitive element or couple in the
    final algebra.  The generators are verified to induce the requested
    signature; slot i of a second-kind signature corresponds to generator i.
    """
    validate_signature(L0, sig)
    tw = _Tower(L0)
    if isinstance(sig, FirstKind):
        gens = _realize_first(tw, sig.below, sig.above)
    else:
        bound = _chain_bound(L0, sig.below1, sig.below2)
        gens = _realize_second(tw, sig.below1, sig.below2, sig.split, bound)
    induced = primitive_check(tw.top, tw.base_embedding(), gens)
    if isinstance(sig, FirstKind):
        ok = induced == FirstKind(sig.below, tuple(sorted(sig.above)))
    else:
        ok = induced == sig  # slotwise: generator i answers to lower element i
    if not ok:
        raise RoundTripFailure(f"realized generators induce {induced}, expected {sig}")
    return tw.steps, gens


# --- finite shadows of the existentially closed world ------------------------


@dataclass(frozen=True)
class KillJoinIrreducible:
    g: int


@dataclass(frozen=True)
class DefeatMeet:
    a: int
    b: int
    c: int


@dataclass(frozen=True)
class ExceedTop:
    pass


def ec_demo_witnesses(L0: FinCbs, request):
    """Finite extensions witnessing what an existentially closed algebra forces.

    * kill_join_irreducible(g): g becomes a join of two smaller nonzero
      elements, so no nonzero element stays join-irreducible forever;
    * defeat_meet(a, b, c): for incomparable a, b and a common lower bound
      c, a new x with c < c v x <= a, b certifies c is not the meet;
    * exceed_top: an element strictly above the old maximum.

    Returns (extension, certificate).
    """
    if isinstance(request, KillJoinIrreducible):
        g = request.g
        L0.check_index(g)
        if g == 0:
            raise BadRequest("zero cannot be split into nonzero parts")
        record, g1, g2 = splitting_witness(L0, g, 0, 0)
        ext = record.ext
        eg = record.embed.map[g]
        cert = {
            "request": "kill_join_irreducible",
            "claims": [
                {"claim": "g = g1 v g2", "holds": ext.join[g1][g2] == eg},
                {"claim": "g1 != 0 and g2 != 0", "holds": g1 != 0 and g2 != 0},
                {"claim": "g1 != g and g2 != g", "holds": g1 != eg and g2 != eg},
            ],
            "witnesses": {"g1": g1, "g2": g2},
        }
        return record, cert
    if isinstance(request, DefeatMeet):
        a, b, c = request.a, request.b, request.c
        L0.check_index(a, b, c)
        if L0.leq(a, b) or L0.leq(b, a):
            raise BadRequest("the two elements must be incomparable")
        if not (L0.leq(c, a) and L0.leq(c, b)):
            raise BadRequest("c must be a common lower bound")
        g1 = min(g for g in ji_components(L0, a) if not L0.leq(g, b))
        g2 = min(g for g in ji_components(L0, b) if not L0.leq(g, a))
        steps, x = realize_signature_via_axioms(
            L0, FirstKind(0, tuple(sorted((g1, g2))))
        )
        top = steps[-1].ext if steps else L0
        record = Extension(
            base=L0,
            ext=top,
            embed=CbsMorphism(L0, top, tuple(range(L0.n))),
            new_elements=(x,),
            rule="defeat_meet",
        )
        cx = top.join[c][x]
        cert = {
            "request": "defeat_meet",
            "claims": [
                {"claim": "c < c v x", "holds": top.lt(c, cx)},
                {"claim": "c v x <= a", "holds": top.leq(cx, a)},
                {"claim": "c v x <= b", "holds": top.leq(cx, b)},
            ],
            "witnesses": {"x": x, "c_join_x": cx},
        }
        return record, cert
    if isinstance(request, ExceedTop):
        record, b = density1_witness(L0, L0.top)
        old_top = record.embed.map[L0.top]
        cert = {
            "request": "exceed_top",
            "claims": [
                {"claim": "b > old maximum", "holds": record.ext.lt(old_top, b)},
            ],
            "witnesses": {"b": b},
        }
        return record, cert
    raise BadRequest(f"unknown request {request!r}")

"""Partial P-morphisms between finite posets.

A P-morphism f : P -> Q is a partial map that is strictly order
preserving on its domain and lifts strict upper bounds: whenever p is
defined and f(p) < q', some r > p is defined with f(r) = q'.  These are
exactly the maps dual to morphisms of finite co-Brouwerian semilattices.

Surjective P-morphisms out of P correspond to fiber partitions of subsets
of P (conditions 1-3 below), and every surjective P-morphism factors into
minimal ones, each collapsing the carrier by a single point.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from itertools import combinations

from .errors import (
    CodomainMismatch,
    FormatError,
    IndexOutOfRange,
    InvalidMorphism,
    NotSurjective,
    PartitionInvalid,
    PosetMismatch,
)
from .poset import Poset, poset_from_text, poset_from_up_masks, subposet


@dataclass(frozen=True)
class PMorphism:
    """Partial map dom -> cod; ``map[i]`` is None outside the domain."""

    dom: Poset
    cod: Poset
    map: tuple[int | None, ...]

    def defined(self, i: int) -> bool:
        return self.map[i] is not None

    def domain_elements(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.dom.n) if self.map[i] is not None)

    def image(self) -> set[int]:
        return {v for v in self.map if v is not None}

    def is_total(self) -> bool:
        return all(v is not None for v in self.map)

    def is_surjective(self) -> bool:
        return len(self.image()) == self.cod.n

    def fibers(self) -> list[tuple[int, ...]]:
        """Nonempty preimages, as sorted tuples, ordered by codomain index."""
        buckets: dict[int, list[int]] = {}
        for i, v in enumerate(self.map):
            if v is not None:
                buckets.setdefault(v, []).append(i)
        return [tuple(sorted(buckets[q])) for q in sorted(buckets)]


def identity_pmorphism(P: Poset) -> PMorphism:
    return PMorphism(P, P, tuple(range(P.n)))


@dataclass(frozen=True)
class ConditionViolation:
    condition: str
    witness: tuple

    def __str__(self):
        return f"{self.condition} fails at {self.witness}"


def validate_pmorphism(f: PMorphism) -> list[ConditionViolation]:
    """Report every violated P-morphism condition with witnesses."""
    if len(f.map) != f.dom.n:
        raise FormatError("map length does not match the domain size")
    for v in f.map:
        if v is not None and not 0 <= v < f.cod.n:
            raise IndexOutOfRange(f"map value {v} outside the codomain")
    out = []
    dom = f.domain_elements()
    for p in dom:
        for q in dom:
            if f.dom.lt(p, q) and not f.cod.lt(f.map[p], f.map[q]):
                out.append(ConditionViolation("strict order preservation", (p, q)))
    for p in dom:
        fp = f.map[p]
        for q2 in range(f.cod.n):
            if not f.cod.lt(fp, q2):
                continue
            if not any(f.dom.lt(p, r) and f.map[r] == q2 for r in dom):
                out.append(ConditionViolation("lifting", (p, q2)))
    return out


def require_pmorphism(f: PMorphism) -> None:
    problems = validate_pmorphism(f)
    if problems:
        raise InvalidMorphism("not a P-morphism", problems)


def compose_pmorphisms(outer: PMorphism, inner: PMorphism) -> PMorphism:
    """outer after inner; defined where the whole chain is defined."""
    if inner.cod != outer.dom:
        raise PosetMismatch("composition mismatch: codomain differs from domain")
    vals: list[int | None] = []
    for v in inner.map:
        vals.append(None if v is None else outer.map[v])
    return PMorphism(inner.dom, outer.cod, tuple(vals))


# --- fiber partitions -------------------------------------------------------


@dataclass(frozen=True)
class FiberPartition:
    """Disjoint nonempty blocks covering a subset of the poset."""

    poset: Poset
    blocks: tuple[tuple[int, ...], ...]


def _block_leq(P: Poset, a_block, b_block) -> bool:
    return any(P.leq(a, b) for a in a_block for b in b_block)


def validate_partition(P: Poset, blocks) -> list[PartitionInvalid]:
    """Check the three fiber-partition conditions; report-style."""
    blocks = [tuple(sorted(b)) for b in blocks]
    seen: set[int] = set()
    for b in blocks:
        if not b:
            raise FormatError("empty partition block")
        P.check_index(*b)
        if seen & set(b):
            raise FormatError("partition blocks overlap")
        seen |= set(b)
    out = []
    for A, B in combinations(blocks, 2):
        if _block_leq(P, A, B) and _block_leq(P, B, A):
            out.append(PartitionInvalid(1, (A, B)))
    for A in blocks:
        for B in blocks:
            if A is B or not _block_leq(P, A, B):
                continue
            for a in A:
                if not any(P.leq(a, b) for b in B):
                    out.append(PartitionInvalid(2, (A, B, a)))
    for A in blocks:
        for a, b in combinations(A, 2):
            if P.leq(a, b) or P.leq(b, a):
                out.append(PartitionInvalid(3, (a, b)))
    return out


def partition_to_pmorphism(P: Poset, blocks) -> tuple[Poset, PMorphism]:
    """Quotient by a valid fiber partition: blocks become the codomain points.

    Blocks are ordered by their least element, so the quotient and the
    projection are deterministic.
    """
    problems = validate_partition(P, blocks)
    if problems:
        raise problems[0]
    blocks = sorted((tuple(sorted(b)) for b in blocks), key=lambda b: b[0])
    m = len(blocks)
    up = []
    for i in range(m):
        mask = 0
        for j in range(m):
            if i == j or _block_leq(P, blocks[i], blocks[j]):
                mask |= 1 << j
        up.append(mask)
    labels = tuple("{" + ",".join(P.label(e) for e in b) + "}" for b in blocks)
    Q = poset_from_up_masks(up, labels)
    owner: dict[int, int] = {}
    for j, b in enumerate(blocks):
        for e in b:
            owner[e] = j
    f = PMorphism(P, Q, tuple(owner.get(i) for i in range(P.n)))
    return Q, f


# --- classification ---------------------------------------------------------


@dataclass(frozen=True)
class Classification:
    total: bool
    surjective: bool
    injective: bool
    isomorphism: bool
    minimal: bool
    kind: str | None  # "first" | "second" for minimal maps


def classify(f: PMorphism) -> Classification:
    require_pmorphism(f)
    total = f.is_total()
    surjective = f.is_surjective()
    defined_vals = [v for v in f.map if v is not None]
    injective = len(set(defined_vals)) == len(defined_vals)
    iso = total and injective and surjective
    minimal = surjective and f.dom.n == f.cod.n + 1
    kind = None
    if minimal:
        outside = f.dom.n - len(defined_vals)
        if outside == 1:
            kind = "first"
        elif total and sum(len(b) - 1 for b in f.fibers()) == 1:
            kind = "second"
    return Classification(total, surjective, injective, iso, minimal, kind)


# --- minimal chain decomposition ---------------------------------------------


def decompose_minimal_chain(f: PMorphism) -> list[PMorphism]:
    """Factor a surjective P-morphism into #P - #Q minimal surjective ones.

    The returned list is in application order: f = gs[-1] o ... o gs[0].
    Points outside the domain are peeled off first (ascending index); then
    one non-singleton fiber at a time is split at its least minimal element.
    An input that is already an isomorphism decomposes into zero factors.
    """
    require_pmorphism(f)
    if not f.is_surjective():
        raise NotSurjective("only surjective P-morphisms decompose into minimal ones")
    factors: list[PMorphism] = []
    current = f
    while True:
        undefined = [i for i in range(current.dom.n) if current.map[i] is None]
        if not undefined:
            break
        p = undefined[0]
        keep = [i for i in range(current.dom.n) if i != p]
        R, pos = subposet(current.dom, keep)
        peel = PMorphism(
            current.dom,
            R,
            tuple(pos[i] if i != p else None for i in range(current.dom.n)),
        )
        rest = PMorphism(R, current.cod, tuple(current.map[i] for i in keep))
        factors.append(peel)
        current = rest
    total_factors, residual_iso = _decompose_total(current)
    if residual_iso is not None:
        if factors:
            factors[-1] = compose_pmorphisms(residual_iso, factors[-1])
        # else: f itself is an isomorphism and the decomposition is empty
    else:
        factors.extend(total_factors)
    return factors


def _decompose_total(f: PMorphism):
    """Decompose a total surjective P-morphism; returns (factors, residual).

    ``residual`` is f itself when f is an isomorphism (nothing to split),
    otherwise None and ``factors`` is the full minimal chain.
    """
    R = f.dom
    if R.n == f.cod.n:
        return [], f
    fibers = f.fibers()
    fat = [b for b in fibers if len(b) > 1]
    members = sorted({e for b in fat for e in b})
    minimal_members = [
        e for e in members if not any(R.lt(e2, e) for e2 in members)
    ]
    x = min(minimal_members)
    G = next(b for b in fat if x in b)
    refined = [b for b in fibers if b != G]
    refined.append((x,))
    refined.append(tuple(e for e in G if e != x))
    Qprime, pi = partition_to_pmorphism(R, refined)
    block_of = pi.map
    last_map = [None] * Qprime.n
    for e in range(R.n):
        last_map[block_of[e]] = f.map[e]
    last = PMorphism(Qprime, f.cod, tuple(last_map))
    subfactors, residual = _decompose_total(pi)
    if residual is not None:
        return [compose_pmorphisms(last, residual)], None
    return subfactors + [last], None


def equivalent_over_codomain(f1: PMorphism, f2: PMorphism) -> bool:
    """True when an iso of the domains identifies f1 with f2 over the same codomain."""
    if f1.cod != f2.cod or f1.dom.n != f2.dom.n:
        return False
    from .poset import find_isomorphism

    def pair_ok(i, j):
        return f1.map[i] == f2.map[j]

    return find_isomorphism(f1.dom, f2.dom, pair_ok=pair_ok) is not None


# --- text format -------------------------------------------------------------
#
#   pmorph <dom-file> <cod-file>
#   map <i> <j>
#
# Indices never mentioned in a map line are outside the domain.  The poset
# files are resolved relative to the morphism file.


def pmorphism_to_text(f: PMorphism, dom_file: str, cod_file: str) -> str:
    lines = [f"pmorph {dom_file} {cod_file}"]
    for i, v in enumerate(f.map):
        if v is not None:
            lines.append(f"map {i} {v}")
    return "\n".join(lines) + "\n"


def read_pmorphism(path: str) -> PMorphism:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    base = os.path.dirname(os.path.abspath(path))
    header = None
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "pmorph":
            if header is not None:
                raise FormatError("duplicate 'pmorph' header", lineno)
            if len(parts) != 3:
                raise FormatError("expected 'pmorph <dom-file> <cod-file>'", lineno)
            header = (parts[1], parts[2])
        elif parts[0] == "map":
            if len(parts) != 3:
                raise FormatError("expected 'map <i> <j>'", lineno)
            try:
                pairs.append((int(parts[1]), int(parts[2])))
            except ValueError:
                raise FormatError("map indices must be integers", lineno) from None
        else:
            raise FormatError(f"unknown directive {parts[0]!r}", lineno)
    if header is None:
        raise FormatError("missing 'pmorph' header")

    def load(rel):
        with open(os.path.join(base, rel), encoding="utf-8") as fh:
            return poset_from_text(fh.read())

    dom, cod = load(header[0]), load(header[1])
    vals: list[int | None] = [None] * dom.n
    for i, j in pairs:
        if not 0 <= i < dom.n:
            raise IndexOutOfRange(f"map source {i} outside the domain poset")
        if not 0 <= j < cod.n:
            raise IndexOutOfRange(f"map target {j} outside the codomain poset")
        if vals[i] is not None:
            raise FormatError(f"duplicate map entry for {i}")
        vals[i] = j
    return PMorphism(dom, cod, tuple(vals))

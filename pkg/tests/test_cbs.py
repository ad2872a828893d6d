from itertools import product

import pytest

from fincbs.catalog import catalog_algebras
from fincbs.cbs import (
    CbsMorphism,
    FinCbs,
    generated_subalgebra,
    ji_components,
    join_irreducibles,
    predecessor,
    validate_cbs,
    validate_cbs_morphism,
    way_below,
    algebra_from_text,
    algebra_to_text,
)
from fincbs.duality import poset_to_cbs
from fincbs.errors import InvalidAlgebra, NotJoinIrreducible
from fincbs.poset import build_poset


def algebra(name):
    return dict(catalog_algebras())[f"downsets({name})"]


TWO = None


def setup_module():
    global TWO, THREE, DIAMOND
    TWO = algebra("point")
    THREE = algebra("chain2")
    DIAMOND = algebra("antichain2")


class TestValidate:
    def test_catalog_algebras_are_valid(self):
        for _, L in catalog_algebras():
            assert L.validate() == []

    def test_commutativity_violation(self):
        jt = [list(r) for r in DIAMOND.join]
        jt[1][2] = 1  # but join[2][1] = 3
        problems = validate_cbs(tuple(tuple(r) for r in jt), DIAMOND.diff)
        assert any(v.law == "join commutativity" for v in problems)

    def test_diff_unit_violation_reported_via_adjunction(self):
        dt = [list(r) for r in THREE.diff]
        dt[2][0] = 0  # a - 0 must be a
        problems = validate_cbs(THREE.join, tuple(tuple(r) for r in dt))
        assert any(
            v.law == "difference adjunction" and v.witness[:2] == (2, 0)
            for v in problems
        )

    def test_from_tables_raises(self):
        dt = [list(r) for r in THREE.diff]
        dt[2][0] = 0
        with pytest.raises(InvalidAlgebra):
            FinCbs.from_tables(THREE.join, dt)


class TestJoinIrreducibles:
    def test_two_element(self):
        assert join_irreducibles(TWO) == (1,)

    def test_diamond_atoms(self):
        atoms = [a for a in range(DIAMOND.n) if a != 0 and DIAMOND.diff[a][0] == a
                 and all(not DIAMOND.lt(b, a) or b == 0 for b in range(DIAMOND.n))]
        assert set(join_irreducibles(DIAMOND)) == set(atoms)
        assert len(join_irreducibles(DIAMOND)) == 2

    def test_three_chain(self):
        assert join_irreducibles(THREE) == (1, 2)

    def test_five_conditions_agree(self):
        # the five equivalent characterizations, on every catalog algebra
        for _, L in catalog_algebras():
            n = L.n
            for g in range(n):
                c5 = g != 0 and all(L.diff[g][a] in (0, g) for a in range(n))
                c2 = g != 0 and all(
                    not L.leq(g, L.join[b1][b2]) or L.leq(g, b1) or L.leq(g, b2)
                    for b1 in range(n)
                    for b2 in range(n)
                )
                c4 = g != 0 and all(
                    L.join[b1][b2] != g or b1 == g or b2 == g
                    for b1 in range(n)
                    for b2 in range(n)
                )
                # n-ary joins up to three components, including the empty join
                c1 = g != 0 and all(
                    not L.leq(g, L.join[L.join[b1][b2]][b3])
                    or L.leq(g, b1)
                    or L.leq(g, b2)
                    or L.leq(g, b3)
                    for b1 in range(n)
                    for b2 in range(n)
                    for b3 in range(n)
                )
                c3 = g != 0 and all(
                    L.join[L.join[b1][b2]][b3] != g or g in (b1, b2, b3)
                    for b1 in range(n)
                    for b2 in range(n)
                    for b3 in range(n)
                )
                assert c5 == c2 == c4 == c1 == c3
                assert c5 == (g in join_irreducibles(L))


class TestComponents:
    def test_diamond_top(self):
        assert set(ji_components(DIAMOND, DIAMOND.top)) == set(join_irreducibles(DIAMOND))

    def test_ji_is_own_component(self):
        for _, L in catalog_algebras():
            for g in join_irreducibles(L):
                assert ji_components(L, g) == (g,)

    def test_zero_has_none(self):
        assert ji_components(DIAMOND, 0) == ()

    def test_join_of_components_recovers_element(self):
        for _, L in catalog_algebras():
            for a in range(L.n):
                assert L.join_many(ji_components(L, a)) == a

    def test_difference_via_components(self):
        for _, L in catalog_algebras():
            for a in range(L.n):
                for b in range(L.n):
                    expect = L.join_many(
                        g for g in ji_components(L, a) if not L.leq(g, b)
                    )
                    assert L.diff[a][b] == expect


class TestPredecessor:
    def test_three_chain_top(self):
        assert predecessor(THREE, 2) == 1

    def test_atom(self):
        assert predecessor(TWO, 1) == 0

    def test_top_of_diamond_rejected(self):
        with pytest.raises(NotJoinIrreducible):
            predecessor(DIAMOND, DIAMOND.top)

    def test_unique_maximal_and_way_below(self):
        for _, L in catalog_algebras():
            for g in join_irreducibles(L):
                p = predecessor(L, g)
                below = [a for a in range(L.n) if L.lt(a, g)]
                assert all(L.leq(a, p) for a in below)
                assert way_below(L, p, g)


class TestWayBelow:
    def test_zero_below_everything(self):
        for _, L in catalog_algebras():
            for b in range(L.n):
                assert way_below(L, 0, b)

    def test_three_chain(self):
        assert way_below(THREE, 1, 2)

    def test_diamond_atom_not_way_below_top(self):
        p, q = join_irreducibles(DIAMOND)
        t = DIAMOND.top
        assert not way_below(DIAMOND, p, t)
        assert DIAMOND.diff[t][p] == q

    def test_component_characterization(self):
        for _, L in catalog_algebras():
            for a in range(L.n):
                for b in range(L.n):
                    alg = way_below(L, a, b)
                    comp = L.leq(a, b) and not any(
                        L.leq(g, a) for g in ji_components(L, b)
                    )
                    assert alg == comp


class TestGeneratedSubalgebra:
    def test_top_of_diamond(self):
        sub, incl = generated_subalgebra(DIAMOND, [DIAMOND.top])
        assert sub.n == 2
        assert incl.map == (0, DIAMOND.top)

    def test_everything(self):
        sub, incl = generated_subalgebra(DIAMOND, range(DIAMOND.n))
        assert sub.n == DIAMOND.n

    def test_empty_seed(self):
        sub, incl = generated_subalgebra(DIAMOND, [])
        assert sub.n == 1

    def test_closure_valid_and_inclusion_is_morphism(self):
        for _, L in catalog_algebras():
            if L.n > 6:
                continue
            for a in range(L.n):
                for b in range(L.n):
                    sub, incl = generated_subalgebra(L, [a, b])
                    assert sub.validate() == []
                    assert validate_cbs_morphism(incl) == []


class TestIdentities:
    """The simple-fact identities on the tables of every catalog algebra."""

    def test_identities(self):
        for _, L in catalog_algebras():
            n = L.n
            for a in range(n):
                assert L.diff[0][a] == 0
                assert L.diff[a][0] == a
            for a in range(n):
                for b in range(n):
                    amb = L.diff[a][b]
                    assert L.join[amb][b] == L.join[a][b]
                    assert L.join[amb][a] == a
                    rest = L.diff[a][amb]
                    assert L.join[amb][rest] == a
                    assert L.diff[a][rest] == amb
                    assert L.leq(a, b) == (amb == 0)
            for a in range(n):
                for b in range(n):
                    for c in range(n):
                        assert L.diff[L.diff[a][b]][c] == L.diff[L.diff[a][c]][b]
                        assert (
                            L.diff[L.join[a][b]][c]
                            == L.join[L.diff[a][c]][L.diff[b][c]]
                        )
                        assert (
                            L.diff[a][L.join[b][c]] == L.diff[L.diff[a][b]][c]
                        )
                        if L.leq(b, c):
                            assert L.leq(L.diff[b][a], L.diff[c][a])
                            assert L.leq(L.diff[a][c], L.diff[a][b])

    def test_ternary_join_distribution(self):
        for _, L in catalog_algebras():
            if L.n > 6:
                continue
            for a1, a2, a3, b in product(range(L.n), repeat=4):
                lhs = L.diff[L.join_many((a1, a2, a3))][b]
                rhs = L.join_many((L.diff[a1][b], L.diff[a2][b], L.diff[a3][b]))
                assert lhs == rhs


class TestMeet:
    def test_meets_are_greatest_lower_bounds(self):
        for _, L in catalog_algebras():
            for a in range(L.n):
                for b in range(L.n):
                    m = L.meet(a, b)
                    assert L.leq(m, a) and L.leq(m, b)
                    for c in range(L.n):
                        if L.leq(c, a) and L.leq(c, b):
                            assert L.leq(c, m)


class TestTextFormat:
    def test_cbs_round_trip(self):
        for _, L in catalog_algebras():
            M = algebra_from_text(algebra_to_text(L))
            assert M.join == L.join and M.diff == L.diff

    def test_brouwerian_round_trip(self):
        for _, L in catalog_algebras():
            M = algebra_from_text(algebra_to_text(L, orientation="brouwerian"))
            assert M.join == L.join and M.diff == L.diff

    def test_constant_relabeled_to_zero(self):
        # present the 2-element algebra with zero stored at index 1
        text = "cbs 2\nzero 1\n" + "".join(
            f"join {a} {b} {v}\n"
            for (a, b, v) in [(0, 0, 0), (0, 1, 0), (1, 0, 0), (1, 1, 1)]
        ) + "".join(
            f"diff {a} {b} {v}\n"
            for (a, b, v) in [(0, 0, 1), (0, 1, 0), (1, 0, 1), (1, 1, 1)]
        )
        L = algebra_from_text(text)
        assert L.n == 2 and L.join[0][1] == 1

    def test_morphism_validation(self):
        m = CbsMorphism(TWO, THREE, (0, 2))
        assert validate_cbs_morphism(m) == []
        bad = CbsMorphism(TWO, THREE, (0, 0))
        assert validate_cbs_morphism(bad) == []  # constant-to-zero is a morphism
        worse = CbsMorphism(THREE, TWO, (0, 1, 0))
        assert validate_cbs_morphism(worse) != []

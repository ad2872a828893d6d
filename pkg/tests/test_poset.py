import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fincbs.errors import CycleDetected, IndexOutOfRange, PosetMismatch, SizeLimitExceeded
from fincbs.poset import (
    DownSet,
    Poset,
    all_downsets,
    build_poset,
    downset_closure,
    downset_difference,
    find_isomorphism,
    is_isomorphic,
    poset_from_text,
    poset_to_text,
)

from helpers import closure_oracle, downsets_oracle, posets_up_to


def chain(n):
    return build_poset(n, [(i, i + 1) for i in range(n - 1)])


def antichain(n):
    return build_poset(n, [])


class TestBuildPoset:
    def test_two_chain(self):
        P = build_poset(2, [(0, 1)])
        assert P.leq(0, 1) and not P.leq(1, 0)

    def test_cycle_detected(self):
        with pytest.raises(CycleDetected):
            build_poset(2, [(0, 1), (1, 0)])

    def test_out_of_range(self):
        with pytest.raises(IndexOutOfRange):
            build_poset(2, [(0, 5)])

    def test_vee_against_closure_oracle(self):
        covers = [(0, 2), (1, 2)]
        P = build_poset(3, covers)
        oracle = closure_oracle(3, covers)
        for i in range(3):
            for j in range(3):
                assert P.leq(i, j) == oracle[i][j]
        assert P.leq(0, 2) and P.leq(1, 2) and not P.leq(0, 1)

    @given(
        st.integers(min_value=0, max_value=5).flatmap(
            lambda n: st.tuples(
                st.just(n),
                st.lists(
                    st.tuples(
                        st.integers(0, max(n - 1, 0)), st.integers(0, max(n - 1, 0))
                    ),
                    max_size=8,
                ),
            )
        )
    )
    @settings(max_examples=150, deadline=None)
    def test_closure_matches_oracle_or_cycle(self, case):
        n, covers = case
        if n == 0:
            covers = []
        oracle = closure_oracle(n, covers)
        cyclic = any(
            oracle[i][j] and oracle[j][i] for i in range(n) for j in range(n) if i != j
        )
        if cyclic:
            with pytest.raises(CycleDetected):
                build_poset(n, covers)
        else:
            P = build_poset(n, covers)
            for i in range(n):
                for j in range(n):
                    assert P.leq(i, j) == oracle[i][j]

    def test_order_axioms_on_generated_posets(self):
        for P in posets_up_to(5):
            for i in range(P.n):
                assert P.leq(i, i)
                for j in range(P.n):
                    if i != j and P.leq(i, j):
                        assert not P.leq(j, i)
                    for k in range(P.n):
                        if P.leq(i, j) and P.leq(j, k):
                            assert P.leq(i, k)


class TestDownsets:
    def test_closure_minimal_element(self):
        P = antichain(2)
        assert downset_closure(P, [0]).members == 0b01

    def test_closure_of_top_of_chain(self):
        P = chain(2)
        # least downset containing the top: brute force over all downsets
        best = min(
            m for m in downsets_oracle(P) if m >> 1 & 1
        )
        assert downset_closure(P, [1]).members == best == 0b11

    def test_closure_empty(self):
        assert downset_closure(chain(3), []).members == 0

    def test_closure_idempotent_monotone(self):
        for P in posets_up_to(4):
            for mask in range(1 << P.n):
                elems = [i for i in range(P.n) if mask >> i & 1]
                d = downset_closure(P, elems)
                assert downset_closure(P, d.elements()).members == d.members
                for extra in range(P.n):
                    bigger = downset_closure(P, elems + [extra])
                    assert d.members & ~bigger.members == 0

    def test_all_downsets_one_point(self):
        ds = all_downsets(build_poset(1, []))
        assert [d.members for d in ds] == [0, 1]

    def test_all_downsets_counts(self):
        assert len(all_downsets(antichain(2))) == 4
        assert [d.members for d in all_downsets(chain(2))] == [0b00, 0b01, 0b11]

    def test_all_downsets_against_subset_filter(self):
        for P in posets_up_to(5):
            assert [d.members for d in all_downsets(P)] == downsets_oracle(P)

    def test_cap(self):
        with pytest.raises(SizeLimitExceeded):
            all_downsets(antichain(8), max_count=100)

    def test_difference_examples(self):
        P = antichain(2)
        full = downset_closure(P, [0, 1])
        p = downset_closure(P, [0])
        q = downset_closure(P, [1])
        assert downset_difference(P, full, p).members == q.members
        assert (full - DownSet(P, 0)).members == full.members  # A - 0 = A
        C = chain(2)
        top = downset_closure(C, [1])
        bot = downset_closure(C, [0])
        # the maximal element survives and regenerates everything below
        assert downset_difference(C, top, bot).members == top.members

    def test_difference_is_closure_of_set_difference(self):
        for P in posets_up_to(4):
            ds = all_downsets(P)
            for A in ds:
                for B in ds:
                    direct = downset_difference(P, A, B)
                    oracle = downset_closure(
                        P, [i for i in range(P.n) if A.members >> i & 1 and not B.members >> i & 1]
                    )
                    assert direct.members == oracle.members

    def test_poset_mismatch(self):
        P, Q = chain(2), chain(3)
        with pytest.raises(PosetMismatch):
            downset_difference(P, DownSet(P, 1), DownSet(Q, 1))


class TestDownsetIdentities:
    """The simple-fact identities, checked on downsets of every poset up to size 5."""

    def test_identities_exhaustive(self):
        for P in posets_up_to(5):
            ds = all_downsets(P)

            def diff(a, b):
                return downset_difference(P, a, b).members

            empty = DownSet(P, 0)
            for A in ds:
                assert diff(empty, A) == 0  # 0 - a = 0
                assert diff(A, empty) == A.members  # a - 0 = a
            for A in ds:
                for B in ds:
                    amb = DownSet(P, diff(A, B))
                    assert amb.members | B.members == A.members | B.members
                    assert amb.members | A.members == A.members
                    rest = DownSet(P, diff(A, amb))
                    assert amb.members | rest.members == A.members
                    assert diff(A, rest) == amb.members  # a-(a-(a-b)) = a-b
                    assert (A.members & ~B.members == 0) == (diff(A, B) == 0)
            for A in ds:
                for B in ds:
                    for C in ds:
                        ab = DownSet(P, diff(A, B))
                        ac = DownSet(P, diff(A, C))
                        assert diff(ab, C) == diff(ac, B)  # (a-b)-c = (a-c)-b
                        # join distributes over difference on the left
                        assert diff(DownSet(P, A.members | B.members), C) == (
                            diff(A, C) | diff(B, C)
                        )
                        # subtracting a join is iterated subtraction
                        assert diff(A, DownSet(P, B.members | C.members)) == diff(
                            DownSet(P, diff(A, B)), C
                        )
                        # monotonicity
                        if B.members & ~C.members == 0:
                            assert diff(B, A) & ~diff(C, A) == 0
                            assert diff(A, C) & ~diff(A, B) == 0


class TestIsomorphism:
    def test_chain_vs_antichain(self):
        assert not is_isomorphic(chain(3), antichain(3))
        assert is_isomorphic(chain(3), chain(3))

    def test_relabeled(self):
        P = build_poset(3, [(0, 2), (1, 2)])
        Q = build_poset(3, [(2, 0), (1, 0)])
        iso = find_isomorphism(P, Q)
        assert iso is not None
        for i in range(3):
            for j in range(3):
                assert P.leq(i, j) == Q.leq(iso[i], iso[j])


class TestTextFormat:
    def test_round_trip(self):
        for P in posets_up_to(4):
            Q = poset_from_text(poset_to_text(P))
            assert Q.n == P.n and Q.up == P.up

    def test_comments_and_blank_lines(self):
        P = poset_from_text("# a vee\nposet 3\n\ncover 0 2  # left\ncover 1 2\n")
        assert P.leq(0, 2) and P.leq(1, 2) and not P.leq(0, 1)

    def test_errors(self):
        from fincbs.errors import FormatError

        with pytest.raises(FormatError):
            poset_from_text("cover 0 1\n")
        with pytest.raises(FormatError):
            poset_from_text("poset 2\nfoo 1\n")

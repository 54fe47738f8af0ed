from __future__ import annotations

import random

from clops.closure import closed_sets, from_table, operator_le, validate_closure
from clops.construct import Digraph, from_digraph, random_moore, undirected_cycle, uniform
from clops.ranks import (
    complemented_status,
    exchange_property,
    extends_to_basis,
    flats,
    flats_by_definition,
    inner_rank,
    is_outer_complemented,
    matroid_check,
    outer_rank,
    profile,
    span,
    span_operator,
    unsolvability_obstruction,
)
from clops.subsets import all_masks, card, full_mask, mask_of


def m(*vertices, n):
    return mask_of(vertices, n)


def hub_digraph_fixture():
    """Five-vertex digraph where the inner rank is not monotone."""
    return from_digraph(
        Digraph.from_arcs(5, [(1, 3), (2, 3), (3, 4), (4, 5), (5, 4), (4, 1), (4, 2)])
    )


def pentagon():
    return from_digraph(undirected_cycle(5))


def square():
    return from_digraph(undirected_cycle(4))


# -- independent brute-force oracles ---------------------------------------


def ork_oracle(op, X):
    return min(card(b) for b in all_masks(op.n) if X & ~op(b) == 0)


def irk_oracle(op, X):
    cX = op(X)
    return min(card(b) for b in all_masks(op.n) if op(b) == cX)


def lrk_oracle(op, X):
    V = full_mask(op.n)
    rest = V & ~X
    return min(card(Y) for Y in all_masks(op.n) if op(Y | rest) == V)


def test_rank_functions_match_bruteforce_definitions():
    rng = random.Random(5)
    ops = [uniform(2, 4), square(), pentagon(), hub_digraph_fixture()]
    ops += [random_moore(rng.randint(2, 5), rng.randrange(1 << 20)) for _ in range(25)]
    for op in ops:
        p = profile(op)
        r = op.rank
        for X in all_masks(op.n):
            assert p.ork(X) == ork_oracle(op, X)
            assert p.irk(X) == irk_oracle(op, X)
            assert p.lrk(X) == lrk_oracle(op, X)
            assert p.urk(X) == r - lrk_oracle(op, full_mask(op.n) & ~X)


def test_witnesses_actually_witness():
    op = pentagon()
    for X in all_masks(5):
        o_rank, o = outer_rank(op, X)
        i_rank, i = inner_rank(op, X)
        assert X & ~op(o) == 0 and card(o) == o_rank
        assert op(i) == op(X) and card(i) == i_rank


# -- named fixture values --------------------------------------------------


def test_hub_digraph_fixture_rank_values():
    op = hub_digraph_fixture()
    assert op(m(4, n=5)) == full_mask(5)
    assert op(m(1, 2, n=5)) == m(1, 2, 3, n=5)
    assert inner_rank(op, full_mask(5))[0] == 1
    assert inner_rank(op, m(1, 2, 3, n=5))[0] == 2


def test_inner_rank_not_monotone_on_fixture():
    op = hub_digraph_fixture()
    assert inner_rank(op, m(1, 2, 3, n=5))[0] > inner_rank(op, full_mask(5))[0]


def test_pentagon_pair_ranks():
    op = pentagon()
    p = profile(op)
    X = m(2, 3, n=5)
    assert p.ork(X) == 2
    assert p.urk(m(1, 2, n=5)) == 2 == p.ork(m(1, 2, n=5))


def test_square_is_not_outer_complemented_at_an_edge():
    op = square()
    p = profile(op)
    X = m(1, 2, n=4)
    assert (p.lrk(X), p.urk(X), p.ork(X)) == (1, 1, 2)
    assert complemented_status(op, X) == (False, False)


# -- ranks under closure and order -----------------------------------------


def test_rank_laws_on_random_operators():
    rng = random.Random(9)
    for _ in range(40):
        op = random_moore(rng.randint(2, 6), rng.randrange(1 << 20))
        p = profile(op)
        r = op.rank
        V = full_mask(op.n)
        assert p.ork(0) == p.irk(0) == p.lrk(0) == p.urk(0) == 0
        assert p.ork(V) == p.irk(V) == p.lrk(V) == p.urk(V) == r
        for X in all_masks(op.n):
            cX = op(X)
            assert p.ork(cX) == p.ork(X)
            assert p.irk(cX) == p.irk(X)
            assert p.urk(cX) == p.urk(X)
            assert 0 <= p.lrk(X) <= p.urk(X) <= p.ork(X) <= p.irk(X) <= card(X)
            assert (p.lrk(X) == 0) == (op(V & ~X) == V)
            assert (p.urk(X) == r) == (cX == V)
            for v in range(op.n):
                Y = X | (1 << v)
                assert p.ork(X) <= p.ork(Y)
                assert p.urk(X) <= p.urk(Y)
                assert p.lrk(X) <= p.lrk(Y)


def test_rank_subadditivity():
    rng = random.Random(10)
    for _ in range(10):
        op = random_moore(4, rng.randrange(1 << 20))
        p = profile(op)
        for X in all_masks(4):
            for Y in all_masks(4):
                assert p.ork(X | Y) <= p.ork(X) + p.ork(Y)
                assert p.irk(X | Y) <= p.irk(X) + p.irk(Y)


def test_urk_alternate_forms_agree():
    rng = random.Random(12)
    ops = [pentagon(), square(), uniform(2, 4)]
    ops += [random_moore(rng.randint(2, 5), rng.randrange(1 << 20)) for _ in range(15)]
    for op in ops:
        p = profile(op)
        for X in all_masks(op.n):
            assert p.urk(X) == p.urk_via_ork(X) == p.urk_via_flats(X)


def test_rank_order_antitone_under_operator_order():
    rng = random.Random(13)
    pairs = 0
    while pairs < 8:
        a = random_moore(4, rng.randrange(1 << 20))
        b = random_moore(4, rng.randrange(1 << 20))
        if not operator_le(a, b):
            continue
        pairs += 1
        pa, pb = profile(a), profile(b)
        for X in all_masks(4):
            assert pa.ork(X) >= pb.ork(X)
            assert pa.lrk(X) >= pb.lrk(X)


# -- flats and spans -------------------------------------------------------


def flats_oracle(op):
    """Directly from the definition: no strict superset of equal outer rank."""
    out = []
    for F in all_masks(op.n):
        oF = ork_oracle(op, F)
        if all(
            ork_oracle(op, X) != oF
            for X in all_masks(op.n)
            if X != F and F & ~X == 0
        ):
            out.append(F)
    return out


def test_flats_match_definition():
    rng = random.Random(14)
    ops = [from_table([(1 << X.bit_length()) - 1 for X in all_masks(3)])]
    ops += [random_moore(rng.randint(2, 5), rng.randrange(1 << 20)) for _ in range(10)]
    for op in ops:
        assert flats(op) == flats_oracle(op) == flats_by_definition(op)


def test_chain_has_exactly_two_flats():
    from clops.construct import chain

    assert flats(chain(3)) == [0, full_mask(3)]


def test_uniform_flats():
    fl = flats(uniform(2, 4))
    assert fl == sorted([0, 0b0001, 0b0010, 0b0100, 0b1000, full_mask(4)])


def test_flat_properties_on_random_operators():
    rng = random.Random(15)
    for _ in range(15):
        op = random_moore(rng.randint(2, 5), rng.randrange(1 << 20))
        p = profile(op)
        fl = flats(op)
        closed = set(closed_sets(op))
        rank_zero = [F for F in fl if p.ork(F) == 0]
        rank_r = [F for F in fl if p.ork(F) == op.rank]
        assert rank_zero == [op(0)]
        assert rank_r == [full_mask(op.n)]
        for F in fl:
            assert F in closed
            assert p.ork(F) == p.irk(F)
        for X in all_masks(op.n):
            assert any(X & ~F == 0 and p.ork(F) == p.ork(X) for F in fl)


def test_span_by_definition_and_under_closure():
    rng = random.Random(16)
    for _ in range(15):
        op = random_moore(rng.randint(2, 5), rng.randrange(1 << 20))
        p = profile(op)
        fl = flats(op)
        for X in all_masks(op.n):
            direct = 0
            for F in fl:
                if X & ~F == 0 and p.ork(F) == p.ork(X):
                    direct |= F
            assert span(op, X) == direct
            assert span(op, op(X)) == span(op, X)
            assert op(X) & ~span(op, X) == 0


def test_pentagon_span_values():
    op = pentagon()
    assert span(op, m(1, 2, n=5)) == m(1, 2, 3, 5, n=5)
    assert span(square(), m(1, 2, n=4)) == full_mask(4)
    assert span(square(), m(1, n=4)) == m(1, n=4)


# -- matroid characterizations ---------------------------------------------


def three_vertex_example():
    """cl(1)=12, cl(2)=2, cl(3)=3, cl(13)=cl(23)=123: inner complemented
    everywhere and solvable, but not a matroid."""
    table = [0] * 8
    table[0b001] = 0b011
    table[0b010] = 0b010
    table[0b100] = 0b100
    table[0b011] = 0b011
    table[0b101] = 0b111
    table[0b110] = 0b111
    table[0b111] = 0b111
    return from_table(table)


def test_three_vertex_example_is_valid_and_inner_complemented():
    op = three_vertex_example()
    assert validate_closure(op).valid
    for X in all_masks(3):
        assert complemented_status(op, X)[1]
    assert not matroid_check(op).is_matroid


def test_uniform_matroid_report_all_true():
    rep = matroid_check(uniform(2, 4))
    assert rep.exchange and rep.closed_eq_span and rep.closed_are_spans
    assert rep.upper_closed_eq_uspan and rep.upper_closed_are_uspans


def test_square_matroid_report_all_false():
    rep = matroid_check(square())
    assert not rep.exchange and not rep.closed_eq_span and not rep.closed_are_spans
    assert not rep.upper_closed_eq_uspan and not rep.upper_closed_are_uspans


def test_matroid_characterizations_agree_on_random_operators():
    rng = random.Random(18)
    for _ in range(60):
        op = random_moore(rng.randint(2, 5), rng.randrange(1 << 20))
        rep = matroid_check(op)
        assert rep.exchange == rep.closed_eq_span == rep.closed_are_spans
        assert rep.exchange == rep.upper_closed_eq_uspan == rep.upper_closed_are_uspans


def test_span_operator_of_square_is_threshold_two():
    res = span_operator(square())
    assert res.candidate_table == tuple(uniform(2, 4)(X) for X in all_masks(4))
    assert res.report.valid and res.is_matroid


def test_span_operator_of_pentagon_is_not_a_matroid():
    res = span_operator(pentagon())
    assert not res.is_matroid
    assert res.verdict == "unsolvable"


def test_span_operator_fixes_matroids():
    op = uniform(2, 4)
    res = span_operator(op)
    assert res.candidate_table == tuple(op(X) for X in all_masks(4))


# -- complemented sets and the obstruction ---------------------------------


def test_pentagon_outer_complemented_everywhere():
    op = pentagon()
    assert is_outer_complemented(op)
    for X in all_masks(5):
        assert complemented_status(op, X)[0]


def test_outer_complemented_characterizations_agree():
    rng = random.Random(19)
    ops = [pentagon(), square(), three_vertex_example()]
    ops += [random_moore(rng.randint(2, 5), rng.randrange(1 << 20)) for _ in range(15)]
    for op in ops:
        p = profile(op)
        r = op.rank
        V = full_mask(op.n)
        for X in all_masks(op.n):
            outer, inner = complemented_status(op, X)
            # disjoint Z with complementary outer rank and spanning union
            has_Z = any(
                not (X & Z)
                and p.ork(X) + p.ork(Z) == r
                and op(X | Z) == V
                for Z in all_masks(op.n)
            )
            assert outer == has_Z
            assert inner == (outer and p.irk(X) == p.ork(X))
            # complemented sets force every minimum basis to extend to a
            # basis of the whole ground set (the converse does not hold)
            if outer:
                for o in all_masks(op.n):
                    if card(o) == p.ork(X) and X & ~op(o) == 0:
                        assert extends_to_basis(op, o)
            if inner:
                for i in all_masks(op.n):
                    if card(i) == p.irk(X) and op(i) == op(X):
                        assert extends_to_basis(op, i)


def test_outer_rank_submodularity_fails_on_pentagon():
    op = pentagon()
    p = profile(op)
    X, Y = m(1, 2, 3, n=5), m(2, 3, 4, n=5)
    assert p.ork(X) + p.ork(Y) < p.ork(X | Y) + p.ork(X & Y)


def test_obstruction_on_pentagon_but_not_square():
    op = pentagon()
    witness = unsolvability_obstruction(op)
    assert witness is not None
    p = profile(op)
    S = span(op, witness)
    assert p.ork(witness) == p.urk(witness)
    assert p.ork(S) == p.urk(S)
    assert p.ork(S) > p.ork(witness)
    assert unsolvability_obstruction(square()) is None


def test_matroids_have_no_obstruction():
    for r, n in [(1, 3), (2, 4), (3, 4)]:
        assert unsolvability_obstruction(uniform(r, n)) is None


def test_exchange_witness_is_a_counterexample():
    ok, witness = exchange_property(square())
    assert not ok
    X, u, v = witness
    op = square()
    assert op(X | v) & u and not op(X) & u and not op(X | u) & v

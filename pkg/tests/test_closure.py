from __future__ import annotations

import pytest

from clops.closure import (
    ClosureOperator,
    closed_sets,
    closure_of,
    from_table,
    operator_le,
    rank_and_bases,
    validate_closure,
)
from clops.construct import chain, from_digraph, random_moore, undirected_cycle, uniform
from clops.subsets import all_masks, full_mask, mask_of


def m(*vertices, n=None):
    size = n if n is not None else (max(vertices) if vertices else 1)
    return mask_of(vertices, size)


# -- evaluation ------------------------------------------------------------


def test_uniform_closure_values():
    op = uniform(1, 3)
    assert closure_of(op, m(2, n=3)) == full_mask(3)
    assert closure_of(op, 0) == 0
    op2 = uniform(2, 4)
    assert op2(m(1, n=4)) == m(1, n=4)
    assert op2(m(1, 3, n=4)) == full_mask(4)


def test_mask_out_of_range_rejected():
    op = uniform(1, 3)
    with pytest.raises(ValueError):
        op(1 << 3)


def test_lazy_and_eager_tables_agree():
    table_op = random_moore(5, 99)
    lazy_op = ClosureOperator(5, fn=table_op)
    assert [table_op(X) for X in all_masks(5)] == [lazy_op(X) for X in all_masks(5)]


# -- validation ------------------------------------------------------------


def test_uniform_validates():
    assert validate_closure(uniform(2, 4)).valid


def test_chain_validates():
    assert validate_closure(chain(3)).valid


def test_extensivity_violation_witnessed():
    table = [0, 0b10, 0b10, 0b11]  # cl({1}) = {2}
    op = from_table(table)
    report = validate_closure(op)
    assert not report.valid
    assert any(v.axiom == "extensive" and v.witnesses == (0b01,) for v in report.violations)


def test_idempotency_violation_witnessed():
    # cl({1}) = {1,2} while cl({1,2}) = V, so cl(cl({1})) != cl({1})
    table = [0] * 8
    for X in all_masks(3):
        table[X] = X
    table[0b001] = 0b011
    table[0b011] = 0b111
    table[0b101] = 0b111
    report = validate_closure(from_table(table))
    assert not report.valid
    assert any(v.axiom == "idempotent" for v in report.violations)


def test_isotonicity_violation_witnessed():
    # cl({1}) = {1,2} but cl({1,3}) = {1,3} drops vertex 2
    table = [0] * 8
    for X in all_masks(3):
        table[X] = X
    table[0b001] = 0b011
    report = validate_closure(from_table(table))
    assert not report.valid
    assert any(v.axiom in ("isotone", "idempotent") for v in report.violations)


# -- rank and bases --------------------------------------------------------


def test_uniform_rank_and_bases():
    rank, bases = rank_and_bases(uniform(1, 3))
    assert rank == 1
    assert bases == [0b001, 0b010, 0b100]


def test_square_cycle_rank_two_with_antipodal_bases():
    op = from_digraph(undirected_cycle(4))
    rank, bases = rank_and_bases(op)
    assert rank == 2
    assert m(1, 3, n=4) in bases and m(2, 4, n=4) in bases


def test_identity_rank_is_n():
    assert uniform(3, 3).rank == 3


# -- closed sets -----------------------------------------------------------


def test_chain_closed_sets_count():
    cs = closed_sets(chain(3))
    assert cs == [0, 0b001, 0b011, 0b111]
    assert len(cs) == 4


def test_identity_all_sets_closed():
    assert closed_sets(uniform(4, 4)) == list(all_masks(4))


def test_uniform_1_3_closed_sets():
    assert closed_sets(uniform(1, 3)) == [0, full_mask(3)]


def test_closed_sets_contain_bottom_and_top():
    for seed in range(20):
        op = random_moore(4, seed)
        cs = closed_sets(op)
        assert op(0) in cs and full_mask(4) in cs


# -- partial order ---------------------------------------------------------


def test_operator_le_on_uniform_thresholds():
    assert operator_le(uniform(2, 4), uniform(1, 4))
    assert not operator_le(uniform(1, 4), uniform(2, 4))


def test_operator_le_antisymmetry_means_equality():
    a, b = random_moore(4, 1), random_moore(4, 2)
    both = operator_le(a, b) and operator_le(b, a)
    assert both == (a == b)


def test_more_arcs_close_less():
    from clops.construct import Digraph

    two_edges = Digraph.from_arcs(4, [(1, 2), (2, 1), (3, 4), (4, 3)])
    assert operator_le(from_digraph(undirected_cycle(4)), from_digraph(two_edges))


def test_rank_antitone_under_operator_order():
    for s1, s2 in [(3, 4), (10, 11), (20, 21), (7, 30)]:
        a, b = random_moore(4, s1), random_moore(4, s2)
        if operator_le(a, b):
            assert a.rank >= b.rank


# -- derivable closure laws ------------------------------------------------


def test_closure_of_union_law():
    for seed in range(15):
        op = random_moore(5, seed)
        for X in all_masks(5):
            for Y in range(X, 1 << 5):
                assert op(X | Y) == op(op(X) | op(Y))


def test_intersection_of_closed_sets_is_closed():
    for seed in range(20):
        op = random_moore(5, seed)
        cs = closed_sets(op)
        for i, C in enumerate(cs):
            for D in cs[i:]:
                assert op(C & D) == C & D

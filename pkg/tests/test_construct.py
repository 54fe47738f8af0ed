from __future__ import annotations

import random

import pytest
from fractions import Fraction

from clops.closure import operator_le, validate_closure
from clops.construct import (
    Digraph,
    chain,
    complete_digraph,
    density_tree,
    digraph_closure_bruteforce,
    directed_cycle,
    from_digraph,
    loops_everywhere,
    random_moore,
    uniform,
    union_combine,
)
from clops.ranks import profile
from clops.subsets import all_masks, card, full_mask, mask_of


# -- uniform and chain -----------------------------------------------------


def test_uniform_threshold_zero_closes_everything():
    assert uniform(0, 3)(0) == full_mask(3)


def test_uniform_identity_at_full_rank():
    op = uniform(4, 4)
    assert all(op(X) == X for X in all_masks(4))


def test_uniform_rejects_bad_rank():
    with pytest.raises(ValueError):
        uniform(5, 4)


def test_chain_closes_prefixes():
    op = chain(3)
    assert op(0b010) == 0b011  # {2} -> {1,2}
    assert op(0b100) == 0b111  # {3} -> V
    assert op(0) == 0
    assert op.rank == 1


# -- digraph closures ------------------------------------------------------


def test_directed_cycle_gives_threshold_one():
    for n in (3, 4, 5):
        assert from_digraph(directed_cycle(n)) == uniform(1, n)


def test_complete_digraph_gives_threshold_n_minus_one():
    for n in (3, 4, 5):
        assert from_digraph(complete_digraph(n)) == uniform(n - 1, n)


def test_loops_freeze_everything():
    for n in (3, 4, 5):
        assert from_digraph(loops_everywhere(n)) == uniform(n, n)


def test_acyclic_digraph_closes_to_everything():
    d = Digraph.from_arcs(4, [(1, 2), (2, 3), (3, 4)])
    assert from_digraph(d) == uniform(0, 4)


def test_fixpoint_matches_bruteforce_maximizer():
    rng = random.Random(7)
    for _ in range(30):
        n = rng.randint(2, 5)
        arcs = {
            (u, v)
            for u in range(1, n + 1)
            for v in range(1, n + 1)
            if rng.random() < 0.4
        }
        d = Digraph.from_arcs(n, arcs)
        op = from_digraph(d)
        for X in all_masks(n):
            assert op(X) == digraph_closure_bruteforce(d, X)


def test_adding_an_arc_never_grows_the_closure():
    rng = random.Random(11)
    for _ in range(20):
        n = rng.randint(2, 5)
        arcs = {
            (u, v)
            for u in range(1, n + 1)
            for v in range(1, n + 1)
            if rng.random() < 0.3
        }
        missing = [
            (u, v)
            for u in range(1, n + 1)
            for v in range(1, n + 1)
            if (u, v) not in arcs
        ]
        if not missing:
            continue
        extra = rng.choice(missing)
        before = from_digraph(Digraph.from_arcs(n, arcs))
        after = from_digraph(Digraph.from_arcs(n, arcs | {extra}))
        assert operator_le(after, before)


def test_duplicate_arcs_rejected():
    with pytest.raises(ValueError):
        Digraph.from_arcs(2, [(1, 2), (1, 2)])


# -- unions ----------------------------------------------------------------


def test_disjoint_union_rank_is_additive():
    u = union_combine(uniform(1, 2), uniform(1, 2), "disjoint")
    assert u.rank == 2


def test_bidirectional_union_rank_formula():
    u = union_combine(uniform(1, 2), uniform(1, 2), "bidirectional")
    assert u.rank == 3  # min{n1 + r2, n2 + r1}


def test_unidirectional_union_keeps_second_side_frozen():
    op1, op2 = uniform(2, 3), uniform(1, 2)
    u = union_combine(op1, op2, "unidirectional")
    X = mask_of([1, 4], 5)  # {1} does not span side 1
    assert u(X) == op1(0b001) | mask_of([4], 5)


def test_union_outputs_validate():
    rng = random.Random(3)
    for kind in ("disjoint", "unidirectional", "bidirectional"):
        for _ in range(5):
            op1 = random_moore(rng.randint(1, 3), rng.randrange(1 << 16))
            op2 = random_moore(rng.randint(1, 3), rng.randrange(1 << 16))
            assert validate_closure(union_combine(op1, op2, kind)).valid


def test_union_rejects_unknown_kind():
    with pytest.raises(ValueError):
        union_combine(uniform(1, 2), uniform(1, 2), "sideways")


def test_union_rank_function_formulas():
    """The four rank functions of each union against their closed forms."""
    rng = random.Random(17)
    for _ in range(12):
        n1, n2 = rng.randint(2, 4), rng.randint(2, 4)
        op1 = random_moore(n1, rng.randrange(1 << 20))
        op2 = random_moore(n2, rng.randrange(1 << 20))
        p1, p2 = profile(op1), profile(op2)
        r1, r2 = op1.rank, op2.rank
        V1, V2 = full_mask(n1), full_mask(n2)
        for kind in ("disjoint", "unidirectional", "bidirectional"):
            u = union_combine(op1, op2, kind)
            pu = profile(u)
            for X in all_masks(n1 + n2):
                X1, X2 = X & V1, X >> n1
                if kind == "disjoint":
                    assert pu.ork(X) == p1.ork(X1) + p2.ork(X2)
                    assert pu.irk(X) == p1.irk(X1) + p2.irk(X2)
                    assert pu.urk(X) == p1.urk(X1) + p2.urk(X2)
                    assert pu.lrk(X) == p1.lrk(X1) + p2.lrk(X2)
                elif kind == "unidirectional":
                    assert pu.ork(X) == min(r1 + p2.ork(X2), p1.ork(X1) + card(X2))
                    # the min of the two branches undershoots when side 1
                    # does not span: equality of closures forces the branch
                    if op1(X1) == V1:
                        assert pu.irk(X) == r1 + p2.irk(X2)
                    else:
                        assert pu.irk(X) == p1.irk(X1) + card(X2)
                    assert pu.urk(X) == p1.urk(X1) + p2.urk(X2)
                    assert pu.lrk(X) == p1.lrk(X1) + p2.lrk(X2)
                else:
                    ru = min(n1 + r2, n2 + r1)
                    assert pu.ork(X) == min(
                        n1 + p2.ork(X2), n2 + p1.ork(X1), card(X)
                    )
                    if u(X) == full_mask(n1 + n2):
                        assert pu.irk(X) == ru
                    elif X1 == V1:
                        assert pu.irk(X) == n1 + p2.irk(X2)
                    elif X2 == V2:
                        assert pu.irk(X) == n2 + p1.irk(X1)
                    else:
                        assert pu.irk(X) == card(X)
                    assert pu.urk(X) == ru - min(
                        n1 - card(X1) + r2 - p2.urk(X2),
                        n2 - card(X2) + r1 - p1.urk(X1),
                    )
                    assert pu.lrk(X) == min(
                        card(X1) + p2.lrk(X2), card(X2) + p1.lrk(X1)
                    )


# -- random Moore families -------------------------------------------------


def test_random_moore_is_deterministic_and_valid():
    for seed in range(200):
        op = random_moore(4, seed)
        assert op == random_moore(4, seed)
        assert validate_closure(op).valid


# -- density trees ---------------------------------------------------------


def test_density_tree_three_halves_shape():
    op, spec = density_tree(2, Fraction(3, 2))
    assert spec.D == 2 and spec.N == (1, 2)
    assert op.n == 4 and op.rank == 2
    assert validate_closure(op).valid
    # tree 1 is a root with two leaves; tree 2 a lone vertex
    root = spec.roots[0]
    leaves = spec.children(root)
    assert len(leaves) == 2
    u, u2 = leaves
    assert op(1 << (u - 1)) == (1 << (u - 1)) | (1 << (root - 1))
    assert op((1 << (u - 1)) | (1 << (u2 - 1))) == full_mask(4)


def test_density_tree_level_sizes():
    op, spec = density_tree(2, Fraction(7, 4))
    for t in range(1, spec.r + 1):
        C, L = spec.C[t - 1], spec.L[t - 1]
        per_level = {}
        for nd in spec.nodes:
            if nd.tree == t:
                per_level[nd.level] = per_level.get(nd.level, 0) + 1
        for k in range(L + 1):
            expected = 1
            for j in range(k):
                expected *= C - j
            assert per_level.get(k, 0) == expected


def test_density_tree_rank_r_shortcut():
    op, spec = density_tree(3, Fraction(3))
    assert spec.degenerate
    assert op == uniform(3, 3)


def test_density_tree_rejects_out_of_range_targets():
    with pytest.raises(ValueError):
        density_tree(2, Fraction(1))
    with pytest.raises(ValueError):
        density_tree(2, Fraction(5, 2))

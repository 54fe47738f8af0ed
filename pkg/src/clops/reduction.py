"""Reduction of arbitrary set operators to equivalent closure operators.

A set operator is any total map 2^V -> 2^V, with no axioms assumed. Two
operators are equivalent when they admit exactly the same coding-function
tuples. Every set operator reduces to a closure operator with the same
coding functions in three equivalence-preserving steps: merge the weakly
connected components of the functional graph Y -> a(Y), close downward over
subsets, then iterate to a fixpoint.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .closure import ClosureOperator, validate_closure
from .partitions import BudgetExceeded, Partition, canonical_partitions
from .subsets import all_masks, check_mask, singletons

REDUCTION_MAX_N = 10
ENUMERATION_BUDGET = 200_000


@dataclass(frozen=True)
class SetOperator:
    """A total map 2^V -> 2^V with no axioms assumed."""

    n: int
    table: tuple[int, ...]
    label: str = ""

    def __post_init__(self):
        if len(self.table) != 1 << self.n:
            raise ValueError(f"table must have 2^{self.n} entries")
        for img in self.table:
            check_mask(img, self.n)

    def __call__(self, X: int) -> int:
        return self.table[check_mask(X, self.n)]

    @classmethod
    def from_closure(cls, op: ClosureOperator) -> "SetOperator":
        return cls(op.n, tuple(op.table()), op.label)


@dataclass(frozen=True)
class ReductionTrace:
    components: tuple[tuple[int, ...], ...]  # functional-graph components
    b_table: tuple[int, ...]
    c_table: tuple[int, ...]
    iterations: int  # fixpoint iterations of c, always <= n
    extensivity_patch_used: bool  # whether b needed the "union X" correction


def _components(a: SetOperator) -> list[int]:
    """Weakly connected components of Y -> a(Y); returns a root per mask."""
    parent = list(range(1 << a.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for Y in all_masks(a.n):
        ra, rb = find(Y), find(a(Y))
        if ra != rb:
            parent[ra] = rb
    return [find(Y) for Y in all_masks(a.n)]


def reduce_to_closure(a: SetOperator) -> tuple[ClosureOperator, ReductionTrace]:
    """Equivalent closure operator via component merge, downward closure,
    and fixpoint iteration; the trace exposes every intermediate table."""
    if a.n > REDUCTION_MAX_N:
        raise ValueError(f"reduction is capped at n <= {REDUCTION_MAX_N}")
    n = a.n
    root = _components(a)
    members: dict[int, list[int]] = {}
    for Y in all_masks(n):
        members.setdefault(root[Y], []).append(Y)

    # the constraints of a force f to be constant on each component, which
    # is exactly what f_{b(X)} = f_X says when b(X) is the union of the
    # whole component: f of a union of masks is the join of their f values.
    # Folding the members in (not only the images) also keeps b extensive,
    # which the image union alone is not (e.g. n=1 with a == const {})
    patched = False
    b = []
    for X in all_masks(n):
        img = 0
        for Y in members[root[X]]:
            img |= a(Y)
        full = img
        for Y in members[root[X]]:
            full |= Y
        if full != img:
            patched = True
        b.append(full)

    # c(X) = b(X) with all images of subsets folded in; one vertex at a
    # time suffices since every Y < X is reached by removing vertices
    c = list(b)
    for X in all_masks(n):
        for v in singletons(n):
            if X & v:
                c[X] |= c[X & ~v]

    table = list(c)
    iterations = 0
    for _ in range(n):
        nxt = [table[table[X]] for X in all_masks(n)]
        iterations += 1
        if nxt == table:
            break
        table = nxt
    else:
        nxt = [table[table[X]] for X in all_masks(n)]
        if nxt != table:
            raise AssertionError("fixpoint not reached within n iterations")

    op = ClosureOperator(n, table=table, label=f"reduced({a.label})" if a.label else "reduced")
    report = validate_closure(op)
    if not report.valid:
        raise AssertionError(f"reduction produced an invalid operator: {report.violations}")
    trace = ReductionTrace(
        components=tuple(tuple(members[r]) for r in sorted(members)),
        b_table=tuple(b),
        c_table=tuple(c),
        iterations=iterations,
        extensivity_patch_used=patched,
    )
    return op, trace


def enumerate_coding_functions(
    a: SetOperator, q: int, m: int, budget: int = ENUMERATION_BUDGET
) -> list[tuple[Partition, ...]]:
    """All tuples of n partitions of an m-element carrier with at most q
    parts satisfying f_{a(X)} = f_X for every subset X, in canonical order.

    f_X is the common refinement of the coordinates in X, and f on the
    empty set is the universal partition."""
    n = a.n
    parts = list(canonical_partitions(m, max_parts=q))
    if len(parts) ** n > budget:
        raise BudgetExceeded(
            f"{len(parts)}^{n} candidate tuples exceed the budget {budget}"
        )
    out = []
    for tup in product(parts, repeat=n):
        joined = [Partition.universal(m)] * (1 << n)
        for X in all_masks(n):
            if X:
                low = X & -X
                joined[X] = joined[X & ~low].join(tup[low.bit_length() - 1])
        if all(joined[a(X)] == joined[X] for X in all_masks(n)):
            out.append(tup)
    return out


def operators_equivalent(
    a: SetOperator, a2: SetOperator, q: int, m: int, budget: int = ENUMERATION_BUDGET
) -> bool:
    """Whether both operators admit the same coding functions at one (q, m);
    agreement at a single carrier is a witness, not a proof, of equivalence."""
    if a.n != a2.n:
        raise ValueError("operators must share a ground set")
    return set(enumerate_coding_functions(a, q, m, budget)) == set(
        enumerate_coding_functions(a2, q, m, budget)
    )

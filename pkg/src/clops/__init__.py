"""Exact combinatorics of closure operators on small finite ground sets.

Closure operators, rank functions, matroid checks, coding functions over
partitions, exact rational Shannon-entropy LPs, and reduction of arbitrary
set operators to equivalent closure operators.
"""

from .closure import (
    ClosureOperator,
    GroundSetTooLarge,
    ValidationReport,
    Violation,
    closed_sets,
    closure_of,
    from_table,
    operator_le,
    rank_and_bases,
    validate_closure,
)
from .construct import (
    Digraph,
    TreeSpec,
    chain,
    density_tree,
    from_digraph,
    random_moore,
    undirected_cycle,
    uniform,
    union_combine,
)
from .partitions import (
    BudgetExceeded,
    CodingFunction,
    Partition,
    canonical_partitions,
    coding_rank_bounds,
    coding_validate,
    density_coding,
    entropy_of,
    induced_closure,
    is_solution,
    join_partitions,
    partition_entropy,
    solve_exhaustive,
    square_cycle_crossed_assignment,
    square_cycle_solution,
)
from .ranks import (
    MatroidReport,
    RankProfile,
    complemented_status,
    flats,
    inner_rank,
    lower_upper_rank,
    matroid_check,
    outer_rank,
    profile,
    span,
    span_operator,
    unsolvability_obstruction,
    upper_span,
)
from .reduction import (
    ReductionTrace,
    SetOperator,
    enumerate_coding_functions,
    operators_equivalent,
    reduce_to_closure,
)
from .shannon import ShannonResult, shannon_entropy, split_shannon, verify_shannon_function

__all__ = [name for name in dir() if not name.startswith("_")]

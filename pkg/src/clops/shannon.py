"""Shannon entropy of a closure operator by exact linear programming.

A Shannon function is a polymatroid rank function (bounded by cardinality,
monotone, submodular) that is blind to closures: r(X) = r(cl(X)). Its maximum
value at V, the Shannon entropy, upper-bounds the entropy of every coding
function. Reduced mode keeps one LP variable per closed set; full mode keeps
one per subset with the axioms written out verbatim, as a cross-check of the
reduction.

Violated submodular rows are generated lazily: solve, scan for violations on
the optimum, add them and resolve. The row set is finite, so this terminates
with the exact optimum of the complete LP.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .closure import ClosureOperator, GroundSetTooLarge, ValidationReport, Violation
from .lp import IncrementalLP, certified_max
from .subsets import all_masks, card, full_mask, singletons

REDUCED_CLOSED_SET_CAP = 4096
FULL_MODE_MAX_N = 8


@dataclass(frozen=True)
class ShannonResult:
    value: Fraction
    witness: dict[int, Fraction]  # closed set -> optimal value

    def witness_on_all_subsets(self, op: ClosureOperator) -> dict[int, Fraction]:
        return {X: self.witness[op(X)] for X in all_masks(op.n)}


def _covering_pairs(op: ClosureOperator, closed: list[int]) -> list[tuple[int, int]]:
    """Covering pairs (C, D) of the closed-set lattice, C covered by D.

    Every closed superset of C contains cl(C + v) for one of its vertices v,
    so the covers of C are the minimal elements of {cl(C + v) : v outside C}."""
    pairs = []
    for C in closed:
        ups = {op(C | v) for v in singletons(op.n) if not C & v}
        for D in ups:
            if not any(E != D and E & ~D == 0 for E in ups):
                pairs.append((C, D))
    return pairs


_ROWS_PER_PASS = 40


def _solve_with_row_generation(num_vars, objective_index, rows, rhs, lazy_rows):
    """Solve, then add rows the current optimum violates, until none are.

    ``lazy_rows()`` yields (coeff dict, rhs) candidates; only the most
    violated few are added per pass and rows that went slack are dropped,
    which keeps the tableau close to the binding set. The tableau warm
    starts across passes: added rows leave the basis dual feasible, so a
    few dual pivots reoptimize. The candidate set is finite and the loop
    only stops on a fully feasible optimum, so the result is the exact
    optimum of the complete LP."""
    lp = IncrementalLP(num_vars, objective_index)
    lp.add_rows([({j: a for j, a in enumerate(row) if a}, bound) for row, bound in zip(rows, rhs)])
    passes = 0
    while True:
        value, x = lp.solve()
        violated = []
        for coeffs, bound in lazy_rows():
            excess = sum(a * x[j] for j, a in coeffs.items()) - bound
            if excess > 0:
                violated.append((excess, coeffs, bound))
        if not violated:
            return value, x
        passes += 1
        if passes <= 100:  # afterwards rows only accumulate, forcing termination
            lp.drop_slack_rows()
        batch = violated if len(violated) <= _ROWS_PER_PASS else sorted(
            violated, key=lambda t: t[0], reverse=True
        )[:_ROWS_PER_PASS]
        lp.add_rows([(coeffs, bound) for _, coeffs, bound in batch], removable=True)


def shannon_entropy(op: ClosureOperator, mode: str = "reduced") -> ShannonResult:
    if mode == "reduced":
        return _shannon_reduced(op)
    if mode == "full":
        return _shannon_full(op)
    raise ValueError(f"unknown mode {mode!r}")


def _reduced_rows(op: ClosureOperator) -> tuple[list[int], dict[int, int], list[tuple[dict[int, int], int]]]:
    """The reduced LP row set: (closed sets, index, rows as (coeffs, bound)).

    Submodularity is imposed through the elemental inequalities of the
    closure-blind extension r(X) = x_{cl(X)}, which imply the submodular
    rows for every pair of subsets, closed pairs included; conversely the
    closed-pair rows imply the elemental ones, so the feasible region is
    the same while the row count drops from quadratic in the number of
    closed sets to n^2 2^(n-2) before deduplication."""
    from .ranks import profile

    closed = op.closed_sets()
    index = {C: j for j, C in enumerate(closed)}
    p = profile(op)
    V = full_mask(op.n)
    bottom = op(0)

    rows: list[tuple[dict[int, int], int]] = []
    # 0 <= r at the bottom closed set (the rest follows from monotone rows)
    rows.append(({index[bottom]: -1}, 0))
    # cardinality bound collapses to r(C) <= irk(C) on closed sets
    for C in closed:
        rows.append(({index[C]: 1}, p.irk(C)))
    # monotone rows on covering pairs of the closed-set lattice
    for C, D in _covering_pairs(op, closed):
        rows.append(({index[C]: 1, index[D]: -1}, 0))
    # elemental rows r(X+u) + r(X+v) >= r(X+u+v) + r(X), pushed through cl
    seen = set()
    for X in all_masks(op.n):
        base = op(X)
        rest = [v for v in singletons(op.n) if not X & v]
        for a in range(len(rest)):
            for b in range(a + 1, len(rest)):
                u, v = rest[a], rest[b]
                coeffs: dict[int, int] = {}
                for S, w in (
                    (op(X | u | v), 1),
                    (base, 1),
                    (op(X | u), -1),
                    (op(X | v), -1),
                ):
                    j = index[S]
                    coeffs[j] = coeffs.get(j, 0) + w
                coeffs = {j: w for j, w in coeffs.items() if w}
                if not coeffs:
                    continue
                key = tuple(sorted(coeffs.items()))
                if key not in seen:
                    seen.add(key)
                    rows.append((coeffs, 0))
    return closed, index, rows


def _shannon_reduced(op: ClosureOperator) -> ShannonResult:
    closed, index, rows = _reduced_rows(op)
    if len(closed) > REDUCED_CLOSED_SET_CAP:
        raise GroundSetTooLarge(
            f"{len(closed)} closed sets exceed the reduced-mode cap {REDUCED_CLOSED_SET_CAP}"
        )
    k = len(closed)
    V = full_mask(op.n)

    cert = certified_max(k, index[V], rows)
    if cert is not None:
        value, x = cert
        return ShannonResult(value, {C: x[index[C]] for C in closed})

    # Solve through the dual: min b.y subject to A^T y >= e_V, y >= 0. The
    # tableau then has one row per closed set instead of one per LP row,
    # the slack basis is dual feasible from the start (b >= 0), and the
    # optimal primal point is read off the cost row exactly.
    by_var: list[dict[int, int]] = [{} for _ in range(k)]
    for t, (coeffs, _) in enumerate(rows):
        for j, w in coeffs.items():
            by_var[j][t] = -w
    lp = IncrementalLP(len(rows), {t: -bound for t, (_, bound) in enumerate(rows) if bound})
    lp.add_rows([(by_var[j], -1 if j == index[V] else 0) for j in range(k)])
    value, _y = lp.solve()
    x = lp.duals()
    return ShannonResult(-value, {C: x[index[C]] for C in closed})


def _shannon_full(op: ClosureOperator) -> ShannonResult:
    if op.n > FULL_MODE_MAX_N:
        raise GroundSetTooLarge(f"full mode is capped at n <= {FULL_MODE_MAX_N}")
    n = op.n
    N = 1 << n
    V = full_mask(n)

    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []

    def add_row(coeffs: dict[int, int], bound: int):
        row = [Fraction(0)] * N
        for j, a in coeffs.items():
            row[j] = row[j] + Fraction(a)
        rows.append(row)
        rhs.append(Fraction(bound))

    # closure equalities and the bound at V keep the first solve small; the
    # remaining axiom rows are generated only when an optimum violates them
    add_row({V: 1}, n)
    for X in all_masks(n):
        cX = op(X)
        if cX != X:
            add_row({X: 1, cX: -1}, 0)
            add_row({cX: 1, X: -1}, 0)

    def lazy_rows():
        for X in all_masks(n):
            yield {X: 1}, card(X)  # r(X) <= |X|; r >= 0 is the solver's x >= 0
            for v in singletons(n):
                if not X & v:
                    yield {X: 1, X | v: -1}, 0  # monotone on covering pairs
        for X in all_masks(n):
            for Y in range(X + 1, N):
                if X & ~Y == 0 or Y & ~X == 0:
                    continue
                coeffs: dict[int, int] = {}
                for j, a in ((X | Y, 1), (X & Y, 1), (X, -1), (Y, -1)):
                    coeffs[j] = coeffs.get(j, 0) + a
                yield coeffs, 0

    value, x = _solve_with_row_generation(N, V, rows, rhs, lazy_rows)
    witness = {C: x[C] for C in op.closed_sets()}
    return ShannonResult(value, witness)


# -- verification and the split construction -------------------------------


def extend_to_all_subsets(op: ClosureOperator, values: dict[int, Fraction]) -> dict[int, Fraction]:
    """Extend values given on closed sets to every subset by r(X) := r(cl(X))."""
    return {X: values[op(X)] for X in all_masks(op.n)}


def verify_shannon_function(op: ClosureOperator, values: dict[int, Fraction]) -> ValidationReport:
    """Check the four polymatroid-with-closure axioms exhaustively."""
    if op.n > FULL_MODE_MAX_N:
        raise GroundSetTooLarge(f"verification sweeps 4^{op.n} pairs")
    n = op.n
    r = extend_to_all_subsets(op, values) if len(values) < (1 << n) else values
    violations: list[Violation] = []

    def flag(axiom: str, *witnesses: int) -> None:
        violations.append(Violation(axiom, witnesses))

    for X in all_masks(n):
        if not 0 <= r[X] <= card(X):
            flag("bounded", X)
        for v in singletons(n):
            if not X & v and r[X] > r[X | v]:
                flag("monotone", X, X | v)
        if r[X] != r[op(X)]:
            flag("closure-blind", X)
    for X in all_masks(n):
        for Y in range(X + 1, 1 << n):
            if r[X] + r[Y] < r[X | Y] + r[X & Y]:
                flag("submodular", X, Y)
    return ValidationReport(not violations, tuple(violations))


def split_shannon(
    op: ClosureOperator, values: dict[int, Fraction], V1: int
) -> dict[int, Fraction]:
    """Additive rebalancing across a split V1 / V\\V1:
    r'(X) = r(X & V1) + r(X | V1) - r(V1); preserves r(V) and makes r'
    additive across the two sides. The result must still satisfy the axioms
    (the caller guarantees the union sandwich on the underlying operator)."""
    n = op.n
    V = full_mask(n)
    r = extend_to_all_subsets(op, values) if len(values) < (1 << n) else values
    out = {X: r[X & V1] + r[X | V1] - r[V1] for X in all_masks(n)}
    V2 = V & ~V1
    for X in all_masks(n):
        if out[X] != out[X & V1] + out[X & V2]:
            raise ValueError(f"split is not additive at {X:#x}")
    if out[V] != r[V]:
        raise ValueError("split changed the total value")
    report = verify_shannon_function(op, out)
    if not report.valid:
        raise ValueError(f"split violates the axioms: {report.violations[0].describe()}")
    return out

"""Closure operators on {1..n}: evaluation, axiom validation, rank, closed sets.

An operator is extensive (X subset of cl(X)), isotone (X subset of Y implies
cl(X) subset of cl(Y)) and idempotent (cl(cl(X)) = cl(X)). Tables are
materialized eagerly for small n and memoized lazily above that; both are
observationally identical.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Callable

from .subsets import (
    DEFAULT_SWEEP_LIMIT,
    MAX_GROUND_SET,
    all_masks,
    card,
    check_mask,
    format_set,
    full_mask,
    masks_by_cardinality,
    singletons,
)

EAGER_TABLE_LIMIT = 16

# Lazy operators may exceed the tabulation cap (the density construction can
# produce ground sets well past it); exhaustive sweeps still refuse them.
LAZY_GROUND_SET_LIMIT = 64


class GroundSetTooLarge(ValueError):
    """An operation would sweep more subsets than its cap allows."""


@dataclass(frozen=True)
class Violation:
    axiom: str  # extensive | isotone | idempotent
    witnesses: tuple[int, ...]

    def describe(self) -> str:
        sets = ", ".join(format_set(w) for w in self.witnesses)
        return f"{self.axiom} fails at {sets}"


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    violations: tuple[Violation, ...] = ()

    def __post_init__(self):
        assert self.valid == (not self.violations)


class ClosureOperator:
    """Total map 2^V -> 2^V given by a table or a lazy evaluator."""

    def __init__(
        self,
        n: int,
        fn: Callable[[int], int] | None = None,
        table: list[int] | None = None,
        label: str = "",
    ):
        if n < 1:
            raise ValueError("ground set must be nonempty")
        if table is not None:
            if len(table) != 1 << n:
                raise ValueError("closure table must have exactly 2^n entries")
            if n > MAX_GROUND_SET:
                raise GroundSetTooLarge(f"tables support n <= {MAX_GROUND_SET}, got {n}")
            self._table: list[int] | None = list(table)
            self._fn = None
        elif fn is not None:
            if n > LAZY_GROUND_SET_LIMIT:
                raise GroundSetTooLarge(f"n = {n} exceeds the lazy cap {LAZY_GROUND_SET_LIMIT}")
            self._fn = fn
            if n <= EAGER_TABLE_LIMIT:
                self._table = [fn(m) for m in all_masks(n)]
            else:
                self._table = None
                self._memo: dict[int, int] = {}
                self._lock = threading.Lock()
        else:
            raise ValueError("need a table or an evaluator")
        self.n = n
        self.label = label
        self._rank_bases: tuple[int, list[int]] | None = None

    def __call__(self, mask: int) -> int:
        check_mask(mask, self.n)
        if self._table is not None:
            return self._table[mask]
        with self._lock:
            hit = self._memo.get(mask)
        if hit is not None:
            return hit
        value = self._fn(mask)
        with self._lock:
            self._memo[mask] = value
        return value

    @property
    def tabulated(self) -> bool:
        return self._table is not None

    def table(self) -> list[int]:
        if self._table is None:
            raise GroundSetTooLarge(f"n = {self.n}: table would need 2^{self.n} entries")
        return list(self._table)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ClosureOperator):
            return NotImplemented
        return self.n == other.n and self.table() == other.table()

    def __hash__(self):
        return hash((self.n, tuple(self.table())))

    def __repr__(self):
        tag = self.label or "closure"
        return f"<{tag} n={self.n}>"

    # -- derived data ------------------------------------------------------

    def rank_and_bases(self) -> tuple[int, list[int]]:
        """Minimum size of a spanning set, and all spanning sets of that size.

        Cardinality-ascending sweep; bases come back sorted by mask value.
        """
        if self._rank_bases is None:
            V = full_mask(self.n)
            rank, bases = self.n, []
            for b in masks_by_cardinality(self.n):
                if card(b) > rank:
                    break
                if self(b) == V:
                    rank = card(b)
                    bases.append(b)
            self._rank_bases = (rank, bases)
        return self._rank_bases[0], list(self._rank_bases[1])

    @property
    def rank(self) -> int:
        return self.rank_and_bases()[0]

    def closed_sets(self) -> list[int]:
        self._require_tabulable("closed_sets")
        return [m for m in all_masks(self.n) if self(m) == m]

    def _require_tabulable(self, what: str):
        if self._table is None:
            raise GroundSetTooLarge(f"{what} sweeps 2^{self.n} subsets")


def closure_of(op: ClosureOperator, mask: int) -> int:
    return op(mask)


def rank_and_bases(op: ClosureOperator) -> tuple[int, list[int]]:
    return op.rank_and_bases()


def closed_sets(op: ClosureOperator) -> list[int]:
    return op.closed_sets()


def validate_closure(
    op: ClosureOperator,
    all_witnesses: bool = False,
    pairwise_isotone: bool = False,
    sweep_limit: int = DEFAULT_SWEEP_LIMIT,
) -> ValidationReport:
    """Check the three closure axioms over every subset.

    Isotonicity uses the single-vertex test cl(X) subset of cl(X+v), which is
    equivalent to the pairwise definition by induction on |Y\\X|; pass
    ``pairwise_isotone`` for the O(4^n) debug sweep.
    """
    n = op.n
    if n > EAGER_TABLE_LIMIT:
        raise GroundSetTooLarge(f"validation sweeps 2^{n} subsets (n = {n})")
    if pairwise_isotone and n > sweep_limit:
        raise GroundSetTooLarge(f"pairwise isotonicity is 4^n; n = {n} > {sweep_limit}")

    violations: list[Violation] = []

    def report(axiom: str, *witnesses: int) -> bool:
        violations.append(Violation(axiom, witnesses))
        return not all_witnesses

    for X in all_masks(n):
        cX = op(X)
        if X & ~cX:
            if report("extensive", X):
                return ValidationReport(False, tuple(violations))
    for X in all_masks(n):
        cX = op(X)
        for v in singletons(n):
            if cX & ~op(X | v):
                if report("isotone", X, X | v):
                    return ValidationReport(False, tuple(violations))
    if pairwise_isotone:
        for X in all_masks(n):
            cX = op(X)
            for Y in all_masks(n):
                if X & ~Y:
                    continue
                if cX & ~op(Y):
                    if report("isotone", X, Y):
                        return ValidationReport(False, tuple(violations))
    for X in all_masks(n):
        cX = op(X)
        if op(cX) != cX:
            if report("idempotent", X):
                return ValidationReport(False, tuple(violations))
    return ValidationReport(not violations, tuple(violations))


def operator_le(op1: ClosureOperator, op2: ClosureOperator) -> bool:
    """Pointwise order: cl_1(X) subset of cl_2(X) for every X."""
    if op1.n != op2.n:
        raise ValueError(f"ground sets differ: {op1.n} vs {op2.n}")
    op1._require_tabulable("operator_le")
    return all(op1(X) & ~op2(X) == 0 for X in all_masks(op1.n))


def from_table(table: list[int], label: str = "") -> ClosureOperator:
    n = (len(table) - 1).bit_length()
    if len(table) != 1 << n:
        raise ValueError("table length must be a power of two")
    return ClosureOperator(n, table=table, label=label)

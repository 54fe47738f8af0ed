"""Four rank functions, flats/spans, matroid checks and complemented sets.

All minimizations sweep subsets in cardinality-ascending, numerically
ascending order, so witnesses are deterministic (smallest mask among the
minimum-cardinality solutions).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .closure import ClosureOperator, ValidationReport, validate_closure
from .subsets import all_masks, card, full_mask, masks_by_cardinality, singletons


class RankProfile:
    """Memoized rank computations bound to one operator."""

    def __init__(self, op: ClosureOperator):
        self.op = op
        self.n = op.n
        self.V = full_mask(op.n)
        self.rank = op.rank
        self._ork = lru_cache(maxsize=None)(self._ork_impl)
        self._irk = lru_cache(maxsize=None)(self._irk_impl)
        self._lrk = lru_cache(maxsize=None)(self._lrk_impl)

    # outer rank: min |b| with X inside cl(b)
    def _ork_impl(self, X: int) -> tuple[int, int]:
        for b in masks_by_cardinality(self.n):
            if X & ~self.op(b) == 0:
                return card(b), b
        raise AssertionError("cl(V) must cover X")

    # inner rank: min |b| with cl(b) = cl(X)
    def _irk_impl(self, X: int) -> tuple[int, int]:
        target = self.op(X)
        for b in masks_by_cardinality(self.n):
            if self.op(b) == target:
                return card(b), b
        raise AssertionError("b = X always qualifies")

    # lower rank: min |Y| with cl(Y + (V \ X)) = V
    def _lrk_impl(self, X: int) -> tuple[int, int]:
        rest = self.V & ~X
        for Y in masks_by_cardinality(self.n):
            if self.op(Y | rest) == self.V:
                return card(Y), Y
        raise AssertionError("Y = V always qualifies")

    def ork(self, X: int) -> int:
        return self._ork(X)[0]

    def outer_basis(self, X: int) -> int:
        return self._ork(X)[1]

    def irk(self, X: int) -> int:
        return self._irk(X)[0]

    def inner_basis(self, X: int) -> int:
        return self._irk(X)[1]

    def lrk(self, X: int) -> int:
        return self._lrk(X)[0]

    def urk(self, X: int) -> int:
        return self.rank - self.lrk(self.V & ~X)

    def urk_via_ork(self, X: int) -> int:
        """Alternate form r - min{ork(Y) : cl(X+Y) = V}; cross-check only."""
        best = min(self.ork(Y) for Y in all_masks(self.n) if self.op(X | Y) == self.V)
        return self.rank - best

    def urk_via_flats(self, X: int) -> int:
        """Second alternate form, minimizing ork over spanning flats."""
        best = min(self.ork(F) for F in flats(self.op) if self.op(X | F) == self.V)
        return self.rank - best


_profiles: dict[int, RankProfile] = {}


def profile(op: ClosureOperator) -> RankProfile:
    key = id(op)
    prof = _profiles.get(key)
    if prof is None or prof.op is not op:
        prof = _profiles[key] = RankProfile(op)
    return prof


def outer_rank(op: ClosureOperator, X: int) -> tuple[int, int]:
    p = profile(op)
    return p.ork(X), p.outer_basis(X)


def inner_rank(op: ClosureOperator, X: int) -> tuple[int, int]:
    p = profile(op)
    return p.irk(X), p.inner_basis(X)


def lower_upper_rank(op: ClosureOperator, X: int) -> tuple[int, int]:
    p = profile(op)
    return p.lrk(X), p.urk(X)


def flats(op: ClosureOperator) -> list[int]:
    """Sets F where adding any outside vertex raises the outer rank."""
    p = profile(op)
    return [
        F
        for F in all_masks(op.n)
        if all(p.ork(F | v) > p.ork(F) for v in singletons(op.n) if not F & v)
    ]


def flats_by_definition(op: ClosureOperator) -> list[int]:
    """Directly: no strict superset with equal outer rank (debug cross-check)."""
    p = profile(op)
    out = []
    for F in all_masks(op.n):
        k = p.ork(F)
        if not any(X != F and F & ~X == 0 and p.ork(X) == k for X in all_masks(op.n)):
            out.append(F)
    return out


def span(op: ClosureOperator, X: int) -> int:
    """Vertices whose addition keeps the outer rank fixed."""
    p = profile(op)
    out = X
    for v in singletons(op.n):
        if not out & v and p.ork(X | v) == p.ork(X):
            out |= v
    return out


def upper_span(op: ClosureOperator, X: int) -> int:
    p = profile(op)
    out = X
    for v in singletons(op.n):
        if not out & v and p.urk(X | v) == p.urk(X):
            out |= v
    return out


def upper_flats(op: ClosureOperator) -> list[int]:
    p = profile(op)
    return [
        F
        for F in all_masks(op.n)
        if all(p.urk(F | v) > p.urk(F) for v in singletons(op.n) if not F & v)
    ]


@dataclass(frozen=True)
class MatroidReport:
    exchange: bool
    exchange_witness: tuple[int, int, int] | None  # (X, u, v) masks
    closed_eq_span: bool
    closed_are_spans: bool
    upper_closed_eq_uspan: bool
    upper_closed_are_uspans: bool

    @property
    def is_matroid(self) -> bool:
        return self.exchange


def exchange_property(op: ClosureOperator) -> tuple[bool, tuple[int, int, int] | None]:
    """Steinitz-Mac Lane: u in cl(X+v) \\ cl(X) implies v in cl(X+u)."""
    for X in all_masks(op.n):
        cX = op(X)
        for v in singletons(op.n):
            gained = op(X | v) & ~cX
            for u in singletons(op.n):
                if gained & u and not op(X | u) & v:
                    return False, (X, u, v)
    return True, None


def matroid_check(op: ClosureOperator) -> MatroidReport:
    exchange, witness = exchange_property(op)
    closed = set(op.closed_sets())
    span_image = {span(op, X) for X in all_masks(op.n)}
    uspan_image = {upper_span(op, X) for X in all_masks(op.n)}
    return MatroidReport(
        exchange=exchange,
        exchange_witness=witness,
        closed_eq_span=all(op(X) == span(op, X) for X in all_masks(op.n)),
        closed_are_spans=closed <= span_image,
        upper_closed_eq_uspan=all(op(X) == upper_span(op, X) for X in all_masks(op.n)),
        upper_closed_are_uspans=closed <= uspan_image,
    )


def complemented_status(op: ClosureOperator, X: int) -> tuple[bool, bool]:
    p = profile(op)
    return p.ork(X) == p.urk(X), p.irk(X) == p.urk(X)


def is_outer_complemented(op: ClosureOperator) -> bool:
    p = profile(op)
    return all(p.ork(X) == p.urk(X) for X in all_masks(op.n))


def extends_to_basis(op: ClosureOperator, b: int) -> bool:
    """Whether b is contained in some basis of V."""
    return any(b & ~basis == 0 for basis in op.rank_and_bases()[1])


def unsolvability_obstruction(op: ClosureOperator) -> int | None:
    """An outer complemented X whose span is outer complemented with larger
    outer rank; its existence rules out solutions over every alphabet."""
    p = profile(op)
    for X in masks_by_cardinality(op.n):
        if p.ork(X) != p.urk(X):
            continue
        S = span(op, X)
        if p.ork(S) > p.ork(X) and p.ork(S) == p.urk(S):
            return X
    return None


@dataclass(frozen=True)
class SpanOperatorResult:
    candidate_table: tuple[int, ...]
    report: ValidationReport
    is_matroid: bool
    verdict: str  # unsolvable | solvable-if-span-matroid-solvable | not-applicable


def span_operator(op: ClosureOperator) -> SpanOperatorResult:
    """Build X -> span(X) and judge solvability for outer complemented operators."""
    table = tuple(span(op, X) for X in all_masks(op.n))
    try:
        candidate = ClosureOperator(op.n, table=list(table), label=f"span({op.label})")
        report = validate_closure(candidate)
    except Exception:  # table may fail closure axioms in ways the ctor rejects
        report = ValidationReport(False, ())
        candidate = None
    is_matroid = False
    if report.valid and candidate is not None:
        is_matroid = exchange_property(candidate)[0]
    if not is_outer_complemented(op):
        verdict = "not-applicable"
    elif is_matroid and candidate is not None and candidate.rank == op.rank:
        verdict = "solvable-if-span-matroid-solvable"
    else:
        verdict = "unsolvable"
    return SpanOperatorResult(table, report, is_matroid, verdict)

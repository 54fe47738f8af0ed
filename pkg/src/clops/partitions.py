"""Partitions of a finite carrier, their refinement lattice and entropy,
and per-vertex coding functions compatible with a closure operator.

Partitions are kept in canonical form: part labels are 0..k-1 in order of
first appearance, i.e. the assignment array is a restricted growth string.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

from .closure import ClosureOperator, GroundSetTooLarge, ValidationReport, Violation
from .subsets import all_masks, full_mask, singletons, vertices_of

Entropy = Union[Fraction, float]

FLOAT_ENTROPY_TOL = 1e-12


@dataclass(frozen=True)
class Partition:
    assign: tuple[int, ...]

    def __post_init__(self):
        seen = -1
        for label in self.assign:
            if label > seen + 1:
                raise ValueError("assignment is not a restricted growth string")
            seen = max(seen, label)

    @staticmethod
    def from_labels(labels) -> "Partition":
        relabel: dict = {}
        out = []
        for x in labels:
            if x not in relabel:
                relabel[x] = len(relabel)
            out.append(relabel[x])
        return Partition(tuple(out))

    @staticmethod
    def universal(m: int) -> "Partition":
        return Partition((0,) * m)

    @staticmethod
    def equality(m: int) -> "Partition":
        return Partition(tuple(range(m)))

    @property
    def m(self) -> int:
        return len(self.assign)

    @property
    def k(self) -> int:
        return max(self.assign) + 1 if self.assign else 0

    def part_sizes(self) -> list[int]:
        sizes = [0] * self.k
        for label in self.assign:
            sizes[label] += 1
        return sizes

    def blocks(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.k)]
        for i, label in enumerate(self.assign):
            out[label].append(i)
        return out

    def join(self, other: "Partition") -> "Partition":
        """Common refinement: nonempty pairwise intersections of parts."""
        if self.m != other.m:
            raise ValueError("carrier sizes differ")
        return Partition.from_labels(zip(self.assign, other.assign))


def join_partitions(f: Partition, g: Partition) -> Partition:
    return f.join(g)


def canonical_partitions(m: int, max_parts: int) -> Iterator[Partition]:
    """All canonical partitions of {0..m-1} into at most max_parts parts,
    in lexicographic order of their restricted growth strings."""
    if m == 0:
        yield Partition(())
        return

    rgs = [0] * m

    def rec(i: int, top: int):
        if i == m:
            yield Partition(tuple(rgs))
            return
        for label in range(min(top + 1, max_parts - 1) + 1):
            rgs[i] = label
            yield from rec(i + 1, max(top, label))

    yield from rec(1, 0)


def _minimal_power_base(q: int) -> tuple[int, int]:
    """Smallest b >= 2 with b^k = q; returns (b, k)."""
    for b in range(2, q + 1):
        power, k = b, 1
        while power < q:
            power *= b
            k += 1
        if power == q:
            return b, k
    raise ValueError("alphabet size must be at least 2")


def partition_entropy(g: Partition, q: int, r: int) -> Entropy:
    """r - q^{-r} * sum |P| log_q |P|; exact whenever every part size is a
    power of the same base as q, a float (tolerance 1e-12) otherwise."""
    if g.m != q**r:
        raise ValueError(f"carrier has {g.m} elements, expected {q}^{r}")
    sizes = g.part_sizes()
    base, k = _minimal_power_base(q)
    weighted = 0
    exact = True
    for s in sizes:
        e = 0
        power = 1
        while power < s:
            power *= base
            e += 1
        if power != s:
            exact = False
            break
        weighted += s * e
    if exact:
        return r - Fraction(weighted, k * q**r)
    return r - sum(s * math.log(s, q) for s in sizes) / q**r


# -- coding functions ------------------------------------------------------


class CodingFunction:
    """One partition per vertex; their joins must be blind to taking closures."""

    def __init__(self, op: ClosureOperator, q: int, parts: tuple[Partition, ...], m: int | None = None):
        if q < 2:
            raise ValueError("alphabet must have at least 2 letters")
        if len(parts) != op.n:
            raise ValueError("need one partition per vertex")
        carrier = parts[0].m if parts else 0
        if any(p.m != carrier for p in parts):
            raise ValueError("all partitions must share one carrier")
        if m is not None and m != carrier:
            raise ValueError("declared carrier size disagrees with the partitions")
        self.op = op
        self.q = q
        self.parts = tuple(parts)
        self.m = carrier
        self.r = op.rank
        self._joins: dict[int, Partition] = {0: Partition.universal(carrier)}
        self._entropies: dict[int, Entropy] = {}

    @property
    def solvable_carrier(self) -> bool:
        return self.m == self.q**self.r

    def f(self, X: int) -> Partition:
        """Join of the vertex partitions over X; the empty join is universal."""
        cached = self._joins.get(X)
        if cached is not None:
            return cached
        low = X & -X
        part = self.f(X & (X - 1)).join(self.parts[low.bit_length() - 1])
        self._joins[X] = part
        return part

    def entropy(self, X: int) -> Entropy:
        value = self._entropies.get(X)
        if value is None:
            value = self._entropies[X] = partition_entropy(self.f(X), self.q, self.r)
        return value


def coding_validate(fc: CodingFunction) -> ValidationReport:
    """Part-count bound per vertex, and f_X = f_{cl(X)} for every subset."""
    violations: list[Violation] = []
    for i, p in enumerate(fc.parts):
        if p.k > fc.q:
            violations.append(Violation("part-count", (1 << i,)))
    if fc.op.n > 20 or not fc.op.tabulated:
        raise GroundSetTooLarge(f"coding validation sweeps 2^{fc.op.n} subsets")
    for X in all_masks(fc.op.n):
        cX = fc.op(X)
        if cX != X and fc.f(X) != fc.f(cX):
            violations.append(Violation("closure-compat", (X,)))
    return ValidationReport(not violations, tuple(violations))


def entropy_of(fc: CodingFunction, X: int) -> Entropy:
    return fc.entropy(X)


def is_solution(fc: CodingFunction) -> bool:
    """Solutions resolve the whole carrier: the full join is the equality
    partition, equivalently its entropy is the rank."""
    if not fc.solvable_carrier:
        return False
    return fc.f(full_mask(fc.op.n)).k == fc.m


def induced_closure(fc: CodingFunction) -> ClosureOperator:
    """cl_f(X) = vertices whose addition does not refine the join over X."""
    n = fc.op.n
    table = []
    for X in all_masks(n):
        fX = fc.f(X)
        out = X
        for v in singletons(n):
            if not out & v and fc.f(X | v) == fX:
                out |= v
        table.append(out)
    return ClosureOperator(n, table=table, label=f"induced({fc.op.label})")


def coding_rank_bounds(fc: CodingFunction, X: int) -> tuple[Entropy, Entropy]:
    """Entropy analogues of the lower and upper ranks, by exact minimization
    over all Y with cl(Y + (V \\ X)) = V."""
    n = fc.op.n
    V = full_mask(n)

    def lrk_f(S: int) -> Entropy:
        rest = V & ~S
        return min(fc.entropy(Y) for Y in all_masks(n) if fc.op(Y | rest) == V)

    return lrk_f(X), fc.entropy(V) - lrk_f(V & ~X)


# -- exhaustive search -----------------------------------------------------


@dataclass
class SearchResult:
    max_entropy: Entropy
    best: CodingFunction | None
    complete: bool
    nodes: int


class BudgetExceeded(RuntimeError):
    pass


def solve_exhaustive(op: ClosureOperator, q: int, budget: int = 200_000) -> SearchResult:
    """Depth-first sweep over canonical partition assignments, vertex by
    vertex, pruning prefixes that already break f_X = f_{cl(X)}.

    ``budget`` caps the number of search nodes; a truncated search reports
    complete=False. A complete search returns the exact maximum entropy of
    any coding function for the operator over a q-letter alphabet.
    """
    n = op.n
    r = op.rank
    m = q**r
    candidates = list(canonical_partitions(m, q))
    chosen: list[Partition] = []
    best_entropy: Entropy = Fraction(0)
    best_parts: tuple[Partition, ...] | None = None
    nodes = 0
    truncated = False

    def prefix_ok() -> bool:
        k = len(chosen)
        prefix_mask = (1 << k) - 1
        fc = CodingFunction(op, q, tuple(chosen) + (Partition.universal(m),) * (n - k))
        for X in all_masks(k):
            cX = op(X)
            if cX & ~prefix_mask:
                continue
            if cX != X and fc.f(X) != fc.f(cX):
                return False
        return True

    def dfs():
        nonlocal nodes, best_entropy, best_parts, truncated
        if truncated:
            return
        nodes += 1
        if nodes > budget:
            truncated = True
            return
        if len(chosen) == n:
            fc = CodingFunction(op, q, tuple(chosen))
            h = fc.entropy(full_mask(n))
            if h > best_entropy:
                best_entropy = h
                best_parts = tuple(chosen)
            return
        for cand in candidates:
            chosen.append(cand)
            if prefix_ok():
                dfs()
            chosen.pop()

    dfs()
    best = CodingFunction(op, q, best_parts) if best_parts is not None else None
    return SearchResult(best_entropy, best, not truncated, nodes)


# -- explicit constructions ------------------------------------------------


def _coordinate_partition(q: int, r: int, coords: list[int]) -> Partition:
    """Partition of q^r by the base-q digits listed in ``coords`` (1-indexed,
    digit 1 least significant)."""
    labels = []
    for e in range(q**r):
        labels.append(tuple((e // q ** (i - 1)) % q for i in coords))
    return Partition.from_labels(labels)


def square_cycle_solution(q: int) -> "tuple[ClosureOperator, CodingFunction]":
    """The 4-cycle (doubled arcs) is solvable at every alphabet size: give the
    two antipodal feedback pairs the two coordinates of A^2.

    Vertices 1,2 share coordinate 1 and vertices 3,4 share coordinate 2:
    {1,3} and {2,4} are the feedback vertex sets, so each coordinate pair
    must avoid spanning."""
    from .construct import from_digraph, undirected_cycle

    op = from_digraph(undirected_cycle(4), label="C4bar")
    coord1 = _coordinate_partition(q, 2, [1])
    coord2 = _coordinate_partition(q, 2, [2])
    return op, CodingFunction(op, q, (coord1, coord1, coord2, coord2))


def square_cycle_crossed_assignment(q: int) -> "tuple[ClosureOperator, CodingFunction]":
    """The crossed pairing f1 = f3, f2 = f4. It fails validation: {1,3} is a
    feedback vertex set, so cl({1,3}) = V while f_{1,3} has only q parts.
    Kept as a documented negative fixture."""
    from .construct import from_digraph, undirected_cycle

    op = from_digraph(undirected_cycle(4), label="C4bar")
    coord1 = _coordinate_partition(q, 2, [1])
    coord2 = _coordinate_partition(q, 2, [2])
    return op, CodingFunction(op, q, (coord1, coord2, coord1, coord2))


def density_coding(spec, base_size: int = 2, op: ClosureOperator | None = None) -> CodingFunction:
    """Coding function for the rooted-tree operator hitting its entropy target.

    Letters are D-tuples over a base set B; each vertex observes the carrier
    coordinates indexed by its coordinate set S(v): roots take consecutive
    blocks, and children extend their parent's set by distinct fresh indices.
    """
    if base_size < 2:
        raise ValueError("base set needs at least 2 elements")
    if op is None:
        if spec.degenerate:
            from .construct import uniform

            op = uniform(spec.r, spec.r)
        else:
            from .construct import density_tree

            op = density_tree(spec.r, spec.H)[0]
    D = spec.D
    sigma = spec.sigma_size
    r = spec.r
    q = base_size**D

    S: dict[int, set[int]] = {}
    prefix = 0
    for t, root in enumerate(spec.roots, start=1):
        Nt = spec.N[t - 1]
        S[root] = set(range(prefix + 1, prefix + Nt + 1))
        prefix += Nt
    for node in sorted(spec.nodes, key=lambda nd: (nd.level, nd.vertex)):
        kids = [nd.vertex for nd in spec.nodes if nd.parent == node.vertex]
        fresh = sorted(set(range(1, sigma + 1)) - S[node.vertex])
        assert len(kids) <= len(fresh)
        for kid, extra in zip(sorted(kids), fresh):
            S[kid] = S[node.vertex] | {extra}

    parts = tuple(
        _coordinate_partition(base_size, r * D, sorted(S[v])) for v in range(1, spec.n + 1)
    )
    fc = CodingFunction(op, q, parts)
    fc.coordinate_sets = {v: frozenset(s) for v, s in S.items()}  # for inspection
    return fc

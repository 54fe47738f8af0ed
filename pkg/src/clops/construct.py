"""Constructors for the closure-operator families used throughout.

Uniform matroids, digraph closures, the max-prefix chain, the three union
combinators, seeded random Moore families, and the rooted-tree operator that
realizes any rational entropy target.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .closure import ClosureOperator, GroundSetTooLarge, validate_closure
from .subsets import all_masks, card, full_mask, vertices_of


# -- digraphs --------------------------------------------------------------


@dataclass(frozen=True)
class Digraph:
    n: int
    arcs: frozenset[tuple[int, int]]

    def __post_init__(self):
        for (u, v) in self.arcs:
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise ValueError(f"arc ({u},{v}) out of range 1..{self.n}")

    @staticmethod
    def from_arcs(n: int, arcs) -> "Digraph":
        arc_list = list(arcs)
        if len(arc_list) != len(set(arc_list)):
            raise ValueError("duplicate arcs")
        return Digraph(n, frozenset(arc_list))

    def in_neighbors(self) -> list[int]:
        """Mask of in-neighbours per vertex, 0-indexed by vertex-1."""
        masks = [0] * self.n
        for (u, v) in self.arcs:
            masks[v - 1] |= 1 << (u - 1)
        return masks

    def induced_is_acyclic(self, mask: int) -> bool:
        verts = set(vertices_of(mask))
        out = {v: [w for (u, w) in self.arcs if u == v and w in verts] for v in verts}
        seen: dict[int, int] = {}  # 1 = on stack, 2 = done

        def dfs(v: int) -> bool:
            seen[v] = 1
            for w in out[v]:
                state = seen.get(w)
                if state == 1 or (state is None and not dfs(w)):
                    return False
            seen[v] = 2
            return True

        return all(seen.get(v) == 2 or dfs(v) for v in verts)


def directed_cycle(n: int) -> Digraph:
    return Digraph.from_arcs(n, [(i, i % n + 1) for i in range(1, n + 1)])


def complete_digraph(n: int) -> Digraph:
    return Digraph.from_arcs(n, [(u, v) for u in range(1, n + 1) for v in range(1, n + 1) if u != v])


def undirected_cycle(n: int) -> Digraph:
    """C_n with every edge doubled into both arcs."""
    arcs = []
    for i in range(1, n + 1):
        j = i % n + 1
        arcs += [(i, j), (j, i)]
    return Digraph.from_arcs(n, arcs)


def loops_everywhere(n: int) -> Digraph:
    return Digraph.from_arcs(n, [(v, v) for v in range(1, n + 1)])


def from_digraph(d: Digraph, label: str = "") -> ClosureOperator:
    """D-closure: X plus the largest acyclic Y whose in-neighbours stay in X+Y.

    Computed as the least fixpoint of Z -> Z + {v : N-(v) subset of Z} from
    Z = X; the vertices added in that order induce an acyclic subgraph, and a
    vertex with a loop is its own in-neighbour so it is never added.
    """
    n = d.n
    nbrs = d.in_neighbors()

    def cl(X: int) -> int:
        Z = X
        changed = True
        while changed:
            changed = False
            for i in range(n):
                bit = 1 << i
                if not Z & bit and nbrs[i] & ~Z == 0:
                    Z |= bit
                    changed = True
        return Z

    return ClosureOperator(n, fn=cl, label=label or f"clD(n={n})")


def digraph_closure_bruteforce(d: Digraph, X: int) -> int:
    """Oracle: maximize |Y| over acyclic Y with N-(Y) inside X+Y directly."""
    if d.n > 7:
        raise GroundSetTooLarge("brute-force D-closure is capped at n <= 7")
    nbrs = d.in_neighbors()
    best = 0
    for Y in all_masks(d.n):
        if any(Y >> i & 1 and nbrs[i] & ~(X | Y) for i in range(d.n)):
            continue
        if card(Y) > card(best) and d.induced_is_acyclic(Y):
            best = Y
    return X | best


# -- basic families --------------------------------------------------------


def uniform(r: int, n: int) -> ClosureOperator:
    if not 0 <= r <= n:
        raise ValueError(f"uniform matroid needs 0 <= r <= n, got r={r}, n={n}")
    V = full_mask(n)
    return ClosureOperator(n, fn=lambda X: V if card(X) >= r else X, label=f"U({r},{n})")


def chain(n: int) -> ClosureOperator:
    """cl(X) = {1..max X}, cl(empty) = empty; rank 1 with n+1 closed sets."""
    return ClosureOperator(
        n,
        fn=lambda X: (1 << X.bit_length()) - 1,
        label=f"chain({n})",
    )


# -- unions ----------------------------------------------------------------

UNION_KINDS = ("disjoint", "unidirectional", "bidirectional")


def union_combine(op1: ClosureOperator, op2: ClosureOperator, kind: str) -> ClosureOperator:
    """Combine operators on {1..n1} and {n1+1..n1+n2} into one on the union."""
    if kind not in UNION_KINDS:
        raise ValueError(f"unknown union kind {kind!r}")
    n1, n2 = op1.n, op2.n
    n = n1 + n2
    V1 = full_mask(n1)
    V2 = full_mask(n2) << n1

    if kind == "disjoint":
        def cl(X: int) -> int:
            return op1(X & V1) | (op2((X & V2) >> n1) << n1)
    elif kind == "unidirectional":
        def cl(X: int) -> int:
            c1 = op1(X & V1)
            if c1 == V1:
                return V1 | (op2((X & V2) >> n1) << n1)
            return c1 | (X & V2)
    else:
        def cl(X: int) -> int:
            if X & V1 == V1:
                return V1 | (op2((X & V2) >> n1) << n1)
            if X & V2 == V2:
                return V2 | op1(X & V1)
            return X

    return ClosureOperator(n, fn=cl, label=f"{kind}({op1.label},{op2.label})")


# -- random Moore families -------------------------------------------------


def random_moore(n: int, seed: int, label: str = "") -> ClosureOperator:
    """Seeded random closure operator via a random intersection-closed family.

    Sample a family of subsets containing V, close it under pairwise
    intersection; cl(X) is the smallest family member containing X.
    """
    if n > 10:
        raise GroundSetTooLarge("random_moore is capped at n <= 10")
    rng = random.Random(seed)
    V = full_mask(n)
    count = rng.randint(1, 1 << n)
    family = {V} | {rng.randrange(1 << n) for _ in range(count)}
    while True:
        extra = {a & b for a in family for b in family} - family
        if not extra:
            break
        family |= extra
    members = sorted(family)

    table = [0] * (1 << n)
    for X in all_masks(n):
        hull = V
        for m in members:
            if X & ~m == 0:
                hull &= m
        table[X] = hull
    return ClosureOperator(n, table=table, label=label or f"moore(n={n},seed={seed})")


# -- density trees ---------------------------------------------------------


@dataclass(frozen=True)
class TreeNode:
    vertex: int  # 1-indexed in the combined ground set
    tree: int  # 1-indexed tree number
    level: int
    parent: int | None  # vertex id, None for roots


@dataclass(frozen=True)
class TreeSpec:
    r: int
    H: Fraction
    D: int
    N: tuple[int, ...]  # N_1..N_r, N_r = D
    L: tuple[int, ...]  # D - N_t
    C: tuple[int, ...]  # D*H - N_t
    roots: tuple[int, ...]
    nodes: tuple[TreeNode, ...]
    degenerate: bool = False  # H = r shortcut, no trees built

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def sigma_size(self) -> int:
        return int(self.D * self.H)

    def children(self, vertex: int) -> list[int]:
        return [nd.vertex for nd in self.nodes if nd.parent == vertex]


def _split_evenly(total: int, parts: int) -> list[int]:
    base, extra = divmod(total, parts)
    return [base + (1 if i < extra else 0) for i in range(parts)]


def density_tree(r: int, H: Fraction) -> tuple[ClosureOperator, TreeSpec]:
    """A rank-r operator whose entropy is exactly the rational H in (1, r].

    r disjoint rooted trees where tree t is an (L_t, C_t)-tree; the closure
    of X is V when some children set is covered by the ancestry of X or X
    meets every tree, and the ancestry of X otherwise.
    """
    H = Fraction(H)
    if r < 2:
        raise ValueError("rank must be at least 2")
    if not 1 < H <= r:
        raise ValueError(f"entropy target must lie in (1, {r}], got {H}")

    if H == r:
        # The split needs N_t < D, impossible at H = r; U_{r,r} has entropy r.
        spec = TreeSpec(
            r, H, D=1, N=(1,) * r, L=(0,) * r, C=(1,) * r,
            roots=tuple(range(1, r + 1)),
            nodes=tuple(TreeNode(t, t, 0, None) for t in range(1, r + 1)),
            degenerate=True,
        )
        return uniform(r, r), spec

    a, b = H.numerator, H.denominator
    D = b * max(1, -((r - 1) // -(a - b)))
    total = D * (a - b) // b  # D*(H-1), an integer by choice of D
    N_small = _split_evenly(total, r - 1)
    assert all(1 <= Nt < D for Nt in N_small)
    N = tuple(N_small) + (D,)
    DH = D * a // b
    L = tuple(D - Nt for Nt in N)
    C = tuple(DH - Nt for Nt in N)

    nodes: list[TreeNode] = []
    roots: list[int] = []
    next_id = 1
    for t in range(1, r + 1):
        Lt, Ct = L[t - 1], C[t - 1]
        root = next_id
        next_id += 1
        roots.append(root)
        nodes.append(TreeNode(root, t, 0, None))
        frontier = [root]
        for k in range(Lt):
            new_frontier = []
            for parent in frontier:
                for _ in range(Ct - k):
                    nodes.append(TreeNode(next_id, t, k + 1, parent))
                    new_frontier.append(next_id)
                    next_id += 1
            frontier = new_frontier
    n = next_id - 1
    spec = TreeSpec(r, H, D, N, L, C, tuple(roots), tuple(nodes))

    parent = [0] * (n + 1)
    tree_of = [0] * (n + 1)
    for nd in nodes:
        parent[nd.vertex] = nd.parent or 0
        tree_of[nd.vertex] = nd.tree
    children_masks: dict[int, int] = {}
    for nd in nodes:
        if nd.parent is not None:
            children_masks[nd.parent] = children_masks.get(nd.parent, 0) | (1 << (nd.vertex - 1))
    tree_masks = [0] * (r + 1)
    for nd in nodes:
        tree_masks[nd.tree] |= 1 << (nd.vertex - 1)
    ancestry_mask = [0] * (n + 1)
    for nd in sorted(nodes, key=lambda x: x.level):
        up = ancestry_mask[nd.parent] if nd.parent else 0
        ancestry_mask[nd.vertex] = up | (1 << (nd.vertex - 1))
    V = full_mask(n)

    def cl(X: int) -> int:
        aX = 0
        Y = X
        while Y:
            low = Y & -Y
            aX |= ancestry_mask[low.bit_length()]
            Y &= Y - 1
        if any(cm & ~aX == 0 for cm in children_masks.values()):
            return V
        if all(X & tree_masks[t] for t in range(1, r + 1)):
            return V
        return aX

    op = ClosureOperator(n, fn=cl, label=f"tree(r={r},H={H})")
    if n <= 12:
        report = validate_closure(op)
        assert report.valid, report.violations
    return op, spec

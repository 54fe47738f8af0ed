"""Exact simplex over the rationals, fraction-free and incremental.

Solves max c.x subject to A x <= b, x >= 0 with b >= 0, so the slack basis
is feasible and no phase-1 is needed. The tableau is an integer matrix with
one shared denominator (Bareiss one-step pivoting: every entry is a quotient
of minors of the original system, so the divisions are exact). Arithmetic
runs on int64 numpy arrays while a per-pivot bound proves the products
cannot overflow, and switches the same arrays to exact object dtype the
moment it no longer can. The simplex itself uses no floating point and no
tolerances; ``certified_max`` additionally offers a float-guided fast path
whose answers are accepted only with an exact optimality certificate.

Rows can be added after a solve; the old basis stays dual feasible, so a few
dual simplex pivots restore optimality. Rows whose slack is basic and
strictly positive can be dropped again, which keeps the working tableau
close to the binding rows when the caller generates cutting planes.

Primal pivoting is Dantzig pricing with a lexicographic ratio test (valid
because the slack block starts as the identity), which cannot cycle. Dual
pivoting uses most-negative pricing with a Bland fallback on stalls.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

import numpy as np


class Unbounded(RuntimeError):
    pass


class Infeasible(RuntimeError):
    pass


_DUAL_STALL_LIMIT = 30
# int64 is safe while |a*b + c*d| stays below 2^63 for tableau entries
_INT64_PRODUCT_LIMIT = 1 << 62


def _int_row(coeffs: list, rhs) -> list[int]:
    vals = list(coeffs) + [rhs]
    if all(type(v) is int for v in vals):
        return vals
    fr = [Fraction(v) for v in vals]
    lcm = 1
    for v in fr:
        if v.denominator != 1:
            lcm = lcm * v.denominator // gcd(lcm, v.denominator)
    return [int(v * lcm) for v in fr]


class IncrementalLP:
    """max c.x over rows of A x <= b added incrementally.

    The objective is a single variable index or a dict of integer
    coefficients. Negative right-hand sides are allowed; solve() first runs
    dual simplex steps, which need the initial cost row to be nonnegative,
    so a general objective must have coefficients <= 0 unless every bound
    is nonnegative."""

    def __init__(self, num_vars: int, objective: int | dict[int, int]):
        self.n = num_vars
        self.m = 0
        # columns: n structural, m slack, rhs; all entries share self.den
        self.M = np.zeros((0, num_vars + 1), dtype=np.int64)
        self.cost = np.zeros(num_vars + 1, dtype=np.int64)
        if isinstance(objective, int):
            objective = {objective: 1}
        for j, coef in objective.items():
            self.cost[j] = -coef
        self.basis: list[int] = []  # column basic in each row
        self.removable: list[bool] = []  # per slack column: drop eligibility
        self.den = 1  # shared denominator, kept positive
        self._peak = None  # cached upper bound on |entry|, for overflow checks

    def _to_object(self) -> None:
        if self.M.dtype == object:
            return
        self.M = self.M.astype(object)
        self.cost = self.cost.astype(object)

    # -- row management ----------------------------------------------------

    def add_row(self, coeffs: dict, bound, removable: bool = False) -> None:
        self.add_rows([(coeffs, bound)], removable)

    def add_rows(self, batch: list[tuple[dict, object]], removable: bool = False) -> None:
        """Append rows coeffs . x <= bound; pivots are deferred to solve()."""
        if not batch:
            return
        scaled = [
            _int_row([coeffs.get(j, 0) for j in range(self.n)], bound)
            for coeffs, bound in batch
        ]
        width = self.n + self.m
        extra = len(batch)
        # express each new row over the current basis: tableau rows are the
        # identity on basic columns, so one combined subtraction eliminates
        # every basic variable at once, and the shared denominator survives
        fvals = [[row[bv] if bv < self.n else 0 for bv in self.basis] for row in scaled]
        peak = (
            max(abs(v) for row in scaled for v in row) * self.den
            + max((abs(v) for row in fvals for v in row), default=0) * self._peak_bound()
        ) * max(self.m, 1)
        if self.M.dtype != object and peak >= _INT64_PRODUCT_LIMIT:
            self._to_object()
        dtype = self.M.dtype
        ext = np.zeros((extra, width + extra + 1), dtype=dtype)
        for i, row in enumerate(scaled):
            ext[i, : self.n] = row[:-1]
            ext[i, -1] = row[-1]
        ext *= self.den
        if self.m:
            f = np.array(fvals, dtype=dtype)
            ext[:, :width] -= f @ self.M[:, :width]
            ext[:, -1] -= f @ self.M[:, -1]
        for i in range(extra):
            ext[i, width + i] = self.den  # fresh slack column, basic in row i
        grown = np.zeros((self.m + extra, width + extra + 1), dtype=dtype)
        grown[: self.m, :width] = self.M[:, :width]
        grown[: self.m, -1] = self.M[:, -1]
        grown[self.m :] = ext
        self.M = grown
        self.cost = np.concatenate(
            [self.cost[:width], np.zeros(extra, dtype=dtype), self.cost[-1:]]
        )
        self.basis.extend(range(width, width + extra))
        self.removable.extend([removable] * extra)
        self.m += extra
        self._peak = None

    def drop_slack_rows(self) -> int:
        """Remove rows whose own slack is basic with positive value.

        Such a slack column is a unit column, so deleting the row and the
        column leaves a consistent optimal tableau for the remaining rows."""
        drop = [
            i
            for i, bv in enumerate(self.basis)
            if bv >= self.n
            and self.removable[bv - self.n]
            and self.M[i, -1] > 0
            and self.M[i, bv] == self.den
        ]
        if not drop:
            return 0
        cols = sorted((self.basis[i] for i in drop), reverse=True)
        live = [i for i in range(self.m) if i not in set(drop)]
        self.M = self.M[live]
        self.basis = [self.basis[i] for i in live]
        for col in cols:
            self.M = np.delete(self.M, col, axis=1)
            self.cost = np.delete(self.cost, col)
            del self.removable[col - self.n]
            self.basis = [bv - 1 if bv > col else bv for bv in self.basis]
        self.m = len(self.basis)
        return len(drop)

    # -- pivoting ----------------------------------------------------------

    def _peak_bound(self) -> int:
        """A cheap upper bound on |entry|; recomputed only when it sours."""
        if self._peak is None:
            if self.m == 0:
                self._peak = max(int(np.abs(self.cost).max()), 1)
            else:
                self._peak = max(
                    int(np.abs(self.M).max()), int(np.abs(self.cost).max()), 1
                )
        return self._peak

    def _pivot(self, leave: int, enter: int) -> None:
        M, den = self.M, self.den
        piv = int(M[leave, enter])
        est = self._peak_bound() * abs(piv) + self._peak_bound() ** 2
        if est >= _INT64_PRODUCT_LIMIT:
            self._peak = None  # bound went stale; measure before giving up
            est = self._peak_bound() * abs(piv) + self._peak_bound() ** 2
            if M.dtype != object and est >= _INT64_PRODUCT_LIMIT:
                self._to_object()
                M = self.M
        piv_row = M[leave].copy()
        f = M[:, enter].copy()
        f[leave] = 0  # the pivot row itself is left untouched
        nz = np.nonzero(f)[0]
        if piv == den:
            if len(nz):
                M[nz] = (M[nz] * piv - np.multiply.outer(f[nz], piv_row)) // den
        else:
            M *= piv
            if len(nz):
                M[nz] -= np.multiply.outer(f[nz], piv_row)
            M //= den
            M[leave] = piv_row
        cf = int(self.cost[enter])
        if cf:
            self.cost = (self.cost * piv - cf * piv_row) // den
        elif piv != den:
            self.cost = self.cost * piv // den
        self.den = piv
        self.basis[leave] = enter
        if self.den < 0:  # dual pivots can flip the sign; values are M/den
            self.den = -self.den
            np.negative(self.M, out=self.M)
            np.negative(self.cost, out=self.cost)
        self._peak = max(est // max(abs(den), 1), 1) if M.dtype != object else None

    def _dual_steps(self) -> None:
        """Restore primal feasibility while reduced costs stay nonnegative."""
        stalls = 0
        last = None
        while True:
            rhs = self.M[:, -1]
            if stalls < _DUAL_STALL_LIMIT:
                leave = int(np.argmin(rhs)) if self.m else -1
                if leave < 0 or rhs[leave] >= 0:
                    return
            else:  # Bland: smallest basis index among infeasible rows
                leave = -1
                for i in range(self.m):
                    if rhs[i] < 0 and (leave < 0 or self.basis[i] < self.basis[leave]):
                        leave = i
                if leave < 0:
                    return
            row = self.M[leave]
            cost = self.cost
            enter = -1
            eb_num = eb_den = 0  # running min of cost[j] / -row[j]
            for j in np.nonzero(row[:-1] < 0)[0] if self.m else ():
                cj = int(cost[j])
                rj = -int(row[j])
                if enter < 0 or cj * eb_den < eb_num * rj:
                    enter, eb_num, eb_den = int(j), cj, rj
            if enter < 0:
                raise Infeasible("added rows admit no solution")
            self._pivot(leave, enter)
            key = (int(self.cost[-1]), self.den)
            if last is not None and key[0] * last[1] == last[0] * key[1]:
                stalls += 1
            else:
                stalls = 0
            last = key

    def _primal_steps(self) -> None:
        total = self.n + self.m
        while True:
            M, cost = self.M, self.cost
            enter = int(np.argmin(cost[:total]))
            if cost[enter] >= 0:
                return
            # lexicographic ratio test: minimize (rhs, whole row) / pivot entry
            col_enter = M[:, enter]
            cands = np.nonzero(col_enter > 0)[0].tolist()
            if not cands:
                raise Unbounded("objective is unbounded above")
            for col in (total, *range(total)):
                if len(cands) == 1:
                    break
                cidx = -1 if col == total else col
                lead = cands[0]
                mins = [lead]
                for i in cands[1:]:
                    diff = int(M[i, cidx]) * int(col_enter[lead]) - int(
                        M[lead, cidx]
                    ) * int(col_enter[i])
                    if diff < 0:
                        lead = i
                        mins = [i]
                    elif diff == 0:
                        mins.append(i)
                if len(mins) > 1 and mins[0] != lead:
                    mins = [
                        i
                        for i in mins
                        if int(M[i, cidx]) * int(col_enter[lead])
                        == int(M[lead, cidx]) * int(col_enter[i])
                    ]
                cands = mins
            self._pivot(cands[0], enter)

    # -- solving -----------------------------------------------------------

    def solve(self) -> tuple[Fraction, list[Fraction]]:
        self._dual_steps()
        self._primal_steps()
        return self.value(), self.solution()

    def value(self) -> Fraction:
        return Fraction(int(self.cost[-1]), self.den)

    def solution(self) -> list[Fraction]:
        x = [Fraction(0)] * self.n
        for i, bv in enumerate(self.basis):
            if bv < self.n:
                x[bv] = Fraction(int(self.M[i, -1]), self.den)
        return x

    def duals(self) -> list[Fraction]:
        """Optimal dual values, one per added row, read off the cost row."""
        return [
            Fraction(int(self.cost[self.n + k]), self.den) for k in range(self.m)
        ]


def certified_max(
    num_vars: int, objective_index: int, rows: list[tuple[dict[int, int], int]]
) -> tuple[Fraction, list[Fraction]] | None:
    """max x_obj over A x <= b, x >= 0, certified exact or None.

    A floating-point solver proposes an optimal vertex and its dual vector;
    both are rounded to small rationals and the pair is verified with exact
    arithmetic: primal feasible, dual feasible, equal objective values. Weak
    duality then proves optimality, so a returned answer is exact even
    though floats chose it. Any failed check returns None and the caller
    falls back to the exact simplex."""
    try:
        from scipy.optimize import linprog
    except ImportError:  # pragma: no cover - scipy is an optional fast path
        return None
    A = np.zeros((len(rows), num_vars))
    b = np.zeros(len(rows))
    for i, (coeffs, bound) in enumerate(rows):
        for j, w in coeffs.items():
            A[i, j] = w
        b[i] = bound
    c = np.zeros(num_vars)
    c[objective_index] = -1.0
    res = linprog(c, A_ub=A, b_ub=b, method="highs-ds")
    if not res.success:
        return None
    # snap to the rational grid; true denominators here are far below 10^6,
    # so an optimum within float tolerance rounds onto the exact vertex
    x = [Fraction(float(v)).limit_denominator(10**6) for v in res.x]
    y = [Fraction(-float(v)).limit_denominator(10**6) for v in res.ineqlin.marginals]
    if any(v < 0 for v in x) or any(v < 0 for v in y):
        return None
    for coeffs, bound in rows:
        if sum(w * x[j] for j, w in coeffs.items()) > bound:
            return None
    # dual feasibility A^T y >= e_obj, and matching objective values
    col = [Fraction(0)] * num_vars
    for (coeffs, _), yi in zip(rows, y):
        if yi:
            for j, w in coeffs.items():
                col[j] += w * yi
    for j in range(num_vars):
        if col[j] < (1 if j == objective_index else 0):
            return None
    if sum(bound * yi for (_, bound), yi in zip(rows, y)) != x[objective_index]:
        return None
    return x[objective_index], x


def simplex_max(
    c: list[Fraction], A: list[list[Fraction]], b: list[Fraction]
) -> tuple[Fraction, list[Fraction]]:
    """One-shot max c.x, A x <= b, x >= 0 with b >= 0."""
    n = len(c)
    assert all(len(row) == n for row in A) and len(b) == len(A)
    for bi in b:
        if bi < 0:
            raise ValueError("right-hand sides must be nonnegative")
    # a single-variable unit objective maps straight onto IncrementalLP; the
    # general case shifts the objective into a fresh variable t <= c.x
    pos = [j for j in range(n) if c[j]]
    if len(pos) == 1 and c[pos[0]] == 1:
        lp = IncrementalLP(n, pos[0])
        for Ai, bi in zip(A, b):
            lp.add_row({j: v for j, v in enumerate(Ai) if v}, bi)
        return lp.solve()
    lp = IncrementalLP(n + 1, n)
    for Ai, bi in zip(A, b):
        lp.add_row({j: v for j, v in enumerate(Ai) if v}, bi)
    lp.add_row({n: Fraction(1), **{j: -c[j] for j in range(n) if c[j]}}, Fraction(0))
    value, x = lp.solve()
    return value, x[:n]

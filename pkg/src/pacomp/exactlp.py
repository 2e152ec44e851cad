"""Exact rational linear algebra: Gaussian elimination and a small simplex.

Everything is `fractions.Fraction`; Bland's rule keeps the simplex finite.
Problem sizes here are tiny (products of desk-scale automata), so clarity
beats sparsity tricks.
"""

from __future__ import annotations

from fractions import Fraction

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


def gauss_solve(rows, rhs):
    """Solve A x = b for square nonsingular A; returns a list of Fractions."""
    n = len(rows)
    a = [[Fraction(v) for v in row] + [Fraction(rhs[i])] for i, row in enumerate(rows)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise ValueError("singular linear system")
        a[col], a[pivot] = a[pivot], a[col]
        inv = 1 / a[col][col]
        a[col] = [v * inv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                factor = a[r][col]
                a[r] = [v - factor * p for v, p in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]


class LinearProgram:
    """max c.x subject to equality/inequality rows over nonnegative variables."""

    def __init__(self, num_vars: int):
        self.num_vars = num_vars
        self.eq = []  # (coeffs dict, rhs)
        self.ub = []  # coeffs.x <= rhs

    def add_eq(self, coeffs: dict, rhs):
        self.eq.append((dict(coeffs), Fraction(rhs)))

    def add_ub(self, coeffs: dict, rhs):
        self.ub.append((dict(coeffs), Fraction(rhs)))

    def add_lb(self, coeffs: dict, rhs):
        self.ub.append(({k: -v for k, v in coeffs.items()}, -Fraction(rhs)))

    def solve(self, objective: dict, maximize=True):
        """Two-phase simplex; returns (status, assignment list, value)."""
        n = self.num_vars
        n_slack = len(self.ub)
        total = n + n_slack
        rows = []
        for coeffs, rhs in self.eq:
            row = [Fraction(0)] * total
            for j, v in coeffs.items():
                row[j] += Fraction(v)
            rows.append((row, Fraction(rhs)))
        for k, (coeffs, rhs) in enumerate(self.ub):
            row = [Fraction(0)] * total
            for j, v in coeffs.items():
                row[j] += Fraction(v)
            row[n + k] = Fraction(1)
            rows.append((row, Fraction(rhs)))

        m = len(rows)
        tab = []
        for row, rhs in rows:
            if rhs < 0:
                row = [-v for v in row]
                rhs = -rhs
            tab.append(row + [Fraction(0)] * m + [rhs])
        for i in range(m):
            tab[i][total + i] = Fraction(1)
        basis = [total + i for i in range(m)]
        width = total + m

        # Phase 1: minimize the sum of artificials (reduced-cost row "[r | -z]").
        cost = [Fraction(0)] * (width + 1)
        for i in range(m):
            for j in range(total):
                cost[j] -= tab[i][j]
            cost[width] -= tab[i][width]
        self._iterate(tab, basis, cost, width, artificial_from=total)
        if cost[width] != 0:
            return INFEASIBLE, None, None

        # Remove leftover artificial basics (degenerate rows).
        for i in range(m):
            if basis[i] >= total:
                pivot_col = next(
                    (j for j in range(total) if tab[i][j] != 0), None
                )
                if pivot_col is not None:
                    self._pivot(tab, basis, i, pivot_col, width)

        # Phase 2: minimize -objective (or +objective when minimizing).
        sign = Fraction(-1) if maximize else Fraction(1)
        cost = [Fraction(0)] * (width + 1)
        for j, v in objective.items():
            cost[j] = sign * Fraction(v)
        for i in range(m):
            if cost[basis[i]] != 0:
                factor = cost[basis[i]]
                for j in range(width + 1):
                    cost[j] -= factor * tab[i][j]
        status = self._iterate(tab, basis, cost, width, artificial_from=total)
        if status == UNBOUNDED:
            return UNBOUNDED, None, None
        x = [Fraction(0)] * self.num_vars
        for i, b in enumerate(basis):
            if b < self.num_vars:
                x[b] = tab[i][width]
        value = sum(Fraction(v) * x[j] for j, v in objective.items())
        return OPTIMAL, x, value

    def feasible(self):
        status, x, _ = self.solve({}, maximize=True)
        return status == OPTIMAL, x

    @staticmethod
    def _pivot(tab, basis, row, col, width):
        inv = 1 / tab[row][col]
        tab[row] = [v * inv for v in tab[row]]
        for r in range(len(tab)):
            if r != row and tab[r][col] != 0:
                factor = tab[r][col]
                tab[r] = [v - factor * p for v, p in zip(tab[r], tab[row])]
        basis[row] = col

    def _iterate(self, tab, basis, cost, width, artificial_from):
        m = len(tab)
        while True:
            # Bland's rule: smallest improving column; artificials never re-enter.
            col = next(
                (j for j in range(artificial_from) if cost[j] < 0), None
            )
            if col is None:
                return OPTIMAL
            best_row, best_ratio = None, None
            for i in range(m):
                if tab[i][col] > 0:
                    ratio = tab[i][width] / tab[i][col]
                    if (
                        best_ratio is None
                        or ratio < best_ratio
                        or (ratio == best_ratio and basis[i] < basis[best_row])
                    ):
                        best_row, best_ratio = i, ratio
            if best_row is None:
                return UNBOUNDED
            self._pivot(tab, basis, best_row, col, width)
            if cost[col] != 0:
                factor = cost[col]
                for j in range(width + 1):
                    cost[j] -= factor * tab[best_row][j]

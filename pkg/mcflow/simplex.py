"""Exact rational linear feasibility.

A small two-phase simplex over Fractions with Bland's rule, used for two jobs:
deciding whether a convex polygon given in halfspace form is empty, and
solving the linear systems that the cycle-space decision produces for one
choice of convex piece per arc.

Strict inequalities are handled by a shared slack: every strict row
``a.z < b`` becomes ``a.z + tau <= b`` and the solver maximizes ``tau``
(capped at 1). The strict system is feasible exactly when the optimum is
positive.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .util import as_rational

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class LinearConstraint:
    """coeffs . z <= bound, or < bound when strict."""
    coeffs: tuple
    bound: Fraction
    strict: bool = False

    @classmethod
    def of(cls, coeffs, bound, strict: bool = False) -> "LinearConstraint":
        return cls(tuple(as_rational(c) for c in coeffs), as_rational(bound), bool(strict))


class SimplexTableau:
    """Dense tableau kept in canonical form with respect to ``basis``."""

    def __init__(self, rows: list[list[Fraction]], rhs: list[Fraction], basis: list[int]):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.pivots = 0

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def pivot(self, r: int, c: int) -> None:
        piv = self.rows[r][c]
        row = [v / piv for v in self.rows[r]]
        rhs_r = self.rhs[r] / piv
        self.rows[r] = row
        self.rhs[r] = rhs_r
        for i in range(len(self.rows)):
            if i == r:
                continue
            f = self.rows[i][c]
            if f != 0:
                self.rows[i] = [a - f * b for a, b in zip(self.rows[i], row)]
                self.rhs[i] -= f * rhs_r
        self.basis[r] = c
        self.pivots += 1

    def reduced_cost(self, cost: Sequence[Fraction], j: int) -> Fraction:
        return cost[j] - sum((cost[b] * self.rows[i][j] for i, b in enumerate(self.basis)), _ZERO)

    def objective(self, cost: Sequence[Fraction]) -> Fraction:
        return sum((cost[b] * self.rhs[i] for i, b in enumerate(self.basis)), _ZERO)

    def maximize(self, cost: Sequence[Fraction], allowed: set[int] | None = None) -> bool:
        """Run primal simplex with Bland's rule. Returns False when unbounded."""
        while True:
            in_basis = set(self.basis)
            entering = None
            for j in range(self.ncols):
                if j in in_basis or (allowed is not None and j not in allowed):
                    continue
                if self.reduced_cost(cost, j) > 0:
                    entering = j
                    break
            if entering is None:
                return True
            best = None
            best_ratio = None
            for i in range(len(self.rows)):
                a = self.rows[i][entering]
                if a > 0:
                    ratio = self.rhs[i] / a
                    if best is None or ratio < best_ratio or (ratio == best_ratio and self.basis[i] < self.basis[best]):
                        best, best_ratio = i, ratio
            if best is None:
                return False
            self.pivot(best, entering)

    def values(self) -> list[Fraction]:
        out = [_ZERO] * self.ncols
        for i, b in enumerate(self.basis):
            out[b] = self.rhs[i]
        return out


def find_point(constraints: Sequence[LinearConstraint], dimension: int) -> tuple[Fraction, ...] | None:
    """Return some z in Q^dimension satisfying every constraint, or None."""
    strict = any(c.strict for c in constraints)
    n_struct = 2 * dimension + (1 if strict else 0)
    tau = 2 * dimension

    raw: list[tuple[list[Fraction], Fraction]] = []
    for c in constraints:
        if len(c.coeffs) != dimension:
            raise ValueError(f"constraint has {len(c.coeffs)} coefficients, expected {dimension}")
        row = []
        for a in c.coeffs:
            row.extend((a, -a))
        if strict:
            row.append(_ONE if c.strict else _ZERO)
        raw.append((row, c.bound))
    if strict:
        raw.append(([_ZERO] * (2 * dimension) + [_ONE], _ONE))

    m = len(raw)
    n_art = sum(1 for _, b in raw if b < 0)
    ncols = n_struct + m + n_art
    art_start = n_struct + m
    rows, rhs, basis = [], [], []
    next_art = art_start
    for i, (coeffs, b) in enumerate(raw):
        full = list(coeffs) + [_ZERO] * (m + n_art)
        full[n_struct + i] = _ONE
        if b < 0:
            full = [-v for v in full]
            b = -b
            full[next_art] = _ONE
            basis.append(next_art)
            next_art += 1
        else:
            basis.append(n_struct + i)
        rows.append(full)
        rhs.append(b)

    tab = SimplexTableau(rows, rhs, basis)
    if n_art:
        phase1 = [_ZERO] * art_start + [-_ONE] * n_art
        tab.maximize(phase1)
        if tab.objective(phase1) < 0:
            return None
        keep = []
        for i, b in enumerate(tab.basis):
            if b < art_start:
                keep.append(i)
                continue
            col = next((j for j in range(art_start) if tab.rows[i][j] != 0), None)
            if col is not None:
                tab.pivot(i, col)
                keep.append(i)
        tab = SimplexTableau([tab.rows[i] for i in keep], [tab.rhs[i] for i in keep], [tab.basis[i] for i in keep])

    if strict:
        phase2 = [_ZERO] * ncols
        phase2[tau] = _ONE
        tab.maximize(phase2, allowed=set(range(art_start)))
        if tab.objective(phase2) <= 0:
            return None

    vals = tab.values() if tab.rows else [_ZERO] * ncols
    return tuple(vals[2 * j] - vals[2 * j + 1] for j in range(dimension))

"""Exact rational simplex.

A revised primal simplex over :class:`fractions.Fraction` with Bland's
anti-cycling rule. :class:`RevisedSimplex` works on the standard form
``min c.x  s.t.  A x = b, x >= 0`` and accepts new columns between solves,
which the column-generation master relies on. :class:`LinearProgram` and
:func:`solve_feasibility` are the convenient front end for feasibility
questions in general row form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Mapping, Optional

ZERO = Fraction(0)
ONE = Fraction(1)


class Unbounded(ArithmeticError):
    pass


class RevisedSimplex:
    """Revised simplex keeping an explicit basis inverse.

    Columns are sparse mappings ``row -> coefficient``. The caller supplies
    an initial feasible basis whose columns form the identity (slacks,
    artificials or seeded unit columns), so ``B^{-1} = I`` at start.
    """

    def __init__(self, b, columns, costs, basis):
        self.m = len(b)
        self.b = [Fraction(v) for v in b]
        if any(v < 0 for v in self.b):
            raise ValueError("right-hand side must be nonnegative")
        self.columns = [dict(c) for c in columns]
        self.costs = [Fraction(c) for c in costs]
        self.basis = list(basis)
        for r, k in enumerate(self.basis):
            if self.columns[k] != {r: ONE}:
                raise ValueError(f"initial basic column {k} is not the unit vector e_{r}")
        self.binv = [[ONE if r == c else ZERO for c in range(self.m)] for r in range(self.m)]
        self.xb = list(self.b)
        self.pivots = 0

    def add_column(self, column: Mapping[int, Fraction], cost) -> int:
        self.columns.append({r: Fraction(v) for r, v in column.items() if v != 0})
        self.costs.append(Fraction(cost))
        return len(self.columns) - 1

    def duals(self) -> list:
        y = [ZERO] * self.m
        for r, k in enumerate(self.basis):
            ck = self.costs[k]
            if ck:
                row = self.binv[r]
                for c in range(self.m):
                    if row[c]:
                        y[c] += ck * row[c]
        return y

    def objective(self) -> Fraction:
        return sum((self.costs[k] * self.xb[r] for r, k in enumerate(self.basis)), ZERO)

    def values(self) -> dict:
        return {k: self.xb[r] for r, k in enumerate(self.basis) if self.xb[r]}

    def _entering(self, y) -> Optional[int]:
        in_basis = set(self.basis)
        for k, col in enumerate(self.columns):
            if k in in_basis:
                continue
            rc = self.costs[k] - sum((y[r] * v for r, v in col.items()), ZERO)
            if rc < 0:
                return k
        return None

    def solve(self, max_pivots: int = 10**6) -> Fraction:
        """Run to optimality and return the objective value."""
        while True:
            y = self.duals()
            k = self._entering(y)
            if k is None:
                return self.objective()
            col = self.columns[k]
            d = [sum((self.binv[r][c] * v for c, v in col.items()), ZERO) for r in range(self.m)]
            leave = None
            best = None
            for r in range(self.m):
                if d[r] > 0:
                    ratio = self.xb[r] / d[r]
                    if best is None or ratio < best or (ratio == best and self.basis[r] < self.basis[leave]):
                        best, leave = ratio, r
            if leave is None:
                raise Unbounded(f"column {k} is an unbounded direction")
            self._pivot(leave, k, d)
            self.pivots += 1
            if self.pivots > max_pivots:
                raise RuntimeError("pivot limit reached")

    def _pivot(self, r: int, k: int, d) -> None:
        piv = d[r]
        prow = [v / piv for v in self.binv[r]]
        xr = self.xb[r] / piv
        for s in range(self.m):
            if s == r or not d[s]:
                continue
            f = d[s]
            row = self.binv[s]
            for c in range(self.m):
                if prow[c]:
                    row[c] -= f * prow[c]
            self.xb[s] -= f * xr
        self.binv[r] = prow
        self.xb[r] = xr
        self.basis[r] = k


@dataclass
class LinearProgram:
    """Feasibility problem over nonnegative variables.

    Variables are arbitrary hashable names and are implicitly ``>= 0``.
    Constraints are ``(coefficients, sense, rhs)`` with sense one of
    ``"<="``, ``">="``, ``"=="``.
    """

    variables: list = field(default_factory=list)
    constraints: list = field(default_factory=list)

    def __post_init__(self):
        self._index = {v: k for k, v in enumerate(self.variables)}

    def add_variable(self, name: Hashable) -> Hashable:
        if name in self._index:
            raise ValueError(f"duplicate variable {name!r}")
        self._index[name] = len(self.variables)
        self.variables.append(name)
        return name

    def add_constraint(self, coeffs: Mapping[Hashable, object], sense: str, rhs) -> None:
        if sense not in ("<=", ">=", "=="):
            raise ValueError(f"bad sense {sense!r}")
        for name in coeffs:
            if name not in self._index:
                raise KeyError(f"constraint references undeclared variable {name!r}")
        self.constraints.append(({v: Fraction(c) for v, c in coeffs.items() if c != 0}, sense, Fraction(rhs)))


def solve_feasibility(lp: LinearProgram) -> Optional[dict]:
    """Return an exact feasible point ``{variable: value}`` or ``None``.

    Phase one of the simplex method: slacks for ``<=`` rows, surplus plus
    artificial for ``>=`` rows, artificial for ``==`` rows; minimize the
    artificial total. Variables absent from the returned dict are zero.
    """
    nvars = len(lp.variables)
    index = {v: k for k, v in enumerate(lp.variables)}
    columns = [dict() for _ in range(nvars)]
    costs = [ZERO] * nvars
    b = []
    basis = []
    for r, (coeffs, sense, rhs) in enumerate(lp.constraints):
        sign = 1
        if rhs < 0:
            sign = -1
            sense = {"<=": ">=", ">=": "<=", "==": "=="}[sense]
        for name, c in coeffs.items():
            columns[index[name]][r] = sign * c
        b.append(sign * rhs)
        if sense == "<=":
            columns.append({r: ONE})
            costs.append(ZERO)
            basis.append(len(columns) - 1)
            continue
        if sense == ">=":
            columns.append({r: -ONE})
            costs.append(ZERO)
        columns.append({r: ONE})
        costs.append(ONE)
        basis.append(len(columns) - 1)
    if not b:
        return {}
    engine = RevisedSimplex(b, columns, costs, basis)
    if engine.solve() != 0:
        return None
    return {lp.variables[k]: v for k, v in engine.values().items() if k < nvars}


def check_point(lp: LinearProgram, point: Mapping) -> bool:
    """Exact check that ``point`` satisfies every row and nonnegativity."""
    if any(v < 0 for v in point.values()):
        return False
    for coeffs, sense, rhs in lp.constraints:
        lhs = sum((c * point.get(v, ZERO) for v, c in coeffs.items()), ZERO)
        if sense == "<=" and lhs > rhs or sense == ">=" and lhs < rhs or sense == "==" and lhs != rhs:
            return False
    return True

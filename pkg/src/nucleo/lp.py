"""Exact rational linear programming.

Problems have the form ``min c.x`` subject to rows ``a.x >= b`` or ``a.x = b``
with every variable free.  They are solved through the dual,
``max b.u  s.t.  sum_i u_i a_i = c,  u >= 0``, by a revised primal simplex whose
basis is only ``len(x)`` columns wide.  Each constraint is a dual column, so
adding a cutting plane just appends a column and the current basis stays
feasible: cut loops warm-start for free.  Pivoting uses Dantzig's rule and
falls back to Bland's rule after a run of degenerate pivots.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ContractError, InfeasibleError, UnboundedError
from .linalg import Echelon, dot

GE = ">="
EQ = "="

_DEGENERATE_STREAK = 20
_DUAL_PIVOT_CAP = 50

try:
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    _Q = Fraction

_ZERO = _Q(0)
_MINUS_ONE = _Q(-1)


def _to_fraction(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


@dataclass(frozen=True)
class LinearConstraint:
    coefficients: tuple
    rhs: Fraction
    relation: str = GE

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(Fraction(a) for a in self.coefficients))
        object.__setattr__(self, "rhs", Fraction(self.rhs))
        if self.relation not in (GE, EQ):
            raise ValueError(f"relation must be '>=' or '=', got {self.relation!r}")

    def slack(self, x: Sequence) -> Fraction:
        return dot(self.coefficients, x) - self.rhs

    def satisfied_by(self, x: Sequence) -> bool:
        s = self.slack(x)
        return s == 0 if self.relation == EQ else s >= 0


@dataclass(frozen=True)
class LpProblem:
    """``min objective . x`` over the constraints; the default objective is the last variable."""

    constraints: tuple
    objective: tuple | None = None

    @property
    def nvars(self) -> int:
        if self.objective is not None:
            return len(self.objective)
        return len(self.constraints[0].coefficients)

    def cost(self) -> tuple:
        if self.objective is not None:
            return tuple(Fraction(c) for c in self.objective)
        return tuple(Fraction(int(k == self.nvars - 1)) for k in range(self.nvars))


@dataclass(frozen=True)
class AffineBasis:
    """Linearly independent equations describing an affine subspace."""

    equations: tuple = field(default_factory=tuple)

    def satisfied_by(self, x: Sequence) -> bool:
        return all(e.slack(x) == 0 for e in self.equations)


class DualSimplex:
    """Incremental exact LP solver; see the module docstring.

    Arithmetic runs on ``gmpy2.mpq`` when available (exact, C speed); results
    come back as :class:`~fractions.Fraction`.
    """

    def __init__(self, nvars: int, objective: Sequence | None = None):
        self.nvars = nvars
        self.cols: list[list[tuple]] = []  # sparse dual columns
        self.costs: list = []
        self.pivots = 0
        self._basis: list[int] | None = None
        self._binv: list[list] = []
        self._xb: list = []
        self._art_sign: list[int] = []
        self._warm = False
        self.set_objective(objective if objective is not None else [0] * nvars)

    # -- building ---------------------------------------------------------
    def set_objective(self, c: Sequence):
        if len(c) != self.nvars:
            raise ValueError("objective length mismatch")
        self.c = [_Q(x) for x in c]
        self._warm = self._basis is not None

    def add(self, a: Sequence, b, relation: str = GE) -> None:
        if len(a) != self.nvars:
            raise ValueError("constraint length mismatch")
        col = [(k, _Q(x)) for k, x in enumerate(a) if x]
        b = _Q(b)
        self.cols.append(col)
        self.costs.append(b)
        if relation == EQ:
            self.cols.append([(k, -x) for k, x in col])
            self.costs.append(-b)

    def add_constraint(self, con: LinearConstraint) -> None:
        self.add(con.coefficients, con.rhs, con.relation)

    # -- simplex ----------------------------------------------------------
    def _column(self, j: int) -> list[tuple]:
        if j >= 0:
            return self.cols[j]
        r = -j - 1
        return [(r, _Q(self._art_sign[r]))]

    def _ftran(self, j: int) -> list:
        col = self._column(j)
        out = []
        for row in self._binv:
            s = _ZERO
            for k, v in col:
                if row[k]:
                    s += row[k] * v
            out.append(s)
        return out

    def _prices(self, cost) -> list:
        n = self.nvars
        pi = [_ZERO] * n
        for r, j in enumerate(self._basis):
            cb = cost(j)
            if cb:
                row = self._binv[r]
                for k in range(n):
                    if row[k]:
                        pi[k] += cb * row[k]
        return pi

    def _pivot(self, r: int, j: int, d: list) -> None:
        binv, xb = self._binv, self._xb
        piv = d[r]
        prow = [x / piv for x in binv[r]]
        nz = [k for k, x in enumerate(prow) if x]
        xr = xb[r] / piv
        for i in range(self.nvars):
            f = d[i]
            if i != r and f:
                row = binv[i]
                for k in nz:
                    row[k] -= f * prow[k]
                xb[i] -= f * xr
        binv[r] = prow
        xb[r] = xr
        self._basis[r] = j
        self.pivots += 1

    def _run(self, cost, allow_artificial: bool) -> None:
        n = self.nvars
        streak = 0
        while True:
            basis = self._basis
            pi = self._prices(cost)
            in_basis = set(basis)
            bland = streak >= _DEGENERATE_STREAK
            enter, best = None, _ZERO
            candidates = range(len(self.cols))
            if allow_artificial:
                candidates = list(candidates) + [-(r + 1) for r in range(n)]
            for j in candidates:
                if j in in_basis:
                    continue
                rc = cost(j)
                for k, v in self._column(j):
                    rc -= pi[k] * v
                if rc > best:
                    enter, best = j, rc
                    if bland:
                        break
            if enter is None:
                return
            d = self._ftran(enter)
            leave, ratio = None, None
            for r in range(n):
                if d[r] > 0:
                    t = self._xb[r] / d[r]
                    if (ratio is None or t < ratio
                            or (t == ratio and _bland_key(basis[r]) < _bland_key(basis[leave]))):
                        leave, ratio = r, t
            if leave is None:
                raise InfeasibleError("primal infeasible (dual unbounded)")
            streak = streak + 1 if ratio == 0 else 0
            self._pivot(leave, enter, d)

    def _phase1(self) -> None:
        n = self.nvars
        self._art_sign = [1 if x >= 0 else -1 for x in self.c]
        self._basis = [-(r + 1) for r in range(n)]
        self._binv = [[_Q(self._art_sign[r]) if k == r else _ZERO for k in range(n)]
                      for r in range(n)]
        self._xb = [abs(x) for x in self.c]
        self._run(lambda j: _MINUS_ONE if j < 0 else _ZERO, allow_artificial=True)
        if any(self._xb[r] != 0 for r in range(n) if self._basis[r] < 0):
            self._basis = None
            raise UnboundedError("objective unbounded below (or constraints infeasible)")
        for r in range(n):
            if self._basis[r] >= 0:
                continue
            row = self._binv[r]
            for j in range(len(self.cols)):
                if j in self._basis:
                    continue
                if any(row[k] * v for k, v in self.cols[j]):
                    self._pivot(r, j, self._ftran(j))
                    break

    def _rewarm(self) -> bool:
        """Re-optimize after an objective change by dual simplex; False if a restart is needed."""
        n = self.nvars
        self._xb = [sum((row[k] * self.c[k] for k in range(n) if row[k]), _ZERO)
                    for row in self._binv]
        if any(self._xb[r] != 0 for r in range(n) if self._basis[r] < 0):
            return False
        costs = self.costs
        cost = lambda j: costs[j] if j >= 0 else _ZERO  # noqa: E731
        pi = self._prices(cost)
        rcs = {}
        for j, col in enumerate(self.cols):
            rc = costs[j]
            for k, v in col:
                rc -= pi[k] * v
            rcs[j] = rc
        if any(rcs[j] > 0 for j in rcs if j not in set(self._basis)):
            return False
        for _ in range(_DUAL_PIVOT_CAP * n):
            leave = None
            for r in range(n):
                if self._xb[r] < 0 and (leave is None
                                        or _bland_key(self._basis[r]) < _bland_key(self._basis[leave])):
                    leave = r
            if leave is None:
                return True
            row = self._binv[leave]
            in_basis = set(self._basis)
            enter, ratio = None, None
            for j, col in enumerate(self.cols):
                if j in in_basis:
                    continue
                alpha = _ZERO
                for k, v in col:
                    if row[k]:
                        alpha += row[k] * v
                if alpha < 0:
                    t = rcs[j] / alpha
                    if ratio is None or t < ratio:
                        enter, ratio = j, t
            if enter is None:
                raise UnboundedError("objective unbounded below")
            self._pivot(leave, enter, self._ftran(enter))
            pi = self._prices(cost)
            for j, col in enumerate(self.cols):
                rc = costs[j]
                for k, v in col:
                    rc -= pi[k] * v
                rcs[j] = rc
        return False

    def solve(self) -> tuple[Fraction, list[Fraction]]:
        """Return ``(optimal value, optimal vertex)``."""
        if self._basis is not None and self._warm:
            self._warm = False
            if not self._rewarm():
                self._basis = None
        if self._basis is None:
            self._phase1()
        costs = self.costs
        self._run(lambda j: costs[j] if j >= 0 else _ZERO, allow_artificial=False)
        x = [_to_fraction(v) for v in self._prices(lambda j: costs[j] if j >= 0 else _ZERO)]
        return dot([_to_fraction(v) for v in self.c], x), x


def _bland_key(j: int) -> tuple:
    return (0, j) if j >= 0 else (1, -j)


def _engine(constraints: Iterable[LinearConstraint], nvars: int, objective) -> DualSimplex:
    eng = DualSimplex(nvars, objective)
    for con in constraints:
        eng.add_constraint(con)
    return eng


def solve_min(lp: LpProblem) -> tuple[Fraction, list[Fraction]]:
    """Exact optimum value and an optimal vertex of ``lp``."""
    return _engine(lp.constraints, lp.nvars, lp.cost()).solve()


def feasible_point(constraints: Sequence[LinearConstraint], nvars: int) -> list[Fraction]:
    return _engine(constraints, nvars, None).solve()[1]


def face_analysis(
    equalities: Sequence[LinearConstraint],
    inequalities: Sequence[LinearConstraint],
    nvars: int,
    start: Sequence | None = None,
) -> tuple[list[Fraction], set[int]]:
    """Relative-interior point of the polyhedron and its implied equalities.

    Returns ``(x, implied)`` where ``implied`` indexes the inequalities that hold
    with equality everywhere on the polyhedron; every other inequality is
    strictly slack at ``x``.  Each tight inequality is either shown to be in the
    span of known equalities, or maximized once: a positive maximum gives a
    point to average with ``x``, a zero maximum marks it implied.
    """
    eqs = [LinearConstraint(e.coefficients, e.rhs, EQ) for e in equalities]
    system = eqs + list(inequalities)
    x = list(start) if start is not None else feasible_point(system, nvars)
    for con in system:
        if not con.satisfied_by(x):
            raise ContractError("start point is infeasible")
    span = Echelon(nvars, (e.coefficients for e in eqs))
    implied: set[int] = set()
    for i, con in enumerate(inequalities):
        if con.slack(x) != 0:
            continue
        if span.contains(con.coefficients):
            implied.add(i)
            continue
        cap = LinearConstraint(tuple(-a for a in con.coefficients), -(con.rhs + 1))
        eng = _engine(system + [cap], nvars, tuple(-a for a in con.coefficients))
        _, y = eng.solve()
        if con.slack(y) > 0:
            x = [(u + v) / 2 for u, v in zip(x, y)]
        else:
            implied.add(i)
            span.add(con.coefficients)
    return x, implied


def _basis_from(rows: Iterable[LinearConstraint], nvars: int) -> AffineBasis:
    ech = Echelon(nvars)
    kept = []
    for con in rows:
        if ech.add(con.coefficients):
            kept.append(LinearConstraint(con.coefficients, con.rhs, EQ))
    return AffineBasis(tuple(kept))


def optimal_face_basis(lp: LpProblem, opt) -> AffineBasis:
    """Independent equations whose solutions, within the feasible set, are the optimizers."""
    opt = Fraction(opt)
    value, _ = solve_min(lp)
    if value != opt:
        raise ContractError(f"{opt} is not the optimum ({value})")
    n = lp.nvars
    obj = LinearConstraint(lp.cost(), opt, EQ)
    eqs = [c for c in lp.constraints if c.relation == EQ] + [obj]
    ineqs = [c for c in lp.constraints if c.relation == GE]
    _, implied = face_analysis(eqs, ineqs, n)
    return _basis_from(eqs + [ineqs[i] for i in sorted(implied)], n)


def relative_interior_point(
    equalities: AffineBasis | Sequence[LinearConstraint],
    inequalities: Sequence[LinearConstraint],
) -> list[Fraction]:
    """A point satisfying the equalities and every non-implied inequality strictly."""
    eqs = list(equalities.equations if isinstance(equalities, AffineBasis) else equalities)
    rows = eqs + list(inequalities)
    if not rows:
        raise ValueError("empty system")
    n = len(rows[0].coefficients)
    x, _ = face_analysis(eqs, inequalities, n)
    return x


def affine_rank(basis: AffineBasis | Sequence[LinearConstraint]) -> int:
    eqs = list(basis.equations if isinstance(basis, AffineBasis) else basis)
    if not eqs:
        return 0
    return len(Echelon(len(eqs[0].coefficients), (e.coefficients for e in eqs)))

"""Nucleolus of a weighted voting game by successive least-core LPs.

Stage ``j`` minimizes ``eps`` subject to: ``p`` is an imputation, every
coalition fixed at an earlier stage keeps the deficit it had there, and every
other coalition has deficit at most ``eps``.  The coalitions fixed at a stage
are never listed.  Only the distinct deficit levels ``eps^t`` and the number
``s^t`` of coalitions at each level are kept, and feasibility of a candidate
is decided by comparing them with the counting profile of the candidate
(:mod:`nucleo.dp_oracle`).  The LPs are solved exactly by cutting planes
driven by that separation oracle.

After each stage the optimal face is explored with the same oracle: a
direction orthogonal to the points found so far is maximized and minimized
over the face; either a new affinely independent point appears or the
direction is an implied equation of the face.  The barycenter of the final
point set lies in the relative interior of the face, which fixes ``s^j``, and
the collected equations are the face basis passed on to the next stage.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .dp_oracle import DeficitProfile, build_tables, peel_witness, profile, witness_at
from .errors import ContractError
from .game import Coalition, Game, Payoff, coalition_value, members
from .linalg import Echelon, dot, nullspace
from .lp import EQ, GE, AffineBasis, DualSimplex, LinearConstraint

log = logging.getLogger(__name__)

FEASIBLE = "feasible"
CASE_A, CASE_B, CASE_C, SIMPLE = "case-a", "case-b", "case-c", "simple"


@dataclass(frozen=True)
class SolverConfig:
    certify_samples: int = 3
    seed: int = 0
    max_iterations: int | None = None  # oracle calls per stage; default 2**n * (n + 1)
    debug: bool = False
    record_verdicts: bool = False


@dataclass(frozen=True)
class StageRecord:
    index: int
    epsilon: Fraction
    tight_count: int
    face_basis: AffineBasis  # over (p_1..p_n, eps); p-rows plus the row eps = epsilon
    interior_point: Payoff
    rank: int
    cuts: int = 0  # size of the generated-constraint pool after this stage
    oracle_calls: int = 0
    lp_solves: int = 0

    def p_equations(self) -> list[LinearConstraint]:
        return [e for e in self.face_basis.equations if e.coefficients[-1] == 0]


@dataclass(frozen=True)
class Violated:
    constraint: LinearConstraint
    witness: Coalition | None
    kind: str

    @property
    def feasible(self):
        return False


@dataclass(frozen=True)
class Feasible:
    @property
    def feasible(self):
        return True


@dataclass
class VerdictRecord:
    stage: int
    candidate: tuple
    verdict: Violated


def coalition_row(game: Game, s: Coalition) -> LinearConstraint:
    """``p(S) + eps >= v(S)``: the row of coalition ``S`` in a stage LP."""
    coef = tuple(s >> i & 1 for i in range(game.n)) + (1,)
    return LinearConstraint(coef, coalition_value(game, s), GE)


def _unit(nv: int, k: int, scale=1) -> tuple:
    return tuple(scale if i == k else 0 for i in range(nv))


def _check_history(history: Sequence[StageRecord]):
    for a, b in zip(history, history[1:]):
        if not b.epsilon < a.epsilon:
            raise ContractError("stage epsilons must be strictly decreasing")


def _simple_violation(game: Game, history, p, eps) -> Violated | None:
    n = game.n
    nv = n + 1
    for i, x in enumerate(p):
        if x < 0:
            return Violated(LinearConstraint(_unit(nv, i), 0, GE), None, SIMPLE)
    if sum(p) != 1:
        return Violated(LinearConstraint((1,) * n + (0,), 1, EQ), None, SIMPLE)
    if history:
        last = history[-1].epsilon
        if eps > last:
            return Violated(LinearConstraint(_unit(nv, n, -1), -last, GE), None, SIMPLE)
        point = tuple(p) + (eps,)
        for rec in history:
            for row in rec.p_equations():
                if row.slack(point) != 0:
                    return Violated(row, None, SIMPLE)
    return None


def classify(history: Sequence[StageRecord], eps, prof: DeficitProfile) -> tuple[str, int] | None:
    """Failing condition ``(kind, level)`` of a candidate, or None when feasible.

    Assumes the candidate passed the simple checks.  ``level`` is 1-based.
    """
    j = len(history) + 1
    boundary = bool(history) and eps == history[-1].epsilon
    for t, rec in enumerate(history, start=1):
        if t > len(prof):
            raise ContractError("profile shorter than the stage history")
        m, cnt = prof.m[t - 1], prof.counts[t - 1]
        if m != rec.epsilon:
            if m < rec.epsilon:
                raise ContractError("deficit level below a fixed level despite basis equations")
            return CASE_A, t
        if boundary and t == j - 1:
            break
        if cnt != rec.tight_count:
            if cnt < rec.tight_count:
                raise ContractError("fewer coalitions at a fixed level than certified")
            return CASE_B, t
    if not boundary and len(prof) >= j and prof.m[j - 1] > eps:
        return CASE_C, j
    return None


def identify_violation(
    game: Game, history: Sequence[StageRecord], candidate, prof: DeficitProfile
) -> tuple[LinearConstraint, Coalition, str]:
    p, eps = candidate
    found = classify(history, eps, prof)
    if found is None:
        raise ContractError("identify_violation called on a feasible candidate")
    kind, level = found
    if kind == CASE_B:
        ref = history[level - 1]
        s = peel_witness(game, p, ref.interior_point, ref.epsilon, depth=level)
    else:
        tables = build_tables(game, p, level, with_witnesses=True)
        s = witness_at(tables, game, prof.m[level - 1])
    return coalition_row(game, s), s, kind


def separation_oracle(
    game: Game, history: Sequence[StageRecord], candidate, debug: bool = False
) -> Violated | Feasible:
    """Decide whether ``candidate = (p, eps)`` is feasible for the next stage LP."""
    _check_history(history)
    p, eps = tuple(Fraction(x) for x in candidate[0]), Fraction(candidate[1])
    simple = _simple_violation(game, history, p, eps)
    if simple is not None:
        return simple
    j = len(history) + 1
    prof = profile(game, p, min(j, game.n + 1))
    verdict: Violated | Feasible
    if classify(history, eps, prof) is None:
        verdict = Feasible()
    else:
        verdict = Violated(*identify_violation(game, history, (p, eps), prof))
    if debug and history and eps == history[-1].epsilon:
        # a point on the boundary eps = eps^{j-1} must also be feasible for the previous LP
        other = separation_oracle(game, history[:-1], (p, eps))
        if other.feasible != verdict.feasible:
            raise ContractError("boundary-case oracle disagrees with the previous-stage oracle")
    return verdict


class NucleolusSolver:
    def __init__(self, game: Game, config: SolverConfig | None = None):
        self.game = game
        self.config = config or SolverConfig()
        self.history: list[StageRecord] = []
        self.cuts: list[Coalition] = []
        self._cut_set: set[Coalition] = set()
        self.verdicts: list[VerdictRecord] = []
        self._rng = random.Random(self.config.seed)
        n = game.n
        self.max_iterations = self.config.max_iterations or (1 << n) * (n + 1)

    @property
    def done(self) -> bool:
        return bool(self.history) and self.history[-1].rank == self.game.n + 1

    # -- oracle-driven cut loop ------------------------------------------------
    def _cut_loop(self, eng: DualSimplex, stats: dict) -> tuple[Fraction, list[Fraction]]:
        n = self.game.n
        for _ in range(self.max_iterations):
            value, x = eng.solve()
            stats["lp_solves"] += 1
            stats["oracle_calls"] += 1
            verdict = separation_oracle(
                self.game, self.history, (x[:n], x[n]), debug=self.config.debug
            )
            if verdict.feasible:
                return value, x
            if self.config.record_verdicts:
                self.verdicts.append(
                    VerdictRecord(len(self.history) + 1, (tuple(x[:n]), x[n]), verdict)
                )
            if verdict.witness is None:
                raise ContractError(f"candidate violates a built-in row: {verdict.constraint}")
            s = verdict.witness
            if s in self._cut_set:
                raise ContractError(f"oracle returned a cut already in the LP: {members(s)}")
            self._cut_set.add(s)
            self.cuts.append(s)
            eng.add_constraint(verdict.constraint)
        raise ContractError(f"cut loop exceeded {self.max_iterations} iterations")

    def _base_engine(self, objective) -> DualSimplex:
        game, n = self.game, self.game.n
        nv = n + 1
        eng = DualSimplex(nv, objective)
        eng.add((1,) * n + (0,), 1, EQ)
        for i in range(n):
            eng.add(_unit(nv, i), 0)
        eng.add(_unit(nv, n), -1)  # deficits never drop below -1
        if self.history:
            last = self.history[-1]
            eng.add(_unit(nv, n, -1), -last.epsilon)
            for row in last.p_equations():
                eng.add_constraint(row)
        for s in self.cuts:
            eng.add_constraint(coalition_row(game, s))
        return eng

    # -- stages -----------------------------------------------------------------
    def solve_stage(self) -> StageRecord:
        if self.done:
            raise ContractError("the nucleolus is already determined")
        game, n = self.game, self.game.n
        nv = n + 1
        j = len(self.history) + 1
        stats = {"lp_solves": 0, "oracle_calls": 0}

        eng = self._base_engine(_unit(nv, n))
        eps, x0 = self._cut_loop(eng, stats)
        log.debug("stage %d: eps = %s after %d cuts", j, eps, len(self.cuts))

        # optimal face: same system with eps pinned
        face = self._base_engine(None)
        face.add(_unit(nv, n), eps, EQ)
        equations = Echelon(nv)
        eq_rows: list[LinearConstraint] = []

        def add_equation(row: LinearConstraint):
            if equations.add(row.coefficients):
                eq_rows.append(row)

        add_equation(LinearConstraint((1,) * n + (0,), 1, EQ))
        add_equation(LinearConstraint(_unit(nv, n), eps, EQ))
        if self.history:
            for row in self.history[-1].p_equations():
                add_equation(row)

        points = [x0]
        spread = Echelon(nv)
        while len(equations) + len(spread) < nv:
            c = next(v for v in nullspace(spread.rows, nv) if not equations.contains(v))
            base = dot(c, x0)
            for sign in (-1, 1):
                face.set_objective([sign * a for a in c])
                _, y = self._cut_loop(face, stats)
                if dot(c, y) != base:
                    points.append(y)
                    spread.add([a - b for a, b in zip(y, x0)])
                    break
            else:
                row = LinearConstraint(tuple(c), base, EQ)
                add_equation(row)
                face.add_constraint(row)

        k = len(points)
        centre = [sum(col) / k for col in zip(*points)]
        interior = tuple(centre[:n])
        depth = min(j, n + 1)
        prof = profile(game, interior, depth)
        self._certify(prof, eps, j)
        self._certify_samples(points, prof, depth)
        tight = prof.counts[j - 1]

        basis = AffineBasis(tuple(_pin_eps(row, eps) for row in eq_rows))
        rank = len(equations)
        record = StageRecord(
            index=j,
            epsilon=eps,
            tight_count=tight,
            face_basis=basis,
            interior_point=interior,
            rank=rank,
            cuts=len(self.cuts),
            oracle_calls=stats["oracle_calls"],
            lp_solves=stats["lp_solves"],
        )
        if self.history and rank <= self.history[-1].rank:
            raise ContractError("affine rank did not increase")
        self.history.append(record)
        self._retain_cuts(interior, eps)
        return record

    def _certify(self, prof: DeficitProfile, eps, j):
        for t, rec in enumerate(self.history, start=1):
            if prof.m[t - 1] != rec.epsilon or prof.counts[t - 1] != rec.tight_count:
                raise ContractError(f"interior point breaks the certified level {t}")
        if len(prof) < j or prof.m[j - 1] != eps:
            raise ContractError("interior point does not attain the stage optimum")

    def _certify_samples(self, points, prof, depth):
        """Random strictly positive mixtures of the face points must share one profile."""
        n = self.game.n
        for _ in range(self.config.certify_samples if len(points) > 1 else 0):
            lam = [Fraction(self._rng.randint(1, 1000)) for _ in points]
            tot = sum(lam)
            y = tuple(sum(l * pt[i] for l, pt in zip(lam, points)) / tot for i in range(n))
            if profile(self.game, y, depth) != prof:
                raise ContractError("relative-interior samples disagree on the deficit profile")

    def _retain_cuts(self, interior, eps):
        # cuts fixed at this stage are implied by the new face basis
        game = self.game
        keep = []
        for s in self.cuts:
            d = coalition_value(game, s) - sum(interior[i] for i in members(s))
            if d < eps:
                keep.append(s)
        self.cuts = keep
        self._cut_set = set(keep)

    def run(self) -> tuple[Payoff, list[StageRecord]]:
        while not self.done:
            if len(self.history) >= self.game.n:
                raise ContractError("more than n stages")
            self.solve_stage()
        return self.history[-1].interior_point, list(self.history)


def _pin_eps(row: LinearConstraint, eps) -> LinearConstraint:
    """Rewrite a face equation without its eps term, except the row eps = value itself."""
    coef = row.coefficients
    ce = coef[-1]
    if ce == 0 or not any(coef[:-1]):
        return row
    return LinearConstraint(coef[:-1] + (0,), row.rhs - ce * eps, EQ)


def solve_stage(game: Game, history: Sequence[StageRecord], config: SolverConfig | None = None):
    """Stand-alone stage solve from a given history (no cuts carried over)."""
    solver = NucleolusSolver(game, config)
    solver.history = list(history)
    return solver.solve_stage()


def nucleolus(game: Game, config: SolverConfig | None = None) -> tuple[Payoff, list[StageRecord]]:
    return NucleolusSolver(game, config).run()


def least_core(game: Game, config: SolverConfig | None = None) -> tuple[Fraction, Payoff]:
    rec = NucleolusSolver(game, config).solve_stage()
    return rec.epsilon, rec.interior_point

"""Brute-force reference over all ``2**n`` coalitions.

Everything here is deliberately exponential and guarded by a size limit.  It
is the independent ground truth the counting oracle and the solver are
checked against.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .dp_oracle import DeficitProfile
from .errors import DimensionMismatchError, GuardExceededError
from .game import Coalition, Game, Payoff, check_imputation, payoff
from .lp import EQ, GE, LinearConstraint, LpProblem, affine_rank, face_analysis, solve_min

DEFICIT_GUARD = 20
NUCLEOLUS_GUARD = 12

_INT64_SAFE = 1 << 61


def _guard(game: Game, limit: int):
    if game.n > limit:
        raise GuardExceededError(f"n = {game.n} exceeds the enumeration guard {limit}")


def coalition_values(game: Game) -> list[int]:
    """``v(S)`` for every mask ``S`` in increasing mask order."""
    wsum = [0]
    for w in game.weights:
        wsum += [s + w for s in wsum]
    q = game.quota
    return [1 if s >= q else 0 for s in wsum]


def _scaled_deficits(game: Game, p: Sequence[Fraction]):
    """Deficits of all coalitions (mask order) as integers over a common denominator."""
    den = math.lcm(*(x.denominator for x in p))
    ints = [x.numerator * (den // x.denominator) for x in p]
    values = coalition_values(game)
    big = max([den] + [abs(v) for v in ints]) * (game.n + 1)
    if big < _INT64_SAFE:
        sums = np.zeros(1, dtype=np.int64)
        for v in ints:
            sums = np.concatenate([sums, sums + v])
        return np.asarray(values, dtype=np.int64) * den - sums, den
    sums = [0]
    for v in ints:
        sums += [s + v for s in sums]
    return [den * v - s for v, s in zip(values, sums)], den


@dataclass(frozen=True, eq=False)
class DeficitVector:
    """All ``2**n`` deficits sorted non-increasing, stored as ``numerators / denominator``."""

    numerators: tuple
    denominator: int

    @classmethod
    def from_values(cls, values) -> "DeficitVector":
        values = [Fraction(v) for v in values]
        den = math.lcm(*(v.denominator for v in values)) if values else 1
        nums = sorted((v.numerator * (den // v.denominator) for v in values), reverse=True)
        return cls(tuple(nums), den)

    @property
    def sorted_deficits(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(a, self.denominator) for a in self.numerators)

    def __len__(self):
        return len(self.numerators)

    def __eq__(self, other):
        if not isinstance(other, DeficitVector):
            return NotImplemented
        return len(self) == len(other) and lex_compare(self, other) == 0


def deficit_vector(game: Game, p: Sequence, guard: int = DEFICIT_GUARD) -> DeficitVector:
    _guard(game, guard)
    p = check_imputation(game, p)
    d, den = _scaled_deficits(game, p)
    if isinstance(d, np.ndarray):
        nums = tuple(int(v) for v in np.sort(d)[::-1])
    else:
        nums = tuple(sorted(d, reverse=True))
    return DeficitVector(nums, den)


def lex_compare(a: DeficitVector, b: DeficitVector) -> int:
    """-1, 0 or 1 as ``a`` is lexicographically less than, equal to or greater than ``b``."""
    if len(a) != len(b):
        raise DimensionMismatchError("deficit vectors differ in length")
    ad, bd = a.denominator, b.denominator
    for x, y in zip(a.numerators, b.numerators):
        lhs, rhs = x * bd, y * ad
        if lhs != rhs:
            return -1 if lhs < rhs else 1
    return 0


def all_deficits(game: Game, p: Sequence, guard: int = DEFICIT_GUARD) -> list[Fraction]:
    """Deficit of every coalition, indexed by mask. Works for any rational ``p``."""
    _guard(game, guard)
    p = payoff(p)
    if len(p) != game.n:
        raise DimensionMismatchError(f"payoff has {len(p)} entries, game has {game.n} agents")
    d, den = _scaled_deficits(game, p)
    return [Fraction(int(v), den) for v in d]


def brute_profile(game: Game, p: Sequence, j: int, guard: int = DEFICIT_GUARD) -> DeficitProfile:
    """Top ``j`` distinct deficits and their exact counts, by enumeration."""
    if j < 1:
        raise ValueError("j must be >= 1")
    _guard(game, guard)
    p = payoff(p)
    if len(p) != game.n:
        raise DimensionMismatchError(f"payoff has {len(p)} entries, game has {game.n} agents")
    d, den = _scaled_deficits(game, p)
    counts = Counter(int(v) for v in d)
    top = sorted(counts, reverse=True)[:j]
    return DeficitProfile(tuple(Fraction(v, den) for v in top), tuple(counts[v] for v in top))


@dataclass(frozen=True)
class BruteStage:
    epsilon: Fraction
    tight: frozenset  # coalitions newly fixed at this stage
    point: Payoff  # relative-interior optimizer
    rank: int  # affine rank of the optimal face, in (p, eps) space


def brute_stages(game: Game, guard: int = NUCLEOLUS_GUARD) -> list[BruteStage]:
    """Successive least-core LPs with every coalition listed explicitly."""
    _guard(game, guard)
    n = game.n
    nv = n + 1
    values = coalition_values(game)
    rows = [tuple(Fraction(s >> i & 1) for i in range(n)) for s in range(1 << n)]
    base_eq = [LinearConstraint((1,) * n + (0,), 1, EQ)]
    nonneg = [LinearConstraint(tuple(int(k == i) for k in range(nv)), 0) for i in range(n)]
    fixed: dict[Coalition, Fraction] = {}
    stages: list[BruteStage] = []
    while True:
        eqs = base_eq + [
            LinearConstraint(rows[s] + (0,), values[s] - e, EQ) for s, e in fixed.items()
        ]
        free = [s for s in range(1 << n) if s not in fixed]
        ineqs = nonneg + [LinearConstraint(rows[s] + (1,), values[s], GE) for s in free]
        eps, _ = solve_min(LpProblem(tuple(eqs + ineqs)))
        face_eqs = eqs + [LinearConstraint((0,) * n + (1,), eps, EQ)]
        x, implied = face_analysis(face_eqs, ineqs, nv)
        tight = frozenset(free[i - n] for i in implied if i >= n)
        for s in tight:
            fixed[s] = eps
        rank = affine_rank(face_eqs + [ineqs[i] for i in implied])
        stages.append(BruteStage(eps, tight, tuple(x[:n]), rank))
        if rank == nv:
            return stages


def brute_nucleolus(game: Game, guard: int = NUCLEOLUS_GUARD) -> Payoff:
    return brute_stages(game, guard)[-1].point


def brute_least_core(game: Game, guard: int = NUCLEOLUS_GUARD) -> tuple[Fraction, Payoff]:
    _guard(game, guard)
    n = game.n
    values = coalition_values(game)
    cons = [LinearConstraint((1,) * n + (0,), 1, EQ)]
    cons += [LinearConstraint(tuple(int(k == i) for k in range(n + 1)), 0) for i in range(n)]
    cons += [
        LinearConstraint(tuple(s >> i & 1 for i in range(n)) + (1,), values[s])
        for s in range(1 << n)
    ]
    eps, x = solve_min(LpProblem(tuple(cons)))
    return eps, tuple(x[:n])

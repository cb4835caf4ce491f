"""Pseudopolynomial counting of coalition payments and deficits.

For every agent prefix ``{1..k}`` and every total weight ``w`` the tables keep
the ``j`` smallest *distinct* payments ``p(S)`` over coalitions ``S`` of that
prefix with ``w(S) == w``, together with how many coalitions receive each
payment and (optionally) one witness coalition per payment.  The largest
deficits of the whole game are then read off the last layer, because within a
weight column the deficit ``I_w - p(S)`` is decreasing in the payment.

Payments are held as integers over a common denominator ``scale`` so the inner
loop never touches :class:`~fractions.Fraction`.  Layer ``k = 0`` (the empty
prefix) holds only the empty coalition at weight 0, which makes zero-weight
agents and the empty coalition need no special casing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import ContractError, DimensionMismatchError, NotFoundError, ValidationError
from .game import Coalition, Game


@dataclass(frozen=True)
class DeficitProfile:
    """Top distinct deficits ``m`` (strictly decreasing) and their coalition counts."""

    m: tuple[Fraction, ...]
    counts: tuple[int, ...]

    def __post_init__(self):
        if len(self.m) != len(self.counts):
            raise ContractError("profile values and counts differ in length")

    def __len__(self):
        return len(self.m)


def _scale_of(p: Sequence[Fraction]) -> int:
    return math.lcm(*(Fraction(x).denominator for x in p)) if p else 1


class DpTables:
    """Immutable result of :func:`build_tables`.

    ``layers[k][w]`` is a tuple of entries sorted by payment; each entry is
    ``(payment * scale, count)`` or ``(payment * scale, count, witness_mask)``.
    """

    __slots__ = ("game", "payoff", "levels", "scale", "layers", "with_witnesses")

    def __init__(self, game, payoff, levels, scale, layers, with_witnesses):
        self.game = game
        self.payoff = payoff
        self.levels = levels
        self.scale = scale
        self.layers = layers
        self.with_witnesses = with_witnesses

    def _entry(self, t: int, k: int, w: int):
        if not 0 <= k <= self.game.n or not 1 <= t <= self.levels:
            raise IndexError((t, k, w))
        col = self.layers[k]
        if 0 <= w < len(col) and t <= len(col[w]):
            return col[w][t - 1]
        return None

    def x(self, t: int, k: int, w: int):
        """t-th smallest distinct payment (1-based t), or ``math.inf`` if absent."""
        e = self._entry(t, k, w)
        return math.inf if e is None else Fraction(e[0], self.scale)

    def y(self, t: int, k: int, w: int) -> int:
        e = self._entry(t, k, w)
        return 0 if e is None else e[1]

    def z(self, t: int, k: int, w: int) -> Coalition | None:
        if not self.with_witnesses:
            raise ContractError("tables were built without witnesses")
        e = self._entry(t, k, w)
        return None if e is None else e[2]

    def count_at(self, k: int, w: int, payment: Fraction) -> int:
        """Number of prefix-``k`` coalitions of weight ``w`` paid exactly ``payment``.

        Exact only while ``payment`` ranks within the stored levels of that cell.
        """
        col = self.layers[k]
        if not 0 <= w < len(col):
            return 0
        scaled = Fraction(payment) * self.scale
        if scaled.denominator != 1:
            return 0
        v = scaled.numerator
        for e in col[w]:
            if e[0] == v:
                return e[1]
            if e[0] > v:
                break
        return 0


def build_tables(game: Game, p: Sequence, j: int, with_witnesses: bool = False) -> DpTables:
    """Bottom-``j`` distinct payment tables for payoff ``p`` (any rationals)."""
    if j < 1:
        raise ValidationError(f"number of levels must be >= 1, got {j}")
    if len(p) != game.n:
        raise DimensionMismatchError(f"payoff has {len(p)} entries, game has {game.n} agents")
    p = tuple(Fraction(x) for x in p)
    scale = _scale_of(p)
    ints = [x.numerator * (scale // x.denominator) for x in p]
    total = game.total_weight

    layer: list[tuple] = [()] * (total + 1)
    layer[0] = ((0, 1, 0),) if with_witnesses else ((0, 1),)
    layers = [layer]
    reach = 0
    for k, (wk, pk) in enumerate(zip(game.weights, ints)):
        prev = layer
        layer = list(prev)
        reach += wk
        if with_witnesses:
            _step_witness(prev, layer, wk, pk, 1 << k, reach, j)
        else:
            _step(prev, layer, wk, pk, reach, j)
        layers.append(layer)
    return DpTables(game, p, j, scale, layers, with_witnesses)


def _step(prev, layer, wk, pk, reach, j):
    for w in range(wk, reach + 1):
        b = prev[w - wk]
        if not b:
            continue
        a = prev[w]
        if not a:
            layer[w] = tuple((v + pk, c) for v, c in b)
            continue
        if len(a) >= j and b[0][0] + pk > a[-1][0]:
            continue  # include-branch cannot reach the bottom j
        merged = dict(a)
        for v, c in b:
            v += pk
            merged[v] = merged.get(v, 0) + c
        keys = sorted(merged)
        del keys[j:]
        layer[w] = tuple((v, merged[v]) for v in keys)


def _step_witness(prev, layer, wk, pk, bit, reach, j):
    for w in range(wk, reach + 1):
        b = prev[w - wk]
        if not b:
            continue
        a = prev[w]
        if not a:
            layer[w] = tuple((v + pk, c, z | bit) for v, c, z in b)
            continue
        if len(a) >= j and b[0][0] + pk > a[-1][0]:
            continue
        # agent-excluding branch goes first so it keeps the witness on ties
        merged = {v: [c, z] for v, c, z in a}
        for v, c, z in b:
            v += pk
            slot = merged.get(v)
            if slot is None:
                merged[v] = [c, z | bit]
            else:
                slot[0] += c
        keys = sorted(merged)
        del keys[j:]
        layer[w] = tuple((v, merged[v][0], merged[v][1]) for v in keys)


def _check_tables(tables: DpTables, game: Game):
    if tables.game != game:
        raise ValidationError("tables were built for a different game")


def top_deficits(tables: DpTables, game: Game, j: int) -> DeficitProfile:
    """The ``j`` largest distinct deficits over all ``2**n`` coalitions, with counts."""
    _check_tables(tables, game)
    if j > tables.levels:
        raise ValidationError(f"tables hold {tables.levels} levels, {j} requested")
    scale, q = tables.scale, game.quota
    agg: dict[int, int] = {}
    for w, entries in enumerate(tables.layers[game.n]):
        top = scale if w >= q else 0
        for e in entries:
            d = top - e[0]
            agg[d] = agg.get(d, 0) + e[1]
    best = sorted(agg, reverse=True)[:j]
    return DeficitProfile(tuple(Fraction(d, scale) for d in best), tuple(agg[d] for d in best))


def profile(game: Game, p: Sequence, j: int) -> DeficitProfile:
    return top_deficits(build_tables(game, p, j), game, j)


def witness_at(tables: DpTables, game: Game, target: Fraction) -> Coalition:
    """A coalition whose deficit is exactly ``target``.

    Scans weights ascending, then levels ascending, so the answer is deterministic.
    """
    _check_tables(tables, game)
    if not tables.with_witnesses:
        raise ContractError("tables were built without witnesses")
    scaled = Fraction(target) * tables.scale
    if scaled.denominator == 1:
        scale, q, v = tables.scale, game.quota, scaled.numerator
        for w, entries in enumerate(tables.layers[game.n]):
            want = (scale if w >= q else 0) - v
            for e in entries:
                if e[0] == want:
                    return e[2]
    raise NotFoundError(f"no coalition with deficit {target} in the tables")


def deficit_rank(game: Game, p: Sequence, level: Fraction) -> int | None:
    """1-based position of ``level`` among the distinct deficits under ``p``."""
    j = 1
    while True:
        prof = profile(game, p, j)
        if level in prof.m:
            return prof.m.index(level) + 1
        if len(prof) < j or prof.m[-1] < level:
            return None
        j *= 2


def peel_witness(
    game: Game, p: Sequence, p_ref: Sequence, level: Fraction, depth: int | None = None
) -> Coalition:
    """A coalition at deficit ``level`` under ``p`` but not under ``p_ref``.

    Requires strictly more coalitions at ``level`` under ``p`` than under
    ``p_ref``.  Finds a weight column where ``p`` has the larger count, then
    walks agents ``n, n-1, ..., 1`` keeping, at each step, the branch (agent
    out, else agent in) on which ``p`` still has more matching coalitions than
    ``p_ref``.  ``depth`` is the number of table levels; it must be at least
    the rank of ``level`` among distinct deficits under both payoffs, and is
    computed when omitted.
    """
    level = Fraction(level)
    if depth is None:
        ranks = [deficit_rank(game, x, level) for x in (p, p_ref)]
        depth = max(r for r in ranks + [1] if r is not None)
    tp = build_tables(game, p, depth)
    tr = build_tables(game, p_ref, depth)
    n, q = game.n, game.quota
    for w in range(game.total_weight + 1):
        target = (1 if w >= q else 0) - level
        if tp.count_at(n, w, target) > tr.count_at(n, w, target):
            break
    else:
        raise ContractError(
            f"no weight where payoff has more coalitions at deficit {level} than the reference"
        )
    a = b = target
    s = 0
    for k in range(n, 0, -1):
        i = k - 1
        if tp.count_at(k - 1, w, a) > tr.count_at(k - 1, w, b):
            continue
        wk = game.weights[i]
        a -= p[i]
        b -= p_ref[i]
        w -= wk
        s |= 1 << i
        if w < 0 or tp.count_at(k - 1, w, a) <= tr.count_at(k - 1, w, b):
            raise ContractError("count split failed during witness descent")
    return s

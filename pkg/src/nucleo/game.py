"""Weighted voting games, coalitions and payoff vectors.

Coalitions are plain ``int`` bitmasks: bit ``i`` set means agent ``i`` (0-based
in code, ``i + 1`` in user-facing output) is a member.  Ordering coalitions by
their mask value is the canonical iteration and tie-break order.

Payoff vectors are tuples of :class:`fractions.Fraction`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .errors import (
    DimensionMismatchError,
    GrandCoalitionLosesError,
    NegativeWeightError,
    NoAgentsError,
    QuotaTooSmallError,
    ValidationError,
)

Coalition = int
Payoff = tuple  # tuple[Fraction, ...]


@dataclass(frozen=True)
class Game:
    weights: tuple[int, ...]
    quota: int

    def __post_init__(self):
        # construct through validate_game for the named errors; this is a backstop
        if (
            not self.weights
            or min(self.weights) < 0
            or self.quota < 1
            or self.quota > sum(self.weights)
        ):
            raise ValidationError(f"invalid game {self.weights!r}, quota {self.quota}")

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def max_weight(self) -> int:
        return max(self.weights)

    @property
    def total_weight(self) -> int:
        return sum(self.weights)

    @property
    def grand(self) -> Coalition:
        return (1 << self.n) - 1

    def weight_of(self, s: Coalition) -> int:
        return sum(w for i, w in enumerate(self.weights) if s >> i & 1)

    def scaled(self, c: int) -> "Game":
        return Game(tuple(c * w for w in self.weights), c * self.quota)

    def permuted(self, perm: Sequence[int]) -> "Game":
        """Game whose agent ``i`` is agent ``perm[i]`` of this game."""
        return Game(tuple(self.weights[k] for k in perm), self.quota)

    def to_json(self) -> dict:
        return {"quota": self.quota, "weights": list(self.weights)}


def validate_game(weights: Iterable, quota) -> Game:
    weights = list(weights)
    if not weights:
        raise NoAgentsError("no agents")
    for w in weights + [quota]:
        if isinstance(w, bool) or not isinstance(w, int):
            raise ValidationError(f"weights and quota must be integers, got {w!r}")
    for i, w in enumerate(weights):
        if w < 0:
            raise NegativeWeightError(f"negative weight {w} for agent {i + 1}")
    if quota < 1:
        raise QuotaTooSmallError(f"quota {quota} < 1")
    if quota > sum(weights):
        raise GrandCoalitionLosesError(
            f"grand coalition loses: total weight {sum(weights)} < quota {quota}"
        )
    return Game(tuple(weights), quota)


def load_game(path) -> Game:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read game file {path}: {exc}") from exc
    if not isinstance(raw, dict) or "quota" not in raw or "weights" not in raw:
        raise ValidationError('game file must be {"quota": int, "weights": [int, ...]}')
    if not isinstance(raw["weights"], list):
        raise ValidationError("weights must be a list")
    return validate_game(raw["weights"], raw["quota"])


def members(s: Coalition) -> list[int]:
    out, i = [], 0
    while s:
        if s & 1:
            out.append(i)
        s >>= 1
        i += 1
    return out


def coalition(agents: Iterable[int]) -> Coalition:
    """Mask for a collection of 0-based agent indices."""
    mask = 0
    for i in agents:
        mask |= 1 << i
    return mask


def coalition_value(game: Game, s: Coalition) -> int:
    return 1 if game.weight_of(s) >= game.quota else 0


def payoff(values: Iterable) -> Payoff:
    return tuple(Fraction(v) for v in values)


def is_imputation(p: Sequence[Fraction]) -> bool:
    return all(x >= 0 for x in p) and sum(p) == 1


def check_imputation(game: Game, p: Sequence[Fraction]) -> Payoff:
    p = payoff(p)
    if len(p) != game.n:
        raise DimensionMismatchError(f"payoff has {len(p)} entries, game has {game.n} agents")
    if not is_imputation(p):
        raise ValidationError("payoff is not an imputation (needs p >= 0, sum 1)")
    return p


def deficit(game: Game, p: Sequence[Fraction], s: Coalition) -> Fraction:
    """``v(S) - p(S)``; positive means the coalition is underpaid."""
    if len(p) != game.n:
        raise DimensionMismatchError(f"payoff has {len(p)} entries, game has {game.n} agents")
    return coalition_value(game, s) - sum((p[i] for i in members(s)), Fraction(0))


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"not a rational number: {text!r}") from exc

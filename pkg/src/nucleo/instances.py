"""Seeded random games and imputations for tests and experiment scripts."""

from __future__ import annotations

import random
from fractions import Fraction

from .game import Game, validate_game


def random_game(rng: random.Random, max_n: int = 8, max_weight: int = 6, min_n: int = 1) -> Game:
    n = rng.randint(min_n, max_n)
    weights = [rng.randint(0, max_weight) for _ in range(n)]
    if sum(weights) == 0:
        weights[rng.randrange(n)] = rng.randint(1, max(1, max_weight))
    return validate_game(weights, rng.randint(1, sum(weights)))


def scaling_game(rng: random.Random, n: int, max_weight: int) -> Game:
    """``n`` agents with weights in ``1..max_weight``, one of them exactly ``max_weight``."""
    weights = [rng.randint(1, max_weight) for _ in range(n)]
    weights[rng.randrange(n)] = max_weight
    return validate_game(weights, rng.randint(1, sum(weights)))


def random_imputation(rng: random.Random, n: int, grain: int | None = None) -> tuple:
    """Exact random imputation; a small ``grain`` produces many tied payments."""
    grain = grain or rng.choice((2, 3, 6, 1000))
    while True:
        ks = [rng.randint(0, grain) for _ in range(n)]
        tot = sum(ks)
        if tot:
            return tuple(Fraction(k, tot) for k in ks)


def random_rationals(rng: random.Random, n: int, span: int = 5) -> tuple:
    """Arbitrary rationals, possibly negative (the counting DP accepts any payoff)."""
    return tuple(Fraction(rng.randint(-span, span), rng.randint(1, 4)) for _ in range(n))

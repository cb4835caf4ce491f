import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nucleo.enumeration import (
    DeficitVector,
    all_deficits,
    brute_least_core,
    brute_nucleolus,
    brute_profile,
    brute_stages,
    deficit_vector,
    lex_compare,
)
from nucleo.errors import DimensionMismatchError, GuardExceededError
from nucleo.game import deficit, payoff, validate_game
from nucleo.instances import random_imputation

from .conftest import game_and_imputation, games

F = Fraction


def direct_sorted_deficits(g, p):
    return sorted((deficit(g, p, s) for s in range(1 << g.n)), reverse=True)


@pytest.mark.parametrize(
    "weights, quota, p, expected",
    [
        ((1, 1, 1), 2, ["1/3"] * 3, ["1/3"] * 3 + ["0"] * 2 + ["-1/3"] * 3),
        ((2, 2), 4, ["1/2", "1/2"], ["0", "0", "-1/2", "-1/2"]),
        ((1,), 1, ["1"], ["0", "0"]),
    ],
)
def test_deficit_vector_examples(weights, quota, p, expected):
    g = validate_game(weights, quota)
    dv = deficit_vector(g, payoff(p))
    assert list(dv.sorted_deficits) == direct_sorted_deficits(g, payoff(p))
    assert list(dv.sorted_deficits) == [F(x) for x in expected]


@given(game_and_imputation(max_n=7))
def test_deficit_vector_matches_direct_enumeration(gp):
    g, p = gp
    dv = deficit_vector(g, p)
    assert len(dv) == 2**g.n
    assert list(dv.sorted_deficits) == direct_sorted_deficits(g, p)
    assert dv.sorted_deficits[0] >= 0


def test_all_deficits_indexed_by_mask():
    g = validate_game((3, 2, 2), 4)
    p = payoff(["1/2", "1/4", "1/4"])
    assert all_deficits(g, p) == [deficit(g, p, s) for s in range(8)]


def test_guard():
    g = validate_game([1] * 5, 3)
    with pytest.raises(GuardExceededError):
        deficit_vector(g, payoff(["1/5"] * 5), guard=4)
    with pytest.raises(GuardExceededError):
        brute_nucleolus(g, guard=4)


def test_lex_compare_examples():
    a = DeficitVector.from_values(["1/3", 0, 0, 0])
    b = DeficitVector.from_values(["1/2", 0, 0, 0])
    assert lex_compare(a, b) == -1 and lex_compare(b, a) == 1
    assert lex_compare(a, DeficitVector.from_values(["1/3", 0, 0, 0])) == 0
    c = DeficitVector.from_values([0, 0, "-1/2", "-1/2"])
    d = DeficitVector.from_values([0, 0, "-1/4", "-3/4"])
    assert lex_compare(c, d) == -1
    with pytest.raises(DimensionMismatchError):
        lex_compare(a, DeficitVector.from_values([0, 0]))


def test_brute_profile_examples():
    g = validate_game((1, 1, 1), 2)
    prof = brute_profile(g, payoff(["1/2", "1/2", "0"]), 3)
    assert prof.m == (F(1, 2), F(0), F(-1, 2)) and prof.counts == (2, 4, 2)
    prof = brute_profile(g, payoff(["1/3"] * 3), 1)
    assert prof.m == (F(1, 3),) and prof.counts == (3,)


@given(game_and_imputation(max_n=7))
def test_brute_profile_partitions_all_coalitions(gp):
    g, p = gp
    prof = brute_profile(g, p, 2**g.n)
    assert sum(prof.counts) == 2**g.n
    assert list(prof.m) == sorted(set(prof.m), reverse=True)


@pytest.mark.parametrize(
    "weights, quota, expected",
    [
        ((1, 1, 1), 2, ["1/3"] * 3),
        ((2, 1, 1), 3, ["1", "0", "0"]),
        ((3, 2, 2), 4, ["1/3"] * 3),
        ((2, 2), 4, ["1/2", "1/2"]),
        ((1,), 1, ["1"]),
    ],
)
def test_brute_nucleolus_examples(weights, quota, expected):
    assert brute_nucleolus(validate_game(weights, quota)) == payoff(expected)


def test_brute_stages_two_stage_game():
    stages = brute_stages(validate_game((2, 2), 4))
    assert [s.epsilon for s in stages] == [0, F(-1, 2)]
    assert [len(s.tight) for s in stages] == [2, 2]
    assert stages[0].tight == frozenset({0, 3})
    assert [s.rank for s in stages] == [2, 3]


def test_brute_least_core():
    eps, x = brute_least_core(validate_game((1, 1, 1), 2))
    assert eps == F(1, 3) and x == payoff(["1/3"] * 3)


@settings(max_examples=25)
@given(games(max_n=5, max_weight=4), st.integers(0, 2**32))
def test_brute_nucleolus_is_lexicographic_minimum(g, seed):
    rnd = random.Random(seed)
    eta = brute_nucleolus(g)
    d_eta = deficit_vector(g, eta)
    for _ in range(30):
        x = random_imputation(rnd, g.n)
        cmp = lex_compare(d_eta, deficit_vector(g, x))
        assert cmp == -1 or (cmp == 0 and tuple(x) == tuple(eta))


@settings(max_examples=25)
@given(games(max_n=5, max_weight=4), st.integers(0, 2**32), st.integers(2, 5))
def test_brute_nucleolus_permutation_and_scaling(g, seed, c):
    rnd = random.Random(seed)
    eta = brute_nucleolus(g)
    perm = list(range(g.n))
    rnd.shuffle(perm)
    assert brute_nucleolus(g.permuted(perm)) == tuple(eta[k] for k in perm)
    assert brute_nucleolus(g.scaled(c)) == eta


def test_brute_nucleolus_matches_float_lp_reference():
    """Cross-check the exact successive LPs against scipy's floating-point HiGHS."""
    linprog = pytest.importorskip("scipy.optimize").linprog
    import numpy as np

    rng = random.Random(3)
    for _ in range(10):
        n = rng.randint(2, 5)
        g = validate_game([rng.randint(1, 5) for _ in range(n)], 1)
        g = validate_game(g.weights, rng.randint(1, g.total_weight))
        eps_exact, _ = brute_least_core(g)
        a_ub, b_ub = [], []
        for s in range(1 << n):
            row = [-(s >> i & 1) for i in range(n)] + [-1]
            a_ub.append(row)
            b_ub.append(-(1 if g.weight_of(s) >= g.quota else 0))
        res = linprog(
            c=[0] * n + [1],
            A_ub=np.array(a_ub),
            b_ub=b_ub,
            A_eq=[[1] * n + [0]],
            b_eq=[1],
            bounds=[(0, None)] * n + [(None, None)],
        )
        assert res.status == 0
        assert abs(res.fun - float(eps_exact)) < 1e-9

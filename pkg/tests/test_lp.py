import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nucleo.errors import ContractError, InfeasibleError, UnboundedError
from nucleo.lp import (
    EQ,
    GE,
    AffineBasis,
    DualSimplex,
    LinearConstraint,
    LpProblem,
    affine_rank,
    face_analysis,
    feasible_point,
    optimal_face_basis,
    relative_interior_point,
    solve_min,
)

F = Fraction
C = LinearConstraint


def simplex_box_problem():
    # min eps s.t. x1 + x2 = 1, x1 + eps >= 1/2, x2 + eps >= 1/2, x >= 0
    return LpProblem(
        (
            C((1, 1, 0), 1, EQ),
            C((1, 0, 1), F(1, 2)),
            C((0, 1, 1), F(1, 2)),
            C((1, 0, 0), 0),
            C((0, 1, 0), 0),
        )
    )


def test_solve_min_example():
    value, x = solve_min(simplex_box_problem())
    assert value == 0
    assert x[2] == 0 and x[0] + x[1] == 1
    assert all(c.satisfied_by(x) for c in simplex_box_problem().constraints)


def test_solve_min_explicit_objective():
    lp = LpProblem((C((1, 0), 0), C((0, 1), 0), C((-1, -1), -3), C((1, -1), -1)), objective=(-1, -2))
    value, x = solve_min(lp)
    assert value == -5 and x == [1, 2]


def test_infeasible_and_unbounded():
    with pytest.raises(InfeasibleError):
        solve_min(LpProblem((C((1,), 2), C((-1,), -1))))
    with pytest.raises(UnboundedError):
        solve_min(LpProblem((C((1, 0), 0),), objective=(0, 1)))


def test_warm_start_after_cut():
    eng = DualSimplex(2, (1, 1))
    eng.add((1, 0), 0)
    eng.add((0, 1), 0)
    assert eng.solve()[0] == 0
    eng.add((1, 1), 3)
    value, x = eng.solve()
    assert value == 3 and x[0] + x[1] == 3
    eng.set_objective((1, 2))
    assert eng.solve() == (3, [3, 0])


def test_optimal_face_basis_example():
    lp = simplex_box_problem()
    basis = optimal_face_basis(lp, 0)
    # the face is x1 = x2 = 1/2, eps = 0
    assert affine_rank(basis) == 3
    assert basis.satisfied_by((F(1, 2), F(1, 2), 0))
    with pytest.raises(ContractError):
        optimal_face_basis(lp, F(1, 3))


def test_relative_interior_with_redundant_implied_inequality():
    # x + y = 1, x >= 0, y >= 0, and x + y >= 1 (implied, always tight)
    eqs = [C((1, 1), 1, EQ)]
    ineqs = [C((1, 0), 0), C((0, 1), 0), C((1, 1), 1)]
    x = relative_interior_point(eqs, ineqs)
    assert x[0] > 0 and x[1] > 0 and x[0] + x[1] == 1
    _, implied = face_analysis(eqs, ineqs, 2)
    assert implied == {2}


def test_face_analysis_detects_hidden_equality():
    # x >= 0, y >= 0, -x - y >= 0 forces x = y = 0
    _, implied = face_analysis([], [C((1, 0), 0), C((0, 1), 0), C((-1, -1), 0)], 2)
    assert implied == {0, 1, 2}


def test_affine_rank_examples():
    assert affine_rank([]) == 0
    assert affine_rank(AffineBasis((C((1, 1), 1, EQ), C((2, 2), 2, EQ)))) == 1
    assert affine_rank([C((1, 0), 0, EQ), C((0, 1), 0, EQ)]) == 2


def random_bounded_lp(rng, nvars, rows):
    cons = [C(tuple(int(i == k) for i in range(nvars)), -rng.randint(0, 3)) for k in range(nvars)]
    cons.append(C((-1,) * nvars, -rng.randint(3, 9)))
    for _ in range(rows):
        a = tuple(rng.randint(-3, 3) for _ in range(nvars))
        cons.append(C(a, rng.randint(-6, 0)))
    obj = tuple(rng.randint(-4, 4) for _ in range(nvars))
    return LpProblem(tuple(cons), objective=obj)


@settings(max_examples=40)
@given(st.integers(0, 2**32), st.integers(1, 4), st.integers(0, 6))
def test_optimum_invariant_under_row_shuffle(seed, nvars, rows):
    rng = random.Random(seed)
    lp = random_bounded_lp(rng, nvars, rows)
    try:
        value, x = solve_min(lp)
    except InfeasibleError:
        return
    assert all(c.satisfied_by(x) for c in lp.constraints)
    shuffled = list(lp.constraints)
    rng.shuffle(shuffled)
    assert solve_min(LpProblem(tuple(shuffled), objective=lp.objective))[0] == value


@settings(max_examples=40)
@given(st.integers(0, 2**32), st.integers(1, 4), st.integers(0, 6))
def test_relative_interior_point_is_strict_off_the_implied_set(seed, nvars, rows):
    rng = random.Random(seed)
    lp = random_bounded_lp(rng, nvars, rows)
    try:
        feasible_point(lp.constraints, nvars)
    except InfeasibleError:
        return
    x, implied = face_analysis([], lp.constraints, nvars)
    for i, con in enumerate(lp.constraints):
        assert con.satisfied_by(x)
        if i not in implied:
            assert con.slack(x) > 0


def test_matches_float_reference_on_random_lps():
    scipy_opt = pytest.importorskip("scipy.optimize")
    rng = random.Random(11)
    checked = 0
    for _ in range(60):
        nvars = rng.randint(1, 5)
        lp = random_bounded_lp(rng, nvars, rng.randint(0, 8))
        res = scipy_opt.linprog(
            c=[float(v) for v in lp.objective],
            A_ub=[[-float(a) for a in c.coefficients] for c in lp.constraints],
            b_ub=[-float(c.rhs) for c in lp.constraints],
            bounds=[(None, None)] * nvars,
        )
        try:
            value, _ = solve_min(lp)
        except InfeasibleError:
            assert res.status == 2
            continue
        assert res.status == 0
        assert abs(res.fun - float(value)) < 1e-7
        checked += 1
    assert checked > 20


def test_constraint_relation_validated():
    with pytest.raises(ValueError):
        C((1,), 0, "<=")
    assert C((1, 1), 1, GE).slack((1, 1)) == 1

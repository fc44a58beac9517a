import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from dea_frontier.exceptions import InputError, NumericalFailure
from dea_frontier.lp import (
    EQ,
    GE,
    INFEASIBLE,
    LE,
    OPTIMAL,
    UNBOUNDED,
    LpProblem,
    solve_lexicographic,
    solve_lp,
)
from oracles import enum_lp, rational_simplex


def test_single_lower_bound_row():
    sol = solve_lp(LpProblem([1.0], [[1.0]], [3.0], [GE]))
    assert sol.status == OPTIMAL
    assert sol.objective == pytest.approx(3.0)
    assert sol.x == pytest.approx([3.0])


def test_feasibility_only():
    sol = solve_lp(LpProblem([0.0, 0.0], [[1.0, 1.0]], [1.0], [EQ]))
    assert sol.status == OPTIMAL
    assert sol.objective == 0.0
    assert sol.x.sum() == pytest.approx(1.0)


def test_box_optimum_and_duals():
    sol = solve_lp(LpProblem([-1.0, -1.0], [[1, 0], [0, 1]], [2, 3], [LE, LE]))
    assert sol.objective == pytest.approx(-5.0)
    assert sol.x == pytest.approx([2, 3])
    assert sol.duals == pytest.approx([-1, -1])
    assert sol.dual_objective(LpProblem([-1.0, -1.0], [[1, 0], [0, 1]], [2, 3], [LE, LE])) == pytest.approx(-5)


def test_infeasible():
    sol = solve_lp(LpProblem([1.0], [[1.0]], [-1.0], [LE]))
    assert sol.status == INFEASIBLE
    assert not sol.optimal


def test_unbounded():
    sol = solve_lp(LpProblem([-1.0, 0.0], [[1.0, -1.0]], [1.0], [LE]))
    assert sol.status == UNBOUNDED


def test_free_and_bounded_variables():
    # min x - y, -2 <= x <= 5 free-ish, y <= 4, x + y >= 0
    p = LpProblem([1.0, -1.0], [[1.0, 1.0]], [0.0], [GE], lower=[-2.0, -np.inf], upper=[5.0, 4.0])
    sol = solve_lp(p)
    assert sol.objective == pytest.approx(-6.0)
    assert sol.x == pytest.approx([-2.0, 4.0])


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(c=[1, 2], A=[[1, 1, 1]], b=[1]),
        dict(c=[1], A=[[1]], b=[1, 2]),
        dict(c=[1], A=[[1]], b=[1], senses=["<", ">"]),
        dict(c=[1], A=[[1]], b=[1], senses=["~"]),
        dict(c=[1], A=[[1]], b=[1], lower=[2], upper=[1]),
        dict(c=[np.nan], A=[[1]], b=[1]),
    ],
)
def test_invalid_problems(kwargs):
    with pytest.raises(InputError):
        LpProblem(**kwargs)


def test_size_limit():
    with pytest.raises(InputError):
        solve_lp(LpProblem(np.zeros(10), np.ones((1, 10)), [1.0]), max_vars=5)


def test_iteration_limit_raises_with_count():
    rng = np.random.default_rng(0)
    A = rng.uniform(1, 2, size=(8, 12))
    with pytest.raises(NumericalFailure) as info:
        solve_lp(LpProblem(-np.ones(12), A, np.ones(8)), max_iter=1)
    assert info.value.iterations is not None


def test_problem_is_immutable():
    p = LpProblem([1.0], [[1.0]], [1.0])
    with pytest.raises(ValueError):
        p.A[0, 0] = 5.0


def test_lexicographic_picks_best_point_of_optimal_face():
    # min x1 + x2 s.t. x1 + x2 >= 1: the optimal face is a segment;
    # stage 2 maximizes x1 on it.
    stage1 = LpProblem([1.0, 1.0], [[1.0, 1.0]], [1.0], [GE])
    first, second = solve_lexicographic(stage1, [-1.0, 0.0])
    assert first.objective == pytest.approx(1.0)
    assert second.x == pytest.approx([1.0, 0.0])
    # and with the opposite preference the other endpoint
    _, second = solve_lexicographic(stage1, [0.0, -1.0])
    assert second.x == pytest.approx([0.0, 1.0])


def test_lexicographic_unique_optimum_unchanged():
    stage1 = LpProblem([1.0, 2.0], [[1.0, 1.0]], [1.0], [GE])
    first, second = solve_lexicographic(stage1, [0.0, -1.0])
    assert second.x == pytest.approx(first.x)


def test_lexicographic_beats_arbitrary_vertex_of_degenerate_face():
    # stage-1 face {x1 + x2 + x3 = 2, x <= 1.5} has several vertices;
    # stage 2 (max x3) must reach the best of them
    A = [[1, 1, 1], [1, 0, 0], [0, 1, 0], [0, 0, 1]]
    stage1 = LpProblem([1.0, 1.0, 1.0], A, [2, 1.5, 1.5, 1.5], [GE, LE, LE, LE])
    first, second = solve_lexicographic(stage1, [0, 0, -1.0])
    # oracle: enumerate vertices of the face in equality form
    Aeq = np.array([[1, 1, 1, -1, 0, 0, 0], [1, 0, 0, 0, 1, 0, 0], [0, 1, 0, 0, 0, 1, 0], [0, 0, 1, 0, 0, 0, 1]], float)
    _, _, verts = enum_lp(np.zeros(7), Aeq, [2, 1.5, 1.5, 1.5])
    face = [v for v in verts if abs(v[:3].sum() - first.objective) < 1e-9]
    assert second.x[2] == pytest.approx(max(v[2] for v in face))
    assert second.x[2] > min(v[2] for v in face)


def test_lexicographic_infeasible_stage1():
    first, second = solve_lexicographic(LpProblem([1.0], [[1.0]], [-1.0]), [1.0])
    assert first.status == INFEASIBLE and second is None


def test_lexicographic_dimension_check():
    with pytest.raises(InputError):
        solve_lexicographic(LpProblem([1.0], [[1.0]], [1.0]), [1.0, 2.0])


def test_warm_start_matches_cold_start():
    rng = np.random.default_rng(3)
    A = rng.uniform(0, 1, size=(6, 10))
    b = rng.uniform(1, 2, size=6)
    c = -rng.uniform(0, 1, size=10)
    p = LpProblem(c, A, b)
    cold = solve_lp(p)
    warm = solve_lp(p.with_objective(c * 1.01), cold.basis)
    again = solve_lp(p.with_objective(c * 1.01))
    assert warm.objective == pytest.approx(again.objective, rel=1e-9)


def test_row_scaling_leaves_primal_point():
    rng = np.random.default_rng(5)
    A = rng.uniform(0, 1, size=(4, 6))
    b = rng.uniform(1, 2, size=4)
    c = -rng.uniform(0.1, 1, size=6)
    base = solve_lp(LpProblem(c, A, b))
    A2, b2 = A.copy(), b.copy()
    A2[1] *= 10
    b2[1] *= 10
    scaled = solve_lp(LpProblem(c, A2, b2))
    assert np.abs(base.x - scaled.x).max() <= 10 * 1e-8 * (1 + np.abs(b2).max())


def _random_lp(rng):
    n = int(rng.integers(1, 31))
    k = int(rng.integers(1, 9))
    A = rng.integers(-5, 6, size=(k, n))
    b = rng.integers(-5, 11, size=k)
    c = rng.integers(-5, 6, size=n)
    senses = [("<=", "=", ">=")[i] for i in rng.integers(0, 3, size=k)]
    return c, A, b, senses


_SENSE = {"<=": LE, "=": EQ, ">=": GE}


def check_against_rational(c, A, b, senses):
    ref_status, ref_value = rational_simplex(c, A, b, senses)
    sol = solve_lp(LpProblem(c, A, b, [_SENSE[s] for s in senses]))
    assert sol.status == ref_status
    if ref_status == "optimal":
        ref = float(ref_value)
        assert abs(sol.objective - ref) <= 1e-7 * max(1.0, abs(ref))
        # certificates
        feas = 1e-8 * (1 + np.abs(b).max())
        Ax = np.asarray(A, float) @ sol.x
        for s, lhs, rhs in zip(senses, Ax, b):
            if s == "<=":
                assert lhs <= rhs + feas
            elif s == ">=":
                assert lhs >= rhs - feas
            else:
                assert abs(lhs - rhs) <= feas
        assert sol.x.min() >= -feas
        assert abs(sol.dual_objective(LpProblem(c, A, b, [_SENSE[s] for s in senses])) - sol.objective) <= 1e-7 * (
            1 + abs(sol.objective)
        )
    return ref_status


def test_random_lps_match_rational_reference():
    rng = np.random.default_rng(20240601)
    statuses = set()
    for _ in range(60):
        statuses.add(check_against_rational(*_random_lp(rng)))
    assert statuses == {"optimal", "infeasible", "unbounded"}


def test_agrees_with_scipy_on_bounded_lps():
    rng = np.random.default_rng(11)
    for _ in range(40):
        n, k = int(rng.integers(2, 20)), int(rng.integers(1, 8))
        A = rng.uniform(-1, 1, size=(k, n))
        b = rng.uniform(0, 2, size=k)
        c = rng.uniform(-1, 1, size=n)
        ub = np.full(n, 3.0)
        ours = solve_lp(LpProblem(c, A, b, upper=ub))
        ref = linprog(c, A_ub=A, b_ub=b, bounds=[(0, 3)] * n, method="highs")
        assert ours.optimal and ref.status == 0
        assert ours.objective == pytest.approx(ref.fun, rel=1e-7, abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_determinism_is_bitwise(seed):
    c, A, b, senses = _random_lp(np.random.default_rng(seed))
    p = LpProblem(c, A, b, [_SENSE[s] for s in senses])
    s1, s2 = solve_lp(p), solve_lp(p)
    assert s1.status == s2.status
    assert s1.basis == s2.basis
    assert s1.x.tobytes() == s2.x.tobytes()
    assert np.float64(s1.objective).tobytes() == np.float64(s2.objective).tobytes()

import itertools

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from qdouble.ablinalg import (AbLinearSystem, FinAbGroup, brute_force_count, matmul, parse_abelian,
                              smith_normal_form, solve_ab_system, torsion_subgroup)

matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(-12, 12), min_size=c, max_size=c), min_size=r, max_size=r)))


def diag(D):
    return [D[i][i] for i in range(min(len(D), len(D[0])))]


@pytest.mark.parametrize("M, expected", [
    ([[1]], [1]),
    ([[2, 0], [0, 3]], [1, 6]),
    ([[0, 0], [0, 0]], [0, 0]),
    ([[2, 4, 4], [-6, 6, 12], [10, -4, -16]], [2, 6, 12]),
])
def test_snf_examples(M, expected):
    U, D, V = smith_normal_form(M)
    assert diag(D) == expected
    assert matmul(matmul(U, M), V) == D


@settings(max_examples=200, deadline=None)
@given(matrices)
def test_snf_transforms(M):
    U, D, V = smith_normal_form(M)
    assert matmul(matmul(U, M), V) == D
    assert abs(sympy.Matrix(U).det()) == 1
    assert abs(sympy.Matrix(V).det()) == 1
    assert all(D[i][j] == 0 for i in range(len(D)) for j in range(len(D[0])) if i != j)
    d = diag(D)
    assert all(x >= 0 for x in d)
    for a, b in zip(d, d[1:]):
        assert b == 0 or (a != 0 and b % a == 0)


@settings(max_examples=100, deadline=None)
@given(matrices)
def test_snf_matches_sympy(M):
    ref = sympy_snf(sympy.Matrix(M), domain=sympy.ZZ)
    ref_diag = [abs(int(ref[i, i])) for i in range(min(ref.shape))]
    assert diag(smith_normal_form(M)[1]) == ref_diag


def test_parse_abelian():
    assert parse_abelian("cyclic:2x4").moduli == (2, 4)
    assert parse_abelian("cyclic:1").order == 1
    with pytest.raises(ValueError):
        parse_abelian("cyclic:0")
    with pytest.raises(ValueError):
        parse_abelian("sym:3")


def test_invariant_factors():
    assert FinAbGroup((2, 3)).invariant_factors == (6,)
    assert FinAbGroup((4, 2)).invariant_factors == (2, 4)
    assert FinAbGroup((1,)).invariant_factors == ()


@pytest.mark.parametrize("moduli, rows, rhs, solvable, count", [
    ((2,), [[1]], [(1,)], True, 1),
    ((4,), [[2]], [(1,)], False, 0),
    ((4,), [[2]], [(2,)], True, 2),
])
def test_solve_examples(moduli, rows, rhs, solvable, count):
    S = AbLinearSystem(FinAbGroup(moduli), rows, rhs)
    sol = solve_ab_system(S)
    assert (sol.solvable, sol.count) == (solvable, count)
    assert brute_force_count(S) == count
    if solvable:
        assert S.is_solution(sol.witness)


def test_two_b_equals_two_solutions():
    B = FinAbGroup((4,))
    S = AbLinearSystem(B, [[2]], [(2,)])
    assert [x for (x,) in itertools.product(B.elements(), repeat=1) if S.is_solution([x])] == [(1,), (3,)]


groups = st.sampled_from([(2,), (3,), (4,), (6,), (2, 2), (2, 4), (3, 3), (8,)])


@st.composite
def systems(draw):
    moduli = draw(groups)
    B = FinAbGroup(moduli)
    nvars = draw(st.integers(1, 3))
    while B.order ** nvars > 10 ** 4:
        nvars -= 1
    neq = draw(st.integers(0, 3))
    rows = [[draw(st.integers(-4, 4)) for _ in range(nvars)] for _ in range(neq)]
    rhs = [tuple(draw(st.integers(0, m - 1)) for m in moduli) for _ in range(neq)]
    torsion = [draw(st.sampled_from([None, None, 1, 2, 3, 4])) for _ in range(nvars)]
    if neq == 0:
        return AbLinearSystem(B, [], [], torsion)
    return AbLinearSystem(B, rows, rhs, torsion)


@settings(max_examples=300, deadline=None)
@given(systems())
def test_solver_matches_brute_force(S):
    sol = solve_ab_system(S)
    assert sol.count == brute_force_count(S)
    assert sol.solvable == (sol.count > 0)
    if sol.solvable:
        assert S.is_solution(sol.witness)


@settings(max_examples=150, deadline=None)
@given(systems(), st.data())
def test_count_independent_of_rhs(S, data):
    other_rhs = [tuple(data.draw(st.integers(0, m - 1)) for m in S.group.moduli) for _ in S.rhs]
    T = AbLinearSystem(S.group, S.coeffs, other_rhs, S.torsion)
    a, b = solve_ab_system(S), solve_ab_system(T)
    if a.solvable and b.solvable:
        assert a.count == b.count
    homogeneous = AbLinearSystem(S.group, S.coeffs, [S.group.zero] * len(S.rhs), S.torsion)
    if a.solvable:
        assert a.count == solve_ab_system(homogeneous).count


@pytest.mark.parametrize("moduli, k, order", [((4,), 2, 2), ((4,), 1, 1), ((2, 3), 2, 2), ((4, 6), 2, 4), ((12,), 8, 4)])
def test_torsion_subgroup(moduli, k, order):
    B = FinAbGroup(moduli)
    sub, incl = torsion_subgroup(B, k)
    assert sub.order == order
    brute = {x for x in B.elements() if B.scale(k, x) == B.zero}
    assert len(brute) == order
    image = {B.reduce([sum(c * w for c, w in zip(row, x)) for row in incl]) for x in sub.elements()}
    assert image == brute


def test_bad_system_shapes():
    B = FinAbGroup((2,))
    with pytest.raises(ValueError):
        AbLinearSystem(B, [[1, 0], [1]], [(0,), (0,)])
    with pytest.raises(ValueError):
        AbLinearSystem(B, [[1]], [])

import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from gentle.exactla import (GF, QQ, FieldError, Matrix, StructureConstantAlgebra,
                            UnsupportedCharacteristic, field_from_spec,
                            find_nontrivial_idempotent, is_local, kernel_basis,
                            radical, solve_linear)

small = st.integers(-4, 4)


def matrices(max_n=5):
    return st.integers(1, max_n).flatmap(
        lambda n: st.integers(1, max_n).flatmap(
            lambda m: st.lists(st.lists(small, min_size=m, max_size=m), min_size=n, max_size=n)))


def upper_triangular_2():
    # basis e11, e12, e22
    table = {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 2): {1: 1}, (2, 2): {2: 1}}
    return StructureConstantAlgebra(QQ, 3, table, {0: 1, 2: 1})


def dual_numbers_alg(field=QQ):
    return StructureConstantAlgebra(field, 2, {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}}, {0: 1})


def test_field_specs():
    assert field_from_spec(None) == QQ
    assert field_from_spec("Fp:7") == GF(7)
    for bad in ("Fp:4", "Fp:x", "R"):
        with pytest.raises(FieldError):
            field_from_spec(bad)


def test_rational_parse():
    assert QQ.parse("3/4") == QQ(3) / QQ(4)
    assert QQ.parse("0.25") == QQ(1) / QQ(4)
    with pytest.raises(FieldError):
        QQ.parse("abc")


def test_prime_field_arithmetic():
    F = GF(7)
    assert F(3) * F(5) == F(1)
    assert F(1) / F(3) == F(5)
    assert F("1/2") == F(4)
    with pytest.raises(FieldError):
        F("1/7")


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_matches_sympy(rows):
    assert Matrix(QQ, rows).rank() == sympy.Matrix(rows).rank()


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_nullity(rows):
    M = Matrix(QQ, rows)
    K = kernel_basis(M)
    assert K.ncols + M.rank() == M.ncols
    if K.ncols:
        assert (M * K).is_zero()


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.integers(0, 10 ** 6))
def test_inverse_round_trip(n, seed):
    rng = random.Random(seed)
    M = Matrix(QQ, [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)])
    if M.rank() < n:
        assert not M.is_invertible()
        return
    assert M * M.inverse() == Matrix.identity(QQ, n)


@settings(max_examples=40, deadline=None)
@given(matrices(4), st.integers(0, 10 ** 6))
def test_solve_consistent_systems(rows, seed):
    rng = random.Random(seed)
    A = Matrix(QQ, rows)
    x = Matrix(QQ, [[rng.randint(-3, 3)] for _ in range(A.ncols)])
    b = A * x
    y = solve_linear(A, b)
    assert y is not None and A * y == b


def test_solve_inconsistent():
    A = Matrix(QQ, [[1, 1], [2, 2]])
    assert solve_linear(A, Matrix(QQ, [[1], [3]])) is None


def test_rank_over_prime_field_differs():
    rows = [[1, 2], [3, 1]]
    assert Matrix(QQ, rows).rank() == 2
    assert Matrix(GF(5), rows).rank() == 1


def test_jordan_block_is_lower_triangular():
    J = Matrix.jordan(QQ, 3, QQ(2))
    assert J.rows == [[2, 0, 0], [1, 2, 0], [0, 1, 2]]


def test_radical_of_triangular_algebra():
    E = upper_triangular_2()
    rad = radical(E)
    assert rad == [{1: 1}]
    assert not is_local(E)
    e = find_nontrivial_idempotent(E)
    assert E.is_idempotent(e) and e not in ({}, E.unit)


def test_dual_numbers_local():
    E = dual_numbers_alg()
    assert len(radical(E)) == 1
    assert is_local(E)
    assert find_nontrivial_idempotent(E) is None


def test_small_characteristic_refused():
    with pytest.raises(UnsupportedCharacteristic):
        radical(dual_numbers_alg(GF(2)))

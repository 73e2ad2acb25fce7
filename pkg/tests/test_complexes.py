import json

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from gentle.algebra import build_gentle_algebra, hom_projectives
from gentle.complexes import (ComplexError, ProjComplex, all_square_invertible, cohomology_dims,
                              complex_from_json, complex_to_json, decompose,
                              decorated_matrices, direct_sum, is_homotopy_iso,
                              is_indecomposable, minimize, reconstruct, stalk,
                              total_cohomology, triple_of, verify_complex)
from gentle.datum import two_parallel_chains
from gentle.exactla import QQ, Matrix
from gentle.fixtures import dual_algebra, dual_x

A2 = dual_algebra(QQ)
V = A2.vertices[0]
EPS = A2.path(1, 2, 1)
A9 = build_gentle_algebra(two_parallel_chains(), QQ)

settings.register_profile("complexes", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])


@st.composite
def dual_complexes(draw, lo=-3, hi=0, max_gens=2):
    """Minimal complexes over k[e]/(e^2): every differential is a scalar matrix times e."""
    sizes = {r: draw(st.integers(0, max_gens)) for r in range(lo, hi + 1)}
    scal = {}
    for r in range(lo, hi):
        n, m = sizes[r + 1], sizes[r]
        scal[r] = [[draw(st.integers(-2, 2)) for _ in range(m)] for _ in range(n)]
    comps = {r: [V] * n for r, n in sizes.items() if n}
    diffs = {r: [[{EPS: c} if c else {} for c in row] for row in S] for r, S in scal.items() if S and S[0]}
    return ProjComplexFromScalars(comps, diffs, sizes, scal)


class ProjComplexFromScalars:
    def __init__(self, comps, diffs, sizes, scal):
        self.X = ProjComplex(A2, comps, diffs)
        self.sizes = sizes
        self.scal = scal

    def scalar_rank(self, r):
        S = self.scal.get(r)
        if not S or not S[0]:
            return 0
        return Matrix(QQ, S).rank()


def contractible(v, r=0):
    return ProjComplex(A2, {r: [v], r + 1: [v]}, {r: [[{A2.idem[v]: QQ.one}]]})


def test_dual_x_cohomology():
    for n in (1, 2, 3, 4):
        X = dual_x(A2, n)
        chk = verify_complex(X)
        assert chk.is_complex and chk.is_minimal
        want = {r: 0 for r in range(1 - n, 1)}
        if n == 1:
            want[0] = 2
        else:
            want[1 - n] = 1
            want[0] = 1
        assert total_cohomology(X) == want
        assert is_indecomposable(X)


def test_non_complex_detected():
    P1, P2, P3 = A9.vertices
    X = ProjComplex(A9, {-2: [P3], -1: [P2], 0: [P1]},
                    {-2: [[{A9.path(1, 3, 2): 1}]], -1: [[{A9.path(1, 2, 1): 1}]]})
    chk = verify_complex(X)
    assert not chk.is_complex and chk.failures


def test_bad_shapes_rejected():
    with pytest.raises(ComplexError):
        ProjComplex(A2, {0: ["nope"]})
    with pytest.raises(ComplexError):
        ProjComplex(A2, {0: [V], 1: [V]}, {0: [[{EPS: 1}, {}]]})
    P1, P2, _ = A9.vertices
    with pytest.raises(ComplexError):
        ProjComplex(A9, {0: [P1], 1: [P2]}, {0: [[{A9.path(1, 2, 1): 1}]]})


def test_json_rejects_garbage():
    with pytest.raises(ComplexError):
        complex_from_json(A2, {"diff": {}})
    with pytest.raises(ComplexError):
        complex_from_json(A2, {"degrees": {"0": [V], "1": [V]}, "diff": {"0": [[["walk", 1]]]}})


def test_json_coefficients():
    obj = {"degrees": {"0": [V], "1": [V]}, "diff": {"0": [[[["3/2", ["path", 1, 2, 1]]]]]}}
    X = complex_from_json(A2, obj)
    assert X.diffs[0][0][0] == {EPS: QQ(3) / QQ(2)}
    assert complex_from_json(A2, json.loads(json.dumps(complex_to_json(X)))) == X


def test_contractible_minimizes_away():
    C = contractible(V)
    assert verify_complex(C).is_complex and not verify_complex(C).is_minimal
    assert minimize(C).is_zero
    assert decompose(C) == []
    assert is_homotopy_iso(C, ProjComplex(A2, {}))


def test_homotopy_iso_distinguishes_shift():
    X = dual_x(A2, 2)
    assert is_homotopy_iso(X, X.shift(2).shift(-2))
    assert not is_homotopy_iso(X, X.shift(1))
    assert not is_homotopy_iso(X, dual_x(A2, 3))


@settings(settings.get_profile("complexes"))
@given(dual_complexes())
def test_cohomology_matches_scalar_ranks(C):
    got = total_cohomology(C.X)
    for r, n in C.sizes.items():
        want = 2 * n - C.scalar_rank(r) - C.scalar_rank(r - 1)
        assert got.get(r, 0) == want


@settings(settings.get_profile("complexes"))
@given(dual_complexes())
def test_euler_characteristic(C):
    X = C.X
    lhs = sum((-1) ** (r % 2) * v for r, v in total_cohomology(X).items())
    rhs = sum((-1) ** (r % 2) * 2 * len(vs) for r, vs in X.comps.items())
    assert lhs == rhs


@settings(settings.get_profile("complexes"))
@given(dual_complexes(), st.integers(-2, 0))
def test_minimize_strips_contractible_summand(C, r):
    X = C.X
    Y = minimize(direct_sum(X, contractible(V, r)))
    assert Y.rank_vector() == X.rank_vector()
    assert is_homotopy_iso(X, Y)


@settings(settings.get_profile("complexes"))
@given(dual_complexes())
def test_decompose_into_indecomposables(C):
    X = C.X
    parts = decompose(X)
    assert all(is_indecomposable(P) for P in parts)
    if parts:
        assert is_homotopy_iso(direct_sum(*parts), X)
    else:
        assert X.is_zero


@settings(settings.get_profile("complexes"))
@given(dual_complexes(), st.integers(-3, 3))
def test_json_and_shift_round_trip(C, n):
    X = C.X
    assert complex_from_json(A2, json.loads(json.dumps(complex_to_json(X)))) == X
    assert X.shift(n).shift(-n) == X
    if not X.is_zero:
        sh = total_cohomology(X.shift(n))
        assert sh == {r - n: v for r, v in total_cohomology(X).items()}


@settings(settings.get_profile("complexes"))
@given(dual_complexes())
def test_triple_round_trip(C):
    X = C.X
    if X.is_zero:
        return
    T = triple_of(X)
    assert all_square_invertible(T)
    for M in decorated_matrices(T).values():
        assert M.matrix.nrows == M.matrix.ncols
    assert is_homotopy_iso(reconstruct(T), X)


@pytest.mark.parametrize("x", A9.vertices)
def test_stalk_cohomology_is_hom_space(x):
    dims = cohomology_dims(stalk(A9, x))[0]
    assert dims == {g: len(hom_projectives(A9, g, x)) for g in A9.vertices}

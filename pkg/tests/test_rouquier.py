import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from gentle.algebra import build_gentle_algebra, build_normalization
from gentle.complexes import ComplexError, ProjComplex, total_cohomology
from gentle.datum import dual_numbers, three_chain_loop, two_parallel_chains, validate_datum
from gentle.exactla import QQ
from gentle.fixtures import dual_algebra, dual_x, hook_string, square_band
from gentle.rouquier import (build_generator, fat_point_algebra, fat_point_probe,
                             generation_certificate)
from gentle.words import band_complex, enumerate_strings, string_complex

D9 = two_parallel_chains()
A9 = build_gentle_algebra(D9, QQ)
H9 = build_normalization(D9, QQ)
A2 = dual_algebra(QQ)
V = A2.vertices[0]
EPS = A2.path(1, 2, 1)
fast = settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def test_generator_members():
    Z = build_generator(dual_numbers())
    assert Z.members == [(1, 2, 1), (1, 3, 1), (1, 3, 2)]
    assert Z.dims() == [1, 2, 1]
    assert build_generator(validate_datum([3])).dims() == [1, 2, 3, 1, 2, 1]


@pytest.mark.parametrize("m", [(2,), (3,), (2, 3), (3, 3, 2)])
def test_generator_count(m):
    Z = build_generator(validate_datum(list(m)))
    # one W(i, (a, b)) per pair 1 <= b < a <= m_i + 1
    assert len(Z.members) == sum(k * (k + 1) // 2 for k in m)
    assert len(set(Z.members)) == len(Z.members)


def test_generator_simples():
    Z = build_generator(D9, A9)
    assert set(Z.simples) == set(A9.vertices)
    for v, (k, note) in Z.simples.items():
        i, a, b = Z.members[k]
        assert a == b + 1


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_dual_x_certificates(n):
    cert = generation_certificate(dual_numbers(), dual_x(A2, n))
    assert cert.ok and cert.exact and cert.chain_map and cert.euler_ok
    assert len(cert.degrees) == n
    js = cert.to_json()
    assert js["ok"] and all(row["exact"] for row in js["exactness"])


def test_worked_complexes_certified():
    for X in (string_complex(D9, hook_string(), A9), band_complex(D9, square_band(2, 3, QQ), A9)):
        assert generation_certificate(D9, X, H9).ok


def test_certificate_needs_minimal_complex():
    C = ProjComplex(A2, {0: [V], 1: [V]}, {0: [[{A2.idem[V]: 1}]]})
    with pytest.raises(ComplexError, match="minimal"):
        generation_certificate(dual_numbers(), C)
    P1, P2, P3 = A9.vertices
    bad = ProjComplex(A9, {-2: [P3], -1: [P2], 0: [P1]},
                      {-2: [[{A9.path(1, 3, 2): 1}]], -1: [[{A9.path(1, 2, 1): 1}]]})
    with pytest.raises(ComplexError, match="not a complex"):
        generation_certificate(D9, bad)


D5 = three_chain_loop()
A5 = build_gentle_algebra(D5, QQ)
STRING_CASES = ([(D9, A9, v) for v in enumerate_strings(D9, 4, (-3, 0))] +
                [(D5, A5, v) for v in enumerate_strings(D5, 3, (-2, 0))])


@fast
@given(st.sampled_from(STRING_CASES))
def test_string_certificates(case):
    d, A, v = case
    cert = generation_certificate(d, string_complex(d, v, A))
    assert cert.ok
    # each degree splits as X + Ybar = Y + V
    for row in cert.degrees:
        assert row.dim_x + row.dim_ybar == row.dim_y + row.dim_v


@fast
@given(st.lists(st.lists(st.integers(-2, 2), min_size=2, max_size=2), min_size=2, max_size=2),
       st.lists(st.lists(st.integers(-2, 2), min_size=2, max_size=2), min_size=2, max_size=2))
def test_random_dual_complex_certificates(S1, S2):
    diffs = {-2: [[{EPS: c} if c else {} for c in row] for row in S1],
             -1: [[{EPS: c} if c else {} for c in row] for row in S2]}
    X = ProjComplex(A2, {-2: [V, V], -1: [V, V], 0: [V, V]}, diffs)
    cert = generation_certificate(dual_numbers(), X)
    assert cert.ok
    # the vertex glues (1,1) and (1,2): two simple H-modules per generator
    assert sum(c for _, _, c in cert.ybar) == 2 * sum(len(v) for v in X.comps.values())


@pytest.mark.parametrize("n", [1, 2, 3])
def test_fat_points(n):
    A, H = fat_point_algebra(n)
    assert A.dim == n + 1
    assert len(A.vertices) == 1
    probe = fat_point_probe(n, length=2)
    assert probe.ok
    assert len(probe.certificates) == 3
    top = total_cohomology(probe.complexes[0])
    assert top == {0: n + 1}


def test_fat_point_rejects_zero():
    with pytest.raises(ValueError):
        fat_point_algebra(0)

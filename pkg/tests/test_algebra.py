import random

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from gentle.algebra import (AlgebraError, algebras_of, build_gentle_algebra, build_hereditary,
                            build_normalization, build_resolution_algebra, embed,
                            global_dimension, hom_projectives, minimal_resolution,
                            quiver_arrows, quiver_dot, radical_power_vanishes,
                            radical_subspace_matches, witness_datum)
from gentle.datum import (all_datums, build_index_sets, dual_numbers, skew_two_chains,
                          special_cycles, three_chain_loop, two_parallel_chains)
from gentle.exactla import GF, QQ

CORPUS = all_datums()
SKEW = [d for d in all_datums(gentle_only=False) if not d.is_gentle][:40]


def count_dim_a(d):
    """Strictly lower units of each chain, plus one idempotent per vertex."""
    lower = sum(mi * (mi - 1) // 2 for mi in d.m)
    return lower + len(build_index_sets(d).omega_tilde)


def count_dim_h(d):
    """Blowing up a position doubles its row and its column, diagonal block included."""
    total = 0
    for i, mi in enumerate(d.m, 1):
        w = [2 if d.self_tied((i, j)) else 1 for j in range(1, mi + 1)]
        total += sum(w[a] * w[b] for a in range(mi) for b in range(a + 1))
    return total


def random_element(alg, rng):
    return {n: alg.field(rng.randint(-2, 2)) for n in range(alg.dim) if rng.random() < 0.5}


def test_golden_dimensions():
    assert build_gentle_algebra(dual_numbers(), QQ).dim == 2
    assert build_gentle_algebra(three_chain_loop(), QQ).dim == 5
    assert build_gentle_algebra(two_parallel_chains(), QQ).dim == 9


def test_blown_up_triangular_dimensions():
    # the 5x5 shape with rows 2, 2, 3, 5, 5 filled in
    assert build_hereditary(QQ, (3,), [frozenset({1, 3})]).dim == 17
    # 2x2 block at position 2 is full
    assert build_hereditary(QQ, (3,), [frozenset({2})]).dim == 11


def test_resolution_algebra_dimensions():
    # dim B = dim A + 2 dim H + dim I
    for d, want in ((dual_numbers(), 9), (three_chain_loop(), 20), (two_parallel_chains(), 39)):
        A, H, B = algebras_of(d, QQ, with_b=True)
        dim_i = len(H.radical_indices())
        assert B.dim == want == A.dim + 2 * H.dim + dim_i
        assert B.witness.matches and B.witness.datum == witness_datum(d)


@pytest.mark.parametrize("d", CORPUS[::7], ids=str)
def test_dimension_counts(d):
    A, H = algebras_of(d, QQ)
    assert A.dim == count_dim_a(d)
    assert H.dim == count_dim_h(d)
    assert radical_subspace_matches(A)
    assert radical_power_vanishes(A, max(d.m))


@pytest.mark.parametrize("d", SKEW[::5], ids=str)
def test_skew_dimension_counts(d):
    H = build_normalization(d, QQ)
    assert H.dim == count_dim_h(d)
    A = build_gentle_algebra(d, QQ)
    assert not A.is_gentle
    assert radical_subspace_matches(A)


@settings(max_examples=30, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.sampled_from(CORPUS), st.integers(0, 10 ** 6))
def test_associative_and_embedding_multiplicative(d, seed):
    rng = random.Random(seed)
    A, H = algebras_of(d, QQ)
    x, y, z = (random_element(A, rng) for _ in range(3))
    assert A.mul(A.mul(x, y), z) == A.mul(x, A.mul(y, z))
    assert embed(A, H, A.mul(x, y)) == H.mul(embed(A, H, x), embed(A, H, y))
    assert A.mul(A.unit, x) == {k: v for k, v in x.items() if v}


def test_unknown_path_rejected():
    A = build_gentle_algebra(dual_numbers(), QQ)
    with pytest.raises(AlgebraError):
        A.path(1, 1, 2)
    with pytest.raises(AlgebraError):
        hom_projectives(A, "nowhere", A.vertices[0])


def test_dual_numbers_resolution_is_periodic():
    A = build_gentle_algebra(dual_numbers(), QQ)
    res = minimal_resolution(A, A.vertices[0], 5)
    assert not res.terminated
    assert all(t == [A.vertices[0]] for t in res.terms)
    assert global_dimension(A, 5) is None


@pytest.mark.parametrize("d", CORPUS[::11], ids=str)
def test_finite_global_dimension_without_cycles(d):
    A = build_gentle_algebra(d, QQ)
    N = len(build_index_sets(d).omega_tilde) + 3
    gd = global_dimension(A, N)
    assert (gd is None) == bool(special_cycles(d))


def test_prime_field_build():
    A = build_gentle_algebra(two_parallel_chains(), GF(7))
    assert A.dim == 9 and A.field == GF(7)


def test_quiver():
    A = build_gentle_algebra(two_parallel_chains(), QQ)
    arrows = quiver_arrows(A)
    # two arrows per chain of length three
    assert len(arrows) == 4
    dot = quiver_dot(A)
    assert dot.startswith("digraph") and dot.rstrip().endswith("}")
    assert dot.count("->") == 4


def test_skew_algebra_vertices():
    A = build_gentle_algebra(skew_two_chains(), QQ)
    assert len(A.vertices) == len(build_index_sets(skew_two_chains()).omega_tilde)

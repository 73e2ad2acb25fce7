import random

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from gentle.algebra import build_gentle_algebra
from gentle.bunch import (BunchError, BunchOfChains, FullWord, Transform, acadac_word,
                          apply_transformation, band_rep, bunch_of_datum, chessboard,
                          check_transform, equal_up_to_stripe_order, find_shift,
                          has_local_end, is_rep_isomorphic, observed_exponent,
                          predicted_exponent, q_element, random_transform,
                          rep_of_triple, reversed_cyclic, shift_word, string_rep,
                          theta_row_addition, triple_with_rep, two_index_chains,
                          two_index_semichains, u_element, unreduce_word, validate_word)
from gentle.complexes import is_homotopy_iso, reconstruct, triple_of, verify_complex
from gentle.datum import dual_numbers, skew_two_chains, two_parallel_chains
from gentle.exactla import QQ, Matrix
from gentle.fixtures import hook_string, square_band
from gentle.words import BandDatum, band_complex, enumerate_strings, string_complex

D9 = two_parallel_chains()
A9 = build_gentle_algebra(D9, QQ)
STRINGS9 = enumerate_strings(D9, 4, (-3, 0))
CHESS_WORD = FullWord(("x1", "y1", "x2", "y2"), ("~", "-", "~"), True)
slow = settings(max_examples=15, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def square_band_rep(m=2, pi=2):
    X = band_complex(D9, square_band(m, pi, QQ), A9)
    T = triple_of(X)
    return X, T, rep_of_triple(T, D9)


def test_bunch_of_dual_numbers():
    B = bunch_of_datum(dual_numbers(), (-1, 0))
    assert len(B.sigma) == 4
    assert all(len(B.F[s]) == 2 and len(B.E[s]) == 1 for s in B.sigma)
    assert B.is_chain
    # (1,1) ~ (1,2) ties the u-letters in each degree
    assert B.tied(u_element((1, 1), 0)) == u_element((1, 2), 0)
    assert B.tied(q_element((1, 1), 0, (1, 2), -1)) == q_element((1, 2), -1, (1, 1), 0)


def test_skew_bunch_has_self_ties():
    B = bunch_of_datum(skew_two_chains(), (-1, 0))
    assert not B.is_chain
    selfs = {x for x, y in B.tie.items() if x == y}
    assert selfs == {u_element(p, r) for p in ((1, 2), (2, 2)) for r in (-1, 0)}


def test_bunch_structure_errors():
    with pytest.raises(BunchError, match="twice"):
        BunchOfChains([1], {1: ["x"]}, {1: ["x"]}, {})
    with pytest.raises(BunchError, match="symmetric"):
        BunchOfChains([1, 2], {1: ["x"], 2: ["y"]}, {}, {"x": "y"})
    with pytest.raises(BunchError, match="unknown"):
        BunchOfChains([1], {1: ["x"]}, {}, {"x": "z", "z": "x"})


def test_word_validation():
    B = two_index_chains()
    validate_word(B, acadac_word())
    with pytest.raises(BunchError, match="not a tie"):
        validate_word(B, FullWord(("a1", "c2"), ("~",)))
    with pytest.raises(BunchError, match="not a dash"):
        validate_word(B, FullWord(("c1", "d1"), ("-",)))
    with pytest.raises(BunchError, match="alternate"):
        validate_word(B, FullWord(("a1", "a2", "a1"), ("~", "~")))
    with pytest.raises(BunchError, match="followed by ~"):
        validate_word(B, FullWord(("a1", "c1"), ("-",)))
    with pytest.raises(BunchError, match="semi-chain"):
        validate_word(two_index_semichains(), FullWord(("a", "c1", "c2"), ("-", "~")))


def test_block_display_of_acadac():
    R = band_rep(two_index_chains(), QQ, acadac_word(), 2, QQ(5))
    blocks = sorted(R.display.entries.items())
    assert blocks == [((2, 1), ("phi2", "I")), ((2, 3), ("phi1", "I")), ((4, 3), ("psi2", "I")),
                      ((4, 5), ("psi1", "I")), ((6, 1), ("phi1", "J")), ((6, 5), ("phi2", "I"))]
    assert has_local_end(R)


def test_band_rep_rejects_bad_parameters():
    B = two_index_chains()
    w = acadac_word()
    with pytest.raises(BunchError, match="nonzero"):
        band_rep(B, QQ, w, 1, 0)
    with pytest.raises(BunchError, match="cyclic"):
        string_rep(B, QQ, w)
    doubled = FullWord(w.elems * 2, w.rels + ("-",) + w.rels, True)
    with pytest.raises(BunchError, match="periodic"):
        band_rep(B, QQ, doubled, 1, 2)


def test_string_rep_local_end():
    B = two_index_chains()
    R = string_rep(B, QQ, validate_word(B, FullWord(("c1", "c2", "a2", "a1"), ("~", "-", "~"))))
    assert has_local_end(R)


def test_string_word_must_start_with_tie():
    B = two_index_chains()
    with pytest.raises(BunchError, match="followed by ~"):
        validate_word(B, FullWord(("c1", "a1", "a2", "d2", "d1"), ("-", "~", "-", "~")))


def test_identity_and_row_additions():
    X, T, R = square_band_rep()
    assert equal_up_to_stripe_order(apply_transformation(R, Transform({}, {})), R)
    key = ((1, 2), -1)
    weights = [R.bunch.where[c[0]][2] for c in R.cols[key]]
    assert weights == [0, 0, 2, 2]
    # only weight-increasing additions are admissible
    with pytest.raises(BunchError, match="weight order"):
        check_transform(R, theta_row_addition(R, key, 2, 0))
    R2 = apply_transformation(R, theta_row_addition(R, key, 0, 2, 5))
    assert not equal_up_to_stripe_order(R, R2)
    assert is_rep_isomorphic(R, R2)
    assert is_homotopy_iso(X, reconstruct(triple_with_rep(T, R2)))


def test_unsound_transform_rejected():
    X, T, R = square_band_rep(1)
    key = next(iter(R.mats))
    n = R.mats[key].nrows
    with pytest.raises(BunchError):
        check_transform(R, Transform({key: Matrix.zeros(QQ, n, n)}, {}))


@slow
@given(st.integers(0, 10 ** 6), st.sampled_from([1, 2]))
def test_random_transforms_preserve_class(seed, m):
    X, T, R = square_band_rep(m, 3)
    t = random_transform(R, random.Random(seed))
    R2 = apply_transformation(R, t)
    assert is_rep_isomorphic(R, R2)
    X2 = reconstruct(triple_with_rep(T, R2))
    assert verify_complex(X2).is_complex
    assert is_homotopy_iso(X, X2)


@slow
@given(st.sampled_from(STRINGS9), st.integers(0, 10 ** 6))
def test_random_transforms_on_strings(v, seed):
    X = string_complex(D9, v, A9)
    T = triple_of(X)
    R = rep_of_triple(T, D9)
    R2 = apply_transformation(R, random_transform(R, random.Random(seed)))
    assert is_homotopy_iso(X, reconstruct(triple_with_rep(T, R2)))


@pytest.mark.parametrize("m, pi", [(1, 2), (2, 3), (1, -1)])
def test_band_complex_matches_band_rep(m, pi):
    w = square_band(m, pi, QQ)
    X, T, R = square_band_rep(m, pi)
    W = unreduce_word(D9, BandDatum(w.segments, m, w.pi))
    validate_word(R.bunch, W)
    assert is_rep_isomorphic(R, band_rep(R.bunch, QQ, W, m, QQ(pi)))


@pytest.mark.parametrize("v", STRINGS9[::3], ids=str)
def test_unreduce_commutes_with_reversal(v):
    assert unreduce_word(D9, v.reversed()) == unreduce_word(D9, v).reversed()


def test_unreduced_string_starts_and_ends_at_untied_letters():
    W = unreduce_word(D9, hook_string())
    B = bunch_of_datum(D9, (-3, 1))
    validate_word(B, W)
    assert W.elems[0][0] == "q" and W.elems[-1][0] == "q"


def _exponent_holds(B, w, k, rev, e, pi=QQ(2)):
    base = reversed_cyclic(w) if rev else w
    return is_rep_isomorphic(band_rep(B, QQ, w, 1, pi), band_rep(B, QQ, shift_word(base, k), 1, pi ** e))


@pytest.mark.parametrize("rev", [False, True])
@pytest.mark.parametrize("k", [0, 1, 2])
def test_observed_sign_law_two_index_bunch(k, rev):
    B = two_index_chains()
    e = observed_exponent(B, acadac_word(), k, rev)
    assert _exponent_holds(B, acadac_word(), k, rev, e)
    assert not _exponent_holds(B, acadac_word(), k, rev, -e)


@pytest.mark.parametrize("rev", [False, True])
@pytest.mark.parametrize("k", [0, 1])
def test_observed_sign_law_chessboard(k, rev):
    B = chessboard(2)
    e = observed_exponent(B, CHESS_WORD, k, rev)
    assert _exponent_holds(B, CHESS_WORD, k, rev, e)


def test_textbook_sign_rule_disagrees_with_stripe_rules():
    # shift by one pair across E-E ties: textbook keeps pi, the stripe rules invert it
    B = two_index_chains()
    assert predicted_exponent(B, acadac_word(), 1, False) == 1
    assert not _exponent_holds(B, acadac_word(), 1, False, 1)
    # reversal across an E-F tie: textbook inverts pi, the stripe rules keep it
    C = chessboard(2)
    assert predicted_exponent(C, CHESS_WORD, 1, True) == -1
    assert not _exponent_holds(C, CHESS_WORD, 1, True, -1)


def test_find_shift():
    w = acadac_word()
    assert find_shift(w, shift_word(w, 2)) == (2, False)
    assert find_shift(w, shift_word(reversed_cyclic(w), 1)) == (1, True)

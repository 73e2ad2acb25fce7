import json

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from gentle.algebra import build_gentle_algebra
from gentle.complexes import (complex_to_json, is_homotopy_iso, is_indecomposable,
                              total_cohomology, verify_complex)
from gentle.datum import dual_numbers, two_parallel_chains
from gentle.exactla import QQ
from gentle.fixtures import (dual_x, expected_hook_string, expected_square_band,
                             hook_string, square_band)
from gentle.words import (HIGH_FIRST, LOW_FIRST, BandDatum, Segment, StringDatum,
                          WordError, band_complex, canonical_band, cycle_seed,
                          enumerate_bands, enumerate_strings, gluing_diagram, gluing_dot,
                          is_periodic, projective_resolution, string_complex,
                          truncated_infinite_string, validate_band, validate_string,
                          word_equivalent_bands, word_equivalent_strings, word_from_json)

S = Segment
D9 = two_parallel_chains()
A9 = build_gentle_algebra(D9, QQ)
STRINGS9 = enumerate_strings(D9, 4, (-3, 0))
BANDS9 = enumerate_bands(D9, 4)
fast = settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def test_worked_band_complex():
    for m, pi in ((1, 1), (1, 2), (2, 3), (3, QQ(-1) / QQ(2))):
        X = band_complex(D9, square_band(m, pi, QQ), A9)
        assert complex_to_json(X) == complex_to_json(expected_square_band(A9, m, pi))


def test_worked_string_complex():
    X = string_complex(D9, hook_string(), A9)
    assert complex_to_json(X) == complex_to_json(expected_hook_string(A9))
    assert verify_complex(X).is_minimal


@pytest.mark.parametrize("segs, msg", [
    ((S(1, 4, 1, 0, HIGH_FIRST),), "lone stalk"),
    ((S(1, 2, 1, 0, HIGH_FIRST), S(1, 3, 1, 0, LOW_FIRST)), "untied"),
    ((S(2, 3, 2, -1, HIGH_FIRST), S(1, 2, 1, 1, HIGH_FIRST)), "degree mismatch"),
    ((S(1, 5, 1, 0, HIGH_FIRST),), "need 1 <= b < a"),
    ((S(3, 2, 1, 0, HIGH_FIRST),), "chain out of range"),
])
def test_invalid_strings(segs, msg):
    with pytest.raises(WordError, match=msg):
        validate_string(D9, StringDatum(segs))


def test_invalid_bands():
    good = square_band(1, 2, QQ)
    assert validate_band(D9, good, QQ) is good
    with pytest.raises(WordError, match="periodic"):
        validate_band(D9, BandDatum(good.segments * 2, 1, QQ(2)), QQ)
    with pytest.raises(WordError, match="nonzero"):
        validate_band(D9, BandDatum(good.segments, 1, QQ(0)), QQ)
    with pytest.raises(WordError, match="multiplicity"):
        validate_band(D9, BandDatum(good.segments, 0, QQ(1)), QQ)
    with pytest.raises(WordError):
        validate_band(D9, BandDatum(good.segments[:3], 1, QQ(1)), QQ)


def test_word_json():
    w = word_from_json(json.dumps(square_band(2, 3, QQ).to_json(QQ)), QQ)
    assert w == BandDatum(square_band().segments, 2, QQ(3))
    v = word_from_json(hook_string().to_json())
    assert v == hook_string()
    with pytest.raises(WordError):
        word_from_json({"segments": []})
    with pytest.raises(WordError):
        word_from_json({"segments": [{"i": 1, "a": 2, "b": 1, "r": 0, "orient": "sideways"}]})
    with pytest.raises(WordError):
        word_from_json({"segments": [{"i": 1}]})


def test_periodicity():
    segs = square_band().segments
    assert not is_periodic(segs)
    assert is_periodic(segs + segs)


def test_dual_numbers_have_no_bands_and_strings_are_xn():
    d = dual_numbers()
    A = build_gentle_algebra(d, QQ)
    assert enumerate_bands(d, 6) == []
    strings = enumerate_strings(d, 4, (-3, 0))
    assert strings
    for v in strings:
        X = string_complex(d, v, A)
        lo, hi = X.window()
        assert is_homotopy_iso(X, dual_x(A, hi - lo + 1, hi))


def test_square_band_is_enumerated():
    assert canonical_band(square_band().segments) in BANDS9


def test_gluing_diagram_and_dot():
    g = gluing_diagram(D9, hook_string().segments, False)
    # two stalk ends are missing; four ties leave P3, P3, P2, P1
    assert (len(g.nodes), len(g.solid), len(g.dotted)) == (8, 3, 4)
    dot = gluing_dot(D9, hook_string().segments, False)
    assert dot.startswith("digraph") and dot.count("->") >= 2


def test_band_equivalence_rules():
    w = square_band(1, 2, QQ)
    rev = BandDatum(tuple(s.flipped() for s in reversed(w.segments)), 1, QQ(1) / QQ(2))
    rot = BandDatum(w.segments[1:] + w.segments[:1], 1, QQ(2))
    assert word_equivalent_bands(w, rev, QQ)
    assert word_equivalent_bands(w, rot, QQ)
    assert not word_equivalent_bands(w, BandDatum(w.segments, 1, QQ(3)), QQ)
    X = band_complex(D9, w, A9)
    assert is_homotopy_iso(X, band_complex(D9, rev, A9))
    assert is_homotopy_iso(X, band_complex(D9, rot, A9))
    assert not is_homotopy_iso(X, band_complex(D9, BandDatum(w.segments, 1, QQ(3)), A9))


def test_dual_numbers_resolution_truncations():
    d = dual_numbers()
    A = build_gentle_algebra(d, QQ)
    seed = cycle_seed(d, [(1, 1)])
    tr = truncated_infinite_string(d, seed, [(1, 1)], (-3, 0), A)
    assert verify_complex(tr.complex).is_complex
    assert tr.cut_degree is not None
    res = projective_resolution(A, A.vertices[0], 3)
    assert not res.terminated
    assert is_homotopy_iso(res.complex, dual_x(A, 4))


@fast
@given(st.sampled_from(STRINGS9))
def test_enumerated_strings_valid_minimal_indecomposable(v):
    validate_string(D9, v)
    X = string_complex(D9, v, A9)
    chk = verify_complex(X)
    assert chk.is_complex and chk.is_minimal
    assert is_indecomposable(X)


@fast
@given(st.sampled_from(STRINGS9))
def test_reversed_string_same_complex(v):
    assert word_equivalent_strings(v, v.reversed())
    assert is_homotopy_iso(string_complex(D9, v, A9), string_complex(D9, v.reversed(), A9))


@fast
@given(st.sampled_from(STRINGS9), st.integers(-2, 2))
def test_segment_shift_moves_degrees(v, n):
    X = string_complex(D9, v, A9)
    Y = string_complex(D9, v.shifted(n), A9)
    assert Y.rank_vector() == {r + n: c for r, c in X.rank_vector().items()}
    assert total_cohomology(Y) == {r + n: c for r, c in total_cohomology(X).items()}


@fast
@given(st.sampled_from(BANDS9), st.sampled_from([1, 2]), st.sampled_from([1, 2, -3]))
def test_enumerated_bands_indecomposable(segs, m, pi):
    w = BandDatum(segs, m, QQ(pi))
    validate_band(D9, w, QQ)
    X = band_complex(D9, w, A9)
    assert verify_complex(X).is_minimal
    assert is_indecomposable(X)

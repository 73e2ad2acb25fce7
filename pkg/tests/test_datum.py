import json

import pytest
from hypothesis import given, settings, strategies as st

from gentle.datum import (DatumError, all_datums, build_index_sets, datum_from_json,
                          dual_numbers, skew_two_chains, special_cycles, tau,
                          three_chain_loop, two_parallel_chains, validate_datum)


@st.composite
def datums(draw, allow_self=False):
    m = draw(st.lists(st.integers(2, 4), min_size=1, max_size=3))
    omega = [(i, j) for i, mi in enumerate(m, 1) for j in range(1, mi + 1)]
    order = draw(st.permutations(omega))
    rels = []
    k = 0
    while k < len(order):
        choice = draw(st.integers(0, 2 if allow_self else 1))
        if choice == 1 and k + 1 < len(order):
            rels.append((order[k], order[k + 1]))
            k += 2
            continue
        if choice == 2:
            rels.append((order[k], order[k]))
        k += 1
    return validate_datum(m, rels)


def periodic_points(d):
    """Positions x with tau^k(x) = x for some k, found by iterating from each x."""
    out = set()
    for x in d.omega:
        y = x
        for _ in range(len(d.omega)):
            y = tau(d, y)
            if y is None:
                break
            if y == x:
                out.add(x)
                break
    return out


def test_named_datums():
    assert dual_numbers().m == (2,) and dual_numbers().is_gentle
    assert three_chain_loop().relations == (((1, 1), (1, 3)),)
    assert len(two_parallel_chains().relations) == 3
    assert not skew_two_chains().is_gentle
    assert skew_two_chains().blown(1) == [2]


@pytest.mark.parametrize("m, rels", [
    ([1], []),
    ([], []),
    ([2], [[(1, 1), (1, 3)]]),
    ([2, 2], [[(1, 1), (2, 1)], [(1, 1), (2, 2)]]),
    ([2], [[(1, 1)]]),
    ("ab", []),
])
def test_invalid_datums(m, rels):
    with pytest.raises(DatumError):
        validate_datum(m, rels)


def test_json_round_trip():
    d = two_parallel_chains()
    assert datum_from_json(json.loads(d.dumps())) == d
    with pytest.raises(DatumError):
        datum_from_json({"relations": []})


def test_index_set_counts():
    assert build_index_sets(two_parallel_chains()).counts() == {
        "omega": 6, "omega_bar": 6, "omega_tilde": 3, "omega_hat": 3}
    assert build_index_sets(skew_two_chains()).counts() == {
        "omega": 6, "omega_bar": 8, "omega_tilde": 6, "omega_hat": 4}


def test_known_cycles():
    # k[e]/(e^2) has infinite global dimension
    assert special_cycles(dual_numbers()) == [[(1, 1)]]
    assert special_cycles(three_chain_loop()) == []
    d = validate_datum([2], [])
    assert special_cycles(d) == []
    cyc = validate_datum([2, 2], [[(1, 2), (2, 1)], [(2, 2), (1, 1)]])
    assert special_cycles(cyc) == [[(1, 1), (2, 1)]]


def test_corpus_size():
    assert len(all_datums()) == 144


@settings(max_examples=80, deadline=None)
@given(datums(allow_self=True))
def test_index_set_sizes(d):
    pairs = sum(1 for x, y in d.relations if x != y)
    selfs = sum(1 for x, y in d.relations if x == y)
    c = build_index_sets(d).counts()
    n = len(d.omega)
    assert c["omega_bar"] == n + selfs
    assert c["omega_hat"] == n - pairs
    assert c["omega_tilde"] == n - pairs + selfs


@settings(max_examples=80, deadline=None)
@given(datums())
def test_cycles_are_the_periodic_points(d):
    cycles = special_cycles(d)
    found = [x for c in cycles for x in c]
    assert len(found) == len(set(found))
    assert set(found) == periodic_points(d)
    for c in cycles:
        assert c[0] == min(c)
        for a, b in zip(c, c[1:] + c[:1]):
            assert tau(d, a) == b

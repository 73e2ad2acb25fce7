"""Small named inputs used by the demos, the CLI suite and the tests."""
from __future__ import annotations

from typing import Dict, List

from .algebra import MatrixAlgebra, build_gentle_algebra
from .complexes import ProjComplex, zero_amat
from .datum import (Datum, dual_numbers, skew_two_chains, three_chain_loop,
                    two_parallel_chains)
from .exactla import Matrix
from .words import HIGH_FIRST, LOW_FIRST, BandDatum, Segment, StringDatum

S = Segment


def gentle_datums() -> Dict[str, Datum]:
    """The three gentle datums the suite runs on, keyed by a short name."""
    return {"dual": dual_numbers(), "loop3": three_chain_loop(), "pair33": two_parallel_chains()}


def all_datums_named() -> Dict[str, Datum]:
    out = gentle_datums()
    out["skew33"] = skew_two_chains()
    return out


def square_band(m: int = 1, pi=1, field=None) -> BandDatum:
    """Four-segment band over two_parallel_chains: P3^m -> P2^2m -> P1^m."""
    if field is not None:
        pi = field(pi)
    segs = (S(2, 3, 2, -1, HIGH_FIRST), S(1, 2, 1, 0, HIGH_FIRST),
            S(2, 2, 1, 0, LOW_FIRST), S(1, 3, 2, -1, LOW_FIRST))
    return BandDatum(segs, m, pi)


def hook_string() -> StringDatum:
    """Five-segment string over two_parallel_chains: P3 -> P3 + P2 -> P1."""
    return StringDatum((S(2, 4, 3, -1, HIGH_FIRST), S(1, 3, 1, 0, HIGH_FIRST),
                        S(2, 2, 1, 0, LOW_FIRST), S(1, 3, 2, -1, LOW_FIRST),
                        S(2, 4, 3, -2, LOW_FIRST)))


def _paths(A: MatrixAlgebra):
    return {"a": A.path(1, 2, 1), "c": A.path(2, 2, 1), "b": A.path(1, 3, 2),
            "d": A.path(2, 3, 2), "ba": A.path(1, 3, 1)}


def expected_square_band(A: MatrixAlgebra, m: int, pi) -> ProjComplex:
    """Hand-written target: d^-2 = (dI ; bJ), d^-1 = (aI, cI)."""
    f = A.field
    one = f.one
    P1, P2, P3 = A.vertices
    p = _paths(A)
    J = Matrix.jordan(f, m, f(pi))
    d1 = zero_amat(2 * m, m)
    for k in range(m):
        d1[k][k] = {p["d"]: one}
    for r in range(m):
        for k in range(m):
            if J[r, k]:
                d1[m + r][k] = {p["b"]: J[r, k]}
    d2 = zero_amat(m, 2 * m)
    for k in range(m):
        d2[k][k] = {p["a"]: one}
        d2[k][m + k] = {p["c"]: one}
    return ProjComplex(A, {-2: [P3] * m, -1: [P2] * (2 * m), 0: [P1] * m}, {-2: d1, -1: d2})


def expected_hook_string(A: MatrixAlgebra) -> ProjComplex:
    """Hand-written target: d^-2 = (0 ; b), d^-1 = (ba, c)."""
    one = A.field.one
    P1, P2, P3 = A.vertices
    p = _paths(A)
    return ProjComplex(A, {-2: [P3], -1: [P3, P2], 0: [P1]},
                       {-2: [[{}], [{p["b"]: one}]], -1: [[{p["ba"]: one}, {p["c"]: one}]]})


def dual_x(A: MatrixAlgebra, n: int, top: int = 0) -> ProjComplex:
    """A -e-> A -e-> ... -e-> A with n copies of A, the last one in degree ``top``."""
    v = A.vertices[0]
    eps = A.path(1, 2, 1)
    comps = {top - k: [v] for k in range(n)}
    diffs = {r: [[{eps: A.field.one}]] for r in range(top - n + 1, top)}
    return ProjComplex(A, comps, diffs)


def dual_algebra(field=None) -> MatrixAlgebra:
    return build_gentle_algebra(dual_numbers(), field)

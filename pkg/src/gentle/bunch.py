"""Bunches of (semi-)chains, their representations and admissible transformations.

A representation is a collection of matrices ``M_s`` (one per index ``s``):
rows are grouped into stripes labelled by elements of ``E_s`` and columns
into stripes labelled by elements of ``F_s``.  The group of admissible
transformations acts by ``M_s -> L_s M_s C_s^{-1}`` where

* ``L_s`` may add a row of weight x to a row of weight x' when x < x',
* ``C_s`` may add a column of weight y' to a column of weight y when y < y',
* the diagonal blocks of stripes tied by ``~`` are equal.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field as dc_field
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

from .complexes import Triple, stripe_label
from .datum import Datum
from .exactla import (Echelon, Matrix, StructureConstantAlgebra, is_local,
                      sparse_nullspace)
from .words import (HIGH_FIRST, LOW_FIRST, BandDatum, StringDatum, WordError,
                    validate_band, validate_string)


class BunchError(ValueError):
    pass


@dataclass
class BunchOfChains:
    """Index set, ordered E- and F-sets per index, and the tie involution."""

    sigma: List[Hashable]
    E: Dict[Hashable, List[Hashable]]
    F: Dict[Hashable, List[Hashable]]
    tie: Dict[Hashable, Hashable]
    names: Dict[Tuple[Hashable, Hashable], str] = dc_field(default_factory=dict)

    def __post_init__(self):
        self.where: Dict[Hashable, Tuple[Hashable, str, int]] = {}
        for s in self.sigma:
            for kind, sets in (("E", self.E), ("F", self.F)):
                for k, x in enumerate(sets.get(s, [])):
                    if x in self.where:
                        raise BunchError(f"element {x!r} occurs twice")
                    self.where[x] = (s, kind, k)
        for x, y in self.tie.items():
            if x not in self.where or y not in self.where:
                raise BunchError(f"tie {x!r} ~ {y!r} uses unknown elements")
            if self.tie.get(y) != x:
                raise BunchError(f"tie {x!r} ~ {y!r} is not symmetric")

    @property
    def is_chain(self) -> bool:
        return all(x != y for x, y in self.tie.items())

    def tied(self, x) -> Optional[Hashable]:
        return self.tie.get(x)

    def dash(self, x, y) -> bool:
        sx, kx, _ = self.where[x]
        sy, ky, _ = self.where[y]
        return sx == sy and kx != ky

    def less(self, x, y) -> bool:
        sx, kx, ix = self.where[x]
        sy, ky, iy = self.where[y]
        return sx == sy and kx == ky and ix < iy

    def omega_name(self, y, x) -> str:
        return self.names.get((y, x), f"w[{y},{x}]")

    def describe(self) -> str:
        lines = [f"indices: {len(self.sigma)}"]
        for s in self.sigma:
            lines.append(f"  {s}: E = {' < '.join(map(str, self.E.get(s, [])))} ;"
                         f" F = {' < '.join(map(str, self.F.get(s, [])))}")
        seen = set()
        ties = []
        for x, y in self.tie.items():
            if (y, x) not in seen:
                seen.add((x, y))
                ties.append(f"{x} ~ {y}")
        lines.append("ties: " + (", ".join(ties) if ties else "none"))
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# the bunch attached to a datum
# ---------------------------------------------------------------------------

def u_element(pos, r):
    return ("u", tuple(pos), r)


def q_element(pos, r, partner, partner_degree):
    return ("q", tuple(pos), r, tuple(partner), partner_degree)


def f_order(d: Datum, pos, r) -> List[tuple]:
    """The ordered F-set of ((i, j), r), following the direction of morphisms."""
    i, j = pos
    mi = d.m[i - 1]
    out = [q_element(pos, r, (i, b), r + 1) for b in range(j - 1, 0, -1)]
    out.append(q_element(pos, r, (i, mi + 1), r - 1))
    out += [q_element(pos, r, (i, a), r - 1) for a in range(mi, j, -1)]
    return out


def bunch_of_datum(d: Datum, window: Tuple[int, int]) -> BunchOfChains:
    lo, hi = window
    sigma = [(pos, r) for r in range(lo, hi + 1) for pos in d.omega]
    E = {s: [u_element(*s)] for s in sigma}
    F = {s: f_order(d, *s) for s in sigma}
    tie = {}
    for (pos, r) in sigma:
        other = d.tied(pos)
        if other is not None:
            tie[u_element(pos, r)] = u_element(other, r)
    for i, mi in enumerate(d.m, 1):
        for r in range(lo + 1, hi + 1):
            for b in range(1, mi + 1):
                for a in range(b + 1, mi + 1):
                    low = q_element((i, b), r, (i, a), r - 1)
                    high = q_element((i, a), r - 1, (i, b), r)
                    tie[low] = high
                    tie[high] = low
    return BunchOfChains(sigma, E, F, tie)


# ---------------------------------------------------------------------------
# representations
# ---------------------------------------------------------------------------

@dataclass
class RepX:
    """Matrices with labelled stripes.

    ``rows[s]`` lists ``(element, sign, tag)`` per row and ``cols[s]`` lists
    ``(element, tag)`` per column.  Conjugate stripes list their rows or
    columns in matching order.
    """

    bunch: BunchOfChains
    field: object
    mats: Dict[Hashable, Matrix]
    rows: Dict[Hashable, List[tuple]]
    cols: Dict[Hashable, List[tuple]]

    def stripe_sizes(self) -> Dict[tuple, int]:
        out: Dict[tuple, int] = {}
        for s in self.mats:
            for x, sg, _ in self.rows[s]:
                out[(x, sg)] = out.get((x, sg), 0) + 1
            for y, _ in self.cols[s]:
                out[(y, "")] = out.get((y, ""), 0) + 1
        return out

    def check(self) -> bool:
        sizes = self.stripe_sizes()
        for x, y in self.bunch.tie.items():
            if x != y and sizes.get((x, ""), 0) != sizes.get((y, ""), 0):
                raise BunchError(f"conjugate stripes {x!r}, {y!r} differ in size")
        return True

    def is_square_invertible(self) -> bool:
        return all(M.nrows == M.ncols and M.is_invertible() for M in self.mats.values())


def _row_stripe(label):
    return (label[0], label[1])


def _col_stripe(label):
    return (label[0], "")


# ---------------------------------------------------------------------------
# words and string/band representations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FullWord:
    elems: Tuple[Hashable, ...]
    rels: Tuple[str, ...]
    cyclic: bool = False

    def reversed(self) -> "FullWord":
        return FullWord(tuple(reversed(self.elems)), tuple(reversed(self.rels)), self.cyclic)

    def __str__(self):
        out = [str(self.elems[0])]
        for rho, x in zip(self.rels, self.elems[1:]):
            out += [rho, str(x)]
        return " ".join(out)


def validate_word(B: BunchOfChains, w: FullWord) -> FullWord:
    if not w.elems or len(w.rels) != len(w.elems) - 1:
        raise BunchError("malformed word")
    for x in w.elems:
        if x not in B.where:
            raise BunchError(f"unknown element {x!r}")
    for k, rho in enumerate(w.rels):
        x, y = w.elems[k], w.elems[k + 1]
        if rho == "~":
            if B.tied(x) != y:
                raise BunchError(f"{x!r} ~ {y!r} is not a tie")
        elif rho == "-":
            if not B.dash(x, y):
                raise BunchError(f"{x!r} - {y!r} is not a dash")
        else:
            raise BunchError(f"bad relation {rho!r}")
        if k and rho == w.rels[k - 1]:
            raise BunchError("relations must alternate")
    if any(B.tied(x) == x for x in w.elems):
        raise BunchError("self-tied elements need the semi-chain combinatorics, which is out of scope")
    if w.cyclic:
        if len(w.elems) % 2 or w.rels[0] != "~" or w.rels[-1] != "~":
            raise BunchError("a cyclic word starts and ends with ~ and has even length")
        if not B.dash(w.elems[-1], w.elems[0]):
            raise BunchError("a cyclic word must close with a dash")
    else:
        if B.tied(w.elems[0]) is not None and (not w.rels or w.rels[0] != "~"):
            raise BunchError("a tied first element must be followed by ~")
        if B.tied(w.elems[-1]) is not None and (not w.rels or w.rels[-1] != "~"):
            raise BunchError("a tied last element must be preceded by ~")
    return w


def _summands(w: FullWord) -> List[int]:
    """Summand index of each letter: letters joined by ~ share a summand."""
    out = []
    k = -1
    for e in range(len(w.elems)):
        if e == 0 or w.rels[e - 1] != "~":
            k += 1
        out.append(k)
    return out


def is_periodic_word(w: FullWord) -> bool:
    n = len(w.elems)
    for k in range(2, n, 2):
        if w.elems[k:] + w.elems[:k] == w.elems:
            return True
    return False


@dataclass
class BlockDisplay:
    """The map as a block matrix over summands: (row, col) -> (omega name, block name), 1-based."""

    summands: List[Tuple[Hashable, ...]]
    entries: Dict[Tuple[int, int], Tuple[str, str]]


def _rep_from_word(B: BunchOfChains, field, w: FullWord, m: int, closing: Optional[Matrix]):
    validate_word(B, w)
    zs = _summands(w)
    nsum = zs[-1] + 1
    classes = [[] for _ in range(nsum)]
    for e, k in enumerate(zs):
        classes[k].append(w.elems[e])
    rows: Dict[Hashable, List[tuple]] = {s: [] for s in B.sigma}
    cols: Dict[Hashable, List[tuple]] = {s: [] for s in B.sigma}
    for k, cls in enumerate(classes):
        for x in cls:
            s, kind, _ = B.where[x]
            for c in range(m):
                if kind == "E":
                    rows[s].append((x, "", (k, c)))
                else:
                    cols[s].append((x, (k, c)))
    for s in B.sigma:
        rows[s].sort(key=lambda lab: (B.where[lab[0]][2], lab[2]))
        cols[s].sort(key=lambda lab: (B.where[lab[0]][2], lab[1]))
    links = [(e, e + 1, False) for e, rho in enumerate(w.rels) if rho == "-"]
    if w.cyclic:
        links.append((len(w.elems) - 1, 0, True))
    ident = Matrix.identity(field, m)
    entries = {}
    display = {}
    for e1, e2, closes in links:
        x1, x2 = w.elems[e1], w.elems[e2]
        if B.where[x1][1] == "E":
            ex, fy = e1, e2
        else:
            ex, fy = e2, e1
        x, y = w.elems[ex], w.elems[fy]
        s = B.where[x][0]
        block = closing if closes else ident
        kx, ky = zs[ex], zs[fy]
        display[(kx + 1, ky + 1)] = (B.omega_name(y, x), "J" if closes else "I")
        for a in range(m):
            for b in range(m):
                if block[a, b]:
                    entries[(s, (x, "", (kx, a)), (y, (ky, b)))] = block[a, b]
    mats = {}
    for s in B.sigma:
        if not rows[s] and not cols[s]:
            continue
        ri = {lab: n for n, lab in enumerate(rows[s])}
        ci = {lab: n for n, lab in enumerate(cols[s])}
        M = Matrix.zeros(field, len(rows[s]), len(cols[s]))
        for (s2, rl, cl), v in entries.items():
            if s2 == s:
                M[ri[rl], ci[cl]] = v
        mats[s] = M
    rows = {s: v for s, v in rows.items() if s in mats}
    cols = {s: v for s, v in cols.items() if s in mats}
    R = RepX(B, field, mats, rows, cols)
    R.display = BlockDisplay([tuple(c) for c in classes], display)
    return R


def string_rep(B: BunchOfChains, field, w: FullWord) -> RepX:
    if w.cyclic:
        raise BunchError("string words are not cyclic")
    return _rep_from_word(B, field, w, 1, None)


def band_rep(B: BunchOfChains, field, w: FullWord, m: int, pi) -> RepX:
    if not w.cyclic:
        raise BunchError("band words are cyclic")
    if not field(pi):
        raise BunchError("pi must be nonzero")
    if is_periodic_word(w):
        raise BunchError("periodic band word")
    return _rep_from_word(B, field, w, m, Matrix.jordan(field, m, field(pi)))


# ---------------------------------------------------------------------------
# reduced words -> full words
# ---------------------------------------------------------------------------

def _end_element(d: Datum, seg, which):
    i = seg.i
    if which == "low":
        return q_element((i, seg.b), seg.r, (i, seg.a), seg.r - 1)
    return q_element((i, seg.a), seg.r - 1, (i, seg.b), seg.r)


def _segment_letters(d: Datum, seg):
    if seg.is_stalk(d):
        return [_end_element(d, seg, "low")]
    pair = [_end_element(d, seg, "low"), _end_element(d, seg, "high")]
    return pair if seg.orient == LOW_FIRST else pair[::-1]


def unreduce_word(d: Datum, v) -> FullWord:
    """Reinsert the E-letters u at every junction (and at untied free ends)."""
    if isinstance(v, BandDatum):
        validate_band(d, v)
        segs = v.segments
        cyclic = True
    elif isinstance(v, StringDatum):
        validate_string(d, v)
        segs = v.segments
        cyclic = False
    else:
        raise BunchError("expected a string or band datum")
    elems: List = []
    rels: List[str] = []

    def push(x, rho=None):
        if elems:
            rels.append(rho)
        elems.append(x)

    first = segs[0]
    if not cyclic and not (first.is_stalk(d) and first.orient == HIGH_FIRST):
        pos, r = first.entry()
        push(u_element(pos, r))
    for k, seg in enumerate(segs):
        letters = _segment_letters(d, seg)
        for n, x in enumerate(letters):
            push(x, "-" if n == 0 else "~")
        if k < len(segs) - 1 or cyclic:
            pos, r = seg.exit()
            nxt = segs[(k + 1) % len(segs)]
            pos2, _ = nxt.entry()
            push(u_element(pos, r), "-")
            push(u_element(pos2, r), "~")
    if cyclic:
        return FullWord(tuple(elems), tuple(rels), True)
    last = segs[-1]
    if not (last.is_stalk(d) and last.orient == LOW_FIRST):
        pos, r = last.exit()
        push(u_element(pos, r), "-")
    return FullWord(tuple(elems), tuple(rels), False)


# ---------------------------------------------------------------------------
# triples as representations
# ---------------------------------------------------------------------------

def rep_of_triple(T: Triple, d: Datum, window: Optional[Tuple[int, int]] = None) -> RepX:
    """The representation with M = Theta^{-1}: rows are V-generators, columns split Y-generators.

    Columns inside a stripe are ordered by summand so that conjugate stripes
    line up; ``R.col_order[key]`` remembers the permutation of theta's rows.
    """
    if window is None:
        degs = [r for (_, r) in T.theta]
        window = (min(degs) - 1, max(degs) + 1) if degs else (0, 0)
    B = bunch_of_datum(d, window)
    mats, rows, cols, orders = {}, {}, {}, {}
    for key, Th in T.theta.items():
        pos, r = key
        labels = [q_element(*stripe_label(T.gens[r][k], r)) for k in T.rows[key]]
        summ = [T.gens[r][k].summand for k in T.rows[key]]
        order = sorted(range(len(labels)), key=lambda n: (B.where[labels[n]][2], summ[n]))
        M = Th.inverse()
        mats[key] = M.submatrix(range(M.nrows), order)
        rows[key] = [(u_element(pos, r), sg, p) for sg, p in zip(T.signs[key], T.cols[key])]
        cols[key] = [(labels[n], summ[n]) for n in order]
        orders[key] = order
    R = RepX(B, T.A.field, mats, rows, cols)
    R.col_order = orders
    return R


def triple_with_rep(T: Triple, R: RepX) -> Triple:
    """Replace theta by the inverses of the representation's matrices."""
    theta = {}
    for key in T.theta:
        Minv = R.mats[key].inverse()
        order = R.col_order[key]
        rows = [None] * len(order)
        for n, old in enumerate(order):
            rows[old] = Minv.rows[n]
        theta[key] = Matrix(R.field, rows, Minv.ncols)
    return T.copy_with(theta)


# ---------------------------------------------------------------------------
# admissible transformations
# ---------------------------------------------------------------------------

@dataclass
class Transform:
    L: Dict[Hashable, Matrix]
    C: Dict[Hashable, Matrix]


def _allowed_row(B, a, b) -> bool:
    """May L have a nonzero entry at (row a, row b)?"""
    sa, sb = _row_stripe(a), _row_stripe(b)
    if sa == sb:
        return True
    return sa[1] == sb[1] == "" and B.less(sb[0], sa[0])


def _allowed_col(B, a, b) -> bool:
    """May C have a nonzero entry at (column a, column b)?"""
    sa, sb = _col_stripe(a), _col_stripe(b)
    if sa == sb:
        return True
    return B.less(sb[0], sa[0])


def _diag_block(M: Matrix, idx: List[int]) -> Matrix:
    return M.submatrix(idx, idx)


def _stripe_indices(labels, stripe_of) -> Dict[tuple, List[int]]:
    out: Dict[tuple, List[int]] = {}
    for n, lab in enumerate(labels):
        out.setdefault(stripe_of(lab), []).append(n)
    return out


def check_transform(R: RepX, t: Transform):
    B = R.bunch
    blocks = {}
    for s in R.mats:
        for kind, M, labels, allowed, stripe_of in (
                ("L", t.L.get(s), R.rows[s], _allowed_row, _row_stripe),
                ("C", t.C.get(s), R.cols[s], _allowed_col, _col_stripe)):
            n = len(labels)
            if M is None:
                M = Matrix.identity(R.field, n)
            if M.nrows != n or M.ncols != n:
                raise BunchError(f"{kind} at {s} has the wrong size")
            for a in range(n):
                for b in range(n):
                    if M[a, b] and not allowed(B, labels[a], labels[b]):
                        raise BunchError(
                            f"{kind} at {s}: entry ({labels[a][0]}, {labels[b][0]}) breaks the weight order")
            if not M.is_invertible():
                raise BunchError(f"{kind} at {s} is not invertible")
            for st, idx in _stripe_indices(labels, stripe_of).items():
                blocks[st] = _diag_block(M, idx)
    for x, y in B.tie.items():
        if x != y and (x, "") in blocks and (y, "") in blocks:
            if blocks[(x, "")] != blocks[(y, "")]:
                raise BunchError(f"tied stripes {x!r} and {y!r} transform differently")
    return True


def apply_transformation(R: RepX, t: Transform, check: bool = True) -> RepX:
    if check:
        check_transform(R, t)
    mats = {}
    for s, M in R.mats.items():
        L = t.L.get(s) or Matrix.identity(R.field, M.nrows)
        C = t.C.get(s) or Matrix.identity(R.field, M.ncols)
        mats[s] = L * M * C.inverse()
    out = RepX(R.bunch, R.field, mats, R.rows, R.cols)
    if hasattr(R, "col_order"):
        out.col_order = R.col_order
    return out


def _tie_classes(R: RepX):
    """Stripes grouped by ties, each with its size."""
    sizes = {}
    for s in R.mats:
        for st, idx in _stripe_indices(R.rows[s], _row_stripe).items():
            sizes[st] = len(idx)
        for st, idx in _stripe_indices(R.cols[s], _col_stripe).items():
            sizes[st] = len(idx)
    classes = {}
    for st in sizes:
        x = st[0]
        y = R.bunch.tied(x) if st[1] == "" else None
        key = min(st, (y, "")) if y is not None and y != x and (y, "") in sizes else st
        classes.setdefault(key, []).append(st)
    return classes, sizes


def random_transform(R: RepX, rng: random.Random, density: float = 0.5, bound: int = 3) -> Transform:
    f = R.field
    classes, sizes = _tie_classes(R)
    diag = {}
    for key, members in classes.items():
        n = sizes[members[0]]
        while True:
            g = Matrix(f, [[f.random(rng, bound) for _ in range(n)] for _ in range(n)], n)
            if g.is_invertible():
                break
        for st in members:
            diag[st] = g
    L, C = {}, {}
    for s in R.mats:
        for out, labels, allowed, stripe_of in ((L, R.rows[s], _allowed_row, _row_stripe),
                                                (C, R.cols[s], _allowed_col, _col_stripe)):
            n = len(labels)
            M = Matrix.zeros(f, n, n)
            idx = _stripe_indices(labels, stripe_of)
            pos_in = {}
            for st, ids in idx.items():
                for k, a in enumerate(ids):
                    pos_in[a] = (st, k)
            for a in range(n):
                for b in range(n):
                    sa, ka = pos_in[a]
                    sb, kb = pos_in[b]
                    if sa == sb:
                        M[a, b] = diag[sa][ka, kb]
                    elif allowed(R.bunch, labels[a], labels[b]) and rng.random() < density:
                        M[a, b] = f.random(rng, bound)
            out[s] = M
    return Transform(L, C)


# ---------------------------------------------------------------------------
# endomorphisms
# ---------------------------------------------------------------------------

def _stripe_pos(labels, stripe_of):
    out = {}
    for st, ids in _stripe_indices(labels, stripe_of).items():
        for k, n in enumerate(ids):
            out[n] = (st, k)
    return out


def _hom_unknowns(R1: RepX, R2: RepX):
    """Free entries of (L, C) for maps R1 -> R2; tied diagonal blocks share variables."""
    if R1.stripe_sizes() != R2.stripe_sizes():
        return None, None
    classes, _ = _tie_classes(R1)
    rep_of = {}
    for key, members in classes.items():
        for st in members:
            rep_of[st] = key
    var_at = {}
    unknowns = []
    seen = set()
    for s in R1.mats:
        for kind, l1, l2, allowed, stripe_of in (
                ("L", R1.rows[s], R2.rows[s], _allowed_row, _row_stripe),
                ("C", R1.cols[s], R2.cols[s], _allowed_col, _col_stripe)):
            p1, p2 = _stripe_pos(l1, stripe_of), _stripe_pos(l2, stripe_of)
            for a in range(len(l2)):
                for b in range(len(l1)):
                    sa, ka = p2[a]
                    sb, kb = p1[b]
                    if sa == sb:
                        v = ("diag", rep_of[sa], ka, kb)
                    elif allowed(R1.bunch, l2[a], l1[b]):
                        v = ("off", kind, s, a, b)
                    else:
                        continue
                    var_at[(kind, s, a, b)] = v
                    if v not in seen:
                        seen.add(v)
                        unknowns.append(v)
    return var_at, unknowns


def _mats_from_vec(R1: RepX, R2: RepX, var_at, vec):
    f = R1.field
    L = {s: Matrix.zeros(f, len(R2.rows[s]), len(R1.rows[s])) for s in R1.mats}
    C = {s: Matrix.zeros(f, len(R2.cols[s]), len(R1.cols[s])) for s in R1.mats}
    for (kind, s, a, b), v in var_at.items():
        c = vec.get(v)
        if c:
            (L if kind == "L" else C)[s][a, b] = c
    return L, C


def _vec_from_mats(var_at, L, C):
    out = {}
    for (kind, s, a, b), v in var_at.items():
        c = (L if kind == "L" else C)[s][a, b]
        if c:
            out[v] = c
    return out


def hom_space(R1: RepX, R2: RepX):
    """Basis of morphisms R1 -> R2: admissible (L, C) with L M1 = M2 C.

    Returns ``(var_at, basis)``; ``basis`` is empty when the stripe shapes differ.
    """
    f = R1.field
    var_at, unknowns = _hom_unknowns(R1, R2)
    if var_at is None:
        return None, []
    eqs: Dict[tuple, dict] = {}
    for s, M1 in R1.mats.items():
        M2 = R2.mats[s]
        for (kind, s2, a, b), v in var_at.items():
            if s2 != s:
                continue
            if kind == "L":
                # (L M1)[a, c] += L[a, b] M1[b, c]
                for c in range(M1.ncols):
                    if M1[b, c]:
                        e = eqs.setdefault((s, a, c), {})
                        e[v] = e.get(v, 0) + M1[b, c]
            else:
                # (M2 C)[r, b] += M2[r, a] C[a, b]
                for r in range(M2.nrows):
                    if M2[r, a]:
                        e = eqs.setdefault((s, r, b), {})
                        e[v] = e.get(v, 0) - M2[r, a]
    rows = [{k: x for k, x in e.items() if x} for e in eqs.values()]
    return var_at, sparse_nullspace(f, [r for r in rows if r], unknowns)


def end_algebra(R: RepX) -> StructureConstantAlgebra:
    """End(R) as the stabilizer algebra {(L, C) admissible : L M = M C}."""
    f = R.field
    var_at, basis = hom_space(R, R)
    ech = Echelon(f, track=True)
    for n, v in enumerate(basis):
        ech.insert(v, n)
    mats = [_mats_from_vec(R, R, var_at, v) for v in basis]
    table = {}
    for a, (La, Ca) in enumerate(mats):
        for b, (Lb, Cb) in enumerate(mats):
            prod = _vec_from_mats(var_at, {s: La[s] * Lb[s] for s in La}, {s: Ca[s] * Cb[s] for s in Ca})
            if prod:
                co = ech.coords(prod)
                if co is None:
                    raise BunchError("stabilizer is not closed under composition")
                table[(a, b)] = co
    ident = _vec_from_mats(var_at, {s: Matrix.identity(f, len(R.rows[s])) for s in R.mats},
                           {s: Matrix.identity(f, len(R.cols[s])) for s in R.mats})
    unit = ech.coords(ident) or {}
    return StructureConstantAlgebra(f, len(basis), table, unit, check=False)


def is_rep_isomorphic(R1: RepX, R2: RepX, seed: int = 0, trials: int = 6) -> bool:
    """Look for an invertible morphism among random combinations of Hom(R1, R2)."""
    var_at, basis = hom_space(R1, R2)
    if var_at is None or not basis:
        return False
    rng = random.Random(seed)
    f = R1.field
    for _ in range(trials):
        vec: dict = {}
        for b in basis:
            c = f.random(rng, 7)
            for k, x in b.items():
                vec[k] = vec.get(k, 0) + c * x
        L, C = _mats_from_vec(R1, R2, var_at, vec)
        if all(M.nrows == M.ncols and M.is_invertible() for M in list(L.values()) + list(C.values())):
            return True
    return False


def has_local_end(R: RepX) -> bool:
    E = end_algebra(R)
    return E.dim > 0 and is_local(E)


# ---------------------------------------------------------------------------
# comparisons
# ---------------------------------------------------------------------------

def equal_up_to_stripe_order(R1: RepX, R2: RepX, limit: int = 20000) -> bool:
    """Same matrices after permuting rows and columns inside each stripe."""
    keys = set(k for k, M in R1.mats.items() if M.nrows or M.ncols) | \
        set(k for k, M in R2.mats.items() if M.nrows or M.ncols)
    for s in keys:
        if s not in R1.mats or s not in R2.mats:
            return False
        M1, M2 = R1.mats[s], R2.mats[s]
        rs1 = [_row_stripe(l) for l in R1.rows[s]]
        rs2 = [_row_stripe(l) for l in R2.rows[s]]
        cs1 = [_col_stripe(l) for l in R1.cols[s]]
        cs2 = [_col_stripe(l) for l in R2.cols[s]]
        if sorted(map(repr, rs1)) != sorted(map(repr, rs2)) or sorted(map(repr, cs1)) != sorted(map(repr, cs2)):
            return False
        if not _match_blocks(M1, rs1, cs1, M2, rs2, cs2, limit):
            return False
    return True


def _perms_within(stripes1, stripes2):
    """Bijections from positions of 2 onto positions of 1 preserving stripes."""
    groups1: Dict[str, List[int]] = {}
    groups2: Dict[str, List[int]] = {}
    for n, st in enumerate(stripes1):
        groups1.setdefault(repr(st), []).append(n)
    for n, st in enumerate(stripes2):
        groups2.setdefault(repr(st), []).append(n)
    keys = sorted(groups1)
    options = [list(itertools.permutations(groups1[k])) for k in keys]
    for choice in itertools.product(*options):
        mapping = {}
        for k, perm in zip(keys, choice):
            for src, dst in zip(groups2[k], perm):
                mapping[src] = dst
        yield mapping


def _count_perms(stripes) -> int:
    groups: Dict[str, int] = {}
    for st in stripes:
        groups[repr(st)] = groups.get(repr(st), 0) + 1
    return math.prod(math.factorial(n) for n in groups.values())


def _match_blocks(M1, rs1, cs1, M2, rs2, cs2, limit) -> bool:
    if _count_perms(rs1) * _count_perms(cs1) > limit:
        raise BunchError("too many stripe permutations to compare")
    for rmap in _perms_within(rs1, rs2):
        for cmap in _perms_within(cs1, cs2):
            if all(M2[a, b] == M1[rmap[a], cmap[b]] for a in range(M2.nrows) for b in range(M2.ncols)):
                return True
    return False


# ---------------------------------------------------------------------------
# signs of tie pairs and band symmetries
# ---------------------------------------------------------------------------

def sigma_pair(B: BunchOfChains, x, y) -> int:
    """0 for a tie inside E or inside F, 1 for a tie between E and F."""
    return 0 if B.where[x][1] == B.where[y][1] else 1


def sigma_shift(B: BunchOfChains, w: FullWord, k: int) -> int:
    return sum(sigma_pair(B, w.elems[2 * j], w.elems[2 * j + 1]) for j in range(k))


def shift_word(w: FullWord, k: int) -> FullWord:
    """Rotate a cyclic word by k tie pairs."""
    n = len(w.elems)
    k = (2 * k) % n
    rels = w.rels + ("-",)
    elems = w.elems[k:] + w.elems[:k]
    rels = rels[k:] + rels[:k]
    return FullWord(elems, rels[:-1], True)


def reversed_cyclic(w: FullWord) -> FullWord:
    """The inverse word of a cyclic word, read as a cyclic word starting with ~."""
    return FullWord(tuple(reversed(w.elems)), tuple(reversed(w.rels)), True)


def predicted_exponent(B: BunchOfChains, w: FullWord, k: int, reverse: bool) -> int:
    """Exponent e of the textbook rule: B(w, m, pi) ~ B(w', m, pi**e).

    Here w' is w shifted by k pairs, or its reversal shifted by k pairs.
    Shifts keep pi; reversals use the parity of sigma_shift.
    """
    if not reverse:
        return 1
    return -1 if sigma_shift(B, w, k) % 2 else 1


def observed_exponent(B: BunchOfChains, w: FullWord, k: int, reverse: bool) -> int:
    """Exponent that the stripe rules actually produce.

    Moving the Jordan block across a summand tied inside E or inside F
    inverts it, and moving it across an E-F tie does not.  The closing link
    of the reversed word is the closing link of w.
    """
    base = reversed_cyclic(w) if reverse else w
    same = sum(1 - sigma_pair(B, base.elems[2 * j], base.elems[2 * j + 1]) for j in range(k))
    return -1 if same % 2 else 1


def find_shift(w: FullWord, w2: FullWord) -> Optional[Tuple[int, bool]]:
    """(k, reverse) with w2 equal to w (or its reversal) shifted by k pairs."""
    n = len(w.elems) // 2
    for reverse in (False, True):
        base = reversed_cyclic(w) if reverse else w
        for k in range(n):
            if shift_word(base, k) == w2:
                return k, reverse
    return None


def theta_row_addition(R: RepX, s, src: int, dst: int, c=1) -> Transform:
    """Add c times theta-row ``src`` to theta-row ``dst`` at index s.

    Theta rows are the columns of the representation; the induced map is
    checked by ``check_transform`` when applied.
    """
    n = len(R.cols[s])
    C = Matrix.identity(R.field, n)
    C[dst, src] = R.field(c)
    return Transform({}, {s: C})


# ---------------------------------------------------------------------------
# fixtures
# ---------------------------------------------------------------------------

def two_index_chains() -> BunchOfChains:
    """Two indices, E_i = {c_i < d_i}, F_i = {a_i}, ties across the indices."""
    E = {1: ["c1", "d1"], 2: ["c2", "d2"]}
    F = {1: ["a1"], 2: ["a2"]}
    tie = {}
    for x, y in (("a1", "a2"), ("c1", "c2"), ("d1", "d2")):
        tie[x], tie[y] = y, x
    names = {("a1", "c1"): "phi1", ("a2", "c2"): "phi2", ("a1", "d1"): "psi1", ("a2", "d2"): "psi2"}
    return BunchOfChains([1, 2], E, F, tie, names)


def two_index_semichains() -> BunchOfChains:
    """As above but F_1 = {a}, F_2 = {b} with a and b self-tied."""
    E = {1: ["c1", "d1"], 2: ["c2", "d2"]}
    F = {1: ["a"], 2: ["b"]}
    tie = {"a": "a", "b": "b", "c1": "c2", "c2": "c1", "d1": "d2", "d2": "d1"}
    return BunchOfChains([1, 2], E, F, tie)


def chessboard(n: int) -> BunchOfChains:
    """One index, E = {x_1 < ... < x_n}, F = {y_n < ... < y_1}, x_i ~ y_i."""
    E = {"*": [f"x{k}" for k in range(1, n + 1)]}
    F = {"*": [f"y{k}" for k in range(n, 0, -1)]}
    tie = {}
    for k in range(1, n + 1):
        tie[f"x{k}"], tie[f"y{k}"] = f"y{k}", f"x{k}"
    return BunchOfChains(["*"], E, F, tie)


def acadac_word() -> FullWord:
    """The cyclic word a1~a2 - c2~c1 - a1~a2 - d2~d1 - a1~a2 - c2~c1."""
    elems = ("a1", "a2", "c2", "c1", "a1", "a2", "d2", "d1", "a1", "a2", "c2", "c1")
    rels = ("~", "-") * 5 + ("~",)
    return FullWord(elems, rels, True)

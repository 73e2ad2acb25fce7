"""Reduced string and band data and the complexes they describe.

A word is a sequence of segments.  Segment ``(i, a, b, r)`` stands for the
two-term complex Q_(i,a) -> Q_(i,b) over the normalization with Q_(i,a) in
degree r-1 and Q_(i,b) in degree r.  When ``a = m_i + 1`` the high end is
missing and the segment is the stalk Q_(i,b) in degree r.  Consecutive
segments meet at tied positions in equal degrees; the two projectives that
meet merge into one indecomposable projective over the gentle algebra.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .algebra import MatrixAlgebra, build_gentle_algebra, minimal_resolution
from .complexes import ProjComplex, verify_complex, zero_amat
from .datum import Datum, special_cycles
from .exactla import Matrix

LOW_FIRST = "low-first"
HIGH_FIRST = "high-first"


class WordError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Segment:
    i: int
    a: int
    b: int
    r: int
    orient: str = LOW_FIRST

    def low(self):
        return ((self.i, self.b), self.r)

    def high(self):
        return ((self.i, self.a), self.r - 1)

    def is_stalk(self, d: Datum) -> bool:
        return self.a == d.m[self.i - 1] + 1

    def entry(self):
        return self.low() if self.orient == LOW_FIRST else self.high()

    def exit(self):
        return self.high() if self.orient == LOW_FIRST else self.low()

    def flipped(self) -> "Segment":
        return Segment(self.i, self.a, self.b, self.r, HIGH_FIRST if self.orient == LOW_FIRST else LOW_FIRST)

    def shifted(self, n: int) -> "Segment":
        return Segment(self.i, self.a, self.b, self.r + n, self.orient)

    def to_json(self) -> dict:
        return {"i": self.i, "a": self.a, "b": self.b, "r": self.r, "orient": self.orient}

    @staticmethod
    def from_json(obj) -> "Segment":
        try:
            orient = obj.get("orient", LOW_FIRST)
            if orient not in (LOW_FIRST, HIGH_FIRST):
                raise WordError(f"bad orientation {orient!r}")
            return Segment(int(obj["i"]), int(obj["a"]), int(obj["b"]), int(obj["r"]), orient)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, WordError):
                raise
            raise WordError(f"malformed segment {obj!r}") from exc


@dataclass(frozen=True)
class StringDatum:
    segments: Tuple[Segment, ...]

    def reversed(self) -> "StringDatum":
        return StringDatum(tuple(s.flipped() for s in reversed(self.segments)))

    def shifted(self, n: int) -> "StringDatum":
        return StringDatum(tuple(s.shifted(n) for s in self.segments))

    def kind(self, d: Datum) -> str:
        left = self.segments[0].is_stalk(d) and self.segments[0].orient == HIGH_FIRST
        right = self.segments[-1].is_stalk(d) and self.segments[-1].orient == LOW_FIRST
        if len(self.segments) == 1 and self.segments[0].is_stalk(d):
            return "left-stalk" if left else "right-stalk"
        if left and right:
            return "both-stalk"
        if left:
            return "left-stalk"
        if right:
            return "right-stalk"
        return "both-untied"

    def canonical(self) -> "StringDatum":
        rev = self.reversed()
        return min(self, rev, key=lambda v: tuple(_seg_key(s) for s in v.segments))

    def to_json(self) -> dict:
        return {"kind": "string", "segments": [s.to_json() for s in self.segments]}


@dataclass(frozen=True)
class BandDatum:
    segments: Tuple[Segment, ...]
    m: int = 1
    pi: object = 1

    def to_json(self, field=None) -> dict:
        pi = field.to_str(self.pi) if field is not None else str(self.pi)
        return {"kind": "band", "segments": [s.to_json() for s in self.segments], "m": self.m, "pi": pi}


def _seg_key(s: Segment):
    return (s.i, s.a, s.b, s.r, s.orient)


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

def word_from_json(obj, field=None):
    if isinstance(obj, str):
        obj = json.loads(obj)
    if not isinstance(obj, dict) or "segments" not in obj:
        raise WordError("word JSON needs 'segments'")
    segs = tuple(Segment.from_json(s) for s in obj["segments"])
    if not segs:
        raise WordError("a word needs at least one segment")
    kind = obj.get("kind", "string")
    if kind == "string":
        return StringDatum(segs)
    if kind == "band":
        m = int(obj.get("m", 1))
        raw = obj.get("pi", "1")
        pi = field.parse(str(raw)) if field is not None else raw
        return BandDatum(segs, m, pi)
    raise WordError(f"unknown word kind {kind!r}")


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

def _check_segment(d: Datum, s: Segment):
    if not 1 <= s.i <= d.t:
        raise WordError(f"segment {s}: chain out of range")
    mi = d.m[s.i - 1]
    if not 2 <= s.a <= mi + 1 or not 1 <= s.b < s.a:
        raise WordError(f"segment {s}: need 1 <= b < a <= m_i + 1")


def _check_link(d: Datum, left: Segment, right: Segment, where: str):
    (p, r1), (q, r2) = left.exit(), right.entry()
    if left.is_stalk(d) and left.orient == LOW_FIRST or right.is_stalk(d) and right.orient == HIGH_FIRST:
        raise WordError(f"{where}: a stalk can only sit at a free end")
    if r1 != r2:
        raise WordError(f"{where}: degree mismatch ({r1} vs {r2})")
    partner = d.tied(p)
    if partner is None or partner != q or p == q:
        raise WordError(f"{where}: untied adjacency {p} - {q}")


def _free_end_ok(d: Datum, s: Segment, end) -> bool:
    (pos, _) = end
    if s.is_stalk(d) and pos[1] == s.a:
        return True
    return d.tied(pos) is None


def validate_string(d: Datum, v: StringDatum) -> StringDatum:
    """Raise :class:`WordError` unless ``v`` is a valid string datum over ``d``."""
    if not d.is_gentle:
        raise WordError("words need a gentle datum")
    segs = v.segments
    if not segs:
        raise WordError("empty string")
    for s in segs:
        _check_segment(d, s)
    for k in range(len(segs) - 1):
        _check_link(d, segs[k], segs[k + 1], f"link {k}")
    for k, s in enumerate(segs):
        if s.is_stalk(d) and 0 < k < len(segs) - 1:
            raise WordError("a stalk can only sit at a free end")
    first, last = segs[0], segs[-1]
    if len(segs) == 1 and first.is_stalk(d):
        if d.tied((first.i, first.b)) is not None:
            raise WordError("tied free end without stalk: a lone stalk at a tied position")
        return v
    if first.is_stalk(d) and first.orient != HIGH_FIRST or last.is_stalk(d) and last.orient != LOW_FIRST:
        raise WordError("stalk segments must point their missing end outwards")
    if not _free_end_ok(d, first, first.entry()):
        raise WordError(f"tied free end without stalk at {first.entry()[0]}")
    if not _free_end_ok(d, last, last.exit()):
        raise WordError(f"tied free end without stalk at {last.exit()[0]}")
    return v


def _rotations(segs: Sequence[Segment]):
    n = len(segs)
    return [tuple(segs[k:]) + tuple(segs[:k]) for k in range(n)]


def is_periodic(segs: Sequence[Segment]) -> bool:
    segs = tuple(segs)
    return any(rot == segs for rot in _rotations(segs)[1:])


def validate_band(d: Datum, w: BandDatum, field=None) -> BandDatum:
    if not d.is_gentle:
        raise WordError("words need a gentle datum")
    segs = w.segments
    if not segs:
        raise WordError("empty band")
    if w.m < 1:
        raise WordError("multiplicity must be at least 1")
    if not w.pi or (field is not None and field(w.pi) == 0):
        raise WordError("pi must be nonzero")
    for s in segs:
        _check_segment(d, s)
        if s.is_stalk(d):
            raise WordError("bands have no stalk segments")
    n = len(segs)
    for k in range(n):
        _check_link(d, segs[k], segs[(k + 1) % n], f"link {k}")
    if is_periodic(segs):
        raise WordError("periodic band word")
    return w


# ---------------------------------------------------------------------------
# gluing diagrams and complexes
# ---------------------------------------------------------------------------

@dataclass
class GluingDiagram:
    """Placed segments, differentials and ties.

    ``nodes`` holds ``(segment index, end, position, degree)`` for every real
    end; ``solid`` pairs node indices (high end -> low end) with the chain
    unit; ``dotted`` pairs node indices of ends merged into one projective.
    """

    nodes: List[Tuple[int, str, Tuple[int, int], int]]
    solid: List[Tuple[int, int, Tuple[int, int, int]]]
    dotted: List[Tuple[int, int]]


def gluing_diagram(d: Datum, segs: Sequence[Segment], cyclic: bool) -> GluingDiagram:
    nodes = []
    index: Dict[Tuple[int, str], int] = {}
    solid = []
    for k, s in enumerate(segs):
        ends = [("low", s.low())]
        if not s.is_stalk(d):
            ends.append(("high", s.high()))
        if s.orient == HIGH_FIRST:
            ends.reverse()
        for end, (pos, r) in ends:
            index[(k, end)] = len(nodes)
            nodes.append((k, end, pos, r))
        if not s.is_stalk(d):
            solid.append((index[(k, "high")], index[(k, "low")], (s.i, s.a, s.b)))
    dotted = []
    n = len(segs)
    links = range(n) if cyclic else range(n - 1)
    for k in links:
        a, b = segs[k], segs[(k + 1) % n]
        ea = "high" if a.orient == LOW_FIRST else "low"
        eb = "low" if b.orient == LOW_FIRST else "high"
        dotted.append((index[(k, ea)], index[((k + 1) % n, eb)]))
    return GluingDiagram(nodes, solid, dotted)


def _merge(A: MatrixAlgebra, diagram: GluingDiagram):
    """Group diagram nodes into projectives; returns node -> (degree, slot)."""
    parent = list(range(len(diagram.nodes)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x, y in diagram.dotted:
        parent[find(x)] = find(y)
    groups: Dict[int, List[int]] = {}
    for n in range(len(diagram.nodes)):
        groups.setdefault(find(n), []).append(n)
    comps: Dict[int, List[str]] = {}
    slot: Dict[int, Tuple[int, int]] = {}
    for root in sorted(groups, key=lambda g: min(groups[g])):
        members = groups[root]
        r = diagram.nodes[members[0]][3]
        positions = sorted(diagram.nodes[n][2] for n in members)
        label = "~".join(f"{i}.{j}" for i, j in positions)
        if label not in A.idem:
            raise WordError(f"merged positions {positions} do not form a vertex")
        comps.setdefault(r, []).append(label)
        for n in members:
            slot[n] = (r, len(comps[r]) - 1)
    return comps, slot


def _assemble(A: MatrixAlgebra, diagram: GluingDiagram, m: int = 1, special=None) -> ProjComplex:
    f = A.field
    comps1, slot = _merge(A, diagram)
    comps = {r: [v for v in vs for _ in range(m)] for r, vs in comps1.items()}
    diffs: Dict[int, list] = {}
    ident = Matrix.identity(f, m)
    for k, (hi, lo, (i, a, b)) in enumerate(diagram.solid):
        r, p = slot[hi]
        r2, q = slot[lo]
        if r2 != r + 1:
            raise WordError("differential does not raise the degree by one")
        block = special.get(k, ident) if special else ident
        if r not in diffs:
            diffs[r] = zero_amat(len(comps[r + 1]), len(comps[r]))
        el = A.path(i, a, b)
        for x in range(m):
            for y in range(m):
                c = block[x, y]
                if c:
                    cell = diffs[r][q * m + x][p * m + y]
                    cell[el] = cell.get(el, 0) + c
    return ProjComplex(A, comps, diffs)


def string_complex(d: Datum, v: StringDatum, A: Optional[MatrixAlgebra] = None) -> ProjComplex:
    validate_string(d, v)
    A = A or build_gentle_algebra(d)
    X = _assemble(A, gluing_diagram(d, v.segments, cyclic=False))
    chk = verify_complex(X)
    if not (chk.is_complex and chk.is_minimal):
        raise WordError("string data produced an invalid complex")
    return X


def closing_block(field, w: BandDatum) -> Matrix:
    """J_m(pi) on a low-first closing segment, J_m(1/pi) on a high-first one."""
    pi = field(w.pi)
    if w.segments[-1].orient == HIGH_FIRST:
        pi = 1 / pi
    return Matrix.jordan(field, w.m, pi)


def band_complex(d: Datum, w: BandDatum, A: Optional[MatrixAlgebra] = None) -> ProjComplex:
    A = A or build_gentle_algebra(d)
    validate_band(d, w, A.field)
    diagram = gluing_diagram(d, w.segments, cyclic=True)
    last = len(diagram.solid) - 1
    X = _assemble(A, diagram, w.m, {last: closing_block(A.field, w)})
    chk = verify_complex(X)
    if not (chk.is_complex and chk.is_minimal):
        raise WordError("band data produced an invalid complex")
    return X


def gluing_dot(d: Datum, segs: Sequence[Segment], cyclic: bool, name: str = "gluing") -> str:
    """Graphviz text: one rank per degree, solid differentials, dotted ties."""
    g = gluing_diagram(d, segs, cyclic)
    lines = [f"digraph {name} {{", "  rankdir=LR;"]
    by_degree: Dict[int, List[int]] = {}
    for n, (k, end, pos, r) in enumerate(g.nodes):
        lines.append(f'  n{n} [label="Q{pos[0]}{pos[1]}[{r}]"];')
        by_degree.setdefault(r, []).append(n)
    for r in sorted(by_degree):
        lines.append("  { rank=same; " + " ".join(f"n{n};" for n in by_degree[r]) + " }")
    for x, y, (i, a, b) in g.solid:
        lines.append(f'  n{x} -> n{y} [label="({i},{a},{b})"];')
    for x, y in g.dotted:
        lines.append(f"  n{x} -> n{y} [style=dotted, dir=none];")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# equivalence
# ---------------------------------------------------------------------------

def word_equivalent_strings(v: StringDatum, v2: StringDatum) -> bool:
    return v2.segments == v.segments or v2.segments == v.reversed().segments


def _band_reversed(segs: Sequence[Segment]) -> Tuple[Segment, ...]:
    return tuple(s.flipped() for s in reversed(segs))


def word_equivalent_bands(w: BandDatum, w2: BandDatum, field=None) -> bool:
    if w.m != w2.m:
        return False
    f = field
    pi = f(w.pi) if f else w.pi
    pi2 = f(w2.pi) if f else w2.pi
    if pi2 == pi and tuple(w2.segments) in _rotations(w.segments):
        return True
    if pi2 == 1 / pi and tuple(w2.segments) in _rotations(_band_reversed(w.segments)):
        return True
    return False


def canonical_band(segs: Sequence[Segment]) -> Tuple[Segment, ...]:
    cands = _rotations(segs) + _rotations(_band_reversed(segs))
    return min(cands, key=lambda c: tuple(_seg_key(s) for s in c))


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

def _continuations(d: Datum, end) -> Iterator[Segment]:
    """Segments whose entry end can be glued to an exit end."""
    (pos, r) = end
    q = d.tied(pos)
    if q is None or q == pos:
        return
    k, l = q
    mk = d.m[k - 1]
    for a in range(l + 1, mk + 2):
        yield Segment(k, a, l, r, LOW_FIRST)
    for b in range(1, l):
        yield Segment(k, l, b, r + 1, HIGH_FIRST)


def _starts(d: Datum, lo: int, hi: int) -> Iterator[Segment]:
    for i, mi in enumerate(d.m, 1):
        for b in range(1, mi + 1):
            for r in range(lo, hi + 1):
                yield Segment(i, mi + 1, b, r, HIGH_FIRST)
            for a in range(b + 1, mi + 1):
                for r in range(lo + 1, hi + 1):
                    s = Segment(i, a, b, r, LOW_FIRST)
                    if d.tied((i, b)) is None:
                        yield s
                    if d.tied((i, a)) is None:
                        yield s.flipped()


def _in_window(d: Datum, s: Segment, lo: int, hi: int) -> bool:
    if not lo <= s.r <= hi:
        return False
    return s.is_stalk(d) or s.r - 1 >= lo


def enumerate_strings(d: Datum, max_segments: int, window: Tuple[int, int]) -> List[StringDatum]:
    """All string data with at most ``max_segments`` segments (stalks included)
    whose projectives sit in ``window``, one representative per reversal pair."""
    lo, hi = window
    seen = set()
    out = []

    def finish(segs):
        v = StringDatum(tuple(segs)).canonical()
        if v not in seen:
            try:
                validate_string(d, v)
            except WordError:
                return
            seen.add(v)
            out.append(v)

    def grow(segs):
        last = segs[-1]
        if last.is_stalk(d) and (last.orient == LOW_FIRST or len(segs) > 1):
            finish(segs)
            return
        ex = last.exit()
        if d.tied(ex[0]) is None:
            finish(segs)
            return
        if len(segs) >= max_segments:
            return
        for nxt in _continuations(d, ex):
            if _in_window(d, nxt, lo, hi):
                grow(segs + [nxt])

    for s in _starts(d, lo, hi):
        if _in_window(d, s, lo, hi):
            grow([s])
    out.sort(key=lambda v: (len(v.segments), tuple(_seg_key(s) for s in v.segments)))
    return out


def _normalize_degrees(segs: Sequence[Segment]) -> Tuple[Segment, ...]:
    top = max(s.r for s in segs)
    return tuple(s.shifted(-top) for s in segs)


def enumerate_bands(d: Datum, max_segments: int) -> List[Tuple[Segment, ...]]:
    """Band skeletons up to rotation, reversal and shift (top degree 0)."""
    if not d.is_gentle:
        raise WordError("words need a gentle datum")
    seen = set()
    out = []
    nonstalk = [Segment(i, a, b, 0, o) for i, mi in enumerate(d.m, 1)
                for b in range(1, mi + 1) for a in range(b + 1, mi + 1) for o in (LOW_FIRST, HIGH_FIRST)]

    def grow(segs):
        last = segs[-1]
        first = segs[0]
        ex = last.exit()
        q = d.tied(ex[0])
        if q is not None and q == first.entry()[0] and ex[1] == first.entry()[1] and q != ex[0]:
            if not is_periodic(segs):
                c = canonical_band(_normalize_degrees(segs))
                if c not in seen:
                    seen.add(c)
                    out.append(c)
        if len(segs) >= max_segments:
            return
        for nxt in _continuations(d, ex):
            if not nxt.is_stalk(d):
                grow(segs + [nxt])

    for s in nonstalk:
        grow([s])
    out.sort(key=lambda c: (len(c), tuple(_seg_key(s) for s in c)))
    return out


# ---------------------------------------------------------------------------
# infinite strings and resolutions
# ---------------------------------------------------------------------------

@dataclass
class Truncation:
    complex: ProjComplex
    word: StringDatum
    cut_degree: Optional[int]


def truncated_infinite_string(d: Datum, seed: StringDatum, cycle: Sequence[Tuple[int, int]],
                              window: Tuple[int, int], A: Optional[MatrixAlgebra] = None) -> Truncation:
    """Follow the tau-cycle from the seed's trailing end, cut at the window floor.

    The cut is a stalk at the lowest degree reached; cohomology there is an
    artifact of truncation, the degrees strictly above it are exact.
    """
    lo, hi = window
    cyc = set(map(tuple, cycle))
    segs = list(seed.segments)
    if not segs:
        raise WordError("empty seed")
    last = segs[-1]
    if last.is_stalk(d) and last.orient == LOW_FIRST:
        raise WordError("seed already ends with a stalk")
    (pos, r) = last.exit()
    if r < lo:
        raise WordError("seed leaves the window")
    q = d.tied(pos)
    if q is None or q not in cyc:
        raise WordError("seed incompatible with cycle: trailing end does not continue along it")
    cut = None
    while True:
        (pos, r) = segs[-1].exit()
        k, l = d.tied(pos)
        mk = d.m[k - 1]
        if r - 1 < lo or l + 1 > mk:
            segs.append(Segment(k, mk + 1, l, r, LOW_FIRST))
            cut = r
            break
        segs.append(Segment(k, l + 1, l, r, LOW_FIRST))
    v = StringDatum(tuple(segs))
    return Truncation(string_complex(d, v, A), v, cut)


def cycle_seed(d: Datum, cycle: Sequence[Tuple[int, int]], degree: int = 0) -> StringDatum:
    """A one-stalk seed whose trailing end is glued into the cycle."""
    x = tuple(cycle[0])
    p = d.tied(x)
    i, j = p
    return StringDatum((Segment(i, d.m[i - 1] + 1, j, degree, HIGH_FIRST),))


@dataclass
class ResolutionComplex:
    complex: ProjComplex
    terminated: bool
    length: Optional[int]


def projective_resolution(alg, vertex: str, N: int) -> ResolutionComplex:
    """Minimal projective resolution of the simple at ``vertex`` as a complex in degrees <= 0."""
    res = minimal_resolution(alg, vertex, N)
    comps = {-k: list(t) for k, t in enumerate(res.terms)}
    diffs = {-(k + 1): [[dict(a) for a in row] for row in M] for k, M in enumerate(res.maps)}
    return ResolutionComplex(ProjComplex(alg, comps, diffs), res.terminated, res.length)


def cycles_and_resolutions(d: Datum, A: Optional[MatrixAlgebra] = None, N: Optional[int] = None):
    """(has special cycle, every simple resolves within N)."""
    A = A or build_gentle_algebra(d)
    if N is None:
        N = len(A.vertices) + 3
    ok = all(minimal_resolution(A, x, N).terminated for x in A.reps)
    return bool(special_cycles(d)), ok

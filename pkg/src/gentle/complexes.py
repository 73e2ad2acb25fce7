"""Bounded complexes of projective modules over a based algebra.

A complex stores, per degree ``r``, the list of vertex labels of its
indecomposable projective summands and the differential ``d^r`` as a matrix
of algebra elements.  Entry ``d^r[q][p]`` is an element of
``e_x A e_y`` where ``x = comps[r][p]`` and ``y = comps[r+1][q]``; it acts by
right multiplication, so the composite "f then g" has entries
``sum_q f[q][p] * g[s][q]``.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import AlgebraError, BasedAlgebra, MatrixAlgebra, unit_str
from .exactla import (Echelon, Matrix, SplitFailure, StructureConstantAlgebra,
                      find_nontrivial_idempotent, is_local, sparse_nullspace)


class ComplexError(ValueError):
    pass


AMat = List[List[dict]]  # rows x cols of sparse algebra elements


# ---------------------------------------------------------------------------
# matrices over an algebra
# ---------------------------------------------------------------------------

def _clean(x: dict) -> dict:
    return {k: v for k, v in x.items() if v}


def _add(x: dict, y: dict, c=1) -> dict:
    out = dict(x)
    for k, v in y.items():
        out[k] = out.get(k, 0) + c * v
    return _clean(out)


def zero_amat(nrows: int, ncols: int) -> AMat:
    return [[{} for _ in range(ncols)] for _ in range(nrows)]


def compose(alg: BasedAlgebra, F: AMat, G: AMat, nsrc: int) -> AMat:
    """Matrix of "F then G": F maps nsrc summands to len(F), G maps on from there."""
    out = zero_amat(len(G), nsrc)
    for s, grow in enumerate(G):
        for q, g in enumerate(grow):
            if not g:
                continue
            for p in range(nsrc):
                f = F[q][p]
                if f:
                    prod = alg.mul(f, g)
                    if prod:
                        out[s][p] = _add(out[s][p], prod)
    return out


def amat_add(F: AMat, G: AMat, c=1) -> AMat:
    return [[_add(a, b, c) for a, b in zip(fr, gr)] for fr, gr in zip(F, G)]


def amat_scale(F: AMat, c) -> AMat:
    return [[{k: c * v for k, v in a.items() if c * v} for a in row] for row in F]


def amat_identity(alg: BasedAlgebra, verts: Sequence[str]) -> AMat:
    n = len(verts)
    out = zero_amat(n, n)
    for p, x in enumerate(verts):
        out[p][p] = {alg.idem[x]: alg.field.one}
    return out


def amat_is_zero(F: AMat) -> bool:
    return all(not a for row in F for a in row)


def top_coefficient(alg: BasedAlgebra, x: dict):
    """Coefficient of the unique non-radical basis element occurring in ``x``."""
    out = alg.field.zero
    for k, v in x.items():
        if not alg.is_rad[k]:
            out = out + v
    return out


def _nonrad_element(alg: BasedAlgebra, x: str, y: str) -> Optional[int]:
    for n in alg.by_ends.get((x, y), ()):
        if not alg.is_rad[n]:
            return n
    return None


def top_matrix(alg: BasedAlgebra, F: AMat) -> Matrix:
    return Matrix(alg.field, [[top_coefficient(alg, a) for a in row] for row in F],
                  len(F[0]) if F else 0)


def amat_inverse(alg: BasedAlgebra, F: AMat, src: Sequence[str], dst: Sequence[str]) -> AMat:
    """Inverse of an invertible matrix from ``src`` summands to ``dst`` summands.

    Writes F = T + R with T its top part and R radical, and sums the
    finite series (1 + T^{-1} R)^{-1} T^{-1}.
    """
    n = len(src)
    if n != len(dst):
        raise ComplexError("only square matrices are invertible")
    if n == 0:
        return []
    Tm = top_matrix(alg, F)
    if not Tm.is_invertible():
        raise ComplexError("matrix is not invertible (top part singular)")
    Ti = Tm.inverse()
    # T^{-1} as a matrix from dst to src
    Tinv = zero_amat(n, n)
    for p in range(n):
        for q in range(n):
            c = Ti[p, q]
            if c:
                e = _nonrad_element(alg, dst[q], src[p])
                if e is None:
                    raise ComplexError("top inverse has no carrier element")
                Tinv[p][q] = {e: c}
    Rm = [[{k: v for k, v in a.items() if alg.is_rad[k]} for a in row] for row in F]
    # N = "R then Tinv" maps src -> src and is nilpotent
    N = compose(alg, Rm, Tinv, n)
    # (1 + N)^{-1} = sum (-N)^k
    ident = amat_identity(alg, src)
    total = ident
    power = ident
    for _ in range(4 * alg.dim + 4):
        power = amat_scale(compose(alg, power, N, n), -1)
        if amat_is_zero(power):
            break
        total = amat_add(total, power)
    else:
        raise ComplexError("radical part is not nilpotent")
    # inverse of F is "Tinv then (1+N)^{-1}"
    return compose(alg, Tinv, total, n)


def element_inverse(alg: BasedAlgebra, phi: dict, x: str, y: str) -> dict:
    """psi in e_y A e_x with "phi then psi" = id on P_x."""
    return amat_inverse(alg, [[phi]], [x], [y])[0][0]


# ---------------------------------------------------------------------------
# complexes
# ---------------------------------------------------------------------------

class ProjComplex:
    """Bounded complex of finitely generated projective modules.

    Args:
        alg: the algebra.
        comps: degree -> list of vertex labels.
        diffs: degree r -> matrix with ``len(comps[r+1])`` rows and
            ``len(comps[r])`` columns; missing degrees mean zero maps.
    """

    def __init__(self, alg: BasedAlgebra, comps: Dict[int, List[str]], diffs: Dict[int, AMat] = None):
        self.alg = alg
        self.comps = {int(r): list(v) for r, v in comps.items() if v}
        self.diffs: Dict[int, AMat] = {}
        for x in (v for vs in self.comps.values() for v in vs):
            if x not in alg.idem:
                raise ComplexError(f"unknown vertex {x!r}")
        f = alg.field
        for r, M in (diffs or {}).items():
            r = int(r)
            rows, cols = len(self.comp(r + 1)), len(self.comp(r))
            if rows == 0 or cols == 0:
                if any(a for row in M for a in row):
                    raise ComplexError(f"differential {r} has no room")
                continue
            if len(M) != rows or any(len(row) != cols for row in M):
                raise ComplexError(f"differential {r} should be {rows}x{cols}")
            clean = [[{k: f(v) for k, v in a.items() if f(v)} for a in row] for row in M]
            for q, row in enumerate(clean):
                for p, a in enumerate(row):
                    for k in a:
                        if alg.right[k] != self.comps[r + 1][q] or alg.left[k] != self.comps[r][p]:
                            raise ComplexError(
                                f"entry ({q},{p}) of d^{r} is not a map P_{self.comps[r][p]} -> P_{self.comps[r+1][q]}")
            if any(a for row in clean for a in row):
                self.diffs[r] = clean

    # basic access
    def comp(self, r: int) -> List[str]:
        return self.comps.get(r, [])

    def d(self, r: int) -> AMat:
        if r in self.diffs:
            return self.diffs[r]
        return zero_amat(len(self.comp(r + 1)), len(self.comp(r)))

    @property
    def degrees(self) -> List[int]:
        return sorted(self.comps)

    @property
    def is_zero(self) -> bool:
        return not self.comps

    def window(self) -> Tuple[int, int]:
        if not self.comps:
            return (0, -1)
        return (min(self.comps), max(self.comps))

    def rank_vector(self) -> Dict[int, Dict[str, int]]:
        out = {}
        for r, vs in self.comps.items():
            cnt: Dict[str, int] = {}
            for v in vs:
                v = self.alg.rep[v]
                cnt[v] = cnt.get(v, 0) + 1
            out[r] = cnt
        return out

    def shift(self, n: int) -> "ProjComplex":
        """X[n]: (X[n])^r = X^{r+n}, differential times (-1)^n."""
        sign = -1 if n % 2 else 1
        comps = {r - n: v for r, v in self.comps.items()}
        diffs = {r - n: amat_scale(M, sign) for r, M in self.diffs.items()}
        return ProjComplex(self.alg, comps, diffs)

    def __eq__(self, other):
        if not isinstance(other, ProjComplex) or other.alg is not self.alg:
            return NotImplemented
        return self.comps == other.comps and self.diffs == other.diffs

    def __repr__(self):
        parts = []
        for r in self.degrees:
            parts.append(f"{r}:[{','.join(self.comps[r])}]")
        return f"<ProjComplex {' '.join(parts) or 'zero'}>"

    def pretty(self) -> str:
        lines = []
        for r in self.degrees:
            lines.append(f"degree {r}: " + " + ".join(f"P[{v}]" for v in self.comps[r]))
            if r in self.diffs:
                for q, row in enumerate(self.diffs[r]):
                    lines.append("   d[%d] row %d: %s" % (r, q, " | ".join(self.alg.element_str(a) for a in row)))
        return "\n".join(lines) if lines else "zero complex"


def direct_sum(*Xs: ProjComplex) -> ProjComplex:
    alg = Xs[0].alg
    comps: Dict[int, List[str]] = {}
    offsets: List[Dict[int, int]] = []
    for X in Xs:
        off = {}
        for r in X.degrees:
            off[r] = len(comps.get(r, []))
            comps.setdefault(r, []).extend(X.comp(r))
        offsets.append(off)
    diffs = {}
    for r in comps:
        if r + 1 not in comps:
            continue
        M = zero_amat(len(comps[r + 1]), len(comps[r]))
        for X, off in zip(Xs, offsets):
            if r in X.diffs:
                for q, row in enumerate(X.diffs[r]):
                    for p, a in enumerate(row):
                        M[off[r + 1] + q][off[r] + p] = dict(a)
        diffs[r] = M
    return ProjComplex(alg, comps, diffs)


def stalk(alg: BasedAlgebra, vertex: str, r: int = 0) -> ProjComplex:
    return ProjComplex(alg, {r: [vertex]})


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

def term_of(alg: BasedAlgebra, n: int):
    kind, data = alg.keys[n]
    if kind == "e":
        return ["idem", data]
    if kind == "p":
        i, a, sa, b, sb = data
        if sa or sb:
            return ["path", i, a, b, sa, sb]
        return ["path", i, a, b]
    raise ComplexError(f"basis element {alg.names[n]} has no JSON form")


def index_of_term(alg: BasedAlgebra, term) -> int:
    if not isinstance(term, list) or not term:
        raise ComplexError(f"bad term {term!r}")
    if term[0] == "idem":
        if len(term) != 2 or term[1] not in alg.idem:
            raise ComplexError(f"unknown idempotent {term!r}")
        return alg.idem[term[1]]
    if term[0] == "path":
        if len(term) not in (4, 6) or not isinstance(alg, MatrixAlgebra):
            raise ComplexError(f"bad path term {term!r}")
        i, a, b = (int(x) for x in term[1:4])
        sa, sb = (term[4], term[5]) if len(term) == 6 else ("", "")
        try:
            return alg.path(i, a, b, sa, sb)
        except AlgebraError as exc:
            raise ComplexError(str(exc)) from exc
    raise ComplexError(f"bad term {term!r}")


_TERM_KINDS = ("idem", "path")


def entry_from_json(alg: BasedAlgebra, obj) -> dict:
    f = alg.field
    if obj in (None, 0, "0") or obj == []:
        return {}
    if isinstance(obj, list) and obj and obj[0] in _TERM_KINDS:
        return {index_of_term(alg, obj): f.one}
    if not isinstance(obj, list):
        raise ComplexError(f"bad differential entry {obj!r}")
    out: dict = {}
    for item in obj:
        if isinstance(item, list) and item and item[0] in _TERM_KINDS:
            coef, term = f.one, item
        elif isinstance(item, list) and len(item) == 2:
            coef = f.parse(str(item[0]))
            term = item[1]
        else:
            raise ComplexError(f"bad term {item!r}")
        n = index_of_term(alg, term)
        out[n] = out.get(n, 0) + coef
    return _clean(out)


def entry_to_json(alg: BasedAlgebra, x: dict):
    if not x:
        return []
    f = alg.field
    if len(x) == 1:
        (n, c), = x.items()
        if c == f.one:
            return term_of(alg, n)
    return [[f.to_str(x[n]), term_of(alg, n)] for n in sorted(x)]


def complex_to_json(X: ProjComplex) -> dict:
    return {
        "degrees": {str(r): list(X.comps[r]) for r in X.degrees},
        "diff": {str(r): [[entry_to_json(X.alg, a) for a in row] for row in X.diffs[r]]
                 for r in sorted(X.diffs)},
    }


def complex_from_json(alg: BasedAlgebra, obj) -> ProjComplex:
    if isinstance(obj, str):
        obj = json.loads(obj)
    if not isinstance(obj, dict) or "degrees" not in obj:
        raise ComplexError("complex JSON needs a 'degrees' field")
    comps = {int(r): list(v) for r, v in obj["degrees"].items()}
    diffs = {}
    for r, rows in obj.get("diff", {}).items():
        diffs[int(r)] = [[entry_from_json(alg, e) for e in row] for row in rows]
    return ProjComplex(alg, comps, diffs)


# ---------------------------------------------------------------------------
# checks and cohomology
# ---------------------------------------------------------------------------

@dataclass
class ComplexCheck:
    is_complex: bool
    is_minimal: bool
    failures: List[str] = dc_field(default_factory=list)


def verify_complex(X: ProjComplex) -> ComplexCheck:
    fails = []
    alg = X.alg
    for r in X.degrees:
        if r in X.diffs and r + 1 in X.diffs:
            sq = compose(alg, X.diffs[r], X.diffs[r + 1], len(X.comp(r)))
            if not amat_is_zero(sq):
                fails.append(f"d^{r + 1} d^{r} != 0")
    minimal = all(alg.in_radical(a) for M in X.diffs.values() for row in M for a in row)
    return ComplexCheck(not fails, minimal, fails)


def _expanded_map(X: ProjComplex, r: int, gamma: str):
    """Scalar matrix of e_gamma d^r as sparse rows keyed by (q, basis)."""
    alg = X.alg
    cols = [(p, b) for p, x in enumerate(X.comp(r)) for b in alg.by_ends.get((gamma, x), ())]
    vecs = []
    M = X.d(r)
    for p, b in cols:
        v: dict = {}
        for q in range(len(X.comp(r + 1))):
            a = M[q][p]
            if a:
                for k, c in alg.mul({b: alg.field.one}, a).items():
                    v[(q, k)] = v.get((q, k), 0) + c
        vecs.append(_clean(v))
    return cols, vecs


def _rank(field, vecs) -> int:
    ech = Echelon(field)
    for v in vecs:
        if v:
            ech.insert(v)
    return ech.rank


def cohomology_dims(X: ProjComplex) -> Dict[int, Dict[str, int]]:
    """Per degree, the dimension of e_gamma H^r(X) for every vertex gamma."""
    alg = X.alg
    out = {}
    lo, hi = X.window()
    for r in range(lo, hi + 1):
        dims = {}
        for g in alg.vertices:
            cols, vecs = _expanded_map(X, r, g)
            dim_r = len(cols)
            rank_out = _rank(alg.field, vecs)
            _, prev = _expanded_map(X, r - 1, g)
            rank_in = _rank(alg.field, prev)
            dims[g] = dim_r - rank_out - rank_in
        out[r] = dims
    return out


def total_cohomology(X: ProjComplex) -> Dict[int, int]:
    return {r: sum(v.values()) for r, v in cohomology_dims(X).items()}


# ---------------------------------------------------------------------------
# minimization
# ---------------------------------------------------------------------------

def _find_invertible_entry(X: ProjComplex):
    alg = X.alg
    for r in sorted(X.diffs):
        for q, row in enumerate(X.diffs[r]):
            for p, a in enumerate(row):
                if a and not alg.in_radical(a):
                    x, y = X.comps[r][p], X.comps[r + 1][q]
                    if alg.rep[x] == alg.rep[y] and top_coefficient(alg, a):
                        return r, q, p
    return None


def minimize(X: ProjComplex) -> ProjComplex:
    """Strip contractible summands by Gaussian elimination."""
    alg = X.alg
    while True:
        hit = _find_invertible_entry(X)
        if hit is None:
            return X
        r, q0, p0 = hit
        comps = {k: list(v) for k, v in X.comps.items()}
        src, dst = comps[r], comps[r + 1]
        phi = X.diffs[r][q0][p0]
        phinv = element_inverse(alg, phi, src[p0], dst[q0])
        M = X.diffs[r]
        keep_p = [p for p in range(len(src)) if p != p0]
        keep_q = [q for q in range(len(dst)) if q != q0]
        newM = zero_amat(len(keep_q), len(keep_p))
        for a, q in enumerate(keep_q):
            gamma = M[q][p0]
            for b, p in enumerate(keep_p):
                ent = dict(M[q][p])
                delta = M[q0][p]
                if delta and gamma:
                    corr = alg.mul(alg.mul(delta, phinv), gamma)
                    ent = _add(ent, corr, -1)
                newM[a][b] = ent
        diffs = {k: v for k, v in X.diffs.items()}
        diffs[r] = newM
        if r - 1 in diffs:
            diffs[r - 1] = [row for p, row in enumerate(diffs[r - 1]) if p != p0]
        if r + 1 in diffs:
            diffs[r + 1] = [[a for q, a in enumerate(row) if q != q0] for row in diffs[r + 1]]
        comps[r] = [src[p] for p in keep_p]
        comps[r + 1] = [dst[q] for q in keep_q]
        X = ProjComplex(alg, comps, diffs)


# ---------------------------------------------------------------------------
# morphisms in the homotopy category
# ---------------------------------------------------------------------------

class ChainMapSpace:
    """Chain maps X -> X2, null-homotopic maps and their quotient.

    A degree-wise map is flattened to a sparse vector keyed by
    ``(r, row, col, basis index)``.
    """

    def __init__(self, X: ProjComplex, X2: ProjComplex):
        if X.alg is not X2.alg:
            raise ComplexError("complexes over different algebras")
        self.X, self.X2 = X, X2
        alg = X.alg
        self.alg = alg
        one = alg.field.one
        degs = sorted(set(X.degrees) & set(X2.degrees))
        self.degs = degs
        unknowns = []
        for r in degs:
            for q, y in enumerate(X2.comp(r)):
                for p, x in enumerate(X.comp(r)):
                    for b in alg.by_ends.get((x, y), ()):
                        unknowns.append((r, q, p, b))
        self.unknowns = unknowns
        # equations: d2^r o f^r - f^{r+1} o d^r = 0
        eqs: Dict[tuple, dict] = {}
        for (r, q, p, b) in unknowns:
            e = {b: one}
            # f^r then d2^r : entry [s][p] += f[q][p] * d2[s][q]
            D2 = X2.d(r)
            for s in range(len(X2.comp(r + 1))):
                g = D2[s][q]
                if g:
                    for k, c in alg.mul(e, g).items():
                        key = (r + 1, s, p, k)
                        eqs.setdefault(key, {})
                        eqs[key][(r, q, p, b)] = eqs[key].get((r, q, p, b), 0) + c
            # d^{r-1} then f^r : entry [q][p'] += d[p][p'] * f[q][p]
            D = X.d(r - 1)
            for pp in range(len(X.comp(r - 1))):
                g = D[p][pp]
                if g:
                    for k, c in alg.mul(g, e).items():
                        key = (r, q, pp, k)
                        eqs.setdefault(key, {})
                        eqs[key][(r, q, p, b)] = eqs[key].get((r, q, p, b), 0) - c
        self.cycles = sparse_nullspace(alg.field, [_clean(v) for v in eqs.values()], unknowns)
        # null-homotopic maps d2 h + h d from h^r : X^r -> X2^{r-1}
        bounds = []
        for r in X.degrees:
            for q, y in enumerate(X2.comp(r - 1)):
                for p, x in enumerate(X.comp(r)):
                    for b in alg.by_ends.get((x, y), ()):
                        e = {b: one}
                        v: dict = {}
                        # h^r then d2^{r-1}: component of f^r at [s][p]
                        D2 = X2.d(r - 1)
                        for s in range(len(X2.comp(r))):
                            g = D2[s][q]
                            if g:
                                for k, c in alg.mul(e, g).items():
                                    key = (r, s, p, k)
                                    v[key] = v.get(key, 0) + c
                        # d^{r-1} then h^r: component of f^{r-1} at [q][p']
                        D = X.d(r - 1)
                        for pp in range(len(X.comp(r - 1))):
                            g = D[p][pp]
                            if g:
                                for k, c in alg.mul(g, e).items():
                                    key = (r - 1, q, pp, k)
                                    v[key] = v.get(key, 0) + c
                        v = _clean(v)
                        if v:
                            bounds.append(v)
        self.bounds = bounds
        ech = Echelon(alg.field, track=True)
        for n, v in enumerate(bounds):
            ech.insert(v, ("B", n))
        self.boundary_rank = ech.rank
        reps = []
        for v in self.cycles:
            if ech.insert(v, ("R", len(reps))):
                reps.append(v)
        self.reps = reps
        self._ech = ech

    @property
    def dim(self) -> int:
        return len(self.reps)

    def coords(self, v: dict) -> Dict[int, object]:
        """Coordinates of a chain map modulo null-homotopic maps."""
        c = self._ech.coords(_clean(v))
        if c is None:
            raise ComplexError("not a chain map")
        return {k[1]: x for k, x in c.items() if k[0] == "R" and x}

    def to_mats(self, v: dict) -> Dict[int, AMat]:
        mats = {r: zero_amat(len(self.X2.comp(r)), len(self.X.comp(r))) for r in self.degs}
        for (r, q, p, b), c in v.items():
            mats[r][q][p][b] = c
        return mats

    def random_map(self, rng: random.Random) -> dict:
        f = self.alg.field
        out: dict = {}
        for v in self.cycles:
            c = f.random(rng, 7)
            if c:
                for k, x in v.items():
                    out[k] = out.get(k, 0) + c * x
        return _clean(out)


def hom_homotopy(X: ProjComplex, X2: ProjComplex) -> ChainMapSpace:
    return ChainMapSpace(X, X2)


def mats_to_vec(mats: Dict[int, AMat]) -> dict:
    out = {}
    for r, M in mats.items():
        for q, row in enumerate(M):
            for p, a in enumerate(row):
                for b, c in a.items():
                    if c:
                        out[(r, q, p, b)] = c
    return out


def compose_maps(alg, X, F: Dict[int, AMat], G: Dict[int, AMat]) -> Dict[int, AMat]:
    """Degree-wise "F then G"."""
    return {r: compose(alg, F[r], G[r], len(X.comp(r))) for r in F if r in G}


def is_degreewise_invertible(alg, X, X2, F: Dict[int, AMat]) -> bool:
    for r in set(X.degrees) | set(X2.degrees):
        n, m = len(X.comp(r)), len(X2.comp(r))
        if n != m:
            return False
        if n == 0:
            continue
        if not top_matrix(alg, F[r]).is_invertible():
            return False
    return True


def end_algebra(X: ProjComplex, space: Optional[ChainMapSpace] = None):
    """End in the homotopy category as a structure-constant algebra."""
    space = space or ChainMapSpace(X, X)
    alg = X.alg
    n = space.dim
    mats = [space.to_mats(v) for v in space.reps]
    table = {}
    for a in range(n):
        for b in range(n):
            # product a*b = "b then a"
            prod = mats_to_vec(compose_maps(alg, X, mats[b], mats[a]))
            co = space.coords(prod) if prod else {}
            if co:
                table[(a, b)] = co
    unit = space.coords(mats_to_vec({r: amat_identity(alg, X.comp(r)) for r in space.degs}))
    return StructureConstantAlgebra(alg.field, n, table, unit, check=False), space, mats


# ---------------------------------------------------------------------------
# decomposition
# ---------------------------------------------------------------------------

def _lift_chain_idempotent(alg, X, E: Dict[int, AMat]) -> Dict[int, AMat]:
    for _ in range(64):
        E2 = compose_maps(alg, X, E, E)
        if all(amat_add(E2[r], E[r], -1) == zero_amat(len(E[r]), len(E[r][0]) if E[r] else 0)
               or amat_is_zero(amat_add(E2[r], E[r], -1)) for r in E):
            return E
        E3 = compose_maps(alg, X, E2, E)
        E = {r: amat_add(amat_scale(E2[r], 3), E3[r], -2) for r in E}
    raise ComplexError("idempotent lifting did not converge")


def _split_by_idempotent(X: ProjComplex, E: Dict[int, AMat]):
    """Split X along an idempotent chain map into image and kernel parts."""
    alg = X.alg
    one = alg.field.one
    new_bases: Dict[int, Tuple[AMat, List[str], int]] = {}
    for r in X.degrees:
        verts = X.comp(r)
        n = len(verts)
        Er = E[r]
        Fr = amat_add(amat_identity(alg, verts), Er, -1)
        cols_img, cols_ker = [], []
        chosen_verts_img, chosen_verts_ker = [], []
        for part, cols, cv in ((Er, cols_img, chosen_verts_img), (Fr, cols_ker, chosen_verts_ker)):
            ech = Echelon(alg.field)
            for p, x in enumerate(verts):
                # image of the generator x_p under the idempotent: column p
                col = [part[q][p] for q in range(n)]
                top = {}
                for q, a in enumerate(col):
                    t = top_coefficient(alg, a)
                    if t:
                        top[q] = t
                if top and ech.insert(top):
                    cols.append(col)
                    cv.append(x)
        if len(cols_img) + len(cols_ker) != n:
            raise ComplexError("idempotent split failed to give a basis")
        C = zero_amat(n, n)
        allcols = cols_img + cols_ker
        for k, col in enumerate(allcols):
            for q in range(n):
                C[q][k] = dict(col[q])
        new_bases[r] = (C, chosen_verts_img + chosen_verts_ker, len(cols_img))
    # new differential: C^{r} then d then (C^{r+1})^{-1}
    comps_new = {r: nb[1] for r, nb in new_bases.items()}
    inv = {r: amat_inverse(alg, nb[0], nb[1], X.comp(r)) for r, nb in new_bases.items()}
    diffs_new = {}
    for r in X.diffs:
        C = new_bases[r][0]
        M = compose(alg, C, X.diffs[r], len(comps_new[r]))
        diffs_new[r] = compose(alg, M, inv[r + 1], len(comps_new[r]))
    parts = []
    for side in (0, 1):
        comps, diffs = {}, {}
        idx = {}
        for r, (C, verts, k) in new_bases.items():
            sel = list(range(k)) if side == 0 else list(range(k, len(verts)))
            idx[r] = sel
            comps[r] = [verts[s] for s in sel]
        for r, M in diffs_new.items():
            rows, cols = idx.get(r + 1, []), idx.get(r, [])
            diffs[r] = [[M[q][p] for p in cols] for q in rows]
            # off-diagonal blocks must vanish
            other_rows = [q for q in range(len(M)) if q not in rows]
            for q in other_rows:
                for p in cols:
                    if M[q][p]:
                        raise ComplexError("idempotent does not split the differential")
        parts.append(ProjComplex(alg, comps, diffs))
    return parts


def decompose(X: ProjComplex, seed: int = 0) -> List[ProjComplex]:
    """Indecomposable summands of a complex (after minimization)."""
    X = minimize(X)
    if X.is_zero:
        return []
    E, space, mats = end_algebra(X)
    e = find_nontrivial_idempotent(E, seed)
    if e is None:
        return [X]
    alg = X.alg
    chain = {r: zero_amat(len(X.comp(r)), len(X.comp(r))) for r in space.degs}
    for a, c in e.items():
        for r, M in mats[a].items():
            chain[r] = amat_add(chain[r], amat_scale(M, c))
    chain = _lift_chain_idempotent(alg, X, chain)
    parts = _split_by_idempotent(X, chain)
    out = []
    for P in parts:
        if not P.is_zero:
            out.extend(decompose(P, seed))
    return out


def is_indecomposable(X: ProjComplex, seed: int = 0) -> bool:
    X = minimize(X)
    if X.is_zero:
        return False
    E, _, _ = end_algebra(X)
    return is_local(E)


def _same_shape(X: ProjComplex, X2: ProjComplex) -> bool:
    return X.rank_vector() == X2.rank_vector()


def _indecomposables_isomorphic(U: ProjComplex, U2: ProjComplex) -> bool:
    if not _same_shape(U, U2):
        return False
    alg = U.alg
    fwd = ChainMapSpace(U, U2)
    bwd = ChainMapSpace(U2, U)
    fm = [fwd.to_mats(v) for v in fwd.cycles]
    bm = [bwd.to_mats(v) for v in bwd.cycles]
    for f in fm:
        for g in bm:
            gf = compose_maps(alg, U, f, g)
            if is_degreewise_invertible(alg, U, U, gf):
                return True
    return False


def is_homotopy_iso(X: ProjComplex, X2: ProjComplex, seed: int = 0, trials: int = 8) -> bool:
    """Decide X ~ X2 in the homotopy category (both are minimized first)."""
    X, X2 = minimize(X), minimize(X2)
    if not _same_shape(X, X2):
        return False
    if X.is_zero:
        return True
    alg = X.alg
    space = ChainMapSpace(X, X2)
    rng = random.Random(seed)
    for _ in range(trials):
        v = space.random_map(rng)
        if is_degreewise_invertible(alg, X, X2, space.to_mats(v)):
            return True
    parts1, parts2 = decompose(X, seed), decompose(X2, seed)
    if len(parts1) != len(parts2):
        return False
    remaining = list(parts2)
    for U in parts1:
        for k, U2 in enumerate(remaining):
            if _indecomposables_isomorphic(U, U2):
                del remaining[k]
                break
        else:
            return False
    return True


# ---------------------------------------------------------------------------
# triples
# ---------------------------------------------------------------------------

def _h_pos(H: MatrixAlgebra, label: str):
    for p, lab in H.vertex_of_pos.items():
        if lab == label:
            return p
    raise ComplexError(f"unknown H-vertex {label!r}")


def predecessors(A: MatrixAlgebra, vertex: str):
    """H-positions (i, j, sign) whose diagonal units make up e_vertex."""
    n = A.idem[vertex]
    return sorted((u[0], u[1], u[2]) for u in A.hvec[n])


def tensor_to_h(A: MatrixAlgebra, H: MatrixAlgebra, X: ProjComplex) -> ProjComplex:
    """H tensor X: each P_gamma becomes the sum of its predecessor Q's."""
    gens = {r: [(p, h) for p, x in enumerate(X.comps[r]) for h in predecessors(A, x)] for r in X.degrees}
    comps = {r: [H.vertex_of_pos[h] for _, h in g] for r, g in gens.items()}
    diffs = {}
    for r, M in X.diffs.items():
        src, dst = gens[r], gens[r + 1]
        out = zero_amat(len(dst), len(src))
        for q, row in enumerate(M):
            for p, a in enumerate(row):
                if not a:
                    continue
                units = A.to_units(a)
                for s, (qq, h2) in enumerate(dst):
                    if qq != q:
                        continue
                    for t, (pp, h1) in enumerate(src):
                        if pp != p:
                            continue
                        u = (h1[0], h1[1], h1[2], h2[1], h2[2])
                        if h1[0] == h2[0] and u in units:
                            out[s][t] = {H.unit_index[u]: A.field(units[u])}
        diffs[r] = out
    Y = ProjComplex(H, comps, diffs)
    Y.gens = gens
    return Y


@dataclass
class Summand:
    """W(i, (a, b))[-r]: Q_(i,a) in degree r-1 (absent when a = m_i + 1), Q_(i,b) in degree r."""

    i: int
    a: int
    b: int
    r: int
    high: Optional[int] = None   # index of the generator in degree r-1
    low: Optional[int] = None    # index of the generator in degree r

    @property
    def key(self):
        return (self.i, self.a, self.b, self.r)


@dataclass
class YGen:
    pos: Tuple[int, int]
    summand: int
    end: str            # "high" or "low"
    partner: int        # position on the chain of the other end (m_i + 1 for stalks)


@dataclass
class HSplit:
    summands: List[Summand]
    gens: Dict[int, List[YGen]]
    G: Dict[int, Matrix]           # old generator l -> new generator k coefficients
    old_pos: Dict[int, List[Tuple[int, int, str]]]

    def multiset(self) -> Dict[Tuple[int, int, int, int], int]:
        out: Dict[tuple, int] = {}
        for s in self.summands:
            out[s.key] = out.get(s.key, 0) + 1
        return out


def split_H_complex(Y: ProjComplex) -> HSplit:
    """Split a minimal complex over H into shifted copies of the W complexes."""
    H = Y.alg
    if not isinstance(H, MatrixAlgebra):
        raise ComplexError("split needs a matrix algebra")
    chk = verify_complex(Y)
    if not chk.is_complex or not chk.is_minimal:
        raise ComplexError("split needs a minimal complex")
    f = H.field
    pos = {r: [_h_pos(H, v) for v in Y.comp(r)] for r in Y.degrees}
    lo, hi = Y.window()
    degs = list(range(lo, hi + 1))
    n = {r: len(Y.comp(r)) for r in degs}
    order = {r: sorted(range(n[r]), key=lambda k: (pos[r][k][0], pos[r][k][1], k)) for r in degs}
    rank_in = {r: {k: t for t, k in enumerate(order[r])} for r in degs}

    def scalar_diff(r):
        D = Y.d(r)
        out = [[f.zero] * n[r] for _ in range(n.get(r + 1, 0))]
        for q, row in enumerate(D):
            for p, a in enumerate(row):
                if a:
                    hp, hq = pos[r][p], pos[r + 1][q]
                    u = (hp[0], hp[1], hp[2], hq[1], hq[2])
                    k = H.unit_index.get(u)
                    c = a.get(k, f.zero) if k is not None else f.zero
                    if any(kk != k for kk in a):
                        raise ComplexError("entry is not a multiple of a matrix unit")
                    out[q][p] = c
        return out

    G = {r: [[f.one if i == j else f.zero for j in range(n[r])] for i in range(n[r])] for r in degs}
    summands: List[Summand] = []
    role: Dict[Tuple[int, int], Tuple[int, str]] = {}
    for r in degs:
        if r + 1 not in n or n[r] == 0 or n[r + 1] == 0:
            continue
        D = scalar_diff(r)
        Gr = G[r]
        nr, nr1 = n[r], n[r + 1]
        M = [[sum((D[q][l] * Gr[l][k] for l in range(nr) if D[q][l] and Gr[l][k]), f.zero)
              for k in range(nr)] for q in range(nr1)]
        pivot_of_low: Dict[int, int] = {}
        lows: Dict[int, int] = {}
        for k in order[r]:
            while True:
                rows = [q for q in range(nr1) if M[q][k]]
                if not rows:
                    break
                low = max(rows, key=lambda q: rank_in[r + 1][q])
                k0 = pivot_of_low.get(low)
                if k0 is None:
                    pivot_of_low[low] = k
                    lows[k] = low
                    break
                c = M[low][k] / M[low][k0]
                for q in range(nr1):
                    if M[q][k0]:
                        M[q][k] = M[q][k] - c * M[q][k0]
                for l in range(nr):
                    if Gr[l][k0]:
                        Gr[l][k] = Gr[l][k] - c * Gr[l][k0]
        Gn = G[r + 1]
        for k, low in lows.items():
            for q in range(nr1):
                Gn[q][low] = M[q][k]
            hp, lp = pos[r][k], pos[r + 1][low]
            if hp[0] != lp[0] or hp[1] <= lp[1]:
                raise ComplexError("pivot does not respect the chain order")
            s = len(summands)
            summands.append(Summand(hp[0], hp[1], lp[1], r + 1, k, low))
            role[(r, k)] = (s, "high")
            role[(r + 1, low)] = (s, "low")
    m = H.m
    for r in degs:
        for k in range(n[r]):
            if (r, k) not in role:
                p = pos[r][k]
                s = len(summands)
                summands.append(Summand(p[0], m[p[0] - 1] + 1, p[1], r, None, k))
                role[(r, k)] = (s, "low")
    gens = {}
    for r in degs:
        gl = []
        for k in range(n[r]):
            s, end = role[(r, k)]
            S = summands[s]
            if end == "high":
                gl.append(YGen((S.i, S.a), s, "high", S.b))
            else:
                gl.append(YGen((S.i, S.b), s, "low", S.a))
        gens[r] = gl
    Gm = {r: Matrix(f, G[r], n[r]) for r in degs}
    return HSplit(summands, gens, Gm, pos)


def stripe_weight(m_i: int, g: YGen) -> Tuple[int, int]:
    """Position of a generator's stripe in the total order on its stripe set.

    High ends (partner b < j) come first with the nearest partner smallest,
    then the stalk, then low ends with the farthest partner smallest.
    """
    j = g.pos[1]
    if g.end == "high":
        return (0, j - g.partner)
    return (1, m_i + 1 - g.partner)


def stripe_label(g: YGen, r: int) -> Tuple[Tuple[int, int], int, Tuple[int, int], int]:
    """(own position, degree, partner position, partner degree)."""
    i = g.pos[0]
    if g.end == "high":
        return (g.pos, r, (i, g.partner), r + 1)
    return (g.pos, r, (i, g.partner), r - 1)


@dataclass
class Triple:
    """(Y, V, theta) for a minimal complex, with Y already split.

    ``theta[(pos, r)]`` is the matrix of theta^r on the block of position
    ``pos``: rows are split Y-generators (in stripe order), columns are
    V-generators (``+`` columns before ``-`` columns).
    """

    A: MatrixAlgebra
    H: MatrixAlgebra
    Y: Optional[ProjComplex]
    V: Dict[int, List[str]]
    summands: List[Summand]
    gens: Dict[int, List[YGen]]
    theta: Dict[Tuple[Tuple[int, int], int], Matrix]
    rows: Dict[Tuple[Tuple[int, int], int], List[int]]
    cols: Dict[Tuple[Tuple[int, int], int], List[int]]
    signs: Dict[Tuple[Tuple[int, int], int], List[str]] = dc_field(default_factory=dict)

    def copy_with(self, theta) -> "Triple":
        return Triple(self.A, self.H, self.Y, self.V, self.summands, self.gens, theta,
                      self.rows, self.cols, self.signs)


def _vertex_positions(A: MatrixAlgebra, vertex: str):
    return predecessors(A, vertex)


def triple_of(X: ProjComplex, H: Optional[MatrixAlgebra] = None) -> Triple:
    A = X.alg
    if H is None:
        from .algebra import build_normalization
        H = build_normalization(A.datum, A.field, check=False)
    chk = verify_complex(X)
    if not chk.is_complex:
        raise ComplexError("not a complex")
    if not chk.is_minimal:
        raise ComplexError("triples need a minimal complex")
    Y = tensor_to_h(A, H, X)
    sp = split_H_complex(Y)
    theta, rows, cols, signs = {}, {}, {}, {}
    f = A.field
    for r in Y.degrees:
        by_pos: Dict[Tuple[int, int], List[int]] = {}
        for l, (p, h) in enumerate(Y.gens[r]):
            by_pos.setdefault((h[0], h[1]), []).append(l)
        for ps, olds in by_pos.items():
            news = [k for k, g in enumerate(sp.gens[r]) if g.pos == ps]
            mi = A.m[ps[0] - 1]
            news.sort(key=lambda k: (stripe_weight(mi, sp.gens[r][k]), k))
            olds.sort(key=lambda l: ({"": 0, "+": 0, "-": 1}[Y.gens[r][l][1][2]], Y.gens[r][l][0]))
            Gb = sp.G[r].submatrix(olds, news)
            if not Gb.is_invertible():
                raise ComplexError("split basis change is singular on a diagonal block")
            Th = Gb.inverse()
            theta[(ps, r)] = Th
            rows[(ps, r)] = news
            cols[(ps, r)] = [Y.gens[r][l][0] for l in olds]
            signs[(ps, r)] = [Y.gens[r][l][1][2] for l in olds]
    return Triple(A, H, Y, dict(X.comps), sp.summands, sp.gens, theta, rows, cols, signs)


@dataclass
class DecoratedMatrix:
    matrix: Matrix
    row_stripes: List[tuple]
    col_signs: List[str]
    col_gens: List[int]


def decorated_matrices(T: Triple) -> Dict[Tuple[Tuple[int, int], int], DecoratedMatrix]:
    out = {}
    for key, M in T.theta.items():
        ps, r = key
        labels = [stripe_label(T.gens[r][k], r) for k in T.rows[key]]
        out[key] = DecoratedMatrix(M, labels, T.signs[key], T.cols[key])
    return out


def all_square_invertible(T: Triple) -> bool:
    for M in T.theta.values():
        if M.nrows != M.ncols or not M.is_invertible():
            return False
    return True


def reconstruct(T: Triple) -> ProjComplex:
    """The pullback complex X with H tensor X = Y glued along theta."""
    A = T.A
    f = A.field
    comps = {r: list(v) for r, v in T.V.items()}
    pos_signs = {}
    for r, vs in comps.items():
        for p, x in enumerate(vs):
            pos_signs[(r, p)] = {(h[0], h[1]): h[2] for h in predecessors(A, x)}
    inv = {}
    for key, M in T.theta.items():
        if M.nrows != M.ncols or not M.is_invertible():
            raise ComplexError(f"theta at {key} is not invertible")
        inv[key] = M.inverse()
    diffs = {}
    for r in sorted(comps):
        if r + 1 not in comps:
            continue
        out = zero_amat(len(comps[r + 1]), len(comps[r]))
        for (ps, rr), M in T.theta.items():
            if rr != r:
                continue
            rowlist = T.rows[(ps, r)]
            collist = T.cols[(ps, r)]
            for a_idx, k in enumerate(rowlist):
                g = T.gens[r][k]
                if g.end != "high":
                    continue
                S = T.summands[g.summand]
                tgt_key = ((S.i, S.b), r + 1)
                t_row = T.rows[tgt_key].index(S.low)
                Minv = inv[tgt_key]
                tcols = T.cols[tgt_key]
                for c_idx, p in enumerate(collist):
                    coef = M[a_idx, c_idx]
                    if not coef:
                        continue
                    alpha = pos_signs[(r, p)][ps]
                    for c2, p2 in enumerate(tcols):
                        c = Minv[c2, t_row]
                        if not c:
                            continue
                        beta = pos_signs[(r + 1, p2)][(S.i, S.b)]
                        u = (S.i, S.a, alpha, S.b, beta)
                        n_el = A.unit_index.get(u)
                        if n_el is None:
                            raise ComplexError(f"unit {unit_str(u)} is not in the algebra")
                        out[p2][p] = _add(out[p2][p], {n_el: coef * c})
        diffs[r] = out
    return ProjComplex(A, comps, diffs)


def split_complex_over_h(T: Triple) -> ProjComplex:
    """Y in its split form: the direct sum of the W summands."""
    H = T.H
    comps = {r: [H.vertex_of_pos[(g.pos[0], g.pos[1], "+" if g.pos[1] in H.blown[g.pos[0] - 1] else "")]
                 for g in gl] for r, gl in T.gens.items()}
    diffs = {}
    for S in T.summands:
        if S.high is None:
            continue
        r = S.r - 1
        if r not in diffs:
            diffs[r] = zero_amat(len(comps[r + 1]), len(comps[r]))
        sa = "+" if S.a in H.blown[S.i - 1] else ""
        sb = "+" if S.b in H.blown[S.i - 1] else ""
        diffs[r][S.low][S.high] = {H.path(S.i, S.a, S.b, sa, sb): H.field.one}
    return ProjComplex(H, comps, diffs)

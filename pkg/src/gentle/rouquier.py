"""The generator Z and explicit two-step generation certificates.

For a minimal complex X over A with normalization H, the degreewise short
exact sequence

    0 -> X -> (H (x) X) + (A/rad (x) X) -> (H/I) (x) X -> 0

has both outer terms in add(shifts of Z), where Z is the sum of all
indecomposable H-modules W(i, (a, b)) = Q_(i,b) / Q_(i,a).  The certificate
stores the summand lists and the rank checks that make the sequence exact.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Tuple

from .algebra import (MatrixAlgebra, build_glued_algebra, build_hereditary,
                      build_normalization, embed)
from .complexes import (ComplexError, ProjComplex, predecessors,
                        split_H_complex, tensor_to_h, verify_complex)
from .datum import Datum
from .exactla import Field, Matrix, default_field


@dataclass
class GeneratorZ:
    """All W(i, (a, b)) with 1 <= b < a <= m_i + 1, ordered by (i, b, a)."""

    m: Tuple[int, ...]
    members: List[Tuple[int, int, int]]
    simples: Dict[str, Tuple[int, str]] = dc_field(default_factory=dict)

    def index(self, i, a, b) -> int:
        return self.members.index((i, a, b))

    def dims(self) -> List[int]:
        return [a - b for (_, a, b) in self.members]

    def to_json(self):
        return {"members": [{"index": n, "i": i, "a": a, "b": b, "dim": a - b}
                            for n, (i, a, b) in enumerate(self.members)],
                "simples": {v: {"index": k, "note": note} for v, (k, note) in self.simples.items()}}


def _members(m) -> List[Tuple[int, int, int]]:
    return [(i, a, b) for i, mi in enumerate(m, 1) for b in range(1, mi + 1) for a in range(b + 1, mi + 2)]


def _simple_map(A: MatrixAlgebra, members) -> Dict[str, Tuple[int, str]]:
    """Each simple A/rad-module as (a summand of) the simple H-module at one of its positions."""
    out = {}
    for v in A.vertices:
        hs = predecessors(A, v)
        i, j, s = hs[0]
        note = "equal" if len(hs) == 1 and not s else "summand"
        if not s and len(hs) > 1:
            note = "equal"
        out[v] = (members.index((i, j + 1, j)), note)
    return out


def build_generator(d: Datum, A: Optional[MatrixAlgebra] = None) -> GeneratorZ:
    members = _members(d.m)
    Z = GeneratorZ(tuple(d.m), members)
    if A is not None:
        Z.simples = _simple_map(A, members)
    return Z


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------

@dataclass
class DegreeReport:
    degree: int
    dim_x: int
    dim_y: int
    dim_v: int
    dim_ybar: int
    rank_in: int
    rank_out: int
    composite_zero: bool

    @property
    def exact(self) -> bool:
        return (self.composite_zero and self.rank_in == self.dim_x and
                self.rank_out == self.dim_ybar and
                self.dim_y + self.dim_v == self.dim_x + self.dim_ybar)


@dataclass
class GenerationCertificate:
    complex: ProjComplex
    generator: GeneratorZ
    left: List[Tuple[int, int, int]]    # (Z-index, shift in Ybar[-1], multiplicity)
    right: List[Tuple[int, int, int]]   # (Z-index, position, multiplicity) for Y + V
    ybar: List[Tuple[int, int, int]]    # (Z-index, degree, multiplicity)
    y_part: List[Tuple[int, int, int]]
    v_part: List[Tuple[int, int, int]]
    degrees: List[DegreeReport]
    chain_map: bool
    euler_ok: bool

    @property
    def exact(self) -> bool:
        return all(r.exact for r in self.degrees) and self.chain_map

    @property
    def ok(self) -> bool:
        n = len(self.generator.members)
        in_z = all(0 <= k < n for k, _, _ in self.left + self.right)
        return self.exact and in_z and self.euler_ok

    def to_json(self):
        def lst(xs):
            return [{"z": k, "W": list(self.generator.members[k]), "shift": s, "mult": c} for k, s, c in xs]
        return {
            "left": lst(self.left),
            "right": {"Y": lst(self.y_part), "V": lst(self.v_part)},
            "exactness": [{"degree": r.degree, "dim_X": r.dim_x, "dim_Y": r.dim_y, "dim_V": r.dim_v,
                           "dim_Ybar": r.dim_ybar, "rank_in": r.rank_in, "rank_out": r.rank_out,
                           "exact": r.exact} for r in self.degrees],
            "chain_map": self.chain_map,
            "euler": self.euler_ok,
            "ok": self.ok,
        }


def _counted(items) -> List[Tuple[int, int, int]]:
    c = Counter(items)
    return sorted((k, s, n) for (k, s), n in c.items())


def _idem_unit(h) -> tuple:
    i, j, s = h
    return (i, j, s, j, s)


def _h_basis(H: MatrixAlgebra, hs) -> List[int]:
    out = []
    for h in hs:
        out += list(H.cols[H.vertex_of_pos[h]])
    return out


def _degree_maps(A: MatrixAlgebra, H: MatrixAlgebra, x: str):
    """Matrices of P_x -> He_x + Ae_x/rad and He_x + Ae_x/rad -> (H/I)e_x for one generator."""
    f = A.field
    hs = predecessors(A, x)
    pa = list(A.cols[x])
    ph = _h_basis(H, hs)
    top_a = [b for b in pa if not A.is_rad[b]]
    top_h = [H.unit_index[_idem_unit(h)] for h in hs]
    ph_i = {b: n for n, b in enumerate(ph)}
    ta_i = {b: n for n, b in enumerate(top_a)}
    th_i = {b: n for n, b in enumerate(top_h)}
    nmid = len(ph) + len(top_a)
    inc = Matrix.zeros(f, nmid, len(pa))
    for c, b in enumerate(pa):
        for k, v in embed(A, H, {b: f.one}).items():
            inc[ph_i[k], c] = v
        if b in ta_i:
            inc[len(ph) + ta_i[b], c] = f.one
    proj = Matrix.zeros(f, len(top_h), nmid)
    for n, b in enumerate(ph):
        if b in th_i:
            proj[th_i[b], n] = f.one
    for n, b in enumerate(top_a):
        for k, v in embed(A, H, {b: f.one}).items():
            if k in th_i:
                proj[th_i[k], len(ph) + n] = proj[th_i[k], len(ph) + n] - v
    return inc, proj, len(pa), len(ph), len(top_a), len(top_h)


def _chain_map_ok(A: MatrixAlgebra, H: MatrixAlgebra, X: ProjComplex, Y: ProjComplex) -> bool:
    """The inclusion X -> H (x) X commutes with the differentials."""
    f = A.field
    gens = Y.gens
    for r, M in X.diffs.items():
        src, dst = gens[r], gens[r + 1]
        for p, x in enumerate(X.comps[r]):
            for b in A.cols[x]:
                emb = embed(A, H, {b: f.one})
                # image in X then include
                for q in range(len(X.comps[r + 1])):
                    lhs = A.mul({b: f.one}, M[q][p]) if M[q][p] else {}
                    lhs_h = embed(A, H, lhs) if lhs else {}
                    rhs: dict = {}
                    for s, (qq, h2) in enumerate(dst):
                        if qq != q:
                            continue
                        for t, (pp, h1) in enumerate(src):
                            if pp != p or not Y.diffs[r][s][t]:
                                continue
                            part = H.mul(emb, {H.unit_index[_idem_unit(h1)]: f.one})
                            for k, v in H.mul(part, Y.diffs[r][s][t]).items():
                                rhs[k] = rhs.get(k, 0) + v
                    diff = dict(lhs_h)
                    for k, v in rhs.items():
                        diff[k] = diff.get(k, 0) - v
                    if any(v for v in diff.values()):
                        return False
    return True


def generation_certificate(d: Optional[Datum], X: ProjComplex, H: Optional[MatrixAlgebra] = None,
                           Z: Optional[GeneratorZ] = None) -> GenerationCertificate:
    """Witness X in <Z>_2 by the degreewise exact sequence 0 -> X -> Y + V -> Ybar -> 0."""
    A = X.alg
    chk = verify_complex(X)
    if not chk.is_complex:
        raise ComplexError("not a complex")
    if not chk.is_minimal:
        raise ComplexError("generation certificates need a minimal complex")
    if H is None:
        H = build_normalization(d, A.field, check=False)
    if Z is None:
        members = _members(A.m)
        Z = GeneratorZ(tuple(A.m), members, _simple_map(A, members))
    Y = tensor_to_h(A, H, X)
    split = split_H_complex(Y)
    y_items = [(Z.index(S.i, S.a, S.b), S.r) for S in split.summands]
    v_items = [(Z.simples[x][0], r) for r in X.degrees for x in X.comps[r]]
    ybar_items = [(Z.index(h[0], h[1] + 1, h[1]), r) for r in Y.degrees for _, h in Y.gens[r]]
    reports = []
    euler = 0
    for r in X.degrees:
        dx = dy = dv = dyb = rin = rout = 0
        zero = True
        for x in X.comps[r]:
            inc, proj, a, b, c, e = _degree_maps(A, H, x)
            dx, dy, dv, dyb = dx + a, dy + b, dv + c, dyb + e
            rin += inc.rank()
            rout += proj.rank()
            zero = zero and (proj * inc).is_zero()
        reports.append(DegreeReport(r, dx, dy, dv, dyb, rin, rout, zero))
        euler += (-1) ** (r % 2) * (dx - (dy + dv - dyb))
    return GenerationCertificate(
        complex=X, generator=Z,
        left=_counted((k, r + 1) for k, r in ybar_items),
        right=_counted(y_items + v_items),
        ybar=_counted(ybar_items), y_part=_counted(y_items), v_part=_counted(v_items),
        degrees=reports, chain_map=_chain_map_ok(A, H, X, Y), euler_ok=(euler == 0))


# ---------------------------------------------------------------------------
# fat points
# ---------------------------------------------------------------------------

@dataclass
class FatPointProbe:
    n: int
    A: MatrixAlgebra
    H: MatrixAlgebra
    complexes: List[ProjComplex]
    certificates: List[GenerationCertificate]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.certificates)


def fat_point_algebra(n: int, field: Optional[Field] = None):
    """k[e_1..e_n]/(e_1..e_n)^2 inside H = T_2 x ... x T_2."""
    if n < 1:
        raise ValueError("n must be positive")
    field = field or default_field()
    m = (2,) * n
    blown = [frozenset()] * n
    classes = [[(i, j) for i in range(1, n + 1) for j in (1, 2)]]
    A = build_glued_algebra(field, m, blown, classes, "A")
    H = build_hereditary(field, m, blown, "H")
    return A, H


def fat_point_probe(n: int, length: int = 3, field: Optional[Field] = None) -> FatPointProbe:
    """Certificates for the truncated resolutions of the simple module (lengths 0..length)."""
    from .words import projective_resolution
    A, H = fat_point_algebra(n, field)
    v = A.vertices[0]
    full = projective_resolution(A, v, length).complex
    complexes = [_truncate(full, -k) for k in range(length + 1)]
    members = _members(A.m)
    Z = GeneratorZ(tuple(A.m), members, _simple_map(A, members))
    certs = [generation_certificate(None, X, H, Z) for X in complexes]
    return FatPointProbe(n, A, H, complexes, certs)


def _truncate(X: ProjComplex, lo: int) -> ProjComplex:
    comps = {r: v for r, v in X.comps.items() if r >= lo}
    diffs = {r: M for r, M in X.diffs.items() if r >= lo and r + 1 in comps}
    return ProjComplex(X.alg, comps, diffs)

"""Concrete based algebras: the (skew-)gentle algebra A, its hereditary
normalization H and the block algebra B = [[A, H], [I, H]].

Everything lives inside products of (blown-up) lower triangular matrix
algebras.  A matrix unit is a tuple ``(i, a, sa, b, sb)``: chain ``i``, row
position ``a`` with sign ``sa`` and column position ``b`` with sign ``sb``.
Signs are ``"+"``/``"-"`` on blown-up positions and ``""`` elsewhere.  Units
satisfy ``a >= b``.

Convention for projectives: ``P_x = A e_x`` (left modules), and
``Hom(P_x, P_y) = e_x A e_y`` acting by right multiplication.  A basis
element therefore has a *left* vertex (its row) and a *right* vertex (its
column).
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .datum import Datum, build_index_sets, validate_datum
from .exactla import (Echelon, Field, StructureConstantAlgebra, default_field,
                      radical, sparse_nullspace)

Unit = Tuple[int, int, str, int, str]
HPos = Tuple[int, int, str]


class AlgebraError(ValueError):
    pass


def hpos_label(p: HPos) -> str:
    return f"{p[0]}.{p[1]}{p[2]}"


def unit_str(u: Unit) -> str:
    i, a, sa, b, sb = u
    return f"({i},{a}{sa},{b}{sb})"


def _signs(blown, i, a):
    return ("+", "-") if a in blown[i - 1] else ("",)


def hereditary_units(m: Sequence[int], blown) -> List[Unit]:
    units = []
    for i, mi in enumerate(m, 1):
        for a in range(1, mi + 1):
            for b in range(1, a + 1):
                for sa in _signs(blown, i, a):
                    for sb in _signs(blown, i, b):
                        units.append((i, a, sa, b, sb))
    return units


def _hmul(x: dict, y: dict) -> dict:
    """Product of two sparse combinations of matrix units."""
    by_row: Dict[HPos, list] = {}
    for u, c in y.items():
        by_row.setdefault((u[0], u[1], u[2]), []).append((u, c))
    out: dict = {}
    for u, c in x.items():
        for v, d in by_row.get((u[0], u[3], u[4]), ()):
            w = (u[0], u[1], u[2], v[3], v[4])
            out[w] = out.get(w, 0) + c * d
    return {k: v for k, v in out.items() if v}


# ---------------------------------------------------------------------------
# based algebras
# ---------------------------------------------------------------------------

class BasedAlgebra:
    """Finite-dimensional algebra with a distinguished basis.

    Args:
        field: ground field.
        keys: hashable name per basis element.
        table: ``(i, j) -> ((k, c), ...)`` structure constants.
        left, right: vertex label of the row/column idempotent of each element.
        is_rad: whether the basis element lies in the radical.
        idem: vertex label -> index of its primitive idempotent.
        rep: vertex label -> representative of its isomorphism class of
            projectives (only differs for blown-up vertices of H and B).
    """

    def __init__(self, field: Field, name: str, keys, table, left, right, is_rad,
                 idem: Dict[str, int], rep: Optional[Dict[str, str]] = None, names=None):
        self.field = field
        self.name = name
        self.keys = list(keys)
        self.index = {k: n for n, k in enumerate(self.keys)}
        self.table = table
        self.left = list(left)
        self.right = list(right)
        self.is_rad = list(is_rad)
        self.idem = dict(idem)
        self.vertices = list(self.idem)
        self.rep = rep or {v: v for v in self.vertices}
        self.names = names or [str(k) for k in self.keys]
        self.by_ends: Dict[Tuple[str, str], List[int]] = {}
        self.cols: Dict[str, List[int]] = {v: [] for v in self.vertices}
        self.rows: Dict[str, List[int]] = {v: [] for v in self.vertices}
        for n in range(self.dim):
            self.by_ends.setdefault((self.left[n], self.right[n]), []).append(n)
            self.cols[self.right[n]].append(n)
            self.rows[self.left[n]].append(n)
        self._sca = None
        # tables keyed by left factor for module actions
        self.lmul: Dict[int, Dict[int, tuple]] = {}
        for (i, j), prod in table.items():
            self.lmul.setdefault(i, {})[j] = prod

    @property
    def dim(self) -> int:
        return len(self.keys)

    @property
    def unit(self) -> dict:
        one = self.field.one
        return {k: one for k in self.idem.values()}

    @property
    def reps(self) -> List[str]:
        return [v for v in self.vertices if self.rep[v] == v]

    def radical_indices(self) -> List[int]:
        return [n for n in range(self.dim) if self.is_rad[n]]

    def mul(self, x: dict, y: dict) -> dict:
        out: dict = {}
        tab = self.table
        for i, a in x.items():
            for j, b in y.items():
                prod = tab.get((i, j))
                if not prod:
                    continue
                ab = a * b
                for k, c in prod:
                    out[k] = out.get(k, 0) + ab * c
        f = self.field
        return {k: f(v) for k, v in out.items() if v}

    def elem(self, n: int) -> dict:
        return {n: self.field.one}

    def sca(self, check: bool = False) -> StructureConstantAlgebra:
        if self._sca is None:
            table = {k: {kk: c for kk, c in v} for k, v in self.table.items()}
            self._sca = StructureConstantAlgebra(self.field, self.dim, table, self.unit,
                                                 check=check, labels=self.names)
        return self._sca

    def check_associative(self) -> bool:
        try:
            self.sca().check()
        except ValueError:
            return False
        return True

    def top_part(self, x: dict) -> dict:
        """The non-radical part of ``x``."""
        return {k: v for k, v in x.items() if not self.is_rad[k]}

    def in_radical(self, x: dict) -> bool:
        return all(self.is_rad[k] for k, v in x.items() if v)

    def element_str(self, x: dict) -> str:
        if not x:
            return "0"
        parts = []
        for k in sorted(x):
            c = x[k]
            s = self.field.to_str(c)
            parts.append(self.names[k] if s == "1" else f"{s}*{self.names[k]}")
        return " + ".join(parts)

    def __repr__(self):
        return f"<BasedAlgebra {self.name} dim={self.dim} vertices={len(self.vertices)}>"


def hom_projectives(alg: BasedAlgebra, x: str, y: str) -> List[int]:
    """Basis of Hom(P_x, P_y) = e_x A e_y as indices into the algebra basis."""
    if x not in alg.idem or y not in alg.idem:
        raise AlgebraError(f"unknown vertex {x if x not in alg.idem else y!r}")
    return list(alg.by_ends.get((x, y), []))


# ---------------------------------------------------------------------------
# algebras inside products of triangular matrix algebras
# ---------------------------------------------------------------------------

class MatrixAlgebra(BasedAlgebra):
    """A based algebra whose elements are combinations of matrix units.

    ``hvec[n]`` is the matrix-unit expansion of basis element ``n``.
    """

    def __init__(self, field, name, m, blown, hvecs, keys, left, right, is_rad, idem,
                 rep=None, names=None, vertex_of_pos=None, check=True):
        self.m = tuple(m)
        self.blown = tuple(frozenset(b) for b in blown)
        self.hvec = [dict(h) for h in hvecs]
        self.vertex_of_pos = dict(vertex_of_pos or {})
        self._rep_unit = {}
        for n, h in enumerate(self.hvec):
            for u in h:
                if u not in self._rep_unit:
                    self._rep_unit[u] = n
                    break
            else:
                raise AlgebraError("basis elements must have distinct leading units")
        table = {}
        for i, hi in enumerate(self.hvec):
            for j, hj in enumerate(self.hvec):
                if hi and hj:
                    prod = _hmul(hi, hj)
                    if prod:
                        coords = self._coords_raw(prod)
                        if coords is None:
                            raise AlgebraError(f"product of {keys[i]} and {keys[j]} leaves the algebra")
                        table[(i, j)] = tuple(coords.items())
        super().__init__(field, name, keys, table, left, right, is_rad, idem, rep, names)
        self.unit_index = {}
        for n, k in enumerate(self.keys):
            if len(self.hvec[n]) == 1:
                (u,) = self.hvec[n]
                self.unit_index[u] = n
        if check and not self.check_associative():
            raise AlgebraError("multiplication is not associative")

    def _coords_raw(self, hv: dict) -> Optional[dict]:
        out = {}
        for u, c in hv.items():
            n = self._rep_unit.get(u)
            if n is not None:
                out[n] = c * 1 / self.hvec[n][u] if self.hvec[n][u] != 1 else c
        back: dict = {}
        for n, c in out.items():
            for u, d in self.hvec[n].items():
                back[u] = back.get(u, 0) + c * d
        back = {k: v for k, v in back.items() if v}
        if back != {k: v for k, v in hv.items() if v}:
            return None
        return out

    def coords(self, hv: dict) -> Optional[dict]:
        """Coordinates of a combination of matrix units, or None if outside."""
        raw = self._coords_raw(hv)
        if raw is None:
            return None
        return {k: self.field(v) for k, v in raw.items() if v}

    def to_units(self, x: dict) -> dict:
        out: dict = {}
        for n, c in x.items():
            for u, d in self.hvec[n].items():
                out[u] = out.get(u, 0) + c * d
        return {k: v for k, v in out.items() if v}

    def path(self, i, a, b, sa="", sb="") -> int:
        """Index of the basis element equal to the matrix unit E^{(i)}_{a,b}."""
        u = (i, a, sa, b, sb)
        if u not in self.unit_index:
            raise AlgebraError(f"no basis element equals the unit {unit_str(u)}")
        return self.unit_index[u]


def _pos_list(m, blown) -> List[HPos]:
    return [(i, a, s) for i, mi in enumerate(m, 1) for a in range(1, mi + 1) for s in _signs(blown, i, a)]


def build_hereditary(field: Field, m, blown, name="H", check=True) -> MatrixAlgebra:
    """The product of blown-up triangular algebras T_{m_i, Sigma_i}."""
    units = hereditary_units(m, blown)
    hvecs = [{u: 1} for u in units]
    keys = [("p", u) for u in units]
    left = [hpos_label((u[0], u[1], u[2])) for u in units]
    right = [hpos_label((u[0], u[3], u[4])) for u in units]
    is_rad = [u[1] > u[3] for u in units]
    idem = {}
    rep = {}
    for n, u in enumerate(units):
        if u[1] == u[3] and u[2] == u[4]:
            lab = hpos_label((u[0], u[1], u[2]))
            idem[lab] = n
            rep[lab] = hpos_label((u[0], u[1], "+" if u[2] else ""))
    names = ["p" + unit_str(u) if u[1] > u[3] or u[2] != u[4] else "e" + hpos_label(u[:3]) for u in units]
    vop = {p: hpos_label(p) for p in _pos_list(m, blown)}
    return MatrixAlgebra(field, name, m, blown, hvecs, keys, left, right, is_rad, idem,
                         rep, names, vop, check)


def build_glued_algebra(field: Field, m, blown, classes, name="A", check=True) -> MatrixAlgebra:
    """Subalgebra of the hereditary algebra obtained by identifying diagonals.

    Args:
        m: chain lengths.
        blown: per chain, the set of blown-up positions.
        classes: list of tuples of unblown positions ``(i, a)``; the diagonal
            entries inside one class are forced equal.  Every unblown position
            must lie in exactly one class.
    """
    positions = _pos_list(m, blown)
    vop: Dict[HPos, str] = {}
    idem_support: Dict[str, List[HPos]] = {}
    covered = set()
    for cls in classes:
        cls = tuple(sorted(tuple(p) for p in cls))
        label = "~".join(f"{i}.{a}" for i, a in cls)
        idem_support[label] = []
        for i, a in cls:
            if a in blown[i - 1]:
                raise AlgebraError(f"blown position {(i, a)} cannot be glued")
            if (i, a) in covered:
                raise AlgebraError(f"position {(i, a)} in two classes")
            covered.add((i, a))
            vop[(i, a, "")] = label
            idem_support[label].append((i, a, ""))
    for p in positions:
        if p[2]:
            label = hpos_label(p)
            vop[p] = label
            idem_support[label] = [p]
        elif p not in vop:
            raise AlgebraError(f"position {p[:2]} lies in no class")
    hvecs, keys, left, right, is_rad, names = [], [], [], [], [], []
    idem = {}
    for label, sup in sorted(idem_support.items(), key=lambda kv: min(kv[1])):
        idem[label] = len(keys)
        hvecs.append({(i, a, s, a, s): 1 for i, a, s in sup})
        keys.append(("e", label))
        left.append(label)
        right.append(label)
        is_rad.append(False)
        names.append("e" + label)
    for u in hereditary_units(m, blown):
        if u[1] > u[3]:
            hvecs.append({u: 1})
            keys.append(("p", u))
            left.append(vop[u[:3]])
            right.append(vop[(u[0], u[3], u[4])])
            is_rad.append(True)
            names.append("p" + unit_str(u))
    return MatrixAlgebra(field, name, m, blown, hvecs, keys, left, right, is_rad, idem,
                         None, names, vop, check)


def _datum_shape(d: Datum):
    blown = [frozenset(d.blown(i)) for i in range(1, d.t + 1)]
    classes = []
    for x in d.omega:
        y = d.tied(x)
        if y is None:
            classes.append((x,))
        elif y != x and x < y:
            classes.append((x, y))
    return blown, classes


def build_gentle_algebra(d: Datum, field: Optional[Field] = None, check=True) -> MatrixAlgebra:
    """The skew-gentle algebra attached to a datum, as a subalgebra of H."""
    field = field or default_field()
    blown, classes = _datum_shape(d)
    A = build_glued_algebra(field, d.m, blown, classes, "A", check)
    A.datum = d
    A.is_gentle = d.is_gentle
    return A


def build_normalization(d: Datum, field: Optional[Field] = None, check=True) -> MatrixAlgebra:
    """The hereditary normalization H; ``H.embed(A, x)`` gives the inclusion."""
    field = field or default_field()
    blown, _ = _datum_shape(d)
    H = build_hereditary(field, d.m, blown, "H", check)
    H.datum = d
    return H


def embed(A: MatrixAlgebra, H: MatrixAlgebra, x: dict) -> dict:
    """Image of an element of A in H."""
    out = H.coords(A.to_units(x))
    if out is None:
        raise AlgebraError("element does not lie in H")
    return out


def embedding_map(A: MatrixAlgebra, H: MatrixAlgebra) -> List[dict]:
    return [embed(A, H, A.elem(n)) for n in range(A.dim)]


def radical_subspace_matches(alg: BasedAlgebra) -> bool:
    """Compare the trace-form radical with the span of the radical basis elements."""
    rad = radical(alg.sca())
    flagged = alg.radical_indices()
    if len(rad) != len(flagged):
        return False
    ech = Echelon(alg.field)
    for n in flagged:
        ech.insert({n: alg.field.one})
    return all(ech.contains(v) for v in rad)


def radical_power_vanishes(alg: BasedAlgebra, k: int) -> bool:
    """Whether rad^k = 0, tested on products of radical basis elements."""
    rad = alg.radical_indices()
    layer = [{n: alg.field.one} for n in rad]
    for _ in range(k - 1):
        nxt = []
        ech = Echelon(alg.field)
        for x in layer:
            for n in rad:
                y = alg.mul(x, {n: alg.field.one})
                if y and ech.insert(y):
                    nxt.append(y)
        layer = nxt
        if not layer:
            return True
    return not layer


# ---------------------------------------------------------------------------
# the block algebra B
# ---------------------------------------------------------------------------

BLOCKS = ("AA", "AH", "HA", "HH")


class ResolutionAlgebra(BasedAlgebra):
    """B = [[A, H], [I, H]] with I the common radical of A and H."""

    def __init__(self, A: MatrixAlgebra, H: MatrixAlgebra, check=True):
        self.A, self.H = A, H
        field = A.field
        keys, hv, left, right, is_rad, names = [], [], [], [], [], []

        def side_vertex(side, pos):
            return ("A:" + A.vertex_of_pos[pos]) if side == "A" else ("H:" + H.vertex_of_pos[pos])

        for n in range(A.dim):
            keys.append(("AA", n))
            hv.append(A.hvec[n])
            left.append("A:" + A.left[n])
            right.append("A:" + A.right[n])
            is_rad.append(A.is_rad[n])
            names.append("AA:" + A.names[n])
        for blk in ("AH", "HA", "HH"):
            for n in range(H.dim):
                if blk == "HA" and not H.is_rad[n]:
                    continue
                (u,) = H.hvec[n]
                keys.append((blk, n))
                hv.append(H.hvec[n])
                left.append(side_vertex(blk[0], u[:3]))
                right.append(side_vertex(blk[1], (u[0], u[3], u[4])))
                is_rad.append(True if blk in ("AH", "HA") else H.is_rad[n])
                names.append(blk + ":" + H.names[n])
        self.hv = hv
        index = {k: n for n, k in enumerate(keys)}
        table = {}
        for i, (bi, _) in enumerate(keys):
            for j, (bj, _) in enumerate(keys):
                if bi[1] != bj[0]:
                    continue
                prod = _hmul(hv[i], hv[j])
                if not prod:
                    continue
                tgt = bi[0] + bj[1]
                if tgt == "AA":
                    c = A.coords(prod)
                else:
                    c = H.coords(prod)
                if c is None:
                    raise AlgebraError(f"block product {keys[i]}*{keys[j]} leaves {tgt}")
                out = []
                for k, v in c.items():
                    key = (tgt, k)
                    if key not in index:
                        raise AlgebraError(f"block product {keys[i]}*{keys[j]} leaves {tgt}")
                    out.append((index[key], v))
                table[(i, j)] = tuple(out)
        idem = {}
        rep = {}
        for lab, n in A.idem.items():
            idem["A:" + lab] = index[("AA", n)]
            rep["A:" + lab] = "A:" + lab
        for lab, n in H.idem.items():
            idem["H:" + lab] = index[("HH", n)]
            rep["H:" + lab] = "H:" + H.rep[lab]
        super().__init__(field, "B", keys, table, left, right, is_rad, idem, rep, names)
        if check and not self.check_associative():
            raise AlgebraError("block multiplication is not associative")
        self.datum = getattr(A, "datum", None)

    def block_dims(self) -> Dict[str, int]:
        out = {b: 0 for b in BLOCKS}
        for blk, _ in self.keys:
            out[blk] += 1
        return out


def witness_datum(d: Datum) -> Datum:
    """Datum whose algebra realizes B (up to dropping duplicate blown vertices).

    Chain i of length m_i becomes a chain of length 2 m_i; the A-side copy of
    position j sits at 2j and the H-side copy at 2j - 1.
    """
    m2 = [2 * mi for mi in d.m]
    rels = [((x[0], 2 * x[1]), (y[0], 2 * y[1])) for x, y in d.relations]
    return validate_datum(m2, rels)


@dataclass
class WitnessReport:
    datum: Datum
    gentle: bool
    matches: bool
    dropped: List[str] = dc_field(default_factory=list)
    reason: str = ""


def check_witness(B: ResolutionAlgebra) -> WitnessReport:
    """Compare B with the algebra of its witness datum.

    For gentle input the comparison is a basis bijection preserving the
    multiplication table.  With self-equivalences, B is not basic: the
    H-side projectives at ``(i, j)+`` and ``(i, j)-`` coincide, so the check
    runs on the corner algebra that keeps only the ``+`` copy.
    """
    d = B.datum
    if d is None:
        raise AlgebraError("B was not built from a datum")
    wd = witness_datum(d)
    W = build_gentle_algebra(wd, B.field, check=False)
    dropped = sorted(v for v in B.vertices if v.startswith("H:") and v.endswith("-"))
    keep = [n for n in range(B.dim) if B.left[n] not in dropped and B.right[n] not in dropped]

    def mpos(side, p):
        i, a, s = p
        if side == "A":
            return (i, 2 * a, s)
        return (i, 2 * a - 1, "")

    image = {}
    for n in keep:
        blk = B.keys[n][0]
        hv = {}
        for u, c in B.hv[n].items():
            r = mpos(blk[0], u[:3])
            col = mpos(blk[1], (u[0], u[3], u[4]))
            hv[(u[0], r[1], r[2], col[1], col[2])] = c
        co = W.coords(hv)
        if co is None or len(co) != 1 or list(co.values())[0] != 1:
            return WitnessReport(wd, wd.is_gentle, False, dropped, f"{B.names[n]} has no matching basis element")
        image[n] = next(iter(co))
    if len(set(image.values())) != len(image) or len(image) != W.dim:
        return WitnessReport(wd, wd.is_gentle, False, dropped, "basis sizes differ")
    keepset = set(keep)
    for i in keep:
        for j in keep:
            prod = {k: c for k, c in B.table.get((i, j), ())}
            if any(k not in keepset for k in prod):
                return WitnessReport(wd, wd.is_gentle, False, dropped, "corner not closed")
            mapped = {image[k]: B.field(c) for k, c in prod.items()}
            other = {k: B.field(c) for k, c in W.table.get((image[i], image[j]), ())}
            if mapped != other:
                return WitnessReport(wd, wd.is_gentle, False, dropped,
                                     f"products differ at {B.names[i]}*{B.names[j]}")
    return WitnessReport(wd, wd.is_gentle, True, dropped)


def build_resolution_algebra(A: MatrixAlgebra, H: MatrixAlgebra, check=True) -> ResolutionAlgebra:
    """Build B and, when a datum is attached, verify it against its witness datum."""
    B = ResolutionAlgebra(A, H, check=check)
    if check and B.datum is not None:
        rep = check_witness(B)
        if not rep.matches:
            raise AlgebraError("B does not match its witness datum: " + rep.reason)
        B.witness = rep
    return B


def algebras_of(d: Datum, field: Optional[Field] = None, with_b: bool = False):
    """Convenience: (A, H) or (A, H, B) for a datum."""
    A = build_gentle_algebra(d, field)
    H = build_normalization(d, A.field)
    if with_b:
        return A, H, build_resolution_algebra(A, H)
    return A, H


# ---------------------------------------------------------------------------
# quiver
# ---------------------------------------------------------------------------

def quiver_arrows(alg: BasedAlgebra) -> List[Tuple[str, str, int]]:
    """Arrows as (tail, head, basis index): a basis of rad / rad^2.

    A basis element with row vertex x and column vertex y is drawn as an
    arrow y -> x, matching the orientation 1 -> 2 -> ... -> m of a chain.
    """
    one = alg.field.one
    rad = alg.radical_indices()
    sq = Echelon(alg.field)
    for i in rad:
        for j in rad:
            prod = alg.table.get((i, j))
            if prod:
                sq.insert({k: c for k, c in prod})
    arrows = []
    for n in rad:
        if sq.insert({n: one}):
            arrows.append((alg.right[n], alg.left[n], n))
    return arrows


def _dot_id(s: str) -> str:
    return '"' + s.replace('"', '\\"') + '"'


def quiver_dot(alg: MatrixAlgebra) -> str:
    lines = [f"digraph {alg.name} {{"]
    for v in alg.vertices:
        lines.append(f"  {_dot_id(v)};")
    for tail, head, n in quiver_arrows(alg):
        (u,) = alg.hvec[n]
        lab = unit_str(u)
        lines.append(f"  {_dot_id(tail)} -> {_dot_id(head)} [label={_dot_id(lab)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# modules: minimal projective resolutions
# ---------------------------------------------------------------------------

def act(alg: BasedAlgebra, a: int, vec: dict) -> dict:
    """Left action of the basis element ``a`` on a vector of a free module.

    Vectors are sparse dicts keyed by ``(summand, basis index)``.
    """
    row = alg.lmul.get(a)
    if not row:
        return {}
    out: dict = {}
    for (c, b), v in vec.items():
        prod = row.get(b)
        if prod:
            for k, coef in prod:
                key = (c, k)
                out[key] = out.get(key, 0) + v * coef
    return {k: v for k, v in out.items() if v}


def top_generators(alg: BasedAlgebra, K: List[dict]) -> List[Tuple[str, dict]]:
    """Minimal generators of the submodule spanned by ``K`` (closed under A)."""
    radk = Echelon(alg.field)
    rad = alg.radical_indices()
    for k in K:
        for r in rad:
            v = act(alg, r, k)
            if v:
                radk.insert(v)
    gens = []
    for x in alg.reps:
        e = alg.idem[x]
        for k in K:
            v = act(alg, e, k)
            if v and radk.insert(v):
                gens.append((x, {kk: alg.field(vv) for kk, vv in v.items()}))
    return gens


def cover_kernel(alg: BasedAlgebra, gens: List[Tuple[str, dict]]) -> List[dict]:
    """Kernel of the projective cover map sum_q P_{x_q} -> F defined by ``gens``."""
    eqs: Dict[tuple, dict] = {}
    cols = []
    for q, (x, g) in enumerate(gens):
        for b in alg.cols[x]:
            cols.append((q, b))
            for key, v in act(alg, b, g).items():
                eqs.setdefault(key, {})[(q, b)] = v
    return sparse_nullspace(alg.field, eqs.values(), cols)


@dataclass
class Resolution:
    """Minimal projective resolution ... -> P_1 -> P_0 of a simple module.

    ``terms[k]`` lists the vertices of P_k.  ``maps[k]`` is the matrix of
    P_{k+1} -> P_k: ``maps[k][c][q]`` is an element of e_{x_q} A e_{y_c}.
    """

    vertex: str
    terms: List[List[str]]
    maps: List[List[List[dict]]]
    terminated: bool

    @property
    def length(self) -> Optional[int]:
        return len(self.terms) - 1 if self.terminated else None


def minimal_resolution(alg: BasedAlgebra, x: str, N: int) -> Resolution:
    """Resolve the simple at ``x`` up to P_N by iterated projective covers."""
    one = alg.field.one
    K = [{(0, b): one} for b in alg.cols[x] if alg.is_rad[b]]
    # the radical basis vectors of P_x span a submodule already
    terms = [[x]]
    maps = []
    terminated = not K
    while not terminated and len(terms) <= N:
        gens = top_generators(alg, K)
        terms.append([v for v, _ in gens])
        prev = len(terms[-2])
        mat = [[{} for _ in gens] for _ in range(prev)]
        for q, (_, g) in enumerate(gens):
            for (c, b), v in g.items():
                mat[c][q][b] = v
        maps.append(mat)
        K = cover_kernel(alg, gens)
        terminated = not K
    return Resolution(x, terms, maps, terminated)


def global_dimension(alg: BasedAlgebra, N: int) -> Optional[int]:
    """Global dimension if every simple is resolved within N steps, else None."""
    best = 0
    for x in alg.reps:
        res = minimal_resolution(alg, x, N)
        if not res.terminated:
            return None
        best = max(best, res.length)
    return best

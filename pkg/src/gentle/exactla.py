"""Exact scalar fields, sparse Gaussian elimination and finite-dimensional algebras.

Two ground fields are supported: the rationals (backed by ``gmpy2.mpq``) and
prime fields F_p.  Vectors inside the elimination engine are sparse dicts
``{column: value}``; the dense :class:`Matrix` type is a thin convenience
layer used for small blocks.
"""
from __future__ import annotations

import os
import random
from typing import Dict, Iterable, List, Optional, Sequence

import gmpy2
from gmpy2 import mpq

SparseVec = Dict[object, object]


class FieldError(ValueError):
    pass


class UnsupportedCharacteristic(FieldError):
    pass


class SplitFailure(RuntimeError):
    """Raised when a semisimple quotient cannot be split over the prime field."""


# ---------------------------------------------------------------------------
# fields
# ---------------------------------------------------------------------------

class Fp:
    """Element of a prime field, stored as a reduced residue."""

    __slots__ = ("v", "p")

    def __init__(self, v, p):
        self.p = p
        self.v = int(v) % p

    def _coerce(self, other):
        if isinstance(other, Fp):
            if other.p != self.p:
                raise FieldError("mixing different prime fields")
            return other.v
        if isinstance(other, int):
            return other % self.p
        if isinstance(other, type(mpq())):
            if other.denominator % self.p == 0:
                raise ZeroDivisionError("denominator divisible by p")
            return int(other.numerator) * pow(int(other.denominator), -1, self.p) % self.p
        return NotImplemented

    def __add__(self, o):
        w = self._coerce(o)
        return NotImplemented if w is NotImplemented else Fp(self.v + w, self.p)

    __radd__ = __add__

    def __sub__(self, o):
        w = self._coerce(o)
        return NotImplemented if w is NotImplemented else Fp(self.v - w, self.p)

    def __rsub__(self, o):
        w = self._coerce(o)
        return NotImplemented if w is NotImplemented else Fp(w - self.v, self.p)

    def __mul__(self, o):
        w = self._coerce(o)
        return NotImplemented if w is NotImplemented else Fp(self.v * w, self.p)

    __rmul__ = __mul__

    def __truediv__(self, o):
        w = self._coerce(o)
        if w is NotImplemented:
            return w
        if w == 0:
            raise ZeroDivisionError("division by zero in F_p")
        return Fp(self.v * pow(w, -1, self.p), self.p)

    def __rtruediv__(self, o):
        w = self._coerce(o)
        if w is NotImplemented:
            return w
        if self.v == 0:
            raise ZeroDivisionError("division by zero in F_p")
        return Fp(w * pow(self.v, -1, self.p), self.p)

    def __neg__(self):
        return Fp(-self.v, self.p)

    def __pow__(self, n):
        if n < 0:
            return Fp(pow(pow(self.v, -1, self.p), -n, self.p), self.p)
        return Fp(pow(self.v, n, self.p), self.p)

    def __eq__(self, o):
        w = self._coerce(o)
        if w is NotImplemented:
            return False
        return self.v == w

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return f"{self.v} mod {self.p}"

    def __str__(self):
        return str(self.v)


def _is_prime(n: int) -> bool:
    return n >= 2 and bool(gmpy2.is_prime(n, 40))


class Field:
    """Base class; concrete fields are :data:`QQ` and :class:`PrimeField`."""

    characteristic = 0
    name = "?"

    def __call__(self, x):
        raise NotImplementedError

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def parse(self, text: str):
        raise NotImplementedError

    def random(self, rng: random.Random, bound: int = 5):
        return self(rng.randint(-bound, bound))

    def random_nonzero(self, rng: random.Random, bound: int = 5):
        while True:
            x = self.random(rng, bound)
            if x != 0:
                return x

    def to_str(self, x) -> str:
        return str(x)


class RationalField(Field):
    characteristic = 0
    name = "Q"

    def __call__(self, x):
        if isinstance(x, Fp):
            raise FieldError("cannot embed F_p element in Q")
        if isinstance(x, str):
            return self.parse(x)
        return mpq(x)

    def parse(self, text: str):
        text = str(text).strip()
        try:
            if "." in text and "/" not in text:
                from fractions import Fraction
                f = Fraction(text)
                return mpq(f.numerator, f.denominator)
            return mpq(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise FieldError(f"not a rational number: {text!r}") from exc

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "QQ"


class PrimeField(Field):
    def __init__(self, p: int):
        if not _is_prime(p) or p >= 2 ** 31:
            raise FieldError(f"{p} is not a prime below 2^31")
        self.p = p
        self.characteristic = p
        self.name = f"Fp:{p}"

    def __call__(self, x):
        if isinstance(x, Fp):
            if x.p != self.p:
                raise FieldError("mixing different prime fields")
            return x
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, int):
            return Fp(x, self.p)
        q = mpq(x)
        if q.denominator % self.p == 0:
            raise FieldError(f"{x} has no residue mod {self.p}")
        return Fp(int(q.numerator) * pow(int(q.denominator), -1, self.p), self.p)

    def parse(self, text: str):
        try:
            return self(mpq(str(text).strip()))
        except ValueError as exc:
            raise FieldError(f"not a residue: {text!r}") from exc

    def random(self, rng, bound=5):
        return Fp(rng.randrange(self.p) if bound is None else rng.randint(-bound, bound), self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def __repr__(self):
        return f"GF({self.p})"


QQ = RationalField()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_from_spec(spec: Optional[str]) -> Field:
    """Parse ``"Q"`` or ``"Fp:<p>"``."""
    if spec is None or spec.strip() in ("", "Q", "QQ"):
        return QQ
    spec = spec.strip()
    if spec.startswith("Fp:"):
        try:
            p = int(spec[3:])
        except ValueError as exc:
            raise FieldError(f"bad field spec {spec!r}") from exc
        return PrimeField(p)
    raise FieldError(f"bad field spec {spec!r}")


def default_field() -> Field:
    return field_from_spec(os.environ.get("GENTLE_FIELD"))


# ---------------------------------------------------------------------------
# sparse elimination
# ---------------------------------------------------------------------------

class Echelon:
    """Incrementally maintained reduced echelon basis of a span of sparse vectors.

    Values are kept raw (``mpq`` or ``int`` residues) for speed.  When
    ``track`` is set, every stored row remembers which combination of the
    inserted vectors produced it, which gives coordinates in that basis.
    """

    def __init__(self, field: Field, track: bool = False):
        self.field = field
        self.p = field.characteristic or None
        self.rows: Dict[object, dict] = {}
        self.tags: Dict[object, dict] = {}
        self.track = track
        self.count = 0

    # raw conversions
    def raw(self, x):
        if self.p:
            return x.v if isinstance(x, Fp) else int(x) % self.p
        return x if type(x) is type(mpq()) else mpq(x)

    def cook(self, r):
        return Fp(r, self.p) if self.p else r

    def _raw_vec(self, vec: SparseVec) -> dict:
        out = {}
        for k, v in vec.items():
            r = self.raw(v)
            if r:
                out[k] = r
        return out

    def _reduce_raw(self, w: dict, tag: Optional[dict]):
        p = self.p
        rows = self.rows
        for c in [c for c in w if c in rows]:
            f = w.get(c)
            if not f:
                continue
            row = rows[c]
            for k, v in row.items():
                nv = w.get(k, 0) - f * v
                if p:
                    nv %= p
                if nv:
                    w[k] = nv
                else:
                    w.pop(k, None)
            if tag is not None:
                for k, v in self.tags[c].items():
                    nv = tag.get(k, 0) - f * v
                    if p:
                        nv %= p
                    if nv:
                        tag[k] = nv
                    else:
                        tag.pop(k, None)
        return w, tag

    def reduce(self, vec: SparseVec) -> SparseVec:
        w, _ = self._reduce_raw(self._raw_vec(vec), None)
        return {k: self.cook(v) for k, v in w.items()}

    def contains(self, vec: SparseVec) -> bool:
        w, _ = self._reduce_raw(self._raw_vec(vec), None)
        return not w

    def insert(self, vec: SparseVec, key=None) -> bool:
        """Add a vector; returns True when it enlarged the span."""
        idx = self.count if key is None else key
        self.count += 1
        tag = {idx: 1} if self.track else None
        w, tag = self._reduce_raw(self._raw_vec(vec), tag)
        if not w:
            return False
        p = self.p
        c = min(w, key=_sort_key)
        inv = pow(w[c], -1, p) if p else 1 / w[c]
        w = {k: (v * inv % p if p else v * inv) for k, v in w.items()}
        if tag is not None:
            tag = {k: (v * inv % p if p else v * inv) for k, v in tag.items()}
        for c2, row in self.rows.items():
            f = row.get(c)
            if not f:
                continue
            for k, v in w.items():
                nv = row.get(k, 0) - f * v
                if p:
                    nv %= p
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
            if tag is not None:
                t2 = self.tags[c2]
                for k, v in tag.items():
                    nv = t2.get(k, 0) - f * v
                    if p:
                        nv %= p
                    if nv:
                        t2[k] = nv
                    else:
                        t2.pop(k, None)
        self.rows[c] = w
        if tag is not None:
            self.tags[c] = tag
        return True

    def coords(self, vec: SparseVec) -> Optional[SparseVec]:
        """Coefficients expressing ``vec`` through the inserted vectors (tracking mode)."""
        if not self.track:
            raise ValueError("coords needs a tracking echelon")
        w = self._raw_vec(vec)
        out: dict = {}
        w, _ = self._reduce_with_coords(w, out)
        if w:
            return None
        return {k: self.cook(v) for k, v in out.items() if v}

    def _reduce_with_coords(self, w, out):
        p = self.p
        rows = self.rows
        for c in [c for c in w if c in rows]:
            f = w.get(c)
            if not f:
                continue
            for k, v in rows[c].items():
                nv = w.get(k, 0) - f * v
                if p:
                    nv %= p
                if nv:
                    w[k] = nv
                else:
                    w.pop(k, None)
            for k, v in self.tags[c].items():
                nv = out.get(k, 0) + f * v
                if p:
                    nv %= p
                out[k] = nv
        return w, out

    @property
    def rank(self) -> int:
        return len(self.rows)

    def pivots(self):
        return sorted(self.rows, key=_sort_key)

    def basis(self) -> List[SparseVec]:
        return [{k: self.cook(v) for k, v in self.rows[c].items()} for c in self.pivots()]


def _sort_key(c):
    if isinstance(c, int):
        return (0, c)
    if isinstance(c, tuple):
        return (1, c)
    return (2, repr(c))


def sparse_nullspace(field: Field, rows: Iterable[SparseVec], columns: Sequence) -> List[SparseVec]:
    """Basis of {x : row . x = 0 for every row}, with x indexed by ``columns``."""
    ech = Echelon(field)
    for r in rows:
        ech.insert(r)
    piv = ech.rows
    free = [c for c in columns if c not in piv]
    one = field.one
    out = []
    for f in free:
        vec = {f: one}
        for c, row in piv.items():
            v = row.get(f)
            if v:
                vec[c] = -ech.cook(v)
        out.append(vec)
    return out


def sparse_rank(field: Field, vecs: Iterable[SparseVec]) -> int:
    ech = Echelon(field)
    for v in vecs:
        ech.insert(v)
    return ech.rank


# ---------------------------------------------------------------------------
# dense matrices
# ---------------------------------------------------------------------------

class Matrix:
    """Dense matrix with exact entries; ``rows`` is a list of lists."""

    __slots__ = ("field", "rows", "ncols")

    def __init__(self, field: Field, rows, ncols: Optional[int] = None):
        self.field = field
        self.rows = [[field(x) for x in r] for r in rows]
        if ncols is None:
            ncols = len(self.rows[0]) if self.rows else 0
        for r in self.rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix")
        self.ncols = ncols

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    @classmethod
    def zeros(cls, field, n, m):
        return cls(field, [[0] * m for _ in range(n)], m)

    @classmethod
    def identity(cls, field, n):
        return cls(field, [[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def jordan(cls, field, n, ev):
        """Lower-triangular Jordan block: ``ev`` on the diagonal, ones just below."""
        rows = [[0] * n for _ in range(n)]
        for i in range(n):
            rows[i][i] = ev
            if i + 1 < n:
                rows[i + 1][i] = 1
        return cls(field, rows, n)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __setitem__(self, ij, v):
        i, j = ij
        self.rows[i][j] = self.field(v)

    def copy(self):
        return Matrix(self.field, [r[:] for r in self.rows], self.ncols)

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.shape == other.shape and all(
            a == b for r1, r2 in zip(self.rows, other.rows) for a, b in zip(r1, r2))

    def __hash__(self):
        return hash(tuple(tuple(str(x) for x in r) for r in self.rows))

    def __add__(self, o):
        if self.shape != o.shape:
            raise ValueError("shape mismatch")
        return Matrix(self.field, [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, o.rows)], self.ncols)

    def __sub__(self, o):
        if self.shape != o.shape:
            raise ValueError("shape mismatch")
        return Matrix(self.field, [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, o.rows)], self.ncols)

    def __neg__(self):
        return Matrix(self.field, [[-a for a in r] for r in self.rows], self.ncols)

    def scale(self, c):
        c = self.field(c)
        return Matrix(self.field, [[c * a for a in r] for r in self.rows], self.ncols)

    def __mul__(self, o):
        if isinstance(o, Matrix):
            if self.ncols != o.nrows:
                raise ValueError(f"shape mismatch {self.shape} * {o.shape}")
            cols = list(zip(*o.rows)) if o.rows else [()] * o.ncols
            zero = self.field.zero
            out = []
            for r in self.rows:
                nz = [(k, a) for k, a in enumerate(r) if a]
                row = []
                for j in range(o.ncols):
                    s = zero
                    col = o.rows
                    for k, a in nz:
                        b = col[k][j]
                        if b:
                            s = s + a * b
                    row.append(s)
                out.append(row)
            return Matrix(self.field, out, o.ncols)
        return self.scale(o)

    def transpose(self):
        return Matrix(self.field, [list(c) for c in zip(*self.rows)] if self.rows else [], self.nrows)

    T = property(transpose)

    def is_zero(self) -> bool:
        return all(not a for r in self.rows for a in r)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]):
        return Matrix(self.field, [[self.rows[i][j] for j in cols] for i in rows], len(cols))

    def column(self, j):
        return [r[j] for r in self.rows]

    def sparse_rows(self) -> List[SparseVec]:
        return [{j: a for j, a in enumerate(r) if a} for r in self.rows]

    def rank(self) -> int:
        return sparse_rank(self.field, self.sparse_rows())

    def inverse(self) -> "Matrix":
        if self.nrows != self.ncols:
            raise ValueError("inverse of a non-square matrix")
        x = solve_linear(self, Matrix.identity(self.field, self.nrows))
        if x is None:
            raise ZeroDivisionError("singular matrix")
        return x

    def is_invertible(self) -> bool:
        return self.nrows == self.ncols and self.rank() == self.nrows

    def is_permutation(self) -> bool:
        if self.nrows != self.ncols:
            return False
        for r in self.rows:
            nz = [a for a in r if a]
            if len(nz) != 1 or nz[0] != 1:
                return False
        return all(sum(1 for r in self.rows if r[j]) == 1 for j in range(self.ncols))

    def to_str_rows(self):
        return [[self.field.to_str(a) for a in r] for r in self.rows]

    def __repr__(self):
        return f"Matrix({self.to_str_rows()})"

    @staticmethod
    def block(field, blocks):
        """Assemble from a 2d list of matrices (``None`` means zero of the inferred shape)."""
        heights = []
        for brow in blocks:
            h = next((b.nrows for b in brow if b is not None), 0)
            heights.append(h)
        widths = []
        for j in range(len(blocks[0]) if blocks else 0):
            w = next((brow[j].ncols for brow in blocks if brow[j] is not None), 0)
            widths.append(w)
        rows = []
        for bi, brow in enumerate(blocks):
            for i in range(heights[bi]):
                row = []
                for bj, b in enumerate(brow):
                    row.extend(b.rows[i] if b is not None else [0] * widths[bj])
                rows.append(row)
        return Matrix(field, rows, sum(widths))


def rank(M: Matrix) -> int:
    return M.rank()


def kernel_basis(A: Matrix) -> Matrix:
    """Matrix whose columns form a basis of ker(A)."""
    vecs = sparse_nullspace(A.field, A.sparse_rows(), list(range(A.ncols)))
    cols = [[v.get(j, 0) for j in range(A.ncols)] for v in vecs]
    M = Matrix(A.field, [list(r) for r in zip(*cols)], len(cols)) if cols else Matrix(
        A.field, [[] for _ in range(A.ncols)], 0)
    return M


def solve_linear(A: Matrix, b: Matrix) -> Optional[Matrix]:
    """Some x with A x = b, or None when inconsistent."""
    if A.nrows != b.nrows:
        raise ValueError("dimension mismatch in solve_linear")
    n = A.ncols
    ech = Echelon(A.field)
    for ra, rb in zip(A.rows, b.rows):
        row = {j: a for j, a in enumerate(ra) if a}
        for k, v in enumerate(rb):
            if v:
                row[("rhs", k)] = v
        ech.insert(row)
    for c in ech.rows:
        if not isinstance(c, int):
            return None
    zero = A.field.zero
    x = [[zero] * b.ncols for _ in range(n)]
    for c, row in ech.rows.items():
        for k in range(b.ncols):
            v = row.get(("rhs", k))
            if v:
                x[c][k] = ech.cook(v)
    return Matrix(A.field, x, b.ncols)


# ---------------------------------------------------------------------------
# structure constant algebras
# ---------------------------------------------------------------------------

class StructureConstantAlgebra:
    """Finite-dimensional unital algebra given by structure constants.

    ``table[(i, j)]`` is a sparse dict describing ``b_i * b_j``; missing
    keys mean zero.  Elements are sparse dicts ``{index: coefficient}``.
    """

    def __init__(self, field: Field, dim: int, table: Dict, unit: SparseVec,
                 check: bool = True, labels=None):
        self.field = field
        self.dim = dim
        self.table = {k: {i: field(c) for i, c in v.items() if c} for k, v in table.items()}
        self.table = {k: v for k, v in self.table.items() if v}
        self.unit = {i: field(c) for i, c in unit.items() if c}
        self.labels = labels if labels is not None else list(range(dim))
        if check:
            self.check()

    def mul(self, x: SparseVec, y: SparseVec) -> SparseVec:
        out: dict = {}
        tab = self.table
        for i, a in x.items():
            for j, b in y.items():
                prod = tab.get((i, j))
                if not prod:
                    continue
                ab = a * b
                for k, c in prod.items():
                    out[k] = out.get(k, 0) + ab * c
        return {k: v for k, v in out.items() if v}

    def add(self, x, y, cy=1):
        out = dict(x)
        for k, v in y.items():
            out[k] = out.get(k, 0) + cy * v
        return {k: v for k, v in out.items() if v}

    def scale(self, x, c):
        return {k: c * v for k, v in x.items() if c * v}

    def basis_vec(self, i):
        return {i: self.field.one}

    def check(self):
        one = self.field.one
        for i in range(self.dim):
            e = {i: one}
            if self.mul(self.unit, e) != _clean(e) or self.mul(e, self.unit) != _clean(e):
                raise ValueError(f"unit fails on basis element {i}")
        for i in range(self.dim):
            for j in range(self.dim):
                ij = self.table.get((i, j))
                if not ij:
                    # (b_i b_j) b_k = 0 must match b_i (b_j b_k)
                    for k in range(self.dim):
                        jk = self.table.get((j, k))
                        if jk and self.mul({i: one}, jk):
                            raise ValueError(f"associativity fails at {(i, j, k)}")
                    continue
                for k in range(self.dim):
                    left = self.mul(ij, {k: one})
                    right = self.mul({i: one}, self.table.get((j, k), {}))
                    if left != right:
                        raise ValueError(f"associativity fails at {(i, j, k)}")

    def left_matrix(self, x: SparseVec) -> List[SparseVec]:
        """Rows of the matrix of left multiplication by ``x`` (row k = coefficient k)."""
        rows: List[dict] = [dict() for _ in range(self.dim)]
        for j in range(self.dim):
            prod = self.mul(x, {j: self.field.one})
            for k, v in prod.items():
                rows[k][j] = v
        return rows

    def power(self, x, n):
        out = dict(self.unit)
        for _ in range(n):
            out = self.mul(out, x)
        return out

    def is_idempotent(self, x) -> bool:
        return self.mul(x, x) == _clean(x)


def _clean(x):
    return {k: v for k, v in x.items() if v}


def radical(E: StructureConstantAlgebra) -> List[SparseVec]:
    """Basis of the Jacobson radical via the trace form."""
    p = E.field.characteristic
    if p and p <= E.dim:
        raise UnsupportedCharacteristic(
            f"trace-form radical needs p > dim (p={p}, dim={E.dim})")
    tr = [E.field.zero] * E.dim
    for (i, j), prod in E.table.items():
        c = prod.get(j)
        if c:
            tr[i] = tr[i] + c
    rows = []
    for x in range(E.dim):
        row = {}
        for y in range(E.dim):
            prod = E.table.get((x, y))
            if not prod:
                continue
            s = 0
            for k, c in prod.items():
                if tr[k]:
                    s = s + c * tr[k]
            if s:
                row[y] = s
        rows.append(row)
    return sparse_nullspace(E.field, rows, list(range(E.dim)))


class Quotient:
    """Quotient of an algebra by a two-sided ideal, with projection and lift."""

    def __init__(self, E: StructureConstantAlgebra, ideal: List[SparseVec]):
        self.E = E
        self.ideal = Echelon(E.field)
        for v in ideal:
            self.ideal.insert(v)
        self.keep = [i for i in range(E.dim) if i not in self.ideal.rows]
        self.pos = {c: n for n, c in enumerate(self.keep)}
        one = E.field.one
        table = {}
        for a, ia in enumerate(self.keep):
            for b, ib in enumerate(self.keep):
                prod = E.table.get((ia, ib))
                if prod:
                    pr = self.project(prod)
                    if pr:
                        table[(a, b)] = pr
        self.S = StructureConstantAlgebra(E.field, len(self.keep), table, self.project(E.unit), check=False)

    def project(self, x: SparseVec) -> SparseVec:
        r = self.ideal.reduce(x)
        return {self.pos[k]: v for k, v in r.items()}

    def lift(self, y: SparseVec) -> SparseVec:
        return {self.keep[k]: v for k, v in y.items()}


def _min_poly(S: StructureConstantAlgebra, x: SparseVec):
    """Coefficients c_0..c_d (monic) of the minimal polynomial of ``x``."""
    ech = Echelon(S.field, track=True)
    powers = [dict(S.unit)]
    ech.insert(powers[0], key=0)
    d = 0
    while True:
        d += 1
        nxt = S.mul(powers[-1], x)
        co = ech.coords(nxt)
        if co is not None:
            coeffs = [-(co.get(i, S.field.zero)) for i in range(d)] + [S.field.one]
            return coeffs, powers
        powers.append(nxt)
        ech.insert(nxt, key=d)


def _factor(field: Field, coeffs):
    import sympy
    t = sympy.Symbol("t")
    if field.characteristic:
        cs = [int(c.v) for c in reversed(coeffs)]
        poly = sympy.Poly(cs, t, modulus=field.characteristic)
    else:
        cs = [sympy.Rational(int(c.numerator), int(c.denominator)) for c in reversed(coeffs)]
        poly = sympy.Poly(cs, t, domain=sympy.QQ)
    _, facs = poly.factor_list()
    out = []
    for f, _mult in facs:
        fc = f.all_coeffs()
        lead = fc[0]
        if field.characteristic:
            vals = [field(int(c)) for c in fc]
        else:
            vals = [field(mpq(int(sympy.Rational(c).p), int(sympy.Rational(c).q))) for c in fc]
        lead = vals[0]
        out.append([v / lead for v in reversed(vals)])
    return out


def _eval_poly(S, coeffs, powers):
    out: dict = {}
    for c, pw in zip(coeffs, powers):
        if c:
            out = S.add(out, pw, c)
    return out


def _zero_divisor(S: StructureConstantAlgebra, x: SparseVec):
    if not x:
        return None
    rows = S.left_matrix(x)
    if sparse_rank(S.field, rows) < S.dim:
        return x
    coeffs, powers = _min_poly(S, x)
    if len(coeffs) <= 2:
        return None
    facs = _factor(S.field, coeffs)
    if len(facs) < 2:
        return None
    g = facs[0]
    powers_full = list(powers)
    while len(powers_full) < len(g):
        powers_full.append(S.mul(powers_full[-1], x))
    y = _eval_poly(S, g, powers_full)
    return y or None


def _idempotent_from_zero_divisor(S: StructureConstantAlgebra, y: SparseVec):
    """Right identity of the left ideal S*y (an idempotent generator)."""
    ech = Echelon(S.field)
    J = []
    for i in range(S.dim):
        v = S.mul({i: S.field.one}, y)
        if ech.insert(v):
            J.append(v)
    # unknown e = sum c_l J_l ; equations J_k * e = J_k
    cols = list(range(len(J)))
    eqs: Dict[tuple, dict] = {}
    for k, jk in enumerate(J):
        for l, jl in enumerate(J):
            prod = S.mul(jk, jl)
            for idx, v in prod.items():
                eqs.setdefault((k, idx), {})[l] = v
        for idx, v in jk.items():
            eqs.setdefault((k, idx), {})[("rhs",)] = v
    ech2 = Echelon(S.field)
    for row in eqs.values():
        ech2.insert(row)
    if ("rhs",) in ech2.rows:
        return None
    e: dict = {}
    for c, row in ech2.rows.items():
        v = row.get(("rhs",))
        if v:
            e = S.add(e, J[c], ech2.cook(v))
    return e


def split_semisimple(S: StructureConstantAlgebra, seed: int = 0) -> Optional[SparseVec]:
    """A nontrivial idempotent of a semisimple algebra, or None when dim S <= 1."""
    if S.dim <= 1:
        return None
    one = S.field.one
    unit_ech = Echelon(S.field)
    unit_ech.insert(S.unit)
    cands = [{i: one} for i in range(S.dim)]
    cands += [{i: one, j: one} for i in range(S.dim) for j in range(i + 1, S.dim)]
    rng = random.Random(seed)
    for _ in range(20):
        cands.append({i: S.field.random(rng, 7) for i in range(S.dim)})
    for x in cands:
        x = _clean(x)
        if not x or unit_ech.contains(x):
            continue
        y = _zero_divisor(S, x)
        if y is None:
            continue
        e = _idempotent_from_zero_divisor(S, y)
        if e and e != _clean(S.unit) and S.is_idempotent(e):
            return e
    raise SplitFailure("semisimple quotient does not split over the prime field")


def lift_idempotent(E: StructureConstantAlgebra, e: SparseVec, max_steps: int = 64) -> SparseVec:
    """Newton iteration e <- 3e^2 - 2e^3 until exactly idempotent."""
    for _ in range(max_steps):
        e2 = E.mul(e, e)
        if e2 == _clean(e):
            return e
        e3 = E.mul(e2, e)
        e = E.add(E.scale(e2, E.field(3)), e3, E.field(-2))
    raise RuntimeError("idempotent lifting did not converge")


def find_nontrivial_idempotent(E: StructureConstantAlgebra, seed: int = 0) -> Optional[SparseVec]:
    """Idempotent different from 0 and 1, or None when E is local."""
    if E.dim == 0:
        return None
    rad = radical(E)
    Q = Quotient(E, rad)
    if Q.S.dim <= 1:
        return None
    ebar = split_semisimple(Q.S, seed)
    return lift_idempotent(E, Q.lift(ebar))


def is_local(E: StructureConstantAlgebra) -> bool:
    if E.dim == 0:
        return False
    return E.dim - len(radical(E)) == 1 or find_nontrivial_idempotent(E) is None

"""The combinatorial datum (chain lengths plus a pairing of positions).

Positions are pairs ``(i, j)`` with ``1 <= i <= t`` and ``1 <= j <= m_i``.
A relation pairs two positions; a pair ``(x, x)`` marks a self-equivalence,
which turns the algebra skew-gentle.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

Pos = Tuple[int, int]

DAGGER = None  # value of tau where it is undefined


class DatumError(ValueError):
    pass


@dataclass(frozen=True)
class Datum:
    """Validated datum.  Build it with :func:`validate_datum`."""

    m: Tuple[int, ...]
    relations: Tuple[Tuple[Pos, Pos], ...]
    partner: Dict[Pos, Pos] = field(compare=False, hash=False, repr=False, default_factory=dict)

    @property
    def t(self) -> int:
        return len(self.m)

    @property
    def omega(self) -> List[Pos]:
        return [(i, j) for i, mi in enumerate(self.m, 1) for j in range(1, mi + 1)]

    @property
    def is_gentle(self) -> bool:
        return all(x != y for x, y in self.relations)

    def tied(self, x: Pos) -> Optional[Pos]:
        """The position related to ``x`` (``x`` itself for a self-equivalence)."""
        return self.partner.get(x)

    def self_tied(self, x: Pos) -> bool:
        return self.partner.get(x) == x

    def blown(self, i: int) -> List[int]:
        """Positions of chain ``i`` carrying a self-equivalence."""
        return [j for j in range(1, self.m[i - 1] + 1) if self.self_tied((i, j))]

    def to_json(self) -> dict:
        return {"m": list(self.m), "relations": [[list(x), list(y)] for x, y in self.relations]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))

    def __str__(self):
        rels = ", ".join(f"{x}~{y}" for x, y in self.relations)
        return f"Datum(m={list(self.m)}, {rels or 'no relations'})"


def validate_datum(m, relations=()) -> Datum:
    """Check ranges and the at-most-one-partner rule, return a :class:`Datum`."""
    try:
        m = tuple(int(x) for x in m)
    except (TypeError, ValueError) as exc:
        raise DatumError("m must be a list of integers") from exc
    if not m:
        raise DatumError("at least one chain is required")
    for i, mi in enumerate(m, 1):
        if mi < 2:
            raise DatumError(f"chain {i} has length {mi} < 2")
    seen: Dict[Pos, Pos] = {}
    rels = []
    for pair in relations:
        try:
            (a, b), (c, d) = pair
            x, y = (int(a), int(b)), (int(c), int(d))
        except (TypeError, ValueError) as exc:
            raise DatumError(f"malformed relation {pair!r}") from exc
        for p in (x, y):
            i, j = p
            if not (1 <= i <= len(m)) or not (1 <= j <= m[i - 1]):
                raise DatumError(f"position {p} out of range")
        x, y = min(x, y), max(x, y)
        for p in {x, y}:
            if p in seen:
                raise DatumError(f"position {p} is related twice")
        seen[x] = y
        seen[y] = x
        rels.append((x, y))
    rels.sort()
    return Datum(m, tuple(rels), dict(seen))


def datum_from_json(obj) -> Datum:
    if isinstance(obj, str):
        obj = json.loads(obj)
    if not isinstance(obj, dict) or "m" not in obj:
        raise DatumError("datum JSON needs an 'm' field")
    return validate_datum(obj["m"], obj.get("relations", []))


def load_datum(path) -> Datum:
    with open(path) as fh:
        return datum_from_json(json.load(fh))


# ---------------------------------------------------------------------------
# vertices
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class Vertex:
    """Element of the vertex set of the algebra.

    ``kind`` is ``first`` (two glued positions), ``second`` (one sign of a
    self-equivalent position) or ``third`` (an untied position).
    """

    kind: str
    positions: Tuple[Pos, ...]
    sign: str = ""

    @property
    def label(self) -> str:
        return "~".join(f"{i}.{j}" for i, j in self.positions) + self.sign

    def __str__(self):
        return self.label


@dataclass(frozen=True, order=True)
class HVertex:
    """Vertex of the hereditary normalization: a position plus an optional sign."""

    pos: Pos
    sign: str = ""

    @property
    def label(self) -> str:
        return f"{self.pos[0]}.{self.pos[1]}{self.sign}"

    def __str__(self):
        return self.label


@dataclass
class IndexSets:
    omega: List[Pos]
    omega_bar: List[HVertex]
    omega_tilde: List[Vertex]
    omega_hat: List[Tuple[Pos, ...]]

    def counts(self) -> dict:
        return {"omega": len(self.omega), "omega_bar": len(self.omega_bar),
                "omega_tilde": len(self.omega_tilde), "omega_hat": len(self.omega_hat)}


def build_index_sets(d: Datum) -> IndexSets:
    omega = d.omega
    bar: List[HVertex] = []
    tilde: List[Vertex] = []
    hat: List[Tuple[Pos, ...]] = []
    for x in omega:
        y = d.tied(x)
        if y == x:
            bar += [HVertex(x, "+"), HVertex(x, "-")]
            tilde += [Vertex("second", (x,), "+"), Vertex("second", (x,), "-")]
            hat.append((x,))
        elif y is None:
            bar.append(HVertex(x))
            tilde.append(Vertex("third", (x,)))
            hat.append((x,))
        else:
            bar.append(HVertex(x))
            if x < y:
                tilde.append(Vertex("first", (x, y)))
                hat.append((x, y))
    return IndexSets(omega, bar, tilde, hat)


def vertex_of(d: Datum, hv: HVertex) -> Vertex:
    """The vertex of the algebra whose projective covers the given H-vertex."""
    x = hv.pos
    y = d.tied(x)
    if y == x:
        return Vertex("second", (x,), hv.sign)
    if y is None:
        return Vertex("third", (x,))
    return Vertex("first", (min(x, y), max(x, y)))


def predecessors(d: Datum, v: Vertex) -> List[HVertex]:
    if v.kind == "second":
        return [HVertex(v.positions[0], v.sign)]
    return [HVertex(p) for p in v.positions]


def vertex_by_label(d: Datum, label: str) -> Vertex:
    for v in build_index_sets(d).omega_tilde:
        if v.label == label:
            return v
    raise DatumError(f"unknown vertex label {label!r}")


# ---------------------------------------------------------------------------
# tau and special cycles
# ---------------------------------------------------------------------------

def tau(d: Datum, x: Pos) -> Optional[Pos]:
    """Successor of ``x``: the partner of the next position on its chain, if any."""
    i, j = x
    if not (1 <= i <= d.t and 1 <= j <= d.m[i - 1]):
        raise DatumError(f"position {x} out of range")
    if j >= d.m[i - 1]:
        return DAGGER
    return d.tied((i, j + 1))


def special_cycles(d: Datum) -> List[List[Pos]]:
    """All tau-cycles, each listed once starting at its least element."""
    cycles = []
    seen = set()
    for start in d.omega:
        if start in seen:
            continue
        path = []
        pos_in_path = {}
        x = start
        while x is not None and x not in seen and x not in pos_in_path:
            pos_in_path[x] = len(path)
            path.append(x)
            x = tau(d, x)
        if x is not None and x in pos_in_path:
            cyc = path[pos_in_path[x]:]
            k = cyc.index(min(cyc))
            cycles.append(cyc[k:] + cyc[:k])
        seen.update(path)
    cycles.sort()
    return cycles


# ---------------------------------------------------------------------------
# corpus helpers
# ---------------------------------------------------------------------------

def _matchings(items: List[Pos], allow_self: bool) -> Iterator[List[Tuple[Pos, Pos]]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    # first stays untied
    yield from _matchings(rest, allow_self)
    if allow_self:
        for m in _matchings(rest, allow_self):
            yield [(first, first)] + m
    for k, other in enumerate(rest):
        remaining = rest[:k] + rest[k + 1:]
        for m in _matchings(remaining, allow_self):
            yield [(first, other)] + m


def all_datums(chain_lengths=(2, 3), max_chains: int = 2, gentle_only: bool = True) -> List[Datum]:
    """Every datum with at most ``max_chains`` chains of the given lengths."""
    out = []
    for t in range(1, max_chains + 1):
        for m in itertools.product(chain_lengths, repeat=t):
            omega = [(i, j) for i, mi in enumerate(m, 1) for j in range(1, mi + 1)]
            for rels in _matchings(omega, not gentle_only):
                out.append(validate_datum(m, rels))
    return out


def dual_numbers() -> Datum:
    return validate_datum([2], [[(1, 1), (1, 2)]])


def three_chain_loop() -> Datum:
    """m = (3) with the two ends of the chain glued."""
    return validate_datum([3], [[(1, 1), (1, 3)]])


def two_parallel_chains() -> Datum:
    """m = (3, 3) with (1, j) glued to (2, j) for every j."""
    return validate_datum([3, 3], [[(1, j), (2, j)] for j in (1, 2, 3)])


def skew_two_chains() -> Datum:
    """m = (3, 3), ends glued across the chains, middle positions self-equivalent."""
    return validate_datum([3, 3], [[(1, 1), (2, 1)], [(1, 3), (2, 3)], [(1, 2), (1, 2)], [(2, 2), (2, 2)]])

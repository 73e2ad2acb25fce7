"""Acceptance checks shared by ``gentle suite run`` and the test suite.

Each check returns a :class:`CheckResult`.  ``corpus="full"`` runs every
check at its stated size; ``corpus="small"`` trims the enumerations so the
whole run takes a few seconds.
"""
from __future__ import annotations

import itertools
import random
import time
from collections import Counter
from dataclasses import dataclass, field as dc_field
from typing import Callable, Dict, List, Optional, Tuple

from .algebra import (build_gentle_algebra, build_normalization,
                      build_resolution_algebra, minimal_resolution,
                      radical_subspace_matches)
from .bunch import (acadac_word, apply_transformation, band_rep,
                    random_transform, rep_of_triple, triple_with_rep,
                    two_index_chains)
from .complexes import (ProjComplex, all_square_invertible, complex_to_json,
                        decompose, is_homotopy_iso, is_indecomposable,
                        minimize, reconstruct, total_cohomology, triple_of,
                        verify_complex)
from .datum import all_datums, build_index_sets, special_cycles
from .exactla import default_field
from .fixtures import (dual_x, expected_hook_string, expected_square_band,
                       gentle_datums, hook_string, square_band)
from .rouquier import fat_point_probe, generation_certificate
from .words import (BandDatum, StringDatum, band_complex, cycles_and_resolutions,
                    enumerate_bands, enumerate_strings, string_complex,
                    word_equivalent_bands, word_equivalent_strings)


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0
    data: dict = dc_field(default_factory=dict)

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.number:2d} {self.name}: {self.detail} ({self.seconds:.2f}s)"


SIZES = {
    "full": {"strings": 5, "window": (-4, 0), "bands": 4, "ms": (1, 2), "pis": (1, 2, 3),
             "transforms": 100, "dual_gens": 2, "dual_window": (-3, 0), "dual_random": 20, "fat": 3},
    "small": {"strings": 3, "window": (-2, 0), "bands": 2, "ms": (1, 2), "pis": (1, 2),
              "transforms": 5, "dual_gens": 1, "dual_window": (-3, 0), "dual_random": 2, "fat": 2},
}


def _timed(number, name, fn, limit: Optional[float] = None) -> CheckResult:
    t0 = time.perf_counter()
    try:
        passed, detail, data = fn()
    except Exception as exc:  # a crash is a failure, reported with its message
        passed, detail, data = False, f"error: {type(exc).__name__}: {exc}", {}
    dt = time.perf_counter() - t0
    if limit is not None and dt > limit:
        passed = False
        detail += f"; over the {limit:g}s budget"
    return CheckResult(number, name, passed, detail, dt, data)


# ---------------------------------------------------------------------------
# corpus
# ---------------------------------------------------------------------------

@dataclass
class CorpusItem:
    datum: str
    label: str
    word: object
    complex: ProjComplex


def build_corpus(size: str = "full", datums=None) -> List[CorpusItem]:
    """String complexes and band complexes (m <= 2, pi = 2) over the gentle datums."""
    cfg = SIZES[size]
    out = []
    for name, d in (datums or gentle_datums()).items():
        A = build_gentle_algebra(d)
        for v in enumerate_strings(d, cfg["strings"], cfg["window"]):
            out.append(CorpusItem(name, f"string{[s.to_json() for s in v.segments]}", v, string_complex(d, v, A)))
        for segs in enumerate_bands(d, cfg["bands"]):
            for m in cfg["ms"]:
                w = BandDatum(segs, m, A.field(2))
                out.append(CorpusItem(name, f"band m={m}", w, band_complex(d, w, A)))
    return out


_CORPUS_CACHE: Dict[str, List[CorpusItem]] = {}


def corpus(size: str = "full") -> List[CorpusItem]:
    if size not in _CORPUS_CACHE:
        _CORPUS_CACHE[size] = build_corpus(size)
    return _CORPUS_CACHE[size]


def _algebras():
    out = {}
    for name, d in gentle_datums().items():
        A = build_gentle_algebra(d)
        out[name] = (d, A, build_normalization(d, A.field))
    return out


# ---------------------------------------------------------------------------
# the checks
# ---------------------------------------------------------------------------

def check_dimensions(size="full") -> CheckResult:
    want = {"dual": 2, "loop3": 5, "pair33": 9}

    def run():
        got = {name: build_gentle_algebra(d).dim for name, d in gentle_datums().items()}
        return got == want, f"dim A = {got}", got
    return _timed(1, "algebra dimensions", run, limit=1.0)


def check_resolution_witness(size="full") -> CheckResult:
    def run():
        rows = {}
        ok = True
        for name, (d, A, H) in _algebras().items():
            B = build_resolution_algebra(A, H)
            rep = B.witness
            good = rep.matches and rep.datum.is_gentle and radical_subspace_matches(B)
            rows[name] = {"witness_gentle": rep.datum.is_gentle, "matches": rep.matches, "dim_B": B.dim}
            ok = ok and good
        return ok, f"witness datums gentle and radicals match: {rows}", rows
    return _timed(2, "resolution algebra witness", run)


def check_resolution_gldim(size="full") -> CheckResult:
    def run():
        rows = {}
        ok = True
        for name, (d, A, H) in _algebras().items():
            t0 = time.perf_counter()
            B = build_resolution_algebra(A, H, check=False)
            lengths = {}
            for x in B.reps:
                res = minimal_resolution(B, x, 4)
                lengths[x] = res.length if res.terminated else None
            dt = time.perf_counter() - t0
            vals = list(lengths.values())
            good = None not in vals and max(vals) == 2 and dt < 10
            rows[name] = {"max_length": max(v for v in vals if v is not None), "all_terminate": None not in vals,
                          "seconds": round(dt, 3)}
            ok = ok and good
        return ok, f"simple resolutions of B: {rows}", rows
    return _timed(3, "resolution algebra has global dimension 2", run)


def check_worked_complexes(size="full") -> CheckResult:
    def run():
        d = gentle_datums()["pair33"]
        A = build_gentle_algebra(d)
        results = {}
        for m, pi in ((1, 1), (1, 2), (2, 3), (3, 5)):
            X = band_complex(d, square_band(m, pi, A.field), A)
            results[f"band m={m} pi={pi}"] = complex_to_json(X) == complex_to_json(expected_square_band(A, m, pi))
        X = string_complex(d, hook_string(), A)
        results["string"] = complex_to_json(X) == complex_to_json(expected_hook_string(A))
        return all(results.values()), f"structural equality {results}", results
    return _timed(4, "band and string complexes from words", run)


def _invariant(X: ProjComplex):
    X = minimize(X)
    shape = tuple(sorted((r, tuple(sorted(Counter(X.comps[r]).items()))) for r in X.degrees))
    return shape, tuple(sorted(total_cohomology(X).items()))


def check_classification(size="full") -> CheckResult:
    cfg = SIZES[size]

    def run():
        d = gentle_datums()["pair33"]
        A = build_gentle_algebra(d)
        f = A.field
        items = []
        for v in enumerate_strings(d, cfg["strings"], cfg["window"]):
            items.append(("s", v, string_complex(d, v, A)))
        bands = enumerate_bands(d, cfg["bands"])
        for segs in bands:
            for m in cfg["ms"]:
                for pi in cfg["pis"]:
                    w = BandDatum(segs, m, f(pi))
                    items.append(("b", w, band_complex(d, w, A)))
        bad = []
        for kind, w, X in items:
            if not is_indecomposable(X):
                bad.append(("decomposable", w))
        # pairwise: iso exactly when word-equivalent
        buckets: Dict[tuple, list] = {}
        for n, (_, _, X) in enumerate(items):
            buckets.setdefault(_invariant(X), []).append(n)
        pairs = 0
        for idx in buckets.values():
            for a, b in itertools.combinations(idx, 2):
                ka, wa, Xa = items[a]
                kb, wb, Xb = items[b]
                pairs += 1
                if ka != kb:
                    same_word = False
                elif ka == "s":
                    same_word = word_equivalent_strings(wa, wb)
                else:
                    same_word = word_equivalent_bands(wa, wb, f)
                if is_homotopy_iso(Xa, Xb) != same_word:
                    bad.append(("class mismatch", wa, wb))
        # reversals
        rev = 0
        for kind, w, X in items:
            if kind == "s":
                ok = is_homotopy_iso(X, string_complex(d, w.reversed(), A))
            else:
                if w.m != 1:
                    continue
                segs_r = tuple(s.flipped() for s in reversed(w.segments))
                ok = is_homotopy_iso(X, band_complex(d, BandDatum(segs_r, 1, 1 / w.pi), A))
                for other in cfg["pis"]:
                    o = f(other)
                    if o not in (w.pi, 1 / w.pi):
                        ok = ok and not is_homotopy_iso(X, band_complex(d, BandDatum(segs_r, 1, o), A))
            rev += 1
            if not ok:
                bad.append(("reversal", w))
        n_s = sum(1 for k, _, _ in items if k == "s")
        detail = (f"{n_s} strings, {len(items) - n_s} bands ({len(bands)} band words); "
                  f"{pairs} same-invariant pairs compared, {rev} reversal checks, {len(bad)} failures")
        return not bad, detail, {"failures": [repr(b) for b in bad[:10]]}
    return _timed(5, "indecomposables match word classes", run, limit=300.0)


def check_round_trip(size="full") -> CheckResult:
    def run():
        H_of = {name: build_normalization(d) for name, d in gentle_datums().items()}
        fails = []
        for it in corpus(size):
            T = triple_of(it.complex, H_of[it.datum])
            if not all_square_invertible(T):
                fails.append(("theta", it.label))
                continue
            if not is_homotopy_iso(reconstruct(T), it.complex):
                fails.append(("round trip", it.label))
        n = len(corpus(size))
        return not fails, f"{n} corpus complexes, {len(fails)} failures", {"failures": fails[:10]}
    return _timed(6, "triple round trip", run)


def check_transformations(size="full", seed: int = 20240601) -> CheckResult:
    cfg = SIZES[size]

    def run():
        rng = random.Random(seed)
        datums = gentle_datums()
        H_of = {name: build_normalization(d) for name, d in datums.items()}
        fails = []
        total = 0
        for it in corpus(size):
            d = datums[it.datum]
            T = triple_of(it.complex, H_of[it.datum])
            R = rep_of_triple(T, d)
            for _ in range(cfg["transforms"]):
                t = random_transform(R, rng)
                X2 = reconstruct(triple_with_rep(T, apply_transformation(R, t)))
                total += 1
                if not (verify_complex(X2).is_complex and is_homotopy_iso(it.complex, X2)):
                    fails.append(it.label)
        return not fails, f"{total} transforms (seed {seed}), {len(fails)} failures", {"seed": seed}
    return _timed(7, "admissible transformations are sound", run)


def check_cycles_vs_resolutions(size="full") -> CheckResult:
    def run():
        lengths = (2, 3) if size == "full" else (2,)
        ds = all_datums(lengths, 2, gentle_only=True)
        bad = []
        with_cycle = 0
        for d in ds:
            has_cycle, all_term = cycles_and_resolutions(d)
            with_cycle += has_cycle
            if has_cycle == all_term:
                bad.append(str(d))
        return not bad, f"{len(ds)} datums, {with_cycle} with special cycles, {len(bad)} disagreements", \
            {"disagreements": bad[:10]}
    return _timed(8, "special cycles vs infinite resolutions", run, limit=120.0)


def interval_multiplicities(ranks: Dict[Tuple[int, int], int], lo: int, hi: int) -> Counter:
    """Interval summands of a representation of a linearly oriented path.

    ``ranks[(s, t)]`` is the rank of the composite from degree s to degree t
    (the dimension at s when s == t).
    """
    def rk(s, t):
        if s < lo or t > hi:
            return 0
        return ranks[(s, t)]
    out = Counter()
    for s in range(lo, hi + 1):
        for t in range(s, hi + 1):
            k = rk(s, t) - rk(s - 1, t) - rk(s, t + 1) + rk(s - 1, t + 1)
            if k:
                out[(t - s + 1, t)] = k
    return out


def _dual_rank_table(X: ProjComplex, lo: int, hi: int) -> Dict[Tuple[int, int], int]:
    from .exactla import Matrix
    A = X.alg
    eps = A.path(1, 2, 1)
    f = A.field
    mats = {}
    for r in range(lo, hi):
        n0, n1 = len(X.comp(r)), len(X.comp(r + 1))
        M = X.diffs.get(r)
        mats[r] = Matrix(f, [[(M[q][p].get(eps, 0) if M else 0) for p in range(n0)] for q in range(n1)], n0)
    table = {}
    for s in range(lo, hi + 1):
        P = Matrix.identity(f, len(X.comp(s)))
        table[(s, s)] = len(X.comp(s))
        for t in range(s + 1, hi + 1):
            P = mats[t - 1] * P
            table[(s, t)] = P.rank()
    return table


def check_dual_numbers(size="full") -> CheckResult:
    cfg = SIZES[size]

    def run():
        field = default_field()
        rng = random.Random(5)
        A = build_gentle_algebra(gentle_datums()["dual"], field)
        v = A.vertices[0]
        eps = A.path(1, 2, 1)
        lo, hi = cfg["dual_window"]
        degs = list(range(lo, hi + 1))
        xs = {}
        count = 0
        bad = []
        for shape in itertools.product(range(cfg["dual_gens"] + 1), repeat=len(degs)):
            n = dict(zip(degs, shape))
            slots = [(r, q, p) for r in degs[:-1] for q in range(n[r + 1]) for p in range(n[r])]
            fills = list(itertools.product((0, 1), repeat=len(slots)))
            fills += [tuple(field.random(rng, 9) for _ in slots) for _ in range(cfg["dual_random"])]
            for bits in fills:
                diffs = {r: [[{} for _ in range(n[r])] for _ in range(n[r + 1])] for r in degs[:-1]}
                for (r, q, p), b in zip(slots, bits):
                    if b:
                        diffs[r][q][p] = {eps: field(b)}
                X = ProjComplex(A, {r: [v] * n[r] for r in degs}, diffs)
                count += 1
                want = interval_multiplicities(_dual_rank_table(X, lo, hi), lo, hi)
                got = Counter()
                for Y in decompose(X):
                    key = (len(Y.degrees), max(Y.degrees))
                    if key not in xs:
                        xs[key] = dual_x(A, *key)
                    if not (all(len(Y.comp(r)) == 1 for r in Y.degrees) and
                            Y.degrees == list(range(min(Y.degrees), max(Y.degrees) + 1)) and
                            is_homotopy_iso(Y, xs[key])):
                        bad.append(("summand is not a shifted X_n", shape, bits))
                    got[key] += 1
                if got != want:
                    bad.append(("multiplicities", shape, bits))
        dn = gentle_datums()["dual"]
        no_bands = enumerate_bands(dn, 6) == []
        ok = not bad and no_bands
        return ok, (f"{count} minimal complexes (all 0/1 patterns plus random fills) on [{lo},{hi}], {len(bad)} mismatches; "
                    f"band words: {'none' if no_bands else 'found'}"), {"complexes": count}
    return _timed(9, "dual numbers: only shifted X_n", run)


def check_generation(size="full") -> CheckResult:
    cfg = SIZES[size]

    def run():
        H_of = {name: build_normalization(d) for name, d in gentle_datums().items()}
        datums = gentle_datums()
        fails = []
        for it in corpus(size):
            c = generation_certificate(datums[it.datum], it.complex, H_of[it.datum])
            if not c.ok:
                fails.append(it.label)
        fat = {}
        for n in range(1, cfg["fat"] + 1):
            p = fat_point_probe(n)
            fat[n] = p.ok
            if not p.ok:
                fails.append(f"fat point {n}")
        return not fails, f"{len(corpus(size))} corpus certificates, fat points {fat}, {len(fails)} failures", {}
    return _timed(10, "generation certificates", run)


def check_band_display(size="full") -> CheckResult:
    want = {(2, 1): ("phi2", "I"), (2, 3): ("phi1", "I"), (4, 3): ("psi2", "I"),
            (4, 5): ("psi1", "I"), (6, 1): ("phi1", "J"), (6, 5): ("phi2", "I")}

    def run():
        f = default_field()
        B = two_index_chains()
        ok = True
        for m, pi in ((1, 1), (2, 3)):
            R = band_rep(B, f, acadac_word(), m, pi)
            ok = ok and R.display.entries == want
        summands = "".join(str(c[0])[0] for c in R.display.summands)
        return ok, f"block display {sorted(want)} reproduced, summands {summands}", {}
    return _timed(11, "band representation block display", run)


CHECKS: List[Callable[..., CheckResult]] = [
    check_dimensions, check_resolution_witness, check_resolution_gldim, check_worked_complexes,
    check_classification, check_round_trip, check_transformations, check_cycles_vs_resolutions,
    check_dual_numbers, check_generation, check_band_display,
]


def run_suite(size: str = "full", only: Optional[List[int]] = None) -> List[CheckResult]:
    out = []
    for n, fn in enumerate(CHECKS, 1):
        if only and n not in only:
            continue
        out.append(fn(size))
    return out

"""Command-line interface: ``gentle <group> <command> ...``.

Exit codes: 0 success, 1 domain error (a JSON error object is printed),
2 usage error.  Every output records the seed used for randomized steps.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import List, Optional

from . import algebra as alg_mod
from .bunch import bunch_of_datum
from .complexes import (complex_from_json, complex_to_json, decompose,
                        is_homotopy_iso, cohomology_dims, verify_complex)
from .datum import build_index_sets, datum_from_json, special_cycles
from .exactla import field_from_spec
from .rouquier import build_generator, fat_point_probe, generation_certificate
from .words import (BandDatum, StringDatum, band_complex,
                    cycles_and_resolutions, enumerate_bands, enumerate_strings,
                    gluing_dot, string_complex, validate_band, validate_string,
                    word_equivalent_bands, word_equivalent_strings,
                    word_from_json)

DEFAULT_SEED = 0


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    field_spec: str
    seed: int
    fmt: str
    command: List[str]

    @property
    def field(self):
        return field_from_spec(self.field_spec)


def _config(args) -> RunConfig:
    # shared options are SUPPRESSed so a subcommand never clobbers a top-level flag
    spec = getattr(args, "field", None)
    if spec is None:
        spec = os.environ.get("GENTLE_FIELD", "Q")
    return RunConfig(spec, getattr(args, "seed", DEFAULT_SEED), getattr(args, "format", "json"),
                     [args.group, getattr(args, "cmd", "")])


def _read_json(path):
    with open(path) as fh:
        return json.load(fh)


def _dump(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _window(text: str):
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError as exc:
        raise UsageError(f"window must look like lo:hi, got {text!r}") from exc
    if lo > hi:
        raise UsageError("window lower end exceeds upper end")
    return lo, hi


def emit_dot(obj, *, cyclic: bool = False, datum=None) -> str:
    """DOT text for a quiver (an algebra) or a gluing diagram (a segment list)."""
    if isinstance(obj, alg_mod.BasedAlgebra):
        return alg_mod.quiver_dot(obj)
    segs = list(obj)
    if not segs:
        return "digraph gluing {\n}\n"
    return gluing_dot(datum, segs, cyclic)


# ---------------------------------------------------------------------------
# command handlers: each returns a dict (JSON) or a string (text or DOT)
# ---------------------------------------------------------------------------

def _load_word(d, path, field):
    w = word_from_json(_read_json(path), field)
    if isinstance(w, BandDatum):
        validate_band(d, w, field)
    else:
        validate_string(d, w)
    return w


def _build(d, w, A):
    return band_complex(d, w, A) if isinstance(w, BandDatum) else string_complex(d, w, A)


def cmd_datum(args, cfg):
    d = datum_from_json(_read_json(args.datum))
    if args.cmd == "validate":
        return {"valid": True, "gentle": d.is_gentle}
    if args.cmd == "sets":
        s = build_index_sets(d)
        return {"counts": s.counts(),
                "omega": [list(x) for x in s.omega],
                "omega_bar": [v.label for v in s.omega_bar],
                "omega_tilde": [v.label for v in s.omega_tilde],
                "omega_hat": [[list(x) for x in t] for t in s.omega_hat]}
    if args.cmd == "cycles":
        A = alg_mod.build_gentle_algebra(d, cfg.field)
        N = len(A.vertices) + 3
        has_cycle, all_term = cycles_and_resolutions(d, A, N)
        return {"special_cycles": [[list(x) for x in c] for c in special_cycles(d)],
                "resolutions_terminate": all_term, "steps": N, "agree": has_cycle != all_term}
    raise UsageError(f"unknown datum command {args.cmd}")


def cmd_algebra(args, cfg):
    d = datum_from_json(_read_json(args.datum))
    A = alg_mod.build_gentle_algebra(d, cfg.field)
    if args.dot or cfg.fmt == "dot":
        return emit_dot(A)
    H = alg_mod.build_normalization(d, cfg.field)
    return {"dim_A": A.dim, "dim_H": H.dim, "vertices": list(A.vertices),
            "paths": sum(1 for n in range(A.dim) if A.is_rad[n]),
            "gentle": d.is_gentle, "skew_gentle": not d.is_gentle}


def cmd_word(args, cfg):
    d = datum_from_json(_read_json(args.datum))
    f = cfg.field
    if args.cmd == "build":
        w = _load_word(d, args.word, f)
        if args.dot or cfg.fmt == "dot":
            return emit_dot(w.segments, cyclic=isinstance(w, BandDatum), datum=d)
        A = alg_mod.build_gentle_algebra(d, f)
        return complex_to_json(_build(d, w, A))
    if args.cmd == "check":
        w = _load_word(d, args.word, f)
        out = {"valid": True, "kind": "band" if isinstance(w, BandDatum) else "string"}
        if isinstance(w, StringDatum):
            out["ends"] = w.kind(d)
        return out
    if args.cmd == "equiv":
        w1, w2 = _load_word(d, args.word, f), _load_word(d, args.other, f)
        if type(w1) is not type(w2):
            same = False
        elif isinstance(w1, BandDatum):
            same = word_equivalent_bands(w1, w2, f)
        else:
            same = word_equivalent_strings(w1, w2)
        A = alg_mod.build_gentle_algebra(d, f)
        iso = is_homotopy_iso(_build(d, w1, A), _build(d, w2, A), seed=cfg.seed)
        return {"word_equivalent": same, "homotopy_isomorphic": iso}
    if args.cmd == "enumerate":
        lo, hi = _window(args.window)
        out = {"strings": [v.to_json() for v in enumerate_strings(d, args.max_segments, (lo, hi))]}
        if args.bands:
            out["bands"] = [{"kind": "band", "segments": [s.to_json() for s in b]}
                            for b in enumerate_bands(d, args.max_segments)]
        return out
    raise UsageError(f"unknown word command {args.cmd}")


def cmd_complex(args, cfg):
    d = datum_from_json(_read_json(args.datum))
    A = alg_mod.build_gentle_algebra(d, cfg.field)
    Xs = [complex_from_json(A, _read_json(p)) for p in args.complexes]
    if args.cmd == "iso":
        if len(Xs) != 2:
            raise UsageError("complex iso needs exactly two complexes")
        return {"homotopy_isomorphic": is_homotopy_iso(Xs[0], Xs[1], seed=cfg.seed)}
    out = []
    for X in Xs:
        if args.cmd == "check":
            c = verify_complex(X)
            out.append({"is_complex": c.is_complex, "is_minimal": c.is_minimal, "failures": c.failures})
        elif args.cmd == "cohomology":
            out.append({str(r): v for r, v in cohomology_dims(X).items()})
        elif args.cmd == "decompose":
            parts = decompose(X, seed=cfg.seed)
            out.append({"summands": [complex_to_json(P) for P in parts]})
        else:
            raise UsageError(f"unknown complex command {args.cmd}")
    return out[0] if len(out) == 1 else {"results": out}


def cmd_bunch(args, cfg):
    d = datum_from_json(_read_json(args.datum))
    B = bunch_of_datum(d, _window(args.window))
    if cfg.fmt == "text":
        return B.describe()

    def name(x):
        if x[0] == "u":
            return f"u{list(x[1])}@{x[2]}"
        return f"q{list(x[1])}@{x[2]}^{list(x[3])}@{x[4]}"
    seen, ties = set(), []
    for x, y in B.tie.items():
        if (y, x) not in seen:
            seen.add((x, y))
            ties.append([name(x), name(y)])
    return {"sigma": [[list(p), r] for p, r in B.sigma],
            "E": {f"{list(p)}@{r}": [name(x) for x in B.E[(p, r)]] for p, r in B.sigma},
            "F": {f"{list(p)}@{r}": [name(x) for x in B.F[(p, r)]] for p, r in B.sigma},
            "ties": ties}


def cmd_rouquier(args, cfg):
    if args.cmd == "certify":
        d = datum_from_json(_read_json(args.datum))
        A = alg_mod.build_gentle_algebra(d, cfg.field)
        X = complex_from_json(A, _read_json(args.complex))
        out = generation_certificate(d, X).to_json()
        out["generator"] = build_generator(d, A).to_json()
        return out
    if args.cmd == "fatpoint":
        if args.n < 1:
            raise ValueError("n must be positive")
        p = fat_point_probe(args.n, field=cfg.field)
        return {"n": args.n, "dim_A": p.A.dim, "dim_H": p.H.dim, "ok": p.ok,
                "certificates": [c.to_json() for c in p.certificates]}
    raise UsageError(f"unknown rouquier command {args.cmd}")


def cmd_suite(args, cfg):
    from .suite import run_suite
    only = [int(x) for x in args.only.split(",")] if args.only else None
    results = run_suite(args.corpus, only)
    if cfg.fmt == "text":
        lines = [r.line() for r in results]
        lines.append(f"{sum(r.passed for r in results)}/{len(results)} passed")
        text = "\n".join(lines)
        return text, all(r.passed for r in results)
    payload = {"corpus": args.corpus,
               "results": [{"number": r.number, "name": r.name, "passed": r.passed,
                            "detail": r.detail} for r in results],
               "passed": all(r.passed for r in results)}
    return payload, payload["passed"]


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--field", default=argparse.SUPPRESS, help='"Q" or "Fp:<p>" (default: $GENTLE_FIELD or Q)')
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--format", choices=("json", "text", "dot"), default=argparse.SUPPRESS)

    p = _Parser(prog="gentle", description="Gentle and skew-gentle algebras: complexes, words and matrix problems.",
                parents=[common])
    groups = p.add_subparsers(dest="group", required=True, parser_class=_Parser)

    g = groups.add_parser("datum", parents=[common])
    g.add_argument("cmd", choices=("validate", "sets", "cycles"))
    g.add_argument("datum")

    g = groups.add_parser("algebra", parents=[common])
    g.add_argument("cmd", choices=("info",))
    g.add_argument("datum")
    g.add_argument("--dot", action="store_true")

    g = groups.add_parser("word", parents=[common])
    g.add_argument("cmd", choices=("build", "check", "equiv", "enumerate"))
    g.add_argument("datum")
    g.add_argument("word", nargs="?")
    g.add_argument("other", nargs="?")
    g.add_argument("--dot", action="store_true")
    g.add_argument("--max-segments", type=int, default=3)
    g.add_argument("--window", default="-2:0")
    g.add_argument("--bands", action="store_true")

    g = groups.add_parser("complex", parents=[common])
    g.add_argument("cmd", choices=("check", "cohomology", "decompose", "iso"))
    g.add_argument("datum")
    g.add_argument("complexes", nargs="+")

    g = groups.add_parser("bunch", parents=[common])
    g.add_argument("cmd", choices=("show",))
    g.add_argument("datum")
    g.add_argument("--window", default="-1:0")

    g = groups.add_parser("rouquier", parents=[common])
    sub = g.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    c = sub.add_parser("certify", parents=[common])
    c.add_argument("datum")
    c.add_argument("complex")
    c = sub.add_parser("fatpoint", parents=[common])
    c.add_argument("n", type=int)

    g = groups.add_parser("suite", parents=[common])
    g.add_argument("cmd", choices=("run",))
    g.add_argument("--corpus", choices=("small", "full"), default="small")
    g.add_argument("--only", default=None, help="comma-separated check numbers")
    return p


HANDLERS = {"datum": cmd_datum, "algebra": cmd_algebra, "word": cmd_word, "complex": cmd_complex,
            "bunch": cmd_bunch, "rouquier": cmd_rouquier, "suite": cmd_suite}

_WORD_ARGS = {"build": 1, "check": 1, "equiv": 2, "enumerate": 0}


def _glue_window(argv: List[str]) -> List[str]:
    """Let ``--window -2:0`` through; argparse would read the value as a flag."""
    out: List[str] = []
    k = 0
    while k < len(argv):
        if argv[k] == "--window" and k + 1 < len(argv):
            out.append("--window=" + argv[k + 1])
            k += 2
        else:
            out.append(argv[k])
            k += 1
    return out


def main(argv: Optional[List[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(_glue_window(sys.argv[1:] if argv is None else list(argv)))
        if args.group == "word":
            need = _WORD_ARGS[args.cmd]
            have = sum(x is not None for x in (args.word, args.other))
            if have != need:
                raise UsageError(f"word {args.cmd} takes {need} word file(s)")
        cfg = _config(args)
        cfg.field
    except UsageError as exc:
        err.write(f"gentle: usage error: {exc}\n")
        return 2
    except ValueError as exc:
        out.write(_dump({"error": str(exc), "type": type(exc).__name__,
                         "seed": getattr(args, "seed", DEFAULT_SEED)}) + "\n")
        return 1
    status = 0
    try:
        result = HANDLERS[args.group](args, cfg)
        if args.group == "suite":
            result, passed = result
            status = 0 if passed else 1
    except UsageError as exc:
        err.write(f"gentle: usage error: {exc}\n")
        return 2
    except (ValueError, OSError, KeyError, ArithmeticError) as exc:
        out.write(_dump({"error": str(exc), "type": type(exc).__name__, "seed": cfg.seed}) + "\n")
        return 1
    if isinstance(result, str):
        if result.startswith("digraph"):
            out.write(f"// seed: {cfg.seed}\n")
            out.write(result)
        else:
            out.write(result + f"\nseed: {cfg.seed}\n")
    else:
        if isinstance(result, list):
            result = {"results": result}
        result["seed"] = cfg.seed
        out.write((_as_text(result) if cfg.fmt == "text" else _dump(result)) + "\n")
    return status


def _as_text(obj: dict) -> str:
    """One ``key: value`` line per top-level field; nested values stay compact JSON."""
    return "\n".join(f"{k}: {v if isinstance(v, str) else _dump(v)}" for k, v in obj.items())


def main_entry():
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    main_entry()

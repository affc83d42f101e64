"""Command-line interface: ``torusquot {analyze,reduce,iso,hilbert,check}``.

Exit codes: 0 success, 1 usage or parse error, 2 the input violates a
mathematical hypothesis, 3 an internal invariant failed (including any
disagreement found by ``check``).
"""

from __future__ import annotations

import argparse
import random
import sys
from typing import Callable, Optional

from . import report
from .analysis import (
    check_one_modular,
    effectivize_with_basis,
    full_support_relation,
    make_stable_utcls,
    modularity_index,
    require_faithful,
    validate_faithful,
)
from .corpus import random_corpus, random_scramble
from .errors import InputError, InvariantViolation
from .isoclass import canonical_form, decide_iso, verify_witness
from .lattice import IntMatrix
from .oracle import (
    ambient_invariant_series,
    brute_codim_N_sing,
    brute_isotropy_signatures,
    brute_modularity_index,
    brute_type_O_certificates,
    empirical_isotropy_census,
    reduced_data_series,
    shell_invariant_series,
)
from .reduction import ReducedData, is_orbifold, reduce, replay_trace
from .strata import codim_N_sing, detect_type_O, enumerate_isotropy_classes

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_INVARIANT = 0, 1, 2, 3

# the 4^n brute-force pattern scans are skipped above this many columns
BRUTE_MAX_N = 7


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# --- input --------------------------------------------------------------------

def load_document(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return report.parse_input(text)
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _prepare(doc: dict, effectivize: bool) -> tuple[IntMatrix, Optional[dict]]:
    """The weight matrix to work on, effectivized if asked and needed."""
    A = report.module_of(doc).A
    if A.rows == 0:
        raise InputError("the torus has rank 0; a finite group action is not a torus quotient")
    if doc.get("twist"):
        raise InputError("twisted input is only accepted by 'iso'")
    if not validate_faithful(A):
        if not effectivize:
            require_faithful(A)
        B, P = effectivize_with_basis(A)
        if B.l == 0:
            raise InputError("the action is trivial; nothing is left after effectivizing")
        return B.A, {"matrix": report.matrix_json(B.A), "basis": report.matrix_json(P)}
    return A, None


def _reduced_of(doc: dict, effectivize: bool) -> tuple[ReducedData, object]:
    A, _ = _prepare(doc, effectivize)
    d, trace = reduce(A)
    extra = tuple(doc.get("cyclic_moduli", ()))
    if extra:
        d = ReducedData(d.cyclic_moduli + extra, d.torus_block, d.trivial_dim)
    return d, trace


# --- commands -----------------------------------------------------------------

def cmd_analyze(args) -> dict:
    doc = load_document(args.input)
    A, eff = _prepare(doc, args.effectivize)
    out = {"command": "analyze", "version": report.VERSION}
    if eff:
        out["effectivized"] = eff
    out["analysis"] = report.analysis_json(A, report.analyze(A))
    return out


def cmd_reduce(args) -> dict:
    doc = load_document(args.input)
    d, trace = _reduced_of(doc, args.effectivize)
    return {
        "command": "reduce",
        "version": report.VERSION,
        "reduced": report.reduced_json(d),
        "orbifold": is_orbifold(d),
        "canonical_form": report.canonical_of(d),
        "trace": report.trace_json(trace),
    }


def _iso_side(doc: dict, effectivize: bool) -> ReducedData:
    if doc.get("twist"):
        # a twisted block is necessarily pre-reduced data
        M = report.module_of(doc)
        return ReducedData(tuple(doc.get("cyclic_moduli", ())), M, 0)
    return _reduced_of(doc, effectivize)[0]


def cmd_iso(args) -> dict:
    docs = [load_document(p) for p in (args.first, args.second)]
    d1, d2 = (_iso_side(doc, args.effectivize) for doc in docs)
    v = decide_iso(d1, d2)
    if v.witness is not None and not verify_witness(d1, d2, v.witness):
        raise InvariantViolation("isomorphism witness failed verification")
    out = {"command": "iso", "version": report.VERSION}
    out.update(report.verdict_json(v))
    out["canonical_forms"] = [report.canonical_of(d1), report.canonical_of(d2)]
    return out


def cmd_hilbert(args) -> dict:
    doc = load_document(args.input)
    A, _ = _prepare(doc, args.effectivize)
    require_faithful(A)
    check_one_modular(A)
    D = args.max_degree
    d, _ = reduce(A)
    shell = shell_invariant_series(A, D)
    red = reduced_data_series(d, D)
    return {
        "command": "hilbert",
        "version": report.VERSION,
        "ambient": report.series_json(ambient_invariant_series(A, D)),
        "shell": report.series_json(shell),
        "reduced": report.series_json(red),
        "shell_equals_reduced": shell.coefficients == red.coefficients,
    }


def _battery(A: IntMatrix, D: int, seed: int, samples: int, scrambles: int) -> list[tuple[str, Callable]]:
    """Named oracle comparisons; each callable returns (ok, detail)."""
    B = make_stable_utcls(A).apply(A)
    l, n = B.shape

    def dual():
        k = modularity_index(B)
        rel = full_support_relation(B)
        return (k >= 1) == (rel is not None), f"modularity index {k}, full-support relation {rel}"

    def modularity():
        fast, slow = modularity_index(B), brute_modularity_index(B)
        return fast == slow, f"fast {fast}, brute {slow}"

    def type_O():
        fast = [(c.r, c.fixed_columns) for c in detect_type_O(B)]
        slow = brute_type_O_certificates(B)
        return fast == slow, f"{len(fast)} certificates, brute {len(slow)}"

    def trichotomy():
        c = codim_N_sing(B)
        has = bool(detect_type_O(B))
        return c >= 3 and (c == 3) == has, f"codim {c}, type-O {has}"

    def codim():
        fast, slow = codim_N_sing(B), brute_codim_N_sing(B)
        return fast == slow, f"fast {fast}, brute {slow}"

    def strata():
        fast = {s.signature for s in enumerate_isotropy_classes(B)}
        slow = brute_isotropy_signatures(B)
        return fast == slow, f"{len(fast)} classes, brute {len(slow)}"

    def census():
        classes = enumerate_isotropy_classes(B)
        seen = empirical_isotropy_census(B, samples, seed, classes)
        return True, f"{len(seen)} of {len(classes)} classes observed in {samples} samples"

    def hilbert():
        d, _ = reduce(A)
        s, r = shell_invariant_series(A, D), reduced_data_series(d, D)
        return s.coefficients == r.coefficients, f"shell {list(s.coefficients)}, reduced {list(r.coefficients)}"

    def replay():
        d, trace = reduce(A)
        return replay_trace(trace) == d, f"{len(trace.steps)} steps replayed"

    def orbifold():
        d, _ = reduce(A)
        return is_orbifold(d) == (d.torus_block is None), f"orbifold {is_orbifold(d)}"

    def invariance():
        rng = random.Random(seed)
        d, _ = reduce(A)
        c = canonical_form(d)
        for _ in range(scrambles):
            d2, _ = reduce(random_scramble(rng, l, n).apply(A))
            if canonical_form(d2) != c or not decide_iso(d, d2):
                return False, "a scrambled copy reduced to a different class"
        return True, f"{scrambles} scrambles agree"

    checks = [("dual criterion", dual), ("modularity fast vs brute", modularity),
              ("type-O fast vs brute", type_O), ("codimension trichotomy", trichotomy)]
    if n <= BRUTE_MAX_N:
        checks += [("codim fast vs brute", codim), ("isotropy classes fast vs brute", strata)]
    checks += [("census within enumeration", census), ("hilbert preservation", hilbert),
               ("trace replay", replay), ("orbifold decision", orbifold),
               ("scramble invariance", invariance)]
    return checks


def _run_battery(A: IntMatrix, args, seed: int) -> list[dict]:
    results = []
    for name, fn in _battery(A, args.max_degree, seed, args.samples, args.scrambles):
        try:
            ok, detail = fn()
        except InvariantViolation as exc:
            ok, detail = False, f"invariant violation: {exc}"
        results.append({"name": name, "ok": bool(ok), "detail": detail})
    return results


def cmd_check(args) -> dict:
    seed = _seed(args)
    if (args.input is None) == (args.corpus is None):
        raise UsageError("check needs exactly one of an input file or --corpus COUNT")
    out = {"command": "check", "version": report.VERSION, "seed": seed, "samples": args.samples}
    if args.input is not None:
        A, _ = _prepare(load_document(args.input), args.effectivize)
        require_faithful(A)
        check_one_modular(A)
        checks = _run_battery(A, args, seed)
    else:
        if args.corpus < 1:
            raise UsageError("--corpus needs a positive count")
        failed: dict = {}
        for i, A in enumerate(random_corpus(args.corpus, seed)):
            for c in _run_battery(A, args, seed + i):
                entry = failed.setdefault(c["name"], [0, 0, None])
                entry[0] += 1
                if not c["ok"]:
                    entry[1] += 1
                    if entry[2] is None:
                        entry[2] = f"corpus[{i}] {A.tolist()}: {c['detail']}"
        checks = [{"name": name, "ok": bad == 0,
                   "detail": f"{total - bad}/{total} agree" + (f"; first failure {first}" if first else "")}
                  for name, (total, bad, first) in failed.items()]
        out["corpus"] = args.corpus
    out["checks"] = checks
    out["ok"] = all(c["ok"] for c in checks)
    return out


def _seed(args) -> int:
    if args.seed is None:
        if args.deterministic:
            raise UsageError("--deterministic requires an explicit --seed")
        return 0
    return args.seed


# --- entry point ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--effectivize", action="store_true",
                        help="replace an unfaithful torus by its image before working")
    common.add_argument("--max-degree", type=int, default=12, metavar="D")
    common.add_argument("--seed", type=int, default=None, metavar="S")
    common.add_argument("--samples", type=int, default=200, metavar="K")
    common.add_argument("--deterministic", action="store_true",
                        help="refuse to run randomized commands without --seed")

    p = _Parser(prog="torusquot", description="Symplectic quotients by torus actions.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    a = sub.add_parser("analyze", parents=[common], help="per-module predicates and strata")
    a.add_argument("input")
    r = sub.add_parser("reduce", parents=[common], help="reduce to minimal data, with the trace")
    r.add_argument("input")
    i = sub.add_parser("iso", parents=[common], help="decide isomorphism of two reduced data")
    i.add_argument("first")
    i.add_argument("second")
    h = sub.add_parser("hilbert", parents=[common], help="truncated Hilbert series")
    h.add_argument("input")
    c = sub.add_parser("check", parents=[common], help="run the oracle battery")
    c.add_argument("input", nargs="?")
    c.add_argument("--corpus", type=int, default=None, metavar="COUNT",
                   help="run on a seeded random corpus instead of a file")
    c.add_argument("--scrambles", type=int, default=3, metavar="K",
                   help="scrambled copies compared per matrix")
    return p


COMMANDS = {"analyze": cmd_analyze, "reduce": cmd_reduce, "iso": cmd_iso,
            "hilbert": cmd_hilbert, "check": cmd_check}


def _emit(doc: dict, fmt: str, stream) -> None:
    stream.write(report.dumps(doc) if fmt == "json" else report.render_text(doc))


def main(argv: Optional[list[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    if args.max_degree < 0 or args.samples < 1:
        print("torusquot: error: --max-degree must be >= 0 and --samples >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        doc = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"torusquot: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InputError as exc:
        err = {"command": args.command, **report.error_json(type(exc).__name__, exc)}
        _emit(err, args.format, sys.stdout)
        print(f"torusquot: {exc} (hypothesis: {exc.hypothesis})", file=sys.stderr)
        return EXIT_INPUT
    except InvariantViolation as exc:
        err = {"command": args.command, **report.error_json("InvariantViolation", exc)}
        _emit(err, args.format, sys.stdout)
        print(f"torusquot: internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    _emit(doc, args.format, sys.stdout)
    if args.command == "check" and not doc["ok"]:
        return EXIT_INVARIANT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

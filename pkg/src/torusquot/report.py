"""JSON documents for every result type, and a plain-text rendering of them.

All documents are built from plain dicts, lists and ints in a fixed key
order, so ``dumps`` is byte-deterministic.  The text view only ever reads a
JSON document, never the live objects.
"""

from __future__ import annotations

import json
from typing import Any, Optional

from .analysis import (
    AnalysisReport,
    SignVector,
    TorusModule,
    dims,
    is_stable,
    make_stable_utcls,
    modularity_index,
    validate_faithful,
)
from .errors import InputError
from .isoclass import CanonicalForm, IsoVerdict, IsoWitness, canonical_form
from .lattice import IntMatrix, Lattice
from .oracle import HilbertTruncation
from .reduction import ReducedData, ReductionStep, ReductionTrace
from .strata import (
    SliceDatum,
    StratumRecord,
    TypeOCertificate,
    codim_N_sing,
    detect_type_O,
    enumerate_isotropy_classes,
    is_minimal,
    slice_m_vector,
)

VERSION = 1


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


# --- input documents ---------------------------------------------------------

def parse_input(text: str) -> dict:
    """Validate an input document; raises ``ValueError`` on malformed input."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ValueError("input must be a JSON object")
    if doc.get("version") != VERSION:
        raise ValueError(f"unsupported version {doc.get('version')!r}, expected {VERSION}")
    l, n, rows = doc.get("l"), doc.get("n"), doc.get("matrix")
    if not all(isinstance(x, int) and not isinstance(x, bool) for x in (l, n)) or l < 0 or n < 0:
        raise ValueError("'l' and 'n' must be nonnegative integers")
    if not isinstance(rows, list) or len(rows) != l:
        raise ValueError(f"'matrix' must be a list of {l} rows")
    for row in rows:
        if not isinstance(row, list) or len(row) != n or not all(_is_int(x) for x in row):
            raise ValueError(f"every matrix row must be a list of {n} integers")
    moduli = doc.get("cyclic_moduli", [])
    if not isinstance(moduli, list) or not all(_is_int(m) and m >= 2 for m in moduli):
        raise ValueError("'cyclic_moduli' must be a list of integers >= 2")
    labels = doc.get("labels")
    if labels is not None and (not isinstance(labels, list) or len(labels) != n
                               or not all(isinstance(s, str) for s in labels)):
        raise ValueError(f"'labels' must be a list of {n} strings")
    twist = doc.get("twist", [])
    if not isinstance(twist, list):
        raise ValueError("'twist' must be a list")
    for t in twist:
        if (not isinstance(t, dict) or not _is_int(t.get("modulus")) or t["modulus"] < 2
                or not isinstance(t.get("residues"), list) or len(t["residues"]) != n
                or not all(_is_int(x) for x in t["residues"])):
            raise ValueError("each twist entry needs an integer 'modulus' >= 2 and n integer 'residues'")
    return doc


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def module_of(doc: dict) -> TorusModule:
    A = IntMatrix(doc["l"], doc["n"], [x for row in doc["matrix"] for x in row])
    twist = tuple((t["modulus"], tuple(t["residues"])) for t in doc.get("twist", []))
    labels = tuple(doc["labels"]) if doc.get("labels") is not None else None
    return TorusModule(A, labels, twist)


# --- building blocks ---------------------------------------------------------

def matrix_json(M: IntMatrix) -> dict:
    return {"l": M.rows, "n": M.cols, "rows": M.tolist()}


def matrix_from_json(d: Optional[dict]) -> Optional[IntMatrix]:
    if d is None:
        return None
    return IntMatrix(d["l"], d["n"], [x for row in d["rows"] for x in row])


def lattice_json(L: Lattice) -> dict:
    return {"ambient_rank": L.ambient_rank, "basis": [list(b) for b in L.basis]}


def lattice_from_json(d: dict) -> Lattice:
    return Lattice(d["ambient_rank"], tuple(tuple(b) for b in d["basis"]))


def module_json(M: TorusModule) -> dict:
    out = {"matrix": matrix_json(M.A)}
    if M.twist:
        out["twist"] = [{"modulus": d, "residues": list(r)} for d, r in M.twist]
    if M.labels is not None:
        out["labels"] = list(M.labels)
    return out


def module_from_json(d: Optional[dict]) -> Optional[TorusModule]:
    if d is None:
        return None
    twist = tuple((t["modulus"], tuple(t["residues"])) for t in d.get("twist", []))
    labels = tuple(d["labels"]) if "labels" in d else None
    return TorusModule(matrix_from_json(d["matrix"]), labels, twist)


def certificate_json(c: TypeOCertificate) -> dict:
    return {"r": c.r, "fixed_columns": list(c.fixed_columns), "moving_columns": list(c.moving_columns)}


def certificate_from_json(d: dict) -> TypeOCertificate:
    return TypeOCertificate(d["r"], tuple(d["fixed_columns"]), tuple(d["moving_columns"]))


def slice_json(s: SliceDatum) -> dict:
    return {
        "certificate": certificate_json(s.certificate),
        "H0_lattice": lattice_json(s.H0_lattice),
        "m_vec": list(s.m_vec),
        "m": s.m,
        "maximal": s.maximal,
    }


def slice_from_json(d: dict) -> SliceDatum:
    return SliceDatum(certificate_from_json(d["certificate"]), lattice_from_json(d["H0_lattice"]),
                      tuple(d["m_vec"]), d["m"], d["maximal"])


def stratum_json(s: StratumRecord) -> dict:
    return {
        "isotropy_dim": s.dim,
        "isotropy_lattice": lattice_json(s.isotropy_lattice),
        "character_lattice": lattice_json(s.character_lattice),
        "finite_part": list(s.finite_part),
        "fixed_columns": list(s.fixed_columns),
        "codim_in_quotient": s.codim_in_quotient,
    }


def reduced_json(d: ReducedData) -> dict:
    return {
        "cyclic_moduli": list(d.cyclic_moduli),
        "trivial_dim": d.trivial_dim,
        "torus_block": None if d.torus_block is None else module_json(d.torus_block),
    }


def reduced_from_json(d: dict) -> ReducedData:
    return ReducedData(tuple(d["cyclic_moduli"]), module_from_json(d["torus_block"]), d["trivial_dim"])


def step_json(s: ReductionStep) -> dict:
    return {
        "case": s.case.value,
        "slice": slice_json(s.slice),
        "K0_lattice": lattice_json(s.K0_lattice),
        "lambda_R": None if s.lambda_R is None else list(s.lambda_R),
        "common_value": s.common_value,
        "emitted_modulus": s.emitted_modulus,
        "trivial_columns": list(s.trivial_columns),
        "successor": module_json(s.successor),
    }


def step_from_json(d: dict) -> ReductionStep:
    from .reduction import Case

    return ReductionStep(
        Case(d["case"]), slice_from_json(d["slice"]), lattice_from_json(d["K0_lattice"]),
        module_from_json(d["successor"]),
        None if d["lambda_R"] is None else tuple(d["lambda_R"]),
        d["common_value"], d["emitted_modulus"], tuple(d["trivial_columns"]),
    )


def trace_json(t: ReductionTrace) -> dict:
    return {
        "initial": module_json(t.initial),
        "utcls_sign": list(t.utcls_sign.signs),
        "trivial_columns": list(t.trivial_columns),
        "steps": [step_json(s) for s in t.steps],
        "result": None if t.result is None else reduced_json(t.result),
    }


def trace_from_json(d: dict) -> ReductionTrace:
    return ReductionTrace(
        module_from_json(d["initial"]), SignVector(tuple(d["utcls_sign"])), tuple(d["trivial_columns"]),
        [step_from_json(s) for s in d["steps"]],
        None if d["result"] is None else reduced_from_json(d["result"]),
    )


def canonical_json(c: CanonicalForm) -> dict:
    out = {
        "version": VERSION,
        "cyclic_moduli": list(c.cyclic_moduli),
        "trivial_dim": c.trivial_dim,
        "canonical_matrix": None if c.canonical_matrix is None else matrix_json(c.canonical_matrix),
    }
    if c.canonical_relations is not None:
        out["canonical_relations"] = matrix_json(c.canonical_relations)
    out["digest"] = c.digest
    return out


def canonical_from_json(d: dict) -> CanonicalForm:
    return CanonicalForm(tuple(d["cyclic_moduli"]), d["trivial_dim"], matrix_from_json(d["canonical_matrix"]),
                         d["digest"], matrix_from_json(d.get("canonical_relations")))


def witness_json(w: IsoWitness) -> dict:
    return {
        "row_transform": matrix_json(w.row_transform),
        "column_permutation": list(w.column_permutation),
        "sign_vector": list(w.sign_vector.signs),
        "moduli_bijection": list(w.moduli_bijection),
        "relation_transform": None if w.relation_transform is None else matrix_json(w.relation_transform),
    }


def verdict_json(v: IsoVerdict) -> dict:
    return {
        "verdict": "isomorphic" if v.isomorphic else "not isomorphic",
        "reason": v.reason,
        "witness": None if v.witness is None else witness_json(v.witness),
    }


def series_json(h: HilbertTruncation) -> dict:
    return {"max_degree": h.max_degree, "coefficients": list(h.coefficients)}


# --- analysis ----------------------------------------------------------------

def analyze(A: IntMatrix) -> AnalysisReport:
    """Every per-module predicate at once.  Raises for unfaithful or non-1-modular input."""
    from .analysis import check_one_modular, require_faithful

    require_faithful(A)
    k = modularity_index(A)
    check_one_modular(A)
    stable = bool(is_stable(A))
    eps = make_stable_utcls(A)
    B = eps.apply(A)
    certs = detect_type_O(B)
    slices = [slice_m_vector(B, c, certs) for c in certs]
    ds, dq = dims(A)
    return AnalysisReport(
        faithful=True,
        modularity_index=k,
        stable=stable,
        utcls_sign=eps,
        dim_shell=ds,
        dim_quotient=dq,
        minimal=is_minimal(B),
        codim_sing=codim_N_sing(B),
        type_O_certificates=slices,
        strata=enumerate_isotropy_classes(B),
    )


def analysis_json(A: IntMatrix, r: AnalysisReport) -> dict:
    return {
        "input": matrix_json(A),
        "faithful": r.faithful,
        "invariant_factors": list(validate_faithful(A).invariant_factors),
        "modularity_index": r.modularity_index,
        "stable": r.stable,
        "utcls_sign": None if r.utcls_sign is None else list(r.utcls_sign.signs),
        "dim_shell": r.dim_shell,
        "dim_quotient": r.dim_quotient,
        "type_O": bool(r.type_O_certificates),
        "minimal": r.minimal,
        "codim_sing": r.codim_sing,
        "type_O_certificates": [slice_json(s) for s in r.type_O_certificates],
        "strata": [stratum_json(s) for s in r.strata],
    }


def error_json(kind: str, exc: BaseException) -> dict:
    out = {"error": kind, "message": str(exc)}
    if isinstance(exc, InputError):
        out["hypothesis"] = exc.hypothesis
    return out


# --- text rendering ----------------------------------------------------------

def _rows(m: Optional[dict]) -> str:
    if m is None:
        return "-"
    return "[" + ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in m["rows"]) + "]"


def _module_text(m: Optional[dict]) -> str:
    if m is None:
        return "none"
    s = _rows(m["matrix"])
    for t in m.get("twist", []):
        s += f" twisted by Z/{t['modulus']} residues {t['residues']}"
    return s


def render_text(doc: dict) -> str:
    """Human-readable summary of a report document."""
    kind = doc.get("command")
    lines = [f"torusquot {kind}"]
    if "error" in doc:
        lines.append(f"error ({doc['error']}): {doc['message']}")
        if "hypothesis" in doc:
            lines.append(f"violated hypothesis: {doc['hypothesis']}")
        return "\n".join(lines) + "\n"
    if kind == "analyze":
        a = doc["analysis"]
        if doc.get("effectivized"):
            lines.append(f"effectivized to {_rows(doc['effectivized']['matrix'])}")
        for key in ("faithful", "modularity_index", "stable", "utcls_sign", "dim_shell",
                    "dim_quotient", "type_O", "minimal", "codim_sing"):
            lines.append(f"  {key:<18}{a[key]}")
        lines.append(f"  type-O certificates ({len(a['type_O_certificates'])}):")
        for s in a["type_O_certificates"]:
            c = s["certificate"]
            lines.append(f"    r={c['r']} S={c['fixed_columns']} W={c['moving_columns']} "
                         f"m_vec={s['m_vec']} m={s['m']} maximal={s['maximal']}")
        lines.append(f"  strata ({len(a['strata'])}):")
        lines.append("    dim  finite        codim  fixed columns")
        for s in a["strata"]:
            lines.append(f"    {s['isotropy_dim']:<4} {str(s['finite_part']):<13} "
                         f"{s['codim_in_quotient']:<6} {s['fixed_columns']}")
    elif kind == "reduce":
        r = doc["reduced"]
        lines.append(f"  cyclic moduli     {r['cyclic_moduli']}")
        lines.append(f"  trivial summands  {r['trivial_dim']}")
        lines.append(f"  torus block       {_module_text(r['torus_block'])}")
        lines.append(f"  orbifold          {doc['orbifold']}")
        lines.append(f"  canonical digest  {doc['canonical_form']['digest']}")
        lines.append(f"  steps ({len(doc['trace']['steps'])}):")
        for i, s in enumerate(doc["trace"]["steps"]):
            c = s["slice"]["certificate"]
            extra = (f"emits Z/{s['emitted_modulus']}" if s["emitted_modulus"] is not None
                     else f"lambda_R={s['lambda_R']} common value {s['common_value']}")
            lines.append(f"    {i}: {s['case']} r={c['r']} W={c['moving_columns']} "
                         f"m_vec={s['slice']['m_vec']} m={s['slice']['m']}, {extra}, "
                         f"successor {_module_text(s['successor'])}")
    elif kind == "iso":
        lines.append(f"  verdict  {doc['verdict']}")
        if doc.get("reason"):
            lines.append(f"  reason   {doc['reason']}")
        w = doc.get("witness")
        if w:
            lines.append(f"  row transform       {_rows(w['row_transform'])}")
            lines.append(f"  column permutation  {w['column_permutation']}")
            lines.append(f"  sign vector         {w['sign_vector']}")
    elif kind == "hilbert":
        for key in ("ambient", "shell", "reduced"):
            lines.append(f"  {key:<8}{doc[key]['coefficients']}")
        lines.append(f"  shell equals reduced: {doc['shell_equals_reduced']}")
    elif kind == "check":
        for c in doc["checks"]:
            lines.append(f"  {'ok  ' if c['ok'] else 'FAIL'} {c['name']}: {c['detail']}")
        lines.append(f"  {'all checks passed' if doc['ok'] else 'disagreement found'}")
    return "\n".join(lines) + "\n"


def canonical_of(d: ReducedData) -> dict:
    return canonical_json(canonical_form(d))

"""Canonical forms of reduced data and the isomorphism decision.

Two torus blocks are identified when they differ by a unimodular change of
basis of the character lattice (left multiplication), a relabelling of the
coordinates (column permutation) and swapping ``x_i`` with ``xi_i`` (column
sign flip).  The canonical matrix is the minimum of ``HNF(A P diag(eps))``
over all permutations and signs, under an order that reads the matrix column
by column and compares entries by absolute value first, positive before
negative.  Reading by columns makes the order compatible with prefixes: the
first k columns of the HNF of a matrix are the HNF of its first k columns,
so a branch can be cut as soon as its prefix exceeds the incumbent.

A block whose group has a finite component group (a twist) is classified by
its relation lattice instead: for a faithful action the character group is
``Z^n / Rel``, so two such blocks are isomorphic exactly when a signed
permutation carries one relation lattice onto the other.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Optional

from .analysis import SignVector, TorusModule, is_k_modular
from .errors import InvariantViolation, NotMinimalError
from fractions import Fraction

from .lattice import IntMatrix, hermite_normal_form, inverse_unimodular, is_unimodular
from .reduction import ReducedData
from .strata import is_minimal

FORMAT_VERSION = 1


@dataclass(frozen=True)
class CanonicalForm:
    cyclic_moduli: tuple[int, ...]
    trivial_dim: int
    canonical_matrix: Optional[IntMatrix]
    digest: str
    # only for twisted blocks: canonical basis of the relation lattice
    canonical_relations: Optional[IntMatrix] = None


@dataclass(frozen=True)
class NormalizationPath:
    """``canonical == U @ A[:, perm] @ diag(signs)``."""

    U: IntMatrix
    perm: tuple[int, ...]
    signs: tuple[int, ...]


@dataclass(frozen=True)
class IsoWitness:
    row_transform: IntMatrix
    column_permutation: tuple[int, ...]  # column j of A1 @ P is column perm[j] of A1
    sign_vector: SignVector
    moduli_bijection: tuple[int, ...]
    relation_transform: Optional[IntMatrix] = None


@dataclass(frozen=True)
class IsoVerdict:
    isomorphic: bool
    witness: Optional[IsoWitness] = None
    reason: Optional[str] = None

    def __bool__(self) -> bool:
        return self.isomorphic


def _entry_key(x: int) -> tuple[int, int]:
    return (abs(x), x < 0)


def _colmajor_key(M: IntMatrix, upto: int) -> list:
    return [_entry_key(M[i, j]) for j in range(upto) for i in range(M.rows)]


def _signed_columns(A: IntMatrix, perm, signs) -> IntMatrix:
    return IntMatrix.from_columns(
        [tuple(s * x for x in A.column(p)) for p, s in zip(perm, signs)], A.rows
    )


def canonical_matrix(A: IntMatrix) -> tuple[IntMatrix, NormalizationPath]:
    """Minimal signed-permuted HNF of ``A`` and the moves reaching it."""
    l, n = A.shape
    if n == 0:
        return A, NormalizationPath(IntMatrix.identity(l), (), ())
    cols = A.columns()
    best: list = [None, None, None]  # key, perm, signs

    def search(perm, signs, remaining):
        k = len(perm)
        if k:
            H, _ = hermite_normal_form(_signed_columns(A, perm, signs))
            key = _colmajor_key(H, k)
            if best[0] is not None:
                if key > best[0][: len(key)]:
                    return
            if not remaining:
                if best[0] is None or key < best[0]:
                    best[:] = [key, tuple(perm), tuple(signs)]
                return
        tried = set()
        for j in remaining:
            # the first column's sign can be fixed: -I is a row move
            for s in ((1,) if k == 0 else (1, -1)):
                v = tuple(s * x for x in cols[j])
                if v in tried:
                    continue
                tried.add(v)
                rest = [i for i in remaining if i != j]
                search(perm + [j], signs + [s], rest)

    search([], [], list(range(n)))
    _, perm, signs = best
    M = _signed_columns(A, perm, signs)
    H, U = hermite_normal_form(M)
    return H, NormalizationPath(U, perm, signs)


def _digest(moduli, trivial, matrix: Optional[IntMatrix], relations: Optional[IntMatrix] = None) -> str:
    doc = {
        "version": FORMAT_VERSION,
        "cyclic_moduli": list(moduli),
        "trivial_dim": trivial,
        "canonical_matrix": None if matrix is None else {
            "l": matrix.rows, "n": matrix.cols, "rows": matrix.tolist(),
        },
    }
    if relations is not None:
        doc["canonical_relations"] = {"k": relations.rows, "n": relations.cols, "rows": relations.tolist()}
    blob = json.dumps(doc, separators=(",", ":"), sort_keys=False)
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def canonical_form_with_path(d: ReducedData) -> tuple[CanonicalForm, Optional[NormalizationPath]]:
    moduli = tuple(sorted(d.cyclic_moduli))
    if d.torus_block is None:
        return CanonicalForm(moduli, d.trivial_dim, None, _digest(moduli, d.trivial_dim, None)), None
    B = d.torus_block
    H, path = canonical_matrix(B.A)
    if not B.twist:
        return CanonicalForm(moduli, d.trivial_dim, H, _digest(moduli, d.trivial_dim, H)), path
    R, rpath = canonical_matrix(B.relation_lattice().matrix())
    digest = _digest(moduli, d.trivial_dim, H, R)
    return CanonicalForm(moduli, d.trivial_dim, H, digest, R), rpath


def canonical_form(d: ReducedData) -> CanonicalForm:
    return canonical_form_with_path(d)[0]


def _require_minimal(d: ReducedData, which: str) -> None:
    B = d.torus_block
    if B is None:
        return
    A = B.A
    # stability is not required: a sign flip swaps x_i and xi_i, which is one of the moves
    if not (B.is_faithful() and is_k_modular(A, 1) and is_minimal(A)):
        raise NotMinimalError(f"{which} is not minimal reduced data; reduce it first")


def decide_iso(d1: ReducedData, d2: ReducedData) -> IsoVerdict:
    _require_minimal(d1, "first input")
    _require_minimal(d2, "second input")
    if d1.dims != d2.dims:
        return IsoVerdict(False, reason=f"torus block dims differ: {d1.dims} vs {d2.dims}")
    if sorted(d1.cyclic_moduli) != sorted(d2.cyclic_moduli):
        return IsoVerdict(False, reason="cyclic moduli differ")
    if d1.trivial_dim != d2.trivial_dim:
        return IsoVerdict(False, reason="trivial summands differ")
    c1, p1 = canonical_form_with_path(d1)
    c2, p2 = canonical_form_with_path(d2)
    if c1.canonical_matrix != c2.canonical_matrix:
        return IsoVerdict(False, reason="canonical matrices differ")
    if c1.canonical_relations != c2.canonical_relations:
        return IsoVerdict(False, reason="relation lattices differ")
    bij = tuple(range(len(d1.cyclic_moduli)))
    if p1 is None:
        w = IsoWitness(IntMatrix.identity(0), (), SignVector(()), bij)
    else:
        # U1 A1[:, perm1] E1 = U2 A2[:, perm2] E2
        R = inverse_unimodular(p2.U) @ p1.U
        n = len(p1.perm)
        perm, signs = [0] * n, [1] * n
        for k in range(n):
            perm[p2.perm[k]] = p1.perm[k]
            signs[p2.perm[k]] = p1.signs[k] * p2.signs[k]
        if d1.torus_block.twist:
            w = _twisted_witness(d1.torus_block, d2.torus_block, R, perm, signs, bij)
        else:
            w = IsoWitness(R, tuple(perm), SignVector(tuple(signs)), bij)
    if not verify_witness(d1, d2, w):
        raise InvariantViolation("constructed isomorphism witness failed verification")
    return IsoVerdict(True, w)


def _solve_rows(A1: IntMatrix, A2: IntMatrix) -> Optional[IntMatrix]:
    """The unique rational X with X A1 = A2 (A1 of full row rank), if integral."""
    l, n = A1.shape
    # Gauss-Jordan on [A1 A1^T | A1 A2^T] gives X^T
    G = [[Fraction(sum(A1[i, k] * A1[j, k] for k in range(n))) for j in range(l)]
         + [Fraction(sum(A1[i, k] * A2[j, k] for k in range(n))) for j in range(A2.rows)]
         for i in range(l)]
    for c in range(l):
        p = next(r for r in range(c, l) if G[r][c] != 0)
        G[c], G[p] = G[p], G[c]
        piv = G[c][c]
        G[c] = [x / piv for x in G[c]]
        for r in range(l):
            if r != c and G[r][c] != 0:
                f = G[r][c]
                G[r] = [a - f * b for a, b in zip(G[r], G[c])]
    XT = [row[l:] for row in G]
    if any(x.denominator != 1 for row in XT for x in row):
        return None
    return IntMatrix.from_rows([[int(XT[i][j]) for i in range(l)] for j in range(A2.rows)], l)


def _twisted_witness(B1: TorusModule, B2: TorusModule, T, perm, signs, bij) -> IsoWitness:
    e = SignVector(tuple(signs))
    moved = B1.A.select_columns(perm).scale_columns(e.signs)
    R = _solve_rows(moved, B2.A)
    if R is None:
        raise InvariantViolation("free parts of isomorphic twisted blocks are not row-equivalent")
    return IsoWitness(R, tuple(perm), e, bij, relation_transform=T)


def _moved_relations(Rel: IntMatrix, perm, signs) -> IntMatrix:
    return Rel.select_columns(perm).scale_columns(signs)


def verify_witness(d1: ReducedData, d2: ReducedData, w: IsoWitness) -> bool:
    m1, m2 = d1.cyclic_moduli, d2.cyclic_moduli
    if len(m1) != len(m2) or sorted(w.moduli_bijection) != list(range(len(m1))):
        return False
    if any(m1[i] != m2[w.moduli_bijection[i]] for i in range(len(m1))):
        return False
    if d1.trivial_dim != d2.trivial_dim:
        return False
    B1, B2 = d1.torus_block, d2.torus_block
    if B1 is None or B2 is None:
        return B1 is None and B2 is None
    A1, A2 = B1.A, B2.A
    R = w.row_transform
    if R.shape != (A2.rows, A1.rows) or A1.cols != A2.cols:
        return False
    if sorted(w.column_permutation) != list(range(A1.cols)) or len(w.sign_vector) != A1.cols:
        return False
    if not is_unimodular(R):
        return False
    moved = (R @ A1).select_columns(w.column_permutation).scale_columns(w.sign_vector.signs)
    if moved != A2:
        return False
    if not (B1.twist or B2.twist):
        return True
    # the finite parts must match too: compare the relation lattices exactly
    T = w.relation_transform
    rel1 = B1.relation_lattice().matrix()
    rel2 = B2.relation_lattice().matrix()
    if T is None or T.shape != (rel1.rows, rel1.rows) or rel1.rows != rel2.rows:
        return False
    if not is_unimodular(T):
        return False
    return T @ _moved_relations(rel1, w.column_permutation, w.sign_vector.signs) == rel2

"""Per-module predicates on a torus weight matrix.

A weight matrix ``A`` (l x n) encodes the diagonal action of ``(C^*)^l`` on
``C^n``: column ``i`` is the character by which the torus scales the i-th
coordinate.  Columns are indexed from 0 throughout the package.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, product
from typing import Optional, Sequence

from .errors import InvariantViolation, NotFaithfulError, NotOneModularError
from .lattice import (
    IntMatrix,
    Lattice,
    _hnf_lattice,
    invariant_factors,
    kernel_lattice,
    rank_rational,
    rational_feasibility,
    smith_normal_form,
    inverse_unimodular,
    hermite_normal_form,
)


@dataclass(frozen=True)
class TorusModule:
    """Weights of a module over ``T x F`` with ``T`` a torus and ``F`` finite abelian.

    ``A`` holds the torus weights.  ``twist`` is usually empty; otherwise each
    entry ``(d, residues)`` is a cyclic factor ``Z/d`` of ``F`` scaling column
    ``j`` by ``zeta_d ** residues[j]``.  Only reduction produces twists.
    """

    A: IntMatrix
    labels: Optional[tuple[str, ...]] = None
    twist: tuple[tuple[int, tuple[int, ...]], ...] = ()

    def __post_init__(self):
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != self.A.cols:
                raise ValueError("one label per column required")
            object.__setattr__(self, "labels", labels)
        twist = tuple((int(d), tuple(int(x) % int(d) for x in row)) for d, row in self.twist)
        if any(d < 2 or len(row) != self.A.cols for d, row in twist):
            raise ValueError("twist entries need a modulus >= 2 and one residue per column")
        object.__setattr__(self, "twist", twist)

    @property
    def l(self) -> int:
        return self.A.rows

    @property
    def n(self) -> int:
        return self.A.cols

    @property
    def component_group(self) -> tuple[int, ...]:
        return tuple(d for d, _ in self.twist)

    def _augmented(self) -> IntMatrix:
        """Rows ``[A | 0]`` and ``[residues | -d e_i]``: its kernel projects onto the relations."""
        l, n = self.A.shape
        k = len(self.twist)
        rows = [list(self.A.row(i)) + [0] * k for i in range(l)]
        for i, (d, res) in enumerate(self.twist):
            rows.append(list(res) + [-d if j == i else 0 for j in range(k)])
        return IntMatrix.from_rows(rows, n + k)

    def relation_lattice(self) -> Lattice:
        """Exponent vectors ``u`` with ``prod chi_j^{u_j}`` trivial on the whole group."""
        if not self.twist:
            return kernel_lattice(self.A)
        K = kernel_lattice(self._augmented())
        return _hnf_lattice([b[: self.n] for b in K.basis], self.n)

    def is_faithful(self) -> bool:
        """Columns generate the character group ``Z^l + sum Z/d``."""
        if not self.twist:
            return bool(validate_faithful(self.A))
        l, n = self.A.shape
        k = len(self.twist)
        cols = [self.A.column(j) + tuple(res[j] for _, res in self.twist) for j in range(n)]
        cols += [(0,) * l + tuple(d if i == t else 0 for t in range(k)) for i, (d, _) in enumerate(self.twist)]
        M = IntMatrix.from_columns(cols, l + k)
        return all(f == 1 for f in invariant_factors(M)) and len(invariant_factors(M)) == l + k


@dataclass(frozen=True)
class SignVector:
    signs: tuple[int, ...]

    def __post_init__(self):
        signs = tuple(int(s) for s in self.signs)
        if any(s not in (1, -1) for s in signs):
            raise ValueError("sign vector entries must be +1 or -1")
        object.__setattr__(self, "signs", signs)

    @classmethod
    def identity(cls, n: int) -> "SignVector":
        return cls((1,) * n)

    def apply(self, A: IntMatrix) -> IntMatrix:
        return A.scale_columns(self.signs)

    def compose(self, other: "SignVector") -> "SignVector":
        return SignVector(tuple(a * b for a, b in zip(self.signs, other.signs)))

    @property
    def is_identity(self) -> bool:
        return all(s == 1 for s in self.signs)

    def __len__(self) -> int:
        return len(self.signs)


@dataclass(frozen=True)
class FaithfulnessCertificate:
    faithful: bool
    invariant_factors: tuple[int, ...]
    offending: tuple[int, ...]

    def __bool__(self) -> bool:
        return self.faithful


@dataclass(frozen=True)
class StabilityCertificate:
    stable: bool
    witnesses: tuple[tuple[int, ...], ...] = ()
    failing_column: Optional[int] = None

    def __bool__(self) -> bool:
        return self.stable


@dataclass
class AnalysisReport:
    faithful: bool
    modularity_index: int
    stable: bool
    utcls_sign: Optional[SignVector]
    dim_shell: int
    dim_quotient: int
    minimal: bool
    codim_sing: Optional[int]
    type_O_certificates: list = field(default_factory=list)
    strata: list = field(default_factory=list)


# --- rank helpers ------------------------------------------------------------

@lru_cache(maxsize=65536)
def _subset_rank(A: IntMatrix, cols: tuple[int, ...]) -> int:
    return rank_rational(A.select_columns(cols))


def submatrix_rank(A: IntMatrix, cols: Sequence[int]) -> int:
    return _subset_rank(A, tuple(sorted(cols)))


# --- operations --------------------------------------------------------------

def validate_faithful(A: IntMatrix) -> FaithfulnessCertificate:
    """Faithful iff the columns generate Z^l, i.e. all l invariant factors are 1."""
    l, n = A.shape
    facs = invariant_factors(A)
    facs = facs + (0,) * (l - len(facs))
    offending = tuple(f for f in facs if f != 1)
    return FaithfulnessCertificate(not offending, facs, offending)


def require_faithful(A: IntMatrix) -> None:
    cert = validate_faithful(A)
    if not cert:
        raise NotFaithfulError(
            f"weight matrix is not faithful: invariant factors {list(cert.invariant_factors)}",
            cert.invariant_factors,
        )


def effectivize_with_basis(A: IntMatrix) -> tuple[TorusModule, IntMatrix]:
    """Faithful matrix ``B`` (r x n) and basis matrix ``P`` (l x r) with ``A == P @ B``.

    The columns of ``P`` are a basis of the lattice generated by the columns of
    ``A`` (the character lattice of the image torus); ``B`` is put in Hermite
    normal form, which only changes that basis.
    """
    l, n = A.shape
    U, D, V = smith_normal_form(A)
    r = sum(1 for i in range(min(l, n)) if D[i, i])
    Vinv = inverse_unimodular(V)
    B = Vinv.select_rows(range(r))
    H, W = hermite_normal_form(B)
    Uinv = inverse_unimodular(U)
    # A = Uinv D Vinv = (Uinv[:, :r] diag(d)) B = (Uinv[:, :r] diag(d) W^-1) H
    P0 = IntMatrix(l, r, (Uinv[i, k] * D[k, k] for i in range(l) for k in range(r)))
    P = P0 @ inverse_unimodular(W) if r else P0
    if P @ H != A:
        raise InvariantViolation("effectivize: basis change does not reproduce the input")
    return TorusModule(H), P


def effectivize(A: IntMatrix) -> TorusModule:
    return effectivize_with_basis(A)[0]


def is_k_modular(A: IntMatrix, k: int) -> bool:
    """Every l x (n-k) submatrix has rank l."""
    l, n = A.shape
    if k > n - l:
        return False
    return all(submatrix_rank(A, keep) == l for keep in combinations(range(n), n - k))


def modularity_index(A: IntMatrix) -> int:
    """Largest k in [0, n-l] with A k-modular; 0 when no k >= 1 qualifies."""
    l, n = A.shape
    best = 0
    for k in range(1, n - l + 1):
        if not is_k_modular(A, k):
            break
        best = k
    return best


def full_support_relation(A: IntMatrix) -> Optional[tuple[int, ...]]:
    """An integer vector in ker A with no zero entry, or None.

    A generic combination ``sum t^j b_j`` of the kernel basis works: each
    coordinate is a polynomial in ``t`` of degree < rank, so it is nonzero
    for all but finitely many ``t`` unless it vanishes identically.
    """
    l, n = A.shape
    K = kernel_lattice(A)
    if n == 0:
        return ()
    if any(all(b[i] == 0 for b in K.basis) for i in range(n)):
        return None
    d = K.rank
    for t in range(1, n * max(d - 1, 0) + 2):
        v = [sum(b[i] * t ** j for j, b in enumerate(K.basis)) for i in range(n)]
        if all(v):
            return tuple(v)
    raise InvariantViolation("generic kernel combination failed to reach full support")


def stability_witness(A: IntMatrix, i: int) -> Optional[tuple[int, ...]]:
    lower = [0] * A.cols
    lower[i] = 1
    return rational_feasibility(A, lower)


def is_stable(A: IntMatrix) -> StabilityCertificate:
    """Stable iff every column occurs with positive exponent in some invariant monomial."""
    witnesses = []
    for i in range(A.cols):
        w = stability_witness(A, i)
        if w is None:
            return StabilityCertificate(False, tuple(witnesses), i)
        witnesses.append(w)
    return StabilityCertificate(True, tuple(witnesses), None)


def make_stable_utcls(A: IntMatrix) -> SignVector:
    """Sign vector ``eps`` with ``A @ diag(eps)`` stable.

    Flipping the columns where a full-support relation is negative turns it
    into a strictly positive relation, whose monomial is an invariant involving
    every coordinate.  The exhaustive search is a fallback that has never
    been needed; the result is always re-checked.
    """
    n = A.cols
    if is_stable(A):
        return SignVector.identity(n)
    rel = full_support_relation(A)
    if rel is None:
        raise NotOneModularError("no full-support relation: the module is not 1-modular")
    eps = SignVector(tuple(1 if x > 0 else -1 for x in rel))
    if is_stable(eps.apply(A)):
        return eps
    for signs in product((1, -1), repeat=n - 1):
        cand = SignVector((1,) + signs)
        if is_stable(cand.apply(A)):
            return cand
    raise InvariantViolation("no stabilizing sign vector found for a 1-modular module")


def isotropy_dimension(A: IntMatrix, support: Sequence[int]) -> int:
    """Dimension of the isotropy group of a point whose nonzero coordinates are `support`."""
    return A.rows - submatrix_rank(A, support)


def dims(A: IntMatrix) -> tuple[int, int]:
    """(dim of the shell, dim of the symplectic quotient) = (2n - l, 2(n - l))."""
    l, n = A.shape
    return 2 * n - l, 2 * (n - l)


def check_one_modular(A: IntMatrix) -> None:
    if not is_k_modular(A, 1):
        raise NotOneModularError(
            "weight matrix is not 1-modular: some l x (n-1) submatrix is rank deficient"
        )

"""Type-O slices, isotropy classes of closed orbits and the singular locus of the shell.

Notation: a support pattern ``(P, Q)`` records which position coordinates
``x_i`` and which momentum coordinates ``xi_i`` of a point of ``V + V*`` are
nonzero.  The isotropy group of such a point is the joint kernel of the
characters indexed by ``P | Q``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import prod
from typing import Optional, Sequence

from .analysis import full_support_relation, is_stable, submatrix_rank
from .errors import InvariantViolation, NotStableError
from .lattice import (
    IntMatrix,
    Lattice,
    _hnf_lattice,
    invariant_factors,
    kernel_lattice,
    primitive_generator,
    rational_feasibility,
)


@dataclass(frozen=True, order=True)
class TypeOCertificate:
    r: int
    fixed_columns: tuple[int, ...]
    moving_columns: tuple[int, ...]


@dataclass(frozen=True)
class SliceDatum:
    certificate: TypeOCertificate
    H0_lattice: Lattice
    m_vec: tuple[int, ...]
    m: int
    maximal: bool


@dataclass(frozen=True)
class OrbifoldPresentation:
    """Generators f1, f2 (degree m) and h (degree 2) with ``f1 * f2 = coefficient * h**m``.

    ``f1 = prod x_i^{m_i}`` and ``f2 = prod xi_i^{m_i}`` over the moving
    coordinates, ``h = sum x_i xi_i``; on the slice shell ``x_i xi_i = m_i s``
    so ``h = m s`` and the relation holds with coefficient ``prod m_i^{m_i} / m^m``.
    Equivalently ``f1 f2 = (h/m)^m * prod m_i^{m_i}``.
    """

    m: int
    m_vec: tuple[int, ...]
    degrees: tuple[int, int, int]
    mvec_power_product: int
    relation_coefficient: Fraction


@dataclass(frozen=True)
class SupportPattern:
    P: frozenset
    Q: frozenset

    @classmethod
    def of(cls, P: Sequence[int] = (), Q: Sequence[int] = ()) -> "SupportPattern":
        return cls(frozenset(P), frozenset(Q))

    @property
    def involved(self) -> tuple[int, ...]:
        return tuple(sorted(self.P | self.Q))

    @property
    def both(self) -> tuple[int, ...]:
        return tuple(sorted(self.P & self.Q))


@dataclass(frozen=True)
class StratumRecord:
    isotropy_lattice: Lattice
    finite_part: tuple[int, ...]
    fixed_columns: tuple[int, ...]
    codim_in_quotient: int
    # HNF basis of the character sublattice annihilating the isotropy group;
    # this pins down the subgroup exactly and is the deduplication key.
    character_lattice: Lattice

    @property
    def dim(self) -> int:
        return self.isotropy_lattice.rank

    @property
    def signature(self) -> tuple:
        return isotropy_signature(self.character_lattice)


def isotropy_signature(character_lattice: Lattice) -> tuple:
    return (character_lattice.ambient_rank, character_lattice.basis)


def character_lattice_of(A: IntMatrix, cols: Sequence[int]) -> Lattice:
    """Z-span of the selected columns, in Hermite normal form."""
    return _hnf_lattice([A.column(j) for j in cols], A.rows)


# --- type-O detection --------------------------------------------------------

def detect_type_O(A: IntMatrix) -> list[TypeOCertificate]:
    """All (r, S) with 1 <= r <= l, |S| = n - r - 1 and rank A_S = l - r."""
    l, n = A.shape
    certs = []
    for r in range(1, l + 1):
        size = n - r - 1
        if size < 0:
            continue
        for S in combinations(range(n), size):
            if submatrix_rank(A, S) == l - r:
                W = tuple(j for j in range(n) if j not in S)
                certs.append(TypeOCertificate(r, S, W))
    certs.sort()
    return certs


def is_minimal(A: IntMatrix) -> bool:
    if A.rows == 0:
        return True
    return not detect_type_O(A)


def is_maximal(cert: TypeOCertificate, certs: Sequence[TypeOCertificate]) -> bool:
    """No certificate with a larger isotropy torus and a larger moving block."""
    S = set(cert.fixed_columns)
    return not any(c.r > cert.r and set(c.fixed_columns) <= S for c in certs)


def slice_m_vector(
    A: IntMatrix,
    cert: TypeOCertificate,
    certs: Optional[Sequence[TypeOCertificate]] = None,
) -> SliceDatum:
    """Relation vector of the moving weights restricted to the isotropy torus H0."""
    l, n = A.shape
    S, W = cert.fixed_columns, cert.moving_columns
    if len(W) != cert.r + 1 or submatrix_rank(A, S) != l - cert.r:
        raise ValueError(f"malformed type-O certificate {cert}")
    H0 = kernel_lattice(A.select_columns(S).T)
    if H0.rank != cert.r:
        raise ValueError(f"isotropy torus of {cert} has rank {H0.rank}, expected {cert.r}")
    restricted = H0.matrix() @ A.select_columns(W)
    rel = kernel_lattice(restricted)
    if rel.rank != 1:
        raise ValueError(
            f"restricted moving weights of {cert} have corank {rel.rank}, expected 1"
        )
    v = primitive_generator(rel.basis[0])
    if all(x < 0 for x in v):
        v = tuple(-x for x in v)
    if not all(x > 0 for x in v):
        raise NotStableError(
            f"slice relation {list(v)} is not sign-normalizable; stabilize the module first"
        )
    if certs is None:
        certs = detect_type_O(A)
    return SliceDatum(cert, H0, v, sum(v), is_maximal(cert, certs))


def orbifold_presentation(d: SliceDatum) -> OrbifoldPresentation:
    m = d.m
    power = prod(mi ** mi for mi in d.m_vec)
    return OrbifoldPresentation(m, d.m_vec, (m, m, 2), power, Fraction(power, m ** m))


# --- closed orbits and isotropy ---------------------------------------------

def closed_orbit_support_test(A: IntMatrix, s: SupportPattern) -> bool:
    """Does some shell point with exactly this support pattern have a closed orbit?

    (i) the weights ``A_i`` (i in P) and ``-A_i`` (i in Q) admit a strictly
    positive relation, and (ii) the moment equations on ``P & Q`` admit a
    solution with every product ``x_j xi_j`` nonzero.
    """
    P, Q = sorted(s.P), sorted(s.Q)
    cols = [A.column(j) for j in P] + [tuple(-x for x in A.column(j)) for j in Q]
    if cols:
        M = IntMatrix.from_columns(cols, A.rows)
        if rational_feasibility(M, [1] * len(cols)) is None:
            return False
    B = s.both
    if B and full_support_relation(A.select_columns(B)) is None:
        return False
    return True


def _stratum_for(A: IntMatrix, J: Sequence[int]) -> StratumRecord:
    l, n = A.shape
    AJ = A.select_columns(J)
    chars = character_lattice_of(A, J)
    H0 = kernel_lattice(AJ.T)
    finite = tuple(f for f in invariant_factors(AJ) if f > 1) if J else ()
    fixed = tuple(j for j in range(n) if A.column(j) in chars)
    w = n - len(fixed)
    return StratumRecord(H0, finite, fixed, 2 * (w - H0.rank), chars)


def enumerate_isotropy_classes(A: IntMatrix) -> list[StratumRecord]:
    """Isotropy groups of closed orbits in the shell, with stratum codimensions.

    A set ``J`` of columns is the support ``P | Q`` of a closed shell orbit
    iff ``A_J`` has a full-support relation: split a relation by sign to get
    a pattern with ``P & Q`` empty, and conversely perturb the strictly
    positive relation of a closed pattern by a full-support kernel vector on
    ``P & Q``.  So it suffices to scan column subsets.
    """
    l, n = A.shape
    if not is_stable(A):
        raise NotStableError("isotropy classification requires a stable module")
    seen = {}
    for size in range(n + 1):
        for J in combinations(range(n), size):
            if J and full_support_relation(A.select_columns(J)) is None:
                continue
            key = isotropy_signature(character_lattice_of(A, J))
            if key not in seen:
                seen[key] = _stratum_for(A, J)
    records = sorted(
        seen.values(),
        key=lambda s: (s.codim_in_quotient, -len(s.character_lattice.basis), s.character_lattice.basis),
    )
    for rec in records:
        if rec.codim_in_quotient < 0 or rec.codim_in_quotient % 2:
            raise InvariantViolation(f"bad stratum codimension {rec.codim_in_quotient}")
    return records


def codim_N_sing(A: IntMatrix) -> int:
    """Codimension in the shell of the points with positive-dimensional isotropy.

    For a pattern (P, Q) the shell points supported there form a set of
    dimension ``|P| + |Q| - rank A_{P&Q}`` (an upper bound from the fibers of
    ``(x, xi) -> (x_j xi_j)``, a lower bound from Krull).  Over patterns with
    ``P | Q = J`` this is maximized by ``P = Q = J``.
    """
    l, n = A.shape
    if l == 0:
        raise ValueError("codim_N_sing needs a positive-dimensional torus")
    best = -1
    for size in range(n + 1):
        for J in combinations(range(n), size):
            rk = submatrix_rank(A, J)
            if rk <= l - 1:
                best = max(best, 2 * len(J) - rk)
    return 2 * n - l - best

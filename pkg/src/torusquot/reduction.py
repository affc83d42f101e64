"""Reduction to minimal data by repeatedly removing type-O slices.

Each step picks a maximal type-O slice ``(r, S, W)`` of the current stable
matrix.  If the moving block ``W`` has rank ``r`` the slice quotient is a
cyclic orbifold ``C^2 / Z_m`` that splits off (case one) and the torus shrinks
to the kernel of the moving block.  If ``W`` has rank ``r + 1`` the moving
block collapses to a single coordinate on which a one-parameter subgroup acts
by a scalar (case two).  The group acting on the new module is the
stabilizer of that coordinate together with ``V^H``; it can have a finite
component group, which is kept as a twist on the successor.  Zero columns are trivial summands ``C + C*`` and are
set aside as soon as they appear.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

from .analysis import (
    SignVector,
    TorusModule,
    check_one_modular,
    is_stable,
    make_stable_utcls,
    require_faithful,
    submatrix_rank,
    is_k_modular,
)
from .errors import DisconnectedStabilizerError, InvariantViolation, NoTypeOSliceError
from .lattice import IntMatrix, Lattice, kernel_lattice, smith_normal_form, xgcd
from .strata import SliceDatum, TypeOCertificate, detect_type_O, is_maximal, is_minimal, slice_m_vector


class Case(enum.Enum):
    ONE = "CaseOne"
    TWO = "CaseTwo"


@dataclass(frozen=True)
class ReductionStep:
    case: Case
    slice: SliceDatum
    K0_lattice: Lattice
    successor: TorusModule
    lambda_R: Optional[tuple[int, ...]] = None
    common_value: Optional[int] = None
    emitted_modulus: Optional[int] = None
    # columns of the successor that were zero and moved to the trivial part
    trivial_columns: tuple[int, ...] = ()


@dataclass(frozen=True)
class ReducedData:
    cyclic_moduli: tuple[int, ...] = ()
    torus_block: Optional[TorusModule] = None
    trivial_dim: int = 0

    def __post_init__(self):
        object.__setattr__(self, "cyclic_moduli", tuple(sorted(self.cyclic_moduli)))
        if self.torus_block is not None and self.torus_block.l == 0 and not self.torus_block.twist:
            # a rank-0 block is a trivial module
            object.__setattr__(self, "trivial_dim", self.trivial_dim + self.torus_block.n)
            object.__setattr__(self, "torus_block", None)

    @property
    def dims(self) -> tuple[int, int]:
        """(n', l') of the torus block, (0, 0) when absent."""
        if self.torus_block is None:
            return (0, 0)
        return (self.torus_block.n, self.torus_block.l)


@dataclass
class ReductionTrace:
    initial: TorusModule
    utcls_sign: SignVector
    trivial_columns: tuple[int, ...]
    steps: list[ReductionStep] = field(default_factory=list)
    result: Optional[ReducedData] = None


def split_zero_columns(M: TorusModule) -> tuple[TorusModule, tuple[int, ...]]:
    """Drop the columns on which the whole group acts trivially."""
    A = M.A
    zero = tuple(
        j for j in range(A.cols)
        if not any(A.column(j)) and not any(res[j] for _, res in M.twist)
    )
    keep = [j for j in range(A.cols) if j not in zero]
    twist = tuple((d, tuple(res[j] for j in keep)) for d, res in M.twist)
    return TorusModule(A.select_columns(keep), twist=twist), zero


def select_slice(A: IntMatrix) -> tuple[TypeOCertificate, list[TypeOCertificate]]:
    """Maximal certificate with the smallest r, then the smallest fixed set."""
    certs = detect_type_O(A)
    if not certs:
        raise NoTypeOSliceError("module is minimal: no type-O slice to remove")
    for c in certs:  # already sorted by (r, fixed_columns)
        if is_maximal(c, certs):
            return c, certs
    raise InvariantViolation("type-O certificates exist but none is maximal")


def _reduce_mod_lattice(v: tuple[int, ...], L: Lattice) -> tuple[int, ...]:
    v = list(v)
    for row in L.basis:  # HNF rows: pivot is the first nonzero entry, positive
        p = next(j for j, x in enumerate(row) if x)
        q = v[p] // row[p]
        if q:
            v = [a - q * b for a, b in zip(v, row)]
    return tuple(v)


def _check_successor(M: TorusModule, where: str) -> None:
    B = M.A
    if B.rows == 0 and not M.twist:
        return
    if not M.is_faithful():
        raise InvariantViolation(f"{where}: successor is not faithful")
    if B.rows == 0:
        return
    if not is_k_modular(B, 1):
        raise InvariantViolation(f"{where}: successor is not 1-modular")
    if not is_stable(B):
        raise InvariantViolation(f"{where}: successor is not stable")


def _common_value_generator(Lam: Lattice, w0) -> tuple[int, tuple[int, ...]]:
    values = [sum(a * b for a, b in zip(lam, w0)) for lam in Lam.basis]
    g, coeffs = 0, [0] * len(values)
    for i, val in enumerate(values):
        g2, x, y = xgcd(g, val)
        coeffs = [c * x for c in coeffs]
        coeffs[i] += y
        g = g2
    lam = tuple(sum(c * b[j] for c, b in zip(coeffs, Lam.basis)) for j in range(Lam.ambient_rank))
    return g, lam


def apply_slice(A: IntMatrix, cert: TypeOCertificate, certs=None) -> ReductionStep:
    l, n = A.shape
    datum = slice_m_vector(A, cert, certs)
    S, W = cert.fixed_columns, cert.moving_columns
    AW = A.select_columns(W)
    AS = A.select_columns(S)
    K0 = kernel_lattice(AW.T)
    rank_w = submatrix_rank(A, W)
    if rank_w == cert.r:
        B = K0.matrix() @ AS if K0.rank else IntMatrix.zeros(0, len(S))
        succ, zero = split_zero_columns(TorusModule(B))
        _check_successor(succ, "case one")
        return ReductionStep(Case.ONE, datum, K0, succ, emitted_modulus=datum.m, trivial_columns=zero)
    if rank_w != cert.r + 1:
        raise InvariantViolation(f"moving block of {cert} has rank {rank_w}")

    # The new group is the stabilizer of W_D + V^H: the elements acting on the
    # moving block by a scalar, i.e. the joint kernel of the weight differences.
    w0 = AW.column(0)
    diffs = [tuple(a - b for a, b in zip(AW.column(i), w0)) for i in range(1, AW.cols)]
    Lam = kernel_lattice(IntMatrix.from_rows(diffs, l))
    if Lam.rank != l - cert.r:
        raise InvariantViolation("equal-value lattice has the wrong rank")
    g, lam = _common_value_generator(Lam, w0)
    if g == 0:
        raise InvariantViolation("equal-value lattice has only the zero common value")
    lam = _reduce_mod_lattice(lam, K0)
    if next(x for x in lam if x) < 0:
        lam = tuple(-x for x in lam)
    common = sum(a * b for a, b in zip(lam, w0))
    if abs(common) != g:
        raise InvariantViolation("lambda_R does not attain the generating common value")
    C = IntMatrix.from_columns([w0] + AS.columns(), l)
    # Its component group is the torsion of Z^l / span(diffs).  When the span
    # is not saturated the stabilizer is disconnected and the finite part acts
    # on the new module through the Smith coordinates of the differences.
    U, D, _ = smith_normal_form(IntMatrix.from_columns(diffs, l))
    twist = []
    for i in range(len(diffs)):
        d = D[i, i]
        if d > 1:
            twist.append((d, tuple(sum(U[i, k] * C[k, j] for k in range(l)) for j in range(C.cols))))
    succ, zero = split_zero_columns(TorusModule(Lam.matrix() @ C, twist=tuple(twist)))
    _check_successor(succ, "case two")
    return ReductionStep(Case.TWO, datum, K0, succ, lambda_R=lam, common_value=common, trivial_columns=zero)


def reduce_step(M: TorusModule) -> ReductionStep:
    if M.twist:
        raise DisconnectedStabilizerError(
            "a disconnected stabilizer leaves a non-minimal module; "
            "reducing modules over non-connected groups is not supported"
        )
    A = M.A
    cert, certs = select_slice(A)
    return apply_slice(A, cert, certs)


def check_reduced(d: ReducedData) -> None:
    if any(m < 2 for m in d.cyclic_moduli):
        raise InvariantViolation(f"cyclic moduli must be >= 2, got {list(d.cyclic_moduli)}")
    B = d.torus_block
    if B is None:
        return
    A = B.A
    if not B.is_faithful() or not is_k_modular(A, 1) or not is_stable(A):
        raise InvariantViolation("torus block must be faithful, 1-modular and stable")
    if not is_minimal(A):
        raise InvariantViolation("torus block is not minimal")


def _finish(current: TorusModule, moduli, trivial) -> ReducedData:
    if current.l > 0:
        return ReducedData(tuple(moduli), current, trivial)
    if current.twist:
        # cannot happen for faithful input: a finite successor arises only in case one
        raise InvariantViolation("finite successor group with a nontrivial twist")
    return ReducedData(tuple(moduli), None, trivial + current.n)


def reduce(A: IntMatrix) -> tuple[ReducedData, ReductionTrace]:
    """Reduce a faithful 1-modular weight matrix to minimal data."""
    require_faithful(A)
    check_one_modular(A)
    eps = make_stable_utcls(A)
    current, zero = split_zero_columns(TorusModule(eps.apply(A)))
    trace = ReductionTrace(TorusModule(A), eps, zero)
    moduli = []
    trivial = len(zero)
    while current.l > 0 and not is_minimal(current.A):
        step = reduce_step(current)
        if step.successor.l >= current.l:
            raise InvariantViolation("reduction step did not shrink the torus")
        trace.steps.append(step)
        if step.emitted_modulus is not None:
            moduli.append(step.emitted_modulus)
        trivial += len(step.trivial_columns)
        current = step.successor
    result = _finish(current, moduli, trivial)
    check_reduced(result)
    trace.result = result
    return result, trace


def replay_trace(trace: ReductionTrace) -> ReducedData:
    """Recompute every recorded step from the initial matrix and compare."""
    current, zero = split_zero_columns(TorusModule(trace.utcls_sign.apply(trace.initial.A)))
    if zero != trace.trivial_columns:
        raise InvariantViolation("replay: zero columns differ")
    moduli, trivial = [], len(zero)
    for i, step in enumerate(trace.steps):
        if current.twist:
            raise InvariantViolation(f"replay: step {i} starts from a twisted module")
        again = apply_slice(current.A, step.slice.certificate)
        if again != step:
            raise InvariantViolation(f"replay: step {i} differs")
        if step.emitted_modulus is not None:
            moduli.append(step.emitted_modulus)
        trivial += len(step.trivial_columns)
        current = step.successor
    result = _finish(current, moduli, trivial)
    if result != trace.result:
        raise InvariantViolation("replay: result differs")
    return result


def is_orbifold(d: ReducedData) -> bool:
    return d.torus_block is None

"""Exact integer and rational linear algebra.

Everything here works on Python ints (arbitrary precision) and
`fractions.Fraction`; no floating point is used anywhere.

Conventions
-----------
* `IntMatrix` is immutable and stores its entries row-major.
* Hermite normal form is *row style*: ``U @ M == H`` with ``U`` unimodular,
  ``H`` in row echelon form, each pivot positive, entries above a pivot
  reduced into ``[0, pivot)``, zero rows at the bottom.
* Smith normal form returns ``(U, D, V)`` with ``U @ M @ V == D``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Optional, Sequence


class IntMatrix:
    """Immutable integer matrix with an explicit shape (so 0 x n is representable)."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable[int]):
        entries = tuple(int(e) for e in entries)
        if rows < 0 or cols < 0:
            raise ValueError("matrix shape must be nonnegative")
        if len(entries) != rows * cols:
            raise ValueError(
                f"expected {rows * cols} entries for a {rows}x{cols} matrix, got {len(entries)}"
            )
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("IntMatrix is immutable")

    @classmethod
    def from_rows(cls, data: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntMatrix":
        data = [list(r) for r in data]
        if cols is None:
            if not data:
                raise ValueError("cols must be given for a matrix with no rows")
            cols = len(data[0])
        for r in data:
            if len(r) != cols:
                raise ValueError("ragged rows")
        return cls(len(data), cols, (e for r in data for e in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "IntMatrix":
        columns = [tuple(c) for c in columns]
        for c in columns:
            if len(c) != rows:
                raise ValueError("column length does not match row count")
        return cls(rows, len(columns), (columns[j][i] for i in range(rows) for j in range(len(columns))))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, (1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, [0] * (rows * cols))

    @classmethod
    def diagonal(cls, diag: Sequence[int]) -> "IntMatrix":
        n = len(diag)
        return cls(n, n, (diag[i] if i == j else 0 for i in range(n) for j in range(n)))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def tolist(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, (self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def select_columns(self, idx: Iterable[int]) -> "IntMatrix":
        idx = list(idx)
        return IntMatrix(self.rows, len(idx), (self[i, j] for i in range(self.rows) for j in idx))

    def select_rows(self, idx: Iterable[int]) -> "IntMatrix":
        idx = list(idx)
        return IntMatrix(len(idx), self.cols, (e for i in idx for e in self.row(i)))

    def scale_columns(self, factors: Sequence[int]) -> "IntMatrix":
        if len(factors) != self.cols:
            raise ValueError("one factor per column required")
        return IntMatrix(self.rows, self.cols,
                         (self[i, j] * factors[j] for i in range(self.rows) for j in range(self.cols)))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        ocols = [other.column(j) for j in range(other.cols)]
        return IntMatrix(
            self.rows, other.cols,
            (sum(a * b for a, b in zip(self.row(i), oc)) for i in range(self.rows) for oc in ocols),
        )

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        """Matrix-vector product ``M @ v``."""
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(self.row(i), v)) for i in range(self.rows))

    def is_zero(self) -> bool:
        return not any(self.entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        if self.rows == 0:
            return f"IntMatrix.zeros(0, {self.cols})"
        return f"IntMatrix.from_rows({self.tolist()})"


@dataclass(frozen=True)
class Lattice:
    """A sublattice of Z^ambient_rank given by a linearly independent basis."""

    ambient_rank: int
    basis: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        basis = tuple(tuple(int(x) for x in v) for v in self.basis)
        for v in basis:
            if len(v) != self.ambient_rank:
                raise ValueError("basis vector has wrong length")
        object.__setattr__(self, "basis", basis)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def matrix(self) -> IntMatrix:
        """Basis vectors as the rows of a matrix."""
        return IntMatrix(len(self.basis), self.ambient_rank, (x for v in self.basis for x in v))

    def __contains__(self, v: Sequence[int]) -> bool:
        return _in_row_lattice(self.basis, v, self.ambient_rank)

    def __repr__(self) -> str:
        return f"Lattice({self.ambient_rank}, {list(map(list, self.basis))})"


def _in_row_lattice(basis, v, n) -> bool:
    if not basis:
        return not any(v)
    H, _ = hermite_normal_form(IntMatrix(len(basis), n, (x for b in basis for x in b)))
    w = list(v)
    for i in range(H.rows):
        row = H.row(i)
        piv = next((j for j, x in enumerate(row) if x), None)
        if piv is None:
            break
        if w[piv] % row[piv]:
            return False
        q = w[piv] // row[piv]
        if q:
            w = [a - q * b for a, b in zip(w, row)]
    return not any(w)


# --- basic exact linear algebra ---------------------------------------------

def rank_rational(M: IntMatrix) -> int:
    """Rank over Q by fraction-free (Bareiss) elimination."""
    a = M.tolist()
    m, n = M.rows, M.cols
    rank = 0
    prev = 1
    for c in range(n):
        if rank == m:
            break
        piv = next((i for i in range(rank, m) if a[i][c]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][c]
        for i in range(rank + 1, m):
            ai = a[i]
            f = ai[c]
            for j in range(c + 1, n):
                ai[j] = (p * ai[j] - f * a[rank][j]) // prev
            ai[c] = 0
        prev = p
        rank += 1
    return rank


def determinant(M: IntMatrix) -> int:
    """Exact determinant of a square integer matrix (Bareiss)."""
    if M.rows != M.cols:
        raise ValueError("determinant of a non-square matrix")
    n = M.rows
    if n == 0:
        return 1
    a = M.tolist()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if a[i][k]), None)
            if piv is None:
                return 0
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def is_unimodular(M: IntMatrix) -> bool:
    return M.rows == M.cols and abs(determinant(M)) == 1


def inverse_unimodular(M: IntMatrix) -> IntMatrix:
    """Inverse of a unimodular matrix, computed exactly."""
    n = M.rows
    if not is_unimodular(M):
        raise ValueError("matrix is not unimodular")
    aug = [[Fraction(x) for x in M.row(i)] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for c in range(n):
        piv = next(i for i in range(c, n) if aug[i][c])
        aug[c], aug[piv] = aug[piv], aug[c]
        p = aug[c][c]
        aug[c] = [x / p for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    out = [[int(x) for x in row[n:]] for row in aug]
    return IntMatrix(n, n, (x for r in out for x in r))


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with x*a + y*b == g == gcd(a, b) >= 0."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


# --- normal forms ------------------------------------------------------------

def hermite_normal_form(M: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Row-style HNF: returns ``(H, U)`` with ``U @ M == H``."""
    m, n = M.rows, M.cols
    h = M.tolist()
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    p = 0
    for c in range(n):
        if p == m:
            break
        # Euclid on column c across rows p..m-1.
        while True:
            nz = [i for i in range(p, m) if h[i][c]]
            if not nz:
                break
            k = min(nz, key=lambda i: (abs(h[i][c]), i))
            if k != p:
                h[p], h[k] = h[k], h[p]
                u[p], u[k] = u[k], u[p]
            if len(nz) == 1:
                break
            hp, up, a = h[p], u[p], h[p][c]
            for i in range(p + 1, m):
                if h[i][c]:
                    q = h[i][c] // a
                    h[i] = [x - q * y for x, y in zip(h[i], hp)]
                    u[i] = [x - q * y for x, y in zip(u[i], up)]
        if not h[p][c]:
            continue
        if h[p][c] < 0:
            h[p] = [-x for x in h[p]]
            u[p] = [-x for x in u[p]]
        a = h[p][c]
        for i in range(p):
            q = h[i][c] // a
            if q:
                h[i] = [x - q * y for x, y in zip(h[i], h[p])]
                u[i] = [x - q * y for x, y in zip(u[i], u[p])]
        p += 1
    return (IntMatrix(m, n, (x for r in h for x in r)),
            IntMatrix(m, m, (x for r in u for x in r)))


def hnf(M: IntMatrix) -> IntMatrix:
    return hermite_normal_form(M)[0]


def smith_normal_form(M: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(U, D, V)`` with ``U @ M @ V == D``, U and V unimodular, d_1 | d_2 | ..."""
    m, n = M.rows, M.cols
    d = M.tolist()
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    v = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, k):
        d[i], d[k] = d[k], d[i]
        u[i], u[k] = u[k], u[i]

    def swap_cols(j, k):
        for r in d:
            r[j], r[k] = r[k], r[j]
        for r in v:
            r[j], r[k] = r[k], r[j]

    def add_row(dst, src, q):  # row_dst -= q * row_src
        d[dst] = [x - q * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x - q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):  # col_dst -= q * col_src
        for r in d:
            r[dst] -= q * r[src]
        for r in v:
            r[dst] -= q * r[src]

    for t in range(min(m, n)):
        while True:
            nz = [(abs(d[i][j]), i, j) for i in range(t, m) for j in range(t, n) if d[i][j]]
            if not nz:
                break
            _, i, j = min(nz)
            swap_rows(t, i)
            swap_cols(t, j)
            done = True
            for i in range(t + 1, m):
                if d[i][t]:
                    add_row(i, t, d[i][t] // d[t][t])
                    if d[i][t]:
                        done = False
            for j in range(t + 1, n):
                if d[t][j]:
                    add_col(j, t, d[t][j] // d[t][t])
                    if d[t][j]:
                        done = False
            if not done:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if d[i][j] % d[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], -1)
        if t < m and t < n and d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
    return (IntMatrix(m, m, (x for r in u for x in r)),
            IntMatrix(m, n, (x for r in d for x in r)),
            IntMatrix(n, n, (x for r in v for x in r)))


def invariant_factors(M: IntMatrix) -> tuple[int, ...]:
    """Diagonal of the Smith normal form (length min(rows, cols), zeros included)."""
    _, D, _ = smith_normal_form(M)
    return tuple(D[i, i] for i in range(min(M.rows, M.cols)))


# --- lattices ----------------------------------------------------------------

def _hnf_lattice(vectors, n) -> Lattice:
    vectors = [tuple(v) for v in vectors]
    if not vectors:
        return Lattice(n, ())
    H = hnf(IntMatrix(len(vectors), n, (x for v in vectors for x in v)))
    return Lattice(n, tuple(r for r in (H.row(i) for i in range(H.rows)) if any(r)))


def kernel_lattice(M: IntMatrix) -> Lattice:
    """Saturated lattice {v in Z^cols : M v = 0}, basis in Hermite normal form."""
    n = M.cols
    if M.rows == 0:
        return Lattice(n, tuple(IntMatrix.identity(n).row(i) for i in range(n)))
    H, U = hermite_normal_form(M.T)
    r = sum(1 for i in range(H.rows) if any(H.row(i)))
    return _hnf_lattice([U.row(i) for i in range(r, n)], n)


def row_lattice(M: IntMatrix) -> Lattice:
    """Lattice spanned by the rows of M (HNF basis)."""
    return _hnf_lattice([M.row(i) for i in range(M.rows)], M.cols)


def column_lattice(M: IntMatrix) -> Lattice:
    """Lattice in Z^rows spanned by the columns of M (HNF basis)."""
    return row_lattice(M.T)


def saturate(L: Lattice) -> Lattice:
    """Largest lattice of the same rank containing L: (Q-span of L) intersected with Z^n."""
    perp = kernel_lattice(L.matrix())
    return kernel_lattice(perp.matrix())


def saturated_sum(L1: Lattice, L2: Lattice) -> Lattice:
    """Saturation of L1 + L2."""
    if L1.ambient_rank != L2.ambient_rank:
        raise ValueError("lattices live in different ambient spaces")
    gens = _hnf_lattice(L1.basis + L2.basis, L1.ambient_rank)
    return saturate(gens)


def primitive_generator(v: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive generator")
    return tuple(x // g for x in v)


def is_saturated(L: Lattice) -> bool:
    """A lattice is saturated iff its nonzero invariant factors are all 1."""
    if L.rank == 0:
        return True
    return all(f == 1 for f in invariant_factors(L.matrix()))


# --- exact feasibility -------------------------------------------------------

def rational_feasibility(A: IntMatrix, lower: Sequence[int]) -> Optional[tuple[int, ...]]:
    """Find ``a`` with ``A a = 0`` and ``a_i >= lower[i]`` (integer lower bounds >= 0).

    Exact phase-one simplex over Fractions with Bland's rule, so the returned
    vertex is a deterministic function of the input.  The rational solution is
    scaled by the lcm of its denominators; scaling by a positive integer keeps
    both the equations and the bounds satisfied.  Returns None when infeasible.
    """
    m, n = A.rows, A.cols
    if len(lower) != n:
        raise ValueError("one lower bound per column required")
    if any(b < 0 for b in lower):
        raise ValueError("lower bounds must be nonnegative")
    # substitute a = lower + y with y >= 0:  A y = -A lower
    rhs = [-x for x in A.apply(lower)]
    rows = []
    for i in range(m):
        r = [Fraction(x) for x in A.row(i)]
        b = Fraction(rhs[i])
        if b < 0:
            r = [-x for x in r]
            b = -b
        rows.append(r + [Fraction(int(i == k)) for k in range(m)] + [b])
    width = n + m
    basis = [n + i for i in range(m)]
    # phase-one objective: minimise the sum of artificials
    cost = [Fraction(0)] * n + [Fraction(1)] * m + [Fraction(0)]
    obj = cost[:]
    for r in rows:
        obj = [o - x for o, x in zip(obj, r)]
    while True:
        enter = next((j for j in range(width) if obj[j] < 0), None)
        if enter is None:
            break
        best = None
        for i, r in enumerate(rows):
            if r[enter] > 0:
                key = (r[-1] / r[enter], basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:  # cannot happen in phase one (objective bounded below)
            break
        i = best[1]
        piv = rows[i][enter]
        rows[i] = [x / piv for x in rows[i]]
        for k in range(m):
            if k != i and rows[k][enter]:
                f = rows[k][enter]
                rows[k] = [x - f * y for x, y in zip(rows[k], rows[i])]
        f = obj[enter]
        obj = [x - f * y for x, y in zip(obj, rows[i])]
        basis[i] = enter
    if -obj[-1] != 0:
        return None
    y = [Fraction(0)] * n
    for i, b in enumerate(basis):
        if b < n:
            y[b] = rows[i][-1]
    a = [lower[j] + y[j] for j in range(n)]
    den = 1
    for x in a:
        den = lcm(den, x.denominator)
    return tuple(int(x * den) for x in a)

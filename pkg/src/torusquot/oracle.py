"""Independent checks: Hilbert series, exact shell sampling and brute-force twins.

Nothing here calls the fast criteria it is meant to check.  Ranks are
recomputed with a separate Fraction elimination, subsets are scanned
naively, and the isotropy census works from explicit sample points.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import comb
from typing import Sequence

from .errors import InvariantViolation
from .lattice import IntMatrix, _hnf_lattice, kernel_lattice, rational_feasibility


@dataclass(frozen=True)
class HilbertTruncation:
    max_degree: int
    coefficients: tuple[int, ...]


@dataclass(frozen=True)
class MomentEvaluation:
    point: tuple[Fraction, ...]  # x_1..x_n, xi_1..xi_n
    values: tuple[Fraction, ...]
    P: frozenset = frozenset()
    Q: frozenset = frozenset()
    isotropy_dim: int = 0

    @property
    def on_shell(self) -> bool:
        return all(v == 0 for v in self.values)


# --- Hilbert series ----------------------------------------------------------

def _poly_mul(a: Sequence[int], b: Sequence[int], D: int) -> list[int]:
    out = [0] * (D + 1)
    for i, x in enumerate(a[: D + 1]):
        if x:
            for j, y in enumerate(b[: D + 1 - i]):
                out[i + j] += x * y
    return out


def kernel_l1_counts(A: IntMatrix, D: int, twist=()) -> list[int]:
    """``L_d = #{u in Z^n : A u = 0, |u|_1 = d}`` for d <= D.

    Each ``(m, residues)`` in ``twist`` adds the congruence
    ``residues . u = 0 mod m``.  Dynamic programming over columns; a partial
    weight is dropped once the remaining l1 budget cannot cancel it.
    """
    l, n = A.shape
    cols = A.columns()
    mods = [m for m, _ in twist]
    tcols = [tuple(res[j] for _, res in twist) for j in range(n)]
    # reach[j][i]: largest |entry| in row i among columns j..n-1
    reach = [[0] * l for _ in range(n + 1)]
    for j in range(n - 1, -1, -1):
        reach[j] = [max(reach[j + 1][i], abs(cols[j][i])) for i in range(l)]
    states = {(0, (0,) * l, (0,) * len(mods)): 1}
    for j in range(n):
        c, tc = cols[j], tcols[j]
        nxt: dict = {}
        for (used, w, z), cnt in states.items():
            budget = D - used
            for u in range(-budget, budget + 1):
                used2 = used + abs(u)
                w2 = tuple(wi + u * ci for wi, ci in zip(w, c))
                rest = D - used2
                if any(abs(x) > rest * r for x, r in zip(w2, reach[j + 1])):
                    continue
                z2 = tuple((zi + u * ti) % m for zi, ti, m in zip(z, tc, mods))
                key = (used2, w2, z2)
                nxt[key] = nxt.get(key, 0) + cnt
        states = nxt
    out = [0] * (D + 1)
    zero, zz = (0,) * l, (0,) * len(mods)
    for (used, w, z), cnt in states.items():
        if w == zero and z == zz:
            out[used] += cnt
    return out


def _inverse_power_1mt2(k: int, D: int) -> list[int]:
    """Coefficients of (1 - t^2)^(-k)."""
    out = [0] * (D + 1)
    for e in range(0, D // 2 + 1):
        out[2 * e] = comb(e + k - 1, k - 1) if k > 0 else int(e == 0)
    return out


def _power_1mt2(k: int, D: int) -> list[int]:
    out = [0] * (D + 1)
    for e in range(0, min(k, D // 2) + 1):
        out[2 * e] = (-1) ** e * comb(k, e)
    return out


def ambient_invariant_series(A: IntMatrix, D: int, twist=()) -> HilbertTruncation:
    """Invariant monomials ``x^a xi^b`` on ``V + V*`` counted by total degree.

    Per column the exponent difference ``u = a - b`` fixes the weight, and the
    monomials with a given ``u`` have degrees ``|u| + 2k``; hence the series
    is ``(1 - t^2)^(-n) * sum_{u in ker A} t^{|u|_1}``.
    """
    if D < 0:
        raise ValueError("max degree must be nonnegative")
    L = kernel_l1_counts(A, D, twist)
    return HilbertTruncation(D, tuple(_poly_mul(L, _inverse_power_1mt2(A.cols, D), D)))


def shell_invariant_series(A: IntMatrix, D: int, twist=()) -> HilbertTruncation:
    """Ambient series times (1 - t^2)^l: the l moment quadrics form a regular sequence.

    A finite ``twist`` (see ``TorusModule``) only shrinks the invariant ring;
    the moment map is still given by the rows of ``A``.
    """
    amb = ambient_invariant_series(A, D, twist).coefficients
    coeffs = _poly_mul(amb, _power_1mt2(A.rows, D), D)
    if any(c < 0 for c in coeffs):
        raise InvariantViolation(
            f"negative coefficient in shell series {coeffs}; moment map is not a regular sequence"
        )
    return HilbertTruncation(D, tuple(coeffs))


def cyclic_factor_series(m: int, D: int) -> list[int]:
    """Invariants of Z/m acting on C + C* by (z, z^-1): ``#{a + b = d, a = b mod m}``."""
    return [sum(1 for a in range(d + 1) if (2 * a - d) % m == 0) for d in range(D + 1)]


def reduced_data_series(d, D: int) -> HilbertTruncation:
    out = [1] + [0] * D
    for m in d.cyclic_moduli:
        out = _poly_mul(out, cyclic_factor_series(m, D), D)
    # a trivial summand C + C* contributes 1 / (1 - t)^2
    trivial = [k + 1 for k in range(D + 1)]
    for _ in range(d.trivial_dim):
        out = _poly_mul(out, trivial, D)
    if d.torus_block is not None:
        out = _poly_mul(out, shell_invariant_series(d.torus_block.A, D, d.torus_block.twist).coefficients, D)
    return HilbertTruncation(D, tuple(out))


def naive_ambient_series(A: IntMatrix, D: int) -> list[int]:
    """Enumerate every monomial of degree <= D; only for tiny inputs."""
    l, n = A.shape
    out = [0] * (D + 1)
    cols = A.columns()
    for expo in product(range(D + 1), repeat=2 * n):
        deg = sum(expo)
        if deg > D:
            continue
        a, b = expo[:n], expo[n:]
        if all(sum(cols[j][i] * (a[j] - b[j]) for j in range(n)) == 0 for i in range(l)):
            out[deg] += 1
    return out


# --- exact shell sampling ----------------------------------------------------

def moment_values(A: IntMatrix, point: Sequence[Fraction]) -> tuple[Fraction, ...]:
    l, n = A.shape
    x, xi = point[:n], point[n:]
    return tuple(sum(A[i, j] * x[j] * xi[j] for j in range(n)) for i in range(l))


def _rank_fraction(rows: list[list[int]]) -> int:
    """Plain Gauss elimination over Q, kept apart from the fast Bareiss rank."""
    M = [[Fraction(x) for x in r] for r in rows]
    if not M:
        return 0
    rank, cols = 0, len(M[0])
    for c in range(cols):
        piv = next((i for i in range(rank, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        for i in range(len(M)):
            if i != rank and M[i][c] != 0:
                f = M[i][c] / M[rank][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[rank])]
        rank += 1
    return rank


def _cols_rank(A: IntMatrix, cols: Sequence[int]) -> int:
    if not cols:
        return 0
    return _rank_fraction([[A[i, j] for j in cols] for i in range(A.rows)])


def _nonzero(rng: random.Random, bound: int = 5) -> int:
    return rng.choice([k for k in range(-bound, bound + 1) if k])


def _sample_products(rng: random.Random, A: IntMatrix, B: list[int]) -> tuple[list[int], list[int]]:
    """Nonzero kernel vector on a subset of B; coordinates forced to vanish are dropped."""
    if not B:
        return [], []
    K = kernel_lattice(A.select_columns(B))
    alive = [k for k in range(len(B)) if any(b[k] for b in K.basis)]
    if not alive:
        return [], []
    for _ in range(64):
        coeffs = [rng.randint(-3, 3) for _ in K.basis]
        z = [sum(c * b[k] for c, b in zip(coeffs, K.basis)) for k in range(len(B))]
        if all(z[k] for k in alive):
            return [B[k] for k in alive], [z[k] for k in alive]
    # all-ones combination as a deterministic fallback, then drop stray zeros
    z = [sum(b[k] * (i + 1) ** 3 for i, b in enumerate(K.basis)) for k in range(len(B))]
    keep = [k for k in alive if z[k]]
    return [B[k] for k in keep], [z[k] for k in keep]


def sample_shell_points(A: IntMatrix, count: int, seed: int) -> list[MomentEvaluation]:
    """Exact points of the shell, the origin first and then random support patterns."""
    l, n = A.shape
    rng = random.Random(seed)
    out = []
    for idx in range(count):
        x = [Fraction(0)] * n
        xi = [Fraction(0)] * n
        P, Q = set(), set()
        if idx > 0:
            states = [rng.randrange(4) for _ in range(n)]  # 0 none, 1 x, 2 xi, 3 both
            both = [j for j in range(n) if states[j] == 3]
            kept, z = _sample_products(rng, A, both)
            for j, zj in zip(kept, z):
                x[j], xi[j] = Fraction(1), Fraction(zj)
                P.add(j)
                Q.add(j)
            for j in range(n):
                if j in P:
                    continue
                if states[j] in (1, 3):
                    x[j] = Fraction(_nonzero(rng))
                    P.add(j)
                elif states[j] == 2:
                    xi[j] = Fraction(_nonzero(rng))
                    Q.add(j)
        point = tuple(x + xi)
        vals = moment_values(A, point)
        if any(v != 0 for v in vals):
            raise InvariantViolation(f"sampled point is off the shell: {vals}")
        iso = l - _cols_rank(A, sorted(P | Q))
        out.append(MomentEvaluation(point, vals, frozenset(P), frozenset(Q), iso))
    return out


def _weights_of(A: IntMatrix, P, Q) -> list[tuple[tuple[str, int], tuple[int, ...]]]:
    ws = [(("x", j), A.column(j)) for j in sorted(P)]
    ws += [(("xi", j), tuple(-v for v in A.column(j))) for j in sorted(Q)]
    return ws


def closed_orbit_limit(A: IntMatrix, P, Q) -> tuple[frozenset, frozenset]:
    """Support of the closed orbit in the closure of an orbit with support (P, Q).

    It keeps exactly the coordinates whose weight lies in the lineality space
    of the cone spanned by all weights present, i.e. the weights ``w`` that
    occur with positive coefficient in some nonnegative relation.
    """
    ws = _weights_of(A, P, Q)
    if not ws:
        return frozenset(), frozenset()
    M = IntMatrix.from_columns([w for _, w in ws], A.rows)
    keep = set()
    for k in range(len(ws)):
        if k in keep:
            continue
        lower = [0] * len(ws)
        lower[k] = 1
        sol = rational_feasibility(M, lower)
        if sol is not None:
            keep.update(i for i, v in enumerate(sol) if v > 0)
    P2 = frozenset(ws[k][0][1] for k in keep if ws[k][0][0] == "x")
    Q2 = frozenset(ws[k][0][1] for k in keep if ws[k][0][0] == "xi")
    return P2, Q2


def signature_of_support(A: IntMatrix, cols: Sequence[int]) -> tuple:
    L = _hnf_lattice([A.column(j) for j in cols], A.rows)
    return (L.ambient_rank, L.basis)


def empirical_isotropy_census(A: IntMatrix, samples: int, seed: int, classes=None) -> set:
    """Signatures of closed-orbit isotropy groups met along sampled shell points.

    When ``classes`` (the output of the enumeration) is given every observed
    signature must belong to it.
    """
    observed = set()
    cache: dict = {}
    for pt in sample_shell_points(A, samples, seed):
        key = (pt.P, pt.Q)
        if key not in cache:
            P2, Q2 = closed_orbit_limit(A, pt.P, pt.Q)
            cache[key] = signature_of_support(A, sorted(P2 | Q2))
        observed.add(cache[key])
    if classes is not None:
        known = {c.signature for c in classes}
        missing = observed - known
        if missing:
            raise InvariantViolation(f"census observed isotropy classes {sorted(missing)} not enumerated")
    return observed


# --- brute-force twins -------------------------------------------------------

def brute_modularity(A: IntMatrix, k: int) -> bool:
    """Every l x (n-k-r) submatrix has rank >= l - r, for every r in 0..l."""
    l, n = A.shape
    for r in range(0, l + 1):
        size = n - k - r
        if size < 0:
            if r == 0:
                return False
            continue
        for cols in combinations(range(n), size):
            if _cols_rank(A, cols) < l - r:
                return False
    return True


def brute_modularity_index(A: IntMatrix) -> int:
    l, n = A.shape
    best = 0
    for k in range(1, n - l + 1):
        if brute_modularity(A, k):
            best = k
    return best


def brute_type_O(A: IntMatrix) -> bool:
    l, n = A.shape
    for mask in range(1 << n):
        cols = [j for j in range(n) if mask >> j & 1]
        r = n - 1 - len(cols)
        if 1 <= r <= l and _cols_rank(A, cols) == l - r:
            return True
    return False


def brute_type_O_certificates(A: IntMatrix) -> list[tuple[int, tuple[int, ...]]]:
    l, n = A.shape
    out = []
    for mask in range(1 << n):
        cols = tuple(j for j in range(n) if mask >> j & 1)
        r = n - 1 - len(cols)
        if 1 <= r <= l and _cols_rank(A, cols) == l - r:
            out.append((r, cols))
    return sorted(out)


def brute_codim_N_sing(A: IntMatrix) -> int:
    """Max of |P| + |Q| - rank A_{P&Q} over all 4^n patterns with singular isotropy."""
    l, n = A.shape
    best = -1
    for states in product(range(4), repeat=n):
        P = [j for j in range(n) if states[j] in (1, 3)]
        Q = [j for j in range(n) if states[j] in (2, 3)]
        J = sorted(set(P) | set(Q))
        if _cols_rank(A, J) > l - 1:
            continue
        B = [j for j in range(n) if states[j] == 3]
        best = max(best, len(P) + len(Q) - _cols_rank(A, B))
    return 2 * n - l - best


def brute_isotropy_signatures(A: IntMatrix) -> set:
    """Signatures over all 4^n patterns that pass the closed-orbit test."""
    from .strata import SupportPattern, closed_orbit_support_test

    l, n = A.shape
    out = set()
    for states in product(range(4), repeat=n):
        P = [j for j in range(n) if states[j] in (1, 3)]
        Q = [j for j in range(n) if states[j] in (2, 3)]
        if closed_orbit_support_test(A, SupportPattern.of(P, Q)):
            out.add(signature_of_support(A, sorted(set(P) | set(Q))))
    return out

"""Seeded random weight matrices and move-orbit scrambling for property tests."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .analysis import is_k_modular, make_stable_utcls, validate_faithful
from .lattice import IntMatrix, is_unimodular


@dataclass(frozen=True)
class Scramble:
    U: IntMatrix
    perm: tuple[int, ...]  # new column j is old column perm[j]
    signs: tuple[int, ...]

    def apply(self, A: IntMatrix) -> IntMatrix:
        B = (self.U @ A).select_columns(self.perm)
        return B.scale_columns(self.signs)


def _uniform(rng: random.Random, l: int, n: int, bound: int) -> IntMatrix:
    return IntMatrix(l, n, [rng.randint(-bound, bound) for _ in range(l * n)])


def _planted(rng: random.Random, l: int, n: int, bound: int) -> IntMatrix:
    """Put n-r-1 columns in the span of the first l-r coordinates."""
    r = rng.randint(1, l)
    size = n - r - 1
    cols = []
    for j in range(n):
        if j < size:
            c = [rng.randint(-bound, bound) for _ in range(l - r)] + [0] * r
        else:
            c = [rng.randint(-bound, bound) for _ in range(l)]
        cols.append(c)
    rng.shuffle(cols)
    rows = list(range(l))
    rng.shuffle(rows)
    return IntMatrix.from_columns(cols, l).select_rows(rows)


def random_matrix(rng: random.Random, max_l: int = 3, max_n: int = 6, bound: int = 4,
                  planted: bool = False) -> IntMatrix:
    """A faithful, 1-modular, stable matrix with 1 <= l <= max_l and l < n <= max_n."""
    while True:
        l = rng.randint(1, max_l)
        if l + 1 > max_n:
            continue
        n = rng.randint(l + 1, max_n)
        A = _planted(rng, l, n, bound) if planted else _uniform(rng, l, n, bound)
        if not validate_faithful(A) or not is_k_modular(A, 1):
            continue
        return make_stable_utcls(A).apply(A)


def random_corpus(count: int = 1000, seed: int = 0, max_l: int = 3, max_n: int = 6,
                  bound: int = 4) -> list[IntMatrix]:
    """Half uniform draws, half with a planted low-rank column block."""
    rng = random.Random(seed)
    return [random_matrix(rng, max_l, max_n, bound, planted=bool(i % 2)) for i in range(count)]


def random_unimodular(rng: random.Random, l: int, steps: int = 6, bound: int = 2) -> IntMatrix:
    rows = [[int(i == j) for j in range(l)] for i in range(l)]
    for _ in range(steps if l > 1 else 0):
        i, k = rng.sample(range(l), 2)
        q = rng.randint(-bound, bound)
        rows[i] = [a + q * b for a, b in zip(rows[i], rows[k])]
    if l:
        for i in range(l):
            if rng.random() < 0.5:
                rows[i] = [-a for a in rows[i]]
        rng.shuffle(rows)
    U = IntMatrix.from_rows(rows, l)
    assert is_unimodular(U)
    return U


def random_scramble(rng: random.Random, l: int, n: int) -> Scramble:
    perm = list(range(n))
    rng.shuffle(perm)
    signs = tuple(rng.choice((1, -1)) for _ in range(n))
    return Scramble(random_unimodular(rng, l), tuple(perm), signs)

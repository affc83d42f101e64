import random

from torusquot.analysis import is_k_modular, is_stable, validate_faithful
from torusquot.corpus import random_corpus, random_scramble, random_unimodular
from torusquot.lattice import is_unimodular


def test_corpus_is_seeded_and_valid():
    a = random_corpus(40, seed=3)
    assert a == random_corpus(40, seed=3)
    assert a != random_corpus(40, seed=4)
    for A in a:
        assert 1 <= A.rows <= 3 and A.rows < A.cols <= 6
        assert all(-4 <= x <= 4 for row in A.tolist() for x in row)
        assert validate_faithful(A) and is_k_modular(A, 1) and is_stable(A)


def test_full_corpus_covers_all_shapes(corpus):
    shapes = {A.shape for A in corpus}
    assert shapes == {(l, n) for l in (1, 2, 3) for n in range(l + 1, 7)}


def test_scrambles_are_moves():
    rng = random.Random(0)
    for l in (1, 2, 3):
        assert is_unimodular(random_unimodular(rng, l))
        s = random_scramble(rng, l, 5)
        assert sorted(s.perm) == list(range(5)) and set(s.signs) <= {1, -1}

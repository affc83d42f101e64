import math
import random
from itertools import permutations, product

import pytest

from conftest import DISCONNECTED, EX2, EX3, MIN1, M

from torusquot.analysis import SignVector, TorusModule, make_stable_utcls
from torusquot.corpus import random_scramble
from torusquot.errors import NotMinimalError
from torusquot.isoclass import (
    IsoWitness,
    _colmajor_key,
    canonical_form,
    canonical_form_with_path,
    canonical_matrix,
    decide_iso,
    verify_witness,
)
from torusquot.lattice import IntMatrix, hermite_normal_form
from torusquot.reduction import ReducedData, reduce

MIN1_DIGEST = "b8640517135f1d0b942baafe2142f7abf795a359ed207c31ae7701f561e0f814"


def block(rows, moduli=(), trivial=0, twist=()):
    return ReducedData(tuple(moduli), TorusModule(M(rows), twist=twist), trivial)


def brute_canonical(A):
    best = None
    for perm in permutations(range(A.cols)):
        for signs in product((1, -1), repeat=A.cols):
            H, _ = hermite_normal_form(A.select_columns(perm).scale_columns(signs))
            key = _colmajor_key(H, A.cols)
            if best is None or key < best[0]:
                best = (key, H)
    return best[1]


def test_rank_one_canonical_is_sorted_absolute_values():
    assert canonical_matrix(M([[9, -2, 9]]))[0].tolist() == [[2, 9, 9]]
    assert canonical_matrix(M([[9, -16, 24]]))[0].tolist() == [[9, 16, 24]]


def test_canonical_path_reproduces_form():
    A = M(EX2)
    H, path = canonical_matrix(A)
    moved = A.select_columns(path.perm).scale_columns(path.signs)
    assert path.U @ moved == H


def test_branch_and_bound_matches_exhaustive_search(corpus):
    for A in corpus[:40]:
        if A.cols <= 5:
            assert canonical_matrix(A)[0] == brute_canonical(A)


def test_golden_digest_is_frozen():
    c = canonical_form(block(MIN1))
    assert c.digest == MIN1_DIGEST
    assert canonical_form(reduce(M(EX2))[0]).digest == MIN1_DIGEST


def test_case_two_replacements_are_isomorphic():
    d2, _ = reduce(M(EX2))
    v = decide_iso(d2, block(MIN1))
    assert v and verify_witness(d2, block(MIN1), v.witness)
    d3, _ = reduce(M(EX3))
    assert decide_iso(d3, block([[9, -16, 24]]))
    assert canonical_form(d3).canonical_matrix.tolist() == [[9, 16, 24]]


@pytest.mark.parametrize(
    "other, reason",
    [
        (block([[-9, 2, 2]]), "canonical matrices differ"),
        (block(MIN1, moduli=(2,)), "cyclic moduli differ"),
        (block(MIN1, trivial=1), "trivial summands differ"),
        (block([[-1, 0, 2, 2], [0, -1, 3, 5]]), "dims differ"),
    ],
)
def test_non_isomorphic(other, reason):
    v = decide_iso(block(MIN1), other)
    assert not v and reason in v.reason


def test_unstable_blocks_compare_by_absolute_values():
    assert not decide_iso(block([[2, 9, 9]]), block([[2, 9, 7]]))
    v = decide_iso(block([[2, 9, 9]]), block(MIN1))
    assert v and verify_witness(block([[2, 9, 9]]), block(MIN1), v.witness)


def test_non_minimal_input_rejected():
    with pytest.raises(NotMinimalError):
        decide_iso(block(EX2), block(MIN1))


def test_empty_data_isomorphic():
    v = decide_iso(ReducedData(), ReducedData())
    assert v and v.witness.row_transform.shape == (0, 0)


def test_tampered_witness_fails():
    d1, d2 = block(MIN1), block([[9, -2, 9]])
    v = decide_iso(d1, d2)
    w = v.witness
    assert verify_witness(d1, d2, w)
    bad = IsoWitness(w.row_transform, w.column_permutation, SignVector((-1, 1, 1)), w.moduli_bijection)
    assert not verify_witness(d1, d2, bad)
    bad = IsoWitness(IntMatrix.from_rows([[2]]), w.column_permutation, w.sign_vector, w.moduli_bijection)
    assert not verify_witness(d1, d2, bad)


def test_scramble_invariance(corpus):
    rng = random.Random(11)
    for A in corpus[:150]:
        d, _ = reduce(A)
        d2, _ = reduce(random_scramble(rng, A.rows, A.cols).apply(A))
        assert canonical_form(d) == canonical_form(d2)
        v = decide_iso(d, d2)
        assert v and verify_witness(d, d2, v.witness)


def _scrambled_twist(B, rng):
    s = random_scramble(rng, B.l, B.n)
    A2 = s.apply(B.A)
    e = make_stable_utcls(A2).signs
    A2 = A2.scale_columns(e)
    c = [rng.randint(-3, 3) for _ in range(B.l)]
    twist = []
    for d, res in B.twist:
        unit = rng.choice([x for x in range(1, d) if math.gcd(x, d) == 1])
        r = [res[p] * sg * f for p, sg, f in zip(s.perm, s.signs, e)]
        # automorphisms of Z^l + Z/d: scale the finite part, shear by a torus character
        r = [(unit * x + sum(ci * a for ci, a in zip(c, A2.column(j)))) % d for j, x in enumerate(r)]
        twist.append((d, tuple(r)))
    return TorusModule(A2, twist=tuple(twist))


def test_twisted_blocks():
    d, _ = reduce(M(DISCONNECTED))
    c = canonical_form(d)
    assert c.canonical_relations is not None
    assert c.digest != canonical_form(block([[-2, 2, 3]])).digest
    rng = random.Random(5)
    for _ in range(60):
        d2 = ReducedData((), _scrambled_twist(d.torus_block, rng))
        assert canonical_form(d2) == c
        v = decide_iso(d, d2)
        assert v and v.witness.relation_transform is not None
        assert verify_witness(d, d2, v.witness)
    v = decide_iso(d, block([[-2, 2, 3]]))
    assert not v and "relation lattices differ" in v.reason


def test_canonical_form_with_path_for_orbifold():
    c, path = canonical_form_with_path(ReducedData((3, 2)))
    assert path is None and c.canonical_matrix is None and c.cyclic_moduli == (2, 3)

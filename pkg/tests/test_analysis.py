import random

import pytest

from conftest import EX1, EX2, EX3, MIN1, M

from torusquot.analysis import (
    SignVector,
    TorusModule,
    check_one_modular,
    dims,
    effectivize,
    effectivize_with_basis,
    full_support_relation,
    is_k_modular,
    is_stable,
    isotropy_dimension,
    make_stable_utcls,
    modularity_index,
    require_faithful,
    stability_witness,
    validate_faithful,
)
from torusquot.corpus import random_corpus, random_matrix
from torusquot.errors import InputError, NotFaithfulError, NotOneModularError
from torusquot.oracle import brute_modularity, brute_modularity_index


def test_faithfulness():
    assert validate_faithful(M(EX2))
    cert = validate_faithful(M([[2, 4]]))
    assert not cert and cert.invariant_factors == (2,) and cert.offending == (2,)
    with pytest.raises(NotFaithfulError) as err:
        require_faithful(M([[2]]))
    assert err.value.invariant_factors == (2,)
    assert isinstance(err.value, InputError) and "faithful" in err.value.hypothesis
    # a rank-deficient matrix is not faithful either
    assert not validate_faithful(M([[1, 2], [2, 4]]))


def test_effectivize():
    A = M([[2, 4, -6], [0, 0, 0]])
    B, P = effectivize_with_basis(A)
    assert P @ B.A == A
    assert validate_faithful(B.A)
    assert B.A.tolist() == [[1, 2, -3]]
    assert effectivize(M([[2, -2]])).A.tolist() == [[1, -1]]


@pytest.mark.parametrize(
    "rows, k",
    [(EX1, 1), (EX2, 1), (EX3, 1), (MIN1, 2), ([[-1, 1]], 1), ([[1, 1, -1, -1]], 3), ([[1, 0, 1]], 1), ([[1, 0, 0]], 0)],
)
def test_modularity_index(rows, k):
    assert modularity_index(M(rows)) == k
    assert brute_modularity_index(M(rows)) == k


def test_one_modular_check():
    check_one_modular(M(EX2))
    with pytest.raises(NotOneModularError):
        check_one_modular(M([[1, 0, 1], [0, 1, 0]]))


def test_full_support_relation_dual_criterion():
    rel = full_support_relation(M(EX2))
    assert rel is not None and all(rel)
    assert M(EX2).apply(rel) == (0, 0)
    assert full_support_relation(M([[1, 0, 1], [0, 1, 0]])) is None
    for A in random_corpus(100, seed=7):
        assert (full_support_relation(A) is not None) == is_k_modular(A, 1)


def test_frozen_relations():
    assert full_support_relation(M(EX1)) == (1, 1, 1, 1)
    assert full_support_relation(M(MIN1)) == (9, 1, 1)
    assert full_support_relation(M([[1, 0], [0, 1]])) is None


def test_brute_modularity_definition():
    A = M([[1, 0, 0, 1], [0, 1, 0, 1], [0, 0, 1, 1]])
    assert brute_modularity(A, 1) == is_k_modular(A, 1)
    assert not brute_modularity(A, 2)


def test_stability_and_utcls():
    A = M([[1, 2, 3]])
    assert not is_stable(A)
    assert is_stable(A).failing_column is not None
    eps = make_stable_utcls(M([[-1, 1, 0, 0], [0, 0, -1, 1]]))
    assert eps.is_identity
    rng = random.Random(3)
    for _ in range(30):
        A = random_matrix(rng)
        signs = tuple(rng.choice((1, -1)) for _ in range(A.cols))
        B = A.scale_columns(signs)
        e = make_stable_utcls(B)
        assert is_stable(e.apply(B))
        assert len(e) == A.cols
    # witnesses are kernel vectors positive on their column
    A = M(EX2)
    for i in range(A.cols):
        w = stability_witness(A, i)
        assert A.apply(w) == (0, 0) and w[i] > 0 and min(w) >= 0


def test_sign_vector_algebra():
    s = SignVector((1, -1, -1))
    assert s.compose(s).is_identity
    assert SignVector.identity(3).apply(M(MIN1)) == M(MIN1)
    assert s.apply(M(MIN1)).tolist() == [[-2, -9, -9]]


def test_dims_and_isotropy():
    assert dims(M(EX2)) == (6, 4)
    assert dims(M(MIN1)) == (5, 4)
    A = M(EX2)
    assert isotropy_dimension(A, []) == 2
    assert isotropy_dimension(A, [0, 1]) == 0
    assert isotropy_dimension(A, [2, 3]) == 1


def test_torus_module_twist():
    plain = TorusModule(M([[-2, 2, 3]]))
    assert plain.is_faithful() and plain.component_group == ()
    tw = TorusModule(M([[-2, 2, 3]]), twist=((2, (1, 0, 0)),))
    assert tw.is_faithful() and tw.component_group == (2,)
    rel = tw.relation_lattice()
    for b in rel.basis:
        assert M([[-2, 2, 3]]).apply(b) == (0,) and b[0] % 2 == 0
    assert rel.basis != plain.relation_lattice().basis
    # the finite factor acting on a column of even torus weight only, while
    # that column's weight is not a Z-combination: not faithful
    assert not TorusModule(M([[-2, 2, 3]]), twist=((2, (0, 0, 1)),)).is_faithful()
    with pytest.raises(ValueError):
        TorusModule(M([[1, -1]]), twist=((1, (0, 0)),))
    with pytest.raises(ValueError):
        TorusModule(M([[1, -1]]), labels=("a",))

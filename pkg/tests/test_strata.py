from fractions import Fraction

import pytest

from conftest import EX1, EX2, EX3, MIN1, M

from torusquot.errors import NotStableError
from torusquot.oracle import brute_codim_N_sing, brute_isotropy_signatures, brute_type_O_certificates
from torusquot.strata import (
    SupportPattern,
    TypeOCertificate,
    closed_orbit_support_test,
    codim_N_sing,
    detect_type_O,
    enumerate_isotropy_classes,
    is_maximal,
    is_minimal,
    orbifold_presentation,
    slice_m_vector,
)


def test_type_O_certificates_of_examples():
    assert detect_type_O(M(EX1)) == [
        TypeOCertificate(1, (0, 1), (2, 3)),
        TypeOCertificate(1, (2, 3), (0, 1)),
    ]
    assert detect_type_O(M(EX2)) == [TypeOCertificate(1, (2, 3), (0, 1))]
    assert detect_type_O(M(EX3)) == [TypeOCertificate(1, (2, 3), (0, 1))]
    assert detect_type_O(M(MIN1)) == []
    assert is_minimal(M(MIN1)) and not is_minimal(M(EX2))


@pytest.mark.parametrize("rows, m_vec", [(EX1, (1, 1)), (EX2, (4, 5)), (EX3, (3, 1))])
def test_slice_m_vectors(rows, m_vec):
    A = M(rows)
    certs = detect_type_O(A)
    d = slice_m_vector(A, certs[-1], certs)
    assert d.m_vec == m_vec and d.m == sum(m_vec) and d.maximal
    assert d.H0_lattice.rank == 1


def test_maximality():
    # a 3-dimensional torus with nested slices: r = 1 inside r = 2
    A = M([[1, -1, 0, 0, 0], [0, 0, 1, -1, 0], [0, 0, 1, 1, -2]])
    certs = detect_type_O(A)
    assert certs == brute_certs(A)
    big = [c for c in certs if c.r == 2]
    assert all(is_maximal(c, certs) for c in big)
    small = [c for c in certs if c.r == 1 and not is_maximal(c, certs)]
    assert small  # some r = 1 slice sits inside an r = 2 one
    for c in small:
        assert any(set(b.fixed_columns) <= set(c.fixed_columns) for b in big)


def brute_certs(A):
    l, n = A.shape
    return [TypeOCertificate(r, S, tuple(j for j in range(n) if j not in S))
            for r, S in brute_type_O_certificates(A)]


def test_orbifold_presentation():
    p = orbifold_presentation(slice_m_vector(M(EX2), detect_type_O(M(EX2))[0]))
    assert p.degrees == (9, 9, 2)
    assert p.mvec_power_product == 4 ** 4 * 5 ** 5
    assert p.relation_coefficient == Fraction(4 ** 4 * 5 ** 5, 9 ** 9)
    q = orbifold_presentation(slice_m_vector(M([[-1, 1]]), detect_type_O(M([[-1, 1]]))[0]))
    assert q.m == 2 and q.relation_coefficient == Fraction(1, 4)


def test_closed_orbit_support():
    A = M(MIN1)
    assert closed_orbit_support_test(A, SupportPattern.of())
    assert closed_orbit_support_test(A, SupportPattern.of(P=[0, 1]))
    assert not closed_orbit_support_test(A, SupportPattern.of(P=[1, 2]))
    assert closed_orbit_support_test(A, SupportPattern.of(P=[1], Q=[2]))
    # both coordinates of column 0 nonzero forces x_0 xi_0 = 0 on the shell
    assert not closed_orbit_support_test(A, SupportPattern.of(P=[0], Q=[0]))
    assert closed_orbit_support_test(A, SupportPattern.of(P=[1, 2], Q=[1, 2]))


def test_isotropy_classes_of_minimal_example():
    classes = enumerate_isotropy_classes(M(MIN1))
    summary = [(s.dim, s.finite_part, s.fixed_columns, s.codim_in_quotient) for s in classes]
    # principal, the Z/9 fixing the two weight-9 coordinates, and the origin
    assert summary == [(0, (), (0, 1, 2), 0), (0, (9,), (1, 2), 2), (1, (), (), 4)]


def test_isotropy_classes_of_product_example():
    classes = enumerate_isotropy_classes(M(EX1))
    assert sorted((s.dim, s.codim_in_quotient) for s in classes) == [(0, 0), (1, 2), (1, 2), (2, 4)]


def test_enumeration_requires_stability():
    with pytest.raises(NotStableError):
        enumerate_isotropy_classes(M([[1, 2, 3]]))


@pytest.mark.parametrize("rows, codim", [(EX1, 3), (EX2, 3), (EX3, 3), (MIN1, 5), ([[-1, 1]], 3),
                                         ([[1, 1, -1, -1]], 7)])
def test_codim(rows, codim):
    assert codim_N_sing(M(rows)) == codim
    assert brute_codim_N_sing(M(rows)) == codim


def test_fast_vs_brute_on_corpus_slice(corpus):
    for A in corpus[:30]:
        assert codim_N_sing(A) == brute_codim_N_sing(A)
        assert {s.signature for s in enumerate_isotropy_classes(A)} == brute_isotropy_signatures(A)
        assert detect_type_O(A) == brute_certs(A)

"""Group closure, conjugacy classes, fixed-space ranks, modulus changes."""

import pytest

from repcount.errors import (
    CapExceeded,
    PrecisionTooLow,
    UnfaithfulReduction,
)
from repcount.groups import close, rank_fixed_space
from repcount.linalg import SquareMatrix
from repcount.modp import SATURATED, Modulus


def mat(rows, p, M):
    return SquareMatrix.from_rows(rows, Modulus(p, M))


def perm_matrices_s3(p, M):
    m = Modulus(p, M)
    swap = SquareMatrix.from_rows([[0, 1, 0], [1, 0, 0], [0, 0, 1]], m)
    cyc = SquareMatrix.from_rows([[0, 0, 1], [1, 0, 0], [0, 1, 0]], m)
    return [swap, cyc]


def test_close_trivial():
    g = close([SquareMatrix.identity(2, Modulus(5, 2))])
    assert g.order == 1


def test_close_cyclic4():
    rot = mat([[0, 1], [-1, 0]], 5, 2)
    g = close([rot])
    assert g.order == 4


def test_close_symmetric3():
    g = close(perm_matrices_s3(7, 2))
    assert g.order == 6


def test_close_cap():
    with pytest.raises(CapExceeded):
        close(perm_matrices_s3(7, 2), cap=3)


def test_close_deterministic_order():
    a = close(perm_matrices_s3(7, 2))
    b = close(perm_matrices_s3(7, 2))
    assert [a.element_rows(i) for i in range(a.order)] == \
           [b.element_rows(i) for i in range(b.order)]


def test_closure_idempotent():
    g = close(perm_matrices_s3(7, 2))
    again = close([g.element(i) for i in range(g.order)])
    assert again.order == g.order
    assert {g.element_rows(i) for i in range(g.order)} == \
           {again.element_rows(i) for i in range(again.order)}


def test_words_reconstruct_elements():
    g = close(perm_matrices_s3(7, 2))
    for i in range(g.order):
        acc = SquareMatrix.identity(3, g.modulus)
        for gi in g.word(i):
            acc = acc @ g.generators[gi]
        assert acc.rows == g.element_rows(i)


def test_conjugacy_classes_s3():
    g = close(perm_matrices_s3(7, 2))
    recs = g.conjugacy_classes()
    assert sorted(r.class_size for r in recs) == [1, 2, 3]
    assert sum(r.class_size for r in recs) == 6
    for r in recs:
        assert r.class_size * r.centralizer_order == g.order


def test_conjugacy_closed_under_generators():
    g = close(perm_matrices_s3(5, 2))
    recs = g.conjugacy_classes()
    for rec in recs:
        cid = g.class_of(rec.rep_index)
        for h in g.generators:
            d = 1
            acc = h
            while not acc.is_identity():
                acc = acc @ h
                d += 1
            hinv = h ** (d - 1)
            conj = hinv @ rec.representative @ h
            assert g.class_of(g.find(conj)) == cid


def test_trivial_group_single_class():
    g = close([SquareMatrix.identity(3, Modulus(5, 2))])
    recs = g.conjugacy_classes()
    assert len(recs) == 1 and recs[0].class_size == 1
    assert recs[0].rank == 3


def test_rank_fixed_space_identity():
    i4 = SquareMatrix.identity(4, Modulus(5, 3))
    assert rank_fixed_space(i4, 1) == 4


def test_rank_fixed_space_minus_identity():
    m = Modulus(5, 3)
    neg = SquareMatrix.from_rows([[-1 if i == j else 0 for j in range(4)]
                                  for i in range(4)], m)
    assert rank_fixed_space(neg, 2) == 0


def test_rank_fixed_space_reflection():
    swap = mat([[0, 1], [1, 0]], 7, 2)
    assert rank_fixed_space(swap, 2) == 1


def test_rank_fixed_space_precision_error():
    swap = mat([[0, 1], [1, 0]], 3, 1)  # p^M = 3 <= d*l = 4
    with pytest.raises(PrecisionTooLow):
        rank_fixed_space(swap, 2)


def test_rank_matches_smith_rank(g24):
    # With torsion fully separated at the working precision, the saturated
    # count of the Smith form is exactly the fixed-space rank.
    for rec in g24.conjugacy_classes():
        if rec.torsion_vals is not None:
            assert rec.smith_vals.saturated_count() == rec.rank
        units = sum(1 for e in rec.smith_vals.vals
                    if e is not SATURATED and e == 0)
        tors = len(rec.smith_vals.finite_positive())
        assert rec.rank + tors + units == g24.dim


def test_reduce_modulus_identity_precision(g29):
    assert g29.reduce_modulus(g29.modulus.M) is g29


def test_reduce_modulus_preserves_order(g29, g24):
    assert g29.reduce_modulus(1).order == 7680
    assert g24.reduce_modulus(2).order == 336


def test_reduce_modulus_unfaithful():
    g = close([mat([[1, 2], [0, 1]], 2, 2)])  # order 2, trivial mod 2
    assert g.order == 2
    with pytest.raises(UnfaithfulReduction):
        g.reduce_modulus(1)


def test_element_rows_at_lifts_via_words(g12):
    # Lifting an element beyond the build precision and reducing back
    # must reproduce the stored matrix.
    for i in range(0, g12.order, 7):
        high = g12.element_rows_at(i, g12.modulus.M + 2)
        pM = g12.modulus.pM
        reduced = tuple(tuple(x % pM for x in row) for row in high)
        assert reduced == g12.element_rows(i)


def test_find_and_contains(g12):
    e = g12.element(5)
    assert g12.find(e) == 5
    assert e in g12
    stranger = SquareMatrix.from_rows([[2, 0], [0, 2]], g12.modulus)
    assert stranger not in g12

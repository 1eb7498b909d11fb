"""Matrix arithmetic, Smith valuations, kernel sizes, determinants.

The independent oracles here are exhaustive: kernels by scanning every
vector of the point space, determinants by permutation expansion.  Smith
invariance is checked under random unimodular transforms.
"""

import itertools
import random

import pytest

from repcount.errors import DimensionMismatch, ModulusMismatch, PrecisionTooLow
from repcount.linalg import (
    SquareMatrix,
    determinant,
    kernel_size,
    multiply,
    parse_matrix_text,
    smith_valuations,
)
from repcount.modp import SATURATED, Modulus


def mat(rows, p, M):
    return SquareMatrix.from_rows(rows, Modulus(p, M))


def kernel_scan(rows, p, n):
    """Oracle: count v with A v = 0 mod p^n over the whole space."""
    pn = p ** n
    l = len(rows)
    count = 0
    for v in itertools.product(range(pn), repeat=l):
        if all(sum(rows[i][j] * v[j] for j in range(l)) % pn == 0 for i in range(l)):
            count += 1
    return count


def det_permanent_expansion(rows, pM):
    """Oracle: determinant by signed permutation expansion."""
    l = len(rows)
    total = 0
    for perm in itertools.permutations(range(l)):
        sign = 1
        seen = list(perm)
        for i in range(l):
            for j in range(i + 1, l):
                if seen[i] > seen[j]:
                    sign = -sign
        term = sign
        for i in range(l):
            term *= rows[i][perm[i]]
        total += term
    return total % pM


def random_unimodular(l, p, M, rng):
    """Product of elementary row operations: triangular with unit diagonal."""
    pM = p ** M
    units = [x for x in range(1, pM) if x % p != 0]
    a = [[0] * l for _ in range(l)]
    for i in range(l):
        a[i][i] = rng.choice(units)
    for i in range(l):
        for j in range(l):
            if i < j:
                a[i][j] = rng.randrange(pM)
    perm = list(range(l))
    rng.shuffle(perm)
    return [[a[i][perm[j]] for j in range(l)] for i in range(l)]


def test_multiply_identity():
    a = mat([[1, 2], [3, 4]], 5, 2)
    i2 = SquareMatrix.identity(2, a.modulus)
    assert multiply(a, i2).rows == a.rows
    assert multiply(i2, a).rows == a.rows


def test_multiply_known_product():
    a = mat([[1, 2], [3, 4]], 7, 2)
    b = mat([[0, 1], [1, 0]], 7, 2)
    assert (a @ b).rows == ((2, 1), (4, 3))


def test_multiply_mismatch_errors():
    a = mat([[1, 0], [0, 1]], 5, 2)
    b = mat([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 5, 2)
    c = mat([[1, 0], [0, 1]], 5, 3)
    with pytest.raises(DimensionMismatch):
        a @ b
    with pytest.raises(ModulusMismatch):
        a @ c


def test_matrix_pow():
    a = mat([[0, 1], [6, 0]], 7, 2)
    assert (a ** 2).rows == ((6, 0), (0, 6))
    assert (a ** 0).rows == SquareMatrix.identity(2, a.modulus).rows
    assert (a ** 5).rows == ((a ** 4) @ a).rows


def test_smith_zero_matrix():
    z = mat([[0, 0, 0]] * 3, 3, 4)
    sv = smith_valuations(z)
    assert sv.vals == (SATURATED,) * 3
    assert sv.diagonal() == (0, 0, 0)


def test_smith_diagonal_matrix():
    a = mat([[1, 0, 0], [0, 2, 0], [0, 0, 4]], 2, 3)
    assert smith_valuations(a).vals == (0, 1, 2)
    assert smith_valuations(a).diagonal() == (1, 2, 4)


def test_smith_needs_column_ops():
    # [[p, 1], [0, p]] is equivalent to diag(1, p^2).
    a = mat([[3, 1], [0, 3]], 3, 4)
    assert smith_valuations(a).vals == (0, 2)


def test_smith_identity():
    a = SquareMatrix.identity(4, Modulus(5, 2))
    assert smith_valuations(a).vals == (0, 0, 0, 0)


@pytest.mark.parametrize("p,l", [(2, 2), (2, 3), (3, 2), (3, 3), (5, 3)])
def test_kernel_size_vs_scan(p, l):
    rng = random.Random(p * 100 + l)
    m = Modulus(p, 3)
    for _ in range(25):
        rows = [[rng.randrange(m.pM) for _ in range(l)] for _ in range(l)]
        a = SquareMatrix.from_rows(rows, m)
        for n in range(1, 4):
            if p ** (n * l) > 5 ** 3 * 125:
                continue
            assert kernel_size(a, n) == kernel_scan(a.rows, p, n)


def test_kernel_size_trivial_cases():
    z = mat([[0] * 4 for _ in range(4)], 5, 2)
    assert kernel_size(z, 1) == 625
    u = SquareMatrix.identity(3, Modulus(2, 3))
    assert kernel_size(u, 3) == 1


def test_kernel_size_precision_error():
    a = mat([[1, 0], [0, 1]], 3, 2)
    with pytest.raises(PrecisionTooLow):
        kernel_size(a, 3)


def test_smith_valuation_monotone_in_precision():
    rng = random.Random(7)
    for _ in range(40):
        l = rng.randrange(2, 5)
        rows = [[rng.randrange(3 ** 5) for _ in range(l)] for _ in range(l)]
        low = smith_valuations(mat([[x % 27 for x in r] for r in rows], 3, 3))
        high = smith_valuations(mat(rows, 3, 5))
        for e_low, e_high in zip(low.vals, high.vals):
            if e_low is not SATURATED:
                assert e_low == e_high
            else:
                assert e_high is SATURATED or e_high >= 3


@pytest.mark.parametrize("p,M,l", [(2, 4, 3), (3, 3, 3), (5, 2, 4), (3, 4, 5)])
def test_smith_unimodular_invariance(p, M, l):
    rng = random.Random(1000 * p + 10 * M + l)
    m = Modulus(p, M)
    for _ in range(50):
        rows = [[rng.randrange(m.pM) for _ in range(l)] for _ in range(l)]
        a = SquareMatrix.from_rows(rows, m)
        u = SquareMatrix.from_rows(random_unimodular(l, p, M, rng), m)
        v = SquareMatrix.from_rows(random_unimodular(l, p, M, rng), m)
        assert smith_valuations(u @ a @ v).vals == smith_valuations(a).vals


def test_determinant_examples():
    i3 = SquareMatrix.identity(3, Modulus(2, 4))
    assert determinant(i3).value == 1
    a = mat([[0, 1], [1, 0]], 5, 2)
    assert determinant(a).value == 24  # -1


@pytest.mark.parametrize("p,M,l", [(2, 3, 2), (3, 2, 3), (5, 2, 4)])
def test_determinant_vs_expansion(p, M, l):
    rng = random.Random(p + M + l)
    m = Modulus(p, M)
    for _ in range(40):
        rows = [[rng.randrange(m.pM) for _ in range(l)] for _ in range(l)]
        a = SquareMatrix.from_rows(rows, m)
        assert determinant(a).value == det_permanent_expansion(rows, m.pM)


def test_determinant_unit_iff_trivial_kernel():
    rng = random.Random(99)
    m = Modulus(3, 3)
    for _ in range(40):
        rows = [[rng.randrange(m.pM) for _ in range(3)] for _ in range(3)]
        a = SquareMatrix.from_rows(rows, m)
        unit = determinant(a).value % 3 != 0
        trivial = all(kernel_size(a, n) == 1 for n in range(1, 4))
        assert unit == trivial


def test_parse_matrix_text():
    text = "2 4 3 3\n12 1 0\n0 13 2\n0 0 11\n"
    a = parse_matrix_text(text)
    assert a.modulus.p == 2 and a.modulus.M == 4
    assert a.rows == ((12, 1, 0), (0, 13, 2), (0, 0, 11))
    with pytest.raises(ValueError):
        parse_matrix_text("2 4 2 3\n1 1 1\n1 1 1\n")
    with pytest.raises(ValueError):
        parse_matrix_text("")
    with pytest.raises(ValueError):
        parse_matrix_text("2 4 2 2\n1 -1\n0 1\n")


def test_encode_orders_lexicographically():
    m = Modulus(5, 3)
    a = mat([[0, 1], [3, 4]], 5, 3)
    b = mat([[0, 2], [0, 0]], 5, 3)
    assert (a.encode() < b.encode()) == (a.rows < b.rows)

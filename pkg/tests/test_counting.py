"""Counting engines: Burnside sums, torsion resolution, census, closed cross-checks.

Frozen expected counts come from the fixed polynomials, which the engines
must reproduce from the matrix groups alone; censuses pin the exact
class-size / torsion-order data.
"""

import json

import pytest

from repcount.catalog import ExponentList, GroupSpec, build, exponents
from repcount.counting import (
    CountReport,
    count_burnside_classes,
    count_burnside_full,
    count_formula_general,
    resolve_torsion,
    solomon_sum,
    torsion_census,
    torsion_classes,
)
from repcount.errors import PrecisionTooLow
from repcount.groups import close
from repcount.linalg import SquareMatrix, kernel_size, smith_valuations
from repcount.modp import Modulus

# Values of the closed forms at k = 1, 2, 3, frozen after independent
# evaluation of the polynomials.
EXPECTED = {
    "g12": {1: 2, 2: 5, 3: 23},
    "g24": {1: 2, 2: 4, 3: 10},
    "g29": {1: 5, 2: 185, 3: 43085},
    "g31": {1: 3, 2: 53, 3: 8303},
}


def test_burnside_full_trivial_group():
    g = close([SquareMatrix.identity(3, Modulus(5, 2))], name="trivial")
    assert count_burnside_full(g, 1).count == 125
    assert count_burnside_full(g, 2).count == 5 ** 6


def test_burnside_full_g12(g12):
    assert count_burnside_full(g12, 1).count == 2
    assert count_burnside_full(g12, 2).count == 5


def test_burnside_full_per_element_matches_classwise(g12, g24, g29):
    for group, k in [(g12, 2), (g24, 3), (g29, 1)]:
        assert (count_burnside_full(group, k, per_element=True).count
                == count_burnside_full(group, k).count)


def test_burnside_full_threads_do_not_change_result(g24):
    base = count_burnside_full(g24, 2, per_element=True, threads=1).count
    assert count_burnside_full(g24, 2, per_element=True, threads=4).count == base


def test_burnside_precision_error(g12):
    with pytest.raises(PrecisionTooLow):
        count_burnside_full(g12, g12.modulus.M + 1)


def test_classes_counts(g12, g29, g31):
    assert count_burnside_classes(g29, 1).count == 5
    assert count_burnside_classes(g31, 1).count == 3
    assert count_burnside_classes(g12, 2).count == 5


def test_three_way_agreement(exceptional_groups):
    for name, group in exceptional_groups.items():
        exps = exponents(GroupSpec(name))
        for k in (1, 2, 3):
            full = count_burnside_full(group, k).count
            cls = count_burnside_classes(group, k).count
            gen = count_formula_general(group, exps, k).count
            assert full == cls == gen == EXPECTED[name][k], (name, k)


def test_resolve_torsion_g29(g29):
    # exactly one class carries torsion; it is a single factor of valuation 1
    recs = g29.conjugacy_classes()
    tors = [rec for rec in recs if resolve_torsion(g29, rec)]
    assert len(tors) == 1
    assert tors[0].torsion_vals == (1,)
    assert tors[0].class_size == 384
    assert tors[0].element_order == 5


def test_resolve_torsion_identity(g24):
    recs = g24.conjugacy_classes()
    ident = [rec for rec in recs if rec.class_size == 1 and rec.rank == 3]
    assert len(ident) == 1
    assert resolve_torsion(g24, ident[0]) == ()


def test_g24_table_of_smith_diagonals(g24):
    a, b, c = g24.generators
    ident = SquareMatrix.identity(3, g24.modulus)
    neg = SquareMatrix.from_rows(
        [[-1 if i == j else 0 for j in range(3)] for i in range(3)], g24.modulus
    )
    table = {
        "I": (ident, (0, 0, 0)),
        "-I": (neg, (2, 2, 2)),
        "c": (c, (1, 0, 0)),
        "-c": (neg @ c, (1, 2, 0)),
        "ac": (a @ c, (1, 1, 0)),
        "-ac": (neg @ a @ c, (1, 1, 2)),
        "ab": (a @ b, (1, 1, 0)),
        "-ab": (neg @ a @ b, (1, 1, 4)),
    }
    for name, (x, diag) in table.items():
        assert smith_valuations(x - ident).diagonal() == diag, name


def test_g24_class_sizes(g24):
    s1, s2, s3 = g24.generators
    sizes = {}
    for label, x in [("I", SquareMatrix.identity(3, g24.modulus)),
                     ("c", s3), ("ac", s1 @ s3), ("ab", s1 @ s2)]:
        rec = g24.conjugacy_classes()[g24.class_of(g24.find(x))]
        sizes[label] = rec.class_size
    assert sizes == {"I": 1, "c": 21, "ac": 56, "ab": 42}


def test_torsion_census_exact(exceptional_groups):
    expected = {
        "g12": [(8, 3, 6)],
        "g24": [(1, 8, 336), (21, 2, 16), (42, 4, 8), (56, 2, 6)],
        "g29": [(384, 5, 20)],
        "g31": [(2304, 5, 20)],
    }
    for name, group in exceptional_groups.items():
        rows = torsion_classes(group)
        got = sorted(
            (r.record.class_size, r.torsion_order, r.record.centralizer_order)
            for r in rows
        )
        assert got == sorted(expected[name]), name


def test_census_covers_every_class(g24):
    rows = torsion_census(g24)
    assert len(rows) == len(g24.conjugacy_classes())
    assert sum(r.record.class_size for r in rows) == g24.order


def test_formula_general_g31(g31):
    # (7+5)(11+5)(19+5)(23+5) + 4 * 2304, all over 46080
    exps = ExponentList((7, 11, 19, 23))
    assert (12 * 16 * 24 * 28 + 4 * 2304) // 46080 == 3
    assert count_formula_general(g31, exps, 1).count == 3


def test_formula_general_trivial_torsion():
    # A non-modular group has no torsion classes, so the formula is the
    # plain exponent product.
    spec = GroupSpec("family2a", m=3, s=1, n=2, p=7)
    g = build(spec)
    assert not torsion_classes(g)
    got = count_formula_general(g, exponents(spec), 1).count
    num = (2 + 7) * (5 + 7)
    assert got == num // 18 == 6


def test_formula_general_rational_form(g24):
    # same count written as exponent-quotient plus per-class rational
    # corrections p^(k*rank) * (t_k - 1) / centralizer
    from fractions import Fraction
    exps = exponents(GroupSpec("g24"))
    p = 2
    for k in (1, 2, 3):
        total = Fraction(1)
        for m in exps:
            total *= Fraction(m + p ** k, m + 1)
        for rec in g24.conjugacy_classes():
            tors = resolve_torsion(g24, rec)
            if not tors:
                continue
            t_k = p ** sum(min(e, k) for e in tors)
            total += Fraction(p ** (k * rec.rank) * (t_k - 1), rec.centralizer_order)
        assert total == count_formula_general(g24, exps, k).count


def test_solomon_identity(exceptional_groups):
    for name, group in exceptional_groups.items():
        exps = exponents(GroupSpec(name))
        p = group.modulus.p
        for k in (1, 2):
            lhs = solomon_sum(group, k)
            rhs = 1
            for m in exps:
                rhs *= m + p ** k
            assert lhs == rhs, (name, k)


def test_sylow_divisibility(exceptional_groups):
    for group in exceptional_groups.values():
        p = group.modulus.p
        p_part = 1
        order = group.order
        while order % p == 0:
            order //= p
            p_part *= p
        for row in torsion_census(group):
            assert p_part % row.torsion_order == 0


def test_kernel_lifting_property(g12, g24):
    # A nontrivial kernel at precision n > 1 forces one at precision 1.
    for group in (g12, g24):
        ident = SquareMatrix.identity(group.dim, group.modulus)
        for i in range(group.order):
            diff = group.element(i) - ident
            if kernel_size(diff, group.modulus.M) > 1:
                assert kernel_size(diff, 1) > 1


def test_burnside_integrality(exceptional_groups):
    for group in exceptional_groups.values():
        for k in (1, 2):
            total = sum(size * fixed for _, size, fixed
                        in count_burnside_full(group, k).breakdown)
            assert total % group.order == 0


def test_report_serialization(g12):
    rep = count_burnside_full(g12, 1)
    payload = json.loads(rep.to_json(include_timing=False))
    assert payload["count"] == "2"
    assert payload["group"] == "g12"
    assert "elapsed" not in payload
    assert sum(c["size"] for c in payload["classes"]) == 48
    timed = json.loads(rep.to_json(include_timing=True))
    assert "elapsed" in timed
    csv = rep.to_csv()
    assert csv.splitlines()[1] == "g12,3,1,burnside,2"
    text = rep.to_text()
    assert "count=2" in text


def test_report_invariant_checked():
    with pytest.raises(AssertionError):
        CountReport("x", 3, 1, "burnside", 2, breakdown=[(0, 4, 3)])

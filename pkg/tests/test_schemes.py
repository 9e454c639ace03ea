import random
from fractions import Fraction
from math import comb

import pytest

from fatpoints.geometry import (
    ProjPoint,
    random_invertible_change,
    span,
)
from fatpoints.linalg import Matrix, kernel_basis
from fatpoints.schemes import (
    FatPointScheme,
    Form,
    artinian_quotient_regularity,
    condition_matrix,
    hilbert_function,
    ideal_basis,
    in_fat_ideal,
    linear_form_to_form,
    monomial_basis,
    monomial_bound_check,
    multiplicity,
    regularity_index,
)


def unit(n, i):
    return ProjPoint.unit(n, i)


def random_points(rng, n, count, height=9):
    pts = []
    while len(pts) < count:
        coords = [rng.randint(-height, height) for _ in range(n + 1)]
        if not any(coords):
            continue
        p = ProjPoint(tuple(Fraction(c) for c in coords))
        if p not in pts:
            pts.append(p)
    return pts


def simple_scheme(points):
    n = points[0].ambient_n
    return FatPointScheme(n, tuple(points), tuple([1] * len(points)))


# ---------------------------------------------------------------------------
# monomial order
# ---------------------------------------------------------------------------

def test_monomial_basis_size_and_order():
    basis = monomial_basis(2, 3)
    assert len(basis) == comb(2 + 2, 2)
    assert basis.exponents[0] == (2, 0, 0)
    assert basis.exponents[-1] == (0, 0, 2)
    # degree-lexicographic with the first variable greatest
    assert list(basis.exponents) == sorted(basis.exponents, reverse=True)


def test_monomial_index_round_trip():
    basis = monomial_basis(3, 4)
    for i, e in enumerate(basis.exponents):
        assert basis.index(e) == i


# ---------------------------------------------------------------------------
# forms
# ---------------------------------------------------------------------------

def test_form_multiplication_matches_hand_product():
    # (x0 + x1) * (x0 - x1) = x0^2 - x1^2
    a = Form.from_terms(1, 2, {(1, 0): Fraction(1), (0, 1): Fraction(1)})
    b = Form.from_terms(1, 2, {(1, 0): Fraction(1), (0, 1): Fraction(-1)})
    prod = a * b
    assert prod.terms() == {(2, 0): Fraction(1), (0, 2): Fraction(-1)}


def test_form_evaluation():
    f = Form.monomial(3, (1, 1, 0))
    assert f.evaluate(ProjPoint((2, 3, 5))) == Fraction(3, 2)  # normalized (1, 3/2, 5/2)


# ---------------------------------------------------------------------------
# scheme validation
# ---------------------------------------------------------------------------

def test_scheme_rejects_duplicates():
    with pytest.raises(ValueError):
        FatPointScheme(2, (unit(2, 0), unit(2, 0)), (1, 1))


def test_scheme_rejects_bad_multiplicity():
    with pytest.raises(ValueError):
        FatPointScheme(2, (unit(2, 0),), (0,))


# ---------------------------------------------------------------------------
# multiplicity
# ---------------------------------------------------------------------------

def test_multiplicity_double_point_in_plane():
    z = FatPointScheme(2, (unit(2, 0),), (2,))
    assert multiplicity(z) == 3


def test_multiplicity_simple_points():
    rng = random.Random(0)
    pts = random_points(rng, 3, 5)
    assert multiplicity(simple_scheme(pts)) == 5


def test_multiplicity_triple_point_in_space():
    z = FatPointScheme(3, (unit(3, 1),), (3,))
    assert multiplicity(z) == 10


# ---------------------------------------------------------------------------
# hilbert function
# ---------------------------------------------------------------------------

def test_hilbert_single_simple_point():
    z = simple_scheme([ProjPoint((1, 2, 3))])
    for t in range(5):
        assert hilbert_function(z, t) == 1


def test_hilbert_double_point_degree_one():
    z = FatPointScheme(2, (ProjPoint((1, 1, 2)),), (2,))
    assert hilbert_function(z, 1) == 3


def evaluation_nullspace_oracle(points, t):
    """Independent count: C(t+n, n) minus the nullity of plain evaluations."""
    n = points[0].ambient_n
    basis = monomial_basis(t, n + 1)
    rows = []
    for p in points:
        coords = p.integer_rep()
        row = []
        for expo in basis.exponents:
            v = 1
            for c, e in zip(coords, expo):
                v *= c**e
            row.append(v)
        rows.append(row)
    m = Matrix.from_rows(rows)
    return comb(t + n, n) - len(kernel_basis(m))


def test_hilbert_general_simple_points_against_evaluation_oracle():
    rng = random.Random(12)
    for n, s in [(2, 4), (3, 6), (2, 6)]:
        pts = random_points(rng, n, s, height=30)
        z = simple_scheme(pts)
        for t in range(0, s + 1):
            expected = evaluation_nullspace_oracle(pts, t)
            assert hilbert_function(z, t) == expected
            assert expected == min(comb(t + n, n), s) or span(pts).dim < min(s - 1, n)


def test_hilbert_rejects_negative_degree():
    z = simple_scheme([unit(2, 0)])
    with pytest.raises(ValueError):
        hilbert_function(z, -1)


def test_hilbert_monotone_until_stabilization():
    rng = random.Random(23)
    for _ in range(5):
        n = rng.randint(1, 3)
        pts = random_points(rng, n, rng.randint(1, 3))
        mults = tuple(rng.randint(1, 3) for _ in pts)
        z = FatPointScheme(n, tuple(pts), mults)
        e = multiplicity(z)
        values = [hilbert_function(z, t) for t in range(sum(mults) + 1)]
        for a, b in zip(values, values[1:]):
            assert a <= b <= e
            if a < e:
                assert a < b
        assert values[-1] == e


def test_hilbert_full_below_smallest_multiplicity():
    z = FatPointScheme(2, (unit(2, 0), ProjPoint((1, 1, 1))), (3, 2))
    for t in range(2):
        assert hilbert_function(z, t) == comb(t + 2, 2)


# ---------------------------------------------------------------------------
# regularity index
# ---------------------------------------------------------------------------

def test_regularity_single_fat_point():
    for n, m in [(1, 3), (2, 2), (2, 4), (3, 3)]:
        z = FatPointScheme(n, (ProjPoint(tuple(Fraction(1) for _ in range(n + 1))),), (m,))
        assert regularity_index(z) == m - 1


def test_regularity_two_simple_points():
    z = simple_scheme([unit(2, 0), unit(2, 1)])
    assert regularity_index(z) == 1


def test_regularity_three_collinear_points():
    pts = [unit(2, 0), unit(2, 1), ProjPoint((1, 1, 0))]
    assert regularity_index(simple_scheme(pts)) == 2


def test_regularity_two_fat_points_classical_value():
    rng = random.Random(1)
    for _ in range(8):
        n = rng.randint(1, 3)
        m1, m2 = rng.randint(1, 4), rng.randint(1, 4)
        pts = random_points(rng, n, 2)
        z = FatPointScheme(n, tuple(pts), (m1, m2))
        assert regularity_index(z) == m1 + m2 - 1


def test_regularity_collinear_fat_points_classical_value():
    rng = random.Random(2)
    for _ in range(6):
        n = rng.randint(2, 3)
        s = rng.randint(2, 4)
        mults = tuple(rng.randint(1, 3) for _ in range(s))
        pts = []
        while len(pts) < s:
            a, b = rng.randint(-9, 9), rng.randint(-9, 9)
            if a == 0 and b == 0:
                continue
            p = ProjPoint(tuple(Fraction(c) for c in [a, b] + [0] * (n - 1)))
            if p not in pts:
                pts.append(p)
        z = FatPointScheme(n, tuple(pts), mults)
        assert regularity_index(z) == sum(mults) - 1


def test_condition_matrix_row_count():
    rng = random.Random(3)
    for _ in range(6):
        n = rng.randint(1, 3)
        s = rng.randint(1, 3)
        pts = random_points(rng, n, s)
        mults = tuple(rng.randint(1, 4) for _ in range(s))
        z = FatPointScheme(n, tuple(pts), mults)
        for t in range(4):
            m = condition_matrix(z, t)
            expected = sum(comb(min(mi - 1, t) + n, n) for mi in mults)
            assert m.rows == expected
            assert m.cols == comb(t + n, n)


def test_regularity_invariance_under_projectivities_and_permutations():
    rng = random.Random(31)
    pts = random_points(rng, 2, 4)
    z = FatPointScheme(2, tuple(pts), (2, 1, 1, 2))
    base = regularity_index(z)
    table = [hilbert_function(z, t) for t in range(base + 1)]
    for _ in range(5):
        change = random_invertible_change(2, rng)
        moved = z.transform(change)
        assert regularity_index(moved) == base
        assert [hilbert_function(moved, t) for t in range(base + 1)] == table
        order = list(range(4))
        rng.shuffle(order)
        shuffled = z.permuted(order)
        assert regularity_index(shuffled) == base


# ---------------------------------------------------------------------------
# ideal basis and membership
# ---------------------------------------------------------------------------

def test_ideal_empty_for_double_point_degree_one():
    z = FatPointScheme(2, (ProjPoint((1, 2, 1)),), (2,))
    assert ideal_basis(z, 1) == []


def test_ideal_empty_two_coordinate_points_line():
    z = simple_scheme([unit(1, 0), unit(1, 1)])
    assert ideal_basis(z, 1) == []


def five_general_double_points(seed=7):
    rng = random.Random(seed)
    while True:
        pts = random_points(rng, 2, 5, height=9)
        ok = span(pts).dim == 2
        from itertools import combinations

        for sub in combinations(pts, 3):
            if span(sub).dim <= 1:
                ok = False
        if ok:
            return FatPointScheme(2, tuple(pts), (2,) * 5)


def test_ideal_of_five_double_points_is_square_of_conic():
    z = five_general_double_points()
    forms = ideal_basis(z, 4)
    assert len(forms) == 1
    # the conic through the five points, from plain evaluations
    basis2 = monomial_basis(2, 3)
    rows = []
    for p in z.points:
        coords = p.integer_rep()
        rows.append([
            coords[0] ** e[0] * coords[1] ** e[1] * coords[2] ** e[2]
            for e in basis2.exponents
        ])
    conic_vecs = kernel_basis(Matrix.from_rows(rows))
    assert len(conic_vecs) == 1
    conic = Form(2, 3, conic_vecs[0])
    square = conic * conic
    quartic = forms[0]
    ratio = None
    for a, b in zip(square.coeffs, quartic.coeffs):
        if (a == 0) != (b == 0):
            pytest.fail("supports differ")
        if a:
            if ratio is None:
                ratio = b / a
            else:
                assert b / a == ratio
    assert ratio is not None


def test_ideal_dimension_complements_hilbert():
    rng = random.Random(40)
    for _ in range(5):
        n = rng.randint(1, 3)
        pts = random_points(rng, n, rng.randint(1, 3))
        z = FatPointScheme(n, tuple(pts), tuple(rng.randint(1, 2) for _ in pts))
        for t in range(4):
            assert len(ideal_basis(z, t)) + hilbert_function(z, t) == comb(t + n, n)


def test_membership_zero_form():
    z = simple_scheme([unit(2, 0)])
    zero = Form(2, 3, tuple(Fraction(0) for _ in range(6)))
    assert in_fat_ideal(zero, z)


def test_membership_power_of_common_hyperplane():
    # all points on the line x2 = 0, doubled
    pts = [unit(2, 0), unit(2, 1), ProjPoint((1, 1, 0))]
    z = FatPointScheme(2, tuple(pts), (2, 2, 2))
    h = linear_form_to_form((Fraction(0), Fraction(0), Fraction(1)))
    assert in_fat_ideal(h * h, z)
    assert not in_fat_ideal(h, z)


def test_membership_of_combinations_and_non_members():
    rng = random.Random(9)
    z = five_general_double_points(9)
    forms = ideal_basis(z, 5)
    assert forms
    combo_terms = {}
    acc = None
    for f in forms:
        c = Fraction(rng.randint(1, 5))
        scaled = Form(f.degree, f.nvars, tuple(c * x for x in f.coeffs))
        acc = scaled if acc is None else Form(
            f.degree, f.nvars, tuple(a + b for a, b in zip(acc.coeffs, scaled.coeffs))
        )
    assert in_fat_ideal(acc, z)
    # a monomial outside the ideal: degree-5 monomial supported away from the kernel
    probe = Form.monomial(3, (5, 0, 0))
    assert not in_fat_ideal(probe, z)


# ---------------------------------------------------------------------------
# artinian reductions
# ---------------------------------------------------------------------------

def test_artinian_regularity_single_point_order_one():
    # the quotient is K, living in degree 0 only; its Hilbert function
    # first vanishes at degree 1
    j = simple_scheme([unit(2, 1)])
    assert artinian_quotient_regularity(j, unit(2, 0), 1) == 1


def test_artinian_regularity_matches_monomial_criterion_on_line():
    j = simple_scheme([unit(1, 1)])
    p = unit(1, 0)
    b = artinian_quotient_regularity(j, p, 2)
    assert monomial_bound_check(j, p, 2, b)
    if b - 1 >= 1:
        assert not monomial_bound_check(j, p, 2, b - 1)


def test_artinian_regularity_rejects_coincident_point():
    j = simple_scheme([unit(2, 0)])
    with pytest.raises(ValueError):
        artinian_quotient_regularity(j, unit(2, 0), 1)


def test_monomial_criterion_iff_on_seeded_instances():
    rng = random.Random(77)
    done = 0
    while done < 8:
        n = rng.randint(1, 3)
        pts = random_points(rng, n, rng.randint(1, 3))
        p = None
        while p is None or p in pts:
            p = random_points(rng, n, 1)[0]
        mults = tuple(rng.randint(1, 3) for _ in pts)
        j = FatPointScheme(n, tuple(pts), mults)
        a = rng.randint(1, 3)
        b = artinian_quotient_regularity(j, p, a)
        assert monomial_bound_check(j, p, a, b)
        assert monomial_bound_check(j, p, a, sum(mults) + a)
        if b - 1 >= a - 1:
            assert not monomial_bound_check(j, p, a, b - 1)
        done += 1


def test_monomial_criterion_high_degree_saturation():
    j = FatPointScheme(2, (unit(2, 1), unit(2, 2)), (2, 1))
    p = ProjPoint((1, 1, 1))
    assert monomial_bound_check(j, p, 2, sum(j.mults))

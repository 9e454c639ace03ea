import random
from fractions import Fraction
from itertools import combinations

import pytest

from fatpoints.geometry import ProjPoint, random_invertible_change, span
from fatpoints.schemes import FatPointScheme
from fatpoints.segre import max_multiplicity_on_flats, segre_T, segre_bound


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


def brute_force_q(z, j):
    """Max multiplicity on a j-flat over every subset, no span shortcuts."""
    best = 0
    for size in range(1, z.size + 1):
        for sub in combinations(range(z.size), size):
            if span([z.points[i] for i in sub]).dim <= j:
                best = max(best, sum(z.mults[i] for i in sub))
    return best


# ---------------------------------------------------------------------------
# q_j
# ---------------------------------------------------------------------------

def test_whole_space_carries_everything():
    rng = random.Random(14)
    pts = random_points(rng, 3, 5)
    z = FatPointScheme(3, tuple(pts), (1, 2, 3, 1, 2))
    q, flat, witness = max_multiplicity_on_flats(z, 3)
    assert q == 9
    assert witness == tuple(range(5))


def test_two_double_points_on_their_line():
    z = FatPointScheme(3, (unit(3, 0), unit(3, 1)), (2, 2))
    q, flat, witness = max_multiplicity_on_flats(z, 1)
    assert q == 4
    assert flat == span([unit(3, 0), unit(3, 1)])
    assert witness == (0, 1)


def test_planted_collinear_quadruple_among_seven():
    rng = random.Random(42)
    base = [unit(3, 0), unit(3, 1)]
    planted = base + [ProjPoint((1, 2, 0, 0)), ProjPoint((1, 5, 0, 0))]
    rest = []
    while len(rest) < 3:
        p = random_points(rng, 3, 1, height=7)[0]
        if p not in planted + rest and not (p.coords[2] == 0 and p.coords[3] == 0):
            rest.append(p)
    pts = planted + rest
    z = FatPointScheme(3, tuple(pts), tuple([1] * 7))
    q, flat, witness = max_multiplicity_on_flats(z, 1)
    assert q == brute_force_q(z, 1)
    assert q >= 4
    if q == 4:
        assert witness == (0, 1, 2, 3)


def test_enumeration_matches_brute_force():
    rng = random.Random(1000)
    for _ in range(8):
        n = rng.randint(2, 3)
        s = rng.randint(2, 6)
        pts = random_points(rng, n, s, height=4)
        z = FatPointScheme(n, tuple(pts), tuple(rng.randint(1, 3) for _ in range(s)))
        for j in range(1, n + 1):
            q, _, _ = max_multiplicity_on_flats(z, j)
            assert q == brute_force_q(z, j)


def test_q_nondecreasing_and_caps_at_total():
    rng = random.Random(3)
    pts = random_points(rng, 3, 6)
    z = FatPointScheme(3, tuple(pts), (2, 1, 1, 3, 1, 2))
    qs = [max_multiplicity_on_flats(z, j)[0] for j in range(1, 4)]
    assert qs == sorted(qs)
    assert qs[-1] == sum(z.mults)


# ---------------------------------------------------------------------------
# T_j and the bound
# ---------------------------------------------------------------------------

def test_pair_formula():
    z = FatPointScheme(2, (unit(2, 0), unit(2, 1)), (2, 2))
    assert segre_T(z, 1) == 3


def test_single_point_formula():
    for m in (1, 2, 5):
        z = FatPointScheme(3, (ProjPoint((1, 1, 1, 1)),), (m,))
        for j in range(1, 4):
            assert segre_T(z, j) == (m + j - 2) // j


def test_five_general_double_points_bound():
    rng = random.Random(7)
    while True:
        pts = random_points(rng, 2, 5)
        if span(pts).dim == 2 and all(
            span(list(sub)).dim == 2 for sub in combinations(pts, 3)
        ):
            break
    z = FatPointScheme(2, tuple(pts), (2,) * 5)
    report = segre_bound(z)
    assert [e.value for e in report.entries] == [3, 5]
    assert report.bound == 5
    assert report.argmax_j == 2


def test_collinear_simple_points_bound():
    pts = [ProjPoint((1, k, 0)) for k in range(5)]
    z = FatPointScheme(2, tuple(pts), (1,) * 5)
    report = segre_bound(z)
    assert report.entry(1).value == 4  # s - 1
    assert report.bound == 4


def test_pair_lower_bound_invariant():
    rng = random.Random(90)
    for _ in range(10):
        n = rng.randint(2, 3)
        s = rng.randint(2, 5)
        pts = random_points(rng, n, s)
        mults = tuple(rng.randint(1, 3) for _ in range(s))
        z = FatPointScheme(n, tuple(pts), mults)
        best_pair = max(
            mults[i] + mults[k] - 1 for i in range(s) for k in range(i + 1, s)
        )
        assert segre_T(z, 1) >= best_pair


def test_bound_invariance_under_change_and_permutation():
    rng = random.Random(63)
    pts = random_points(rng, 3, 5)
    z = FatPointScheme(3, tuple(pts), (2, 1, 3, 1, 2))
    base = segre_bound(z)
    for _ in range(5):
        change = random_invertible_change(3, rng)
        moved = z.transform(change)
        order = list(range(5))
        rng.shuffle(order)
        shuffled = z.permuted(order)
        assert segre_bound(moved).bound == base.bound
        assert [e.value for e in segre_bound(moved).entries] == [
            e.value for e in base.entries
        ]
        assert segre_bound(shuffled).bound == base.bound


def test_out_of_range_j():
    z = FatPointScheme(2, (unit(2, 0),), (1,))
    with pytest.raises(ValueError):
        max_multiplicity_on_flats(z, 0)
    with pytest.raises(ValueError):
        max_multiplicity_on_flats(z, 3)

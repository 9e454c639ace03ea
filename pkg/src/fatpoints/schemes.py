"""Fat point schemes and their degree-by-degree invariants.

A fat point scheme assigns a multiplicity m_i to each of finitely many
distinct points of P^n.  Its graded invariants are computed here without
any ideal-theoretic machinery: for each degree t we build the condition
matrix of derivative-evaluation functionals, whose rank is the value of
the Hilbert function, whose kernel is the degree-t piece of the defining
ideal, and whose column restrictions answer membership questions for
artinian reductions.

Derivative rows use order exactly min(m_i - 1, t) per point.  For
t >= m_i - 1 the Euler relation makes top-order vanishing imply all lower
orders (characteristic zero), and for smaller t the order-t conditions
already force the form to vanish identically, which is the correct
condition since a nonzero degree-t form cannot vanish to order above t.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, perm
from typing import Sequence

from fatpoints.geometry import ProjPoint, coordinate_change_to_origin
from fatpoints.linalg import Matrix, SpanTester, kernel_basis, mat_vec, rank_rows


# ---------------------------------------------------------------------------
# monomials and forms
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def monomial_basis(degree: int, nvars: int) -> "MonomialBasis":
    return MonomialBasis(degree, nvars)


class MonomialBasis:
    """Monomials of one degree, ordered degree-lexicographically.

    The first variable is greatest, so the basis starts at X0^t and ends
    at Xlast^t.  Holds comb(degree + nvars - 1, nvars - 1) exponent
    vectors.
    """

    def __init__(self, degree: int, nvars: int):
        if degree < 0 or nvars < 1:
            raise ValueError("degree must be >= 0 and nvars >= 1")
        self.degree = degree
        self.nvars = nvars
        self.exponents: tuple[tuple[int, ...], ...] = tuple(_descending_exponents(degree, nvars))
        self._index = {e: i for i, e in enumerate(self.exponents)}

    def index(self, exponent: Sequence[int]) -> int:
        return self._index[tuple(exponent)]

    def __len__(self) -> int:
        return len(self.exponents)

    def __iter__(self):
        return iter(self.exponents)


def _descending_exponents(total: int, nvars: int):
    if nvars == 1:
        yield (total,)
        return
    for head in range(total, -1, -1):
        for tail in _descending_exponents(total - head, nvars - 1):
            yield (head,) + tail


@dataclass(frozen=True)
class Form:
    """A homogeneous form as a coefficient vector over a monomial basis."""

    degree: int
    nvars: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        expected = comb(self.degree + self.nvars - 1, self.nvars - 1)
        if len(self.coeffs) != expected:
            raise ValueError(f"expected {expected} coefficients, got {len(self.coeffs)}")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    @classmethod
    def from_terms(cls, degree: int, nvars: int, terms: dict[tuple[int, ...], Fraction]) -> "Form":
        basis = monomial_basis(degree, nvars)
        coeffs = [Fraction(0)] * len(basis)
        for expo, c in terms.items():
            coeffs[basis.index(expo)] += c
        return cls(degree, nvars, tuple(coeffs))

    @classmethod
    def monomial(cls, nvars: int, exponent: Sequence[int]) -> "Form":
        exponent = tuple(exponent)
        return cls.from_terms(sum(exponent), nvars, {exponent: Fraction(1)})

    def terms(self) -> dict[tuple[int, ...], Fraction]:
        basis = monomial_basis(self.degree, self.nvars)
        return {e: c for e, c in zip(basis.exponents, self.coeffs) if c}

    def __mul__(self, other: "Form") -> "Form":
        if self.nvars != other.nvars:
            raise ValueError("variable counts disagree")
        out: dict[tuple[int, ...], Fraction] = {}
        for ea, ca in self.terms().items():
            for eb, cb in other.terms().items():
                key = tuple(x + y for x, y in zip(ea, eb))
                out[key] = out.get(key, Fraction(0)) + ca * cb
        return Form.from_terms(self.degree + other.degree, self.nvars, out)

    def evaluate(self, point: ProjPoint) -> Fraction:
        coords = point.coords
        total = Fraction(0)
        for expo, c in self.terms().items():
            v = c
            for x, e in zip(coords, expo):
                v *= x**e
            total += v
        return total


def linear_form_to_form(coeffs: Sequence[Fraction]) -> Form:
    nvars = len(coeffs)
    terms = {}
    for j, c in enumerate(coeffs):
        if c:
            expo = tuple(int(k == j) for k in range(nvars))
            terms[expo] = Fraction(c)
    if not terms:
        raise ValueError("zero linear form")
    return Form.from_terms(1, nvars, terms)


# ---------------------------------------------------------------------------
# schemes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FatPointScheme:
    """Distinct points of P^n with positive multiplicities."""

    n: int
    points: tuple[ProjPoint, ...]
    mults: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "mults", tuple(int(m) for m in self.mults))
        if self.n < 1:
            raise ValueError("ambient dimension must be at least 1")
        if not self.points:
            raise ValueError("a scheme needs at least one point")
        if len(self.points) != len(self.mults):
            raise ValueError("point and multiplicity counts disagree")
        if any(p.ambient_n != self.n for p in self.points):
            raise ValueError("point does not live in the declared ambient space")
        if len(set(self.points)) != len(self.points):
            raise ValueError("points must be pairwise distinct")
        if any(m < 1 for m in self.mults):
            raise ValueError("multiplicities must be positive")

    @property
    def size(self) -> int:
        return len(self.points)

    def without_point(self, i: int) -> "FatPointScheme":
        if self.size < 2:
            raise ValueError("cannot remove the only point")
        pts = self.points[:i] + self.points[i + 1 :]
        ms = self.mults[:i] + self.mults[i + 1 :]
        return FatPointScheme(self.n, pts, ms)

    def transform(self, change: Matrix) -> "FatPointScheme":
        moved = tuple(ProjPoint(mat_vec(change, p.coords)) for p in self.points)
        return FatPointScheme(self.n, moved, self.mults)

    def permuted(self, order: Sequence[int]) -> "FatPointScheme":
        return FatPointScheme(
            self.n,
            tuple(self.points[i] for i in order),
            tuple(self.mults[i] for i in order),
        )


# ---------------------------------------------------------------------------
# condition matrices
# ---------------------------------------------------------------------------

def _point_condition_rows(coords: tuple[int, ...], mult: int, t: int) -> list[list[int]]:
    """All order-min(mult-1, t) derivative evaluations at one point."""
    nvars = len(coords)
    order = min(mult - 1, t)
    powers = [[1] * (t + 1) for _ in range(nvars)]
    for j, c in enumerate(coords):
        col = powers[j]
        for k in range(1, t + 1):
            col[k] = col[k - 1] * c

    basis = monomial_basis(t, nvars)
    rows = []
    for alpha in monomial_basis(order, nvars).exponents:
        lut = []
        for j, aj in enumerate(alpha):
            col = [0] * (t + 1)
            pj = powers[j]
            for b in range(aj, t + 1):
                col[b] = perm(b, aj) * pj[b - aj]
            lut.append(col)
        row = []
        for beta in basis.exponents:
            v = 1
            for j in range(nvars):
                v *= lut[j][beta[j]]
                if not v:
                    break
            row.append(v)
        rows.append(row)
    return rows


def condition_rows(z: FatPointScheme, t: int) -> list[list[int]]:
    """Integer rows of the degree-t condition matrix (fast path)."""
    if t < 0:
        raise ValueError("degree must be nonnegative")
    rows: list[list[int]] = []
    for p, m in zip(z.points, z.mults):
        rows.extend(_point_condition_rows(p.integer_rep(), m, t))
    return rows


def condition_matrix(z: FatPointScheme, t: int) -> Matrix:
    """The degree-t derivative-vanishing matrix; its rank is H_Z(t)."""
    return Matrix.from_rows(condition_rows(z, t))


# ---------------------------------------------------------------------------
# invariants
# ---------------------------------------------------------------------------

def multiplicity(z: FatPointScheme) -> int:
    """Degree of the scheme: the stable value of its Hilbert function."""
    return sum(comb(m + z.n - 1, z.n) for m in z.mults)


def hilbert_function(z: FatPointScheme, t: int) -> int:
    """Dimension of the degree-t piece of the homogeneous coordinate ring."""
    ncols = comb(t + z.n, z.n)
    return rank_rows(condition_rows(z, t), ncols)


@lru_cache(maxsize=4096)
def regularity_index(z: FatPointScheme) -> int:
    """Least degree at which the Hilbert function reaches the multiplicity.

    The search ascends from max(m_i) - 1; values below that are capped by
    the column count.  A hard cap at sum(m_i) - 1 guards against
    arithmetic bugs; it is mathematically unreachable.
    """
    e = multiplicity(z)
    cap = sum(z.mults) - 1
    t = max(z.mults) - 1
    while t <= cap:
        if hilbert_function(z, t) == e:
            return t
        t += 1
    raise RuntimeError("regularity search passed its cap; this indicates a bug")


def ideal_basis(z: FatPointScheme, t: int) -> list[Form]:
    """Basis of the degree-t forms vanishing to the scheme's orders."""
    mat = condition_matrix(z, t)
    return [Form(t, z.n + 1, vec) for vec in kernel_basis(mat)]


def in_fat_ideal(f: Form, z: FatPointScheme) -> bool:
    """Whether a form vanishes to order m_i at every point of the scheme."""
    if f.nvars != z.n + 1:
        raise ValueError("variable counts disagree")
    if f.is_zero():
        return True
    coeffs = f.coeffs
    for p, m in zip(z.points, z.mults):
        for row in _point_condition_rows(p.integer_rep(), m, f.degree):
            total = Fraction(0)
            for rv, c in zip(row, coeffs):
                if rv and c:
                    total += rv * c
            if total:
                return False
    return True


# ---------------------------------------------------------------------------
# artinian reductions at a distinguished point
# ---------------------------------------------------------------------------

def _checked_origin_setup(j: FatPointScheme, p: ProjPoint, a: int) -> FatPointScheme:
    if a < 1:
        raise ValueError("the vanishing order must be positive")
    if p.ambient_n != j.n:
        raise ValueError("ambient dimensions disagree")
    if p in j.points:
        raise ValueError("the distinguished point coincides with a point of the scheme")
    return j.transform(coordinate_change_to_origin(p))


def artinian_quotient_regularity(j: FatPointScheme, p: ProjPoint, a: int) -> int:
    """Regularity index of the quotient by the scheme plus p's a-th power.

    The quotient is artinian, so its Hilbert function stabilizes at 0 and
    the regularity index is the first degree where it vanishes.  After
    moving p to (1, 0, ..., 0), the degree-t dimension of the quotient
    equals the rank of the condition matrix minus the rank of its columns
    at monomials of degree >= a in the last n variables; the iteration
    stops at the first zero since an artinian standard graded quotient
    cannot revive.
    """
    moved = _checked_origin_setup(j, p, a)
    cap = sum(j.mults) + a
    t = 0
    while t <= cap:
        rows = condition_rows(moved, t)
        basis = monomial_basis(t, j.n + 1)
        high = [k for k, expo in enumerate(basis.exponents) if t - expo[0] >= a]
        full_rank = rank_rows(rows, len(basis))
        if high:
            sub_rank = rank_rows([[row[k] for k in high] for row in rows], len(high))
        else:
            sub_rank = 0
        if full_rank == sub_rank:
            return t
        t += 1
    raise RuntimeError("artinian quotient failed to terminate; this indicates a bug")


def monomial_bound_check(j: FatPointScheme, p: ProjPoint, a: int, b: int) -> bool:
    """Monomial-by-monomial certificate that the artinian regularity is <= b.

    After the coordinate change sending p to (1, 0, ..., 0), checks for
    every i < a and every degree-i monomial M in the last n variables
    that X0^(b-i) * M lies in the span of the degree-b ideal piece
    together with the monomials of order >= i+1 at p.  Equivalent to
    artinian_quotient_regularity(j, p, a) <= b.
    """
    if b < a - 1:
        raise ValueError("the degree must be at least a - 1")
    moved = _checked_origin_setup(j, p, a)
    nvars = j.n + 1
    basis_b = monomial_basis(b, nvars)
    ideal_piece = [list(vec) for vec in kernel_basis(condition_matrix(moved, b))]

    for i in range(a):
        stacked = list(ideal_piece)
        for k, expo in enumerate(basis_b.exponents):
            if b - expo[0] >= i + 1:
                unit = [Fraction(0)] * len(basis_b)
                unit[k] = Fraction(1)
                stacked.append(unit)
        tester = SpanTester(stacked, len(basis_b))
        for tail in monomial_basis(i, nvars - 1).exponents:
            full = (b - i,) + tail
            v = [Fraction(0)] * len(basis_b)
            v[basis_b.index(full)] = Fraction(1)
            if not tester.contains(v):
                return False
    return True

"""Points, flats and hyperplanes of projective n-space over the rationals.

Points are stored as canonical homogeneous coordinates (first nonzero
coordinate scaled to 1), linear subspaces as the reduced row echelon
basis of their affine cone, and hyperplanes as normalized coefficient
vectors of the linear forms cutting them out.  Canonical forms make
structural equality coincide with geometric equality, so flats can be
deduplicated with a set.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Iterable, Optional, Sequence

from fatpoints.linalg import Matrix, inverse, kernel_basis, mat_vec, rref

Coords = tuple[Fraction, ...]


def _normalize(coords: Sequence[object], kind: str) -> Coords:
    vals = tuple(Fraction(c) for c in coords)
    lead = next((c for c in vals if c != 0), None)
    if lead is None:
        raise ValueError(f"{kind} must have a nonzero coordinate vector")
    if lead != 1:
        vals = tuple(c / lead for c in vals)
    return vals


def _primitive_ints(coords: Coords) -> tuple[int, ...]:
    lcm = 1
    for c in coords:
        d = c.denominator
        lcm = lcm // gcd(lcm, d) * d
    ints = [int(c.numerator) * (lcm // c.denominator) for c in coords]
    content = 0
    for v in ints:
        content = gcd(content, v)
    if content > 1:
        ints = [v // content for v in ints]
    return tuple(ints)


@dataclass(frozen=True)
class ProjPoint:
    """A point of P^n in canonical homogeneous coordinates."""

    coords: Coords

    def __post_init__(self) -> None:
        object.__setattr__(self, "coords", _normalize(self.coords, "point"))

    @property
    def ambient_n(self) -> int:
        return len(self.coords) - 1

    def integer_rep(self) -> tuple[int, ...]:
        """A primitive integer representative of the same point."""
        return _primitive_ints(self.coords)

    @classmethod
    def unit(cls, n: int, i: int) -> "ProjPoint":
        return cls(tuple(Fraction(int(j == i)) for j in range(n + 1)))


@dataclass(frozen=True)
class LinearForm:
    """A hyperplane of P^n, identified with its defining linear form."""

    coeffs: Coords

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", _normalize(self.coeffs, "linear form"))

    @property
    def ambient_n(self) -> int:
        return len(self.coeffs) - 1

    def evaluate(self, p: ProjPoint) -> Fraction:
        if len(self.coeffs) != len(p.coords):
            raise ValueError("ambient dimensions disagree")
        return sum((c * x for c, x in zip(self.coeffs, p.coords)), Fraction(0))

    def vanishes_at(self, p: ProjPoint) -> bool:
        return self.evaluate(p) == 0


@dataclass(frozen=True)
class Flat:
    """A linear subvariety of P^n, as the rref basis of its cone.

    A d-dimensional flat is represented by d+1 independent vectors in
    reduced row echelon form, which is the unique canonical basis of the
    cone; two flats are equal exactly when the dataclasses are equal.
    """

    ambient_n: int
    cone_basis: tuple[Coords, ...]

    def __post_init__(self) -> None:
        if not self.cone_basis:
            raise ValueError("a flat needs at least one cone vector")
        width = self.ambient_n + 1
        prev_pivot = -1
        for i, row in enumerate(self.cone_basis):
            if len(row) != width:
                raise ValueError("cone vector length does not match ambient dimension")
            pivot = next((j for j, x in enumerate(row) if x != 0), None)
            if pivot is None or row[pivot] != 1 or pivot <= prev_pivot:
                raise ValueError("cone basis is not in canonical echelon form")
            if any(self.cone_basis[k][pivot] != 0 for k in range(len(self.cone_basis)) if k != i):
                raise ValueError("cone basis is not fully reduced")
            prev_pivot = pivot

    @property
    def dim(self) -> int:
        return len(self.cone_basis) - 1

    @classmethod
    def from_vectors(cls, ambient_n: int, vectors: Iterable[Sequence[object]]) -> "Flat":
        rows = [list(v) for v in vectors]
        res = rref(Matrix.from_rows(rows))
        basis = tuple(res.rref.row(i) for i in range(res.rank))
        return cls(ambient_n, basis)


def span(points: Sequence[ProjPoint]) -> Flat:
    """Smallest flat containing the given points."""
    if not points:
        raise ValueError("span of an empty point set is undefined")
    n = points[0].ambient_n
    if any(p.ambient_n != n for p in points):
        raise ValueError("ambient dimensions disagree")
    return Flat.from_vectors(n, [p.integer_rep() for p in points])


def flat_contains(f: Flat, p: ProjPoint) -> bool:
    """Whether the point lies on the flat."""
    if p.ambient_n != f.ambient_n:
        raise ValueError("ambient dimensions disagree")
    v = list(p.coords)
    for row in f.cone_basis:
        pivot = next(j for j, x in enumerate(row) if x != 0)
        t = v[pivot]
        if t:
            for j in range(pivot, len(v)):
                v[j] -= t * row[j]
    return not any(v)


def _require_distinct(points: Sequence[ProjPoint]) -> None:
    if len(set(points)) != len(points):
        raise ValueError("points must be pairwise distinct")


def general_position_on(points: Sequence[ProjPoint], r: int) -> bool:
    """General position on a linear r-space.

    True when all points lie on some r-flat and no j+2 of them lie on a
    j-flat for any j < r.
    """
    _require_distinct(points)
    if span(points).dim > r:
        return False
    top = min(len(points), r + 1)
    for q in range(3, top + 1):
        for sub in combinations(points, q):
            if span(sub).dim <= q - 2:
                return False
    return True


def degeneracy_index(points: Sequence[ProjPoint]) -> Optional[int]:
    """Minimal h < dim span such that some h-flat holds h+2 of the points.

    Returns None when the points are in general position on their span.
    """
    _require_distinct(points)
    top = span(points).dim
    for h in range(1, top):
        if len(points) < h + 2:
            break
        for sub in combinations(points, h + 2):
            if span(sub).dim <= h:
                return h
    return None


def hyperplane_containing_avoiding(f: Flat, avoid: ProjPoint) -> LinearForm:
    """A hyperplane through the flat that misses the given point."""
    if avoid.ambient_n != f.ambient_n:
        raise ValueError("ambient dimensions disagree")
    if f.dim > f.ambient_n - 1:
        raise ValueError("the whole space is contained in no hyperplane")
    if flat_contains(f, avoid):
        raise ValueError("the point lies on the flat; no hyperplane can separate them")
    for coeffs in kernel_basis(Matrix.from_rows([list(r) for r in f.cone_basis])):
        form = LinearForm(coeffs)
        if not form.vanishes_at(avoid):
            return form
    raise RuntimeError("unreachable: avoided point is outside the flat")  # pragma: no cover


def extend_flat_avoiding(f: Flat, target_dim: int, avoid: ProjPoint, seed: int) -> Flat:
    """Grow a flat to the requested dimension while avoiding a point.

    Directions are drawn from a seeded generator, so the result is a
    deterministic function of (flat, target_dim, avoid, seed).  Each
    dimension step retries at most 32 random directions.
    """
    n = f.ambient_n
    if not f.dim <= target_dim <= n - 1:
        raise ValueError("target dimension out of range")
    if flat_contains(f, avoid):
        raise ValueError("cannot avoid a point already on the flat")
    rng = random.Random(seed)
    cur = f
    while cur.dim < target_dim:
        for _ in range(32):
            v = [Fraction(rng.randint(-9, 9)) for _ in range(n + 1)]
            if not any(v):
                continue
            cand = Flat.from_vectors(n, [list(r) for r in cur.cone_basis] + [v])
            if cand.dim == cur.dim + 1 and not flat_contains(cand, avoid):
                cur = cand
                break
        else:
            raise RuntimeError("exhausted retries while extending a flat")
    return cur


def coordinate_change_to_origin(p: ProjPoint) -> Matrix:
    """Invertible change of coordinates sending p to (1, 0, ..., 0)."""
    n = p.ambient_n
    cols: list[tuple[int, ...]] = [p.integer_rep()]
    for i in range(n + 1):
        if len(cols) == n + 1:
            break
        unit = tuple(int(j == i) for j in range(n + 1))
        probe = rref(Matrix.from_rows([list(c) for c in cols] + [list(unit)]))
        if probe.rank == len(cols) + 1:
            cols.append(unit)
    basis = Matrix.from_rows([list(c) for c in cols]).transpose()
    return inverse(basis)


def transform_point(change: Matrix, p: ProjPoint) -> ProjPoint:
    return ProjPoint(mat_vec(change, p.coords))


def transform_form(change: Matrix, form: LinearForm) -> LinearForm:
    """Push a hyperplane through a coordinate change of the points."""
    coeffs = mat_vec(inverse(change).transpose(), form.coeffs)
    return LinearForm(coeffs)


def transform_flat(change: Matrix, f: Flat) -> Flat:
    return Flat.from_vectors(f.ambient_n, [mat_vec(change, row) for row in f.cone_basis])


def random_invertible_change(n: int, rng: random.Random) -> Matrix:
    """A random invertible (n+1) x (n+1) matrix with small integer entries."""
    while True:
        m = Matrix.from_rows(
            [[Fraction(rng.randint(-9, 9)) for _ in range(n + 1)] for _ in range(n + 1)]
        )
        if rref(m).rank == n + 1:
            return m

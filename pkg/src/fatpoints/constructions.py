"""Constructive machinery behind the regularity bound.

Three layers:

* ``distribute_flats`` realizes the inductive covering argument: given
  points with multiplicities and a point to avoid, it produces t flats of
  dimension r-1, all avoiding the distinguished point, such that each
  point lies on at least as many flats as its multiplicity.

* certificates: a :class:`Certificate` witnesses an upper bound for the
  regularity of an artinian reduction by listing, per monomial, a product
  of hyperplanes avoiding the distinguished point whose product with the
  monomial vanishes to the scheme's orders.  ``build_certificate``
  attempts the constructions the covering arguments support; the trusted
  component is ``verify_certificate``, which re-checks everything from
  scratch.

* verdicts: ``removal_recursion_check`` confirms the regularity recursion
  for a removed point, and ``segre_verdict`` classifies a scheme and
  compares its regularity index against the Segre-type bound.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

from fatpoints.geometry import (
    Flat,
    LinearForm,
    ProjPoint,
    extend_flat_avoiding,
    flat_contains,
    general_position_on,
    degeneracy_index,
    hyperplane_containing_avoiding,
    span,
    transform_point,
)
from fatpoints.linalg import Matrix, inverse, rref
from fatpoints.schemes import (
    FatPointScheme,
    Form,
    artinian_quotient_regularity,
    in_fat_ideal,
    linear_form_to_form,
    monomial_basis,
    regularity_index,
)
from fatpoints.segre import SegreReport, segre_bound

_LOG = logging.getLogger("fatpoints.constructions")


class ConstructionError(RuntimeError):
    """A constructive step failed outside the supported geometric cases."""


# ---------------------------------------------------------------------------
# flat distributions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Distribution:
    """t flats of dimension r-1 covering each point with its multiplicity."""

    flats: tuple[Flat, ...]
    coverage: tuple[tuple[int, ...], ...]


def cover_threshold(mults: Sequence[int], r: int) -> int:
    """Least admissible flat count: max of the multiplicities and
    floor((sum + r - 1) / r)."""
    if r < 1:
        raise ValueError("r must be positive")
    if not mults:
        raise ValueError("at least one multiplicity is required")
    return max(max(mults), (sum(mults) + r - 1) // r)


def _scan_avoiding(points: Sequence[ProjPoint], avoid: ProjPoint, r: int) -> None:
    """Check that no span of min(r, len(points)) points captures the avoided point."""
    size = min(r, len(points))
    for sub in combinations(range(len(points)), size):
        if flat_contains(span([points[i] for i in sub]), avoid):
            raise ValueError(
                f"avoided point lies on the span of points {list(sub)}; "
                "the covering construction cannot proceed"
            )


def distribute_flats(
    points: Sequence[ProjPoint],
    avoid: ProjPoint,
    mults: Sequence[int],
    r: int,
    t: int,
    seed: int,
) -> Distribution:
    """Cover each point with at least its multiplicity of (r-1)-flats.

    Implements the inductive covering argument: with multiplicities
    sorted descending, a flat through the r heaviest points is split off
    and their multiplicities decremented; once at most r points remain,
    one flat through all of them fills every remaining slot.  All flats
    avoid the distinguished point, and the construction is deterministic
    per seed.
    """
    points = list(points)
    mults = [int(m) for m in mults]
    if not points or len(points) != len(mults):
        raise ValueError("points and multiplicities must be nonempty and aligned")
    if any(m < 1 for m in mults):
        raise ValueError("multiplicities must be positive")
    n = points[0].ambient_n
    if not 1 <= r <= n:
        raise ValueError("r must be between 1 and the ambient dimension")
    if len(set(points)) != len(points):
        raise ValueError("points must be pairwise distinct")
    threshold = cover_threshold(mults, r)
    if t < threshold:
        raise ValueError(f"t={t} is below the admissible threshold {threshold}")
    _scan_avoiding(points, avoid, r)

    remaining = list(mults)
    flats: list[Flat] = []
    step = 0
    while len(flats) < t:
        active = [i for i, m in enumerate(remaining) if m > 0]
        slots = t - len(flats)
        step += 1
        if not active:  # pragma: no cover - unreachable when t == threshold
            flats.append(flats[-1])
            continue
        if len(active) <= r:
            base = span([points[i] for i in active])
            flat = extend_flat_avoiding(base, r - 1, avoid, seed * 1009 + step)
            flats.extend([flat] * slots)
            break
        order = sorted(active, key=lambda i: (-remaining[i], i))
        heavy = order[:r]
        base = span([points[i] for i in heavy])
        flat = extend_flat_avoiding(base, r - 1, avoid, seed * 1009 + step)
        flats.append(flat)
        for i in heavy:
            remaining[i] -= 1

    coverage = tuple(
        tuple(k for k, f in enumerate(flats) if flat_contains(f, p)) for p in points
    )
    for i, m in enumerate(mults):
        if len(coverage[i]) < m:
            raise ConstructionError(
                f"coverage of point {i} fell short ({len(coverage[i])} < {m})"
            )
    return Distribution(tuple(flats), coverage)


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CertificateEntry:
    """Hyperplanes whose product, times the monomial, vanishes to order."""

    monomial: tuple[int, ...]  # exponents of X_1..X_n in certificate coordinates
    hyperplanes: tuple[LinearForm, ...]


@dataclass(frozen=True)
class Certificate:
    """A per-monomial hyperplane-product witness for an artinian bound.

    All hyperplanes and monomials live in the coordinates obtained by
    applying ``change`` to the scheme, which sends the distinguished
    point to (1, 0, ..., 0).  ``positions`` records, for audit, which
    scheme point (if any) was normalized to which coordinate point.
    """

    order: int
    change: Matrix
    entries: tuple[CertificateEntry, ...]
    positions: tuple[Optional[int], ...]
    strategy: str
    delta: int


def _origin(n: int) -> ProjPoint:
    return ProjPoint.unit(n, 0)


def _monomial_order_at(mono: tuple[int, ...], q: ProjPoint) -> int:
    """Vanishing order of a monomial in X_1..X_n at a point."""
    return sum(c for c, x in zip(mono, q.coords[1:]) if x == 0)


def _normalizing_change(j: FatPointScheme, p: ProjPoint):
    """Coordinates with p at (1, 0, ...) and independent scheme points on the axes."""
    n = j.n
    cols = [p.integer_rep()]
    positions: list[Optional[int]] = [None] * j.size
    for idx, q in enumerate(j.points):
        if len(cols) == n + 1:
            break
        probe = rref(Matrix.from_rows([list(c) for c in cols] + [list(q.integer_rep())]))
        if probe.rank == len(cols) + 1:
            positions[idx] = len(cols)
            cols.append(q.integer_rep())
    for i in range(n + 1):
        if len(cols) == n + 1:
            break
        unit = tuple(int(k == i) for k in range(n + 1))
        probe = rref(Matrix.from_rows([list(c) for c in cols] + [list(unit)]))
        if probe.rank == len(cols) + 1:
            cols.append(unit)
    change = inverse(Matrix.from_rows([list(c) for c in cols]).transpose())
    return change, tuple(positions)


def _all_entry_monomials(a: int, n: int) -> list[tuple[int, ...]]:
    out = []
    for i in range(a):
        out.extend(monomial_basis(i, n).exponents)
    return out


def _lift_to_hyperplane(f: Flat, origin: ProjPoint) -> LinearForm:
    if flat_contains(f, origin) or f.dim > f.ambient_n - 1:
        raise ConstructionError("no hyperplane through the flat avoids the origin")
    return hyperplane_containing_avoiding(f, origin)


def _covering_certificate(moved, origin, a, change, positions) -> Optional[Certificate]:
    everything = span(list(moved.points))
    if everything.dim > moved.n - 1 or flat_contains(everything, origin):
        return None
    h = hyperplane_containing_avoiding(everything, origin)
    power = max(moved.mults)
    entries = tuple(
        CertificateEntry(mono, (h,) * power) for mono in _all_entry_monomials(a, moved.n)
    )
    delta = power + a - 1
    return Certificate(a, change, entries, positions, "covering_hyperplane", delta)


def _entry_seed(seed: int, index: int, group: int) -> int:
    return seed * 1000003 + index * 2 + group


def _split_certificate(moved, origin, a, seed, change, positions) -> Optional[Certificate]:
    """Two-group construction for a degenerate flat through the origin.

    Needs a witness flat of the minimal degeneracy of points+origin that
    passes through the origin; the on-flat points and the remaining
    points are covered separately by low-dimensional flats, matched up
    pairwise, and each joined pair is lifted to a hyperplane avoiding the
    origin.
    """
    n = moved.n
    everyone = list(moved.points) + [origin]
    k = degeneracy_index(everyone)
    if k is None:
        return None
    alpha = None
    for sub in combinations(range(len(everyone)), k + 2):
        f = span([everyone[i] for i in sub])
        if f.dim <= k and flat_contains(f, origin):
            alpha = f
            break
    if alpha is None:
        return None
    group_a = [i for i in range(moved.size) if flat_contains(alpha, moved.points[i])]
    group_b = [i for i in range(moved.size) if i not in group_a]
    r_a, r_b = k, len(group_b) - 1
    if not group_a or r_b < 1 or r_a + r_b > n:
        return None

    entries = []
    delta = 0
    for index, mono in enumerate(_all_entry_monomials(a, n)):
        i = sum(mono)
        adjusted = [
            max(0, m - _monomial_order_at(mono, q))
            for q, m in zip(moved.points, moved.mults)
        ]
        act_a = [idx for idx in group_a if adjusted[idx] > 0]
        act_b = [idx for idx in group_b if adjusted[idx] > 0]
        t = 0
        if act_a:
            t = max(t, cover_threshold([adjusted[idx] for idx in act_a], r_a))
        if act_b:
            t = max(t, cover_threshold([adjusted[idx] for idx in act_b], r_b))
        hyperplanes: list[LinearForm] = []
        if t:
            dist_a = (
                distribute_flats(
                    [moved.points[idx] for idx in act_a],
                    origin,
                    [adjusted[idx] for idx in act_a],
                    r_a,
                    t,
                    _entry_seed(seed, index, 0),
                )
                if act_a
                else None
            )
            dist_b = (
                distribute_flats(
                    [moved.points[idx] for idx in act_b],
                    origin,
                    [adjusted[idx] for idx in act_b],
                    r_b,
                    t,
                    _entry_seed(seed, index, 1),
                )
                if act_b
                else None
            )
            for slot in range(t):
                vectors: list[Sequence[Fraction]] = []
                if dist_a:
                    vectors.extend(dist_a.flats[slot].cone_basis)
                if dist_b:
                    vectors.extend(dist_b.flats[slot].cone_basis)
                joined = Flat.from_vectors(n, vectors)
                hyperplanes.append(_lift_to_hyperplane(joined, origin))
        entries.append(CertificateEntry(mono, tuple(hyperplanes)))
        delta = max(delta, t + i)
    return Certificate(a, change, tuple(entries), positions, "split", delta)


def _single_group_certificate(moved, origin, a, seed, change, positions) -> Certificate:
    """Cover all points at once with (r-1)-flats and lift each to a hyperplane."""
    n = moved.n
    pts = list(moved.points)
    r = 1
    for candidate in range(min(n, moved.size), 1, -1):
        try:
            _scan_avoiding(pts, origin, candidate)
        except ValueError:
            continue
        r = candidate
        break

    entries = []
    delta = 0
    for index, mono in enumerate(_all_entry_monomials(a, n)):
        i = sum(mono)
        adjusted = [
            max(0, m - _monomial_order_at(mono, q))
            for q, m in zip(pts, moved.mults)
        ]
        active = [idx for idx in range(moved.size) if adjusted[idx] > 0]
        hyperplanes: list[LinearForm] = []
        t = 0
        if active:
            t = cover_threshold([adjusted[idx] for idx in active], r)
            dist = distribute_flats(
                [pts[idx] for idx in active],
                origin,
                [adjusted[idx] for idx in active],
                r,
                t,
                _entry_seed(seed, index, 0),
            )
            hyperplanes = [_lift_to_hyperplane(f, origin) for f in dist.flats]
        entries.append(CertificateEntry(mono, tuple(hyperplanes)))
        delta = max(delta, t + i)
    return Certificate(a, change, tuple(entries), positions, "single_group", delta)


def build_certificate(j: FatPointScheme, p: ProjPoint, a: int, seed: int) -> Certificate:
    """Construct a hyperplane-product certificate for the artinian bound.

    Tries, in order: one hyperplane through every point avoiding p; the
    two-group covering built from a degenerate flat through p; a single
    covering family at the largest workable flat dimension.  The result
    always verifies; the independently trusted check is
    :func:`verify_certificate`.
    """
    if a < 1:
        raise ValueError("the vanishing order must be positive")
    if p in j.points:
        raise ValueError("the distinguished point coincides with a point of the scheme")
    change, positions = _normalizing_change(j, p)
    moved = j.transform(change)
    origin = _origin(j.n)

    cert = _covering_certificate(moved, origin, a, change, positions)
    if cert is None:
        try:
            cert = _split_certificate(moved, origin, a, seed, change, positions)
        except (ValueError, ConstructionError) as exc:
            _LOG.info("split construction rejected: %s", exc)
            cert = None
    if cert is None:
        try:
            cert = _single_group_certificate(moved, origin, a, seed, change, positions)
        except (ValueError, ConstructionError, RuntimeError) as exc:
            raise ConstructionError(
                f"no supported construction applies to this configuration: {exc}"
            ) from exc
    return cert


def verify_certificate(
    cert: Certificate, j: FatPointScheme, p: ProjPoint, a: int
) -> tuple[bool, int]:
    """Re-check a certificate from scratch; returns (valid, delta).

    Valid means: the stored coordinate change sends p to (1, 0, ..., 0),
    every monomial of degree < a appears, every listed hyperplane misses
    p, and each hyperplane product times its monomial vanishes to the
    scheme's orders.  Soundness (delta bounds the artinian regularity) is
    a theorem about valid certificates, checked separately in the tests.
    """
    if a < 1:
        raise ValueError("the vanishing order must be positive")
    n = j.n
    origin = _origin(n)
    delta = max((len(e.hyperplanes) + sum(e.monomial) for e in cert.entries), default=0)
    guard = sum(j.mults) + a
    if any(len(e.hyperplanes) + sum(e.monomial) > guard for e in cert.entries):
        raise ValueError("certificate degree exceeds the overflow guard")

    if cert.order != a:
        _LOG.warning("certificate order %d does not match requested %d", cert.order, a)
        return False, delta
    try:
        if transform_point(cert.change, p) != origin:
            _LOG.warning("coordinate change does not send the point to the origin")
            return False, delta
    except ValueError:
        return False, delta
    moved = j.transform(cert.change)

    needed = set(_all_entry_monomials(a, n))
    provided = {e.monomial for e in cert.entries}
    if needed - provided:
        _LOG.warning("certificate is missing %d monomials", len(needed - provided))
        return False, delta

    for e in cert.entries:
        for h in e.hyperplanes:
            if h.vanishes_at(origin):
                _LOG.warning(
                    "hyperplane %s passes through the distinguished point (monomial %s)",
                    h.coeffs,
                    e.monomial,
                )
                return False, delta
        product = Form.monomial(n + 1, (0,) + e.monomial)
        for h in e.hyperplanes:
            product = product * linear_form_to_form(h.coeffs)
        if not in_fat_ideal(product, moved):
            _LOG.warning("product fails the vanishing conditions (monomial %s)", e.monomial)
            return False, delta
    return True, delta


# ---------------------------------------------------------------------------
# recursion and bound verdicts
# ---------------------------------------------------------------------------

def removal_recursion_check(z: FatPointScheme, i0: int) -> bool:
    """Regularity via removal of one point: both sides computed and compared."""
    if z.size < 2:
        raise ValueError("the recursion needs at least two points")
    rest = z.without_point(i0)
    lhs = regularity_index(z)
    rhs = max(
        z.mults[i0] - 1,
        regularity_index(rest),
        artinian_quotient_regularity(rest, z.points[i0], z.mults[i0]),
    )
    return lhs == rhs


@dataclass(frozen=True)
class Verdict:
    """Classification of a scheme and the outcome of the bound comparison."""

    point_count: int
    span_dim: int
    equimultiple: bool
    general_position: bool
    degeneracy: Optional[int]
    hypothesis_class: str
    reg: int
    bound: int
    holds: bool
    tight: bool
    report: SegreReport


def classify_scheme(z: FatPointScheme) -> str:
    """Which proven hypothesis family the configuration belongs to."""
    d = span(list(z.points)).dim
    s2 = z.size - 2
    if 1 <= s2 <= z.n and d >= s2:
        return "lemma24"
    s3 = z.size - 3
    if 1 <= s3 <= z.n and d >= s3 and len(set(z.mults)) == 1:
        return "theorem34"
    return "outside_proven_cases"


def segre_verdict(z: FatPointScheme) -> Verdict:
    """Compute regularity and bound, classify, and compare."""
    pts = list(z.points)
    d = span(pts).dim
    report = segre_bound(z)
    reg = regularity_index(z)
    return Verdict(
        point_count=z.size,
        span_dim=d,
        equimultiple=len(set(z.mults)) == 1,
        general_position=general_position_on(pts, d),
        degeneracy=degeneracy_index(pts),
        hypothesis_class=classify_scheme(z),
        reg=reg,
        bound=report.bound,
        holds=reg <= report.bound,
        tight=reg == report.bound,
        report=report,
    )

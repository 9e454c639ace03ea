"""Seeded generators for the configuration families under test.

Each pattern produces a scheme that provably satisfies its incidence
hypotheses: candidates are rejection-sampled from integer coordinates of
bounded height and every hypothesis is re-checked on the output before it
is returned, so generation is verified rather than trusted.  Generation
is a deterministic function of the spec (including its seed).

Patterns:

``general``
    s points whose degeneracy index is None (general position in their
    span).
``on_flat``
    s points in general position on a flat of the requested dimension.
``lemma24``
    s+2 points that do not lie on any (s-1)-flat, s <= n; arbitrary
    multiplicities.
``theorem34``
    s+3 equimultiple points not on any (s-1)-flat, s <= n.
``prop43``
    s+3 equimultiple points spanning exactly an s-flat, with a planted
    minimal degeneracy k (some k-flat holds k+2 of them), 2 <= s <= n.
``lem42``
    s+3 equimultiple points on an s-flat carrying two distinguished
    (s-1)-flats with s+1 points each, no (s-1)-flat with s+2 points and
    no (s-2)-flat with s points, 3 <= s <= n.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import combinations
from typing import Optional

from fatpoints.geometry import (
    Flat,
    ProjPoint,
    degeneracy_index,
    flat_contains,
    span,
)
from fatpoints.schemes import FatPointScheme

PATTERNS = ("general", "on_flat", "lemma24", "theorem34", "prop43", "lem42")

MAX_ATTEMPTS = 256


class GeneratorError(ValueError):
    """The requested pattern is unsatisfiable or sampling gave up."""


@dataclass(frozen=True)
class PatternSpec:
    """Parameters of one generated configuration family."""

    pattern: str
    n: int
    s: int
    m: Optional[int] = None
    mults: Optional[tuple[int, ...]] = None
    seed: int = 0
    height: int = 50
    flat_dim: Optional[int] = None
    k: Optional[int] = None

    def with_seed(self, seed: int) -> "PatternSpec":
        return replace(self, seed=seed)


def _resolve_mults(spec: PatternSpec, count: int) -> tuple[int, ...]:
    if spec.mults is not None:
        if len(spec.mults) != count:
            raise GeneratorError(
                f"pattern {spec.pattern!r} needs {count} multiplicities, got {len(spec.mults)}"
            )
        if any(m < 1 for m in spec.mults):
            raise GeneratorError("multiplicities must be positive")
        return tuple(int(m) for m in spec.mults)
    m = 1 if spec.m is None else int(spec.m)
    if m < 1:
        raise GeneratorError("multiplicities must be positive")
    return (m,) * count


def _random_point(rng: random.Random, n: int, height: int) -> ProjPoint:
    while True:
        coords = [rng.randint(-height, height) for _ in range(n + 1)]
        if any(coords):
            return ProjPoint(tuple(Fraction(c) for c in coords))


def _random_point_in_sflat(rng: random.Random, n: int, s: int, height: int) -> ProjPoint:
    while True:
        coords = [rng.randint(-height, height) for _ in range(s + 1)] + [0] * (n - s)
        if any(coords):
            return ProjPoint(tuple(Fraction(c) for c in coords))


def _random_point_on(rng: random.Random, flat: Flat, height: int) -> ProjPoint:
    width = flat.ambient_n + 1
    while True:
        coeffs = [rng.randint(-height, height) for _ in flat.cone_basis]
        coords = [
            sum(c * row[j] for c, row in zip(coeffs, flat.cone_basis)) for j in range(width)
        ]
        if any(coords):
            return ProjPoint(tuple(coords))


def _distinct_points(sampler, count: int) -> Optional[list[ProjPoint]]:
    pts: list[ProjPoint] = []
    for _ in range(count * 16):
        p = sampler()
        if p not in pts:
            pts.append(p)
            if len(pts) == count:
                return pts
    return None


def generate(spec: PatternSpec) -> FatPointScheme:
    """Produce a scheme satisfying the pattern, verified before return."""
    if spec.pattern not in PATTERNS:
        raise GeneratorError(f"unknown pattern {spec.pattern!r}")
    if spec.n < 1:
        raise GeneratorError("ambient dimension must be positive")
    if spec.height < 1:
        raise GeneratorError("height bound must be positive")
    builder = globals()[f"_gen_{spec.pattern}"]
    rng = random.Random(spec.seed)
    for _ in range(MAX_ATTEMPTS):
        scheme = builder(spec, rng)
        if scheme is not None:
            return scheme
    raise GeneratorError(
        f"gave up after {MAX_ATTEMPTS} attempts on pattern {spec.pattern!r} "
        f"(n={spec.n}, s={spec.s}, height={spec.height})"
    )


# ---------------------------------------------------------------------------
# pattern builders (one attempt each; None on rejection)
# ---------------------------------------------------------------------------

def _gen_general(spec: PatternSpec, rng: random.Random) -> Optional[FatPointScheme]:
    if spec.s < 1:
        raise GeneratorError("general pattern needs s >= 1")
    mults = _resolve_mults(spec, spec.s)
    pts = _distinct_points(lambda: _random_point(rng, spec.n, spec.height), spec.s)
    if pts is None or (spec.s >= 3 and degeneracy_index(pts) is not None):
        return None
    return FatPointScheme(spec.n, tuple(pts), mults)


def _gen_on_flat(spec: PatternSpec, rng: random.Random) -> Optional[FatPointScheme]:
    if spec.s < 1:
        raise GeneratorError("on_flat pattern needs s >= 1")
    d = 1 if spec.flat_dim is None else int(spec.flat_dim)
    if not 1 <= d <= spec.n:
        raise GeneratorError("flat dimension out of range")
    if spec.s < d + 1:
        raise GeneratorError("too few points to span the requested flat")
    mults = _resolve_mults(spec, spec.s)
    anchors = _distinct_points(lambda: _random_point(rng, spec.n, spec.height), d + 1)
    if anchors is None or span(anchors).dim != d:
        return None
    flat = span(anchors)
    pts = _distinct_points(lambda: _random_point_on(rng, flat, spec.height), spec.s)
    if pts is None or span(pts).dim != d:
        return None
    if spec.s >= 3 and degeneracy_index(pts) is not None:
        return None
    return FatPointScheme(spec.n, tuple(pts), mults)


def _gen_lemma24(spec: PatternSpec, rng: random.Random) -> Optional[FatPointScheme]:
    if not 1 <= spec.s <= spec.n:
        raise GeneratorError("lemma24 pattern needs 1 <= s <= n")
    count = spec.s + 2
    mults = _resolve_mults(spec, count)
    pts = _distinct_points(lambda: _random_point(rng, spec.n, spec.height), count)
    if pts is None or span(pts).dim < spec.s:
        return None
    return FatPointScheme(spec.n, tuple(pts), mults)


def _gen_theorem34(spec: PatternSpec, rng: random.Random) -> Optional[FatPointScheme]:
    if not 1 <= spec.s <= spec.n:
        raise GeneratorError("theorem34 pattern needs 1 <= s <= n")
    count = spec.s + 3
    mults = _resolve_mults(spec, count)
    if len(set(mults)) != 1:
        raise GeneratorError("theorem34 pattern is equimultiple")
    pts = _distinct_points(lambda: _random_point(rng, spec.n, spec.height), count)
    if pts is None or span(pts).dim < spec.s:
        return None
    return FatPointScheme(spec.n, tuple(pts), mults)


def _gen_prop43(spec: PatternSpec, rng: random.Random) -> Optional[FatPointScheme]:
    if not 2 <= spec.s <= spec.n:
        raise GeneratorError("prop43 pattern needs 2 <= s <= n")
    count = spec.s + 3
    mults = _resolve_mults(spec, count)
    if len(set(mults)) != 1:
        raise GeneratorError("prop43 pattern is equimultiple")
    k = rng.randint(1, spec.s - 1) if spec.k is None else int(spec.k)
    if not 1 <= k <= spec.s - 1:
        raise GeneratorError("planted degeneracy must satisfy 1 <= k <= s-1")

    sampler = lambda: _random_point_in_sflat(rng, spec.n, spec.s, spec.height)
    anchors = _distinct_points(sampler, k + 1)
    if anchors is None or span(anchors).dim != k:
        return None
    alpha = span(anchors)
    extra = _random_point_on(rng, alpha, spec.height)
    if extra in anchors:
        return None
    rest = []
    for _ in range(64):
        p = sampler()
        if p not in anchors and p != extra and p not in rest and not flat_contains(alpha, p):
            rest.append(p)
            if len(rest) == spec.s + 1 - k:
                break
    pts = anchors + [extra] + rest
    if len(pts) != count or len(set(pts)) != count:
        return None
    if span(pts).dim != spec.s:
        return None
    if degeneracy_index(pts) != k:
        return None
    return FatPointScheme(spec.n, tuple(pts), mults)


def _gen_lem42(spec: PatternSpec, rng: random.Random) -> Optional[FatPointScheme]:
    if not 3 <= spec.s <= spec.n:
        raise GeneratorError("lem42 pattern needs 3 <= s <= n")
    n, s = spec.n, spec.s
    count = s + 3
    mults = _resolve_mults(spec, count)
    if len(set(mults)) != 1:
        raise GeneratorError("lem42 pattern is equimultiple")

    unit = lambda i: ProjPoint.unit(n, i)
    # fixed coordinate points of the construction
    p_last = unit(0)                       # the distinguished point of the family
    p2 = unit(1)
    p3 = unit(2)
    tail = [unit(i) for i in range(3, s + 1)]  # fills positions 5..s+2
    beta = span([p_last, p3] + tail)           # (s-1)-flat missing coordinate 1
    p4 = _random_point_on(rng, beta, spec.height)
    alpha_anchors = [unit(i) for i in range(1, s - 1 + 1)]  # e_1 .. e_{s-1}
    if flat_contains(span(alpha_anchors), p4):
        return None
    alpha = span(alpha_anchors + [p4])
    p1 = _random_point_on(rng, alpha, spec.height)

    pts = [p1, p2, p3, p4] + tail + [p_last]
    if len(set(pts)) != count:
        return None
    if span(pts).dim != s:
        return None
    if span(pts[: s + 1]).dim != s - 1:  # alpha holds P_1..P_{s+1}
        return None
    if span(pts[2:]).dim != s - 1:  # beta holds P_3..P_{s+3}
        return None
    for sub in combinations(range(count), s + 2):
        if span([pts[i] for i in sub]).dim <= s - 1:
            return None
    for sub in combinations(range(count), s):
        if span([pts[i] for i in sub]).dim <= s - 2:
            return None
    return FatPointScheme(spec.n, tuple(pts), mults)

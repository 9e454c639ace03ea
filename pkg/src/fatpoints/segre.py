"""The Segre-type upper bound from point subsets on low-dimensional flats.

For each j the quantity T_j maximizes floor((sum of multiplicities + j - 2)/j)
over groups of points lying on a common j-flat, and the bound is the
largest T_j.  An optimal flat can always be taken to be the span of at
most j+1 of the points, so candidates are enumerated as spans of small
subsets, deduplicated by their canonical echelon bases, and scored by the
total multiplicity of all scheme points they contain.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Optional

from fatpoints.geometry import Flat, flat_contains, span
from fatpoints.schemes import FatPointScheme


@dataclass(frozen=True)
class SegreEntry:
    """Best flat of dimension at most j and the value it contributes."""

    j: int
    value: int
    total_mult: int
    witness_indices: tuple[int, ...]
    witness_flat: Flat


@dataclass(frozen=True)
class SegreReport:
    entries: tuple[SegreEntry, ...]
    bound: int
    argmax_j: int

    def entry(self, j: int) -> SegreEntry:
        return self.entries[j - 1]


@lru_cache(maxsize=256)
def _candidate_flats(z: FatPointScheme) -> tuple[tuple[int, tuple[int, ...], Flat], ...]:
    """All spans of point subsets of size <= n+1, deduplicated.

    Returns (dim, witness index tuple, flat) triples.  The witness set of
    a candidate flat spans it, so distinct candidates have distinct
    witness sets.
    """
    seen: dict[Flat, tuple[int, ...]] = {}
    indices = range(z.size)
    for size in range(1, min(z.size, z.n + 1) + 1):
        for sub in combinations(indices, size):
            f = span([z.points[i] for i in sub])
            if f in seen:
                continue
            witness = tuple(i for i in indices if flat_contains(f, z.points[i]))
            seen[f] = witness
    return tuple((f.dim, witness, f) for f, witness in seen.items())


def max_multiplicity_on_flats(z: FatPointScheme, j: int):
    """Largest total multiplicity carried by a flat of dimension <= j.

    Returns (total, witness flat, witness indices); ties are broken by
    the lexicographically smallest witness index set.
    """
    if not 1 <= j <= z.n:
        raise ValueError("flat dimension out of range")
    best: Optional[tuple[int, tuple[int, ...], Flat]] = None
    for dim, witness, f in _candidate_flats(z):
        if dim > j:
            continue
        total = sum(z.mults[i] for i in witness)
        if best is None or total > best[0] or (total == best[0] and witness < best[1]):
            best = (total, witness, f)
    assert best is not None  # singletons always qualify
    return best[0], best[2], best[1]


def segre_T(z: FatPointScheme, j: int) -> int:
    """floor((q_j + j - 2) / j) for the maximal on-flat multiplicity q_j."""
    q, _, _ = max_multiplicity_on_flats(z, j)
    return (q + j - 2) // j


def segre_bound(z: FatPointScheme) -> SegreReport:
    """Full table of T_1..T_n with witnesses; the bound is the maximum."""
    entries = []
    for j in range(1, z.n + 1):
        q, flat, witness = max_multiplicity_on_flats(z, j)
        entries.append(
            SegreEntry(
                j=j,
                value=(q + j - 2) // j,
                total_mult=q,
                witness_indices=witness,
                witness_flat=flat,
            )
        )
    bound = max(e.value for e in entries)
    argmax_j = next(e.j for e in entries if e.value == bound)
    return SegreReport(tuple(entries), bound, argmax_j)

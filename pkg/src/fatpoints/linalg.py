"""Deterministic exact linear algebra over the rationals.

Every rank, echelon form and kernel in the package is computed here, in
exact arithmetic.  The workhorse is fraction-free forward elimination
(one-step Bareiss) on denominator-cleared integer rows, followed by a
normalization pass that produces the canonical reduced row echelon form.
Pivots are chosen deterministically: leftmost nonzero column, first
nonzero row.

A modular fast path is available as a filter.  It reduces the matrix
modulo a fixed, published list of 62-bit primes to guess the pivot
structure, then certifies the guess with rational-arithmetic facts only:

* a minor that is nonzero mod p is nonzero over Q (rank lower bound);
* explicitly verified row dependencies bound the rank from above.

If certification fails the code falls back to plain rational elimination
and logs the disagreement, so a reported rank never depends on trusting a
prime.  The filter is off by default; see :func:`set_modular_filter`.
"""

from __future__ import annotations

import logging
import threading
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

try:
    from gmpy2 import mpq, mpz
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    mpz = int
    mpq = Fraction

_LOG = logging.getLogger("fatpoints.linalg")

#: Published primes for the modular filter, tried in order.
MODULAR_PRIMES: tuple[int, ...] = (
    4611686018427387847,
    4611686018427387817,
    4611686018427387787,
    4611686018427387761,
    4611686018427387751,
)

Vector = tuple[Fraction, ...]

_ZERO = mpz(0)


# ---------------------------------------------------------------------------
# matrix type
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Matrix:
    """Dense row-major matrix of exact rationals."""

    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[object]]) -> "Matrix":
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        entries = []
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged rows")
            entries.extend(Fraction(x) for x in r)
        return cls(nrows, ncols, tuple(entries))

    @classmethod
    def identity(cls, k: int) -> "Matrix":
        one, zero = Fraction(1), Fraction(0)
        return cls(k, k, tuple(one if i == j else zero for i in range(k) for j in range(k)))

    def at(self, i: int, j: int) -> Fraction:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "Matrix":
        return Matrix(
            self.cols,
            self.rows,
            tuple(self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)),
        )


@dataclass(frozen=True)
class RrefResult:
    """Reduced row echelon form together with rank and pivot columns."""

    rref: Matrix
    rank: int
    pivot_cols: tuple[int, ...]


# ---------------------------------------------------------------------------
# integer core
# ---------------------------------------------------------------------------

def _strip_ints(ints: Sequence[int]) -> list:
    content = 0
    for v in ints:
        if v:
            content = gcd(content, v)
            if content == 1:
                break
    if content > 1:
        ints = [v // content for v in ints]
    return [mpz(v) for v in ints]


def _int_rows(m: Matrix) -> list[list]:
    """Clear denominators row by row and strip the content of each row.

    Row scaling by nonzero rationals preserves the row space, hence rank,
    pivot columns and the reduced echelon form.
    """
    out = []
    for i in range(m.rows):
        row = m.row(i)
        lcm = 1
        for x in row:
            d = x.denominator
            if d != 1:
                lcm = lcm // gcd(lcm, d) * d
        out.append(_strip_ints([int(x.numerator) * (lcm // x.denominator) for x in row]))
    return out


def _bareiss_forward(m: list[list], ncols: int) -> list[int]:
    """Fraction-free forward elimination in place; returns pivot columns."""
    nrows = len(m)
    prev = mpz(1)
    piv = 0
    pivot_cols: list[int] = []
    for c in range(ncols):
        if piv >= nrows:
            break
        pr = next((r for r in range(piv, nrows) if m[r][c]), None)
        if pr is None:
            continue
        if pr != piv:
            m[piv], m[pr] = m[pr], m[piv]
        prow = m[piv]
        pv = prow[c]
        ptail = prow[c + 1 :]
        for r in range(piv + 1, nrows):
            row = m[r]
            t = row[c]
            if t:
                row[c + 1 :] = [(pv * x - t * y) // prev for x, y in zip(row[c + 1 :], ptail)]
                row[c] = _ZERO
            elif pv != prev:
                # rows must stay at the current minor level for the
                # one-step division to remain exact
                row[c + 1 :] = [(pv * x) // prev for x in row[c + 1 :]]
        prev = pv
        pivot_cols.append(c)
        piv += 1
    return pivot_cols


def _bareiss_rank(m: list[list], ncols: int) -> int:
    return len(_bareiss_forward(m, ncols))


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def rref(m: Matrix) -> RrefResult:
    """Reduced row echelon form, exact and deterministic.

    The row space is preserved; each pivot is 1 and is the only nonzero
    entry of its column.  Zero rows sink to the bottom.
    """
    irows = _int_rows(m)
    pivot_cols = _bareiss_forward(irows, m.cols)
    rank = len(pivot_cols)

    qrows = [[mpq(x) for x in irows[i]] for i in range(rank)]
    for i in reversed(range(rank)):
        c = pivot_cols[i]
        qi = qrows[i]
        pv = qi[c]
        if pv != 1:
            qi[c:] = [x / pv for x in qi[c:]]
        tail = qi[c:]
        for i2 in range(i):
            t = qrows[i2][c]
            if t:
                q2 = qrows[i2]
                q2[c:] = [x - t * y for x, y in zip(q2[c:], tail)]

    zero = Fraction(0)
    entries: list[Fraction] = []
    for i in range(m.rows):
        if i < rank:
            entries.extend(Fraction(int(x.numerator), int(x.denominator)) for x in qrows[i])
        else:
            entries.extend([zero] * m.cols)
    return RrefResult(Matrix(m.rows, m.cols, tuple(entries)), rank, tuple(pivot_cols))


def kernel_basis(m: Matrix) -> list[Vector]:
    """Canonical basis of the right kernel.

    One vector per non-pivot column, in ascending column order, with the
    free variable set to 1.  The result has cols - rank(m) vectors.
    """
    res = rref(m)
    pivot_set = set(res.pivot_cols)
    free_cols = [c for c in range(m.cols) if c not in pivot_set]
    basis: list[Vector] = []
    r = res.rref
    for f in free_cols:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for i, pc in enumerate(res.pivot_cols):
            v[pc] = -r.at(i, f)
        basis.append(tuple(v))
    return basis


def in_span(v: Sequence[object], basis: Iterable[Sequence[object]]) -> bool:
    """Whether v lies in the rational span of the given vectors."""
    basis = [list(b) for b in basis]
    v = [Fraction(x) for x in v]
    for b in basis:
        if len(b) != len(v):
            raise ValueError("dimension mismatch")
    if not any(v):
        return True
    if not basis:
        return False
    res = rref(Matrix.from_rows(basis))
    return _reduces_to_zero(v, res)


def _reduces_to_zero(v: list[Fraction], res: RrefResult) -> bool:
    """Reduce a vector by the pivots of an rref and test for zero."""
    v = list(v)
    r = res.rref
    for i, pc in enumerate(res.pivot_cols):
        t = v[pc]
        if t:
            row = r.row(i)
            for j in range(pc, len(v)):
                v[j] -= t * row[j]
    return not any(v)


class SpanTester:
    """Repeated membership tests against a fixed spanning set."""

    def __init__(self, basis: Sequence[Sequence[object]], length: int):
        self.length = length
        rows = [list(b) for b in basis]
        for b in rows:
            if len(b) != length:
                raise ValueError("dimension mismatch")
        self._res = rref(Matrix.from_rows(rows)) if rows else None

    def contains(self, v: Sequence[object]) -> bool:
        v = [Fraction(x) for x in v]
        if len(v) != self.length:
            raise ValueError("dimension mismatch")
        if self._res is None:
            return not any(v)
        return _reduces_to_zero(v, self._res)


def rank_mod_p(m: Matrix, p: int) -> int:
    """Rank of m reduced modulo the prime p.

    Raises ValueError if p divides the denominator of any entry.  The
    result never exceeds the rational rank.
    """
    if p < 2:
        raise ValueError("modulus must be a prime >= 2")
    rows = []
    for i in range(m.rows):
        row = []
        for x in m.row(i):
            if x.denominator % p == 0:
                raise ValueError(f"denominator of entry ({i}) divisible by {p}")
            row.append(x.numerator * pow(x.denominator, -1, p) % p)
        rows.append(row)
    r, _, _ = _mod_rank_profile(rows, m.cols, p)
    return r


def _mod_rank_profile(rows: list[list[int]], ncols: int, p: int):
    """Gaussian elimination mod p; returns (rank, pivot row indices, pivot cols).

    Pivot row indices refer to the original row order.
    """
    m = [[int(x) % p for x in row] for row in rows]
    idx = list(range(len(m)))
    piv = 0
    pivot_rows: list[int] = []
    pivot_cols: list[int] = []
    for c in range(ncols):
        if piv >= len(m):
            break
        pr = next((r for r in range(piv, len(m)) if m[r][c]), None)
        if pr is None:
            continue
        if pr != piv:
            m[piv], m[pr] = m[pr], m[piv]
            idx[piv], idx[pr] = idx[pr], idx[piv]
        prow = m[piv]
        inv = pow(prow[c], -1, p)
        prow[c:] = [x * inv % p for x in prow[c:]]
        for r in range(piv + 1, len(m)):
            t = m[r][c]
            if t:
                row = m[r]
                row[c:] = [(x - t * y) % p for x, y in zip(row[c:], prow[c:])]
        pivot_rows.append(idx[piv])
        pivot_cols.append(c)
        piv += 1
    return piv, pivot_rows, pivot_cols


# ---------------------------------------------------------------------------
# certified rank engine
# ---------------------------------------------------------------------------

_MODULAR_FILTER = False

_stats_lock = threading.Lock()
_stats = {"short_circuits": 0, "certified": 0, "fallbacks": 0, "disagreements": 0}


def set_modular_filter(enabled: bool) -> None:
    """Globally enable or disable the modular filter for rank queries."""
    global _MODULAR_FILTER
    _MODULAR_FILTER = bool(enabled)


def modular_filter_enabled() -> bool:
    return _MODULAR_FILTER


def modular_stats() -> dict[str, int]:
    """Snapshot of filter activity counters (for diagnostics and tests)."""
    with _stats_lock:
        return dict(_stats)


def reset_modular_stats() -> None:
    with _stats_lock:
        for k in _stats:
            _stats[k] = 0


def _bump(key: str) -> None:
    with _stats_lock:
        _stats[key] += 1


def rank(m: Matrix, *, modular: bool | None = None) -> int:
    """Exact rank of m.

    With the modular filter off this is plain fraction-free elimination.
    With it on, a mod-p run guesses the answer and the guess is accepted
    only when backed by a rational certificate; otherwise the code falls
    back to rational elimination and logs the disagreement.
    """
    use = _MODULAR_FILTER if modular is None else modular
    irows = _int_rows(m)
    if not use:
        return _bareiss_rank(irows, m.cols)
    return _certified_rank(irows, m.cols)


def rank_rows(rows: Sequence[Sequence[int]], ncols: int, *, modular: bool | None = None) -> int:
    """Exact rank of a list of integer rows (fast path used by callers that
    build their matrices directly in integers)."""
    use = _MODULAR_FILTER if modular is None else modular
    irows = [_strip_ints(list(row)) for row in rows]
    if not irows:
        return 0
    if not use:
        return _bareiss_rank(irows, ncols)
    return _certified_rank(irows, ncols)


def _certified_rank(irows: list[list], ncols: int) -> int:
    nrows = len(irows)
    ceiling = min(nrows, ncols)
    if ceiling == 0:
        return 0
    p = MODULAR_PRIMES[0]
    rp, prows, pcols = _mod_rank_profile(irows, ncols, p)
    if rp == ceiling:
        # rp <= rank <= ceiling forces equality; no prime trust involved
        _bump("short_circuits")
        return rp
    if rp == 0:
        if all(not x for row in irows for x in row):
            _bump("certified")
            return 0
    elif _verify_dependencies(irows, prows, pcols, ncols):
        # lower bound: the rp x rp pivot minor is nonzero mod p, hence
        # nonzero over Q; upper bound: every remaining row was verified
        # to be a rational combination of the pivot rows
        _bump("certified")
        return rp
    _bump("fallbacks")
    true_rank = _bareiss_rank([list(r) for r in irows], ncols)
    if true_rank != rp:
        _bump("disagreements")
        _LOG.warning(
            "modular rank %d (mod %d) disagreed with rational rank %d; "
            "rational result reported",
            rp,
            p,
            true_rank,
        )
    else:
        _LOG.info("modular pivot certificate failed; rational elimination confirmed rank %d", rp)
    return true_rank


def _verify_dependencies(irows: list[list], prows: list[int], pcols: list[int], ncols: int) -> bool:
    """Certify rank <= len(prows) by expressing every non-pivot row rationally.

    Solves, over Q, for coefficients writing each non-pivot row as a
    combination of the pivot rows on the pivot columns, then verifies the
    combination on all columns.  Returns False when any row fails, in
    which case the caller must re-eliminate rationally.
    """
    rp = len(prows)
    pivot_set = set(prows)
    free_rows = [i for i in range(len(irows)) if i not in pivot_set]
    if not free_rows:
        return True

    # augmented system: B^T x_f = c_f for all free rows f at once, where
    # B = pivot rows restricted to pivot columns
    aug = [
        [irows[pr][c] for pr in prows] + [irows[f][c] for f in free_rows]
        for c in pcols
    ]
    width = rp + len(free_rows)
    piv_cols = _bareiss_forward(aug, width)
    if piv_cols != list(range(rp)):
        return False  # pivot submatrix unexpectedly singular over Q

    # back-substitute for the solution block
    q = [[mpq(x) for x in row] for row in aug[:rp]]
    for i in reversed(range(rp)):
        pv = q[i][i]
        q[i][i:] = [x / pv for x in q[i][i:]]
        for i2 in range(i):
            t = q[i2][i]
            if t:
                q[i2][i:] = [x - t * y for x, y in zip(q[i2][i:], q[i][i:])]

    for k, f in enumerate(free_rows):
        coeffs = [q[i][rp + k] for i in range(rp)]
        frow = irows[f]
        for j in range(ncols):
            acc = mpq(0)
            for i, pr in enumerate(prows):
                c = coeffs[i]
                if c:
                    acc += c * irows[pr][j]
            if acc != frow[j]:
                return False
    return True


# ---------------------------------------------------------------------------
# small utilities shared by the geometry layer
# ---------------------------------------------------------------------------

def mat_vec(m: Matrix, v: Sequence[Fraction]) -> Vector:
    if len(v) != m.cols:
        raise ValueError("dimension mismatch")
    return tuple(sum((m.at(i, j) * v[j] for j in range(m.cols)), Fraction(0)) for i in range(m.rows))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if a.cols != b.rows:
        raise ValueError("dimension mismatch")
    rows = []
    for i in range(a.rows):
        arow = a.row(i)
        rows.append(
            [sum((arow[k] * b.at(k, j) for k in range(a.cols)), Fraction(0)) for j in range(b.cols)]
        )
    return Matrix.from_rows(rows) if rows else Matrix(0, b.cols, ())


def inverse(m: Matrix) -> Matrix:
    """Inverse of a square matrix; raises ValueError when singular."""
    if m.rows != m.cols:
        raise ValueError("only square matrices can be inverted")
    k = m.rows
    aug = [list(m.row(i)) + [Fraction(int(i == j)) for j in range(k)] for i in range(k)]
    res = rref(Matrix.from_rows(aug))
    if res.pivot_cols[:k] != tuple(range(k)):
        raise ValueError("matrix is singular")
    return Matrix.from_rows([[res.rref.at(i, k + j) for j in range(k)] for i in range(k)])

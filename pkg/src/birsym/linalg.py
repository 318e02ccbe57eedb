"""Exact linear algebra over Z, Q and prime fields.

Sparse integer matrices (CSR), rank over F_p via compiled sparse
elimination, rational rank via the multi-modular maximum over several
word-sized primes, Smith normal form for torsion questions, and integer
row-span machinery (Z-membership, rational membership, element order in
the cokernel).

The rational "rank" reported by `rank_Q` is the maximum of the per-prime
ranks: a rank mod p can only undershoot the rank over Q, so the maximum
is a lower bound that is almost surely exact; an agreement flag records
whether all primes agreed.
"""

from __future__ import annotations

import json
import math
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._elim import _rank_csr_mod_p


# ---------------------------------------------------------------------------
# primality / primes

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n):
    """Deterministic Miller-Rabin, valid far beyond 64-bit inputs."""
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class PrimeSource:
    """Deterministic stream of distinct 31-bit primes above 2**30.

    Primes dividing `avoid` (e.g. the group order) are skipped, so the
    same seed always yields the same prime sequence for a fixed job.
    """

    def __init__(self, seed=0, avoid=1):
        self._rng = random.Random(seed)
        self._avoid = avoid
        self._seen = set()

    def next(self):
        while True:
            c = self._rng.randrange(2**30 + 1, 2**31 - 1) | 1
            if c in self._seen or not is_prime(c):
                continue
            if self._avoid % c == 0:
                continue
            self._seen.add(c)
            return c

    def take(self, k):
        return [self.next() for _ in range(k)]


# ---------------------------------------------------------------------------
# sparse matrices

class SparseMatrix:
    """Immutable sparse integer matrix in CSR form (sorted, deduplicated)."""

    __slots__ = ("nrows", "ncols", "indptr", "indices", "data")

    def __init__(self, nrows, ncols, indptr, indices, data):
        self.nrows = int(nrows)
        self.ncols = int(ncols)
        self.indptr = indptr
        self.indices = indices
        self.data = data

    @property
    def nnz(self):
        return int(self.indptr[self.nrows])

    @classmethod
    def from_rows(cls, rows, ncols):
        """Build from an iterable of rows given as dicts or (col, val) pairs."""
        indptr = [0]
        indices = []
        data = []
        for row in rows:
            items = row.items() if isinstance(row, dict) else row
            for c, v in sorted(items):
                if v:
                    indices.append(c)
                    data.append(v)
            indptr.append(len(indices))
        return cls(len(indptr) - 1, ncols,
                   np.asarray(indptr, dtype=np.int64),
                   np.asarray(indices, dtype=np.int32),
                   np.asarray(data, dtype=np.int64))

    @classmethod
    def from_triplets(cls, i, j, v, nrows, ncols):
        i = np.asarray(i, dtype=np.int64)
        j = np.asarray(j, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        order = np.lexsort((j, i))
        i, j, v = i[order], j[order], v[order]
        if len(i):
            # merge duplicate (i, j) entries
            same = np.zeros(len(i), dtype=bool)
            same[1:] = (i[1:] == i[:-1]) & (j[1:] == j[:-1])
            group = np.cumsum(~same) - 1
            vv = np.zeros(group[-1] + 1, dtype=np.int64)
            np.add.at(vv, group, v)
            keep = ~same
            i, j, v = i[keep], j[keep], vv
            nz = v != 0
            i, j, v = i[nz], j[nz], v[nz]
        indptr = np.zeros(nrows + 1, dtype=np.int64)
        np.add.at(indptr, i + 1, 1)
        np.cumsum(indptr, out=indptr)
        return cls(nrows, ncols, indptr, j.astype(np.int32), v)

    def row(self, r):
        a, b = self.indptr[r], self.indptr[r + 1]
        return self.indices[a:b], self.data[a:b]

    def rows_as_dicts(self):
        for r in range(self.nrows):
            cols, vals = self.row(r)
            yield {int(c): int(v) for c, v in zip(cols, vals)}

    def to_dense(self):
        A = np.zeros((self.nrows, self.ncols), dtype=np.int64)
        for r in range(self.nrows):
            cols, vals = self.row(r)
            A[r, cols] = vals
        return A

    def transpose(self):
        i = np.repeat(np.arange(self.nrows, dtype=np.int64),
                      np.diff(self.indptr))
        return SparseMatrix.from_triplets(
            self.indices.astype(np.int64), i, self.data,
            self.ncols, self.nrows)

    @classmethod
    def vstack(cls, mats):
        ncols = mats[0].ncols
        if any(m.ncols != ncols for m in mats):
            raise ValueError("column count mismatch")
        indptr = [np.asarray([0], dtype=np.int64)]
        off = 0
        for m in mats:
            indptr.append(m.indptr[1:] + off)
            off += m.indptr[m.nrows]
        return cls(sum(m.nrows for m in mats), ncols,
                   np.concatenate(indptr),
                   np.concatenate([m.indices for m in mats]),
                   np.concatenate([m.data for m in mats]))

    def __repr__(self):
        return (f"SparseMatrix({self.nrows}x{self.ncols}, "
                f"nnz={self.nnz})")


# ---------------------------------------------------------------------------
# rank over F_p

def rank_mod_p(M, p, *, dense_cols=2000, density=0.2, dense_max_cols=9000,
               scan_limit=16, orient="auto"):
    """Rank of M over F_p.

    Sparse elimination with Markowitz-style pivoting, switching to a
    dense echelon when the active submatrix has at most `dense_cols`
    columns or its fill exceeds `density` (and fits `dense_max_cols`).
    `orient="cols"` runs the elimination on the transpose (the rank is
    the same); "auto" does so for very overdetermined matrices.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if M.nnz == 0:
        return 0
    if orient == "auto":
        orient = "rows"
    if orient == "cols":
        M = M.transpose()
    return int(_rank_csr_mod_p(
        M.indptr, M.indices, M.data, M.nrows, M.ncols, p,
        dense_cols, density, dense_max_cols, scan_limit))


def rank_mod_p_dense(A, p):
    """Textbook dense elimination oracle (slow; for tests and tiny inputs)."""
    A = [[int(x) % p for x in row] for row in np.asarray(A)]
    nrows = len(A)
    ncols = len(A[0]) if nrows else 0
    rank = 0
    for c in range(ncols):
        piv = None
        for r in range(rank, nrows):
            if A[r][c] % p:
                piv = r
                break
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        inv = pow(A[rank][c], -1, p)
        A[rank] = [(x * inv) % p for x in A[rank]]
        for r in range(nrows):
            if r != rank and A[r][c]:
                f = A[r][c]
                A[r] = [(x - f * y) % p for x, y in zip(A[r], A[rank])]
        rank += 1
        if rank == nrows:
            break
    return rank


@dataclass
class RankReport:
    """Per-prime ranks and the certified-by-agreement rational rank."""

    ranks: dict = field(default_factory=dict)     # prime -> rank
    seconds: dict = field(default_factory=dict)   # prime -> elapsed
    q_rank: int = 0
    agree: bool = True

    def to_json(self):
        return json.dumps({
            "per_prime": [{"prime": p, "rank": r,
                           "seconds": round(self.seconds.get(p, 0.0), 6)}
                          for p, r in sorted(self.ranks.items())],
            "q_rank": self.q_rank,
            "agree": self.agree,
        })


def rank_Q(M, primes=None, *, nprimes=3, seed=0, avoid=1, threads=1,
           **kwargs):
    """Rational rank via the multi-modular maximum.

    Runs `rank_mod_p` for each prime (at least two; drawn from a seeded
    PrimeSource above 2**30 skipping divisors of `avoid` when not given
    explicitly) and reports the maximum, flagging disagreement.
    """
    if primes is None:
        primes = PrimeSource(seed=seed, avoid=avoid).take(max(nprimes, 2))
    primes = list(primes)
    if not primes:
        raise ValueError("at least one prime required")
    report = RankReport()

    def run(p):
        t0 = time.perf_counter()
        r = rank_mod_p(M, p, **kwargs)
        return p, r, time.perf_counter() - t0

    if threads > 1 and len(primes) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(run, primes))
    else:
        results = [run(p) for p in primes]
    for p, r, dt in results:
        report.ranks[p] = r
        report.seconds[p] = dt
    report.q_rank = max(report.ranks.values())
    report.agree = len(set(report.ranks.values())) == 1
    return report


# ---------------------------------------------------------------------------
# dense echelon mod p (membership tests, quotient coordinates)

class ModpRowSpan:
    """Reduced row echelon of a matrix mod p, kept dense.

    Supports residue computation (reduction modulo the row span), span
    membership, and coordinates on the free columns, which identify the
    quotient space F_p^ncols / rowspan with F_p^(#free).
    """

    def __init__(self, M, p, ncols=None):
        if isinstance(M, SparseMatrix):
            A = M.to_dense() % p
            ncols = M.ncols
        else:
            A = np.asarray(M, dtype=np.int64) % p
            if A.ndim != 2:
                A = A.reshape(-1, ncols)
            ncols = A.shape[1]
        self.p = p
        self.ncols = ncols
        nrows = A.shape[0]
        rank = 0
        pivots = []
        for c in range(ncols):
            if rank == nrows:
                break
            piv = None
            for r in range(rank, nrows):
                if A[r, c]:
                    piv = r
                    break
            if piv is None:
                continue
            if piv != rank:
                A[[rank, piv]] = A[[piv, rank]]
            inv = pow(int(A[rank, c]), -1, p)
            A[rank] = A[rank] * inv % p
            mask = A[:, c] != 0
            mask[rank] = False
            if mask.any():
                A[mask] = (A[mask] - np.outer(A[mask, c], A[rank])) % p
            pivots.append(c)
            rank += 1
        self.rank = rank
        self.rows = A[:rank]
        self.pivot_cols = pivots
        free = [c for c in range(ncols) if c not in set(pivots)]
        self.free_cols = free

    def _as_vec(self, v):
        if isinstance(v, dict):
            out = np.zeros(self.ncols, dtype=np.int64)
            for c, val in v.items():
                out[c] = val % self.p
            return out
        return np.asarray(v, dtype=np.int64) % self.p

    def residue(self, v):
        """v reduced modulo the row span (zero at all pivot columns)."""
        v = self._as_vec(v).copy()
        for i, c in enumerate(self.pivot_cols):
            if v[c]:
                v = (v - v[c] * self.rows[i]) % self.p
        return v

    def contains(self, v):
        return not self.residue(v).any()

    def quotient_coords(self, v):
        """Coordinates of v's class on the free columns."""
        return self.residue(v)[self.free_cols]

    def quotient_matrix(self):
        """Dense (#free x ncols) matrix of quotient coordinates of all
        unit vectors: column l is quotient_coords(e_l)."""
        q = len(self.free_cols)
        out = np.zeros((q, self.ncols), dtype=np.int64)
        for fpos, c in enumerate(self.free_cols):
            out[fpos, c] = 1
        for i, c in enumerate(self.pivot_cols):
            out[:, c] = (-self.rows[i][self.free_cols]) % self.p
        return out


def in_rowspan_Q(M, v, *, nprimes=3, seed=0, avoid=1, exact_fallback=True):
    """Is v in the rational row span of M?

    Tests membership mod several random word-sized primes (a vector in
    the span reduces to zero mod any prime not dividing the relevant
    denominators); on disagreement falls back to exact rational
    elimination via the integer row-span lattice.
    """
    primes = PrimeSource(seed=seed, avoid=avoid).take(nprimes)
    votes = []
    for p in primes:
        votes.append(ModpRowSpan(M, p).contains(v))
    if all(votes):
        return True
    if not any(votes):
        return False
    if not exact_fallback:
        return False
    _, residual = integer_row_span(M).reduce_rational(v)
    return not residual


def in_rowspan_Z(M, v):
    """Is v in the integer row span of M?"""
    return integer_row_span(M).contains(v)


def element_order(M, v):
    """Order of v's class in Z^ncols / (integer row span of M).

    Smallest d >= 1 with d*v in the row span; math.inf when the class
    is not torsion (v is nonzero in the rational quotient).  Works on
    the support closure of v (the connected component of the row/column
    bipartite graph containing v's support), which is enough because
    disjoint components contribute independent direct summands.
    """
    vdict = _as_dict(v)
    if not vdict:
        return 1
    rows = _support_closure_rows(M, vdict)
    span = IntegerLattice.from_row_dicts(rows, M.ncols)
    return span.order_of(vdict)


def _as_dict(v):
    if isinstance(v, dict):
        return {int(c): int(x) for c, x in v.items() if x}
    if hasattr(v, "coeffs"):
        return {int(c): int(x) for c, x in v.coeffs.items() if x}
    return {int(c): int(x) for c, x in enumerate(v) if x}


def _support_closure_rows(M, vdict):
    """Rows of M in the bipartite component reachable from supp(v)."""
    MT = M.transpose()
    seen_cols = set(vdict)
    seen_rows = set()
    frontier = list(vdict)
    while frontier:
        new_rows = set()
        for c in frontier:
            rr, _ = MT.row(c)
            for r in rr:
                if int(r) not in seen_rows:
                    new_rows.add(int(r))
        seen_rows |= new_rows
        frontier = []
        for r in new_rows:
            cc, _ = M.row(r)
            for c in cc:
                c = int(c)
                if c not in seen_cols:
                    seen_cols.add(c)
                    frontier.append(c)
    out = []
    for r in sorted(seen_rows):
        cols, vals = M.row(r)
        out.append({int(c): int(x) for c, x in zip(cols, vals)})
    return out


# ---------------------------------------------------------------------------
# integer row-span lattice

def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -x0, -y0, -a
    return x0, y0, a


class IntegerLattice:
    """Lattice spanned by integer row vectors, in leading-pivot echelon form.

    Rows are stored as sparse dicts keyed by column; each stored row's
    smallest support column is its pivot and pivot columns are distinct.
    Vectors are inserted with gcd pivoting, so the stored rows always
    generate exactly the lattice of everything added so far.  Entries
    above pivots are kept reduced (balanced remainders) by periodic
    inter-reduction, which controls coefficient growth.
    """

    _REDUCE_EVERY = 32

    def __init__(self, ncols):
        self.ncols = ncols
        self.rows = {}   # pivot column -> {col: int}
        self._adds = 0

    def __len__(self):
        return len(self.rows)

    def add(self, vec):
        """Insert a vector; returns True if the lattice changed."""
        v = _as_dict(vec)
        changed = False
        while v:
            j = min(v)
            a = v[j]
            row = self.rows.get(j)
            if row is None:
                if a < 0:
                    v = {c: -x for c, x in v.items()}
                self._reduce_tail(v, j)
                self.rows[j] = v
                changed = True
                break
            b = row[j]
            if a % b == 0:
                q = a // b
                v = _row_submul(v, q, row)
            else:
                x, y, g = _xgcd(b, a)
                # new pivot row x*row + y*v has leading value g = gcd(a, b)
                new_row = _row_comb(x, row, y, v)
                v = _row_comb(a // g, row, -(b // g), v)
                self._reduce_tail(new_row, j)
                self.rows[j] = new_row
                changed = True
        if changed:
            self._adds += 1
            if self._adds % self._REDUCE_EVERY == 0:
                self.inter_reduce()
        return changed

    def _reduce_tail(self, row, pivot_col):
        """Balanced-reduce a row's entries at pivot columns > pivot_col.

        An ascending scan suffices: subtracting a pivot row only touches
        columns at or beyond its own pivot.  The support is re-read after
        each subtraction since entries may appear or vanish.
        """
        c = pivot_col
        while True:
            nxt = None
            for cc in row:
                if cc > c and cc in self.rows and (nxt is None or cc < nxt):
                    nxt = cc
            if nxt is None:
                return
            c = nxt
            other = self.rows[c]
            pv = other[c]
            q = (row[c] + (pv >> 1)) // pv
            if q:
                for cc, x in other.items():
                    nv = row.get(cc, 0) - q * x
                    if nv:
                        row[cc] = nv
                    else:
                        row.pop(cc, None)

    def inter_reduce(self):
        """Reduce all above-pivot entries (balanced), ascending pivots."""
        pivots = sorted(self.rows)
        for c in pivots:
            prow = self.rows[c]
            pv = prow[c]
            for c2 in pivots:
                if c2 >= c:
                    break
                row = self.rows[c2]
                a = row.get(c)
                if a is None:
                    continue
                q = (a + (pv >> 1)) // pv
                if q:
                    for cc, x in prow.items():
                        nv = row.get(cc, 0) - q * x
                        if nv:
                            row[cc] = nv
                        else:
                            row.pop(cc, None)

    def contains(self, vec):
        v = _as_dict(vec)
        while v:
            j = min(v)
            row = self.rows.get(j)
            if row is None:
                return False
            q, rem = divmod(v[j], row[j])
            if rem:
                return False
            v = _row_submul(v, q, row)
        return True

    def reduce_rational(self, vec):
        """Express vec over the stored rows with rational coefficients.

        Returns (coeffs, residual): coeffs maps pivot column -> Fraction,
        and residual is the part of vec outside the rational row span
        (empty dict iff vec lies in the span over Q).
        """
        v = {c: Fraction(x) for c, x in _as_dict(vec).items()}
        coeffs = {}
        while v:
            j = min(v)
            row = self.rows.get(j)
            if row is None:
                return coeffs, v
            c = v[j] / row[j]
            coeffs[j] = c
            for col, x in row.items():
                nv = v.get(col, 0) - c * x
                if nv:
                    v[col] = nv
                else:
                    v.pop(col, None)
        return coeffs, {}

    def order_of(self, vec):
        """Order of vec's class in Z^ncols / lattice (math.inf if free)."""
        coeffs, residual = self.reduce_rational(vec)
        if residual:
            return math.inf
        d = 1
        for c in coeffs.values():
            d = d * c.denominator // math.gcd(d, c.denominator)
        return d

    def index_in_ambient(self):
        """Index [Z^ncols : lattice], or 0 if the lattice has lower rank."""
        if len(self.rows) < self.ncols:
            return 0
        idx = 1
        for row in self.rows.values():
            idx *= abs(row[min(row)])
        return idx

    @classmethod
    def from_row_dicts(cls, rows, ncols):
        lat = cls(ncols)
        for row in sorted(rows, key=lambda r: (len(r), sorted(r.items()))):
            lat.add(dict(row))
        lat.inter_reduce()
        return lat


def integer_row_span(M):
    """IntegerLattice spanned by the rows of a SparseMatrix."""
    return IntegerLattice.from_row_dicts(list(M.rows_as_dicts()), M.ncols)


def _row_submul(v, q, row):
    """v - q*row on sparse dicts (q integer)."""
    if q == 0:
        return v
    out = dict(v)
    for c, x in row.items():
        nv = out.get(c, 0) - q * x
        if nv:
            out[c] = nv
        else:
            out.pop(c, None)
    return out


def _row_comb(a, r1, b, r2):
    """a*r1 + b*r2 on sparse dicts."""
    out = {}
    if a:
        for c, x in r1.items():
            y = a * x
            if y:
                out[c] = y
    for c, x in r2.items():
        nv = out.get(c, 0) + b * x
        if nv:
            out[c] = nv
        else:
            out.pop(c, None)
    return out


# ---------------------------------------------------------------------------
# Smith normal form

class SnfBudgetError(RuntimeError):
    """Residual dense block too large; run mod-p ranks at many primes
    instead."""


def snf(M, dense_budget=1500):
    """Nonzero elementary divisors d_1 | d_2 | ... of an integer matrix.

    Sparse pre-reduction on +-1 pivots (each contributes a unit divisor
    and removes its row and column), then a textbook Smith normal form
    with arbitrary-precision integers on the dense remainder.  Raises
    SnfBudgetError if the remainder exceeds `dense_budget` columns/rows.
    """
    if isinstance(M, SparseMatrix):
        rows = {r: row for r, row in enumerate(M.rows_as_dicts()) if row}
    else:
        rows = {}
        for r, row in enumerate(np.asarray(M)):
            d = {int(c): int(x) for c, x in enumerate(row) if x}
            if d:
                rows[r] = d
    col_rows = {}
    for r, row in rows.items():
        for c in row:
            col_rows.setdefault(c, set()).add(r)

    units = 0
    while True:
        # cheapest +-1 pivot, Markowitz style
        best = None
        for r, row in rows.items():
            rl = len(row)
            for c, v in row.items():
                if v == 1 or v == -1:
                    cost = (rl - 1) * (len(col_rows[c]) - 1)
                    if best is None or cost < best[0] or \
                            (cost == best[0] and (c, r) < (best[2], best[1])):
                        best = (cost, r, c, v)
        if best is None:
            break
        _, pr, pc, pv = best
        prow = rows[pr]
        for r in list(col_rows[pc]):
            if r == pr:
                continue
            row = rows[r]
            q = row[pc] * pv  # pv in {1,-1}: q = row[pc] / pv
            for c, x in prow.items():
                nv = row.get(c, 0) - q * x
                if nv:
                    if c not in row:
                        col_rows.setdefault(c, set()).add(r)
                    row[c] = nv
                else:
                    if c in row:
                        del row[c]
                        col_rows[c].discard(r)
            if not row:
                del rows[r]
        for c in prow:
            col_rows[c].discard(pr)
            if not col_rows[c]:
                del col_rows[c]
        del rows[pr]
        units += 1

    if not rows:
        return [1] * units

    live_cols = sorted({c for row in rows.values() for c in row})
    if len(rows) > dense_budget or len(live_cols) > dense_budget:
        raise SnfBudgetError(
            f"dense SNF block {len(rows)}x{len(live_cols)} exceeds budget "
            f"{dense_budget}; run mod-p ranks at many primes instead")
    colmap = {c: i for i, c in enumerate(live_cols)}
    A = [[0] * len(live_cols) for _ in rows]
    for i, r in enumerate(sorted(rows)):
        for c, v in rows[r].items():
            A[i][colmap[c]] = v
    divisors = [1] * units + _dense_snf(A)
    divisors.sort()
    return divisors


def _dense_snf(A):
    """Nonzero elementary divisors of a dense integer matrix (in place)."""
    m = len(A)
    n = len(A[0]) if m else 0
    divisors = []
    s = 0
    while True:
        # find a nonzero entry of minimal absolute value in A[s:, s:]
        piv = None
        best = None
        for i in range(s, m):
            Ai = A[i]
            for j in range(s, n):
                v = Ai[j]
                if v and (best is None or abs(v) < best):
                    best = abs(v)
                    piv = (i, j)
                    if best == 1:
                        break
            if best == 1:
                break
        if piv is None:
            break
        i, j = piv
        if i != s:
            A[s], A[i] = A[i], A[s]
        if j != s:
            for row in A:
                row[s], row[j] = row[j], row[s]
        while True:
            # clear column s by row operations
            again = False
            for i in range(s + 1, m):
                if A[i][s]:
                    q = A[i][s] // A[s][s]
                    if q:
                        As = A[s]
                        Ai = A[i]
                        for k in range(s, n):
                            Ai[k] -= q * As[k]
                    if A[i][s]:
                        A[s], A[i] = A[i], A[s]
                        again = True
            if again:
                continue
            # clear row s by column operations
            for j in range(s + 1, n):
                if A[s][j]:
                    q = A[s][j] // A[s][s]
                    if q:
                        for row in A:
                            row[j] -= q * row[s]
                    if A[s][j]:
                        for row in A:
                            row[s], row[j] = row[j], row[s]
                        again = True
            if not again:
                break
        d = abs(A[s][s])
        divisors.append(d)
        s += 1
        if s == m or s == n:
            break
    # enforce the divisibility chain
    for i in range(len(divisors)):
        for j in range(i + 1, len(divisors)):
            a, b = divisors[i], divisors[j]
            if b % a:
                g = math.gcd(a, b)
                divisors[i], divisors[j] = g, a * b // g
    divisors.sort()
    return divisors


# ---------------------------------------------------------------------------
# characteristic polynomial mod p

def charpoly_mod_p(A, p):
    """Monic characteristic polynomial of a square matrix over F_p.

    Returns coefficients [1, c_{n-1}, ..., c_0] via Hessenberg reduction.
    """
    A = np.array(A, dtype=np.int64) % p
    n = A.shape[0]
    if A.shape[0] != A.shape[1]:
        raise ValueError("matrix must be square")
    H = A.copy()
    for j in range(n - 2):
        piv = None
        for i in range(j + 1, n):
            if H[i, j]:
                piv = i
                break
        if piv is None:
            continue
        if piv != j + 1:
            H[[j + 1, piv]] = H[[piv, j + 1]]
            H[:, [j + 1, piv]] = H[:, [piv, j + 1]]
        inv = pow(int(H[j + 1, j]), -1, p)
        for i in range(j + 2, n):
            if H[i, j]:
                f = H[i, j] * inv % p
                H[i] = (H[i] - f * H[j + 1]) % p
                H[:, j + 1] = (H[:, j + 1] + f * H[:, i]) % p
    # charpoly of Hessenberg matrix by the standard recurrence
    polys = [np.array([1], dtype=np.int64)]   # p_0 = 1
    for k in range(1, n + 1):
        # p_k(x) = (x - H[k-1,k-1]) p_{k-1}(x)
        #          - sum_{i} H[i-1,k-1] * (prod subdiagonal) * p_{i-1}(x)
        prev = polys[k - 1]
        cur = np.zeros(k + 1, dtype=np.int64)
        cur[:-1] = prev
        cur[1:] = (cur[1:] - H[k - 1, k - 1] * prev) % p
        cur %= p
        beta = 1
        for i in range(k - 1, 0, -1):
            beta = beta * H[i, i - 1] % p
            if beta == 0:
                break
            coef = H[i - 1, k - 1] * beta % p
            if coef:
                q = polys[i - 1]
                cur[k + 1 - len(q):] = (cur[k + 1 - len(q):] - coef * q) % p
        polys.append(cur % p)
    return [int(c) for c in polys[n]]

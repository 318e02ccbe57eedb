"""Weight-2 Manin symbol presentations and cusp counts.

Generators are pairs (c, d) over Z/N with gcd(c, d, N) = 1, modulo the
4-element identification generated by (c, d) ~ -(d, -c); the two-term
and three-term relations present the full space, and the minus space
(anti-holomorphic eigenspace) has its own presentation with the swap
and rotation identifications.

Dimension bookkeeping: dim = 2g + C - 1 and dim_minus = g + (C - C2)/2,
where C and C2 are cusp counts with closed formulas for N >= 5 and
tabulated small values.  The genus g is recovered from the computed
dimension rather than an independent formula.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .groups import AbelianGroup
from .linalg import ModpRowSpan, PrimeSource, SparseMatrix, rank_Q
from .relations import RelationSystem, build_relations


def _phi(n):
    return sum(1 for a in range(n) if math.gcd(a, n) == 1) if n > 1 else 1


def cusp_counts(N):
    """(C, C2): cusp count and count of cusps fixed by conjugation.

    Closed formulas for N >= 5; the small cases N = 1..4 are the
    tabulated values (1, 2, 2, 3), where C = C2.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if N <= 4:
        c = {1: 1, 2: 2, 3: 2, 4: 3}[N]
        return c, c
    C = sum(_phi(d) * _phi(N // d) for d in range(1, N + 1) if N % d == 0) // 2
    if N % 2 == 0:
        C2 = _phi(N) + _phi(N // 2)
    else:
        C2 = _phi(N)
    return C, C2


class ManinIndex:
    """Ordered basis of canonical (c, d) pairs for level N.

    Canonical representatives are minima over the orbit of the order-4
    identification (c, d) -> (d, -c) with alternating sign; pairs whose
    orbit meets itself with opposite signs are 2-torsion and are dropped
    (their count is recorded).
    """

    __slots__ = ("N", "symbols", "_pos", "self_negating_count", "group",
                 "n", "flavor", "keep_self_negating")

    def __init__(self, N):
        self.N = N
        self.group = AbelianGroup(N)
        self.n = 2
        self.flavor = "manin"
        self.keep_self_negating = False
        symbols = []
        selfneg = 0
        seen = set()
        for c in range(N):
            for d in range(N):
                if math.gcd(math.gcd(c, d), N) != 1:
                    continue
                rep, _, neg = _canonical_pair(N, c, d)
                if rep in seen:
                    continue
                seen.add(rep)
                if neg:
                    selfneg += 1
                else:
                    symbols.append(rep)
        symbols.sort()
        self.symbols = symbols
        self._pos = {s: i for i, s in enumerate(symbols)}
        self.self_negating_count = selfneg

    def __len__(self):
        return len(self.symbols)

    def position(self, pair):
        return self._pos[pair]


def _canonical_pair(N, c, d):
    """Canonical representative under (c,d) ~ -(d,-c), with sign."""
    orbit = [((c % N, d % N), 1),
             ((d % N, (-c) % N), -1),
             (((-c) % N, (-d) % N), 1),
             (((-d) % N, c % N), -1)]
    rep = min(p for p, _ in orbit)
    signs = {s for p, s in orbit if p == rep}
    if len(signs) == 2:
        return rep, 0, True
    return rep, signs.pop(), False


def _canonical_pair_minus(N, c, d):
    """Canonical representative under the group generated by the swap
    (sign +) and the rotation (c,d) -> (d,-c) (sign -)."""
    orbit = []
    cur = [((c % N, d % N), 1)]
    seen = set()
    while cur:
        (a, b), s = cur.pop()
        if ((a, b), s) in seen:
            continue
        seen.add(((a, b), s))
        orbit.append(((a, b), s))
        cur.append((((b, a)), s))            # swap, sign +
        cur.append(((b, (-a) % N), -s))      # rotation, sign -
    rep = min(p for p, _ in orbit)
    signs = {s for p, s in orbit if p == rep}
    if len(signs) == 2:
        return rep, 0, True
    return rep, signs.pop(), False


class ManinMinusIndex:
    """Canonical pairs for the minus-space presentation at level N."""

    __slots__ = ("N", "symbols", "_pos", "self_negating_count", "group",
                 "n", "flavor", "keep_self_negating")

    def __init__(self, N):
        self.N = N
        self.group = AbelianGroup(N)
        self.n = 2
        self.flavor = "manin-minus"
        self.keep_self_negating = False
        symbols = []
        selfneg = 0
        seen = set()
        for c in range(N):
            for d in range(N):
                if math.gcd(math.gcd(c, d), N) != 1:
                    continue
                rep, _, neg = _canonical_pair_minus(N, c, d)
                if rep in seen:
                    continue
                seen.add(rep)
                if neg:
                    selfneg += 1
                else:
                    symbols.append(rep)
        symbols.sort()
        self.symbols = symbols
        self._pos = {s: i for i, s in enumerate(symbols)}
        self.self_negating_count = selfneg

    def __len__(self):
        return len(self.symbols)

    def position(self, pair):
        return self._pos[pair]


def build_manin_system(N):
    """Presentation of the weight-2 space at level N.

    The order-4 identification is folded into the canonical form; the
    remaining rows come from the three-term relation
    (c,d) + (d,-c-d) + (-c-d,c) = 0.
    """
    index = ManinIndex(N)
    rows = []
    seen = set()
    for c in range(N):
        for d in range(N):
            if math.gcd(math.gcd(c, d), N) != 1:
                continue
            row = {}
            for (u, v) in ((c, d), (d, (-c - d) % N), ((-c - d) % N, c)):
                rep, s, neg = _canonical_pair(N, u, v)
                if neg:
                    continue
                k = index.position(rep)
                nv = row.get(k, 0) + s
                if nv:
                    row[k] = nv
                else:
                    del row[k]
            if not row:
                continue
            items = sorted(row.items())
            if items[0][1] < 0:
                items = [(k, -v) for k, v in items]
            key = tuple(items)
            if key in seen:
                continue
            seen.add(key)
            rows.append(dict(items))
    matrix = SparseMatrix.from_rows(rows, len(index))
    return RelationSystem(index, matrix, "manin", ())


def build_manin_minus_system(N):
    """Presentation of the minus eigenspace at level N.

    Swap and rotation identifications are folded into the canonical
    form; the remaining rows come from the two-term relation
    (a1,a2) = (a1,a2-a1) + (a1-a2,a2).
    """
    index = ManinMinusIndex(N)
    rows = []
    seen = set()
    for a1 in range(N):
        for a2 in range(N):
            if math.gcd(math.gcd(a1, a2), N) != 1:
                continue
            row = {}
            for (u, v), coeff in (((a1, a2), 1),
                                  ((a1, (a2 - a1) % N), -1),
                                  (((a1 - a2) % N, a2), -1)):
                rep, s, neg = _canonical_pair_minus(N, u, v)
                if neg:
                    continue
                k = index.position(rep)
                nv = row.get(k, 0) + coeff * s
                if nv:
                    row[k] = nv
                else:
                    del row[k]
            if not row:
                continue
            items = sorted(row.items())
            if items[0][1] < 0:
                items = [(k, -v) for k, v in items]
            key = tuple(items)
            if key in seen:
                continue
            seen.add(key)
            rows.append(dict(items))
    matrix = SparseMatrix.from_rows(rows, len(index))
    return RelationSystem(index, matrix, "manin-minus", ())


@dataclass
class ModsymReport:
    N: int
    dim: int
    dim_minus: int
    C: int
    C2: int
    genus: int

    def csv_row(self):
        return (f"{self.N},{self.dim},{self.dim_minus},{self.C},"
                f"{self.C2},{self.genus}")


def modsym_dims(N, *, nprimes=2, seed=0):
    """Dimensions of the full and minus spaces with cusp bookkeeping.

    The genus is solved from dim = 2g + C - 1 and must come out a
    nonnegative integer consistent with dim_minus = g + (C - C2)/2.
    """
    sys_full = build_manin_system(N)
    sys_minus = build_manin_minus_system(N)
    dim = len(sys_full.index) - rank_Q(sys_full.matrix, nprimes=nprimes,
                                       seed=seed, avoid=N).q_rank
    dim_minus = len(sys_minus.index) - rank_Q(sys_minus.matrix,
                                              nprimes=nprimes, seed=seed,
                                              avoid=N).q_rank
    C, C2 = cusp_counts(N)
    num = dim - C + 1
    if num % 2:
        raise RuntimeError(f"dim {dim} inconsistent with C={C} at N={N}")
    genus = num // 2
    return ModsymReport(N, dim, dim_minus, C, C2, genus)


@dataclass
class ComparisonReport:
    N: int
    dim_symbol_minus: int
    dim_manin_minus: int
    rows_in_span: bool

    @property
    def ok(self):
        return (self.dim_symbol_minus == self.dim_manin_minus
                and self.rows_in_span)


def compare_with_symbol_group(N, *, nprimes=2, seed=0):
    """Match the antisymmetric symbol space with the Manin minus space.

    Checks the dimension equality and that the generator correspondence
    <a1,a2>- -> (a1,a2)- maps every relation row into the Manin-minus
    relation span mod several primes.  Raises on mismatch (bug signal).
    """
    G = AbelianGroup(N)
    sys_sym = build_relations(G, 2, "Mminus")
    sys_man = build_manin_minus_system(N)
    dim_sym = len(sys_sym.index) - rank_Q(sys_sym.matrix, nprimes=nprimes,
                                          seed=seed, avoid=N).q_rank
    dim_man = len(sys_man.index) - rank_Q(sys_man.matrix, nprimes=nprimes,
                                          seed=seed, avoid=N).q_rank
    primes = PrimeSource(seed=seed, avoid=N).take(nprimes)
    spans_p = [ModpRowSpan(sys_man.matrix, p) for p in primes]
    ok = True
    for row in sys_sym.matrix.rows_as_dicts():
        mapped = {}
        for k, v in row.items():
            entries = sys_sym.index.symbols[k].entries
            rep, s, neg = _canonical_pair_minus(N, entries[0], entries[1])
            if neg:
                continue
            kk = sys_man.index.position(rep)
            nv = mapped.get(kk, 0) + v * s
            if nv:
                mapped[kk] = nv
            else:
                del mapped[kk]
        if not all(sp.contains(mapped) for sp in spans_p):
            ok = False
            break
    report = ComparisonReport(N, dim_sym, dim_man, ok)
    if not report.ok:
        raise RuntimeError(f"minus-space comparison failed at N={N}: "
                           f"{report}")
    return report

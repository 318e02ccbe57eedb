"""Structure maps between symbol groups.

The comparison map mu from the "B" space to the "M" space, the
multiplication map (joining symbols along a subgroup, summing over
character lifts), the comultiplication map (splitting a symbol along a
subgroup), primitive parts (common kernel of all one-step
comultiplications), and the mu-cokernel.

Subgroup data is supported for cyclic groups, where subgroups
correspond to divisors.  For G = Z/N and a divisor d = |G'|:

- characters of the subgroup G' form A' = Z/d, reached from A = Z/N by
  reduction mod d (each A'-element has N/d lifts),
- characters of the quotient G'' = G/G' = Z/(N/d) form A'' = d*(Z/N)
  inside A, via k <-> d*k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations, product

import numpy as np

from .groups import AbelianGroup, _canonical_minus_raw, enumerate_symbols
from .linalg import (ModpRowSpan, PrimeSource, SparseMatrix, integer_row_span,
                     rank_mod_p, snf)
from .relations import build_relations, build_relations_cached


class ProductIndex:
    """Tensor-product basis: pairs of symbols, row-major flat indices."""

    __slots__ = ("left", "right")

    def __init__(self, left, right):
        self.left = left
        self.right = right

    def __len__(self):
        return len(self.left) * len(self.right)

    def flat(self, i, j):
        return i * len(self.right) + j

    def pair(self, k):
        return divmod(k, len(self.right))


class LinearMap:
    """Sparse linear map between symbol (or tensor) bases.

    Stored column-per-source: `cols[j]` is the image of source basis
    vector j as a dict over target indices.  The matrix view has
    row count = target size and column count = source size.
    """

    __slots__ = ("source", "target", "cols")

    def __init__(self, source, target, cols):
        self.source = source
        self.target = target
        self.cols = cols

    @property
    def matrix(self):
        ii, jj, vv = [], [], []
        for j, col in enumerate(self.cols):
            for i, v in col.items():
                ii.append(i)
                jj.append(j)
                vv.append(v)
        return SparseMatrix.from_triplets(ii, jj, vv,
                                          len(self.target), len(self.source))

    def apply(self, vec):
        """Image of a sparse vector (dict or SymbolVector) over the source."""
        coeffs = vec.coeffs if hasattr(vec, "coeffs") else vec
        out = {}
        for j, c in coeffs.items():
            for i, v in self.cols[j].items():
                nv = out.get(i, 0) + c * v
                if nv:
                    out[i] = nv
                else:
                    del out[i]
        return out

    def image_rows(self):
        """Images of all source basis vectors, as rows over the target."""
        return list(self.cols)


# ---------------------------------------------------------------------------
# the comparison map

def mu_map(G, n, source_index=None, target_index=None):
    """The map from "B" symbols to the "M" space.

    A symbol with no zero entry maps to itself, with exactly one zero
    entry to twice itself, with two or more zero entries to 0.
    """
    src = source_index or enumerate_symbols(G, n, "B")
    tgt = target_index or enumerate_symbols(G, n, "M")
    cols = []
    for s in src.symbols:
        zeros = sum(1 for e in s.entries if e == 0)
        if zeros >= 2:
            cols.append({})
        else:
            cols.append({tgt.position(s.entries): 2 if zeros == 1 else 1})
    return LinearMap(src, tgt, cols)


@dataclass
class MuReport:
    group: tuple
    n: int
    relations_in_z_span: bool = True
    surjective_odd_p: bool = True
    dim_B: int = -1
    dim_M: int = -1
    primes: list = field(default_factory=list)


def verify_mu(G, n, *, nprimes=2, seed=0, exact=True):
    """Check that mu is well defined and surjective away from 2.

    (a) every B-relation row maps into the integer (or, with
    exact=False, rational) row span of the M-relations; (b) stacking the
    M-relations with the mu-images of all B-symbols has full column
    rank mod odd primes.  Raises RuntimeError on failure (bug signal).
    """
    rb = build_relations(G, n, "B")
    rm = build_relations(G, n, "M")
    mu = mu_map(G, n, rb.index, rm.index)
    report = MuReport(group=tuple(G.moduli), n=n)

    if exact:
        span = integer_row_span(rm.matrix)
        member = span.contains
    else:
        spans_p = [ModpRowSpan(rm.matrix, p)
                   for p in PrimeSource(seed=seed, avoid=G.order).take(nprimes)]

        def member(v):
            return all(sp.contains(v) for sp in spans_p)

    for row in rb.matrix.rows_as_dicts():
        if not member(mu.apply(row)):
            raise RuntimeError(
                f"mu image of a B-relation left the M-relation span "
                f"(G={G!r}, n={n})")

    stacked = SparseMatrix.vstack(
        [rm.matrix, SparseMatrix.from_rows(mu.image_rows(), len(rm.index))])
    primes = [p for p in PrimeSource(seed=seed, avoid=2 * G.order)
              .take(nprimes)]
    report.primes = primes
    for p in primes:
        if rank_mod_p(stacked, p) != len(rm.index):
            report.surjective_odd_p = False
            raise RuntimeError(
                f"mu not surjective mod {p} (G={G!r}, n={n})")
        dim_m = len(rm.index) - rank_mod_p(rm.matrix, p)
        dim_b = len(rb.index) - rank_mod_p(rb.matrix, p)
        report.dim_M, report.dim_B = dim_m, dim_b
    return report


def mu_cokernel(G, n, dense_budget=1500):
    """Elementary divisors > 1 of the cokernel of mu.

    Smith form of the M-relations stacked with the mu-images of all
    B-symbols.
    """
    rm = build_relations(G, n, "M")
    mu = mu_map(G, n, target_index=rm.index)
    stacked = SparseMatrix.vstack(
        [rm.matrix, SparseMatrix.from_rows(mu.image_rows(), len(rm.index))])
    divisors = snf(stacked, dense_budget=dense_budget)
    return [d for d in divisors if d != 1]


# ---------------------------------------------------------------------------
# subgroup data for cyclic groups

class SubquotientDatum:
    """Subgroup of a cyclic group, encoded by the divisor d = |G'|.

    Carries the concrete character identifications: A' = Z/d by
    reduction mod d, A'' = d*(Z/N) = Z/(N/d) by k <-> d*k.
    """

    __slots__ = ("group", "d", "sub_chars", "quot_chars")

    def __init__(self, G, d):
        if not G.is_cyclic:
            raise ValueError("subgroup data implemented for cyclic groups")
        N = G.order
        if d < 1 or N % d != 0:
            raise ValueError(f"{d} does not divide {N}")
        self.group = G
        self.d = d
        self.sub_chars = AbelianGroup(d)        # characters of G'
        self.quot_chars = AbelianGroup(N // d)  # characters of G'' = G/G'
        # homomorphism sanity on generators
        assert self.to_sub_char(self.embed_quot_char(1)) in (0, 1 % d)
        two = self.embed_quot_char(2 % (N // d))
        assert two == (2 * d) % N

    def to_sub_char(self, x):
        """A -> A': restriction of a character to the subgroup."""
        return x % self.d

    def lifts(self, xq):
        """All characters of G restricting to the given character of G'."""
        N = self.group.order
        return [xq + self.d * t for t in range(N // self.d)]

    def embed_quot_char(self, xs):
        """A'' -> A: a character of G'' pulled back to G."""
        return (self.d * xs) % self.group.order

    def is_quot_char(self, x):
        """Does x in A vanish on G' (i.e. lie in A'')?"""
        return x % self.d == 0

    def as_quot_char(self, x):
        """A'' element written as a character of G'' = Z/(N/d)."""
        return x // self.d

    def __repr__(self):
        return f"SubquotientDatum(Z/{self.group.order}, |G'|={self.d})"


def proper_divisors(N, include_one=False):
    lo = 1 if include_one else 2
    return [d for d in range(lo, N) if N % d == 0]


# ---------------------------------------------------------------------------
# multiplication and comultiplication

def nabla_map(datum, n1, n2, flavor="M", source_index=None, target_index=None):
    """Multiplication: symbols over G' tensor symbols over G'' to symbols
    over G.

    Each entry of the left factor is replaced by every lift of the
    corresponding character of G' to G (summing over all combinations);
    right-factor entries embed along A'' -> A.  flavor "Mminus" applies
    the signed canonicalization throughout.
    """
    if flavor not in ("M", "Mminus"):
        raise ValueError("nabla is defined on the M / Mminus flavors")
    G = datum.group
    minus = flavor == "Mminus"
    left = enumerate_symbols(datum.sub_chars, n1, flavor)
    right = enumerate_symbols(datum.quot_chars, n2, flavor)
    src = source_index or ProductIndex(left, right)
    tgt = target_index or enumerate_symbols(G, n1 + n2, flavor)
    embed = datum.embed_quot_char
    cols = []
    for s1 in left.symbols:
        lifts_per_entry = [datum.lifts(e) for e in s1.entries]
        for s2 in right.symbols:
            tail = tuple(embed(e) for e in s2.entries)
            col = {}
            for lifted in product(*lifts_per_entry):
                ent = lifted + tail
                if minus:
                    ent, sgn, selfneg = _canonical_minus_raw(G, ent)
                    if selfneg and not tgt.keep_self_negating:
                        continue
                else:
                    ent = tuple(sorted(ent))
                    sgn = 1
                c = tgt.position(ent)   # KeyError would signal a span bug
                nv = col.get(c, 0) + sgn
                if nv:
                    col[c] = nv
                else:
                    del col[c]
            cols.append(col)
    return LinearMap(src, tgt, cols)


def delta_map(datum, n1, n2, variant="Delta", source_index=None):
    """Comultiplication: split symbols over G along a subgroup.

    A symbol maps to the sum, over all ways to pick n2 slots whose
    entries lie in A'' and generate A'', of (remaining entries reduced
    to A') tensor (picked entries as a symbol of G'', antisymmetric
    flavor).  variant "Delta" reads the source and left factor in the
    "M" flavor, "DeltaMinus" in the antisymmetric flavor.
    """
    if variant not in ("Delta", "DeltaMinus"):
        raise ValueError(f"unknown variant {variant!r}")
    G = datum.group
    if datum.quot_chars.order == 1:
        raise ValueError("comultiplication needs a nontrivial quotient")
    n = n1 + n2
    minus = variant == "DeltaMinus"
    src_flavor = "Mminus" if minus else "M"
    src = source_index or enumerate_symbols(G, n, src_flavor)
    left = enumerate_symbols(datum.sub_chars, n1, src_flavor)
    right = enumerate_symbols(datum.quot_chars, n2, "Mminus")
    tgt = ProductIndex(left, right)
    Gq = datum.quot_chars
    Gs = datum.sub_chars
    cols = []
    for s in src.symbols:
        ent = s.entries
        col = {}
        for pick in combinations(range(n), n2):
            sub = [ent[i] for i in pick]
            if any(not datum.is_quot_char(e) for e in sub):
                continue
            qpart = tuple(datum.as_quot_char(e) for e in sub)
            g = Gq.order
            for e in qpart:
                g = math.gcd(g, e)
            if g != 1:
                continue  # generation condition on the picked block
            rest = tuple(datum.to_sub_char(ent[i])
                         for i in range(n) if i not in pick)
            sgn = 1
            if minus:
                lpart, s1, neg1 = _canonical_minus_raw(Gs, rest)
                if neg1:
                    continue
                sgn *= s1
            else:
                lpart = tuple(sorted(rest))
            rpart, s2, neg2 = _canonical_minus_raw(Gq, qpart)
            if neg2:
                continue
            sgn *= s2
            k = tgt.flat(left.position(lpart), right.position(rpart))
            nv = col.get(k, 0) + sgn
            if nv:
                col[k] = nv
            else:
                del col[k]
        cols.append(col)
    return LinearMap(src, tgt, cols)


def _one_step_deltas(G, n, variant):
    """All one-step comultiplications out of the (G, n) symbol space."""
    N = G.order
    include_one = variant == "Delta"   # trivial G' allowed for the M flavor
    out = []
    for d in proper_divisors(N, include_one=include_one):
        datum = SubquotientDatum(G, d)
        for n2 in range(1, n):
            out.append((datum, n - n2, n2))
    return out


def _quotient_functionals(lmap, p):
    """Dense functional rows expressing lmap composed with the projections
    of both tensor factors to their relation quotients, mod p."""
    left, right = lmap.target.left, lmap.target.right
    rl = build_relations_cached(left.group, left.n, left.flavor)
    rr = build_relations_cached(right.group, right.n, right.flavor)
    pl = ModpRowSpan(rl.matrix, p)
    pr = ModpRowSpan(rr.matrix, p)
    q1, q2 = len(pl.free_cols), len(pr.free_cols)
    if q1 == 0 or q2 == 0:
        return np.zeros((0, len(lmap.source)), dtype=np.int64)
    PL = pl.quotient_matrix()
    PR = pr.quotient_matrix()
    A = np.zeros((q1 * q2, len(lmap.source)), dtype=np.int64)
    nr = len(right)
    for j, col in enumerate(lmap.cols):
        if not col:
            continue
        acc = np.zeros((q1, q2), dtype=np.int64)
        for k, v in col.items():
            i1, i2 = divmod(k, nr)
            acc = (acc + v * np.outer(PL[:, i1], PR[:, i2])) % p
        A[:, j] = acc.reshape(-1)
    return A


def primitive_dim(G, n, variant="Mminus", *, nprimes=2, seed=0):
    """Dimension of the common kernel of all one-step comultiplications,
    inside the relation quotient.

    variant "Mminus" uses the antisymmetric space with strict subgroup
    data; variant "M" uses the full space and also allows the trivial
    subgroup.  Returns (consensus dim, {prime: dim}).
    """
    if not G.is_cyclic:
        raise ValueError("primitive parts implemented for cyclic groups")
    src_flavor = "Mminus" if variant == "Mminus" else "M"
    rsrc = build_relations(G, n, src_flavor)
    dvariant = "DeltaMinus" if variant == "Mminus" else "Delta"
    maps = [delta_map(datum, n1, n2, dvariant, source_index=rsrc.index)
            for datum, n1, n2 in _one_step_deltas(G, n, dvariant)]
    primes = PrimeSource(seed=seed, avoid=G.order).take(nprimes)
    dims = {}
    for p in primes:
        mats = [rsrc.matrix]
        for lmap in maps:
            A = _quotient_functionals(lmap, p)
            if A.shape[0]:
                mats.append(SparseMatrix.from_rows(
                    ({int(c): int(v) for c, v in enumerate(row) if v}
                     for row in A), len(rsrc.index)))
        stacked = SparseMatrix.vstack(mats)
        dims[p] = len(rsrc.index) - rank_mod_p(stacked, p)
    values = set(dims.values())
    return (max(values), dims) if values else (0, dims)


def coprimitive_dim(G, n, *, nprimes=2, seed=0):
    """Dimension of the cokernel of the sum of all one-step multiplications
    into the antisymmetric (G, n) symbol space."""
    if not G.is_cyclic:
        raise ValueError("primitive parts implemented for cyclic groups")
    rsrc = build_relations(G, n, "Mminus")
    rows = [dict(r) for r in rsrc.matrix.rows_as_dicts()]
    for d in proper_divisors(G.order):
        datum = SubquotientDatum(G, d)
        for n2 in range(1, n):
            lmap = nabla_map(datum, n - n2, n2, "Mminus",
                             target_index=rsrc.index)
            rows.extend(c for c in lmap.cols if c)
    stacked = SparseMatrix.from_rows(rows, len(rsrc.index))
    primes = PrimeSource(seed=seed, avoid=G.order).take(nprimes)
    dims = {p: len(rsrc.index) - rank_mod_p(stacked, p) for p in primes}
    return (max(set(dims.values())), dims)

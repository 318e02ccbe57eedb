"""Lattices, simplicial cones, and Hecke operators on symbol spaces.

A symbol can be read off from a triple (lattice, character assignment,
basic simplicial cone); re-expressing the same data over an overlattice
(or sublattice, for the co-vector flavor) and subdividing the cone into
basic pieces yields the columns of the Hecke operators T_{ell,r}.

Lattices are full-rank subgroups of Q^n stored as an integer basis
matrix over a common denominator, normalized to Hermite form so that
enumeration is duplicate-free.  All arithmetic is exact (integers and
fractions).
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations, product

import numpy as np

from .groups import _canonical_minus_raw, spans
from .linalg import IntegerLattice, ModpRowSpan, SparseMatrix, is_prime


# ---------------------------------------------------------------------------
# small exact dense helpers

def _dense_hnf(rows, n):
    """Row Hermite form (positive pivots, entries above reduced) of the
    lattice spanned by integer rows; returns a list of basis rows."""
    lat = IntegerLattice(n)
    for r in rows:
        lat.add({c: int(v) for c, v in enumerate(r) if v})
    pivots = sorted(lat.rows.items())
    basis = [dict(row) for _, row in pivots]
    for i in range(len(basis)):
        cj = pivots[i][0]
        pv = basis[i][cj]
        for k in range(i):
            q = basis[k].get(cj, 0) // pv
            if q:
                for c, v in basis[i].items():
                    nv = basis[k].get(c, 0) - q * v
                    if nv:
                        basis[k][c] = nv
                    else:
                        basis[k].pop(c, None)
    out = []
    for row in basis:
        dense = [0] * n
        for c, v in row.items():
            dense[c] = v
        out.append(dense)
    return out


def _frac_inverse(F):
    """Exact inverse of a small square matrix of Fractions."""
    n = len(F)
    A = [[Fraction(F[i][j]) for j in range(n)] +
         [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        A[c], A[piv] = A[piv], A[c]
        inv = 1 / A[c][c]
        A[c] = [x * inv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c]:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return [row[n:] for row in A]


def _int_det(M):
    """Exact determinant of a small integer matrix (fraction-free)."""
    A = [[Fraction(x) for x in row] for row in M]
    n = len(A)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det *= A[c][c]
        inv = 1 / A[c][c]
        for r in range(c + 1, n):
            if A[r][c]:
                f = A[r][c] * inv
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    assert det.denominator == 1
    return det.numerator


def gaussian_binomial(n, r, q):
    """Number of r-dimensional subspaces of F_q^n."""
    num = den = 1
    for i in range(r):
        num *= q ** (n - i) - 1
        den *= q ** (r - i) - 1
    return num // den


# ---------------------------------------------------------------------------
# lattices

class Lattice:
    """Full-rank lattice in Q^n: rowspan(num) / den, in Hermite form."""

    __slots__ = ("n", "num", "den")

    def __init__(self, rows, den=1):
        rows = [list(map(int, r)) for r in rows]
        n = len(rows[0])
        basis = _dense_hnf(rows, n)
        if len(basis) != n:
            raise ValueError("lattice basis is singular")
        g = abs(int(den))
        for row in basis:
            for v in row:
                g = math.gcd(g, v)
        self.n = n
        self.den = den // g
        self.num = tuple(tuple(v // g for v in row) for row in basis)

    @classmethod
    def standard(cls, n):
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    def basis_rows(self):
        """Basis vectors as tuples of Fractions."""
        return [tuple(Fraction(v, self.den) for v in row) for row in self.num]

    def coords(self, vec):
        """Coordinates of vec in the lattice basis (exact Fractions)."""
        vec = [Fraction(x) * self.den for x in vec]
        n = self.n
        c = [Fraction(0)] * n
        for i in range(n):
            # Hermite basis is upper triangular: pivot of row i at column i
            acc = vec[i]
            for j in range(i):
                acc -= c[j] * self.num[j][i]
            c[i] = acc / self.num[i][i]
        return tuple(c)

    def contains(self, vec):
        return all(x.denominator == 1 for x in self.coords(vec))

    def covolume(self):
        d = 1
        for i in range(self.n):
            d *= self.num[i][i]
        return Fraction(abs(d), self.den ** self.n)

    def __eq__(self, other):
        return (isinstance(other, Lattice) and self.den == other.den
                and self.num == other.num)

    def __hash__(self):
        return hash((self.den, self.num))

    def __repr__(self):
        return f"Lattice(num={self.num}, den={self.den})"


def _subspaces_rref(n, r, ell):
    """All r-dimensional subspaces of F_ell^n as reduced echelon bases,
    in a deterministic order."""
    for pivots in combinations(range(n), r):
        free = []
        for i, p in enumerate(pivots):
            hi = pivots[i + 1] if i + 1 < r else n
            free.extend((i, c) for c in range(p + 1, n)
                        if c not in pivots)
        free = [(i, c) for (i, c) in free if c > pivots[i]]
        for vals in product(range(ell), repeat=len(free)):
            rows = [[0] * n for _ in range(r)]
            for i, p in enumerate(pivots):
                rows[i][p] = 1
            ok = True
            for (i, c), v in zip(free, vals):
                rows[i][c] = v
            # echelon condition: entries above later pivots vanish
            for i, p in enumerate(pivots):
                for i2 in range(i):
                    if rows[i2][p]:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                yield rows


def enumerate_overlattices(n, ell, r):
    """Overlattices L' of Z^n inside (1/ell)Z^n with L'/Z^n = (Z/ell)^r.

    They correspond to r-dimensional subspaces of F_ell^n; the count is
    the Gaussian binomial.  r = n gives the single scaled lattice.
    """
    _check_ell_r(n, ell, r)
    if r == n:
        return [Lattice([[int(i == j) for j in range(n)] for i in range(n)],
                        den=ell)]
    eye = [[ell * int(i == j) for j in range(n)] for i in range(n)]
    out = []
    for rows in _subspaces_rref(n, r, ell):
        out.append(Lattice(rows + eye, den=ell))
    assert len(out) == gaussian_binomial(n, r, ell)
    return out


def enumerate_sublattices(n, ell, r):
    """Sublattices L' of Z^n with Z^n/L' = (Z/ell)^r (index ell^r)."""
    _check_ell_r(n, ell, r)
    eye = [[ell * int(i == j) for j in range(n)] for i in range(n)]
    if r == n:
        return [Lattice(eye)]
    out = []
    for rows in _subspaces_rref(n, n - r, ell):
        out.append(Lattice(rows + eye))
    assert len(out) == gaussian_binomial(n, r, ell)
    return out


def _check_ell_r(n, ell, r):
    if not is_prime(ell):
        raise ValueError(f"{ell} is not prime")
    if not 1 <= r <= n:
        raise ValueError(f"r={r} out of range 1..{n}")


# ---------------------------------------------------------------------------
# cones

class SimplicialCone:
    """Full-dimensional simplicial cone spanned by n independent rays."""

    __slots__ = ("generators",)

    def __init__(self, generators):
        self.generators = tuple(tuple(Fraction(x) for x in g)
                                for g in generators)

    def __repr__(self):
        return f"SimplicialCone({self.generators})"


def standard_octant(n):
    return SimplicialCone([[int(i == j) for j in range(n)]
                           for i in range(n)])


def primitivize(vec, lattice):
    """Smallest positive multiple of vec lying primitively in the lattice."""
    c = lattice.coords(vec)
    if all(x == 0 for x in c):
        raise ValueError("zero vector")
    lcm = 1
    for x in c:
        lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
    ints = [int(x * lcm) for x in c]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    t = Fraction(lcm, g)
    return tuple(Fraction(x) * t for x in vec)


def cone_coord_matrix(cone, lattice):
    """Integer matrix of the (primitivized) generators in lattice
    coordinates, one generator per row."""
    rows = []
    for g in cone.generators:
        c = lattice.coords(primitivize(g, lattice))
        rows.append([int(x) for x in c])
    return rows


def multiplicity(cone, lattice):
    """|det| of the primitivized generators w.r.t. the lattice; 1 = basic."""
    d = _int_det(cone_coord_matrix(cone, lattice))
    if d == 0:
        raise ValueError("degenerate cone")
    return abs(d)


def _box_points(coord_rows, det):
    """Lattice points sum(c_i * g_i), 0 <= c_i < 1, in lattice coordinates.

    Returns the nonzero coefficient vectors c (tuples of Fractions).
    All such points lie on the (1/det)-grid, so they are found by an
    exact integer scan of det^n grid candidates.
    """
    n = len(coord_rows)
    if det ** n > 4_000_000:
        raise ValueError(f"multiplicity {det} too large for box enumeration")
    Mg = np.array(coord_rows, dtype=object)
    ks = np.array(list(product(range(det), repeat=n)), dtype=object)
    prods = ks @ Mg
    good = (prods % det == 0).all(axis=1)
    out = []
    for k, ok in zip(ks, good):
        if ok and any(k):
            out.append(tuple(Fraction(int(x), det) for x in k))
    return out


def subdivide_to_basic(cone, lattice):
    """Decompose a full-dimensional cone into basic cones for the lattice.

    If the cone is not basic, pick the nonzero lattice point
    w = sum c_i g_i with 0 <= c_i < 1 minimizing sum(c_i) (ties broken
    lexicographically on the coefficient vector), star-subdivide at w
    (replace g_i by w for each i with c_i > 0), and recurse; every
    piece has strictly smaller multiplicity, so this terminates.
    """
    gens = tuple(primitivize(g, lattice) for g in cone.generators)
    coords = [[int(x) for x in lattice.coords(g)] for g in gens]
    det = abs(_int_det(coords))
    if det == 0:
        raise ValueError("degenerate cone")
    if det == 1:
        return [SimplicialCone(gens)]
    pts = _box_points(coords, det)
    c = min(pts, key=lambda t: (sum(t), t))
    n = len(gens)
    w = tuple(sum((c[i] * gens[i][j] for i in range(n)), Fraction(0))
              for j in range(len(gens[0])))
    out = []
    for i in range(n):
        if c[i] > 0:
            piece = SimplicialCone(gens[:i] + (w,) + gens[i + 1:])
            out.extend(subdivide_to_basic(piece, lattice))
    return out


def symbol_of_cone(cone, lattice, chi, group, dual=False):
    """Transport a character assignment to the basis given by a basic cone.

    `chi` assigns a group element a_i to each standard basis vector e_i.
    For the default (vector) transport, with f_1..f_n the cone's
    primitive generators and e_i = sum_j D[j][i] f_j, the new entries
    are a'_j = sum_i D[j][i] a_i; D is integral because the f_j form a
    lattice basis containing the standard lattice.  With dual=True the
    transport is a'_j = sum_i F[j][i] a_i where f_j = sum_i F[j][i] e_i
    (integral for sublattices of Z^n).
    """
    gens = [primitivize(g, lattice) for g in cone.generators]
    if multiplicity(SimplicialCone(gens), lattice) != 1:
        raise ValueError("cone is not basic for the lattice")
    T = _transport_matrix(gens, dual)
    out = []
    for j in range(len(gens)):
        a = 0
        for i, x in enumerate(T[j]):
            if x:
                a = group.add(a, group.scale(x, chi[i]))
        out.append(a)
    return tuple(out)


def _transport_matrix(gens, dual):
    """Integer matrix T with a'_j = sum_i T[j][i] a_i."""
    F = [list(g) for g in gens]
    if dual:
        T = F
    else:
        Finv = _frac_inverse(F)
        # e_i = sum_j D[j][i] f_j  with  D = (F^T)^{-1} = (F^{-1})^T
        T = [[Finv[i][j] for i in range(len(F))] for j in range(len(F))]
    out = []
    for row in T:
        irow = []
        for x in row:
            x = Fraction(x)
            if x.denominator != 1:
                raise ValueError("non-integral change of basis")
            irow.append(int(x))
        out.append(irow)
    return out


# ---------------------------------------------------------------------------
# Hecke operators

class HeckeMatrix:
    """Square operator matrix on a symbol basis, column-per-symbol."""

    __slots__ = ("index", "ell", "r", "flavor", "cols")

    def __init__(self, index, ell, r, flavor, cols):
        self.index = index
        self.ell = ell
        self.r = r
        self.flavor = flavor
        self.cols = cols

    @property
    def matrix(self):
        ii, jj, vv = [], [], []
        for j, col in enumerate(self.cols):
            for i, v in col.items():
                ii.append(i)
                jj.append(j)
                vv.append(v)
        m = len(self.index)
        return SparseMatrix.from_triplets(ii, jj, vv, m, m)

    def apply(self, vec):
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

    def __repr__(self):
        return (f"HeckeMatrix(ell={self.ell}, r={self.r}, "
                f"flavor={self.flavor}, dim={len(self.index)})")


def transport_matrices(n, ell, r, dual=False):
    """All (lattice, basic piece, transport matrix) triples for the standard
    octant over every over-/sub-lattice of type (ell, r)."""
    lats = enumerate_sublattices(n, ell, r) if dual else \
        enumerate_overlattices(n, ell, r)
    out = []
    for lat in lats:
        for piece in subdivide_to_basic(standard_octant(n), lat):
            gens = [primitivize(g, lat) for g in piece.generators]
            out.append((lat, piece, _transport_matrix(gens, dual)))
    return out


def hecke_matrix(G, n, ell, r, flavor="M", index=None, full_scaling=False):
    """The Hecke operator T_{ell,r} (or its co-vector version) as a matrix.

    flavor "M" / "Mminus": sum over overlattices; flavor "Mstar": sum
    over sublattices with the dual transport.  Requires ell prime and
    coprime to the group order; r = n (a plain rescaling, useful as a
    sanity check) must be enabled with full_scaling.
    """
    from .groups import enumerate_symbols
    if flavor not in ("M", "Mstar", "Mminus"):
        raise ValueError(f"Hecke operators act on M-type flavors, "
                         f"not {flavor!r}")
    if G.order % ell == 0:
        raise ValueError(f"ell={ell} divides the group order {G.order}")
    if r == n and not full_scaling:
        raise ValueError("r = n is a plain rescaling; pass full_scaling=True")
    if index is None:
        index = enumerate_symbols(G, n, flavor)
    dual = flavor == "Mstar"
    minus = flavor == "Mminus"
    trans = transport_matrices(n, ell, r, dual=dual)
    pos = index._pos
    cols = []
    for s in index.symbols:
        chi = s.entries
        col = {}
        for _, _, T in trans:
            ent = []
            for row in T:
                a = 0
                for i, x in enumerate(row):
                    if x:
                        a = G.add(a, G.scale(x, chi[i]))
                ent.append(a)
            ent = tuple(ent)
            if minus:
                ent, sgn, selfneg = _canonical_minus_raw(G, ent)
                if selfneg and not index.keep_self_negating:
                    continue
            else:
                ent = tuple(sorted(ent))
                sgn = 1
            c = pos[ent]
            nv = col.get(c, 0) + sgn
            if nv:
                col[c] = nv
            else:
                del col[c]
        cols.append(col)
    return HeckeMatrix(index, ell, r, flavor, cols)


def induced_on_quotient(H, R, p):
    """Dense matrix of a Hecke operator on the relation quotient mod p.

    Verifies that the operator maps every relation row back into the
    relation row span mod p (well-definedness); raises RuntimeError
    otherwise.  The quotient basis consists of the free columns of the
    echelonized relation matrix.
    """
    if H.index is not R.index and len(H.index) != len(R.index):
        raise ValueError("operator and relations index mismatch")
    span = ModpRowSpan(R.matrix, p)
    for row in R.matrix.rows_as_dicts():
        if not span.contains(H.apply(row)):
            raise RuntimeError(
                "Hecke image of a relation row left the relation span")
    free = span.free_cols
    Q = len(free)
    out = np.zeros((Q, Q), dtype=np.int64)
    for j, f in enumerate(free):
        img = H.apply({f: 1})
        out[:, j] = span.quotient_coords(img)
    return out

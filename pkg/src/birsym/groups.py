"""Finite abelian groups, their characters, and canonical symbols.

A group is a product of cyclic factors Z/N_1 x ... x Z/N_m in a fixed,
user-given order (no invariant-factor normalization, so residue
coordinates stay stable).  The group is identified with its character
group coordinatewise.

Elements use 0-based flat index conventions: the element with residue
vector (r_1, ..., r_m) is the integer r_1 * (N_2 * ... * N_m) + ... + r_m,
so for a cyclic group the element *is* its residue, and the numeric
order on indices is the lexicographic order on residue vectors.  Use
``AbelianGroup.element`` / ``AbelianGroup.residues`` to convert.

A symbol is an unordered n-tuple of elements that together generate the
group ("span condition").  Four flavors are supported; they share the
same generators but differ in relations (built in `birsym.relations`)
and, for the "Mminus" flavor, in how tuples are canonicalized:

- "B":      symmetric symbols, blowup-style relations with one pivot
            per distinct value,
- "M":      symmetric symbols, one pivot per slot,
- "Mstar":  symmetric symbols, pivot slot replaced by the block sum,
- "Mminus": the antisymmetric quotient, where negating one entry flips
            the sign of the symbol.

>>> G = AbelianGroup([5])
>>> spans(G, [2, 3])
True
>>> canonicalize(G, (4, 1), "M")
(Symbol(entries=(1, 4), flavor='M'), 1)
>>> canonicalize(G, (1, 4), "Mminus")
(Symbol(entries=(1, 1), flavor='Mminus'), -1)
"""

from __future__ import annotations

import math
from itertools import combinations_with_replacement

from .linalg import IntegerLattice

FLAVORS = ("B", "M", "Mstar", "Mminus")


class AbelianGroup:
    """Product of cyclic groups Z/N_1 x ... x Z/N_m, N_i >= 1.

    Also serves as its own character group (fixed coordinatewise
    identification).
    """

    __slots__ = ("moduli", "order", "_weights", "_neg_table", "_phi")

    def __init__(self, moduli):
        if isinstance(moduli, int):
            moduli = [moduli]
        moduli = tuple(int(N) for N in moduli)
        if not moduli or any(N < 1 for N in moduli):
            raise ValueError("moduli must be a nonempty list of integers >= 1")
        self.moduli = moduli
        order = 1
        for N in moduli:
            order *= N
        self.order = order
        # mixed-radix weights: flat index = sum(r_i * w_i)
        weights = []
        w = 1
        for N in reversed(moduli):
            weights.append(w)
            w *= N
        self._weights = tuple(reversed(weights))
        self._neg_table = None
        self._phi = None

    @property
    def m(self):
        return len(self.moduli)

    @property
    def is_cyclic(self):
        return len(self.moduli) == 1

    @property
    def phi(self):
        """Euler totient of the modulus, for cyclic groups only."""
        if not self.is_cyclic:
            raise ValueError("phi is defined here for cyclic groups only")
        if self._phi is None:
            N = self.moduli[0]
            self._phi = sum(1 for a in range(N) if math.gcd(a, N) == 1)
        return self._phi

    def element(self, residues):
        """Flat index of an element given as residues (or an int if cyclic)."""
        if isinstance(residues, int):
            if self.is_cyclic:
                return residues % self.moduli[0]
            raise TypeError("plain int only allowed for cyclic groups")
        if len(residues) != self.m:
            raise ValueError(
                f"expected {self.m} residues, got {len(residues)}")
        idx = 0
        for r, N, w in zip(residues, self.moduli, self._weights):
            idx += (r % N) * w
        return idx

    def residues(self, idx):
        """Residue vector of the element with flat index `idx`."""
        out = []
        for N, w in zip(self.moduli, self._weights):
            out.append((idx // w) % N)
        return tuple(out)

    def elements(self):
        return range(self.order)

    def add(self, x, y):
        if self.is_cyclic:
            return (x + y) % self.order
        return self.element([a + b for a, b in
                             zip(self.residues(x), self.residues(y))])

    def neg(self, x):
        if self.is_cyclic:
            return (-x) % self.order
        if self._neg_table is None:
            self._neg_table = [self.element([-r for r in self.residues(i)])
                               for i in range(self.order)]
        return self._neg_table[x]

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def scale(self, k, x):
        if self.is_cyclic:
            return (k * x) % self.order
        return self.element([k * r for r in self.residues(x)])

    def is_two_torsion(self, x):
        return self.neg(x) == x

    def __eq__(self, other):
        return isinstance(other, AbelianGroup) and self.moduli == other.moduli

    def __hash__(self):
        return hash(self.moduli)

    def __repr__(self):
        return "AbelianGroup(%s)" % (list(self.moduli),)


def spans(group, elems):
    """True iff the given elements generate the whole group.

    For a cyclic group this is gcd(a_1, ..., a_t, N) == 1.  In general
    the subgroup generated by the elements equals the group iff the
    integer row lattice spanned by their residue vectors together with
    diag(N_1, ..., N_m) is all of Z^m.
    """
    elems = [_as_index(group, e) for e in elems]
    if group.is_cyclic:
        N = group.moduli[0]
        g = N
        for e in elems:
            g = math.gcd(g, e)
        return g == 1
    lat = IntegerLattice(group.m)
    for j, N in enumerate(group.moduli):
        row = [0] * group.m
        row[j] = N
        lat.add(row)
    for e in elems:
        lat.add(list(group.residues(e)))
    return lat.index_in_ambient() == 1


def _as_index(group, e):
    if isinstance(e, int):
        if group.is_cyclic:
            return e % group.order
        if 0 <= e < group.order:
            return e
        raise ValueError("flat index out of range")
    return group.element(e)


class Symbol:
    """Canonical representative of an unordered symbol.

    `entries` is the sorted tuple of flat element indices.  For the
    "Mminus" flavor the entries are additionally minimized under
    per-entry negation, and `sign` is 0 exactly when the symbol is
    identified with its own negative (it contains a 2-torsion entry),
    +1 otherwise.  For the other flavors `sign` is always +1.
    """

    __slots__ = ("entries", "flavor", "sign")

    def __init__(self, entries, flavor, sign=1):
        self.entries = tuple(entries)
        self.flavor = flavor
        self.sign = sign

    def __eq__(self, other):
        return (isinstance(other, Symbol)
                and self.entries == other.entries
                and self.flavor == other.flavor)

    def __hash__(self):
        return hash((self.entries, self.flavor))

    def __lt__(self, other):
        return self.entries < other.entries

    def __repr__(self):
        if self.flavor == "Mminus" and self.sign == 0:
            return (f"Symbol(entries={self.entries}, flavor={self.flavor!r}, "
                    f"sign=0)")
        return f"Symbol(entries={self.entries}, flavor={self.flavor!r})"


def _canonical_minus_raw(group, entries):
    """Minimize each entry under negation.

    Returns (sorted tuple of minimized entries, flip-parity sign in
    {+1,-1}, self_negating flag).  The parity counts entries where the
    negative is strictly smaller; 2-torsion entries (including 0) are
    never counted as flips but make the class self-negating, since
    flipping such an entry changes the parity without changing the
    tuple.
    """
    neg = group.neg
    out = []
    parity = 1
    selfneg = False
    for e in entries:
        f = neg(e)
        if f < e:
            out.append(f)
            parity = -parity
        else:
            out.append(e)
            if f == e:
                selfneg = True
    out.sort()
    return tuple(out), parity, selfneg


def canonicalize(group, entries, flavor, check_span=True):
    """Canonical (Symbol, coefficient) for an ordered tuple of entries.

    Flavors "B"/"M"/"Mstar" sort the tuple; the coefficient is +1.
    Flavor "Mminus" minimizes over per-entry negations composed with
    permutations; the coefficient is the flip parity, or 0 when the
    orbit identifies the symbol with its own negative.

    Raises ValueError if the entries do not generate the group (unless
    `check_span` is False) or the flavor is unknown.
    """
    if flavor not in FLAVORS:
        raise ValueError(f"unknown flavor {flavor!r}")
    entries = tuple(_as_index(group, e) for e in entries)
    if check_span and not spans(group, entries):
        raise ValueError(f"entries {entries} do not generate the group")
    if flavor != "Mminus":
        return Symbol(sorted(entries), flavor), 1
    ent, parity, selfneg = _canonical_minus_raw(group, entries)
    if selfneg:
        return Symbol(ent, flavor, sign=0), 0
    return Symbol(ent, flavor, sign=1), parity


class SymbolIndex:
    """Deterministically ordered basis of canonical symbols.

    Enumeration is in lexicographic order of the sorted entry tuples,
    so column indices are reproducible for a fixed (group, n, flavor).
    For flavor "Mminus", self-negating symbols are dropped by default
    (they are 2-torsion, hence vanish over Q and odd characteristic);
    pass keep_self_negating=True to retain them as basis columns for
    mod-2 computations.  `self_negating_count` records how many such
    classes exist either way.
    """

    __slots__ = ("group", "n", "flavor", "symbols", "lookup", "_pos",
                 "keep_self_negating", "self_negating_count")

    def __init__(self, group, n, flavor, symbols, keep_self_negating,
                 self_negating_count):
        self.group = group
        self.n = n
        self.flavor = flavor
        self.symbols = symbols
        self.keep_self_negating = keep_self_negating
        self.self_negating_count = self_negating_count
        self.lookup = {s: i for i, s in enumerate(symbols)}
        self._pos = {s.entries: i for i, s in enumerate(symbols)}

    def __len__(self):
        return len(self.symbols)

    def __getitem__(self, i):
        return self.symbols[i]

    def __iter__(self):
        return iter(self.symbols)

    def position(self, entries):
        """Column index of a canonical entry tuple (KeyError if absent)."""
        return self._pos[entries]

    def position_of(self, symbol):
        return self.lookup[symbol]

    def to_text(self):
        """One symbol per line; entries separated by ';', residues by ','."""
        G = self.group
        lines = []
        for s in self.symbols:
            lines.append(";".join(
                ",".join(str(r) for r in G.residues(e)) for e in s.entries))
        return "\n".join(lines) + ("\n" if lines else "")

    @staticmethod
    def parse_symbols(group, text, flavor="M"):
        """Inverse of `to_text`: list of canonical entry tuples."""
        out = []
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            entries = tuple(group.element([int(r) for r in part.split(",")])
                            for part in line.split(";"))
            out.append(entries)
        return out


def enumerate_symbols(group, n, flavor, keep_self_negating=False):
    """All canonical symbols for (group, n, flavor), deterministically ordered.

    Multisets of size n whose entries generate the group; for "Mminus",
    orbit representatives under per-entry negation, with self-negating
    classes dropped unless `keep_self_negating`.
    """
    if flavor not in FLAVORS:
        raise ValueError(f"unknown flavor {flavor!r}")
    if n < 1:
        raise ValueError("n must be >= 1")
    symbols = []
    selfneg_count = 0
    minus = flavor == "Mminus"
    if group.is_cyclic:
        N = group.order
        for ent in combinations_with_replacement(range(N), n):
            g = N
            for e in ent:
                g = math.gcd(g, e)
            if g != 1:
                continue
            if minus:
                ok = True
                twotor = False
                for e in ent:
                    f = (-e) % N
                    if f < e:
                        ok = False
                        break
                    if f == e:
                        twotor = True
                if not ok:
                    continue
                if twotor:
                    selfneg_count += 1
                    if not keep_self_negating:
                        continue
                    symbols.append(Symbol(ent, flavor, sign=0))
                    continue
            symbols.append(Symbol(ent, flavor, sign=1))
    else:
        for ent in combinations_with_replacement(range(group.order), n):
            if not spans(group, ent):
                continue
            if minus:
                canon, parity, selfneg = _canonical_minus_raw(group, ent)
                if canon != ent:
                    continue
                if selfneg:
                    selfneg_count += 1
                    if not keep_self_negating:
                        continue
                    symbols.append(Symbol(ent, flavor, sign=0))
                    continue
            symbols.append(Symbol(ent, flavor, sign=1))
    return SymbolIndex(group, n, flavor, symbols,
                       keep_self_negating, selfneg_count)

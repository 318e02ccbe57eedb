"""Sparse presentations of the symbol groups.

For a group G and arity n, the symbol space is free on the canonical
symbols (see `birsym.groups`); the relation matrix has one row per
instance of the defining relation, with columns indexed by symbols.

An instance is determined by a designation: a canonical symbol split
into an "a-block" (a sub-multiset of size k, 2 <= k <= n) and the rest.
Writing the a-block as values v with multiplicities, the row equates the
symbol with a sum of pivoted terms, one term per distinct value v:

- flavor "B":     coefficient 1 per distinct v, term replaces the other
                  a-entries a by a - v and keeps v in place,
- flavor "M":     same term, coefficient = multiplicity of v,
- flavor "Mstar": term replaces one occurrence of v by the sum of the
                  whole a-block, coefficient = multiplicity of v.

Flavor "Mminus" uses the "M" rows rewritten through the signed
canonicalization, together with the antisymmetry identification; when
self-negating symbols are kept as columns (mod-2 work) their doubling
rows are appended.

Rows are sign-normalized (first nonzero coefficient positive) and
deduplicated, which does not change the row span.
"""

from __future__ import annotations

import math
from itertools import combinations, combinations_with_replacement

from .groups import (FLAVORS, _as_index, _canonical_minus_raw,
                     enumerate_symbols, spans)
from .linalg import SparseMatrix
from .sms import SmsSpillWriter


class SymbolVector:
    """Sparse integer vector over a SymbolIndex."""

    __slots__ = ("index", "coeffs")

    def __init__(self, index, coeffs=None):
        self.index = index
        self.coeffs = {}
        if coeffs:
            for c, v in coeffs.items():
                if v:
                    if not 0 <= c < len(index):
                        raise IndexError(f"column {c} out of range")
                    self.coeffs[c] = v

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return isinstance(other, SymbolVector) and self.coeffs == other.coeffs

    def items(self):
        return self.coeffs.items()

    def scaled(self, k):
        return SymbolVector(self.index,
                            {c: k * v for c, v in self.coeffs.items()})

    def __add__(self, other):
        out = dict(self.coeffs)
        for c, v in other.coeffs.items():
            nv = out.get(c, 0) + v
            if nv:
                out[c] = nv
            else:
                del out[c]
        return SymbolVector(self.index, out)

    def __sub__(self, other):
        return self + other.scaled(-1)

    def __repr__(self):
        return f"SymbolVector({self.coeffs})"


class RelationSystem:
    """Relation matrix presenting a symbol group over its SymbolIndex."""

    __slots__ = ("index", "matrix", "flavor", "kset", "sms_path")

    def __init__(self, index, matrix, flavor, kset, sms_path=None):
        self.index = index
        self.matrix = matrix
        self.flavor = flavor
        self.kset = frozenset(kset)
        self.sms_path = sms_path

    @property
    def group(self):
        return self.index.group

    @property
    def n(self):
        return self.index.n

    def __repr__(self):
        return (f"RelationSystem({self.flavor}, n={self.n}, "
                f"group={self.group!r}, k={sorted(self.kset)}, "
                f"{self.matrix if self.matrix is not None else self.sms_path})")


def _iter_span_multisets(group, n):
    """All size-n multisets of elements generating the group, lex order."""
    if group.is_cyclic:
        N = group.order
        for ent in combinations_with_replacement(range(N), n):
            g = N
            for e in ent:
                g = math.gcd(g, e)
                if g == 1:
                    break
            if g == 1:
                yield ent
    else:
        for ent in combinations_with_replacement(range(group.order), n):
            if spans(group, ent):
                yield ent


def _designations(entries, kset):
    """Distinct (a-block, rest) splits with a-block size in kset."""
    n = len(entries)
    for k in sorted(kset):
        if not 2 <= k <= n:
            continue
        seen = set()
        for pos in combinations(range(n), k):
            sub = tuple(entries[i] for i in pos)
            if sub in seen:
                continue
            seen.add(sub)
            posset = set(pos)
            rest = tuple(entries[i] for i in range(n) if i not in posset)
            yield sub, rest


def _relation_terms(group, ablock, rest, flavor):
    """RHS terms of one relation instance: list of (entry tuple, coeff)."""
    sub = group.sub
    terms = []
    seen_vals = set()
    if flavor == "Mstar":
        s = 0
        for a in ablock:
            s = group.add(s, a)
    for i, v in enumerate(ablock):
        if v in seen_vals:
            continue
        seen_vals.add(v)
        mult = ablock.count(v)
        if flavor == "Mstar":
            ent = ablock[:i] + (s,) + ablock[i + 1:] + rest
        else:
            ent = tuple(sub(a, v) for a in ablock[:i]) + (v,) + \
                tuple(sub(a, v) for a in ablock[i + 1:]) + rest
        coeff = 1 if flavor == "B" else mult
        terms.append((tuple(sorted(ent)), coeff))
    return terms


def build_relations(G, n, flavor, kset=None, *, keep_self_negating=False,
                    spill_path=None, spill_threshold=None):
    """Build the relation system for (G, n, flavor).

    `kset` selects which block sizes k contribute (default: all of
    2..n); partial systems are obtained by passing a subset.  n = 1
    yields the free module (zero rows).  For flavor "Mminus",
    `keep_self_negating` retains self-negating symbols as columns and
    appends their doubling rows (use for mod-2 ranks).

    With `spill_path` set, rows exceeding `spill_threshold` are
    streamed to disk in SMS format instead of being accumulated (and
    deduplication is skipped for the spilled stream); the returned
    system then carries `sms_path` and no in-memory matrix.
    """
    if flavor not in FLAVORS:
        raise ValueError(f"unknown flavor {flavor!r}")
    if kset is None:
        kset = range(2, n + 1)
    kset = sorted(set(kset))
    if any(k < 2 or k > n for k in kset):
        raise ValueError(f"kset {kset} outside [2, {n}]")
    if not kset and n >= 2:
        raise ValueError("kset must be nonempty")
    index = enumerate_symbols(G, n, flavor,
                              keep_self_negating=keep_self_negating)
    minus = flavor == "Mminus"
    pos = index._pos
    rows = []
    seen = set()
    writer = None
    nrows_spilled = 0

    def emit(row):
        nonlocal writer, nrows_spilled
        if not row:
            return
        items = sorted(row.items())
        if items[0][1] < 0:
            items = [(c, -v) for c, v in items]
        if writer is not None:
            writer.write_row(items)
            nrows_spilled += 1
            return
        key = bytes(str(items), "ascii")
        if key in seen:
            return
        seen.add(key)
        rows.append(items)
        if spill_path is not None and spill_threshold is not None \
                and len(rows) > spill_threshold:
            writer = SmsSpillWriter(spill_path)
            for r in rows:
                writer.write_row(r)
            nrows_spilled = len(rows)
            rows.clear()
            seen.clear()

    if minus:
        lhs_iter = _iter_span_multisets(G, n)
    else:
        lhs_iter = (s.entries for s in index.symbols)

    for entries in lhs_iter:
        for ablock, rest in _designations(entries, kset):
            row = {}
            if minus:
                ent, sgn, selfneg = _canonical_minus_raw(G, entries)
                if not selfneg:
                    row[pos[ent]] = sgn
                elif keep_self_negating:
                    row[pos[ent]] = sgn
                for ent0, coeff in _relation_terms(G, ablock, rest, "M"):
                    ent, sgn, selfneg = _canonical_minus_raw(G, ent0)
                    if selfneg and not keep_self_negating:
                        continue
                    c = pos[ent]
                    nv = row.get(c, 0) - coeff * sgn
                    if nv:
                        row[c] = nv
                    else:
                        del row[c]
            else:
                row[pos[entries]] = 1
                for ent, coeff in _relation_terms(G, ablock, rest, flavor):
                    c = pos[ent]
                    nv = row.get(c, 0) - coeff
                    if nv:
                        row[c] = nv
                    else:
                        del row[c]
            emit(row)

    if minus and keep_self_negating:
        for i, s in enumerate(index.symbols):
            if s.sign == 0:
                emit({i: 2})

    if writer is not None:
        path = writer.finalize(len(index))
        return RelationSystem(index, None, flavor, kset, sms_path=path)
    matrix = SparseMatrix.from_rows(rows, len(index))
    return RelationSystem(index, matrix, flavor, kset)


_relation_cache = {}


def build_relations_cached(G, n, flavor, kset=None, *,
                           keep_self_negating=False):
    """Memoized build_relations for repeated small systems."""
    key = (G.moduli, n, flavor,
           tuple(sorted(kset)) if kset is not None else None,
           keep_self_negating)
    if key not in _relation_cache:
        _relation_cache[key] = build_relations(
            G, n, flavor, kset, keep_self_negating=keep_self_negating)
    return _relation_cache[key]


def combination(index, terms):
    """SymbolVector for a signed combination of raw (tuple, coeff) terms.

    Each tuple is canonicalized for the index's flavor; for "Mminus"
    the canonical sign multiplies the coefficient, and terms in
    self-negating classes contribute nothing unless the index keeps
    them as columns.  Raises ValueError if some tuple does not generate
    the group.
    """
    G = index.group
    out = {}
    for entries, coeff in terms:
        ent = tuple(_as_index(G, e) for e in entries)
        if not spans(G, ent):
            raise ValueError(f"entries {entries} do not generate the group")
        if index.flavor == "Mminus":
            ent, sgn, selfneg = _canonical_minus_raw(G, ent)
            if selfneg and not index.keep_self_negating:
                continue
            c = coeff * sgn
        else:
            ent = tuple(sorted(ent))
            c = coeff
        col = index._pos[ent]
        nv = out.get(col, 0) + c
        if nv:
            out[col] = nv
        else:
            del out[col]
    return SymbolVector(index, out)

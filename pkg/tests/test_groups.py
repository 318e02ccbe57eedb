import random

import pytest

from birsym.groups import (AbelianGroup, Symbol, SymbolIndex, canonicalize,
                           enumerate_symbols, spans)

from oracles import (count_spanning_multisets, minus_canonical_bruteforce,
                     spans_bruteforce)


def test_group_arithmetic_and_residues():
    G = AbelianGroup([2, 4])
    x = G.element((1, 3))
    assert G.residues(x) == (1, 3)
    assert G.residues(G.add(x, G.element((1, 2)))) == (0, 1)
    assert G.residues(G.neg(x)) == (1, 1)
    assert G.residues(G.scale(3, x)) == (1, 1)
    assert G.order == 8
    with pytest.raises(ValueError):
        G.element((1,))


def test_phi_cyclic_only():
    assert AbelianGroup(12).phi == 4
    with pytest.raises(ValueError):
        AbelianGroup([2, 2]).phi


def test_spans_gcd_identities():
    assert spans(AbelianGroup(6), [2, 3])
    assert not spans(AbelianGroup(12), [4, 6])
    G22 = AbelianGroup([2, 2])
    assert spans(G22, [(1, 0), (0, 1)])
    assert not spans(G22, [(1, 1)])


def test_spans_matches_closure_oracle():
    rng = random.Random(11)
    groups = [AbelianGroup(m) for m in (1, 2, 6, 9, 16, 25)]
    groups += [AbelianGroup(m) for m in ([2, 2], [2, 4], [3, 3], [2, 2, 4],
                                         [4, 8])]
    for G in groups:
        assert G.order <= 64
        for _ in range(25):
            k = rng.randint(1, 3)
            elems = [rng.randrange(G.order) for _ in range(k)]
            assert spans(G, elems) == spans_bruteforce(G, elems)


def test_canonicalize_sorting_flavors():
    G = AbelianGroup(5)
    sym, c = canonicalize(G, (4, 1), "M")
    assert sym.entries == (1, 4) and c == 1
    for flavor in ("B", "M", "Mstar"):
        sym2, c2 = canonicalize(G, sym.entries, flavor)
        assert sym2.entries == sym.entries and c2 == 1


def test_canonicalize_minus_examples():
    # frozen from the exhaustive flip/permutation oracle
    G = AbelianGroup(5)
    assert minus_canonical_bruteforce(G, (1, 4)) == ((1, 1), -1)
    sym, c = canonicalize(G, (1, 4), "Mminus")
    assert (sym.entries, c) == ((1, 1), -1)
    # a single entry over Z/2 is its own negative: the class is 2-torsion
    G2 = AbelianGroup(2)
    sym, c = canonicalize(G2, (1,), "Mminus")
    assert c == 0 and sym.sign == 0


def test_canonicalize_minus_matches_orbit_oracle():
    rng = random.Random(5)
    for N in (2, 3, 5, 8, 12):
        G = AbelianGroup(N)
        for _ in range(60):
            n = rng.randint(1, 4)
            ent = tuple(rng.randrange(N) for _ in range(n))
            if not spans(G, ent):
                continue
            rep, coeff = minus_canonical_bruteforce(G, ent)
            sym, c = canonicalize(G, ent, "Mminus")
            assert sym.entries == rep
            assert c == coeff


def test_canonicalize_minus_flip_property():
    # negating the first entry flips the coefficient (when nonzero)
    rng = random.Random(17)
    G = AbelianGroup(9)
    for _ in range(80):
        ent = tuple(rng.randrange(9) for _ in range(3))
        if not spans(G, ent):
            continue
        sym, c = canonicalize(G, ent, "Mminus")
        flipped = (G.neg(ent[0]),) + ent[1:]
        sym2, c2 = canonicalize(G, flipped, "Mminus")
        assert sym2 == sym
        assert c2 == -c


def test_canonicalize_idempotent():
    rng = random.Random(23)
    for N in (5, 7, 12):
        G = AbelianGroup(N)
        for flavor in ("B", "M", "Mstar", "Mminus"):
            ix = enumerate_symbols(G, 2, flavor)
            for s in ix.symbols:
                sym, c = canonicalize(G, s.entries, flavor)
                assert sym.entries == s.entries
                assert c == 1


def test_canonicalize_rejects_nonspanning():
    with pytest.raises(ValueError):
        canonicalize(AbelianGroup(12), (4, 6), "M")


def test_enumeration_counts_vs_bruteforce():
    for N in range(1, 13):
        for n in range(1, 5):
            if N ** n > 40000:
                continue
            ix = enumerate_symbols(AbelianGroup(N), n, "M")
            assert len(ix) == count_spanning_multisets(N, n)


def test_enumeration_examples():
    assert len(enumerate_symbols(AbelianGroup(5), 2, "M")) == 14
    assert len(enumerate_symbols(AbelianGroup(1), 1, "M")) == 1
    assert len(enumerate_symbols(AbelianGroup([2, 4]), 1, "M")) == 0


def test_enumeration_is_deterministic_and_lexicographic():
    ix = enumerate_symbols(AbelianGroup(7), 3, "B")
    ents = [s.entries for s in ix.symbols]
    assert ents == sorted(ents)
    ix2 = enumerate_symbols(AbelianGroup(7), 3, "B")
    assert [s.entries for s in ix2.symbols] == ents
    assert all(ix.position_of(s) == i for i, s in enumerate(ix.symbols))


def test_minus_enumeration_drops_and_keeps_self_negating():
    G = AbelianGroup(2)
    dropped = enumerate_symbols(G, 1, "Mminus")
    assert len(dropped) == 0 and dropped.self_negating_count == 1
    kept = enumerate_symbols(G, 1, "Mminus", keep_self_negating=True)
    assert len(kept) == 1 and kept.symbols[0].sign == 0
    # phi(N)/2 classes in arity 1 for N >= 3
    for N in (3, 5, 9, 12):
        ix = enumerate_symbols(AbelianGroup(N), 1, "Mminus")
        assert len(ix) == AbelianGroup(N).phi // 2


def test_symbol_text_roundtrip():
    G = AbelianGroup([2, 4])
    ix = enumerate_symbols(G, 2, "M")
    text = ix.to_text()
    parsed = SymbolIndex.parse_symbols(G, text)
    assert parsed == [s.entries for s in ix.symbols]
    ix5 = enumerate_symbols(AbelianGroup(5), 2, "M")
    assert ix5.to_text().splitlines()[ix5.position((1, 4))] == "1;4"


def test_symbol_equality_and_hash():
    a = Symbol((1, 2), "M")
    b = Symbol((1, 2), "M")
    assert a == b and hash(a) == hash(b)
    assert a != Symbol((1, 2), "B")

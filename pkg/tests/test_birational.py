import random

import pytest

from birsym.birational import (BlowupSpec, FixedLocusData, beta_class,
                               beta_class_by_label, blowup_delta,
                               certify_invariance, random_blowup_spec)
from birsym.groups import AbelianGroup
from birsym.linalg import in_rowspan_Z, integer_row_span
from birsym.relations import build_relations, combination


def test_beta_class_plane_rotation():
    # order-3 rotation of the plane with weights (0, 1, 2): three fixed
    # points whose tangent characters are the pairwise weight differences
    G = AbelianGroup(3)
    R = build_relations(G, 2, "B")
    data = FixedLocusData(G, 2).add((1, 2)).add((2, 1)).add((1, 2))
    vec = beta_class(data, R.index)
    assert vec.coeffs == {R.index.position((1, 2)): 3}


def test_beta_class_edge_cases():
    G = AbelianGroup(2)
    R = build_relations(G, 2, "B")
    assert beta_class(FixedLocusData(G, 2), R.index).coeffs == {}
    one = FixedLocusData(G, 2).add((0, 1))
    assert beta_class(one, R.index).coeffs == {R.index.position((0, 1)): 1}
    with pytest.raises(ValueError):
        FixedLocusData(AbelianGroup(4), 2).add((0, 2))
    with pytest.raises(ValueError):
        FixedLocusData(G, 2).add((1,))


def test_beta_permutation_invariance():
    G = AbelianGroup(5)
    R = build_relations(G, 3, "B")
    a = FixedLocusData(G, 3).add((1, 2, 3)).add((0, 1, 4))
    b = FixedLocusData(G, 3).add((4, 1, 0)).add((3, 1, 2))
    assert beta_class(a, R.index) == beta_class(b, R.index)


def test_beta_labels():
    G = AbelianGroup(3)
    R = build_relations(G, 2, "B")
    data = FixedLocusData(G, 2).add((1, 2), label="P").add((1, 2))
    by_label = beta_class_by_label(data, R.index)
    assert set(by_label) == {"P", None}
    assert by_label["P"].coeffs == {R.index.position((1, 2)): 1}


def test_fixed_locus_text_roundtrip():
    G = AbelianGroup([2, 4])
    data = FixedLocusData(G, 2).add(((1, 0), (0, 1)), label="Q")
    text = data.to_text()
    back = FixedLocusData.from_text(G, 2, text)
    assert back.components == data.components
    cyc = FixedLocusData.from_text(AbelianGroup(5), 2, "1,2\nP : 0,1\n")
    assert cyc.components == [(None, (1, 2)), ("P", (0, 1))]


def test_point_blowup_delta_matches_relation_consequence():
    # blowing up a plane fixed point: display form [1,1]+[2,2]-[1,2];
    # applying the doubled-entry rewrite gives [1,0]+[2,0]-[1,2], and
    # the two presentations differ by relation rows
    G = AbelianGroup(3)
    R = build_relations(G, 2, "B")
    spec = BlowupSpec(G, "I", 0, 0, 0, 2, (), (1, 2), (1, 1))
    delta = blowup_delta(spec, R.index)
    display = combination(R.index, [((1, 1), 1), ((2, 2), 1), ((1, 2), -1)])
    assert delta.coeffs == display.coeffs
    simplified = combination(R.index,
                             [((1, 0), 1), ((2, 0), 1), ((1, 2), -1)])
    assert in_rowspan_Z(R.matrix, (delta - simplified).coeffs)
    assert certify_invariance(spec, R)
    assert certify_invariance(spec, R, exact=True)


def test_case_three_contributes_nothing():
    G = AbelianGroup(5)
    R = build_relations(G, 4, "B")
    spec = BlowupSpec(G, "III", 2, 1, 1, 0, (1,), (), ())
    assert blowup_delta(spec, R.index).coeffs == {}
    assert certify_invariance(spec, R)


def test_case_two_single_symbol_vanishes():
    # one new component with a leading negated block; its class is a
    # relation consequence, certifying that nothing was added
    G = AbelianGroup(7)
    R = build_relations(G, 3, "B")
    spec = BlowupSpec(G, "II", 1, 0, 1, 1, (3,), (2,), (1,))
    delta = blowup_delta(spec, R.index)
    expected = combination(R.index, [((7 - 2, 2, 3), 1)])
    assert delta.coeffs == expected.coeffs
    assert certify_invariance(spec, R, exact=True)


def test_blowup_spec_validation():
    G = AbelianGroup(5)
    with pytest.raises(ValueError):
        BlowupSpec(G, "I", 1, 0, 0, 2, (), (1, 2), (1, 1))   # d1 must be 0
    with pytest.raises(ValueError):
        BlowupSpec(G, "I", 0, 0, 0, 1, (), (1,), (1,))       # d4 >= 2
    with pytest.raises(ValueError):
        BlowupSpec(G, "II", 1, 0, 0, 2, (), (1, 1), (1, 1))  # repeated a
    with pytest.raises(ValueError):
        BlowupSpec(G, "III", 1, 0, 1, 0, (1,), (), ())       # d1 >= 2
    with pytest.raises(ValueError):
        BlowupSpec(AbelianGroup(4), "I", 0, 0, 0, 2, (), (2,), (2,))  # span


def test_randomized_invariance_all_cases():
    rng = random.Random(20240811)
    for case in ("I", "II", "III"):
        for moduli, n in [(5, 3), (9, 4), (8, 2), ([2, 2], 2), (7, 4)]:
            G = AbelianGroup(moduli)
            if case == "III" and n < 3:
                continue
            if not G.is_cyclic and case in ("I", "II") and G.order < 4:
                continue
            R = build_relations(G, n, "B")
            span = integer_row_span(R.matrix)
            for _ in range(12):
                try:
                    spec = random_blowup_spec(rng, G, n, case)
                except (ValueError, RuntimeError):
                    continue
                delta = blowup_delta(spec, R.index)
                assert span.contains(delta.coeffs), (case, spec)


def test_certify_rejects_incompatible_inputs():
    G = AbelianGroup(5)
    R = build_relations(G, 3, "B")
    spec = BlowupSpec(AbelianGroup(7), "I", 0, 0, 1, 2, (1,), (2,), (2,))
    with pytest.raises(ValueError):
        certify_invariance(spec, R)
    data = FixedLocusData(G, 2).add((1, 1))
    good = BlowupSpec(G, "I", 0, 0, 1, 2, (1,), (2,), (2,))
    with pytest.raises(ValueError):
        certify_invariance(good, R, data=data)

"""Square-tiled surfaces: parsing, invariants, moves, enumeration, cylinders."""

import pytest

from flatkit import flatcore, origami
from flatkit.origami import make

from conftest import make_rng


def test_make_accepts_cycles_and_lists():
    a = make(5, "(1,2,3,4)", "(1,5)")
    b = make(5, [2, 3, 4, 1, 5], [5, 2, 3, 4, 1])
    assert a == b
    assert a.h == (1, 2, 3, 0, 4)
    assert a.v == (4, 1, 2, 3, 0)


def test_make_rejects_bad_input():
    with pytest.raises(ValueError, match="not connected"):
        make(2, "", "")
    with pytest.raises(ValueError):
        make(3, "(1,2,2)", "")
    with pytest.raises(ValueError):
        make(3, "(1,4)", "")
    with pytest.raises(ValueError):
        make(3, [1, 1, 2], [1, 2, 3])


def test_parse_cycles_and_format():
    p = origami.parse_cycles("(1,2)(4,5)", 5)
    assert p == (1, 0, 2, 4, 3)
    assert origami.format_cycles(p) == "(1,2)(4,5)"
    assert origami.parse_cycles("", 3) == (0, 1, 2)
    assert origami.format_cycles((0, 1, 2)) == "()"
    assert origami.cycles_of((1, 0, 2)) == [[0, 1], [2]]
    with pytest.raises(ValueError):
        origami.parse_cycles("(1,2", 3)


def test_invert_perm():
    assert origami.invert_perm((1, 2, 0)) == (2, 0, 1)
    assert origami.invert_perm(()) == ()


def test_text_roundtrip(l5, l3):
    for o in (l5, l3):
        back = origami.parse_origami_text(origami.origami_to_text(o))
        assert back == o


def test_parse_origami_text_errors():
    with pytest.raises(ValueError, match="line 1"):
        origami.parse_origami_text("h: (1,2)\nd: 2\nv: ()")
    with pytest.raises(ValueError, match="d:"):
        origami.parse_origami_text("")
    with pytest.raises(ValueError):
        origami.parse_origami_text("d: 3\nh: (1,2)\nh: (1,3)\nv: ()")
    with pytest.raises(ValueError):
        origami.parse_origami_text("d: 3\nh: (1,2)")


def test_parse_origami_text_comments():
    o = origami.parse_origami_text("# a comment\nd: 3\n\nh: (1,2)\nv: (1,3)  # trailing\n")
    assert o == make(3, "(1,2)", "(1,3)")


def test_commutator_and_orders(l5, l3, torus_origami):
    assert sorted(map(len, origami.cycles_of(origami.commutator(l5)))) == [1, 1, 3]
    sig = origami.singularity_orders(l5)
    assert (sig.genus, sig.orders) == (2, (2,))
    assert origami.genus(l5) == 2
    assert origami.singularity_orders(l3).orders == (2,)
    assert origami.singularity_orders(torus_origami).orders == ()
    assert origami.genus(torus_origami) == 1


def test_to_polygons_matches_permutation_route(l5, l3, torus_origami):
    for o in (l5, l3, torus_origami):
        surf = origami.to_polygons(o)
        assert flatcore.validate(surf).ok
        assert flatcore.is_integral(surf)
        sig = flatcore.stratum(surf)
        assert sig == origami.singularity_orders(o)
        assert len(surf.polygons) == o.d


def test_oracle_agreement_random(rng):
    for _ in range(25):
        d = rng.randint(1, 10)
        o = origami.random_origami(d, rng)
        assert origami.singularity_orders(o) == flatcore.stratum(origami.to_polygons(o))


def test_random_origami_is_deterministic():
    a = origami.random_origami(7, make_rng(salt=5))
    b = origami.random_origami(7, make_rng(salt=5))
    assert a == b
    assert origami.is_connected(a)
    assert a.d == 7


def test_canonical_form_is_conjugation_invariant(l5, rng):
    base = origami.canonical_form(l5)
    d = l5.d
    for _ in range(50):
        sigma = list(range(d))
        rng.shuffle(sigma)
        relabeled = origami.relabel(l5, sigma)
        assert origami.canonical_form(relabeled) == base
        assert origami.is_isomorphic(relabeled, l5)


def test_canonical_form_roundtrip(l5, l3):
    for o in (l5, l3):
        code = origami.canonical_form(o)
        back = origami.decode_canonical(code)
        assert origami.is_isomorphic(back, o)
        assert origami.canonical_form(back) == code


def test_is_isomorphic_negative(l5):
    other = make(5, "(1,2,3,4,5)", "(1,2)")
    assert not origami.is_isomorphic(l5, other)


def test_moves(l5):
    sheared = origami.act_T(l5)
    assert sheared.h == l5.h
    assert sheared.v == origami.parse_cycles("(1,5,4,3,2)", 5)
    assert origami.act_T_inverse(origami.act_T(l5)) == l5
    assert origami.act_T(origami.act_T_inverse(l5)) == l5
    s4 = l5
    for _ in range(4):
        s4 = origami.act_S(s4)
    assert s4 == l5


def test_moves_preserve_stratum(l5, rng):
    o = origami.random_origami(6, rng)
    sig = origami.singularity_orders(o)
    for move in (origami.act_T, origami.act_T_inverse, origami.act_S):
        assert origami.singularity_orders(move(o)) == sig


def test_orbit_l3(l3):
    data = origami.orbit(l3)
    assert len(data.elements) == 3
    assert sorted(data.cusp_widths) == [1, 2]
    assert sum(data.cusp_widths) == len(data.elements)
    # closed under the generating moves
    elements = set(data.elements)
    for code in data.elements:
        o = origami.decode_canonical(code)
        for move in (origami.act_T, origami.act_T_inverse, origami.act_S):
            assert origami.canonical_form(move(o)) in elements


def test_orbit_start_independence(l3):
    data = origami.orbit(l3)
    for code in data.elements:
        other = origami.orbit(origami.decode_canonical(code))
        assert other.elements == data.elements
        assert sorted(other.cusp_widths) == sorted(data.cusp_widths)


def test_orbit_budget(l5):
    with pytest.raises(RuntimeError, match="budget exceeded"):
        origami.orbit(l5, max_elements=2)


def test_cylinders(l5, l3, torus_origami):
    def shape(o):
        dec = origami.cylinders(o)
        return sorted((c.width, c.height) for c in dec.cylinders)

    assert shape(l5) == [(1, 1), (4, 1)]
    assert shape(l3) == [(1, 1), (2, 1)]
    assert shape(torus_origami) == [(1, 1)]
    for o in (l5, l3, torus_origami):
        dec = origami.cylinders(o)
        assert sum(c.width * c.height for c in dec.cylinders) == o.d


def test_cylinders_total_area_random(rng):
    for _ in range(10):
        o = origami.random_origami(rng.randint(2, 9), rng)
        dec = origami.cylinders(o)
        assert sum(c.width * c.height for c in dec.cylinders) == o.d
        assert all(c.width >= 1 and c.height >= 1 for c in dec.cylinders)


FROZEN_CLASS_COUNTS = {
    ((2,), 3): 3,
    ((2,), 4): 9,
    ((2,), 5): 27,
    ((2,), 6): 45,
    ((1, 1), 4): 10,
    ((1, 1), 5): 24,
    ((1, 1), 6): 88,
    ((4,), 5): 40,
    ((4,), 6): 225,
    ((3, 1), 6): 128,
}


@pytest.mark.parametrize("orders,d", sorted(FROZEN_CLASS_COUNTS))
def test_enumeration_class_counts(orders, d):
    classes = list(origami.origamis_in_stratum(d, orders))
    assert len(classes) == FROZEN_CLASS_COUNTS[(orders, d)]
    codes = {origami.canonical_form(o) for o in classes}
    assert len(codes) == len(classes)
    for o in classes[:10]:
        assert o.d == d
        assert origami.is_connected(o)
        assert origami.singularity_orders(o).orders == tuple(orders)


def test_enumeration_empty_when_impossible():
    assert list(origami.origamis_in_stratum(3, (1, 1))) == []
    assert list(origami.origamis_in_stratum(4, (4,))) == []


def test_stratum_pairs_raw_matches_classes():
    raw = list(origami.stratum_pairs_raw(5, (2,)))
    assert len(raw) == 27
    for h, v in raw[:5]:
        o = origami.Origami(5, h, v)
        assert origami.singularity_orders(o).orders == (2,)

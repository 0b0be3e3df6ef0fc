"""Polygon model: validation, cone points, genus, strata, periods, JSON."""

from fractions import Fraction

import pytest

from flatkit import flatcore
from flatkit.flatcore import PlanarVec

from conftest import DATA, build_2ngon, build_bad_square, build_step_octagon


def test_planar_vec_exact_arithmetic():
    v = PlanarVec("1/3", 2)
    w = PlanarVec(Fraction(2, 3), -1)
    assert v + w == PlanarVec(1, 1)
    assert v - w == PlanarVec(Fraction(-1, 3), 3)
    assert -v == PlanarVec(Fraction(-1, 3), -2)
    assert v.cross(w) == Fraction(1, 3) * (-1) - 2 * Fraction(2, 3)
    assert PlanarVec(3, -4).is_integral
    assert not v.is_integral


def test_octagon_is_valid(octagon):
    report = flatcore.validate(octagon)
    assert report.ok
    assert report.violations == ()


def test_octagon_invariants(octagon):
    points = flatcore.singularities(octagon)
    assert len(points) == 1
    assert points[0].angle_turns == 3
    assert points[0].zero_order == 2
    assert len(points[0].corners) == 8
    assert flatcore.genus(octagon) == 2
    sig = flatcore.stratum(octagon)
    assert (sig.genus, sig.orders) == (2, (2,))
    assert str(sig) == "H(2)"


def test_octagon_periods(octagon):
    data = flatcore.periods(octagon)
    assert data.rank == 4
    assert len(data.pairs) == 4
    assert len(data.vectors) == 4
    # each period is the vector of the first edge of its pair
    for (e1, _), vec in zip(data.pairs, data.vectors):
        assert octagon.edge_vector(e1) == vec


def test_decagon_invariants(decagon):
    points = flatcore.singularities(decagon)
    assert sorted(cp.angle_turns for cp in points) == [2, 2]
    sig = flatcore.stratum(decagon)
    assert (sig.genus, sig.orders) == (2, (1, 1))
    assert str(sig) == "H(1,1)"
    assert flatcore.periods(decagon).rank == 5


def test_merged_octagon_collapses_to_single_cone_point(merged_octagon):
    # one vertex of the decagon removed: the two simple cone points merge
    sig = flatcore.stratum(merged_octagon)
    assert (sig.genus, sig.orders) == (2, (2,))
    assert flatcore.periods(merged_octagon).rank == 4


def test_torus_surface(torus_surface):
    assert flatcore.validate(torus_surface).ok
    points = flatcore.singularities(torus_surface)
    assert len(points) == 1
    assert points[0].angle_turns == 1
    assert points[0].zero_order == 0
    sig = flatcore.stratum(torus_surface)
    assert (sig.genus, sig.orders) == (1, ())
    assert str(sig) == "H()"
    # one marked regular point: rank 2g + 1 - 1 = 2
    assert flatcore.periods(torus_surface).rank == 2


def test_step_octagon_periods_exact():
    surf = build_step_octagon()
    assert flatcore.validate(surf).ok
    sig = flatcore.stratum(surf)
    assert (sig.genus, sig.orders) == (2, (2,))
    data = flatcore.periods(surf)
    assert data.rank == 4
    assert data.vectors == (
        PlanarVec(1, 0),
        PlanarVec(3, 0),
        PlanarVec(0, 1),
        PlanarVec(0, 1),
    )
    assert flatcore.is_integral(surf)


@pytest.mark.parametrize(
    "n,genus,orders",
    [
        (3, 1, ()),
        (4, 2, (2,)),
        (5, 2, (1, 1)),
        (6, 3, (4,)),
        (7, 3, (2, 2)),
        (8, 4, (6,)),
    ],
)
def test_2ngon_family(n, genus, orders):
    surf = build_2ngon(n)
    assert flatcore.validate(surf).ok
    sig = flatcore.stratum(surf)
    assert (sig.genus, sig.orders) == (genus, orders)
    # zero orders sum to 2g - 2 regardless of marked points
    assert sum(cp.zero_order for cp in flatcore.singularities(surf)) == 2 * genus - 2


def test_angle_consistency_across_fixtures(octagon, decagon, torus_surface):
    for surf in (octagon, decagon, torus_surface):
        points = flatcore.singularities(surf)
        total_corners = sum(len(cp.corners) for cp in points)
        assert total_corners == sum(p.n for p in surf.polygons)
        # total turning matches the polygon angle sum
        assert 2 * sum(cp.angle_turns for cp in points) == sum(
            p.n - 2 for p in surf.polygons
        )


def test_period_rank_formula(octagon, decagon, torus_surface):
    for surf in (octagon, decagon, torus_surface):
        g = flatcore.genus(surf)
        marked = max(1, len([cp for cp in flatcore.singularities(surf) if cp.zero_order > 0]))
        assert flatcore.periods(surf).rank == 2 * g + marked - 1


# --- validation failures ----------------------------------------------------


def test_clockwise_polygon_rejected():
    surf = flatcore.surface(
        [[(0, 0), (0, 1), (1, 1), (1, 0)]],
        {(0, 0): (0, 2), (0, 1): (0, 3)},
    )
    report = flatcore.validate(surf)
    assert not report.ok
    assert any("clockwise" in v for v in report.violations)


def test_adjacent_pairing_rejected():
    report = flatcore.validate(build_bad_square())
    assert not report.ok
    assert any("paired edge vectors not opposite" in v for v in report.violations)


def test_unpaired_edge_rejected():
    surf = flatcore.surface(
        [[(0, 0), (1, 0), (1, 1), (0, 1)]],
        {(0, 0): (0, 2)},
    )
    report = flatcore.validate(surf)
    assert any("is unpaired" in v for v in report.violations)


def test_self_paired_edge_rejected():
    surf = flatcore.TranslationSurface(
        (flatcore.polygon([(0, 0), (1, 0), (1, 1), (0, 1)]),),
        {
            flatcore.EdgeRef(0, 0): flatcore.EdgeRef(0, 0),
            flatcore.EdgeRef(0, 1): flatcore.EdgeRef(0, 3),
            flatcore.EdgeRef(0, 3): flatcore.EdgeRef(0, 1),
            flatcore.EdgeRef(0, 2): flatcore.EdgeRef(0, 2),
        },
    )
    report = flatcore.validate(surf)
    assert any("paired with itself" in v for v in report.violations)


def test_disconnected_surface_rejected():
    square = [(0, 0), (1, 0), (1, 1), (0, 1)]
    surf = flatcore.surface(
        [square, [(5, 5), (6, 5), (6, 6), (5, 6)]],
        {(0, 0): (0, 2), (0, 1): (0, 3), (1, 0): (1, 2), (1, 1): (1, 3)},
    )
    report = flatcore.validate(surf)
    assert any("not connected" in v for v in report.violations)


def test_nonsimple_polygon_rejected():
    # bowtie: edges 0 and 2 cross
    surf = flatcore.surface(
        [[(0, 0), (2, 2), (2, 0), (0, 2)]],
        {(0, 0): (0, 2), (0, 1): (0, 3)},
    )
    report = flatcore.validate(surf)
    assert not report.ok
    assert any("intersect" in v or "overlap" in v for v in report.violations)


def test_degenerate_polygon_rejected():
    surf = flatcore.surface([[(0, 0), (1, 0), (2, 0)]], {})
    report = flatcore.validate(surf)
    assert any("degenerate" in v or "zero-length" in v for v in report.violations)


def test_operations_refuse_invalid_input():
    bad = build_bad_square()
    with pytest.raises(ValueError, match="invalid surface"):
        flatcore.singularities(bad)
    with pytest.raises(ValueError, match="invalid surface"):
        flatcore.genus(bad)
    with pytest.raises(ValueError, match="invalid surface"):
        flatcore.periods(bad)


# --- JSON I/O ----------------------------------------------------------------


def test_json_roundtrip(octagon):
    data = flatcore.surface_to_json(octagon)
    back = flatcore.surface_from_json(data)
    assert back.polygons == octagon.polygons
    assert back.pairing == octagon.pairing


def test_json_accepts_fraction_strings():
    surf = flatcore.surface_from_json(
        {
            "polygons": [[["1/2", 0], ["3/2", 0], ["3/2", 1], ["1/2", 1]]],
            "pairings": [[[0, 0], [0, 2]], [[0, 1], [0, 3]]],
        }
    )
    assert surf.polygons[0].vertex(0) == PlanarVec(Fraction(1, 2), 0)
    assert flatcore.validate(surf).ok


def test_json_rejects_bad_pairing():
    base = {
        "polygons": [[[0, 0], [1, 0], [1, 1], [0, 1]]],
        "pairings": [[[0, 0], [0, 2]], [[0, 1], [0, 3]], [[0, 3], [0, 1]]],
    }
    with pytest.raises(ValueError, match="paired twice"):
        flatcore.surface_from_json(base)
    with pytest.raises(ValueError, match="itself"):
        flatcore.surface_from_json(
            {
                "polygons": base["polygons"],
                "pairings": [[[0, 0], [0, 0]], [[0, 1], [0, 3]], [[0, 2], [0, 2]]],
            }
        )
    with pytest.raises(ValueError):
        flatcore.surface_from_json(
            {"polygons": base["polygons"], "pairings": [[[0, 0], [0, 9]]]}
        )


def test_json_rejects_bad_coordinate():
    with pytest.raises(ValueError, match="coordinate"):
        flatcore.surface_from_json(
            {"polygons": [[[0, 0], ["x", 0], [1, 1]]], "pairings": []}
        )


def test_load_dump_roundtrip(tmp_path, decagon):
    path = tmp_path / "surf.json"
    flatcore.dump_surface(decagon, str(path))
    back = flatcore.load_surface(str(path))
    assert back.polygons == decagon.polygons
    assert back.pairing == decagon.pairing


def test_data_files_are_valid():
    for name in ("octagon.json", "decagon.json", "torus.json"):
        surf = flatcore.load_surface(str(DATA / name))
        assert flatcore.validate(surf).ok, name

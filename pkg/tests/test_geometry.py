import math

import pytest

from errors import FormatError, GeometryError
from geometry import (DEF_EMPTY, DEF_PRESENT, ColumnarGeometry, Empty, GeometryCollection, GeometryType,
                      LeveledCoordinate, LineString, MultiLineString, MultiPoint, MultiPolygon, Point, Polygon,
                      RingOrientation, assemble, flatten_collection, from_columnar, mbr, mbr_intersects,
                      normalize, ring_orientation, same_geometry, to_columnar)

SHELL = [(1, 1), (2, 4), (5, 5), (5, 1), (1, 1)]
HOLE = [(3, 2), (4, 2), (4, 3), (3, 2)]
SMALL_CW = [(6, 1), (6, 3), (8, 1), (6, 1)]


def reps(c: ColumnarGeometry):
    return [v.rep_level for v in c.values]


def test_point_maps_to_single_part():
    c = to_columnar(Point(3, 2))
    assert c.type == GeometryType.POINT
    assert c.parts() == [[(3.0, 2.0)]]
    assert reps(c) == [0]


def test_linestring_maps_to_one_part():
    c = to_columnar(LineString([(1, 1), (2, 3), (1, 4)]))
    assert c.type == GeometryType.LINESTRING
    assert c.parts() == [[(1.0, 1.0), (2.0, 3.0), (1.0, 4.0)]]
    assert reps(c) == [0, 2, 2]


def test_polygon_with_hole_levels():
    c = to_columnar(Polygon([SHELL, HOLE]))
    assert c.type == GeometryType.POLYGON
    assert len(c.parts()) == 2
    assert reps(c) == [0, 2, 2, 2, 2, 1, 2, 2, 2]
    assert all(v.def_level == DEF_PRESENT for v in c.values)


def test_multipoint_parts():
    c = to_columnar(MultiPoint([(1, 3), (2, 4), (4, 3)]))
    assert c.type == GeometryType.MULTIPOINT
    assert reps(c) == [0, 1, 1]


def test_empty_has_no_values_and_one_undefined_level():
    c = to_columnar(Empty("Polygon"))
    assert c.type == GeometryType.EMPTY
    assert c.values == ()
    assert c.levels() == [(0, DEF_EMPTY)]


def test_orientation_is_normalized_on_write():
    ccw_shell = list(reversed(SHELL))
    cw_hole = list(reversed(HOLE))
    parts = to_columnar(Polygon([ccw_shell, cw_hole])).parts()
    assert ring_orientation(parts[0]) is RingOrientation.CW
    assert ring_orientation(parts[1]) is RingOrientation.CCW


@pytest.mark.parametrize("ring,expected", [
    (SHELL, RingOrientation.CW),
    ([(0, 0), (1, 0), (1, 1), (0, 1), (0, 0)], RingOrientation.CCW),
    ([(0, 0), (1, 1), (2, 2), (0, 0)], RingOrientation.DEGENERATE),
])
def test_ring_orientation(ring, expected):
    assert ring_orientation(ring) is expected


def test_reversing_a_ring_flips_orientation():
    assert ring_orientation(list(reversed(SHELL))) is RingOrientation.CCW
    degenerate = [(0, 0), (1, 1), (2, 2), (0, 0)]
    assert ring_orientation(list(reversed(degenerate))) is RingOrientation.DEGENERATE


def test_nan_ring_is_degenerate():
    assert ring_orientation([(0, 0), (math.nan, 1), (1, 1), (0, 0)]) is RingOrientation.DEGENERATE


def test_multipolygon_reassembly_by_orientation():
    g = assemble(GeometryType.MULTIPOLYGON, [SHELL, HOLE, SMALL_CW])
    assert isinstance(g, MultiPolygon)
    assert [len(p.holes) for p in g.polygons] == [1, 0]


def test_polygon_reassembly_keeps_hole():
    g = assemble(GeometryType.POLYGON, [SHELL, HOLE])
    assert isinstance(g, Polygon)
    assert len(g.holes) == 1


def test_multipolygon_starting_with_hole_is_rejected():
    with pytest.raises(GeometryError):
        assemble(GeometryType.MULTIPOLYGON, [HOLE, SHELL])


def test_degenerate_ring_in_multipolygon_is_a_hole():
    flat = [(0, 0), (1, 1), (2, 2), (0, 0)]
    g = assemble(GeometryType.MULTIPOLYGON, [SHELL, flat])
    assert len(g.polygons) == 1
    assert len(g.polygons[0].holes) == 1


def test_unknown_type_code_is_a_format_error():
    with pytest.raises(FormatError):
        assemble(7, [[(0, 0)]])


@pytest.mark.parametrize("bad", [
    LineString([(0, 0)]),
    Polygon([[(0, 0), (1, 0), (0, 0)]]),
    Polygon([[(0, 0), (1, 0), (1, 1), (0, 1)]]),
    Polygon([]),
    MultiPoint([]),
    MultiLineString([]),
    MultiPolygon([]),
])
def test_structural_violations_are_rejected(bad):
    with pytest.raises(GeometryError):
        to_columnar(bad)


def test_collection_must_be_flattened_first():
    with pytest.raises(GeometryError):
        to_columnar(GeometryCollection([Point(0, 0)]))


def test_multipolygon_degenerate_shell_is_rejected():
    flat = [(0, 0), (1, 1), (2, 2), (0, 0)]
    with pytest.raises(GeometryError):
        to_columnar(MultiPolygon([Polygon([flat])]))


def test_from_columnar_checks_repetition_grammar():
    bad = ColumnarGeometry(GeometryType.LINESTRING,
                           (LeveledCoordinate((0.0, 0.0), 0), LeveledCoordinate((1.0, 1.0), 0)))
    with pytest.raises(GeometryError):
        from_columnar(bad)


@pytest.mark.parametrize("g", [
    Point(3, 2),
    Point(-0.0, math.inf),
    LineString([(1, 1), (2, 3), (1, 4)]),
    Polygon([SHELL, HOLE]),
    MultiPoint([(1, 3), (2, 4), (4, 3)]),
    MultiLineString([[(0, 0), (1, 1)], [(2, 2), (3, 3), (4, 5)]]),
    MultiPolygon([Polygon([SHELL, HOLE]), Polygon([SMALL_CW])]),
    Empty(),
])
def test_columnar_round_trip(g):
    c = to_columnar(g)
    back = from_columnar(c)
    assert same_geometry(back, normalize(g))
    assert to_columnar(back) == c


def test_value_count_is_conserved():
    g = MultiPolygon([Polygon([SHELL, HOLE]), Polygon([SMALL_CW])])
    assert len(to_columnar(g).values) == len(SHELL) + len(HOLE) + len(SMALL_CW)


def test_flatten_collection_orders_leaves():
    a, b, c = Point(0, 0), LineString([(0, 0), (1, 1)]), Point(2, 2)
    assert flatten_collection(GeometryCollection([a, GeometryCollection([b, c])])) == [a, b, c]
    assert flatten_collection(GeometryCollection([])) == []
    assert flatten_collection(GeometryCollection([GeometryCollection([GeometryCollection([a])])])) == [a]


def test_flatten_collection_depth_limit():
    g = Point(1, 1)
    for _ in range(40):
        g = GeometryCollection([g])
    with pytest.raises(GeometryError):
        flatten_collection(g)


def test_mbr_ignores_nan_and_handles_empty():
    assert mbr(LineString([(1, 5), (math.nan, 7), (3, 2)])) == (1, 2, 3, 7)
    assert mbr(Empty()) is None
    assert mbr(Point(math.nan, math.nan)) is None


def test_mbr_intersects_is_closed():
    assert mbr_intersects((0, 0, 1, 1), (1, 1, 2, 2))
    assert not mbr_intersects((0, 0, 1, 1), (1.5, 0, 2, 1))
    assert not mbr_intersects(None, (0, 0, 1, 1))


def test_same_geometry_distinguishes_signed_zero():
    assert not same_geometry(Point(0.0, 0.0), Point(-0.0, 0.0))
    assert same_geometry(Point(math.nan, 1), Point(math.nan, 1))

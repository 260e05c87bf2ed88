"""
In-memory geometry types and their mapping to the type/part/coordinate
column representation.

A record is a type code plus a stream of coordinates, each tagged with a
repetition level (0 starts the record, 1 starts a new part, 2 continues the
current part) and a definition level (2 for a present coordinate, 0 for the
single placeholder entry of an empty geometry). Polygon shells are written
clockwise and holes counter-clockwise so that MultiPolygons can be split back
into polygons by ring orientation alone.
"""

import math
import struct
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import Iterator, List, NamedTuple, Optional, Sequence, Tuple, Union

from errors import FormatError, GeometryError

Coordinate = Tuple[float, float]
Ring = Tuple[Coordinate, ...]
BBox = Tuple[float, float, float, float]

MAX_COLLECTION_DEPTH = 32

REP_RECORD = 0
REP_PART = 1
REP_CONTINUE = 2
DEF_PRESENT = 2
DEF_EMPTY = 0


class GeometryType(IntEnum):
    EMPTY = 0
    POINT = 1
    LINESTRING = 2
    POLYGON = 3
    MULTIPOINT = 4
    MULTILINESTRING = 5
    MULTIPOLYGON = 6


class RingOrientation(Enum):
    CW = "cw"
    CCW = "ccw"
    DEGENERATE = "degenerate"


def _coord(c) -> Coordinate:
    return (float(c[0]), float(c[1]))


def _coords(seq) -> Tuple[Coordinate, ...]:
    return tuple(_coord(c) for c in seq)


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __post_init__(self):
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))

    @property
    def coord(self) -> Coordinate:
        return (self.x, self.y)


@dataclass(frozen=True)
class LineString:
    coords: Tuple[Coordinate, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", _coords(self.coords))


@dataclass(frozen=True)
class Polygon:
    rings: Tuple[Ring, ...]

    def __post_init__(self):
        object.__setattr__(self, "rings", tuple(_coords(r) for r in self.rings))

    @property
    def shell(self) -> Ring:
        return self.rings[0]

    @property
    def holes(self) -> Tuple[Ring, ...]:
        return self.rings[1:]


@dataclass(frozen=True)
class MultiPoint:
    points: Tuple[Point, ...]

    def __post_init__(self):
        object.__setattr__(self, "points",
                           tuple(p if isinstance(p, Point) else Point(*p) for p in self.points))


@dataclass(frozen=True)
class MultiLineString:
    lines: Tuple[LineString, ...]

    def __post_init__(self):
        object.__setattr__(self, "lines",
                           tuple(l if isinstance(l, LineString) else LineString(l) for l in self.lines))


@dataclass(frozen=True)
class MultiPolygon:
    polygons: Tuple[Polygon, ...]

    def __post_init__(self):
        object.__setattr__(self, "polygons",
                           tuple(p if isinstance(p, Polygon) else Polygon(p) for p in self.polygons))


@dataclass(frozen=True)
class Empty:
    # Original type name, kept for text output only; stored as type 0.
    kind: str = field(default="Point", compare=False)


@dataclass(frozen=True)
class GeometryCollection:
    geometries: Tuple["Geometry", ...]

    def __post_init__(self):
        object.__setattr__(self, "geometries", tuple(self.geometries))


Geometry = Union[Point, LineString, Polygon, MultiPoint, MultiLineString, MultiPolygon, Empty,
                 GeometryCollection]

_TYPE_OF = {
    Empty: GeometryType.EMPTY,
    Point: GeometryType.POINT,
    LineString: GeometryType.LINESTRING,
    Polygon: GeometryType.POLYGON,
    MultiPoint: GeometryType.MULTIPOINT,
    MultiLineString: GeometryType.MULTILINESTRING,
    MultiPolygon: GeometryType.MULTIPOLYGON,
}


class LeveledCoordinate(NamedTuple):
    coord: Coordinate
    rep_level: int
    def_level: int = DEF_PRESENT


@dataclass(frozen=True)
class ColumnarGeometry:
    type: GeometryType
    values: Tuple[LeveledCoordinate, ...] = ()

    def parts(self) -> List[List[Coordinate]]:
        parts: List[List[Coordinate]] = []
        for value in self.values:
            if value.rep_level <= REP_PART or not parts:
                parts.append([])
            parts[-1].append(value.coord)
        return parts

    def levels(self) -> List[Tuple[int, int]]:
        """(rep, def) pairs as stored in the LEVELS column"""
        if not self.values:
            return [(REP_RECORD, DEF_EMPTY)]
        return [(v.rep_level, v.def_level) for v in self.values]


def float_bits(value: float) -> int:
    return struct.unpack('<Q', struct.pack('<d', value))[0]


def coords_equal(a: Coordinate, b: Coordinate) -> bool:
    return float_bits(a[0]) == float_bits(b[0]) and float_bits(a[1]) == float_bits(b[1])


def geometry_type(g: Geometry) -> GeometryType:
    try:
        return _TYPE_OF[type(g)]
    except KeyError:
        raise GeometryError(f"Not a storable geometry: {type(g).__name__}")


def close_ring(coords: Sequence) -> Ring:
    """Append the first coordinate when the ring is not already closed"""
    ring = _coords(coords)
    if ring and not coords_equal(ring[0], ring[-1]):
        ring = ring + (ring[0],)
    return ring


def ring_orientation(ring: Sequence[Coordinate]) -> RingOrientation:
    """Sign of the shoelace sum; positive is counter-clockwise (y axis up)"""
    terms = [ring[i][0] * ring[i + 1][1] - ring[i + 1][0] * ring[i][1] for i in range(len(ring) - 1)]
    if all(math.isfinite(t) for t in terms):
        try:
            area = math.fsum(terms)
        except OverflowError:
            area = sum(terms)
    else:
        area = sum(terms)
    if math.isnan(area) or area == 0:
        return RingOrientation.DEGENERATE
    return RingOrientation.CCW if area > 0 else RingOrientation.CW


def _check_ring(ring: Ring, where: str):
    if len(ring) < 4:
        raise GeometryError(f"{where}: ring needs at least 4 coordinates, got {len(ring)}")
    if not coords_equal(ring[0], ring[-1]):
        raise GeometryError(f"{where}: ring is not closed")


def _oriented(ring: Ring, wanted: RingOrientation) -> Ring:
    current = ring_orientation(ring)
    if current is RingOrientation.DEGENERATE or current is wanted:
        return ring
    return tuple(reversed(ring))


def _polygon_parts(polygon: Polygon, where: str) -> List[Ring]:
    if not polygon.rings:
        raise GeometryError(f"{where}: polygon has no rings")
    parts = []
    for i, ring in enumerate(polygon.rings):
        _check_ring(ring, where)
        parts.append(_oriented(ring, RingOrientation.CW if i == 0 else RingOrientation.CCW))
    return parts


def columnar_parts(g: Geometry) -> Tuple[GeometryType, List[Sequence[Coordinate]]]:
    """Validate g and split it into its normalized parts"""
    code = geometry_type(g)
    if code is GeometryType.EMPTY:
        return code, []
    if code is GeometryType.POINT:
        return code, [(g.coord,)]
    if code is GeometryType.LINESTRING:
        if len(g.coords) < 2:
            raise GeometryError(f"LineString needs at least 2 coordinates, got {len(g.coords)}")
        return code, [g.coords]
    if code is GeometryType.POLYGON:
        return code, _polygon_parts(g, "Polygon")
    if code is GeometryType.MULTIPOINT:
        if not g.points:
            raise GeometryError("MultiPoint has no points")
        return code, [(p.coord,) for p in g.points]
    if code is GeometryType.MULTILINESTRING:
        if not g.lines:
            raise GeometryError("MultiLineString has no lines")
        for line in g.lines:
            if len(line.coords) < 2:
                raise GeometryError("MultiLineString member needs at least 2 coordinates")
        return code, [line.coords for line in g.lines]
    if not g.polygons:
        raise GeometryError("MultiPolygon has no polygons")
    parts = []
    for polygon in g.polygons:
        rings = _polygon_parts(polygon, "MultiPolygon")
        # A shell that is not clockwise would be read back as a hole.
        if ring_orientation(rings[0]) is not RingOrientation.CW:
            raise GeometryError("MultiPolygon shell has zero or undefined area")
        parts.extend(rings)
    return code, parts


def to_columnar(g: Geometry) -> ColumnarGeometry:
    if isinstance(g, GeometryCollection):
        raise GeometryError("GeometryCollection must be flattened before it is stored")
    code, parts = columnar_parts(g)
    values = []
    for i, part in enumerate(parts):
        for j, coord in enumerate(part):
            rep = REP_CONTINUE if j else (REP_RECORD if i == 0 else REP_PART)
            values.append(LeveledCoordinate(coord, rep, DEF_PRESENT))
    return ColumnarGeometry(code, tuple(values))


def assemble(code: int, parts: Sequence[Sequence[Coordinate]]) -> Geometry:
    """Build a geometry from a type code and its parts"""
    try:
        code = GeometryType(code)
    except ValueError:
        raise FormatError(f"Unknown geometry type code: {code}")
    if code is GeometryType.EMPTY:
        if parts:
            raise GeometryError("Empty geometry carries coordinates")
        return Empty()
    if not parts:
        raise GeometryError(f"{code.name} record has no coordinates")
    if code is GeometryType.POINT:
        if len(parts) != 1 or len(parts[0]) != 1:
            raise GeometryError("Point record must hold exactly one coordinate")
        return Point(*parts[0][0])
    if code is GeometryType.LINESTRING:
        if len(parts) != 1:
            raise GeometryError("LineString record must hold exactly one part")
        return LineString(parts[0])
    if code is GeometryType.POLYGON:
        for ring in parts:
            _check_ring(tuple(ring), "Polygon")
        return Polygon(parts)
    if code is GeometryType.MULTIPOINT:
        if any(len(p) != 1 for p in parts):
            raise GeometryError("MultiPoint parts must hold exactly one coordinate")
        return MultiPoint(tuple(Point(*p[0]) for p in parts))
    if code is GeometryType.MULTILINESTRING:
        return MultiLineString(tuple(LineString(p) for p in parts))

    polygons: List[Polygon] = []
    pending: Optional[List[Sequence[Coordinate]]] = None
    for ring in parts:
        _check_ring(tuple(ring), "MultiPolygon")
        if ring_orientation(ring) is RingOrientation.CW:
            if pending is not None:
                polygons.append(Polygon(pending))
            pending = [ring]
        elif pending is None:
            raise GeometryError("MultiPolygon starts with a hole before any shell")
        else:
            pending.append(ring)
    polygons.append(Polygon(pending))
    return MultiPolygon(tuple(polygons))


def from_columnar(c: ColumnarGeometry) -> Geometry:
    if c.values:
        reps = [v.rep_level for v in c.values]
        if reps[0] != REP_RECORD or REP_RECORD in reps[1:]:
            raise GeometryError("Record must contain exactly one repetition level 0, at its start")
    return assemble(c.type, c.parts())


def normalize(g: Geometry) -> Geometry:
    """The geometry as it reads back after storage (shells CW, holes CCW)"""
    return assemble(*columnar_parts(g))


def flatten_collection(gc: GeometryCollection, max_depth: int = MAX_COLLECTION_DEPTH) -> List[Geometry]:
    flat: List[Geometry] = []
    active = set()

    def visit(collection: GeometryCollection, depth: int):
        if depth > max_depth:
            raise GeometryError(f"GeometryCollection nesting exceeds depth {max_depth}")
        if id(collection) in active:
            raise GeometryError("GeometryCollection contains itself")
        active.add(id(collection))
        for member in collection.geometries:
            if isinstance(member, GeometryCollection):
                visit(member, depth + 1)
            else:
                flat.append(member)
        active.discard(id(collection))

    visit(gc, 1)
    return flat


def iter_coordinates(g: Geometry) -> Iterator[Coordinate]:
    if isinstance(g, Point):
        yield g.coord
    elif isinstance(g, LineString):
        yield from g.coords
    elif isinstance(g, Polygon):
        for ring in g.rings:
            yield from ring
    elif isinstance(g, MultiPoint):
        for p in g.points:
            yield p.coord
    elif isinstance(g, MultiLineString):
        for line in g.lines:
            yield from line.coords
    elif isinstance(g, MultiPolygon):
        for polygon in g.polygons:
            for ring in polygon.rings:
                yield from ring
    elif isinstance(g, GeometryCollection):
        for member in g.geometries:
            yield from iter_coordinates(member)


def mbr(g: Geometry) -> Optional[BBox]:
    """Bounding box over the non-NaN coordinates, None when there are none"""
    xs = [c[0] for c in iter_coordinates(g) if not math.isnan(c[0])]
    ys = [c[1] for c in iter_coordinates(g) if not math.isnan(c[1])]
    if not xs or not ys:
        return None
    return (min(xs), min(ys), max(xs), max(ys))


def mbr_intersects(box: Optional[BBox], rect: BBox) -> bool:
    """Closed-interval overlap test"""
    if box is None:
        return False
    return box[0] <= rect[2] and rect[0] <= box[2] and box[1] <= rect[3] and rect[1] <= box[3]


def geometry_key(g: Geometry):
    """Hashable structure with coordinates replaced by their bit patterns"""
    def ring_key(coords):
        return tuple((float_bits(x), float_bits(y)) for x, y in coords)

    if isinstance(g, Empty):
        return ("Empty",)
    if isinstance(g, Point):
        return ("Point", ring_key([g.coord]))
    if isinstance(g, LineString):
        return ("LineString", ring_key(g.coords))
    if isinstance(g, Polygon):
        return ("Polygon", tuple(ring_key(r) for r in g.rings))
    if isinstance(g, MultiPoint):
        return ("MultiPoint", ring_key([p.coord for p in g.points]))
    if isinstance(g, MultiLineString):
        return ("MultiLineString", tuple(ring_key(l.coords) for l in g.lines))
    if isinstance(g, MultiPolygon):
        return ("MultiPolygon", tuple(tuple(ring_key(r) for r in p.rings) for p in g.polygons))
    return ("GeometryCollection", tuple(geometry_key(m) for m in g.geometries))


def same_geometry(a: Geometry, b: Geometry) -> bool:
    """Structural equality with bit-exact coordinates (NaN payloads included)"""
    return geometry_key(a) == geometry_key(b)

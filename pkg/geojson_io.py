"""GeoJSON reader and writer (geometry members only; properties are dropped).

Non-finite coordinates are written as the strings "NaN", "Infinity" and
"-Infinity" so the output stays strict JSON; the reader accepts them back.
"""

import json
import math
from typing import Any, BinaryIO, Iterable, Iterator, List, TextIO, Union

import ijson
from ijson.common import ObjectBuilder

from errors import ParseError
from geometry import (Empty, Geometry, GeometryCollection, LineString, MultiLineString, MultiPoint,
                      MultiPolygon, Point, Polygon, close_ring)

_GEOMETRY_TYPES = ("Point", "LineString", "Polygon", "MultiPoint", "MultiLineString", "MultiPolygon",
                   "GeometryCollection")


def _position(value: Any, path: str):
    if not isinstance(value, (list, tuple)) or len(value) < 2:
        raise ParseError("Position must be an array of at least two numbers", path)
    try:
        return (float(value[0]), float(value[1]))
    except (TypeError, ValueError):
        raise ParseError("Position holds a non-numeric value", path)


def _positions(value: Any, path: str):
    if not isinstance(value, list):
        raise ParseError("Expected an array of positions", path)
    return [_position(v, f"{path}[{i}]") for i, v in enumerate(value)]


def _rings(value: Any, path: str):
    if not isinstance(value, list):
        raise ParseError("Expected an array of rings", path)
    return [close_ring(_positions(r, f"{path}[{i}]")) for i, r in enumerate(value)]


def geometry_from_dict(obj: Any, path: str = "$") -> Geometry:
    if not isinstance(obj, dict):
        raise ParseError("Geometry must be an object", path)
    kind = obj.get("type")
    if kind not in _GEOMETRY_TYPES:
        raise ParseError(f"Unknown geometry type {kind!r}", f"{path}.type")
    if kind == "GeometryCollection":
        members = obj.get("geometries")
        if not isinstance(members, list):
            raise ParseError("GeometryCollection needs a 'geometries' array", f"{path}.geometries")
        return GeometryCollection(tuple(geometry_from_dict(m, f"{path}.geometries[{i}]")
                                        for i, m in enumerate(members)))
    coords = obj.get("coordinates")
    where = f"{path}.coordinates"
    if coords is None:
        raise ParseError("Geometry has no 'coordinates'", where)
    if coords == []:
        return Empty(kind)
    if kind == "Point":
        return Point(*_position(coords, where))
    if kind == "LineString":
        return LineString(_positions(coords, where))
    if kind == "Polygon":
        return Polygon(_rings(coords, where))
    if kind == "MultiPoint":
        return MultiPoint(tuple(Point(*c) for c in _positions(coords, where)))
    if kind == "MultiLineString":
        if not isinstance(coords, list):
            raise ParseError("Expected an array of lines", where)
        return MultiLineString(tuple(LineString(_positions(l, f"{where}[{i}]")) for i, l in enumerate(coords)))
    if not isinstance(coords, list):
        raise ParseError("Expected an array of polygons", where)
    return MultiPolygon(tuple(Polygon(_rings(p, f"{where}[{i}]")) for i, p in enumerate(coords)))


def iter_document(doc: Any, path: str = "$") -> Iterator[Geometry]:
    """Geometries of a FeatureCollection, Feature or bare geometry, in document order"""
    if not isinstance(doc, dict):
        raise ParseError("GeoJSON document must be an object", path)
    kind = doc.get("type")
    if kind == "FeatureCollection":
        features = doc.get("features")
        if not isinstance(features, list):
            raise ParseError("FeatureCollection needs a 'features' array", f"{path}.features")
        for i, feature in enumerate(features):
            yield from iter_document(feature, f"{path}.features[{i}]")
    elif kind == "Feature":
        geometry = doc.get("geometry")
        yield Empty() if geometry is None else geometry_from_dict(geometry, f"{path}.geometry")
    else:
        yield geometry_from_dict(doc, path)


_STARTS = ("start_map", "start_array")
_ENDS = ("end_map", "end_array")


def _next_event(events, where: str):
    try:
        return next(events)
    except StopIteration:
        return None
    except UnicodeDecodeError as e:
        raise ParseError(f"Invalid UTF-8 at byte {e.start} of the current read", where)
    except ijson.JSONError as e:
        raise ParseError(f"Malformed JSON: {e}", where)


def stream_document(handle) -> Iterator[Geometry]:
    """Geometries of a GeoJSON byte stream, holding at most one feature in memory.

    Members of a top-level "features" array are built and yielded one at a
    time; everything else of the document is kept and interpreted at the end,
    so a lone Feature or bare geometry is read whole.
    """
    events = ijson.parse(handle, use_float=True)
    top = ObjectBuilder()
    depth = 0
    feature, feature_depth = None, 0
    in_features = pending_features = seen_features = False
    index = 0
    while True:
        where = f"$.features[{index}]" if in_features else "$"
        item = _next_event(events, where)
        if item is None:
            break
        _, event, value = item
        if feature is not None:
            feature.event(event, value)
            feature_depth += (event in _STARTS) - (event in _ENDS)
            if feature_depth == 0:
                yield from iter_document(feature.value, where)
                feature = None
                index += 1
            continue
        if in_features:
            if event == "end_array":
                in_features = False
            elif event in _STARTS:
                feature, feature_depth = ObjectBuilder(), 1
                feature.event(event, value)
            else:
                yield from iter_document(value, where)
                index += 1
            continue
        if depth == 1 and event == "map_key" and value == "features":
            pending_features = True
            continue
        if pending_features:
            pending_features = False
            if event == "start_array":
                in_features = seen_features = True
                continue
            top.event("map_key", "features")
        top.event(event, value)
        depth += (event in _STARTS) - (event in _ENDS)

    doc = getattr(top, "value", None)
    if not seen_features:
        yield from iter_document(doc)
    elif not isinstance(doc, dict) or doc.get("type") != "FeatureCollection":
        raise ParseError("A 'features' array belongs to a FeatureCollection", "$.type")


def read_geojson(source: Union[str, BinaryIO]) -> Iterator[Geometry]:
    handle = open(source, 'rb') if isinstance(source, str) else source
    try:
        yield from stream_document(handle)
    finally:
        if isinstance(source, str):
            handle.close()


def _number(value: float):
    """Finite floats as JSON numbers; NaN and infinities as their float() spellings"""
    if math.isfinite(value):
        return value
    if math.isnan(value):
        return "NaN"
    return "Infinity" if value > 0 else "-Infinity"


def _pair(coord) -> List:
    return [_number(coord[0]), _number(coord[1])]


def geometry_to_dict(g: Geometry) -> dict:
    if isinstance(g, Empty):
        return {"type": g.kind, "coordinates": []}
    if isinstance(g, Point):
        return {"type": "Point", "coordinates": _pair(g.coord)}
    if isinstance(g, LineString):
        return {"type": "LineString", "coordinates": [_pair(c) for c in g.coords]}
    if isinstance(g, Polygon):
        return {"type": "Polygon", "coordinates": [[_pair(c) for c in r] for r in g.rings]}
    if isinstance(g, MultiPoint):
        return {"type": "MultiPoint", "coordinates": [_pair(p.coord) for p in g.points]}
    if isinstance(g, MultiLineString):
        return {"type": "MultiLineString", "coordinates": [[_pair(c) for c in l.coords] for l in g.lines]}
    if isinstance(g, MultiPolygon):
        return {"type": "MultiPolygon",
                "coordinates": [[[_pair(c) for c in r] for r in p.rings] for p in g.polygons]}
    return {"type": "GeometryCollection", "geometries": [geometry_to_dict(m) for m in g.geometries]}


def write_geojson(records: Iterable[Geometry], target: Union[str, TextIO], ids: bool = False) -> int:
    """Stream records out as one FeatureCollection; returns the feature count"""
    handle = open(target, 'w', encoding='utf-8') if isinstance(target, str) else target
    count = 0
    try:
        handle.write('{"type": "FeatureCollection", "features": [')
        for record in records:
            feature = {"type": "Feature", "properties": {}}
            if ids:
                feature["id"], record = record
            feature["geometry"] = geometry_to_dict(record)
            handle.write(("\n" if count == 0 else ",\n") + json.dumps(feature, allow_nan=False))
            count += 1
        handle.write("\n]}\n")
    finally:
        if isinstance(target, str):
            handle.close()
    return count

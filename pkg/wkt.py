"""WKT reader and writer, one geometry per line."""

import math
import re
from typing import BinaryIO, Iterable, Iterator, List, Optional, TextIO, Union

from errors import ParseError
from geometry import (Empty, Geometry, GeometryCollection, LineString, MultiLineString, MultiPoint,
                      MultiPolygon, Point, Polygon, close_ring)

_TOKEN = re.compile(r"""
    \s*(?:
      (?P<num>[-+]?(?:(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?|inf(?:inity)?|nan))
    | (?P<word>[A-Za-z]+)
    | (?P<punct>[(),])
    )""", re.VERBOSE | re.IGNORECASE)

_KINDS = {
    "POINT": "Point", "LINESTRING": "LineString", "POLYGON": "Polygon", "MULTIPOINT": "MultiPoint",
    "MULTILINESTRING": "MultiLineString", "MULTIPOLYGON": "MultiPolygon",
    "GEOMETRYCOLLECTION": "GeometryCollection",
}


class _Tokens:
    def __init__(self, text: str):
        self.items = []
        pos = 0
        text = text.rstrip()
        while pos < len(text):
            match = _TOKEN.match(text, pos)
            if not match or match.end() == pos:
                raise ParseError(f"Unexpected character {text[pos]!r}", pos)
            kind = match.lastgroup
            self.items.append((kind, match.group(kind), match.start(kind)))
            pos = match.end()
        self.index = 0
        self.length = len(text)

    def peek(self):
        if self.index < len(self.items):
            return self.items[self.index]
        return (None, None, self.length)

    def next(self):
        token = self.peek()
        self.index += 1
        return token

    def expect(self, value: str):
        kind, text, pos = self.next()
        if text != value:
            raise ParseError(f"Expected {value!r}, found {text or 'end of input'!r}", pos)

    def number(self) -> float:
        kind, text, pos = self.next()
        if kind != "num":
            raise ParseError(f"Expected a number, found {text or 'end of input'!r}", pos)
        return float(text)

    def word(self) -> str:
        kind, text, pos = self.next()
        if kind != "word":
            raise ParseError(f"Expected a geometry keyword, found {text or 'end of input'!r}", pos)
        return text.upper()

    def is_empty(self) -> bool:
        kind, text, _ = self.peek()
        if kind == "word" and text.upper() == "EMPTY":
            self.index += 1
            return True
        return False


def _coordinate(tokens: _Tokens):
    x = tokens.number()
    y = tokens.number()
    # Z and M ordinates are read and dropped
    while tokens.peek()[0] == "num":
        tokens.number()
    return (x, y)


def _sequence(tokens: _Tokens, item):
    tokens.expect("(")
    items = [item(tokens)]
    while tokens.peek()[1] == ",":
        tokens.next()
        items.append(item(tokens))
    tokens.expect(")")
    return items


def _coordinates(tokens: _Tokens):
    return _sequence(tokens, _coordinate)


def _multipoint_member(tokens: _Tokens):
    if tokens.peek()[1] == "(":
        tokens.next()
        coord = _coordinate(tokens)
        tokens.expect(")")
        return coord
    return _coordinate(tokens)


def _polygon_rings(tokens: _Tokens):
    return [close_ring(ring) for ring in _sequence(tokens, _coordinates)]


def _geometry(tokens: _Tokens) -> Geometry:
    _, _, pos = tokens.peek()
    keyword = tokens.word()
    if keyword not in _KINDS:
        raise ParseError(f"Unknown geometry type {keyword!r}", pos)
    if tokens.peek()[0] == "word" and tokens.peek()[1].upper() in ("Z", "M", "ZM"):
        tokens.next()
    if tokens.is_empty():
        if keyword == "GEOMETRYCOLLECTION":
            return GeometryCollection(())
        return Empty(_KINDS[keyword])
    if keyword == "POINT":
        tokens.expect("(")
        coord = _coordinate(tokens)
        tokens.expect(")")
        return Point(*coord)
    if keyword == "LINESTRING":
        return LineString(_coordinates(tokens))
    if keyword == "POLYGON":
        return Polygon(_polygon_rings(tokens))
    if keyword == "MULTIPOINT":
        return MultiPoint(tuple(Point(*c) for c in _sequence(tokens, _multipoint_member)))
    if keyword == "MULTILINESTRING":
        return MultiLineString(tuple(LineString(c) for c in _sequence(tokens, _coordinates)))
    if keyword == "MULTIPOLYGON":
        return MultiPolygon(tuple(Polygon(r) for r in _sequence(tokens, _polygon_rings)))
    return GeometryCollection(tuple(_sequence(tokens, _geometry)))


def parse_wkt(text: str) -> Geometry:
    tokens = _Tokens(text)
    geometry = _geometry(tokens)
    kind, value, pos = tokens.peek()
    if kind is not None:
        raise ParseError(f"Unexpected trailing {value!r}", pos)
    return geometry


def format_number(value: float) -> str:
    """Shortest text that reads back to the same double"""
    if math.isnan(value):
        return "nan"
    text = repr(float(value))
    return text[:-2] if text.endswith(".0") else text


def _fmt_coords(coords) -> str:
    return ", ".join(f"{format_number(x)} {format_number(y)}" for x, y in coords)


def format_wkt(g: Geometry) -> str:
    if isinstance(g, Empty):
        return f"{g.kind.upper()} EMPTY"
    if isinstance(g, Point):
        return f"POINT ({format_number(g.x)} {format_number(g.y)})"
    if isinstance(g, LineString):
        return f"LINESTRING ({_fmt_coords(g.coords)})"
    if isinstance(g, Polygon):
        return "POLYGON (" + ", ".join(f"({_fmt_coords(r)})" for r in g.rings) + ")"
    if isinstance(g, MultiPoint):
        return "MULTIPOINT (" + ", ".join(f"({_fmt_coords([p.coord])})" for p in g.points) + ")"
    if isinstance(g, MultiLineString):
        return "MULTILINESTRING (" + ", ".join(f"({_fmt_coords(l.coords)})" for l in g.lines) + ")"
    if isinstance(g, MultiPolygon):
        return "MULTIPOLYGON (" + ", ".join(
            "(" + ", ".join(f"({_fmt_coords(r)})" for r in p.rings) + ")" for p in g.polygons) + ")"
    if not g.geometries:
        return "GEOMETRYCOLLECTION EMPTY"
    return "GEOMETRYCOLLECTION (" + ", ".join(format_wkt(m) for m in g.geometries) + ")"


def read_wkt(source: Union[str, TextIO, BinaryIO]) -> Iterator[Geometry]:
    """Geometries from a WKT-per-line file; blank lines are skipped"""
    handle = open(source, 'rb') if isinstance(source, str) else source
    try:
        for number, line in enumerate(handle, 1):
            if isinstance(line, bytes):
                try:
                    line = line.decode('utf-8')
                except UnicodeDecodeError as e:
                    raise ParseError(f"Line {number}: invalid UTF-8", f"byte {e.start}")
            if not line.strip():
                continue
            try:
                yield parse_wkt(line)
            except ParseError as e:
                raise ParseError(f"Line {number}: {e}")
    finally:
        if isinstance(source, str):
            handle.close()


def write_wkt(records: Iterable[Geometry], target: Union[str, TextIO]) -> int:
    handle = open(target, 'w', encoding='utf-8') if isinstance(target, str) else target
    count = 0
    try:
        for g in records:
            handle.write(format_wkt(g) + "\n")
            count += 1
    finally:
        if isinstance(target, str):
            handle.close()
    return count

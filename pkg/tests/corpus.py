"""Random geometry corpora shared by the container, query and IO tests."""

import math

import numpy as np

from geometry import (Empty, LineString, MultiLineString, MultiPoint, MultiPolygon, Point, Polygon,
                      RingOrientation, ring_orientation)

ADVERSARIAL = np.array([math.nan, 0.0, -0.0, math.inf, -math.inf, 5e-324, -5e-324,
                        2.2250738585072014e-308, 1.7976931348623157e308, -1.7976931348623157e308])

SAMPLE_GEOMETRIES = [
    Point(3, 2),
    LineString([(1, 1), (2, 3), (1, 4)]),
    Polygon([[(1, 1), (2, 4), (5, 5), (5, 1), (1, 1)], [(3, 2), (4, 2), (4, 3), (3, 2)]]),
    MultiPoint([(1, 3), (2, 4), (4, 3)]),
    MultiLineString([[(1, 1), (2, 3)], [(3, 1), (4, 4), (5, 2)]]),
    MultiPolygon([Polygon([[(1, 1), (2, 4), (5, 5), (5, 1), (1, 1)], [(3, 2), (4, 2), (4, 3), (3, 2)]]),
                  Polygon([[(6, 1), (6, 3), (8, 1), (6, 1)]])]),
]


def _value(rng, adversarial: bool, center: float) -> float:
    if adversarial and rng.random() < 0.05:
        return float(rng.choice(ADVERSARIAL))
    return center + float(rng.normal(0, 1))


def _coords(rng, count: int, adversarial: bool):
    cx, cy = rng.uniform(-170, 170), rng.uniform(-80, 80)
    return [(_value(rng, adversarial, cx), _value(rng, adversarial, cy)) for _ in range(count)]


def _ring(rng, cx: float, cy: float, radius: float, clockwise: bool):
    sides = int(rng.integers(3, 9))
    step = (-1 if clockwise else 1) * 2 * math.pi / sides
    ring = [(cx + radius * math.cos(i * step), cy + radius * math.sin(i * step)) for i in range(sides)]
    return ring + [ring[0]]


def _polygon(rng, adversarial: bool) -> Polygon:
    cx, cy = rng.uniform(-170, 170), rng.uniform(-80, 80)
    shell = _ring(rng, cx, cy, 2.0, bool(rng.integers(2)))
    rings = [shell]
    for k in range(int(rng.integers(0, 3))):
        rings.append(_ring(rng, cx + 0.8 * (k - 0.5), cy, 0.3, bool(rng.integers(2))))
    if adversarial and rng.random() < 0.2:
        shell = list(shell)
        shell[1] = (float(rng.choice(ADVERSARIAL)), shell[1][1])
        rings[0] = shell
    return Polygon(rings)


def _multipolygon(rng) -> MultiPolygon:
    polygons = []
    for _ in range(int(rng.integers(1, 4))):
        polygon = _polygon(rng, adversarial=False)
        if ring_orientation(polygon.shell) is RingOrientation.DEGENERATE:
            continue
        polygons.append(polygon)
    return MultiPolygon(polygons or [Polygon([[(0, 0), (0, 1), (1, 1), (0, 0)]])])


def random_geometry(rng, adversarial: bool = True):
    kind = int(rng.integers(0, 7))
    if kind == 0:
        return Empty(["Point", "LineString", "Polygon"][int(rng.integers(3))])
    if kind == 1:
        return Point(*_coords(rng, 1, adversarial)[0])
    if kind == 2:
        return LineString(_coords(rng, int(rng.integers(2, 12)), adversarial))
    if kind == 3:
        return _polygon(rng, adversarial)
    if kind == 4:
        return MultiPoint(_coords(rng, int(rng.integers(1, 6)), adversarial))
    if kind == 5:
        return MultiLineString([_coords(rng, int(rng.integers(2, 6)), adversarial)
                                for _ in range(int(rng.integers(1, 4)))])
    return _multipolygon(rng)


def random_geometries(count: int, seed: int = 0, adversarial: bool = True):
    rng = np.random.default_rng(seed)
    return [random_geometry(rng, adversarial) for _ in range(count)]


def clustered_points(count: int, clusters: int, stddev: float, bbox, seed: int, resolution=None):
    from synthetic import SyntheticSpec, generate_synthetic
    spec = SyntheticSpec(count=count, clusters=clusters, stddev=stddev, bbox=bbox, seed=seed,
                         resolution=resolution)
    return list(generate_synthetic(spec))

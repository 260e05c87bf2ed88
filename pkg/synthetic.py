"""
Deterministic clustered test data: Gaussian clusters of points around
uniformly placed centers, optionally with small regular polygons.
"""

import logging
import math
from dataclasses import dataclass, fields
from typing import Any, Dict, Iterator, List, Optional, Tuple

import numpy as np

from errors import ConfigError
from geometry import Geometry, Point, Polygon

logger = logging.getLogger(__name__)

_CHUNK = 65536


@dataclass(frozen=True)
class SyntheticSpec:
    count: int = 100_000
    clusters: int = 100
    stddev: float = 3.6
    bbox: Tuple[float, float, float, float] = (-180.0, -90.0, 180.0, 90.0)
    seed: int = 42
    resolution: Optional[float] = None  # snap coordinates to this grid when set
    polygon_fraction: float = 0.0
    polygon_radius: float = 0.05

    def __post_init__(self):
        object.__setattr__(self, "bbox", tuple(float(v) for v in self.bbox))
        if len(self.bbox) != 4 or self.bbox[0] > self.bbox[2] or self.bbox[1] > self.bbox[3]:
            raise ConfigError(f"bbox must be (xmin, ymin, xmax, ymax), got {self.bbox}")
        if self.count < 0:
            raise ConfigError("count must not be negative")
        if self.count > 0 and self.clusters < 1:
            raise ConfigError("At least one cluster is needed to generate records")
        if self.stddev < 0:
            raise ConfigError("stddev must not be negative")
        if self.resolution is not None and self.resolution <= 0:
            raise ConfigError("resolution must be positive")
        if not 0.0 <= self.polygon_fraction <= 1.0:
            raise ConfigError("polygon_fraction must lie in [0, 1]")

    @classmethod
    def from_config(cls, config: Optional[Dict[str, Any]] = None, **overrides) -> "SyntheticSpec":
        section = dict((config or {}).get("synthetic", {}))
        known = {f.name for f in fields(cls)}
        values = {k: v for k, v in section.items() if k in known}
        values.update({k: v for k, v in overrides.items() if v is not None and k in known})
        return cls(**values)


def _regular_polygon(cx: float, cy: float, radius: float, sides: int, phase: float) -> Polygon:
    angles = phase + np.arange(sides) * (-2.0 * np.pi / sides)  # clockwise
    ring = [(cx + radius * np.cos(a), cy + radius * np.sin(a)) for a in angles]
    ring.append(ring[0])
    return Polygon([ring])


def generate_synthetic(spec: SyntheticSpec) -> Iterator[Geometry]:
    """Same spec, same records"""
    if spec.count == 0:
        return
    rng = np.random.default_rng(spec.seed)
    xmin, ymin, xmax, ymax = spec.bbox
    centers = np.column_stack((rng.uniform(xmin, xmax, spec.clusters), rng.uniform(ymin, ymax, spec.clusters)))
    logger.debug("Generating %d records around %d clusters", spec.count, spec.clusters)
    remaining = spec.count
    while remaining > 0:
        size = min(remaining, _CHUNK)
        remaining -= size
        picks = rng.integers(0, spec.clusters, size)
        xs = np.clip(centers[picks, 0] + rng.normal(0.0, spec.stddev, size), xmin, xmax)
        ys = np.clip(centers[picks, 1] + rng.normal(0.0, spec.stddev, size), ymin, ymax)
        if spec.resolution is not None:
            xs = np.round(xs / spec.resolution) * spec.resolution
            ys = np.round(ys / spec.resolution) * spec.resolution
        polygons = rng.random(size) < spec.polygon_fraction
        sides = rng.integers(4, 13, size)
        phases = rng.uniform(0.0, 2.0 * np.pi, size)
        for i in range(size):
            if polygons[i]:
                yield _regular_polygon(float(xs[i]), float(ys[i]), spec.polygon_radius, int(sides[i]),
                                       float(phases[i]))
            else:
                yield Point(float(xs[i]), float(ys[i]))


def shuffled(records, seed: int = 0):
    """Records in a seeded random order"""
    items = list(records)
    order = np.random.default_rng(seed).permutation(len(items))
    return [items[i] for i in order]


def random_rects(bbox: Tuple[float, float, float, float], count: int, area_fraction: float,
                 seed: int = 0) -> List[Tuple[float, float, float, float]]:
    """Square-shaped query rectangles covering area_fraction of bbox, placed uniformly inside it"""
    if not 0.0 < area_fraction <= 1.0:
        raise ConfigError("area_fraction must lie in (0, 1]")
    rng = np.random.default_rng(seed)
    xmin, ymin, xmax, ymax = bbox
    side = math.sqrt(area_fraction)
    w, h = (xmax - xmin) * side, (ymax - ymin) * side
    xs = rng.uniform(xmin, xmax - w, count)
    ys = rng.uniform(ymin, ymax - h, count)
    return [(float(x), float(y), float(x + w), float(y + h)) for x, y in zip(xs, ys)]

"""
Batch-wise Z-order and Hilbert sorting of geometries by the center of their
bounding box. Each batch is mapped onto its own 2^16 x 2^16 grid.
"""

import logging
import math
from typing import Callable, Iterable, Iterator, List, Optional, Sequence, TypeVar

import numpy as np

from geometry import Coordinate, Geometry, mbr

logger = logging.getLogger(__name__)

GRID_ORDER = 16
GRID_CELLS = 1 << GRID_ORDER
CURVES = ("none", "z", "hilbert")

T = TypeVar("T")


def representative_point(g: Geometry) -> Optional[Coordinate]:
    """Center of the bounding box; None for empty geometries"""
    box = mbr(g)
    if box is None:
        return None
    return ((box[0] + box[2]) / 2, (box[1] + box[3]) / 2)


def _clamp_cell(c: int, order: int = GRID_ORDER) -> int:
    return min(max(int(c), 0), (1 << order) - 1)


def z_key(cx: int, cy: int, order: int = GRID_ORDER) -> int:
    """Morton interleave: x bits at even positions, y bits at odd positions"""
    cx, cy = _clamp_cell(cx, order), _clamp_cell(cy, order)
    key = 0
    for bit in range(order):
        key |= ((cx >> bit) & 1) << (2 * bit)
        key |= ((cy >> bit) & 1) << (2 * bit + 1)
    return key


def hilbert_key(cx: int, cy: int, order: int = GRID_ORDER) -> int:
    cx, cy = _clamp_cell(cx, order), _clamp_cell(cy, order)
    n = 1 << order
    key = 0
    s = n >> 1
    while s > 0:
        rx = 1 if cx & s else 0
        ry = 1 if cy & s else 0
        key += s * s * ((3 * rx) ^ ry)
        if ry == 0:
            if rx == 1:
                cx = n - 1 - cx
                cy = n - 1 - cy
            cx, cy = cy, cx
        s >>= 1
    return key


def _spread_bits(v: np.ndarray) -> np.ndarray:
    v = v.astype(np.uint64) & np.uint64(0xFFFFFFFF)
    v = (v | (v << np.uint64(16))) & np.uint64(0x0000FFFF0000FFFF)
    v = (v | (v << np.uint64(8))) & np.uint64(0x00FF00FF00FF00FF)
    v = (v | (v << np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    v = (v | (v << np.uint64(2))) & np.uint64(0x3333333333333333)
    v = (v | (v << np.uint64(1))) & np.uint64(0x5555555555555555)
    return v


def z_keys(cx: np.ndarray, cy: np.ndarray) -> np.ndarray:
    return _spread_bits(cx) | (_spread_bits(cy) << np.uint64(1))


def hilbert_keys(cx: np.ndarray, cy: np.ndarray, order: int = GRID_ORDER) -> np.ndarray:
    x = np.asarray(cx, dtype=np.int64).copy()
    y = np.asarray(cy, dtype=np.int64).copy()
    n = 1 << order
    keys = np.zeros(x.shape, dtype=np.uint64)
    s = n >> 1
    while s > 0:
        rx = (x & s) > 0
        ry = (y & s) > 0
        keys += np.uint64(s * s) * ((3 * rx.astype(np.uint64)) ^ ry.astype(np.uint64))
        flip = ~ry & rx
        x[flip] = n - 1 - x[flip]
        y[flip] = n - 1 - y[flip]
        swap = ~ry
        x[swap], y[swap] = y[swap], x[swap].copy()
        s >>= 1
    return keys


def grid_cells(values: np.ndarray) -> np.ndarray:
    """Map finite values onto [0, 2^16) over their own range; others go to cell 0"""
    cells = np.zeros(values.shape, dtype=np.int64)
    finite = np.isfinite(values)
    if not finite.any():
        return cells
    low, high = values[finite].min(), values[finite].max()
    span = high - low
    if span <= 0 or not math.isfinite(span):
        return cells
    scaled = (values[finite] - low) / span * GRID_CELLS
    cells[finite] = np.clip(np.floor(scaled), 0, GRID_CELLS - 1).astype(np.int64)
    return cells


def sort_keys(points: Sequence[Optional[Coordinate]], curve: str) -> np.ndarray:
    """Curve keys for one batch; missing points get key 0"""
    present = np.array([p is not None for p in points], dtype=bool)
    xs = np.array([p[0] if p is not None else np.nan for p in points], dtype=np.float64)
    ys = np.array([p[1] if p is not None else np.nan for p in points], dtype=np.float64)
    cx, cy = grid_cells(xs), grid_cells(ys)
    keys = z_keys(cx, cy) if curve == "z" else hilbert_keys(cx, cy)
    keys[~present] = 0
    return keys


def _emit_sorted(batch: List[T], curve: str, geometry_of: Callable[[T], Geometry]) -> Iterator[T]:
    keys = sort_keys([representative_point(geometry_of(r)) for r in batch], curve)
    for i in np.argsort(keys, kind='stable'):
        yield batch[i]


def sort_stream(records: Iterable[T], curve: str, batch_size: int = 1_000_000,
                geometry_of: Callable[[T], Geometry] = lambda r: r) -> Iterator[T]:
    """Sort records batch by batch along a space-filling curve; 'none' passes through"""
    if curve not in CURVES:
        raise ValueError(f"Unknown sort curve {curve!r}, expected one of {CURVES}")
    if batch_size < 1:
        raise ValueError("batch_size must be positive")
    if curve == "none":
        yield from records
        return
    batch: List[T] = []
    for record in records:
        batch.append(record)
        if len(batch) >= batch_size:
            logger.debug("Sorting a batch of %d records along the %s curve", len(batch), curve)
            yield from _emit_sorted(batch, curve, geometry_of)
            batch = []
    if batch:
        yield from _emit_sorted(batch, curve, geometry_of)

"""
FP-delta: lossless delta coding of float64 sequences.

Each value is reinterpreted as a two's-complement int64, consecutive values
are subtracted (wrapping), the delta is zigzag-folded and bit-packed at one
fixed width n chosen per page. A delta that needs more than n bits, or that
equals the all-ones n-bit pattern, is written as that all-ones reset marker
followed by the raw 64-bit value.

Stream layout: [8 bits n][64 bits first value][tokens...], LSB-first.
Coordinate page layout: [1 byte encoding flag][stream or raw float64s].
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from bitstream import BitReader, BitWriter
from errors import CorruptionError, FormatError

logger = logging.getLogger(__name__)

MASK64 = (1 << 64) - 1
MAX_WIDTH = 64
HEADER_BITS = 8 + 64

ENCODING_RAW = 0
ENCODING_FP_DELTA = 1

_MAX_WINDOW = 1 << 16


def _signed64(value: int) -> int:
    value &= MASK64
    return value - (1 << 64) if value >> 63 else value


def zigzag_encode(delta: int) -> int:
    delta = _signed64(delta)
    return ((delta >> 63) ^ (delta << 1)) & MASK64


def zigzag_decode(z: int) -> int:
    z &= MASK64
    return _signed64((z >> 1) ^ -(z & 1))


def significant_bits(z: int) -> int:
    return (z & MASK64).bit_length()


def as_float_array(values) -> np.ndarray:
    return np.ascontiguousarray(values, dtype=np.float64)


def zigzag_deltas(values) -> np.ndarray:
    """Zigzag-folded deltas of the int64 reinterpretation, as uint64"""
    bits = as_float_array(values).view(np.int64)
    deltas = bits[1:] - bits[:-1]
    return ((deltas >> np.int64(63)) ^ (deltas << np.int64(1))).view(np.uint64)


def significant_bits_array(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=np.uint64).copy()
    counts = np.zeros(z.shape, dtype=np.int64)
    for step in (32, 16, 8, 4, 2, 1):
        high = z >= (np.uint64(1) << np.uint64(step))
        counts[high] += step
        z[high] >>= np.uint64(step)
    counts += (z > 0)
    return counts


@dataclass
class DeltaHistogram:
    """Count of zigzag deltas per exact significant-bit width (65 bins)"""
    counts: np.ndarray

    @classmethod
    def from_zigzags(cls, z: np.ndarray) -> "DeltaHistogram":
        return cls(np.bincount(significant_bits_array(z), minlength=MAX_WIDTH + 1).astype(np.int64))

    @classmethod
    def from_values(cls, values) -> "DeltaHistogram":
        return cls.from_zigzags(zigzag_deltas(values))

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def at_least(self) -> np.ndarray:
        """Suffix sum: entry n is the number of deltas needing at least n bits"""
        return np.cumsum(self.counts[::-1])[::-1]

    def merge(self, other: "DeltaHistogram") -> "DeltaHistogram":
        return DeltaHistogram(self.counts + other.counts)

    def mean_bits(self) -> float:
        total = self.total
        if not total:
            return 0.0
        return float((self.counts * np.arange(MAX_WIDTH + 1)).sum()) / total


def estimated_size(n: int, suffix_hist, count: int) -> int:
    """Body bits at width n: n per delta plus 64 per delta needing more than n bits"""
    suffix = np.asarray(suffix_hist)
    overflow = int(suffix[n + 1]) if n < MAX_WIDTH else 0
    return n * (count - 1) + MAX_WIDTH * overflow


def marker_collisions(z: np.ndarray) -> np.ndarray:
    """Entry n counts deltas equal to the all-ones n-bit reset marker"""
    z = np.asarray(z, dtype=np.uint64)
    all_ones = (z != 0) & ((z & (z + np.uint64(1))) == 0)
    return np.bincount(significant_bits_array(z[all_ones]), minlength=MAX_WIDTH + 1).astype(np.int64)


def _body_sizes(z: np.ndarray) -> np.ndarray:
    """Exact body bits for every width 1..64 (index 0 unused)"""
    count = z.size + 1
    suffix = np.append(DeltaHistogram.from_zigzags(z).at_least(), 0)
    collisions = marker_collisions(z)
    widths = np.arange(MAX_WIDTH + 1, dtype=np.int64)
    sizes = widths * (count - 1) + MAX_WIDTH * (suffix[widths + 1] + collisions)
    sizes[0] = np.iinfo(np.int64).max
    return sizes


def body_size_bits(values, n: int) -> int:
    """Exact body bits the encoder emits at width n, escapes included"""
    values = as_float_array(values)
    if values.size < 2:
        return 0
    return int(_body_sizes(zigzag_deltas(values))[n])


def encoded_size_bits(values, n: int) -> int:
    """Exact FP-delta stream length at width n, header included"""
    return HEADER_BITS + body_size_bits(values, n)


def compute_best_delta_bits(values) -> int:
    values = as_float_array(values)
    if values.size < 2:
        raise ValueError("At least two values are needed to choose a delta width")
    # argmin takes the first minimum, so ties go to the smaller width
    return int(np.argmin(_body_sizes(zigzag_deltas(values))))


def fp_delta_encode(values, out: BitWriter, width: Optional[int] = None) -> int:
    """Write values to out and return the delta width used"""
    values = as_float_array(values)
    if values.size == 0:
        raise ValueError("Cannot FP-delta encode an empty sequence")
    if width is None:
        width = compute_best_delta_bits(values) if values.size >= 2 else 1
    if not 1 <= width <= MAX_WIDTH:
        raise ValueError(f"Delta width must be in [1, 64], got {width}")
    raw = values.view(np.uint64)
    out.write(width, 8)
    out.write(int(raw[0]), 64)
    if values.size == 1:
        return width

    marker = np.uint64((1 << width) - 1)
    z = zigzag_deltas(values)
    escaped = z >= marker
    slots = np.arange(z.size) + np.cumsum(escaped) - escaped
    tokens = np.empty(z.size + int(escaped.sum()), dtype=np.uint64)
    widths = np.full(tokens.size, width, dtype=np.int64)
    tokens[slots] = np.where(escaped, marker, z)
    tokens[slots[escaped] + 1] = raw[1:][escaped]
    widths[slots[escaped] + 1] = 64
    out.write_many(tokens, widths)
    return width


def _unzigzag(tokens: np.ndarray) -> np.ndarray:
    return ((tokens >> np.uint64(1)) ^ (np.uint64(0) - (tokens & np.uint64(1)))).view(np.int64)


def fp_delta_decode(reader: BitReader, count: int) -> np.ndarray:
    out = np.empty(count, dtype=np.uint64)
    if count == 0:
        return out.view(np.float64)
    width = reader.read(8)
    if not 1 <= width <= MAX_WIDTH:
        raise FormatError(f"Delta width header out of range: {width}")
    marker = np.uint64((1 << width) - 1)
    first = reader.read(64)
    out[0] = first
    prev = np.array([_signed64(first)], dtype=np.int64)
    i = 1
    window = 64
    while i < count:
        tokens = reader.peek_many(width, min(window, count - i))
        if tokens.size == 0:
            raise CorruptionError(f"Bit stream ended after {i} of {count} values")
        hits = np.flatnonzero(tokens == marker)
        accepted = int(hits[0]) if hits.size else tokens.size
        if accepted:
            running = np.cumsum(np.concatenate([prev, _unzigzag(tokens[:accepted])]))[1:]
            out[i:i + accepted] = running.view(np.uint64)
            prev = running[-1:]
            reader.skip(accepted * width)
            i += accepted
        if hits.size:
            reader.skip(width)
            raw = reader.read(64)
            out[i] = raw
            prev = np.array([_signed64(raw)], dtype=np.int64)
            i += 1
            window = max(8, accepted * 2)
        else:
            window = min(window * 2, _MAX_WINDOW)
    return out.view(np.float64)


def should_fallback_raw(values, width: int) -> bool:
    """True when FP-delta would not be strictly smaller than raw float64s"""
    values = as_float_array(values)
    if values.size <= 1:
        return True
    return encoded_size_bits(values, width) >= 64 * values.size


def encode_coordinate_page(values, force_raw: bool = False) -> Tuple[bytes, int, Optional[int]]:
    """Encode one page of coordinates; returns (payload, encoding flag, delta width)"""
    values = as_float_array(values)
    if values.size == 0:
        return b"", ENCODING_RAW, None
    width = None
    if not force_raw and values.size >= 2:
        width = compute_best_delta_bits(values)
        if should_fallback_raw(values, width):
            logger.debug("FP-delta at width %d does not beat raw for %d values", width, values.size)
            width = None
    if width is None:
        return bytes([ENCODING_RAW]) + values.astype('<f8').tobytes(), ENCODING_RAW, None
    writer = BitWriter()
    fp_delta_encode(values, writer, width)
    return bytes([ENCODING_FP_DELTA]) + writer.getvalue(), ENCODING_FP_DELTA, width


def decode_coordinate_page(payload: bytes, count: int) -> np.ndarray:
    if count == 0:
        if payload:
            raise CorruptionError("Empty coordinate page carries bytes")
        return np.zeros(0, dtype=np.float64)
    if not payload:
        raise CorruptionError(f"Coordinate page of {count} values is empty")
    flag = payload[0]
    if flag == ENCODING_RAW:
        if len(payload) != 1 + 8 * count:
            raise CorruptionError(f"Raw page holds {len(payload) - 1} bytes, expected {8 * count}")
        return np.frombuffer(payload, dtype='<f8', offset=1).astype(np.float64)
    if flag == ENCODING_FP_DELTA:
        reader = BitReader(payload[1:])
        values = fp_delta_decode(reader, count)
        if reader.remaining >= 8:
            raise CorruptionError(f"{reader.remaining} unread bits after {count} values")
        return values
    raise FormatError(f"Unknown coordinate encoding flag: {flag}")

"""Page encodings for the non-coordinate columns, plus per-page deflate."""

import struct
import zlib
from typing import List, NamedTuple, Sequence, Tuple

import numpy as np

from errors import CorruptionError, FormatError
from geometry import GeometryType

ENCODING_RLE = 2
ENCODING_PACKED_LEVELS = 3
ENCODING_PLAIN = 4

COMPRESSION_NONE = 0
COMPRESSION_DEFLATE = 1
COMPRESSION_CODES = {"none": COMPRESSION_NONE, "deflate": COMPRESSION_DEFLATE}

_RUN = struct.Struct('<IB')


class TypeRun(NamedTuple):
    count: int
    value: int


def rle_encode_types(codes: Sequence[int]) -> List[TypeRun]:
    codes = np.asarray(codes, dtype=np.int64)
    if codes.size == 0:
        return []
    if codes.min() < 0 or codes.max() > GeometryType.MULTIPOLYGON:
        raise FormatError("Geometry type codes must lie in [0, 6]")
    starts = np.flatnonzero(np.concatenate(([True], codes[1:] != codes[:-1])))
    counts = np.diff(np.append(starts, codes.size))
    return [TypeRun(int(c), int(codes[s])) for s, c in zip(starts, counts)]


def rle_decode_types(runs: Sequence[TypeRun], count: int) -> np.ndarray:
    total = sum(run.count for run in runs)
    if total != count:
        raise CorruptionError(f"Type runs cover {total} records, expected {count}")
    if not runs:
        return np.zeros(0, dtype=np.uint8)
    return np.repeat(np.array([r.value for r in runs], dtype=np.uint8),
                     np.array([r.count for r in runs], dtype=np.int64))


def encode_type_page(codes: Sequence[int]) -> bytes:
    runs = rle_encode_types(codes)
    return bytes([ENCODING_RLE]) + struct.pack('<I', len(runs)) + b"".join(_RUN.pack(*r) for r in runs)


def decode_type_page(payload: bytes, count: int) -> np.ndarray:
    if len(payload) < 5 or payload[0] != ENCODING_RLE:
        raise FormatError("TYPE page is not run-length encoded")
    (nruns,) = struct.unpack_from('<I', payload, 1)
    if len(payload) != 5 + nruns * _RUN.size:
        raise CorruptionError(f"TYPE page length {len(payload)} does not fit {nruns} runs")
    runs = []
    for i in range(nruns):
        run = TypeRun(*_RUN.unpack_from(payload, 5 + i * _RUN.size))
        if run.count < 1 or run.value > GeometryType.MULTIPOLYGON:
            raise CorruptionError(f"Invalid type run {run}")
        runs.append(run)
    return rle_decode_types(runs, count)


def encode_levels_page(rep: np.ndarray, definition: np.ndarray) -> bytes:
    """Two bits of repetition and two of definition level per entry, two entries per byte"""
    nibbles = (np.asarray(rep, dtype=np.uint8) & 3) | ((np.asarray(definition, dtype=np.uint8) & 3) << 2)
    if nibbles.size % 2:
        nibbles = np.append(nibbles, np.uint8(0))
    packed = nibbles[0::2] | (nibbles[1::2] << 4)
    return bytes([ENCODING_PACKED_LEVELS]) + packed.astype(np.uint8).tobytes()


def decode_levels_page(payload: bytes, count: int) -> Tuple[np.ndarray, np.ndarray]:
    if not payload or payload[0] != ENCODING_PACKED_LEVELS:
        raise FormatError("LEVELS page is not bit-packed")
    if len(payload) - 1 != (count + 1) // 2:
        raise CorruptionError(f"LEVELS page holds {len(payload) - 1} bytes for {count} entries")
    packed = np.frombuffer(payload, dtype=np.uint8, offset=1)
    nibbles = np.empty(packed.size * 2, dtype=np.uint8)
    nibbles[0::2] = packed & 0x0F
    nibbles[1::2] = packed >> 4
    nibbles = nibbles[:count]
    return nibbles & 3, nibbles >> 2


def encode_id_page(ids: np.ndarray) -> bytes:
    return bytes([ENCODING_PLAIN]) + np.asarray(ids, dtype='<i8').tobytes()


def decode_id_page(payload: bytes, count: int) -> np.ndarray:
    if not payload or payload[0] != ENCODING_PLAIN:
        raise FormatError("ID page is not plain encoded")
    if len(payload) != 1 + 8 * count:
        raise CorruptionError(f"ID page holds {len(payload) - 1} bytes for {count} ids")
    return np.frombuffer(payload, dtype='<i8', offset=1).astype(np.int64)


def compress_page(payload: bytes, compression: int) -> Tuple[bytes, int]:
    """Deflate the page; keep it uncompressed when deflate does not shrink it"""
    if compression == COMPRESSION_NONE or not payload:
        return payload, COMPRESSION_NONE
    if compression != COMPRESSION_DEFLATE:
        raise FormatError(f"Unknown compression code: {compression}")
    packer = zlib.compressobj(9, zlib.DEFLATED, -15)
    packed = packer.compress(payload) + packer.flush()
    if len(packed) >= len(payload):
        return payload, COMPRESSION_NONE
    return packed, COMPRESSION_DEFLATE


def decompress_page(stored: bytes, compression: int, uncompressed_size: int) -> bytes:
    if compression == COMPRESSION_NONE:
        payload = stored
    elif compression == COMPRESSION_DEFLATE:
        try:
            payload = zlib.decompress(stored, -15)
        except zlib.error as e:
            raise CorruptionError(f"Deflate page is corrupt: {e}")
    else:
        raise FormatError(f"Unknown compression code: {compression}")
    if len(payload) != uncompressed_size:
        raise CorruptionError(f"Page decompressed to {len(payload)} bytes, expected {uncompressed_size}")
    return payload

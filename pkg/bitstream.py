"""
LSB-first bit packing. Bits fill each byte from the least significant end and
multi-bit values are written little end first, so a value of width k written
at bit offset p occupies bits p .. p+k-1 of the little-endian bit string.
"""

import numpy as np

from errors import CorruptionError

_WEIGHTS = np.uint64(1) << np.arange(64, dtype=np.uint64)


class BitWriter:
    def __init__(self):
        self._buf = bytearray()
        self._acc = 0
        self._nbits = 0  # pending bits in _acc (0..7 between calls)
        self.bits_written = 0

    def write(self, value: int, width: int):
        """Append the `width` least-significant bits of value"""
        if width <= 0:
            return
        self._acc |= (int(value) & ((1 << width) - 1)) << self._nbits
        self._nbits += width
        self.bits_written += width
        nbytes = self._nbits >> 3
        if nbytes:
            self._buf += (self._acc & ((1 << (nbytes << 3)) - 1)).to_bytes(nbytes, 'little')
            self._acc >>= nbytes << 3
            self._nbits &= 7

    def write_many(self, values: np.ndarray, widths: np.ndarray):
        """Vectorized write of values[i] with widths[i] bits each"""
        values = np.asarray(values, dtype=np.uint64)
        widths = np.asarray(widths, dtype=np.int64)
        if values.size == 0:
            return
        shifts = np.arange(64, dtype=np.uint64)
        bits = ((values[:, None] >> shifts) & np.uint64(1)).astype(np.uint8)
        bits = bits[shifts[None, :].astype(np.int64) < widths[:, None]]
        if self._nbits:
            pending = np.array([(self._acc >> i) & 1 for i in range(self._nbits)], dtype=np.uint8)
            bits = np.concatenate([pending, bits])
        self.bits_written += int(widths.sum())
        full = (bits.size >> 3) << 3
        self._buf += np.packbits(bits[:full], bitorder='little').tobytes()
        tail = bits[full:]
        self._acc = sum(int(b) << i for i, b in enumerate(tail))
        self._nbits = int(tail.size)

    def getvalue(self) -> bytes:
        """Bytes written so far, the last byte zero-padded"""
        if self._nbits:
            return bytes(self._buf) + bytes([self._acc])
        return bytes(self._buf)


class BitReader:
    def __init__(self, data: bytes, offset_bits: int = 0):
        self._data = bytes(data)
        self._total = len(self._data) * 8
        self.position = offset_bits
        self._bits = None

    @property
    def remaining(self) -> int:
        return self._total - self.position

    def read(self, width: int) -> int:
        """Next `width` bits, zero-extended"""
        if width <= 0:
            return 0
        if self.position + width > self._total:
            raise CorruptionError(
                f"Bit stream exhausted: need {width} bits at bit {self.position}, {self.remaining} left")
        start = self.position >> 3
        shift = self.position & 7
        end = (self.position + width + 7) >> 3
        chunk = int.from_bytes(self._data[start:end], 'little')
        self.position += width
        return (chunk >> shift) & ((1 << width) - 1)

    def peek_many(self, width: int, count: int) -> np.ndarray:
        """Up to `count` consecutive width-bit values without consuming them"""
        count = min(count, self.remaining // width) if width else 0
        if count <= 0:
            return np.zeros(0, dtype=np.uint64)
        if self._bits is None:
            self._bits = np.unpackbits(np.frombuffer(self._data, dtype=np.uint8), bitorder='little')
        index = self.position + np.arange(count, dtype=np.int64)[:, None] * width + np.arange(width)
        return (self._bits[index].astype(np.uint64) * _WEIGHTS[:width]).sum(axis=1, dtype=np.uint64)

    def skip(self, nbits: int):
        if self.position + nbits > self._total:
            raise CorruptionError(f"Cannot skip {nbits} bits, {self.remaining} left")
        self.position += nbits

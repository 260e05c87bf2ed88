import math
import struct

import numpy as np
import pytest

import fp_delta
from bitstream import BitReader, BitWriter
from errors import CorruptionError, FormatError
from fp_delta import (DeltaHistogram, compute_best_delta_bits, decode_coordinate_page, encode_coordinate_page,
                      encoded_size_bits, estimated_size, fp_delta_decode, fp_delta_encode, marker_collisions,
                      significant_bits, zigzag_decode, zigzag_deltas, zigzag_encode)

ADVERSARIAL = [0.0, -0.0, math.inf, -math.inf, math.nan, 5e-324, -5e-324, 2.2250738585072014e-308,
               1.7976931348623157e308, -1.7976931348623157e308, 1.0, -1.0]


def encode_pinned(values, width):
    w = BitWriter()
    fp_delta_encode(values, w, width)
    return w


def bits_of(values):
    return np.asarray(values, dtype=np.float64).view(np.uint64)


@pytest.mark.parametrize("delta,z", [(0, 0), (-1, 1), (1, 2), (-2, 3), (2, 4)])
def test_zigzag_vectors(delta, z):
    assert zigzag_encode(delta) == z
    assert zigzag_decode(z) == delta


def test_zigzag_extremes():
    low, high = -(1 << 63), (1 << 63) - 1
    assert zigzag_encode(high) == (1 << 64) - 2
    assert zigzag_encode(low) == (1 << 64) - 1
    assert zigzag_decode(zigzag_encode(low)) == low


def test_vectorized_zigzag_matches_scalar():
    values = np.array([1.0, 1.5, -3.0, math.inf, 0.0, -0.0, 1e-300])
    ints = [struct.unpack('<q', struct.pack('<d', v))[0] for v in values]
    expected = [zigzag_encode(b - a) for a, b in zip(ints, ints[1:])]
    assert zigzag_deltas(values).tolist() == expected


def test_significant_bits():
    assert significant_bits(0) == 0
    assert significant_bits(1) == 1
    assert significant_bits((1 << 64) - 1) == 64
    z = np.array([0, 1, 2, 3, 255, 256, (1 << 64) - 1], dtype=np.uint64)
    assert fp_delta.significant_bits_array(z).tolist() == [0, 1, 2, 2, 8, 9, 64]


def test_histogram_and_suffix_sums():
    hist = DeltaHistogram.from_zigzags(np.array([0, 0, 1, 2, 3, 1 << 40], dtype=np.uint64))
    assert hist.counts.size == 65
    assert hist.counts[0] == 2 and hist.counts[1] == 1 and hist.counts[2] == 2 and hist.counts[41] == 1
    at_least = hist.at_least()
    assert at_least[0] == 6
    assert at_least[1] == 4
    assert at_least[3] == 1
    assert at_least[42] == 0


def test_constant_sequence_width_and_size():
    values = [1.0, 1.0, 1.0]
    assert compute_best_delta_bits(values) == 1
    assert encoded_size_bits(values, 1) == 74
    assert encode_pinned(values, 1).bits_written == 74


def test_adjacent_doubles_choose_width_two():
    values = [1.0, np.nextafter(1.0, 2.0)]
    # zigzag delta is 2, which at width 1 or 2 collides with or exceeds the marker
    assert compute_best_delta_bits(values) == 2


def test_best_width_needs_two_values():
    with pytest.raises(ValueError):
        compute_best_delta_bits([1.0])


def test_encoded_length_matches_size_formula():
    rng = np.random.default_rng(11)
    values = np.cumsum(rng.normal(0, 1e-6, 2000)) + 40.0
    z = zigzag_deltas(values)
    n = compute_best_delta_bits(values)
    suffix = np.append(DeltaHistogram.from_zigzags(z).at_least(), 0)
    expected = estimated_size(n, suffix, values.size) + 64 * int(marker_collisions(z)[n])
    w = encode_pinned(values, n)
    assert w.bits_written == fp_delta.HEADER_BITS + expected


def test_marker_collisions_counts_all_ones_patterns():
    z = np.array([1, 3, 7, 7, 6, 0], dtype=np.uint64)
    collisions = marker_collisions(z)
    assert collisions[1] == 1 and collisions[2] == 1 and collisions[3] == 2 and collisions[4] == 0


def _random_arrays(rng, count):
    for i in range(count):
        size = int(rng.integers(2, 400))
        kind = i % 5
        if kind == 0:
            yield rng.normal(0, 1, size)
        elif kind == 1:
            yield np.round(np.cumsum(rng.normal(0, 0.01, size)), 3)
        elif kind == 2:
            yield rng.choice(np.array(ADVERSARIAL), size)
        elif kind == 3:
            yield np.repeat(rng.uniform(-180, 180, max(1, size // 10)), 10)[:size]
        else:
            yield rng.integers(0, 1 << 63, size, dtype=np.uint64).view(np.float64)


def test_chosen_width_is_optimal_against_pinned_encodes():
    rng = np.random.default_rng(7)
    for values in _random_arrays(rng, 60):
        sizes = [encode_pinned(values, n).bits_written for n in range(1, 65)]
        best = compute_best_delta_bits(values)
        assert sizes[best - 1] == min(sizes)
        assert all(encoded_size_bits(values, n) == sizes[n - 1] for n in (1, best, 64))


@pytest.mark.slow
def test_chosen_width_is_optimal_over_many_arrays():
    rng = np.random.default_rng(2024)
    checked = 0
    for values in _random_arrays(rng, 1000):
        if checked % 10 == 0:
            values = np.round(np.cumsum(rng.normal(0, 0.1, int(rng.integers(2, 10000)))), 4)
        best = compute_best_delta_bits(values)
        sizes = [encode_pinned(values, n).bits_written for n in range(1, 65)]
        assert sizes[best - 1] == min(sizes)
        checked += 1
    assert checked == 1000


@pytest.mark.parametrize("width", [1, 2, 5, 17, 63, 64])
def test_decode_inverts_encode_bit_exactly(width):
    rng = np.random.default_rng(width)
    values = np.concatenate([np.array(ADVERSARIAL), rng.normal(0, 1, 200), np.full(20, 3.25)])
    w = encode_pinned(values, width)
    decoded = fp_delta_decode(BitReader(w.getvalue()), values.size)
    assert bits_of(decoded).tolist() == bits_of(values).tolist()


def test_nan_payloads_survive():
    quiet = np.array([0x7FF8000000000001, 0xFFF0000000000001], dtype=np.uint64).view(np.float64)
    values = np.concatenate([quiet, [1.0, 2.0]])
    payload, _, _ = encode_coordinate_page(values)
    assert bits_of(decode_coordinate_page(payload, values.size)).tolist() == bits_of(values).tolist()


def test_bad_width_header_is_rejected():
    w = BitWriter()
    w.write(0, 8)
    w.write(0, 64)
    with pytest.raises(FormatError):
        fp_delta_decode(BitReader(w.getvalue()), 2)


def test_truncated_stream_is_detected():
    values = np.repeat([1.0, 2.0], 50)
    payload, flag, _ = encode_coordinate_page(values)
    assert flag == fp_delta.ENCODING_FP_DELTA
    with pytest.raises(CorruptionError):
        decode_coordinate_page(payload[:len(payload) // 2], values.size)


def test_page_falls_back_to_raw_when_not_smaller():
    rng = np.random.default_rng(5)
    values = rng.integers(0, 1 << 64, 50, dtype=np.uint64).view(np.float64)
    payload, flag, width = encode_coordinate_page(values)
    assert flag == fp_delta.ENCODING_RAW and width is None
    assert len(payload) == 1 + 8 * values.size


def test_single_value_page_is_raw_and_empty_page_is_empty():
    payload, flag, _ = encode_coordinate_page([2.5])
    assert flag == fp_delta.ENCODING_RAW
    assert decode_coordinate_page(payload, 1).tolist() == [2.5]
    assert encode_coordinate_page([])[0] == b""
    assert decode_coordinate_page(b"", 0).size == 0


def test_forced_raw_page():
    payload, flag, _ = encode_coordinate_page([1.0, 1.0, 1.0], force_raw=True)
    assert flag == fp_delta.ENCODING_RAW


def test_clustered_page_is_much_smaller_than_raw():
    values = np.repeat(np.round(np.linspace(10.0, 11.0, 100), 3), 20)
    payload, flag, width = encode_coordinate_page(values)
    assert flag == fp_delta.ENCODING_FP_DELTA
    assert len(payload) * 4 < 8 * values.size

import numpy as np
import pytest

from column_codecs import (COMPRESSION_DEFLATE, COMPRESSION_NONE, TypeRun, compress_page, decode_id_page,
                           decode_levels_page, decode_type_page, decompress_page, encode_id_page,
                           encode_levels_page, encode_type_page, rle_decode_types, rle_encode_types)
from errors import CorruptionError, FormatError


def test_rle_runs_are_maximal():
    runs = rle_encode_types([1, 1, 1, 3, 3, 0, 1])
    assert runs == [TypeRun(3, 1), TypeRun(2, 3), TypeRun(1, 0), TypeRun(1, 1)]
    assert rle_decode_types(runs, 7).tolist() == [1, 1, 1, 3, 3, 0, 1]


def test_rle_rejects_unknown_codes():
    with pytest.raises(FormatError):
        rle_encode_types([1, 7])


def test_rle_count_mismatch_is_corruption():
    with pytest.raises(CorruptionError):
        rle_decode_types([TypeRun(3, 1)], 4)


def test_single_type_page_is_constant_size():
    small = encode_type_page(np.ones(10, dtype=np.uint8))
    large = encode_type_page(np.ones(1_000_000, dtype=np.uint8))
    assert len(small) == len(large) <= 16
    assert decode_type_page(large, 1_000_000).sum() == 1_000_000


def test_type_page_length_is_checked():
    payload = encode_type_page([1, 2])
    with pytest.raises(CorruptionError):
        decode_type_page(payload[:-1], 2)


def test_levels_pack_two_entries_per_byte():
    rep = np.array([0, 2, 2, 1, 2, 0, 0], dtype=np.uint8)
    definition = np.array([2, 2, 2, 2, 2, 0, 2], dtype=np.uint8)
    payload = encode_levels_page(rep, definition)
    assert len(payload) == 1 + 4
    r, d = decode_levels_page(payload, rep.size)
    assert r.tolist() == rep.tolist()
    assert d.tolist() == definition.tolist()


def test_id_page_round_trip():
    ids = np.array([5, -1, 1 << 40], dtype=np.int64)
    assert decode_id_page(encode_id_page(ids), 3).tolist() == ids.tolist()
    with pytest.raises(CorruptionError):
        decode_id_page(encode_id_page(ids), 4)


def test_deflate_kept_only_when_smaller():
    compressible = bytes(4096)
    stored, code = compress_page(compressible, COMPRESSION_DEFLATE)
    assert code == COMPRESSION_DEFLATE and len(stored) < len(compressible)
    assert decompress_page(stored, code, len(compressible)) == compressible

    noise = np.random.default_rng(1).integers(0, 256, 64, dtype=np.uint8).tobytes()
    stored, code = compress_page(noise, COMPRESSION_DEFLATE)
    assert code == COMPRESSION_NONE and stored == noise


def test_corrupt_deflate_page():
    stored, code = compress_page(bytes(4096), COMPRESSION_DEFLATE)
    with pytest.raises(CorruptionError):
        decompress_page(stored, code, 4000)
    with pytest.raises(FormatError):
        decompress_page(stored, 9, 4096)

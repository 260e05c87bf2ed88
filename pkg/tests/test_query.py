import math
import os
from collections import Counter

import numpy as np
import pytest

from config import WriteOptions
from container import GeoColumnReader, QueryStats, inspect, prune_pages, range_query, write_file
from corpus import clustered_points, random_geometries
from geometry import LineString, Point, geometry_key, mbr, mbr_intersects, normalize
from metadata import ColumnId
from synthetic import random_rects, shuffled


def oracle(records, q):
    return Counter(geometry_key(g) for g in records if mbr_intersects(mbr(g), q))


def run(path, q):
    stats = QueryStats()
    found = Counter(geometry_key(g) for g in range_query(path, q, stats))
    return found, stats


@pytest.fixture(scope="module")
def mixed_file(tmp_path_factory):
    records = random_geometries(4000, seed=21)
    path = str(tmp_path_factory.mktemp("query") / "mixed.spqf")
    write_file(records, path, WriteOptions(page_size=2048, sort="hilbert", batch_size=1500))
    return path, [normalize(g) for g in records]


def test_query_matches_full_scan(mixed_file):
    path, records = mixed_file
    for q in random_rects((-180, -90, 180, 90), 30, 0.01, seed=1):
        found, stats = run(path, q)
        assert found == oracle(records, q)
        assert stats.pages_selected <= stats.pages_total
        assert stats.records_matched == sum(found.values())


def test_global_rect_selects_everything(mixed_file):
    path, records = mixed_file
    q = (-math.inf, -math.inf, math.inf, math.inf)
    found, stats = run(path, q)
    footer = GeoColumnReader(path).footer
    with_values = sum(1 for rg in footer.row_groups for p in rg.chunks[ColumnId.X].pages if p.value_count)
    assert stats.pages_selected == with_values
    assert found == oracle(records, q)


def test_degenerate_rect_is_a_point_query(tmp_path):
    path = str(tmp_path / "pts.spqf")
    write_file([Point(1, 1), Point(2, 2), LineString([(0, 0), (3, 3)])], path)
    found = list(range_query(path, (2, 2, 2, 2)))
    assert len(found) == 2


def test_inverted_rect_is_rejected(mixed_file):
    path, _ = mixed_file
    with pytest.raises(ValueError):
        list(range_query(path, (1, 0, 0, 1)))


def test_pages_with_nan_are_never_pruned(tmp_path):
    path = str(tmp_path / "nan.spqf")
    records = [Point(float(i), float(i)) for i in range(400)] + [Point(math.nan, math.nan)]
    write_file(records, path, WriteOptions(page_size=512))
    footer = GeoColumnReader(path).footer
    selection = prune_pages(footer, (1000, 1000, 1001, 1001))
    pages = footer.row_groups[0].chunks
    with_nulls = [i for i, p in enumerate(pages[ColumnId.X].pages) if p.stats.null_count]
    assert with_nulls and selection[0] == with_nulls
    assert list(range_query(path, (1000, 1000, 1001, 1001))) == []


def test_ids_are_reported(tmp_path):
    records = [Point(float(i), 0.0) for i in range(100)]
    path = str(tmp_path / "ids.spqf")
    write_file(shuffled(enumerate(records), seed=3), path, WriteOptions(with_ids=True, page_size=256), ids=True)
    hits = dict(range_query(path, (10, -1, 19, 1), with_ids=True))
    assert sorted(hits) == list(range(10, 20))
    assert all(hits[i].x == float(i) for i in hits)


def test_bytes_read_bounded_by_file_size(mixed_file):
    path, _ = mixed_file
    stats = QueryStats()
    list(range_query(path, (-10, -10, 10, 10), stats))
    assert 0 < stats.bytes_read <= os.path.getsize(path)


def test_sorting_shifts_the_delta_histogram(tmp_path):
    points = shuffled(clustered_points(100_000, 100, 0.5, (-180, -90, 180, 90), seed=5), seed=6)
    plain, sorted_ = str(tmp_path / "plain.spqf"), str(tmp_path / "sorted.spqf")
    write_file(points, plain, WriteOptions(page_size=65536))
    write_file(points, sorted_, WriteOptions(page_size=65536, sort="hilbert"))
    before = inspect(plain)["histograms"]["x"]
    after = inspect(sorted_)["histograms"]["x"]
    assert after["mean_bits"] < before["mean_bits"]
    assert before["exact_bits"][64] >= 10 * max(after["exact_bits"][64], 1)


def _write_twins(root, resolution, sorts):
    points = clustered_points(1_000_000, 100, 0.01, (0, 0, 1, 1), seed=42, resolution=resolution)
    paths = {}
    for sort in sorts:
        path = str(root / f"{sort}.spqf")
        write_file(points, path, WriteOptions(page_size=16384, sort=sort))
        paths[sort] = path
    return points, paths


def _coordinate_ratio(path, count):
    report = inspect(path, histograms=False)
    coords = report["columns"]["x"]["stored_bytes"] + report["columns"]["y"]["stored_bytes"]
    return coords / (8 * 2 * count)


@pytest.fixture(scope="module")
def clustered_twins(tmp_path_factory):
    return _write_twins(tmp_path_factory.mktemp("clustered"), None, ("none", "hilbert"))


@pytest.fixture(scope="module")
def snapped_clustered(tmp_path_factory):
    return _write_twins(tmp_path_factory.mktemp("snapped"), 0.001, ("hilbert",))


@pytest.mark.slow
def test_fp_delta_on_sorted_gaussian_clusters(clustered_twins, record_property):
    # unquantized noise keeps ~45 significant bits per delta; measured ratio is about 0.72
    points, paths = clustered_twins
    ratio = _coordinate_ratio(paths["hilbert"], len(points))
    record_property("coordinate_ratio", round(ratio, 4))
    assert ratio <= 0.75
    assert ratio < _coordinate_ratio(paths["none"], len(points))


@pytest.mark.slow
def test_fp_delta_halves_grid_snapped_clustered_coordinates(snapped_clustered, record_property):
    points, paths = snapped_clustered
    ratio = _coordinate_ratio(paths["hilbert"], len(points))
    record_property("coordinate_ratio", round(ratio, 4))
    assert ratio <= 0.5


@pytest.mark.slow
def test_pruning_on_sorted_clustered_points(clustered_twins):
    points, paths = clustered_twins
    xs = np.array([p.x for p in points])
    ys = np.array([p.y for p in points])
    plain_footer = GeoColumnReader(paths["none"]).footer
    plain_total = sum(len(rg.chunks[ColumnId.X].pages) for rg in plain_footer.row_groups)
    sorted_ratios, plain_ratios = [], []
    for q in random_rects((0, 0, 1, 1), 100, 0.0001, seed=7):
        stats = QueryStats()
        found = Counter((g.x, g.y) for g in range_query(paths["hilbert"], q, stats))
        inside = (xs >= q[0]) & (xs <= q[2]) & (ys >= q[1]) & (ys <= q[3])
        assert found == Counter(zip(xs[inside].tolist(), ys[inside].tolist()))
        sorted_ratios.append(stats.pages_selected / stats.pages_total)
        plain_ratios.append(sum(len(v) for v in prune_pages(plain_footer, q).values()) / plain_total)
    assert np.mean(sorted_ratios) <= 0.05
    assert np.mean(plain_ratios) >= 5 * np.mean(sorted_ratios)

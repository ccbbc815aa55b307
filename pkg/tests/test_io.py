import math

import numpy as np
import pytest

from reachkit.errors import InvalidInputError
from reachkit.geometry import PointCloud
from reachkit.io import (
    format_float,
    read_cloud_csv,
    read_metric_csv,
    unwire_float,
    wire_float,
    write_cloud_csv,
    write_metric_csv,
)


def test_format_float_round_trip():
    for x in (0.1, -3.5, 1e-300, 6.02e23, 0.0):
        assert float(format_float(x)) == x
    assert format_float(float("inf")) == "inf"
    assert format_float(float("-inf")) == "-inf"
    assert format_float(float("nan")) == "nan"


def test_wire_float():
    assert wire_float(1.25) == 1.25
    assert wire_float(float("inf")) is None
    assert wire_float(float("nan")) is None
    assert unwire_float(None) == math.inf
    assert unwire_float(None, missing=math.nan) is not None and math.isnan(
        unwire_float(None, missing=math.nan)
    )
    assert unwire_float(2.5) == 2.5


def test_cloud_round_trip(tmp_path):
    pts = np.array([[0.0, 1.5], [-2.25, 3.125], [1e-7, -6.02e23]])
    path = str(tmp_path / "cloud.csv")
    write_cloud_csv(path, PointCloud(pts))
    back = read_cloud_csv(path)
    np.testing.assert_array_equal(back.points, pts)


def test_cloud_header_checked(tmp_text):
    with pytest.raises(InvalidInputError):
        read_cloud_csv(tmp_text("bad.csv", "1.0,2.0\n3.0,4.0\n"))
    with pytest.raises(InvalidInputError):
        read_cloud_csv(tmp_text("mismatch.csv", "# dim=2\n1.0,2.0\n3.0\n"))
    with pytest.raises(InvalidInputError):
        read_cloud_csv(tmp_text("empty.csv", "# dim=2\n"))


def test_metric_round_trip(tmp_path):
    table = np.array([[0.0, 1.0, math.inf], [1.0, 0.0, 2.5], [math.inf, 2.5, 0.0]])
    path = str(tmp_path / "metric.csv")
    write_metric_csv(path, table)
    back = read_metric_csv(path)
    np.testing.assert_array_equal(back, table)


def test_metric_comments_skipped(tmp_text):
    path = tmp_text("m.csv", "# produced by hand\n0.0,1.0\n1.0,0.0\n")
    np.testing.assert_array_equal(read_metric_csv(path), [[0.0, 1.0], [1.0, 0.0]])


def test_metric_requires_square(tmp_text):
    with pytest.raises(InvalidInputError):
        read_metric_csv(tmp_text("rect.csv", "0.0,1.0,2.0\n1.0,0.0,3.0\n"))

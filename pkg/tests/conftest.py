"""Shared builders for the test suite."""

import numpy as np
import pytest

from reachkit.geometry import FiniteMetricSpace, PointCloud
from reachkit.rng import rng_stream


def circle_cloud(n: int, seed: int, R: float = 1.0) -> PointCloud:
    """Uniform sample of the circle of radius R, angle-sorted."""
    rng = rng_stream(seed, 77)
    theta = np.sort(rng.uniform(0.0, 2.0 * np.pi, size=n))
    pts = np.column_stack([R * np.cos(theta), R * np.sin(theta)])
    return PointCloud(pts)


def circle_space(n: int, seed: int, R: float = 1.0) -> FiniteMetricSpace:
    """Circle sample with its exact arc-length metric."""
    rng = rng_stream(seed, 77)
    theta = np.sort(rng.uniform(0.0, 2.0 * np.pi, size=n))
    pts = np.column_stack([R * np.cos(theta), R * np.sin(theta)])
    gap = np.abs(theta[:, None] - theta[None, :])
    arc = R * np.minimum(gap, 2.0 * np.pi - gap)
    return FiniteMetricSpace(PointCloud(pts), arc, intrinsic=True)


@pytest.fixture
def tmp_text(tmp_path):
    """Factory writing literal text files under tmp_path."""

    def _write(name: str, text: str) -> str:
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    return _write

import numpy as np
import pytest

from reachkit.errors import InvalidInputError
from reachkit.rng import rng_stream


def test_reproducible():
    a = rng_stream(7).uniform(size=8)
    b = rng_stream(7).uniform(size=8)
    np.testing.assert_array_equal(a, b)


def test_keys_fork_streams():
    base = rng_stream(7).uniform(size=4)
    keyed = rng_stream(7, 1).uniform(size=4)
    other = rng_stream(7, 2).uniform(size=4)
    assert not np.array_equal(base, keyed)
    assert not np.array_equal(keyed, other)


def test_key_order_matters():
    a = rng_stream(3, 1, 2).uniform(size=4)
    b = rng_stream(3, 2, 1).uniform(size=4)
    assert not np.array_equal(a, b)


def test_frozen_draws():
    # Philox bit-stream is stable across numpy releases; first three
    # uniforms of stream (7,) and (7, 1) are pinned here.
    got = rng_stream(7).uniform(size=3)
    np.testing.assert_allclose(got, [0.46881749, 0.42614584, 0.3629817], atol=5e-9)
    got = rng_stream(7, 1).uniform(size=3)
    np.testing.assert_allclose(got, [0.27499625, 0.89093307, 0.26646541], atol=5e-9)


def test_numpy_int_keys_accepted():
    a = rng_stream(np.int64(5), np.int32(2)).uniform(size=3)
    b = rng_stream(5, 2).uniform(size=3)
    np.testing.assert_array_equal(a, b)


def test_string_key_rejected():
    with pytest.raises((InvalidInputError, TypeError, ValueError)):
        rng_stream(1, "tag")

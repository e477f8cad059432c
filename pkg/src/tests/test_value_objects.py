"""
Unit tests for value objects: flag parsing, tolerances and random streams.
"""
import numpy as np
import pytest

from domain.value_objects import (
    MACHINE_EPS,
    condition_aware,
    is_strictly_increasing,
    parse_dims,
    parse_float_triple,
    parse_int_list,
    parse_int_triple,
    relative_error,
    relative_threshold,
    rng_for,
    unit_vector,
)


class TestDimsParsing:
    """Tests for --dims parsing."""

    @pytest.mark.parametrize("text,expected", [
        ("20x30", [(20, 30)]),
        ("20x30,50x80", [(20, 30), (50, 80)]),
        ("1X1", [(1, 1)]),
        (" 3x4 , 5x6 ", [(3, 4), (5, 6)]),
    ])
    def test_valid(self, text, expected):
        """Valid dims lists parse to (rows, cols) pairs."""
        ok, dims, err = parse_dims(text)
        assert ok and err is None
        assert dims == expected

    @pytest.mark.parametrize("text", ["", "20", "20x", "0x3", "2x3,", "axb"])
    def test_invalid(self, text):
        """Malformed dims lists are rejected with a message."""
        ok, dims, err = parse_dims(text)
        assert not ok
        assert dims is None
        assert err


class TestListParsing:
    """Tests for integer and float list flags."""

    def test_int_list(self):
        """Comma-separated integers."""
        assert parse_int_list("8,16,32") == (True, [8, 16, 32], None)

    def test_int_list_rejects_negative(self):
        """Signs are not allowed."""
        ok, _, _ = parse_int_list("8,-16")
        assert not ok

    def test_int_triple_pads(self):
        """Missing counts default to one cell."""
        assert parse_int_triple("8")[1] == (8, 1, 1)
        assert parse_int_triple("4,4")[1] == (4, 4, 1)

    def test_int_triple_too_long(self):
        """At most three counts."""
        assert not parse_int_triple("1,2,3,4")[0]

    def test_float_triple(self):
        """Lengths pad with 1.0 and must be positive."""
        assert parse_float_triple("2.5")[1] == (2.5, 1.0, 1.0)
        assert not parse_float_triple("1,0")[0]
        assert not parse_float_triple("1,inf")[0]

    def test_strictly_increasing(self):
        """Strict ordering check."""
        assert is_strictly_increasing([8, 16, 32])
        assert not is_strictly_increasing([8, 8])
        assert is_strictly_increasing([8])


class TestTolerances:
    """Tests for tolerance helpers."""

    def test_condition_aware_keeps_stated_when_well_conditioned(self):
        """Small condition numbers leave the stated threshold."""
        assert condition_aware(1e-8, 10.0) == 1e-8

    def test_condition_aware_grows_with_condition(self):
        """Large condition numbers widen the threshold."""
        assert condition_aware(1e-8, 1e12) == pytest.approx(64 * MACHINE_EPS * 1e12)

    def test_condition_aware_infinite(self):
        """Rank-zero operators keep the stated threshold."""
        assert condition_aware(1e-8, float("inf")) == 1e-8

    def test_relative_threshold(self):
        """Cutoff is tol times the largest singular value."""
        assert relative_threshold(4.0, 1e-10) == pytest.approx(4e-10)
        assert relative_threshold(0.0) == 0.0

    def test_relative_error(self):
        """Relative error, absolute when the reference vanishes."""
        assert relative_error([1.0, 1.0], [1.0, 0.0]) == 1.0
        assert relative_error([0.5], [0.0]) == 0.5


class TestRandomStreams:
    """Tests for seeded random streams."""

    def test_same_key_same_stream(self):
        """Equal keys reproduce the stream."""
        a = rng_for(42, 1, 2).standard_normal(5)
        b = rng_for(42, 1, 2).standard_normal(5)
        np.testing.assert_array_equal(a, b)

    def test_different_keys_differ(self):
        """Streams with different keys are independent."""
        a = rng_for(42, 1, 2).standard_normal(5)
        b = rng_for(42, 2, 1).standard_normal(5)
        assert not np.array_equal(a, b)

    def test_unit_vector(self, rng):
        """Unit vectors have norm one."""
        assert np.linalg.norm(unit_vector(rng, 7)) == pytest.approx(1.0)

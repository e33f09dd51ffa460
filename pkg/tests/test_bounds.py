"""Ordering and saturating arithmetic of the extended dimension values."""

import pytest

from asdimlab.bounds import (
    FINITE_UNKNOWN,
    UNKNOWN,
    DimBound,
    ExtendedDim,
    InconsistentBoundError,
    finite,
)


def test_total_order():
    chain = [finite(n) for n in range(7)] + [FINITE_UNKNOWN, UNKNOWN]
    for i, a in enumerate(chain):
        for j, b in enumerate(chain):
            assert (a < b) == (i < j)
            assert (a == b) == (i == j)
            assert (a <= b) == (i <= j)
    assert max(chain) is UNKNOWN
    assert min(chain) == finite(0)


def test_sorting_is_stable_under_str():
    values = [UNKNOWN, finite(3), FINITE_UNKNOWN, finite(0), finite(5)]
    assert [str(v) for v in sorted(values)] == ["0", "3", "5", "fin", "?"]


def test_addition_saturates():
    assert finite(2) + finite(3) == finite(5)
    assert finite(2) + FINITE_UNKNOWN == FINITE_UNKNOWN
    assert FINITE_UNKNOWN + FINITE_UNKNOWN == FINITE_UNKNOWN
    assert finite(2) + UNKNOWN == UNKNOWN
    assert FINITE_UNKNOWN + UNKNOWN == UNKNOWN
    assert UNKNOWN + UNKNOWN == UNKNOWN


def test_flags():
    assert finite(4).is_number and finite(4).is_finite
    assert not FINITE_UNKNOWN.is_number
    assert FINITE_UNKNOWN.is_finite
    assert not UNKNOWN.is_number
    assert not UNKNOWN.is_finite


def test_extended_dim_parse_roundtrip():
    for token in [str(n) for n in range(9)] + ["fin", "?"]:
        assert str(ExtendedDim.parse(token)) == token
    with pytest.raises(ValueError):
        ExtendedDim.parse("three")
    with pytest.raises(ValueError):
        ExtendedDim.parse("-1")


def test_negative_value_rejected():
    with pytest.raises(ValueError):
        finite(-1)


def test_dimbound_validation():
    b = DimBound(2, finite(4))
    assert str(b) == "2..4"
    with pytest.raises(ValueError):
        DimBound(-1, finite(0))
    with pytest.raises(InconsistentBoundError):
        DimBound(3, finite(2))
    # qualitative uppers never conflict with a numeric lower
    assert DimBound(5, FINITE_UNKNOWN).upper is FINITE_UNKNOWN
    assert DimBound(5, UNKNOWN).upper is UNKNOWN


def test_dimbound_parse():
    for text in ("0..0", "1..4", "2..fin", "3..?"):
        assert str(DimBound.parse(text)) == text
    assert DimBound.exact(3) == DimBound(3, finite(3))
    with pytest.raises(ValueError):
        DimBound.parse("4")
    with pytest.raises(ValueError):
        DimBound.parse("a..b")
    with pytest.raises(InconsistentBoundError):
        DimBound.parse("4..1")

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from ritzid.dataio import load, parse_csv, read_binary, save
from ritzid.errors import DataFormatError


def test_csv_plain_and_header():
    np.testing.assert_array_equal(parse_csv("1,2\n3,4\n"), [[1, 2], [3, 4]])
    np.testing.assert_array_equal(parse_csv("a,b\n1,2\n3,4\n"), [[1, 2], [3, 4]])
    np.testing.assert_array_equal(parse_csv("1, 2\n\n3 ,4e0\n"), [[1, 2], [3, 4]])


@pytest.mark.parametrize("text, row, col", [
    ("1,2\n3,x\n", 2, 2),
    ("1,2\n3,4,5\n", 2, None),
    ("h1,h2\n1,2\n3\n", 3, None),
    ("1,2\nnan,4\n", 2, 1),
])
def test_csv_errors_locate(text, row, col):
    with pytest.raises(DataFormatError) as info:
        parse_csv(text)
    assert info.value.row == row
    assert info.value.col == col
    assert f"row {row}" in str(info.value)


def test_csv_empty():
    with pytest.raises(DataFormatError):
        parse_csv("a,b\n")


def test_binary_errors(tmp_path):
    with pytest.raises(DataFormatError):
        read_binary(b"RID")
    with pytest.raises(DataFormatError):
        read_binary(b"XXXX" + bytes(18))
    path = tmp_path / "x.bin"
    save(np.ones((2, 3)), path)
    data = path.read_bytes()
    assert len(data) == 22 + 48
    with pytest.raises(DataFormatError):
        read_binary(data[:-1])


finite = st.floats(-1e300, 1e300, allow_nan=False, allow_subnormal=False)


@settings(max_examples=25, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(1, 6), st.integers(1, 5)), elements=finite))
def test_roundtrip(tmp_path_factory, X):
    d = tmp_path_factory.mktemp("rt")
    for name in ("a.csv", "a.bin"):
        save(X, d / name)
        np.testing.assert_array_equal(load(d / name), X)

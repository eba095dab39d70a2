import numpy as np
import pytest

from smoothlasso.errors import DimensionMismatch
from smoothlasso.io import fmt, load_xy, read_table, read_vector


def test_header_detection(tmp_path):
    f = tmp_path / "d.csv"
    f.write_text("a,b,y\n1,2,3\n4,5,6\n")
    t = read_table(f)
    assert t.names == ("a", "b", "y") and t.values.shape == (2, 3)
    f.write_text("1,2,3\n4,5,6\n")
    assert read_table(f).names is None


def test_load_xy_variants(tmp_path):
    f = tmp_path / "d.csv"
    f.write_text("a,y,b\n1,10,2\n3,20,4\n5,30,7\n")
    X, Y, names = load_xy(f, response_col="y")
    assert Y.tolist() == [10, 20, 30] and names == ("a", "b")
    X, Y, _ = load_xy(f)
    assert Y.tolist() == [2, 4, 7]
    X, Y, _ = load_xy(f, response_col="0")
    assert Y.tolist() == [1, 3, 5]
    r = tmp_path / "y.csv"
    r.write_text("1\n2\n3\n")
    X, Y, _ = load_xy(f, response_path=r)
    assert X.shape == (3, 3) and Y.tolist() == [1, 2, 3]
    with pytest.raises(KeyError):
        load_xy(f, response_col="nope")
    with pytest.raises(ValueError):
        load_xy(f, response_path=r, response_col="y")


def test_bad_files(tmp_path):
    f = tmp_path / "d.csv"
    f.write_text("1,2\n3\n")
    with pytest.raises(DimensionMismatch):
        read_table(f)
    f.write_text("")
    with pytest.raises(ValueError):
        read_table(f)
    f.write_text("1,nan\n")
    with pytest.raises(ValueError):
        read_table(f)
    f.write_text("1,2\n3,4\n")
    with pytest.raises(DimensionMismatch):
        read_vector(f)


def test_read_vector_row(tmp_path):
    f = tmp_path / "b.csv"
    f.write_text("1,0,-2\n")
    assert read_vector(f).tolist() == [1, 0, -2]


def test_fmt_roundtrip():
    for x in (0.1, 1 / 3, np.pi * 1e-300, 2.0**60 + 1):
        assert float(fmt(x)) == float(x)

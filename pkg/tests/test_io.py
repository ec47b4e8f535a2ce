import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from klpdhg.exceptions import DataError, ParseError
from klpdhg.io import (
    load_coefficients,
    load_csv,
    load_dataset,
    load_svmlight,
    make_correlated_problem,
    normalize_labels,
    sniff_format,
    sparse_pairs,
    write_csv,
    write_svmlight,
)


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


class TestSvmlight:
    def test_two_line_fixture(self, tmp_path):
        d = load_svmlight(write(tmp_path, "a.svm", "1 1:2.0 3:1.0\n0 2:-1.0\n"))
        assert d.design.is_sparse
        np.testing.assert_array_equal(d.design.toarray(), [[2, 0, 1], [0, -1, 0]])
        np.testing.assert_array_equal(d.y, [1, 0])

    def test_plus_minus_one_labels(self, tmp_path):
        d = load_svmlight(write(tmp_path, "a.svm", "+1 1:1\n-1 2:1\n"))
        np.testing.assert_array_equal(d.y, [1, 0])

    def test_comments_blank_lines_and_unsorted(self, tmp_path):
        text = "# header\n\n1 3:1.5 1:2 # trailing\n0\n"
        d = load_svmlight(write(tmp_path, "a.svm", text))
        np.testing.assert_array_equal(d.design.toarray(), [[2, 0, 1.5], [0, 0, 0]])

    def test_n_features(self, tmp_path):
        path = write(tmp_path, "a.svm", "1 1:1\n")
        assert load_svmlight(path, n_features=5).n == 5
        with pytest.raises(DataError):
            load_svmlight(write(tmp_path, "b.svm", "1 4:1\n"), n_features=2)

    @pytest.mark.parametrize("text,lineno", [
        ("1 1:2\n0 x:1\n", 2),
        ("1 1:2\n0 0:1\n", 2),
        ("1 1:abc\n", 1),
        ("1 1:2 1:3\n", 1),
        ("1 1:2\n\n0 12\n", 3),
        ("1 1:nan\n", 1),
    ])
    def test_parse_errors_carry_line(self, tmp_path, text, lineno):
        with pytest.raises(ParseError) as exc:
            load_svmlight(write(tmp_path, "a.svm", text))
        assert exc.value.lineno == lineno
        assert f"line {lineno}" in str(exc.value)

    def test_non_binary_label(self, tmp_path):
        with pytest.raises(DataError):
            load_svmlight(write(tmp_path, "a.svm", "1 1:2\n2 1:1\n"))


class TestCsv:
    def test_fixture(self, tmp_path):
        d = load_csv(write(tmp_path, "a.csv", "1.0,2.0,1\n3.0,4.0,0\n"))
        assert not d.design.is_sparse
        np.testing.assert_array_equal(d.design.matrix, [[1, 2], [3, 4]])
        np.testing.assert_array_equal(d.y, [1, 0])

    def test_header_skipped(self, tmp_path):
        d = load_csv(write(tmp_path, "a.csv", "x1,x2,y\n1,2,1\n3,4,0\n"))
        assert d.m == 2

    def test_ragged_rows(self, tmp_path):
        with pytest.raises(ParseError) as exc:
            load_csv(write(tmp_path, "a.csv", "1,2,1\n3,0\n"))
        assert exc.value.lineno == 2

    def test_label_two(self, tmp_path):
        with pytest.raises(DataError):
            load_csv(write(tmp_path, "a.csv", "1,2,1\n3,4,2\n"))

    def test_single_column(self, tmp_path):
        with pytest.raises(ParseError):
            load_csv(write(tmp_path, "a.csv", "1\n0\n"))


class TestLoadDataset:
    def test_sniffing(self, tmp_path):
        assert sniff_format(write(tmp_path, "a", "# c\n1 1:2\n")) == "svmlight"
        assert sniff_format(write(tmp_path, "b", "1,2,0\n")) == "csv"
        assert load_dataset(write(tmp_path, "c", "1,2,0\n3,4,1\n")).n == 2

    def test_empty_and_missing(self, tmp_path):
        with pytest.raises(DataError):
            load_dataset(write(tmp_path, "e", ""))
        with pytest.raises(DataError):
            load_dataset(write(tmp_path, "f", "# only a comment\n"))
        with pytest.raises(DataError):
            load_dataset(str(tmp_path / "missing"))

    def test_unknown_format(self, tmp_path):
        with pytest.raises(ValueError):
            load_dataset(write(tmp_path, "a", "1,2,0\n"), format="parquet")


def test_normalize_labels():
    np.testing.assert_array_equal(normalize_labels([0, 1, 1]), [0, 1, 1])
    np.testing.assert_array_equal(normalize_labels([-1, 1]), [0, 1])
    with pytest.raises(DataError):
        normalize_labels([0, 1, -1])


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.booleans())
def test_write_load_round_trip_exact(tmp_path_factory, seed, as_csv):
    data, _ = make_correlated_problem(7, 4, 0.3, seed)
    path = str(tmp_path_factory.mktemp("rt") / ("d.csv" if as_csv else "d.svm"))
    (write_csv if as_csv else write_svmlight)(data, path)
    back = load_dataset(path)
    np.testing.assert_array_equal(back.design.toarray(), data.design.toarray())
    np.testing.assert_array_equal(back.y, data.y)


class TestSynthetic:
    def test_deterministic(self):
        a, ta = make_correlated_problem(30, 10, 0.5, seed=3)
        b, tb = make_correlated_problem(30, 10, 0.5, seed=3)
        np.testing.assert_array_equal(a.design.matrix, b.design.matrix)
        np.testing.assert_array_equal(a.y, b.y)
        np.testing.assert_array_equal(ta, tb)

    def test_correlation_level(self):
        d, theta = make_correlated_problem(20000, 3, 0.6, seed=0)
        C = np.corrcoef(d.design.matrix.T)
        assert C[0, 1] == pytest.approx(0.6, abs=0.03)
        assert np.count_nonzero(theta) == 1

    def test_bad_correlation(self):
        with pytest.raises(ValueError):
            make_correlated_problem(5, 2, 1.0)


class TestCoefficients:
    def test_sparse_pairs(self):
        assert sparse_pairs([0.0, 1.5, 0.0, -2.0]) == [[2, 1.5], [4, -2.0]]
        assert sparse_pairs(np.zeros(3)) == []

    def test_load_json_and_csv(self, tmp_path):
        js = write(tmp_path, "c.json", json.dumps({"theta": [[2, 1.5], [4, -2.0]]}))
        np.testing.assert_array_equal(load_coefficients(js, 4), [0, 1.5, 0, -2.0])
        cs = write(tmp_path, "c.csv", "index,value\n1,0.25\n")
        np.testing.assert_array_equal(load_coefficients(cs, 2), [0.25, 0])

    def test_out_of_range_index(self, tmp_path):
        js = write(tmp_path, "c.json", json.dumps({"theta": [[5, 1.0]]}))
        with pytest.raises(DataError):
            load_coefficients(js, 4)

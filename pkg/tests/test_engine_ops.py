import numpy as np
import pytest

from boat.engine import BETWEEN, EQUALS, ONE_OF, Clause, Frame, filter, sort_by, top_n
from boat.errors import AggregateOnTextError, FieldNotFoundError, PredicateTypeError
from boat.synth.oracle import naive_filter, naive_sort, naive_top_n

from .conftest import random_frame


def test_filter_equals(small_frame):
    out = filter(small_frame, [Clause("age_group", EQUALS, "0 to 17")])
    assert out.row_count == 3
    assert out.column("diagnosis").to_list() == ["LIVEBORN", "MOOD DISORDERS", "ASTHMA"]


def test_filter_empty_conjunction_is_identity(small_frame):
    assert filter(small_frame, []) == small_frame


def test_filter_conjunction_and_ops(small_frame):
    out = filter(small_frame, [Clause("year", ONE_OF, [2014]), Clause("cost", BETWEEN, (500000, 2300000))])
    assert out.column("cost").to_list() == [1100000, 2300000, 520000]


def test_filter_unknown_value_matches_nothing(small_frame):
    assert filter(small_frame, [Clause("diagnosis", EQUALS, "NOPE")]).row_count == 0


def test_filter_nulls_never_match(small_frame):
    out = filter(small_frame, [Clause("cost", BETWEEN, (0, 10**12))])
    assert None not in out.column("cost").to_list() and out.row_count == 9


def test_filter_errors(small_frame):
    with pytest.raises(FieldNotFoundError):
        filter(small_frame, [Clause("nope", EQUALS, "x")])
    with pytest.raises(PredicateTypeError):
        filter(small_frame, [Clause("diagnosis", BETWEEN, ("A", "B"))])
    with pytest.raises(PredicateTypeError):
        filter(small_frame, [Clause("year", EQUALS, "2014")])
    with pytest.raises(PredicateTypeError):
        Clause("year", "like", 1)


@pytest.mark.parametrize("seed", range(10))
def test_filter_matches_scan_oracle(seed):
    frame, records = random_frame(seed)
    clauses = [("label", "equals", "MOOD DISORDERS"), ("year", "between", (2010, 2013))]
    out = filter(frame, [Clause(*c) for c in clauses])
    expected = naive_filter(records, clauses)
    assert out.to_dicts() == expected


def test_sort_basic():
    f = Frame.from_dict({"v": ("integer", [3, 1, 2])})
    assert sort_by(f, "v").column("v").to_list() == [1, 2, 3]
    assert sort_by(f, "v", "desc").column("v").to_list() == [3, 2, 1]


def test_sort_already_sorted_is_unchanged():
    f = Frame.from_dict({"v": ("integer", [1, 2, 2, 5]), "t": ("text", ["a", "b", "c", "d"])})
    assert sort_by(f, "v") == f


def test_sort_is_stable_and_nulls_last():
    f = Frame.from_dict({"k": ("text", ["b", None, "a", "b", "a"]), "i": ("integer", [0, 1, 2, 3, 4])})
    assert sort_by(f, "k").column("i").to_list() == [2, 4, 0, 3, 1]
    assert sort_by(f, "k", "desc").column("i").to_list() == [0, 3, 2, 4, 1]


@pytest.mark.parametrize("seed", range(5))
def test_sort_matches_reference_sort(seed):
    rng = np.random.default_rng(seed)
    values = rng.integers(-10**6, 10**6, 10_000).tolist()
    records = [{"v": v, "i": i} for i, v in enumerate(values)]
    f = Frame.from_dict({"v": ("integer", values), "i": ("integer", list(range(len(values))))})
    for desc in (False, True):
        out = sort_by(f, "v", "desc" if desc else "asc").to_dicts()
        ref = naive_sort(records, "v", desc)
        assert [r["v"] for r in out] == [r["v"] for r in ref]
        if not desc:
            assert out == ref  # Python's sort is stable too


def test_top_n_basic():
    f = Frame.from_dict({"label": ("text", ["a", "b", "c"]), "v": ("integer", [5, 9, 1])})
    assert top_n(f, "v", 2).column("v").to_list() == [9, 5]
    assert top_n(f, "v", 10).column("v").to_list() == [9, 5, 1]
    assert top_n(f, "v", 0).row_count == 0


def test_top_n_tie_break_by_text():
    f = Frame.from_dict({"label": ("text", ["z", "a", "m", None]), "v": ("money", [7, 7, 7, 7])})
    assert top_n(f, "v", 4).column("label").to_list() == ["a", "m", "z", None]


def test_top_n_errors(small_frame):
    with pytest.raises(AggregateOnTextError):
        top_n(small_frame, "diagnosis", 3)
    with pytest.raises(FieldNotFoundError):
        top_n(small_frame, "nope", 3)


@pytest.mark.parametrize("seed", range(10))
def test_top_n_matches_oracle_and_ignores_row_order(seed):
    frame, records = random_frame(seed)
    n = 11
    out = top_n(frame, "cost", n).to_dicts()
    ref = naive_top_n(records, "cost", n, ["label", "county", "year", "qty"])
    assert out == ref
    perm = np.random.default_rng(seed + 1000).permutation(frame.row_count)
    assert top_n(frame.take(perm), "cost", n).to_dicts() == out

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hlasso import build_group_structure


def test_partition_case():
    g = build_group_structure([("a", [0, 1]), ("b", [2, 3])], n_vars=4)
    assert g.n_groups == 2
    assert not g.overlapping
    assert g.group_ids == ("a", "b")
    assert g.sizes.tolist() == [2, 2]


def test_shared_index_flags_overlap():
    g = build_group_structure([[0, 1], [1, 2]], n_vars=3)
    assert g.overlapping
    assert g.membership_counts().tolist() == [1, 2, 1]


def test_uncovered_variable_rejected():
    with pytest.raises(ValueError, match="not assigned to any group"):
        build_group_structure([("g", [0])], n_vars=2)


def test_out_of_range_index_rejected():
    with pytest.raises(ValueError, match="outside"):
        build_group_structure([("g", [0, 5])], n_vars=3)


def test_empty_group_rejected():
    with pytest.raises(ValueError, match="empty"):
        build_group_structure([("g", [0]), ("h", [])], n_vars=1)


def test_duplicate_within_group_rejected():
    with pytest.raises(ValueError, match="more than once"):
        build_group_structure([[0, 0, 1]], n_vars=2)


def test_group_of_partition():
    g = build_group_structure([[0, 2], [1, 3]], n_vars=4)
    assert g.group_of().tolist() == [0, 1, 0, 1]


def test_group_of_overlapping_raises():
    g = build_group_structure([[0, 1], [1]], n_vars=2)
    with pytest.raises(ValueError):
        g.group_of()


def test_subset_reindexes_and_drops_empty_groups():
    g = build_group_structure([("a", [0, 1]), ("b", [2]), ("c", [3, 4])], 5)
    sub = g.subset([0, 3, 4])
    assert sub.n_vars == 3
    assert sub.group_ids == ("a", "c")
    assert sub.groups == ((0,), (1, 2))


@given(st.integers(min_value=1, max_value=6), st.integers(min_value=1, max_value=4))
def test_partition_sizes_sum_to_p(n_groups, per_group):
    p = n_groups * per_group
    spec = [list(range(k * per_group, (k + 1) * per_group)) for k in range(n_groups)]
    g = build_group_structure(spec, p)
    assert not g.overlapping
    assert int(g.sizes.sum()) == p


@given(st.integers(min_value=2, max_value=8))
def test_adding_duplicate_index_flips_overlap(p):
    spec = [[j] for j in range(p)]
    g = build_group_structure(spec, p)
    assert not g.overlapping
    spec_dup = spec + [[0]]
    g2 = build_group_structure(spec_dup, p)
    assert g2.overlapping

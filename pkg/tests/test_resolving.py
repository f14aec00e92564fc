import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphcodes.errors import (
    InstanceTooLargeError,
    InvalidParameterError,
    NoKResolvingSetError,
    NotKResolvingError,
    UnsupportedKError,
)
from graphcodes.graphs import all_pairs_distances, build_complete, build_cycle, build_grid, build_path
from graphcodes.resolving import (
    ResolvingSet,
    certify,
    construct_basis,
    cycle_basis,
    dimension_report,
    distinctive_vertices,
    grid_basis,
    k_metric_dimension_bruteforce,
    metric_dimensionality,
    path_basis,
    verify_k_resolving,
)


def graph_id(value):
    return f"{value.family_tag}-{value.n}" if hasattr(value, "family_tag") else None


def dm_of(g):
    return all_pairs_distances(g)


def separated_by(dm, s, x, y):
    return sum(dm.d[x, v] != dm.d[y, v] for v in s)


def naive_is_k_resolving(dm, s, k):
    return all(separated_by(dm, s, x, y) >= k for x, y in itertools.combinations(range(dm.n), 2))


# distinctive vertices


def test_distinctive_grid_corner_pair():
    g = build_grid(3, 2)
    dm = dm_of(g)
    x, y = g.grid_label(1, 0), g.grid_label(0, 1)
    assert len(distinctive_vertices(dm, x, y)) == 3 + 2 - 2


def test_distinctive_small_cases():
    assert distinctive_vertices(dm_of(build_path(2)), 0, 1) == {0, 1}
    dm = dm_of(build_complete(4))
    for x, y in itertools.permutations(range(4), 2):
        assert distinctive_vertices(dm, x, y) == {x, y}


def test_distinctive_rejects_equal_pair():
    with pytest.raises(InvalidParameterError):
        distinctive_vertices(dm_of(build_path(3)), 1, 1)


def test_distinctive_always_contains_pair():
    dm = dm_of(build_grid(3, 4))
    for x, y in itertools.combinations(range(dm.n), 2):
        assert {x, y} <= distinctive_vertices(dm, x, y)


# verification


def test_verify_examples():
    assert verify_k_resolving(dm_of(build_path(5)), range(5), 4) == (True, None)
    ok, witness = verify_k_resolving(dm_of(build_complete(3)), [0, 1, 2], 3)
    assert not ok and witness is not None
    assert verify_k_resolving(dm_of(build_path(3)), [0], 1) == (True, None)


def test_verify_witness_is_real():
    dm = dm_of(build_cycle(6))
    ok, (x, y) = verify_k_resolving(dm, [0, 1, 2], 3)
    assert not ok
    assert separated_by(dm, [0, 1, 2], x, y) < 3


def test_verify_rejects_bad_sets():
    dm = dm_of(build_path(4))
    for bad in ([], [0, 0], [4]):
        with pytest.raises(InvalidParameterError):
            verify_k_resolving(dm, bad, 1)


def test_certify_raises_with_witness():
    with pytest.raises(NotKResolvingError) as info:
        certify(dm_of(build_path(5)), [0, 1, 2, 3], 4)
    assert info.value.witness is not None


@st.composite
def graph_and_subset(draw):
    kind = draw(st.sampled_from(["path", "cycle", "grid"]))
    if kind == "path":
        g = build_path(draw(st.integers(2, 12)))
    elif kind == "cycle":
        g = build_cycle(draw(st.integers(3, 12)))
    else:
        g = build_grid(draw(st.integers(2, 4)), draw(st.integers(2, 4)))
    s = draw(st.lists(st.integers(0, g.n - 1), min_size=1, unique=True))
    return dm_of(g), s


@settings(max_examples=150, deadline=None)
@given(graph_and_subset(), st.integers(1, 8))
def test_verify_matches_naive_and_is_monotone(data, k):
    dm, s = data
    ok, _ = verify_k_resolving(dm, s, k)
    assert ok == naive_is_k_resolving(dm, s, k)
    if ok:
        for smaller in range(1, k):
            assert verify_k_resolving(dm, s, smaller)[0]
        superset = sorted(set(s) | {0, dm.n - 1})
        assert verify_k_resolving(dm, superset, k)[0]
        # a k-resolving set meets every distinctive set in at least k vertices
        for x, y in itertools.combinations(range(dm.n), 2):
            assert len(distinctive_vertices(dm, x, y) & set(s)) >= k


# dimensionality


@pytest.mark.parametrize(
    "g,expected",
    [(build_grid(4, 3), 5), (build_complete(5), 2), (build_path(5), 4), (build_cycle(6), 4), (build_cycle(7), 6)],
    ids=graph_id,
)
def test_metric_dimensionality(g, expected):
    assert metric_dimensionality(dm_of(g)) == expected


def test_dimensionality_needs_two_vertices():
    with pytest.raises(InvalidParameterError):
        metric_dimensionality(dm_of(build_path(1)))


@pytest.mark.parametrize(
    "g", [build_grid(3, 4), build_cycle(9), build_path(8), build_complete(6), build_grid(5, 5)], ids=graph_id
)
def test_dimensionality_is_attained_minimum(g):
    dm = dm_of(g)
    top = metric_dimensionality(dm)
    sizes = [len(distinctive_vertices(dm, x, y)) for x, y in itertools.combinations(range(dm.n), 2)]
    assert min(sizes) == top
    assert verify_k_resolving(dm, range(dm.n), top)[0]
    assert not verify_k_resolving(dm, range(dm.n), top + 1)[0]


# exhaustive dimension


def test_bruteforce_examples():
    size, basis = k_metric_dimension_bruteforce(dm_of(build_path(5)), 4)
    assert size == 5 and basis.vertices == (0, 1, 2, 3, 4)
    size, basis = k_metric_dimension_bruteforce(dm_of(build_grid(3, 3)), 2)
    assert size == 4 and basis.verified
    with pytest.raises(NoKResolvingSetError):
        k_metric_dimension_bruteforce(dm_of(build_cycle(6)), 5)


def test_bruteforce_respects_cap():
    with pytest.raises(InstanceTooLargeError):
        k_metric_dimension_bruteforce(dm_of(build_path(17)), 3)
    assert k_metric_dimension_bruteforce(dm_of(build_path(17)), 3, max_n=17)[0] == 4


def test_bruteforce_is_lexicographic():
    dm = dm_of(build_path(6))
    size, basis = k_metric_dimension_bruteforce(dm, 3)
    first = next(c for c in itertools.combinations(range(6), size) if naive_is_k_resolving(dm, c, 3))
    assert basis.vertices == first


def test_bruteforce_minimality_against_naive():
    for g in (build_path(6), build_cycle(6), build_cycle(7), build_grid(2, 3)):
        dm = dm_of(g)
        for k in range(1, metric_dimensionality(dm) + 1):
            size, basis = k_metric_dimension_bruteforce(dm, k)
            assert naive_is_k_resolving(dm, basis.vertices, k)
            assert not any(naive_is_k_resolving(dm, c, k) for c in itertools.combinations(range(g.n), size - 1))


def test_complete_graph_dimensions():
    dm = dm_of(build_complete(5))
    assert k_metric_dimension_bruteforce(dm, 1)[0] == 4
    assert k_metric_dimension_bruteforce(dm, 2)[0] == 5


def test_path_small_k_dimension_equals_k():
    for n in range(3, 10):
        dm = dm_of(build_path(n))
        assert k_metric_dimension_bruteforce(dm, 1)[0] == 1
        assert k_metric_dimension_bruteforce(dm, 2)[0] == 2


# constructions


def test_path_basis_examples():
    assert path_basis(5, 4).vertices == (0, 1, 2, 3, 4)
    b = path_basis(8, 3)
    assert len(b) == 4 and b.verified
    assert verify_k_resolving(dm_of(build_path(8)), b, 3)[0]
    assert k_metric_dimension_bruteforce(dm_of(build_path(8)), 3)[0] == 4
    with pytest.raises(NoKResolvingSetError):
        path_basis(5, 5)
    with pytest.raises(UnsupportedKError):
        path_basis(5, 2)


def test_cycle_basis_examples():
    assert sorted(cycle_basis(5, 4).vertices) == [0, 1, 2, 3, 4]
    assert sorted(cycle_basis(6, 4).vertices) == [0, 1, 2, 3, 4, 5]
    with pytest.raises(NoKResolvingSetError):
        cycle_basis(6, 5)
    with pytest.raises(NoKResolvingSetError):
        cycle_basis(7, 7)


def test_grid_basis_case_one():
    g = build_grid(4, 3)
    b = grid_basis(4, 3, 3)
    coords = {g.grid_coords(v) for v in b.vertices}
    assert coords == {(0, 0), (1, 0), (2, 0), (0, 2), (1, 2), (2, 2)}


def test_grid_basis_case_two():
    g = build_grid(3, 3)
    b = grid_basis(3, 3, 4)
    assert len(b) == 8
    coords = {g.grid_coords(v) for v in b.vertices}
    # every row at both end columns, plus rows 0 and s-1 at column 1 (alpha = 1)
    assert coords == {(i, j) for i in range(3) for j in (0, 2)} | {(0, 1), (2, 1)}
    with pytest.raises(NoKResolvingSetError):
        grid_basis(3, 3, 5)


def test_grid_basis_transposes_when_s_less_than_t():
    g = build_grid(2, 5)
    for k in range(1, 6):
        b = grid_basis(2, 5, k)
        assert len(b) == 2 * k
        assert verify_k_resolving(dm_of(g), b, k)[0]


def test_grid_basis_size_is_2k_everywhere():
    for s in range(2, 8):
        for t in range(2, 8):
            dm = dm_of(build_grid(s, t))
            for k in range(1, s + t - 1):
                b = grid_basis(s, t, k, dm=dm)
                assert len(b) == 2 * k
                assert verify_k_resolving(dm, b, k)[0]


@pytest.mark.parametrize("n", range(4, 12))
def test_path_bases_are_minimum(n):
    dm = dm_of(build_path(n))
    for k in range(3, n):
        b = path_basis(n, k, dm=dm)
        assert len(b) == k + 1
        assert verify_k_resolving(dm, b, k)[0]
        if n <= 10:
            assert k_metric_dimension_bruteforce(dm, k)[0] == k + 1


@pytest.mark.parametrize("n", range(3, 13))
def test_cycle_bases_are_minimum(n):
    dm = dm_of(build_cycle(n))
    top = n - 1 if n % 2 else n - 2
    assert metric_dimensionality(dm) == top
    for k in range(1, top + 1):
        b = cycle_basis(n, k, dm=dm)
        expected = k + 1 if n % 2 or k <= n // 2 - 1 else k + 2
        assert len(b) == expected
        assert verify_k_resolving(dm, b, k)[0]
        if n <= 10:
            assert k_metric_dimension_bruteforce(dm, k)[0] == expected


def test_construct_basis_dispatch():
    assert construct_basis(build_path(6), 1).vertices == (0,)
    assert construct_basis(build_path(6), 2).vertices == (0, 5)
    assert len(construct_basis(build_path(6), 4)) == 5
    assert len(construct_basis(build_cycle(7), 3)) == 4
    assert len(construct_basis(build_grid(3, 4), 5)) == 10
    assert len(construct_basis(build_complete(4), 2)) == 4


def test_dimension_report():
    report = dimension_report(build_grid(3, 3), range(1, 5))
    assert report.max_k == 4
    assert report.dims == {1: 2, 2: 4, 3: 6, 4: 8}
    assert set(report.sources.values()) == {"bruteforce"}
    ks = sorted(report.dims)
    assert all(report.dims[a] <= report.dims[b] for a, b in zip(ks, ks[1:]))
    assert all(report.dims[k] >= k for k in ks)
    data = report.to_dict()
    assert data["dims"] == {"1": 2, "2": 4, "3": 6, "4": 8}


def test_dimension_report_modes():
    with pytest.raises(InstanceTooLargeError):
        dimension_report(build_grid(5, 4), [3])
    report = dimension_report(build_grid(5, 4), [3, 7], construct_only=True)
    assert report.dims == {3: 6, 7: 14}
    assert report.sources == {3: "construction", 7: "construction"}
    with pytest.raises(NoKResolvingSetError):
        dimension_report(build_cycle(6), [5])


def test_resolving_set_serialisation():
    rs = ResolvingSet((3, 1, 2), 2)
    assert ResolvingSet.from_dict(rs.to_dict()) == rs
    with pytest.raises(InvalidParameterError):
        ResolvingSet((1, 1), 1)
    with pytest.raises(InvalidParameterError):
        ResolvingSet.from_dict({"vertices": [1]})


def test_pair_matrix_agrees_with_distinctive_sets():
    from graphcodes.resolving import _pair_distinction_matrix

    dm = dm_of(build_grid(3, 3))
    sep = _pair_distinction_matrix(dm)
    for row, (x, y) in zip(sep, itertools.combinations(range(dm.n), 2)):
        assert set(np.flatnonzero(row)) == distinctive_vertices(dm, x, y)

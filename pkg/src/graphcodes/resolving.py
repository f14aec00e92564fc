"""k-resolving sets: verification, dimensionality, exhaustive dimension search
and explicit bases for paths, cycles and grids."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    InstanceTooLargeError,
    InvalidParameterError,
    NoKResolvingSetError,
    NotKResolvingError,
    UnsupportedKError,
)
from .graphs import DistanceMatrix, Graph, all_pairs_distances, build_cycle, build_grid, build_path

__all__ = [
    "ResolvingSet",
    "DimensionReport",
    "distinctive_vertices",
    "verify_k_resolving",
    "certify",
    "metric_dimensionality",
    "k_metric_dimension_bruteforce",
    "path_basis",
    "cycle_basis",
    "grid_basis",
    "construct_basis",
    "dimension_report",
    "BRUTEFORCE_MAX_N",
]

BRUTEFORCE_MAX_N = 16
_BATCH = 4096


@dataclass(frozen=True)
class ResolvingSet:
    vertices: tuple[int, ...]
    k: int
    verified: bool = False

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise InvalidParameterError(f"resolving set has repeated vertices: {self.vertices}")
        if self.k < 1:
            raise InvalidParameterError(f"k must be positive, got {self.k}")

    def __len__(self) -> int:
        return len(self.vertices)

    def to_dict(self) -> dict:
        return {"vertices": list(self.vertices), "k": self.k}

    @classmethod
    def from_dict(cls, data: dict) -> "ResolvingSet":
        try:
            return cls(tuple(int(v) for v in data["vertices"]), int(data["k"]))
        except KeyError as exc:
            raise InvalidParameterError(f"resolving set missing field {exc}") from None


@dataclass
class DimensionReport:
    graph: dict
    max_k: int
    dims: dict[int, int] = field(default_factory=dict)
    bases: dict[int, ResolvingSet] = field(default_factory=dict)
    sources: dict[int, str] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "graph": self.graph,
            "max_k": self.max_k,
            "dims": {str(k): v for k, v in sorted(self.dims.items())},
            "bases": {str(k): list(b.vertices) for k, b in sorted(self.bases.items())},
            "sources": {str(k): v for k, v in sorted(self.sources.items())},
        }


def _check_vertex(dm: DistanceMatrix, v: int) -> None:
    if not 0 <= v < dm.n:
        raise InvalidParameterError(f"vertex {v} out of range for n={dm.n}")


def distinctive_vertices(dm: DistanceMatrix, x: int, y: int) -> frozenset[int]:
    """Vertices whose distances to ``x`` and ``y`` differ."""
    _check_vertex(dm, x)
    _check_vertex(dm, y)
    if x == y:
        raise InvalidParameterError("distinctive vertices need two distinct vertices")
    return frozenset(np.flatnonzero(dm.d[x] != dm.d[y]).tolist())


def _as_vertex_list(dm: DistanceMatrix, s: Iterable[int] | ResolvingSet) -> list[int]:
    verts = list(s.vertices) if isinstance(s, ResolvingSet) else [int(v) for v in s]
    if not verts:
        raise InvalidParameterError("resolving set must be non-empty")
    if len(set(verts)) != len(verts):
        raise InvalidParameterError(f"resolving set has repeated vertices: {verts}")
    for v in verts:
        _check_vertex(dm, v)
    return verts


def verify_k_resolving(
    dm: DistanceMatrix, s: Sequence[int] | ResolvingSet, k: int
) -> tuple[bool, tuple[int, int] | None]:
    """Check that every pair of distinct vertices is separated by at least ``k``
    members of ``s``.

    Returns ``(True, None)`` or ``(False, (x, y))`` with the lexicographically
    first offending pair.
    """
    verts = _as_vertex_list(dm, s)
    if k < 1:
        raise InvalidParameterError(f"k must be positive, got {k}")
    rows = dm.d[:, verts]
    for x in range(dm.n - 1):
        diffs = np.count_nonzero(rows[x + 1 :] != rows[x], axis=1)
        bad = np.flatnonzero(diffs < k)
        if bad.size:
            return False, (x, x + 1 + int(bad[0]))
    return True, None


def certify(dm: DistanceMatrix, s: Sequence[int] | ResolvingSet, k: int) -> ResolvingSet:
    """Return ``s`` as a verified ResolvingSet, or raise NotKResolvingError."""
    verts = _as_vertex_list(dm, s)
    ok, witness = verify_k_resolving(dm, verts, k)
    if not ok:
        raise NotKResolvingError(
            f"{verts} is not {k}-resolving: pair {witness} is separated by fewer than {k} vertices",
            witness,
        )
    return ResolvingSet(tuple(verts), k, verified=True)


def metric_dimensionality(dm: DistanceMatrix) -> int:
    """Largest k for which a k-resolving set exists: the smallest distinctive
    set over all vertex pairs."""
    if dm.n < 2:
        raise InvalidParameterError("metric dimensionality needs at least two vertices")
    best = dm.n
    for x in range(dm.n - 1):
        sizes = np.count_nonzero(dm.d[x + 1 :] != dm.d[x], axis=1)
        best = min(best, int(sizes.min()))
    return best


def _pair_distinction_matrix(dm: DistanceMatrix) -> np.ndarray:
    """Boolean (pairs x vertices): entry set when the vertex separates the pair."""
    xs, ys = np.triu_indices(dm.n, k=1)
    return dm.d[xs] != dm.d[ys]


def k_metric_dimension_bruteforce(
    dm: DistanceMatrix, k: int, max_n: int = BRUTEFORCE_MAX_N
) -> tuple[int, ResolvingSet]:
    """Smallest k-resolving set by exhaustive search.

    Sizes are tried in increasing order and subsets of one size in
    lexicographic order, so the witness is deterministic.
    """
    if k < 1:
        raise InvalidParameterError(f"k must be positive, got {k}")
    if dm.n > max_n:
        raise InstanceTooLargeError(f"exhaustive search capped at n={max_n}, graph has n={dm.n}")
    if dm.n == 1:
        raise NoKResolvingSetError("a single vertex graph has no vertex pairs to resolve")
    top = metric_dimensionality(dm)
    if k > top:
        raise NoKResolvingSetError(f"graph is {top}-metric dimensional; no {k}-resolving set exists")

    sep = _pair_distinction_matrix(dm).astype(np.int16)
    for size in range(k, dm.n + 1):
        combos = itertools.combinations(range(dm.n), size)
        while True:
            chunk = list(itertools.islice(combos, _BATCH))
            if not chunk:
                break
            idx = np.asarray(chunk)
            counts = sep[:, idx].sum(axis=2)
            good = np.flatnonzero((counts >= k).all(axis=0))
            if good.size:
                verts = tuple(int(v) for v in idx[good[0]])
                return size, ResolvingSet(verts, k, verified=True)
    raise AssertionError("the full vertex set is always top-resolving")


def _search(dm: DistanceMatrix, k: int, size: int, candidates: Iterable[Sequence[int]]) -> ResolvingSet:
    for cand in candidates:
        cand = list(cand)
        if len(cand) == size and verify_k_resolving(dm, cand, k)[0]:
            return ResolvingSet(tuple(cand), k, verified=True)
    for cand in itertools.combinations(range(dm.n), size):
        if verify_k_resolving(dm, cand, k)[0]:
            return ResolvingSet(tuple(cand), k, verified=True)
    raise NoKResolvingSetError(f"no {k}-resolving set of size {size} exists")


def path_basis(n: int, k: int, dm: DistanceMatrix | None = None) -> ResolvingSet:
    """A k-resolving set of size k+1 for the path on ``n`` vertices (k >= 3)."""
    if k > n - 1:
        raise NoKResolvingSetError(f"P_{n} has k-resolving sets only for k <= {n - 1}")
    if k < 3:
        raise UnsupportedKError(f"path bases are built for k >= 3 only, got k={k}")
    if dm is None:
        dm = all_pairs_distances(build_path(n))
    size = k + 1
    left = (size + 1) // 2
    ends = list(range(left)) + list(range(n - (size - left), n))
    return _search(dm, k, size, [ends, range(size)])


def cycle_basis(n: int, k: int, dm: DistanceMatrix | None = None) -> ResolvingSet:
    """A minimum k-resolving set for the cycle on ``n`` vertices.

    Size is k+1, except for even n = 2q with k >= q, where it is k+2.
    """
    if k < 1:
        raise InvalidParameterError(f"k must be positive, got {k}")
    if n % 2:
        if k > n - 1:
            raise NoKResolvingSetError(f"C_{n} has k-resolving sets only for k <= {n - 1}")
        size = k + 1
    else:
        q = n // 2
        if k > n - 2:
            raise NoKResolvingSetError(f"C_{n} has k-resolving sets only for k <= {n - 2}")
        size = k + 1 if k <= q - 1 else k + 2
    if dm is None:
        dm = all_pairs_distances(build_cycle(n))
    spaced = sorted({(i * n) // size for i in range(size)})
    return _search(dm, k, size, [range(size), spaced])


def grid_basis(s: int, t: int, k: int, dm: DistanceMatrix | None = None) -> ResolvingSet:
    """The 2k-vertex k-resolving set for the s x t grid.

    With rows ``u`` (the longer side) and columns ``v``: for k <= s take the
    first k rows at both end columns; otherwise, with a = k - s, take every row
    at both end columns plus the first and last rows at columns 1..a.
    """
    if s < 2 or t < 2:
        raise InvalidParameterError(f"grid needs s, t >= 2, got ({s},{t})")
    if k < 1:
        raise InvalidParameterError(f"k must be positive, got {k}")
    if k > s + t - 2:
        raise NoKResolvingSetError(f"P_{s} x P_{t} is {s + t - 2}-metric dimensional; k={k} too large")

    long_, short = max(s, t), min(s, t)
    if k <= long_:
        coords = [(i, j) for j in (0, short - 1) for i in range(k)]
    else:
        extra = k - long_
        coords = [(i, j) for j in (0, short - 1) for i in range(long_)]
        coords += [(i, j) for i in (0, long_ - 1) for j in range(1, extra + 1)]
    if s < t:
        coords = [(j, i) for i, j in coords]
    verts = [i * t + j for i, j in coords]

    if dm is None:
        dm = all_pairs_distances(build_grid(s, t))
    return certify(dm, verts, k)


def construct_basis(graph: Graph, k: int, dm: DistanceMatrix | None = None) -> ResolvingSet:
    """Family-specific construction; custom graphs fall back to exhaustive search."""
    dm = dm or all_pairs_distances(graph)
    if graph.family == "grid":
        return grid_basis(*graph.params, k, dm=dm)
    if graph.family == "cycle":
        return cycle_basis(graph.n, k, dm=dm)
    if graph.family == "path":
        if graph.n >= 2 and k in (1, 2):
            return certify(dm, [0] if k == 1 else [0, graph.n - 1], k)
        return path_basis(graph.n, k, dm=dm)
    return k_metric_dimension_bruteforce(dm, k)[1]


def dimension_report(
    graph: Graph,
    ks: Iterable[int],
    construct_only: bool = False,
    max_n: int = BRUTEFORCE_MAX_N,
) -> DimensionReport:
    """k-metric dimension for each requested k.

    Exhaustive search is used unless ``construct_only`` is set, in which case
    the family constructions supply the bases (their sizes match the known
    dimension formulas).
    """
    dm = all_pairs_distances(graph)
    top = metric_dimensionality(dm)
    if not construct_only and graph.n > max_n:
        raise InstanceTooLargeError(
            f"exhaustive search capped at n={max_n}, graph has n={graph.n}; use construct-only mode"
        )
    if construct_only and graph.family not in ("path", "cycle", "grid"):
        raise InvalidParameterError(f"no construction known for family {graph.family!r}")
    report = DimensionReport(graph.descriptor(), top)
    for k in ks:
        if k > top:
            raise NoKResolvingSetError(f"graph is {top}-metric dimensional; no {k}-resolving set exists")
        if construct_only:
            basis = construct_basis(graph, k, dm)
            report.sources[k] = "construction"
        else:
            _, basis = k_metric_dimension_bruteforce(dm, k, max_n=max_n)
            report.sources[k] = "bruteforce"
        report.dims[k] = len(basis)
        report.bases[k] = basis
    return report

"""Codes from k-resolving sets and their uncovering-based decoder.

The codeword of vertex ``u`` is its distance vector to the ordered resolving
set. Decoding looks for a trusted position set (an uncovering block) on which
exactly one codeword agrees with the received word.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .designs import Uncovering, uncovering_for_code
from .errors import InvalidParameterError
from .graphs import DistanceMatrix, Graph, all_pairs_distances, build_grid, graph_from_descriptor
from .resolving import ResolvingSet, certify, construct_basis, grid_basis

__all__ = [
    "GraphCode",
    "DecodeResult",
    "ExperimentReport",
    "build_code",
    "encode",
    "min_distance",
    "sphere_intersection",
    "decode",
    "decode_batch",
    "nearest_neighbor_oracle",
    "channel",
    "code_suite",
    "grid_code_suite",
    "simulate",
    "code_to_dict",
    "code_from_dict",
    "read_code",
    "write_code",
]


@dataclass(frozen=True, eq=False)
class GraphCode:
    graph: Graph
    resolving_set: ResolvingSet
    matrix: np.ndarray = field(repr=False)
    diameter: int
    min_distance: int

    @property
    def k(self) -> int:
        return self.resolving_set.k

    @property
    def length(self) -> int:
        return self.matrix.shape[1]

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    @property
    def alphabet_size(self) -> int:
        return self.diameter + 1

    @property
    def correction_capability(self) -> int:
        return (self.min_distance - 1) // 2

    @property
    def design_radius(self) -> int:
        """Error radius guaranteed by k alone, used to size uncoverings."""
        return (self.k - 1) // 2

    def params(self) -> dict:
        return {
            "n": self.size,
            "length": self.length,
            "alphabet_size": self.alphabet_size,
            "k": self.k,
            "min_distance": self.min_distance,
            "r": self.correction_capability,
        }


@dataclass(frozen=True)
class DecodeResult:
    vertex: int | None
    codeword: tuple[int, ...] | None
    blocks_tried: int
    reason: str | None = None

    @property
    def success(self) -> bool:
        return self.vertex is not None

    def to_dict(self) -> dict:
        return {
            "success": self.success,
            "vertex": self.vertex,
            "codeword": list(self.codeword) if self.codeword is not None else None,
            "blocks_tried": self.blocks_tried,
            "reason": self.reason,
        }


def _pairwise_min_distance(rows: np.ndarray) -> int:
    best = rows.shape[1]
    for i in range(rows.shape[0] - 1):
        best = min(best, int(np.count_nonzero(rows[i + 1 :] != rows[i], axis=1).min()))
    return best


def min_distance(code: GraphCode | Sequence[Sequence[int]]) -> int:
    """Least Hamming distance between distinct rows (a code or a raw matrix)."""
    rows = code.matrix if isinstance(code, GraphCode) else np.asarray(code)
    if rows.ndim != 2 or rows.shape[0] < 2:
        raise InvalidParameterError("minimum distance needs at least two codewords")
    return _pairwise_min_distance(rows)


def build_code(dm: DistanceMatrix, s: ResolvingSet | Sequence[int], k: int | None = None) -> GraphCode:
    """Distance-vector code of ``dm.graph`` over the ordered set ``s``.

    An unverified set (or a plain vertex list with ``k``) is checked first;
    NotKResolvingError carries the offending vertex pair.
    """
    if isinstance(s, ResolvingSet):
        rs = s if s.verified else certify(dm, s, s.k)
    else:
        if k is None:
            raise InvalidParameterError("k is required when passing a plain vertex list")
        rs = certify(dm, s, k)
    matrix = np.ascontiguousarray(dm.d[:, list(rs.vertices)])
    matrix.setflags(write=False)
    dmin = _pairwise_min_distance(matrix) if dm.n >= 2 else len(rs)
    return GraphCode(dm.graph, rs, matrix, dm.diameter, dmin)


def encode(code: GraphCode, u: int) -> tuple[int, ...]:
    if not 0 <= u < code.size:
        raise InvalidParameterError(f"vertex {u} out of range for n={code.size}")
    return tuple(int(x) for x in code.matrix[u])


def _word(code: GraphCode, x: Sequence[int]) -> np.ndarray:
    arr = np.asarray(x, dtype=np.int64)
    if arr.shape != (code.length,):
        raise InvalidParameterError(f"received word has length {arr.size}, code length is {code.length}")
    return arr


def sphere_intersection(code: GraphCode, x: Sequence[int], positions: Sequence[int]) -> frozenset[int]:
    """Vertices whose codeword agrees with ``x`` on every 0-based position given."""
    arr = _word(code, x)
    idx = np.asarray(list(positions), dtype=np.intp)
    if idx.size and (idx.min() < 0 or idx.max() >= code.length):
        raise InvalidParameterError(f"positions {sorted(positions)} out of range for length {code.length}")
    hits = np.all(code.matrix[:, idx] == arr[idx], axis=1)
    return frozenset(np.flatnonzero(hits).tolist())


def _check_decode_args(code: GraphCode, unc: Uncovering, r_prime: int) -> None:
    r = code.correction_capability
    if r < 1:
        raise InvalidParameterError(f"code corrects no errors (minimum distance {code.min_distance})")
    if unc.nu != code.length:
        raise InvalidParameterError(f"uncovering is over {unc.nu} points, code length is {code.length}")
    if not 0 <= r_prime <= r:
        raise InvalidParameterError(f"r'={r_prime} must lie in 0..{r}")
    if unc.tau < r_prime:
        raise InvalidParameterError(f"uncovering avoids {unc.tau}-sets, cannot guarantee r'={r_prime}")
    if unc.block_size < code.length - r:
        raise InvalidParameterError(
            f"blocks of size {unc.block_size} are too small; need at least {code.length - r}"
        )


def decode(code: GraphCode, x: Sequence[int], unc: Uncovering, r_prime: int) -> DecodeResult:
    """Try the uncovering's blocks in stored order; the first block on which a
    codeword agrees with ``x`` decides.

    Succeeds whenever ``x`` has at most ``r_prime`` symbol errors. Uncovering
    points are 1-based; code positions are 0-based.
    """
    arr = _word(code, x)
    _check_decode_args(code, unc, r_prime)
    for tried, block in enumerate(unc.blocks, start=1):
        idx = np.fromiter((p - 1 for p in block), dtype=np.intp, count=len(block))
        hits = np.flatnonzero(np.all(code.matrix[:, idx] == arr[idx], axis=1))
        if hits.size:
            u = int(hits[0])
            return DecodeResult(u, encode(code, u), tried)
    return DecodeResult(None, None, len(unc.blocks), "no uncovering block agrees with any codeword")


def decode_batch(
    code: GraphCode, words: np.ndarray, unc: Uncovering, r_prime: int
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised ``decode`` over the rows of ``words``.

    Returns ``(vertices, blocks_tried)``; failed words get vertex -1. Each word
    gets exactly the answer ``decode`` would give it.
    """
    words = np.asarray(words, dtype=np.int64)
    if words.ndim != 2 or words.shape[1] != code.length:
        raise InvalidParameterError(f"expected an (N, {code.length}) array of words, got shape {words.shape}")
    _check_decode_args(code, unc, r_prime)
    count = words.shape[0]
    vertices = np.full(count, -1, dtype=np.int64)
    tried = np.full(count, len(unc.blocks), dtype=np.int64)
    # Symbols are packed base q+1 so that out-of-alphabet entries become the
    # digit q, which no codeword uses.
    q = code.alphabet_size
    base = q + 1
    packable = base ** max((len(b) for b in unc.blocks), default=0) < 2**62
    digits = np.where((words < 0) | (words >= q), q, words)
    columns = [np.ascontiguousarray(digits[:, j]) for j in range(code.length)]
    pending = np.arange(count)
    for b, block in enumerate(unc.blocks, start=1):
        if not pending.size:
            break
        idx = np.asarray(block, dtype=np.intp) - 1
        if packable and idx.size:
            found = _match_keys(code.matrix[:, idx], [columns[j][pending] for j in idx], base)
        else:
            found = _match_rows(code.matrix[:, idx], digits[np.ix_(pending, idx)])
        hit = found >= 0
        vertices[pending[hit]] = found[hit]
        tried[pending[hit]] = b
        pending = pending[~hit]
    return vertices, tried


def _match_keys(table: np.ndarray, cols: list[np.ndarray], base: int) -> np.ndarray:
    """First row of ``table`` whose digits equal the given columns, or -1."""
    table_keys = np.zeros(table.shape[0], dtype=np.int64)
    probe = np.zeros(cols[0].size, dtype=np.int64)
    for j, col in enumerate(cols):
        table_keys = table_keys * base + table[:, j]
        probe *= base
        probe += col
    keys, first = np.unique(table_keys, return_index=True)
    pos = np.minimum(np.searchsorted(keys, probe), keys.size - 1)
    return np.where(keys[pos] == probe, first[pos], -1)


def _match_rows(table: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """Row-by-row fallback for blocks too wide to pack into an int64."""
    found = np.full(rows.shape[0], -1, dtype=np.int64)
    for u in range(table.shape[0] - 1, -1, -1):
        found[np.all(rows == table[u], axis=1)] = u
    return found


def nearest_neighbor_oracle(code: GraphCode, x: Sequence[int]) -> frozenset[int]:
    """All vertices whose codewords are closest to ``x`` in Hamming distance."""
    dist = np.count_nonzero(code.matrix != _word(code, x), axis=1)
    return frozenset(np.flatnonzero(dist == dist.min()).tolist())


def channel(code: GraphCode, u: int, e: int, seed=None) -> tuple[int, ...]:
    """Codeword of ``u`` with exactly ``e`` symbols replaced.

    Positions are drawn without replacement; each replacement is uniform over
    the other alphabet symbols. ``seed`` is anything ``np.random.default_rng``
    accepts, including a Generator.
    """
    if not 0 <= e <= code.length:
        raise InvalidParameterError(f"error count {e} must lie in 0..{code.length}")
    q = code.alphabet_size
    if e and q < 2:
        raise InvalidParameterError("cannot inject errors over a one-symbol alphabet")
    rng = np.random.default_rng(seed)
    word = list(encode(code, u))
    for pos in rng.choice(code.length, size=e, replace=False):
        word[pos] = (word[pos] + int(rng.integers(1, q))) % q
    return tuple(word)


def code_suite(graph: Graph, k: int, r_prime: int, dm: DistanceMatrix | None = None) -> tuple[GraphCode, Uncovering]:
    """Code from the family basis plus an uncovering for ``r_prime`` errors,
    sized with r = floor((k-1)/2)."""
    r = (k - 1) // 2
    if r_prime < 1:
        raise InvalidParameterError(f"r' must be at least 1, got {r_prime}")
    if r_prime > r:
        raise InvalidParameterError(f"r'={r_prime} exceeds floor((k-1)/2)={r}; k >= {2 * r_prime + 1} needed")
    dm = dm or all_pairs_distances(graph)
    code = build_code(dm, construct_basis(graph, k, dm))
    return code, uncovering_for_code(code.length, r, r_prime)


def grid_code_suite(s: int, t: int, k: int, r_prime: int) -> tuple[GraphCode, Uncovering]:
    """Grid code of length 2k with a (2k, 2k - r, r')-uncovering."""
    dm = all_pairs_distances(build_grid(s, t))
    basis = grid_basis(s, t, k, dm=dm)
    r = (k - 1) // 2
    if not 1 <= r_prime <= r:
        raise InvalidParameterError(f"r'={r_prime} must lie in 1..{r} for k={k}")
    code = build_code(dm, basis)
    return code, uncovering_for_code(code.length, r, r_prime)


@dataclass
class ExperimentReport:
    code: dict
    uncovering: dict
    errors: int
    r_prime: int
    seed: int
    trials: int = 0
    successes: int = 0
    failures: int = 0
    max_blocks_tried: int = 0
    decode_seconds: float = 0.0
    rows: list[dict] = field(default_factory=list, repr=False)

    @property
    def guaranteed(self) -> bool:
        return self.errors <= self.r_prime

    def to_dict(self, timing: bool = False) -> dict:
        out = {
            "code": self.code,
            "uncovering": self.uncovering,
            "errors": self.errors,
            "r_prime": self.r_prime,
            "seed": self.seed,
            "trials": self.trials,
            "successes": self.successes,
            "failures": self.failures,
            "max_blocks_tried": self.max_blocks_tried,
        }
        if timing:
            out["mean_decode_seconds"] = self.decode_seconds / self.trials if self.trials else 0.0
        return out


def simulate(code: GraphCode, unc: Uncovering, r_prime: int, errors: int, trials: int, seed: int) -> ExperimentReport:
    """Encode a random vertex, inject ``errors`` symbol errors, decode; repeat.

    Trial ``i`` draws from ``default_rng([seed, i])`` so each trial is
    reproducible on its own.
    """
    if trials < 0:
        raise InvalidParameterError(f"trial count must be non-negative, got {trials}")
    report = ExperimentReport(
        code=code.params(),
        uncovering={"nu": unc.nu, "block_size": unc.block_size, "tau": unc.tau, "blocks": len(unc)},
        errors=errors,
        r_prime=r_prime,
        seed=seed,
    )
    for trial in range(trials):
        rng = np.random.default_rng([seed, trial])
        u = int(rng.integers(code.size))
        word = channel(code, u, errors, rng)
        start = time.perf_counter()
        result = decode(code, word, unc, r_prime)
        report.decode_seconds += time.perf_counter() - start
        ok = result.vertex == u
        report.trials += 1
        report.successes += ok
        report.failures += not ok
        report.max_blocks_tried = max(report.max_blocks_tried, result.blocks_tried)
        report.rows.append(
            {
                "trial": trial,
                "vertex": u,
                "errors_injected": errors,
                "decoded_vertex": result.vertex,
                "blocks_tried": result.blocks_tried,
                "success": ok,
            }
        )
    return report


def code_to_dict(code: GraphCode) -> dict:
    return {
        "graph": code.graph.descriptor(),
        "resolving_set": list(code.resolving_set.vertices),
        "k": code.k,
        "matrix": code.matrix.tolist(),
    }


def code_from_dict(data: dict) -> GraphCode:
    """Rebuild a code and check the stored matrix against recomputed distances."""
    try:
        graph = graph_from_descriptor(data["graph"])
        rs = ResolvingSet(tuple(int(v) for v in data["resolving_set"]), int(data["k"]))
        stored = data["matrix"]
    except KeyError as exc:
        raise InvalidParameterError(f"code file missing field {exc}") from None
    code = build_code(all_pairs_distances(graph), rs)
    if code.matrix.tolist() != stored:
        raise InvalidParameterError("stored code matrix does not match the graph distances")
    return code


def read_code(path: str | Path) -> GraphCode:
    return code_from_dict(json.loads(Path(path).read_text()))


def write_code(code: GraphCode, path: str | Path) -> None:
    Path(path).write_text(json.dumps(code_to_dict(code)) + "\n")

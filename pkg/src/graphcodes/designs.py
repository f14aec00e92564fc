"""Covering designs and uncoverings over the ground set ``{1..nu}``.

A (nu, kappa, tau)-covering has kappa-blocks containing every tau-subset; its
block-wise complement is a (nu, nu - kappa, tau)-uncovering, whose blocks
avoid every tau-subset at least once.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from math import comb
from pathlib import Path
from typing import Iterable

from .errors import (
    ConstructionUnavailableError,
    InstanceTooLargeError,
    InvalidParameterError,
    ParametersBelowThresholdError,
)

__all__ = [
    "CoveringDesign",
    "Uncovering",
    "schonheim_bound",
    "verify_covering",
    "verify_uncovering",
    "complement",
    "petrov_partition",
    "petrov_covering",
    "minimal_covering_bruteforce",
    "greedy_covering",
    "uncovering_for_code",
    "design_to_dict",
    "design_from_dict",
    "read_design",
    "write_design",
    "BRUTEFORCE_MAX_NU",
]

BRUTEFORCE_MAX_NU = 10
BRUTEFORCE_MAX_NODES = 2_000_000
GREEDY_MAX_CANDIDATES = 250_000

Block = tuple[int, ...]


def _canonical_blocks(nu: int, size: int, blocks: Iterable[Iterable[int]]) -> tuple[Block, ...]:
    out = []
    for raw in blocks:
        block = tuple(sorted(int(x) for x in raw))
        if len(set(block)) != len(block):
            raise InvalidParameterError(f"block {block} has repeated points")
        if len(block) != size:
            raise InvalidParameterError(f"block {block} has size {len(block)}, expected {size}")
        if block and (block[0] < 1 or block[-1] > nu):
            raise InvalidParameterError(f"block {block} leaves the ground set 1..{nu}")
        out.append(block)
    return tuple(out)


@dataclass(frozen=True)
class CoveringDesign:
    nu: int
    kappa: int
    tau: int
    blocks: tuple[Block, ...]
    source: str = field(default="", compare=False)

    def __post_init__(self):
        if not self.nu >= self.kappa >= self.tau >= 0:
            raise InvalidParameterError(f"need nu >= kappa >= tau >= 0, got ({self.nu},{self.kappa},{self.tau})")
        object.__setattr__(self, "blocks", _canonical_blocks(self.nu, self.kappa, self.blocks))

    def __len__(self) -> int:
        return len(self.blocks)


@dataclass(frozen=True)
class Uncovering:
    nu: int
    block_size: int
    tau: int
    blocks: tuple[Block, ...]
    source: str = field(default="", compare=False)

    def __post_init__(self):
        if not 0 <= self.block_size <= self.nu or self.tau < 0 or self.tau > self.nu - self.block_size:
            raise InvalidParameterError(
                f"invalid uncovering parameters ({self.nu},{self.block_size},{self.tau})"
            )
        object.__setattr__(self, "blocks", _canonical_blocks(self.nu, self.block_size, self.blocks))

    def __len__(self) -> int:
        return len(self.blocks)


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def schonheim_bound(nu: int, kappa: int, tau: int) -> int:
    """Nested-ceiling lower bound on the size of a (nu, kappa, tau)-covering."""
    if not nu >= kappa >= tau >= 0:
        raise InvalidParameterError(f"need nu >= kappa >= tau >= 0, got ({nu},{kappa},{tau})")
    value = 1
    for i in range(tau - 1, -1, -1):
        value = _ceil_div((nu - i) * value, kappa - i)
    return value


def _mask(points: Iterable[int]) -> int:
    m = 0
    for p in points:
        m |= 1 << p
    return m


def verify_covering(c: CoveringDesign) -> tuple[bool, Block | None]:
    """Every tau-subset inside some block? Witness is the first uncovered one."""
    masks = [_mask(b) for b in c.blocks]
    for sub in itertools.combinations(range(1, c.nu + 1), c.tau):
        sm = _mask(sub)
        if not any(sm & bm == sm for bm in masks):
            return False, sub
    return True, None


def verify_uncovering(u: Uncovering) -> tuple[bool, Block | None]:
    """Every tau-subset disjoint from some block? Witness is the first that
    meets every block."""
    masks = [_mask(b) for b in u.blocks]
    for sub in itertools.combinations(range(1, u.nu + 1), u.tau):
        sm = _mask(sub)
        if not any(sm & bm == 0 for bm in masks):
            return False, sub
    return True, None


def complement(design: CoveringDesign | Uncovering) -> CoveringDesign | Uncovering:
    """Replace each block by its complement in ``{1..nu}``; maps coverings to
    uncoverings and back."""
    ground = set(range(1, design.nu + 1))
    blocks = [sorted(ground.difference(b)) for b in design.blocks]
    if isinstance(design, CoveringDesign):
        return Uncovering(design.nu, design.nu - design.kappa, design.tau, blocks, source=design.source)
    return CoveringDesign(design.nu, design.nu - design.block_size, design.tau, blocks, source=design.source)


def petrov_partition(nu: int, kappa: int, tau: int) -> list[Block]:
    """Split ``1..nu`` into consecutive parts of size floor(kappa/tau), the
    last part taking the remainder."""
    if not kappa >= tau >= 1:
        raise InvalidParameterError(f"need kappa >= tau >= 1, got kappa={kappa}, tau={tau}")
    m = kappa // tau
    return [tuple(range(lo, min(lo + m, nu + 1))) for lo in range(1, nu + 1, m)]


def petrov_covering(a: int, b: int, kappa: int, tau: int) -> CoveringDesign:
    """Partition covering on ``a*kappa + b`` points.

    One block per tau-combination of parts: the union of the chosen parts,
    padded with the smallest remaining points up to size kappa. Applies once
    the part count is at most ``a*tau + 1``.
    """
    if a < 1 or b < 0:
        raise InvalidParameterError(f"need a >= 1 and b >= 0, got a={a}, b={b}")
    if not kappa >= tau >= 1:
        raise InvalidParameterError(f"need kappa >= tau >= 1, got kappa={kappa}, tau={tau}")
    nu = a * kappa + b
    parts = petrov_partition(nu, kappa, tau)
    if len(parts) > a * tau + 1:
        raise ParametersBelowThresholdError(
            f"kappa={kappa} too small: {len(parts)} parts exceed a*tau+1={a * tau + 1}"
        )
    widest = sum(sorted(map(len, parts), reverse=True)[:tau])
    if widest > kappa:
        raise ParametersBelowThresholdError(f"union of {tau} largest parts has {widest} > kappa={kappa} points")

    blocks = []
    for chosen in itertools.combinations(parts, tau):
        union = set().union(*chosen)
        pad = (p for p in range(1, nu + 1) if p not in union)
        union.update(itertools.islice(pad, kappa - len(union)))
        blocks.append(sorted(union))
    return CoveringDesign(nu, kappa, tau, blocks, source="petrov")


def _tau_index(nu: int, tau: int) -> dict[Block, int]:
    return {sub: i for i, sub in enumerate(itertools.combinations(range(1, nu + 1), tau))}


def _block_coverage_mask(block: Block, tau: int, index: dict[Block, int]) -> int:
    m = 0
    for sub in itertools.combinations(block, tau):
        m |= 1 << index[sub]
    return m


def minimal_covering_bruteforce(
    nu: int,
    kappa: int,
    tau: int,
    max_nu: int = BRUTEFORCE_MAX_NU,
    max_nodes: int = BRUTEFORCE_MAX_NODES,
) -> CoveringDesign:
    """Fewest-block covering by iterative deepening.

    The first block is fixed to ``{1..kappa}`` (any covering can be relabelled
    so), then each level branches on the blocks containing the first uncovered
    tau-subset. Depth starts at the Schonheim bound. Raises
    InstanceTooLargeError past ``max_nu`` or after ``max_nodes`` search nodes.
    """
    if not nu >= kappa >= tau >= 0:
        raise InvalidParameterError(f"need nu >= kappa >= tau >= 0, got ({nu},{kappa},{tau})")
    if nu > max_nu:
        raise InstanceTooLargeError(f"exhaustive covering search capped at nu={max_nu}, got nu={nu}")
    first = tuple(range(1, kappa + 1))
    if tau == 0 or kappa == nu:
        return CoveringDesign(nu, kappa, tau, [first], source="bruteforce")

    index = _tau_index(nu, tau)
    subsets = list(index)
    candidates = list(itertools.combinations(range(1, nu + 1), kappa))
    cand_masks = [_block_coverage_mask(b, tau, index) for b in candidates]
    containing: list[list[int]] = [[] for _ in subsets]
    for ci, block in enumerate(candidates):
        for sub in itertools.combinations(block, tau):
            containing[index[sub]].append(ci)
    per_block = comb(kappa, tau)

    full = (1 << len(subsets)) - 1
    start = full & ~cand_masks[0]
    nodes = 0
    failed: dict[int, int] = {}

    def search(uncovered: int, budget: int, chosen: list[int]) -> bool:
        nonlocal nodes
        if not uncovered:
            return True
        if budget == 0 or uncovered.bit_count() > budget * per_block:
            return False
        if failed.get(uncovered, -1) >= budget:
            return False
        nodes += 1
        if nodes > max_nodes:
            raise InstanceTooLargeError(f"covering search for ({nu},{kappa},{tau}) exceeded {max_nodes} nodes")
        target = (uncovered & -uncovered).bit_length() - 1
        for ci in containing[target]:
            chosen.append(ci)
            if search(uncovered & ~cand_masks[ci], budget - 1, chosen):
                return True
            chosen.pop()
        failed[uncovered] = budget
        return False

    depth = max(schonheim_bound(nu, kappa, tau), 1)
    while True:
        chosen = [0]
        if search(start, depth - 1, chosen):
            blocks = sorted(candidates[ci] for ci in chosen)
            return CoveringDesign(nu, kappa, tau, blocks, source="bruteforce")
        depth += 1


def greedy_covering(nu: int, kappa: int, tau: int, max_candidates: int = GREEDY_MAX_CANDIDATES) -> CoveringDesign:
    """Repeatedly take the kappa-subset covering the most uncovered tau-subsets
    (ties go to the lexicographically first)."""
    if not nu >= kappa >= tau >= 0:
        raise InvalidParameterError(f"need nu >= kappa >= tau >= 0, got ({nu},{kappa},{tau})")
    if comb(nu, kappa) > max_candidates:
        raise ConstructionUnavailableError(
            f"greedy covering over C({nu},{kappa}) = {comb(nu, kappa)} candidate blocks is too large"
        )
    index = _tau_index(nu, tau)
    candidates = list(itertools.combinations(range(1, nu + 1), kappa))
    masks = [_block_coverage_mask(b, tau, index) for b in candidates]
    uncovered = (1 << len(index)) - 1
    blocks = []
    while uncovered:
        best, best_gain = 0, -1
        for ci, m in enumerate(masks):
            gain = (m & uncovered).bit_count()
            if gain > best_gain:
                best, best_gain = ci, gain
        blocks.append(candidates[best])
        uncovered &= ~masks[best]
    return CoveringDesign(nu, kappa, tau, blocks, source="greedy")


def uncovering_for_code(
    ell: int,
    r: int,
    r_prime: int,
    brute_max_nu: int = BRUTEFORCE_MAX_NU,
    brute_max_nodes: int = 200_000,
) -> Uncovering:
    """An (ell, ell - r, r')-uncovering: its blocks are position sets of size
    ell - r, and any r' positions miss at least one of them.

    Built by complementing an (ell, r, r')-covering, tried in the order
    partition construction, exhaustive search, greedy.
    """
    if r_prime > r:
        raise InvalidParameterError(f"r'={r_prime} exceeds r={r}")
    if not ell >= r >= r_prime >= 1:
        raise InvalidParameterError(f"need ell >= r >= r' >= 1, got ({ell},{r},{r_prime})")

    covering = None
    try:
        covering = petrov_covering(ell // r, ell % r, r, r_prime)
    except ParametersBelowThresholdError:
        pass
    if covering is None:
        try:
            covering = minimal_covering_bruteforce(
                ell, r, r_prime, max_nu=brute_max_nu, max_nodes=brute_max_nodes
            )
        except InstanceTooLargeError:
            pass
    if covering is None:
        try:
            covering = greedy_covering(ell, r, r_prime)
        except ConstructionUnavailableError as exc:
            raise ConstructionUnavailableError(
                f"no construction available for an ({ell},{ell - r},{r_prime})-uncovering: {exc}"
            ) from None

    unc = complement(covering)
    ok, witness = verify_uncovering(unc)
    if not ok:
        raise AssertionError(f"{covering.source} construction produced a non-uncovering (witness {witness})")
    return unc


def design_to_dict(design: CoveringDesign | Uncovering) -> dict:
    data: dict = {"nu": design.nu}
    if isinstance(design, CoveringDesign):
        data["kappa"] = design.kappa
    else:
        data["block_size"] = design.block_size
    data["tau"] = design.tau
    data["blocks"] = [list(b) for b in design.blocks]
    if design.source:
        data["source"] = design.source
    return data


def design_from_dict(data: dict) -> CoveringDesign | Uncovering:
    try:
        nu, tau, blocks = int(data["nu"]), int(data["tau"]), data["blocks"]
        source = data.get("source", "")
        if "kappa" in data:
            return CoveringDesign(nu, int(data["kappa"]), tau, blocks, source=source)
        return Uncovering(nu, int(data["block_size"]), tau, blocks, source=source)
    except KeyError as exc:
        raise InvalidParameterError(f"design file missing field {exc}") from None


def read_design(path: str | Path) -> CoveringDesign | Uncovering:
    return design_from_dict(json.loads(Path(path).read_text()))


def write_design(design: CoveringDesign | Uncovering, path: str | Path) -> None:
    Path(path).write_text(json.dumps(design_to_dict(design), indent=2) + "\n")

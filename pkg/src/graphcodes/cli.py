"""Command-line front end.

    graphcodes kdim --grid 3 3 --k 1..4
    graphcodes build --path 5 --k 4 --out p5.json
    graphcodes decode --code-file p5.json --word 3 1 0 1 2 --r-prime 1
    graphcodes simulate --grid 7 5 --k 7 --errors 2 --trials 1000 --seed 1
    graphcodes covering --petrov 2 3 10 --tau 2

Exit codes: 0 success, 2 invalid parameters, 3 verification or decode
failure, 4 instance too large.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from typing import Sequence

from . import codec, designs, resolving
from .errors import GraphCodesError, InvalidParameterError
from .graphs import (
    Graph,
    all_pairs_distances,
    build_complete,
    build_cycle,
    build_grid,
    build_path,
    read_graph_file,
)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_FAILURE = 3


def parse_k_range(text: str) -> list[int]:
    """``4``, ``1..4`` or ``1,3,5``."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            ks = list(range(int(lo), int(hi) + 1))
        else:
            ks = [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise InvalidParameterError(f"cannot parse k range {text!r}") from None
    if not ks or min(ks) < 1:
        raise InvalidParameterError(f"k range {text!r} must contain positive integers")
    return ks


def _add_graph_args(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--path", type=int, metavar="N")
    g.add_argument("--cycle", type=int, metavar="N")
    g.add_argument("--grid", type=int, nargs=2, metavar=("S", "T"))
    g.add_argument("--complete", type=int, metavar="N")
    g.add_argument("--graph-file", metavar="PATH", help="first line n, then one 'u v' edge per line")


def _graph_from_args(args) -> Graph:
    if args.path is not None:
        return build_path(args.path)
    if args.cycle is not None:
        return build_cycle(args.cycle)
    if args.grid is not None:
        return build_grid(*args.grid)
    if args.complete is not None:
        return build_complete(args.complete)
    return read_graph_file(args.graph_file)


def _emit(data: dict) -> None:
    print(json.dumps(data, sort_keys=False))


def _print_table(code: codec.GraphCode) -> None:
    width = max(len(str(code.diameter)), 1)
    print("vertex | codeword")
    for u in range(code.size):
        print(f"{u:>6} | " + " ".join(f"{x:>{width}}" for x in code.matrix[u]))


def cmd_kdim(args) -> int:
    graph = _graph_from_args(args)
    report = resolving.dimension_report(
        graph, parse_k_range(args.k), construct_only=args.construct_only, max_n=args.max_n
    )
    if args.json:
        _emit(report.to_dict())
        return EXIT_OK
    print(f"graph {graph.family_tag} (n={graph.n}) is {report.max_k}-metric dimensional")
    for k in sorted(report.dims):
        basis = list(report.bases[k].vertices)
        print(f"dim_{k} = {report.dims[k]}  [{report.sources[k]}]  basis {basis}")
    return EXIT_OK


def cmd_build(args) -> int:
    graph = _graph_from_args(args)
    dm = all_pairs_distances(graph)
    if args.basis_file:
        with open(args.basis_file) as fh:
            basis = resolving.ResolvingSet.from_dict(json.load(fh))
    else:
        basis = resolving.construct_basis(graph, args.k, dm)
    code = codec.build_code(dm, basis)
    if args.out:
        codec.write_code(code, args.out)
    if args.json:
        _emit(codec.code_to_dict(code) | {"params": code.params()})
        return EXIT_OK
    p = code.params()
    print(
        f"n={p['n']} length={p['length']} alphabet_size={p['alphabet_size']} "
        f"D={p['min_distance']} r={p['r']}"
    )
    print(f"resolving set {list(code.resolving_set.vertices)} (k={code.k})")
    _print_table(code)
    return EXIT_OK


def _load_uncovering(path: str) -> designs.Uncovering:
    design = designs.read_design(path)
    if isinstance(design, designs.CoveringDesign):
        design = designs.complement(design)
    return design


def cmd_decode(args) -> int:
    code = codec.read_code(args.code_file)
    if len(args.word) != code.length:
        raise InvalidParameterError(f"word has {len(args.word)} symbols, code length is {code.length}")
    if args.uncovering_file:
        unc = _load_uncovering(args.uncovering_file)
    else:
        unc = designs.uncovering_for_code(code.length, code.correction_capability, args.r_prime)
    result = codec.decode(code, args.word, unc, args.r_prime)
    if args.json:
        _emit(result.to_dict())
    elif result.success:
        print(f"decoded vertex {result.vertex} codeword {list(result.codeword)} (blocks tried {result.blocks_tried})")
    else:
        print(f"decode failure: {result.reason} (blocks tried {result.blocks_tried})")
    return EXIT_OK if result.success else EXIT_FAILURE


def cmd_simulate(args) -> int:
    graph = _graph_from_args(args)
    radius = (args.k - 1) // 2
    r_prime = args.r_prime if args.r_prime is not None else min(max(args.errors, 1), max(radius, 1))
    if args.uncovering_file:
        dm = all_pairs_distances(graph)
        code = codec.build_code(dm, resolving.construct_basis(graph, args.k, dm))
        unc = _load_uncovering(args.uncovering_file)
    else:
        code, unc = codec.code_suite(graph, args.k, r_prime)
    report = codec.simulate(code, unc, r_prime, args.errors, args.trials, args.seed)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.DictWriter(
                fh, fieldnames=["trial", "vertex", "errors_injected", "decoded_vertex", "blocks_tried", "success"]
            )
            writer.writeheader()
            writer.writerows(report.rows)
    if args.json:
        _emit(report.to_dict(timing=args.timing))
    else:
        p = report.code
        print(f"code n={p['n']} length={p['length']} alphabet_size={p['alphabet_size']} D={p['min_distance']} r={p['r']}")
        u = report.uncovering
        print(f"uncovering ({u['nu']},{u['block_size']},{u['tau']}) with {u['blocks']} blocks")
        print(f"errors={report.errors} r'={report.r_prime} trials={report.trials}")
        print(f"successes={report.successes} failures={report.failures} max_blocks_tried={report.max_blocks_tried}")
        if args.timing and report.trials:
            print(f"mean decode time {report.decode_seconds / report.trials * 1e6:.1f} us")
    if report.guaranteed and report.failures:
        return EXIT_FAILURE
    return EXIT_OK


def cmd_covering(args) -> int:
    if args.bound:
        nu, kappa, tau = args.bound
        value = designs.schonheim_bound(nu, kappa, tau)
        if args.json:
            _emit({"nu": nu, "kappa": kappa, "tau": tau, "schonheim_bound": value})
        else:
            print(value)
        return EXIT_OK
    if args.petrov:
        if args.tau is None:
            raise InvalidParameterError("--petrov needs --tau")
        cov = designs.petrov_covering(*args.petrov, args.tau)
    elif args.brute:
        cov = designs.minimal_covering_bruteforce(*args.brute)
    else:
        cov = designs.greedy_covering(*args.greedy)
    ok, witness = designs.verify_covering(cov)
    unc = designs.complement(cov)
    if args.covering_file:
        designs.write_design(cov, args.covering_file)
    if args.uncovering_file:
        designs.write_design(unc, args.uncovering_file)
    if args.json:
        _emit(designs.design_to_dict(cov) | {"verified": ok, "schonheim_bound": designs.schonheim_bound(cov.nu, cov.kappa, cov.tau)})
    else:
        print(f"({cov.nu},{cov.kappa},{cov.tau})-covering, {len(cov)} blocks [{cov.source}], verified={ok}")
        print(f"Schonheim bound {designs.schonheim_bound(cov.nu, cov.kappa, cov.tau)}")
        for block in cov.blocks:
            print(" ".join(f"{x:>3}" for x in block))
    if not ok:
        print(f"uncovered {cov.tau}-subset: {list(witness)}", file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="graphcodes", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kdim", help="k-metric dimension of a graph")
    _add_graph_args(p)
    p.add_argument("--k", required=True, help="k, a range lo..hi, or a comma list")
    p.add_argument("--construct-only", action="store_true", help="use family constructions, no exhaustive search")
    p.add_argument("--max-n", type=int, default=resolving.BRUTEFORCE_MAX_N)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_kdim)

    p = sub.add_parser("build", help="build a (G,k)-code")
    _add_graph_args(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--basis-file", help="JSON resolving set to use instead of the family construction")
    p.add_argument("--out", help="write the code JSON here")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("decode", help="decode one received word")
    p.add_argument("--code-file", required=True)
    p.add_argument("--word", type=int, nargs="+", required=True)
    p.add_argument("--r-prime", type=int, default=1)
    p.add_argument("--uncovering-file", help="design JSON (a covering is complemented on load)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("simulate", help="encode, corrupt and decode random vertices")
    _add_graph_args(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--errors", type=int, required=True)
    p.add_argument("--r-prime", type=int)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--uncovering-file")
    p.add_argument("--csv", metavar="PATH", help="per-trial rows")
    p.add_argument("--timing", action="store_true", help="include wall-clock decode timing")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("covering", help="covering designs and the Schonheim bound")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--petrov", type=int, nargs=3, metavar=("A", "B", "KAPPA"))
    mode.add_argument("--bound", type=int, nargs=3, metavar=("NU", "KAPPA", "TAU"))
    mode.add_argument("--brute", type=int, nargs=3, metavar=("NU", "KAPPA", "TAU"))
    mode.add_argument("--greedy", type=int, nargs=3, metavar=("NU", "KAPPA", "TAU"))
    p.add_argument("--tau", type=int)
    p.add_argument("--covering-file", help="write the covering JSON here")
    p.add_argument("--uncovering-file", help="write the complementary uncovering JSON here")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_covering)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except GraphCodesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())

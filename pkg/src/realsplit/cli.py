"""Command line entry point: ``realsplit {split,verify,components,oracle}``.

Exit codes: 0 everything passed, 1 a check failed or the splitting was
refused, 2 the input was invalid or incomplete.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .assemble import (
    CoefficientError,
    InputError,
    NoSplittingClaimed,
    assemble_splitting,
    cm_data_for,
    render,
    resolve_components,
    verify_all,
)
from .inputs import load_variety
from .real_locus import IncompleteInputError, RealLocusError, all_components_connected_iff, gamma_possibilities
from .topology import TopologyInputError, certify_splitting, real_points_splitting

log = logging.getLogger("realsplit")

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _emit(obj, fmt: str, text: str) -> None:
    print(json.dumps(obj, indent=2, ensure_ascii=False) if fmt == "json" else text)


def cmd_split(args) -> int:
    v = load_variety(args.input)
    try:
        e = assemble_splitting(v)
    except CoefficientError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        print("integral splitting offered instead:", file=sys.stderr)
        print(render(exc.fallback, args.format))
        return EXIT_FAIL
    except NoSplittingClaimed as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_FAIL
    print(render(e, args.format))
    return EXIT_OK


def cmd_verify(args) -> int:
    v = load_variety(args.input)
    log.debug("verifying %s at depth %s", v, args.depth)
    report = verify_all(v, depth=args.depth, seed=args.seed, corrupt_projector=args.corrupt_projector)
    if args.format == "json":
        print(json.dumps(report.to_dict(), indent=2, ensure_ascii=False))
    else:
        for name, s in report.suites.items():
            print(f"{s.status.upper():4}  {name:22} {s.runtime_s * 1000:8.1f} ms")
        print("all suites passed" if report.passed else "verification FAILED")
    return report.exit_code


def cmd_components(args) -> int:
    v = load_variety(args.input)
    data = cm_data_for(v, require_epsilon=False)
    doc = {"g": v.g}
    if data is not None:
        doc["label"] = data.label
        doc["primes_over_two"] = [
            {"ord_disc": p.ord_disc, "residue_degree": p.residue_degree,
             "ord_two": p.ord_two, "epsilon": p.epsilon}
            for p in data.primes_over_two
        ]
        doc["possible_counts"] = sorted(gamma_possibilities(data))
        doc["always_connected"] = all_components_connected_iff(data)
    try:
        n, missing = resolve_components(v), None
    except IncompleteInputError as exc:
        n, missing = None, exc
    doc["n_components"] = n
    text = f"n(X) = {n if n is not None else '?'}"
    if "possible_counts" in doc:
        text += f"   (possible over all module choices: {doc['possible_counts']})"
    _emit(doc, args.format, text)
    if missing is not None:
        print(f"error: {missing}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


def cmd_oracle(args) -> int:
    if args.input:
        v = load_variety(args.input)
        g, n = v.g, resolve_components(v)
    elif args.g is not None and args.n is not None:
        g, n = args.g, args.n
    else:
        raise InputError("oracle needs --input or both --g and --n")
    res = certify_splitting(g, n)
    wedge = real_points_splitting(g, n)
    doc = {**res.to_dict(), "wedge": {str(k): m for k, m in wedge.entries.items()}}
    text = "\n".join([
        f"g = {g}, n = {n}: {'PASS' if res.passed else 'FAIL'} ({res.details['certificate']})",
        f"  suspension H~_*: {res.details['suspension_homology']}",
        f"  wedge      H~_*: {res.details['wedge_homology']}",
        f"  summands: {res.details['summands']} (expected {res.details['expected_summands']})",
    ])
    _emit(doc, args.format, text)
    return EXIT_OK if res.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="realsplit",
        description="Stable wedge splitting of real abelian varieties, with exact verification.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, need_input=True):
        p.add_argument("--input", required=need_input, help="TOML or JSON variety description")
        p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("split", help="compute the splitting expression")
    common(p)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("verify", help="run the verification suites")
    common(p)
    p.add_argument("--depth", choices=("quick", "full"), default="full")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized property checks")
    p.add_argument("--corrupt-projector", type=int, default=None, metavar="I",
                   help="negative control: perturb projector I before verifying")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("components", help="number of connected components of X(R)")
    common(p)
    p.set_defaults(func=cmd_components)

    p = sub.add_parser("oracle", help="homology certificate of the real-points splitting")
    common(p, need_input=False)
    p.add_argument("--g", type=int)
    p.add_argument("--n", type=int)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (InputError, RealLocusError, TopologyInputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

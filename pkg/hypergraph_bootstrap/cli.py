"""Command-line front end: generate, run, verify and scan.

Report lines go to stdout, logs to stderr. Exit codes:

    0  success
    1  verification failure
    2  bad parameters, malformed input or invalid configuration
    3  memory budget or key width exceeded
    4  unreadable input or unwritable output
"""

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import List, Optional

from hypergraph_bootstrap import config
from hypergraph_bootstrap.__version__ import __version__
from hypergraph_bootstrap.constructions import (
    beachball,
    complete_hypergraph,
    complete_minus_clique,
    path_graph,
    random_hypergraph,
    slow3,
    write_labels,
)
from hypergraph_bootstrap.core import read_hypergraph, write_hypergraph
from hypergraph_bootstrap.engine import make_config, run, write_trace
from hypergraph_bootstrap.exceptions import (
    HypergraphBootstrapError,
    ResourceError,
    UnsupportedParameter,
)
from hypergraph_bootstrap.verify import (
    check_civilised,
    check_sequence,
    scaling_report,
    write_scaling_csv,
)

logger = logging.getLogger("hypergraph_bootstrap.cli")

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_BAD_INPUT = 2
EXIT_RESOURCE = 3
EXIT_IO = 4

CONSTRUCTIONS = ["slow3", "path", "complete-minus-clique", "beachball", "complete", "random"]


# --- Path checks ---


def _check_readable(path: str) -> None:
    if not os.path.isfile(path) or not os.access(path, os.R_OK):
        raise OSError(f"cannot read '{path}'")


def _check_writable(path: Optional[str]) -> None:
    if path is None:
        return
    target = Path(path)
    parent = target.parent if str(target.parent) else Path(".")
    if target.is_dir():
        raise OSError(f"'{path}' is a directory")
    if not parent.is_dir() or not os.access(parent, os.W_OK):
        raise OSError(f"cannot write '{path}'")
    if target.exists() and not os.access(target, os.W_OK):
        raise OSError(f"cannot write '{path}'")


def _require(args: argparse.Namespace, *names: str) -> None:
    missing = [f"--{name.replace('_', '-')}" for name in names if getattr(args, name) is None]
    if missing:
        raise UnsupportedParameter(f"{args.construction} needs {', '.join(missing)}")


def parse_n_values(text: str) -> List[int]:
    """'2,4,8', '2..6' or '10..40:10' (inclusive ranges), comma-combinable."""
    values = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        try:
            if ".." in item:
                span, _, step = item.partition(":")
                lo, hi = span.split("..")
                values.extend(range(int(lo), int(hi) + 1, int(step) if step else 1))
            else:
                values.append(int(item))
        except ValueError:
            raise UnsupportedParameter(f"invalid n list item '{item}'")
    if not values:
        raise UnsupportedParameter(f"empty n range '{text}'")
    return values


def parse_edge(text: str) -> List[int]:
    try:
        return [int(tok) for tok in text.replace(",", " ").split()]
    except ValueError:
        raise UnsupportedParameter(f"invalid edge '{text}'; expected comma-separated integers")


# --- Subcommands ---


def cmd_generate(args: argparse.Namespace) -> int:
    _check_writable(args.output)
    _check_writable(args.labels)
    comments = [f"{args.construction} generated by hypergraph-bootstrap {__version__}"]
    construction = None
    if args.construction == "slow3":
        _require(args, "n")
        construction = slow3(args.n, store=args.store)
        G = construction.G0
        comments.append(f"n={args.n} e0={' '.join(str(v) for v in construction.e0)}")
    elif args.construction == "path":
        _require(args, "n")
        G = path_graph(args.n)
    elif args.construction == "complete-minus-clique":
        _require(args, "n", "k")
        G = complete_minus_clique(args.n, args.k)
        comments.append(f"n={args.n} k={args.k}")
    elif args.construction == "beachball":
        _require(args, "n")
        # top 0, bottom 1, middles 2 .. n+1
        G = beachball(0, 1, list(range(2, args.n + 2)))
    elif args.construction == "complete":
        _require(args, "n")
        G = complete_hypergraph(args.n, args.r)
    else:
        _require(args, "n", "p")
        G = random_hypergraph(args.n, args.r, args.p, seed=args.seed)
        comments.append(f"n={args.n} r={args.r} p={args.p} seed={args.seed}")

    if args.labels is not None and construction is None:
        raise UnsupportedParameter("--labels is only available for slow3")
    write_hypergraph(G, args.output, comments)
    if args.labels is not None:
        write_labels(construction, args.labels)
    print(f"vertices={G.n} edges={G.edge_count}")
    return EXIT_OK


def cmd_run(args: argparse.Namespace) -> int:
    _check_readable(args.input)
    _check_writable(args.trace)
    cfg = make_config(
        k=args.k,
        engine_kind=args.engine,
        max_rounds=args.max_rounds,
        record_witnesses=args.trace is not None and not args.no_witnesses,
    )
    G0 = read_hypergraph(args.input, store=args.store)
    result = run(G0, cfg)
    if args.trace is not None:
        write_trace(result, args.trace, witnesses=not args.no_witnesses)
    print(result.summary())
    return EXIT_OK


def _verify_civilised(args: argparse.Namespace) -> int:
    if args.input is not None:
        if args.e0 is None:
            raise UnsupportedParameter("verify civilised with --input needs --e0")
        G0 = read_hypergraph(args.input)
        e0 = parse_edge(args.e0)
    elif args.n is not None:
        construction = slow3(args.n)
        G0, e0 = construction.G0, construction.e0
    else:
        raise UnsupportedParameter("verify civilised needs --n or --input")

    report = check_civilised(G0, e0, G0.r, engine_kind=args.engine)
    violation = report.first_violation
    for condition, ok in ((1, report.cond1_ok), (2, report.cond2_ok), (3, report.cond3_ok)):
        if ok:
            print(f"condition {condition}: PASS")
        elif violation is not None and violation.condition == condition:
            print(f"condition {condition}: FAIL at t={violation.t}: {violation.detail}")
        else:
            print(f"condition {condition}: FAIL")
    print(f"T={report.T}")
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


def _verify_sequence(args: argparse.Namespace) -> int:
    if args.n is None:
        raise UnsupportedParameter("verify sequence needs --n")
    if args.n < 2:
        raise UnsupportedParameter(f"n must be ≥ 2 (got n={args.n})")
    G0 = read_hypergraph(args.input) if args.input is not None else None
    diff = check_sequence(args.n, engine_kind=args.engine, G0=G0)
    print(f"matched {diff.matched_prefix_len}/{diff.expected_len}")
    mismatch = diff.first_mismatch
    if mismatch is not None:
        context = ""
        if mismatch.phase is not None:
            context = f" (phase {mismatch.phase}, stage {mismatch.stage}, position {mismatch.position})"
        print(
            f"first mismatch at t={mismatch.t}: expected {mismatch.expected}{context}, "
            f"got {mismatch.actual}"
        )
    if not diff.copies_ok:
        print("copies: FAIL")
    return EXIT_OK if diff.full_match and diff.copies_ok else EXIT_VERIFY_FAILED


def cmd_verify(args: argparse.Namespace) -> int:
    if args.input is not None:
        _check_readable(args.input)
    if args.target == "civilised":
        return _verify_civilised(args)
    return _verify_sequence(args)


def cmd_scan(args: argparse.Namespace) -> int:
    _check_writable(args.csv)
    rows = scaling_report(
        parse_n_values(args.n),
        engine_kind=args.engine,
        jobs=args.jobs,
        progress=args.progress or None,
    )
    if args.csv is not None:
        write_scaling_csv(rows, args.csv)
    for row in rows:
        print(",".join(row.csv_fields()))
    return EXIT_OK


# --- Parser ---


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hypergraph-bootstrap",
        description="K_k^(r)-bootstrap percolation: generators, engines and verifiers",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--log-level",
        default=config.LOG_LEVEL,
        help=f"Log level for stderr output (default: {config.LOG_LEVEL})",
    )
    engines = ["naive", "incremental"]
    stores = ["hashed", "dense", "auto"]
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="Write an initial hypergraph")
    gen.add_argument("construction", choices=CONSTRUCTIONS)
    gen.add_argument("--n", type=int, help="Construction size parameter")
    gen.add_argument("--k", type=int, help="Clique size (complete-minus-clique)")
    gen.add_argument("--r", type=int, default=3, help="Uniformity (complete, random; default: 3)")
    gen.add_argument("--p", type=float, help="Edge probability (random)")
    gen.add_argument(
        "--seed",
        type=int,
        default=config.DEFAULT_SEED,
        help=f"Seed for random (default: {config.DEFAULT_SEED})",
    )
    gen.add_argument("-o", "--output", required=True, help="Hypergraph file to write")
    gen.add_argument("--labels", help="Label sidecar to write (slow3 only)")
    gen.add_argument("--store", choices=stores, help="Edge store (default: HB_EDGE_STORE)")
    gen.set_defaults(func=cmd_generate)

    run_p = sub.add_parser("run", help="Run the process on a hypergraph file")
    run_p.add_argument("input", help="Hypergraph file")
    run_p.add_argument("--k", type=int, required=True, help="Clique size, must exceed r")
    run_p.add_argument("--engine", choices=engines, default=config.ENGINE)
    run_p.add_argument("--trace", help="JSONL trace to write")
    run_p.add_argument("--no-witnesses", action="store_true", help="Omit witnesses from the trace")
    run_p.add_argument("--max-rounds", type=int, help="Stop after this many rounds")
    run_p.add_argument("--store", choices=stores, help="Edge store (default: HB_EDGE_STORE)")
    run_p.set_defaults(func=cmd_run)

    ver = sub.add_parser("verify", help="Check the slow construction")
    ver.add_argument("target", choices=["civilised", "sequence"])
    ver.add_argument("--n", type=int, help="slow3 parameter")
    ver.add_argument("--input", help="Hypergraph file to check instead of slow3(n)")
    ver.add_argument("--e0", help="Seed edge for civilised, e.g. 0,10,11")
    ver.add_argument("--engine", choices=engines, default=config.ENGINE)
    ver.set_defaults(func=cmd_verify)

    scan = sub.add_parser("scan", help="Running time of slow3 over a range of n")
    scan.add_argument("--n", required=True, help="n values: '2,4,8', '2..6' or '10..40:10'")
    scan.add_argument("--csv", help="CSV file to write")
    scan.add_argument("--engine", choices=engines, default=config.ENGINE)
    scan.add_argument("--jobs", type=int, default=1, help="Worker processes (default: 1)")
    scan.add_argument("--progress", action="store_true", help="Show a progress bar")
    scan.set_defaults(func=cmd_scan)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        logging.basicConfig(
            level=args.log_level.upper(),
            format=config.LOG_FORMAT,
            stream=sys.stderr,
        )
        return args.func(args)
    except ResourceError as e:
        logger.error(f"Resource limit: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except (HypergraphBootstrapError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

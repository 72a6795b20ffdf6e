"""Command line interface.

Exit codes: 0 success, 1 verification or orbit failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import io
from .bench import BenchFailure, generate_instance, run_bench
from .chen import PiecewiseLinearPath, normalized_level3
from .recovery import NotInOrbit, RecoveryConfig, format_trace, recover
from .tensor import congruence_act, core_tensor, format_folding

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _dims(text: str) -> list[int]:
    try:
        dims = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma separated list of integers: {text!r}") from None
    if not dims:
        raise argparse.ArgumentTypeError("no dimensions given")
    return dims


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def cmd_core(args) -> int:
    print(format_folding(core_tensor(args.dim)))
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.dim < 2:
        print("gen: --dim must be at least 2", file=sys.stderr)
        return EXIT_USAGE
    doc = io.instance_to_dict(generate_instance(args.dim, args.seed, args.bound))
    if args.out:
        io.write_json(args.out, doc)
    else:
        sys.stdout.write(io.dumps(doc))
    return EXIT_OK


def cmd_recover(args) -> int:
    inst = io.load_instance(args.input)
    cfg = RecoveryConfig(
        rng_seed=args.seed,
        max_retries=args.max_retries,
        deterministic_pivot=args.deterministic_pivot,
    )
    try:
        a, trace = recover(inst.tensor, cfg)
    except NotInOrbit as exc:
        print(f"not in orbit: failed at {exc.step}: {exc.detail}", file=sys.stderr)
        return EXIT_FAIL
    print(a)
    trace_path = args.trace or str(Path(args.input).with_suffix("")) + ".trace.json"
    io.write_json(trace_path, io.trace_to_dict(trace))
    if args.out:
        io.write_json(args.out, io.matrix_to_dict(a))
    if args.verbose:
        print(format_trace(trace), file=sys.stderr)
    if inst.matrix is not None and inst.matrix != a:
        # cannot happen for a verified result (trivial stabiliser)
        print("warning: recovered matrix differs from the embedded ground truth", file=sys.stderr)
        return EXIT_FAIL
    print(f"verified: A * C equals the input (trace: {trace_path})", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    tensor = io.load_instance(args.tensor).tensor
    a = io.load_matrix(args.matrix)
    if a.shape != (tensor.dim, tensor.dim):
        print(f"verify: matrix shape {a.shape} does not match tensor dimension {tensor.dim}", file=sys.stderr)
        return EXIT_USAGE
    if congruence_act(a, core_tensor(tensor.dim)) == tensor:
        print("pass")
        return EXIT_OK
    print("fail")
    return EXIT_FAIL


def cmd_bench(args) -> int:
    try:
        report = run_bench(args.dims, args.trials, args.seed, args.bound, args.jobs)
    except BenchFailure as exc:
        print(f"bench aborted: {exc}", file=sys.stderr)
        return EXIT_FAIL
    print(report.format_table())
    if args.out:
        Path(args.out).write_text(json.dumps(report.to_dict(), indent=1) + "\n")
    return EXIT_OK


def cmd_signature(args) -> int:
    if args.matrix:
        a = io.load_matrix(args.matrix)
        path = PiecewiseLinearPath.axis(a.nrows).transformed(a)
    else:
        path = PiecewiseLinearPath.axis(args.dim)
    print(format_folding(normalized_level3(path)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sigrecover",
        description="Recover a piecewise linear path from its third level signature tensor.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("core", help="print the mode-1 folding of the core tensor")
    p.add_argument("--dim", type=_positive, required=True)
    p.set_defaults(func=cmd_core)

    p = sub.add_parser("gen", help="write a random instance G = A * C")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--bound", type=_positive, default=5, help="entries of A lie in [-bound, bound]")
    p.add_argument("--out", help="output file (default: stdout)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("recover", help="recover A from an instance file")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--seed", type=int, default=0, help="seed for random coordinate changes")
    p.add_argument("--deterministic-pivot", action="store_true",
                   help="try coordinate cycles before random changes of coordinates")
    p.add_argument("--max-retries", type=_positive, default=32)
    p.add_argument("--trace", help="trace output file (default: <input>.trace.json)")
    p.add_argument("--out", help="also write A as a matrix file")
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("verify", help="check G = A * C exactly")
    p.add_argument("--tensor", required=True, help="instance file holding G")
    p.add_argument("--matrix", required=True, help="matrix file (or instance file with a matrix)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="time recovery over random instances")
    p.add_argument("--dims", type=_dims, default=[5, 10, 20, 40])
    p.add_argument("--trials", type=_positive, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bound", type=_positive, default=5)
    p.add_argument("--jobs", type=_positive, default=1)
    p.add_argument("--out", help="write the machine-readable report here")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("signature", help="print 6 * level-3 signature via Chen's identity")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--dim", type=_positive, help="unit axis path of this dimension")
    g.add_argument("--matrix", help="axis path transformed by this matrix")
    p.set_defaults(func=cmd_signature)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "bench" and any(d < 2 for d in args.dims):
        parser.error("bench dimensions must be at least 2")
    try:
        return args.func(args)
    except (io.FormatError, OSError) as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE

"""Command line interface.

Exit codes: 0 solved/consistent, 1 inconsistent, 2 timeout, 3 usage or
input error.  Machine-readable artifacts go to files; stdout carries the
human-readable report unless --quiet/--print say otherwise.
"""

import argparse
import os
import sys
from fractions import Fraction

from . import algebra, bench, generate, network, pathcon, search, tractable

EXIT_OK = 0
EXIT_INCONSISTENT = 1
EXIT_TIMEOUT = 2
EXIT_USAGE = 3

_QUEUE_ALIAS = {"fifo": "fifo", "lifo": "lifo", "weight": "weight",
                "card": "card", "constr": "constr"}


def _read(path):
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _write(path, text):
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(text)


def _load_network(path):
    text = _read(path)
    for line in text.splitlines():
        stripped = line.strip()
        if stripped and not stripped.startswith("#"):
            if stripped.startswith("matrix"):
                return network.parse_matrix(text)
            break
    return network.parse_network(text)


def _pc_config(args):
    skip = frozenset() if args.skip == "none" else frozenset(args.skip.replace(",", ""))
    return pathcon.PCConfig(composition=args.comp, skip=skip,
                            queue=_QUEUE_ALIAS[args.queue])


def _load_frequencies(path):
    scores = dict.fromkeys(algebra.REL_NAMES, 0)
    for lineno, raw in enumerate(_read(path).splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 2 or fields[0] not in scores:
            raise ValueError(f"line {lineno}: expected '<relation> <score>'")
        scores[fields[0]] = int(fields[1])
    return tuple(scores[name] for name in algebra.REL_NAMES)


def _format_frequencies(scores):
    return "\n".join(
        f"{name} {score}" for name, score in zip(algebra.REL_NAMES, scores)
    ) + "\n"


def cmd_pc(args):
    net = _load_network(args.network)
    cfg = _pc_config(args)
    ok, stats = pathcon.path_consistency(net, cfg)
    if not args.quiet:
        print("verdict:", "consistent" if ok else "inconsistent")
        print(f"iterations:   {stats.iterations}")
        print(f"compositions: {stats.compositions}")
        print(f"skipped:      a={stats.skipped_a} b={stats.skipped_b} "
              f"c={stats.skipped_c}")
        print(f"enqueues:     {stats.enqueues} (queue peak {stats.queue_peak})")
        print(f"updates:      {stats.updates}")
        if ok:
            for i, j in net.edges():
                label = net.get(i, j)
                if label != algebra.FULL:
                    print(f"  ({net.name_of(i)}, {net.name_of(j)}) = "
                          f"{{{algebra.format_label(label)}}}")
    if ok and args.out:
        _write(args.out, network.serialize_network(net))
    if ok and args.quiet and args.print:
        sys.stdout.write(network.serialize_network(net))
    return EXIT_OK if ok else EXIT_INCONSISTENT


def cmd_solve(args):
    net = _load_network(args.network)
    frequencies = search.DEFAULT_FREQUENCIES
    if args.freq_table:
        frequencies = _load_frequencies(args.freq_table)
    var_order = None if args.var_order == "none" else tuple(
        _QUEUE_ALIAS[tok] for tok in args.var_order.split(",")
    )
    cfg = search.SearchConfig(
        decomp=args.decomp, var_order=var_order,
        val_order=None if args.val_order == "none" else "freq",
        frequencies=frequencies, timeout=args.timeout,
    )
    result = search.backtrack_solve(net, cfg)
    if not args.quiet:
        print("verdict:", {"solved": "consistent"}.get(result.status, result.status))
        print(f"nodes:      {result.stats.nodes}")
        print(f"backtracks: {result.stats.backtracks}")
        print(f"trail peak: {result.stats.trail_peak}")
        print(f"compositions: {result.stats.pc.compositions}")
        print("preprocessing:",
              "consistent" if result.stats.preprocessing_consistent
              else "inconsistent")
    if result.status == "inconsistent":
        return EXIT_INCONSISTENT
    if result.status == "timeout":
        return EXIT_TIMEOUT
    scenario = search.extract_scenario(result.network, cfg.decomp)
    intervals = search.realize(scenario)
    if args.emit_scenario:
        _write(args.emit_scenario, network.serialize_network(scenario))
    if args.emit_intervals:
        _write(args.emit_intervals, search.format_intervals(intervals))
    if args.quiet and args.print:
        sys.stdout.write(network.serialize_network(scenario))
    elif not args.quiet:
        print("scenario found; realization:")
        for i, (lo, hi) in enumerate(intervals):
            print(f"  {net.name_of(i)}: [{lo}, {hi}]")
    return EXIT_OK


def cmd_classify(args):
    label = algebra.parse_label(args.label)
    if label == 0:
        print("empty label", file=sys.stderr)
        return EXIT_USAGE
    cat = tractable.catalog()
    print(f"label: {{{algebra.format_label(label)}}}")
    print(f"cardinality: {algebra.cardinality(label)}  "
          f"weight: {algebra.weight(label)}")
    print("pointizable (SA):", tractable.is_pointizable(label))
    print("ord-horn (NB):   ", tractable.is_ord_horn(label))
    for method in tractable.METHODS:
        blocks = cat.decompose(label, method)
        pretty = " ".join(f"{{{algebra.format_label(b)}}}" for b in blocks)
        print(f"{method} blocks ({len(blocks)}): {pretty}")
    if args.dump:
        with open(args.dump, "w", encoding="utf-8") as handle:
            for x in range(1, algebra.N_LABELS):
                row = [algebra.format_label(x),
                       "sa" if tractable.is_pointizable(x) else "-",
                       "nb" if tractable.is_ord_horn(x) else "-"]
                for method in tractable.METHODS:
                    row.append(";".join(
                        algebra.format_label(b) for b in cat.decompose(x, method)
                    ))
                handle.write("\t".join(row) + "\n")
    return EXIT_OK


def cmd_gen(args):
    cfg = generate.GeneratorConfig(
        model=args.model, n=args.n, seed=args.seed,
        p=Fraction(args.p) if args.p else None,
        embed=not args.no_embed,
    )
    net = generate.generate(cfg)
    text = network.serialize_network(net)
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_bench(args):
    spec = bench.parse_suite(_read(args.suite))
    with open(args.out, "w", encoding="utf-8", newline="") as sink:
        records = bench.run_suite(spec, sink=sink, jobs=args.jobs)
    summary = bench.summarize(records, timeout=spec.timeout)
    for name, stats in summary.items():
        t = stats["time_ms"]
        print(f"{name}: n={stats['count']} censored={stats['censored']} "
              f"mean={t['mean']:.1f}ms cov={t['cov']:.3f} "
              f"median={t['percentiles'][5]:.1f}ms")
    return EXIT_OK


def cmd_calibrate(args):
    gen_base = generate.GeneratorConfig(
        model=args.model, n=args.n, seed=args.seed,
        p=Fraction(args.p) if args.p else None,
    )
    solver = bench.SolverSpec(name="calibrate", command="solve",
                              decomp=args.decomp)
    scores, warnings = bench.calibrate_frequencies(
        gen_base, solver, args.k, timeout=args.timeout
    )
    for warning in warnings:
        print("warning:", warning, file=sys.stderr)
    text = _format_frequencies(scores)
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args):
    net = _load_network(args.network)
    intervals = search.parse_intervals(_read(args.intervals))
    if len(intervals) != net.n:
        print(f"expected {net.n} intervals, got {len(intervals)}",
              file=sys.stderr)
        return EXIT_USAGE
    ok = search.verify_assignment(net, intervals)
    print("verdict:", "satisfied" if ok else "violated")
    return EXIT_OK if ok else EXIT_INCONSISTENT


def _default_seed():
    return int(os.environ.get("IA_SEED", "0"))


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ianet",
        description="Qualitative temporal reasoning over Allen's interval algebra.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pc", help="close a network under path consistency")
    p.add_argument("network")
    p.add_argument("--comp", choices=("pairwise", "split"), default="split")
    p.add_argument("--skip", default="a,b,c",
                   help="comma-separated subset of a,b,c or 'none'")
    p.add_argument("--queue", choices=pathcon.QUEUE_POLICIES, default="fifo")
    p.add_argument("-o", "--out", help="write the closed network to a file")
    p.add_argument("--quiet", action="store_true")
    p.add_argument("--print", action="store_true",
                   help="with --quiet, print the closed network to stdout")
    p.set_defaults(func=cmd_pc)

    p = sub.add_parser("solve", help="find a consistent scenario")
    p.add_argument("network")
    p.add_argument("--decomp", choices=("si", "sa", "nb"), default="sa")
    p.add_argument("--var-order", default="weight,constr,card",
                   help="permutation like constr,weight,card, or 'none'")
    p.add_argument("--val-order", choices=("freq", "none"), default="freq")
    p.add_argument("--freq-table", help="frequency table file")
    p.add_argument("--timeout", type=float, default=1800.0)
    p.add_argument("--emit-scenario", help="write the scenario network to a file")
    p.add_argument("--emit-intervals", help="write the interval assignment to a file")
    p.add_argument("--quiet", action="store_true")
    p.add_argument("--print", action="store_true",
                   help="with --quiet, print the scenario to stdout")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("classify", help="membership and decompositions of a label")
    p.add_argument("label", help="comma-separated relation list, e.g. b,m,o")
    p.add_argument("--dump", help="dump the full catalog to a file")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("gen", help="generate a random instance")
    p.add_argument("model", choices=("b", "s"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", help="edge probability as a rational, e.g. 1/4 (model s)")
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--no-embed", action="store_true",
                   help="model s: skip embedding the witness solution")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="run an experiment suite")
    p.add_argument("--suite", required=True)
    p.add_argument("--out", required=True, help="CSV output file")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("calibrate", help="derive a value-ordering frequency table")
    p.add_argument("--model", choices=("b", "s"), default="s")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", help="edge probability as a rational (model s)")
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--decomp", choices=("si", "sa", "nb"), default="sa")
    p.add_argument("--timeout", type=float, default=1800.0)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("verify", help="check an interval assignment against a network")
    p.add_argument("network")
    p.add_argument("intervals")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; remap to the documented code.
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except (OSError, ValueError, network.ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

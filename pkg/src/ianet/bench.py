"""Instrumented experiment harness.

A suite spec is an INI-style text file (configparser syntax):

    [suite]
    timeout = 60

    [generator:sparse]
    model = s
    n = 30
    p = 1/4
    seed = 100
    reps = 100

    [config:sa-heur]
    command = solve
    decomp = sa
    var-order = weight,constr,card
    val-order = freq

    [config:pc-noskip]
    command = pc
    comp = split
    skip = none
    queue = fifo

Every configuration runs on every instance; instances are regenerated from
seed + repetition index so all configurations see identical inputs.  Records
stream to a CSV sink as they complete.
"""

import concurrent.futures
import configparser
import csv
import io
import statistics
import time
from dataclasses import dataclass, field, fields as dc_fields
from fractions import Fraction

from .algebra import BITS, N_RELS
from .generate import GeneratorConfig, generate
from .pathcon import PCConfig, path_consistency
from .search import SearchConfig, backtrack_solve, extract_scenario

CSV_COLUMNS = (
    "instance_id", "model", "n", "p_num", "p_den", "seed", "config", "verdict",
    "time_ms", "compositions", "skip_a", "skip_b", "skip_c", "enqueues",
    "backtracks", "nodes", "trail_peak",
)


@dataclass
class RunRecord:
    instance_id: str
    model: str
    n: int
    p_num: int
    p_den: int
    seed: int
    config: str
    verdict: str            # consistent | inconsistent | timeout
    time_ms: float
    compositions: int
    skip_a: int
    skip_b: int
    skip_c: int
    enqueues: int
    backtracks: int
    nodes: int
    trail_peak: int

    def row(self):
        return [getattr(self, col) for col in CSV_COLUMNS]


@dataclass
class SolverSpec:
    """One named configuration: either a pc run or a solve run."""
    name: str
    command: str                      # "pc" | "solve"
    pc: PCConfig = field(default_factory=PCConfig)
    decomp: str = "sa"
    var_order: tuple | None = ("weight", "constr", "card")
    val_order: str | None = "freq"


@dataclass
class SuiteSpec:
    generators: list                  # (name, GeneratorConfig base, reps)
    configs: list                     # SolverSpec
    timeout: float = 1800.0


def _parse_var_order(text):
    text = text.strip()
    if text in ("none", ""):
        return None
    alias = {"constr": "constr", "weight": "weight", "card": "card"}
    return tuple(alias[tok.strip()] for tok in text.split(","))


def _parse_skip(text):
    text = text.strip()
    return frozenset() if text == "none" else frozenset(text.replace(",", ""))


def parse_suite(text):
    parser = configparser.ConfigParser()
    parser.read_string(text)
    timeout = 1800.0
    generators = []
    configs = []
    for section in parser.sections():
        sec = parser[section]
        if section == "suite":
            timeout = float(sec.get("timeout", "1800"))
        elif section.startswith("generator:"):
            name = section.split(":", 1)[1]
            model = sec["model"].strip().lower()
            cfg = GeneratorConfig(
                model=model,
                n=int(sec["n"]),
                seed=int(sec.get("seed", "0")),
                p=Fraction(sec["p"]) if model == "s" else None,
                embed=sec.get("embed", "true").strip().lower() != "false",
            )
            generators.append((name, cfg, int(sec.get("reps", "1"))))
        elif section.startswith("config:"):
            name = section.split(":", 1)[1]
            command = sec.get("command", "solve").strip()
            pc = PCConfig(
                composition=sec.get("comp", "split").strip(),
                skip=_parse_skip(sec.get("skip", "a,b,c")),
                queue=sec.get("queue", "fifo").strip(),
            )
            configs.append(SolverSpec(
                name=name,
                command=command,
                pc=pc,
                decomp=sec.get("decomp", "sa").strip(),
                var_order=_parse_var_order(sec.get("var-order", "weight,constr,card")),
                val_order=None if sec.get("val-order", "freq").strip() == "none"
                else "freq",
            ))
        else:
            raise ValueError(f"unknown suite section {section!r}")
    if not generators or not configs:
        raise ValueError("suite needs at least one generator and one config")
    return SuiteSpec(generators=generators, configs=configs, timeout=timeout)


def instance_config(base, rep):
    """The generator config of repetition `rep`: seed offset by the index."""
    return GeneratorConfig(
        model=base.model, n=base.n, seed=base.seed + rep, p=base.p,
        intersect_fraction=base.intersect_fraction,
        disjoint_fraction=base.disjoint_fraction, embed=base.embed,
    )


def run_one(gen_cfg, instance_id, solver, timeout):
    """Regenerate the instance and run one configuration on it."""
    net = generate(gen_cfg)
    p = gen_cfg.p if gen_cfg.p is not None else Fraction(0)
    start = time.perf_counter()
    if solver.command == "pc":
        ok, stats = path_consistency(net, solver.pc)
        elapsed = (time.perf_counter() - start) * 1000.0
        return RunRecord(
            instance_id=instance_id, model=gen_cfg.model, n=gen_cfg.n,
            p_num=p.numerator, p_den=p.denominator, seed=gen_cfg.seed,
            config=solver.name, verdict="consistent" if ok else "inconsistent",
            time_ms=elapsed, compositions=stats.compositions,
            skip_a=stats.skipped_a, skip_b=stats.skipped_b,
            skip_c=stats.skipped_c, enqueues=stats.enqueues,
            backtracks=0, nodes=0, trail_peak=0,
        )
    cfg = SearchConfig(
        decomp=solver.decomp, var_order=solver.var_order,
        val_order=solver.val_order, timeout=timeout, pc=solver.pc,
    )
    result = backtrack_solve(net, cfg)
    elapsed = (time.perf_counter() - start) * 1000.0
    verdict = {"solved": "consistent", "inconsistent": "inconsistent",
               "timeout": "timeout"}[result.status]
    if verdict == "timeout":
        elapsed = max(elapsed, timeout * 1000.0)
    stats = result.stats
    return RunRecord(
        instance_id=instance_id, model=gen_cfg.model, n=gen_cfg.n,
        p_num=p.numerator, p_den=p.denominator, seed=gen_cfg.seed,
        config=solver.name, verdict=verdict, time_ms=elapsed,
        compositions=stats.pc.compositions, skip_a=stats.pc.skipped_a,
        skip_b=stats.pc.skipped_b, skip_c=stats.pc.skipped_c,
        enqueues=stats.pc.enqueues, backtracks=stats.backtracks,
        nodes=stats.nodes, trail_peak=stats.trail_peak,
    )


def _task(args):
    return run_one(*args)


def run_suite(spec, sink=None, jobs=1):
    """Execute every (instance, configuration) pair; returns all records.

    When a csv writer-compatible sink is given, the header and each record
    row are appended as results complete.
    """
    writer = None
    if sink is not None:
        writer = csv.writer(sink)
        writer.writerow(CSV_COLUMNS)
    tasks = []
    for gname, base, reps in spec.generators:
        for rep in range(reps):
            gen_cfg = instance_config(base, rep)
            instance_id = f"{gname}-{rep}"
            for solver in spec.configs:
                tasks.append((gen_cfg, instance_id, solver, spec.timeout))
    records = []
    if jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            for record in pool.map(_task, tasks):
                records.append(record)
                if writer:
                    writer.writerow(record.row())
    else:
        for task in tasks:
            record = run_one(*task)
            records.append(record)
            if writer:
                writer.writerow(record.row())
    return records


def read_records(text):
    reader = csv.DictReader(io.StringIO(text))
    records = []
    types = {f.name: f.type for f in dc_fields(RunRecord)}
    for row in reader:
        kwargs = {}
        for col in CSV_COLUMNS:
            kind = types[col]
            if kind in (int, "int"):
                kwargs[col] = int(row[col])
            elif kind in (float, "float"):
                kwargs[col] = float(row[col])
            else:
                kwargs[col] = row[col]
        records.append(RunRecord(**kwargs))
    return records


def percentile(sorted_values, q):
    """Linearly interpolated q-th percentile of pre-sorted values."""
    if not sorted_values:
        raise ValueError("empty input")
    if len(sorted_values) == 1:
        return sorted_values[0]
    idx = q / 100 * (len(sorted_values) - 1)
    lo = int(idx)
    hi = min(lo + 1, len(sorted_values) - 1)
    frac = idx - lo
    return sorted_values[lo] + (sorted_values[hi] - sorted_values[lo]) * frac


def _metric_summary(values):
    mean = statistics.fmean(values)
    std = statistics.pstdev(values)
    ordered = sorted(values)
    return {
        "mean": mean,
        "std": std,
        "cov": std / mean if mean else 0.0,
        "percentiles": [percentile(ordered, q) for q in range(0, 101, 10)],
    }


def summarize(records, timeout=None):
    """Per-configuration mean / std / CoV and 0,10,...,100 percentiles.

    Timeout records enter the time distribution pinned at the timeout value
    and are counted as censored.
    """
    if not records:
        raise ValueError("no records to summarize")
    by_config = {}
    for rec in records:
        by_config.setdefault(rec.config, []).append(rec)
    summary = {}
    for name, recs in sorted(by_config.items()):
        times = []
        for rec in recs:
            if rec.verdict == "timeout" and timeout is not None:
                times.append(timeout * 1000.0)
            else:
                times.append(rec.time_ms)
        summary[name] = {
            "count": len(recs),
            "censored": sum(1 for rec in recs if rec.verdict == "timeout"),
            "time_ms": _metric_summary(times),
            "nodes": _metric_summary([rec.nodes for rec in recs]),
        }
    return summary


def calibrate_frequencies(gen_base, solver, k, timeout=1800.0):
    """Derive a value-ordering frequency table from k freshly solved instances.

    Instances are solved with value ordering off; basic-relation occurrences
    are tallied over all edges of the extracted scenarios and scaled to
    integer scores summing to about 10000.  Timed-out instances are excluded
    (returned in the warnings list).
    """
    counts = [0] * N_RELS
    warnings = []
    for rep in range(k):
        gen_cfg = instance_config(gen_base, rep)
        net = generate(gen_cfg)
        cfg = SearchConfig(
            decomp=solver.decomp, var_order=solver.var_order, val_order=None,
            timeout=timeout, pc=solver.pc,
        )
        result = backtrack_solve(net, cfg)
        if not result.solved:
            warnings.append(f"instance {rep} (seed {gen_cfg.seed}): {result.status}")
            continue
        scenario = extract_scenario(result.network, cfg.decomp)
        for i, j in scenario.edges():
            counts[BITS[scenario.get(i, j)][0]] += 1
    total = sum(counts)
    if total == 0:
        raise ValueError("no instance solved; cannot calibrate")
    scores = tuple(round(c / total * 10000) for c in counts)
    return scores, warnings

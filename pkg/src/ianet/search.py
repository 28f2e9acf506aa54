"""Backtracking search for consistent scenarios.

The solver preprocesses with full path consistency, orders all edges i < j
once (static), and branches on decomposition blocks of each edge's current
label, forward checking each assignment with incremental path consistency.
Dead ends backtrack chronologically; undo is a trail of overwritten labels.
A found subnetwork is realized as concrete rational intervals by translating
labels to endpoint order constraints, merging forced-equal endpoints, and
assigning increasing values along a topological order.
"""

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from graphlib import TopologicalSorter

from .algebra import (
    BITS, FULL, basic_relation, cardinality, format_label, inverse, weight,
)
from .network import Network
from .pathcon import PCConfig, PCStats, incremental_path_consistency, path_consistency
from .tractable import catalog, endpoint_projection

# Default value-ordering scores per basic relation, in canonical bit order
# (b, bi, m, mi, o, oi, s, si, d, di, f, fi, eq); derived from solution
# frequencies on S(100, 1/4) instances, scaled by 10.
DEFAULT_FREQUENCIES = (1900, 1900, 20, 20, 220, 220, 14, 14, 240, 240, 15, 15, 53)

VAR_ORDER_KEYS = ("card", "constr", "weight")


@dataclass
class SearchConfig:
    decomp: str = "sa"                       # si | sa | nb
    var_order: tuple | None = ("weight", "constr", "card")
    val_order: str | None = "freq"           # "freq" | None
    frequencies: tuple = DEFAULT_FREQUENCIES
    timeout: float = 1800.0
    pc: PCConfig = field(default_factory=PCConfig)

    def __post_init__(self):
        if self.decomp not in ("si", "sa", "nb"):
            raise ValueError(f"unknown decomposition method {self.decomp!r}")
        if self.var_order is not None:
            self.var_order = tuple(self.var_order)
            if sorted(self.var_order) != sorted(VAR_ORDER_KEYS):
                raise ValueError(
                    f"var_order must be a permutation of {VAR_ORDER_KEYS}"
                )
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")


@dataclass
class SearchStats:
    nodes: int = 0
    backtracks: int = 0
    trail_peak: int = 0
    preprocessing_consistent: bool | None = None
    pc: PCStats = field(default_factory=PCStats)


@dataclass
class SearchResult:
    status: str                  # "solved" | "inconsistent" | "timeout"
    network: Network | None      # the solved subnetwork when status == "solved"
    stats: SearchStats

    @property
    def solved(self):
        return self.status == "solved"


def _block_score(block, frequencies):
    return sum(frequencies[r] for r in BITS[block])


def order_values(blocks, cfg):
    """Blocks sorted most-promising-first by summed frequency score."""
    if cfg.val_order != "freq":
        return list(blocks)
    freqs = cfg.frequencies
    return sorted(blocks, key=lambda b: (-_block_score(b, freqs), b))


def _edge_keys(net, edge, cfg, cat):
    i, j = edge
    label = net.get(i, j)
    n, labels = net.n, net.labels
    constr = 0
    for k in range(n):
        if k != i and k != j:
            constr += weight(labels[k * n + i]) + weight(labels[j * n + k])
    keys = {
        "card": cat.block_count(label, cfg.decomp),
        "weight": weight(label),
        "constr": constr,
    }
    return keys


def order_variables(net, cfg):
    """Static instantiation order over all edges i < j, most constrained first.

    Keys are the configured permutation (ascending, later keys break ties);
    cardinality counts decomposition blocks, not label elements.  Final
    tie-break is lexicographic.
    """
    edges = list(net.edges())
    if cfg.var_order is None:
        return edges
    cat = catalog()
    perm = cfg.var_order

    def sort_key(edge):
        keys = _edge_keys(net, edge, cfg, cat)
        return tuple(keys[k] for k in perm) + edge

    return sorted(edges, key=sort_key)


def search_space_size(net, method):
    """Product over all edges of the block count of the edge's decomposition."""
    cat = catalog()
    return math.prod(cat.block_count(net.get(i, j), method) for i, j in net.edges())


def _undo(labels, trail, mark):
    while len(trail) > mark:
        idx, old = trail.pop()
        labels[idx] = old


def backtrack_solve(net, cfg=None):
    """Find a consistent tractable-class subnetwork, or report inconsistency.

    The input network is not modified.  For decomp="si" the result is already
    a scenario; for "sa"/"nb" every edge label is a member of the class.
    """
    cfg = cfg or SearchConfig()
    stats = SearchStats()
    work = net.copy()

    ok, _ = path_consistency(work, cfg.pc, stats=stats.pc)
    stats.preprocessing_consistent = ok
    if not ok:
        return SearchResult("inconsistent", None, stats)

    cat = catalog()
    order = order_variables(work, cfg)
    n, labels = work.n, work.labels
    deadline = time.monotonic() + cfg.timeout
    trail = []
    # Each frame: [position in order, value blocks, next value index, trail mark].
    frames = []
    pos = 0
    m = len(order)

    while True:
        # Descend: commit single-block edges, open a frame at the next branch.
        while pos < m:
            i, j = order[pos]
            label = labels[i * n + j]
            blocks = cat.decompose(label, cfg.decomp)
            if len(blocks) == 1:
                pos += 1
                continue
            frames.append([pos, order_values(blocks, cfg), 0, len(trail)])
            break
        else:
            return SearchResult("solved", work, stats)

        # Try values at the deepest frame, backtracking as frames exhaust.
        while True:
            if time.monotonic() > deadline:
                return SearchResult("timeout", None, stats)
            if not frames:
                return SearchResult("inconsistent", None, stats)
            frame = frames[-1]
            fpos, values, vi, mark = frame
            _undo(labels, trail, mark)
            if vi >= len(values):
                frames.pop()
                stats.backtracks += 1
                continue
            frame[2] = vi + 1
            stats.nodes += 1
            i, j = order[fpos]
            block = values[vi]
            trail.append((i * n + j, labels[i * n + j]))
            trail.append((j * n + i, labels[j * n + i]))
            labels[i * n + j] = block
            labels[j * n + i] = inverse(block)
            ok, _ = incremental_path_consistency(
                work, (i, j), cfg.pc, stats=stats.pc, trail=trail
            )
            if len(trail) > stats.trail_peak:
                stats.trail_peak = len(trail)
            if ok:
                pos = fpos + 1
                break


class RealizationError(RuntimeError):
    """A strict or distinctness constraint collapsed into an equality class."""


def _tarjan_scc(n_nodes, succ):
    """Strongly connected components, iterative Tarjan; comp ids per node."""
    index = [0] * n_nodes
    low = [0] * n_nodes
    on_stack = [False] * n_nodes
    comp = [-1] * n_nodes
    stack = []
    counter = 1
    n_comps = 0
    for root in range(n_nodes):
        if index[root]:
            continue
        work = [(root, 0)]
        while work:
            node, ei = work[-1]
            if ei == 0:
                index[node] = low[node] = counter
                counter += 1
                stack.append(node)
                on_stack[node] = True
            advanced = False
            edges = succ[node]
            while ei < len(edges):
                nxt = edges[ei]
                ei += 1
                if not index[nxt]:
                    work[-1] = (node, ei)
                    work.append((nxt, 0))
                    advanced = True
                    break
                if on_stack[nxt]:
                    low[node] = min(low[node], index[nxt])
            if advanced:
                continue
            work.pop()
            if low[node] == index[node]:
                while True:
                    top = stack.pop()
                    on_stack[top] = False
                    comp[top] = n_comps
                    if top == node:
                        break
                n_comps += 1
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
    return comp, n_comps


def realize(net):
    """Concrete rational intervals satisfying every label of the network.

    Expects a path-consistent network whose labels are singletons or
    pointizable; the label-to-endpoint translation is exact for those.
    Endpoints forced equal are merged (SCC over the <=/= arcs); components
    are topologically ordered and assigned strictly increasing rationals.
    """
    n = net.n
    n_pts = 2 * n                       # point 2i = start of i, 2i+1 = end of i
    succ = [[] for _ in range(n_pts)]
    strict = []                         # point pairs that must differ

    def add(p, q, signs):
        if signs == 7:
            return
        if signs == 0:
            raise RealizationError("empty endpoint projection")
        if signs & 1 and not signs & 4:          # {<} or {<,=}
            succ[p].append(q)
            if not signs & 2:
                strict.append((p, q))
        elif signs & 4 and not signs & 1:        # {>} or {=,>}
            succ[q].append(p)
            if not signs & 2:
                strict.append((p, q))
        elif signs == 2:                         # {=}
            succ[p].append(q)
            succ[q].append(p)
        else:                                    # {<,>}
            strict.append((p, q))

    for i in range(n):
        succ[2 * i].append(2 * i + 1)
        strict.append((2 * i, 2 * i + 1))
    for i, j in net.edges():
        proj = endpoint_projection(net.get(i, j))
        pts = (2 * i, 2 * i + 1, 2 * j, 2 * j + 1)
        add(pts[0], pts[2], proj[0])
        add(pts[0], pts[3], proj[1])
        add(pts[1], pts[2], proj[2])
        add(pts[1], pts[3], proj[3])

    comp, n_comps = _tarjan_scc(n_pts, succ)
    for p, q in strict:
        if comp[p] == comp[q]:
            raise RealizationError(
                f"points {p} and {q} forced equal but must differ"
            )

    dag = {c: set() for c in range(n_comps)}
    for p in range(n_pts):
        for q in succ[p]:
            if comp[p] != comp[q]:
                dag[comp[q]].add(comp[p])        # predecessors for TopologicalSorter
    value = {}
    for rank, c in enumerate(TopologicalSorter(dag).static_order()):
        value[c] = Fraction(rank + 1)
    return [(value[comp[2 * i]], value[comp[2 * i + 1]]) for i in range(n)]


def extract_scenario(solved, method):
    """Read a singleton scenario back from a solved subnetwork via realization.

    NB labels have no exact conjunctive endpoint translation, so an NB result
    is first refined to an SA subnetwork by a (cheap) SA-method search.
    """
    if method == "nb":
        refined = backtrack_solve(solved, SearchConfig(decomp="sa"))
        if not refined.solved:
            raise RealizationError("NB subnetwork failed SA refinement")
        solved = refined.network
    intervals = realize(solved)
    scenario = Network(solved.n, names=solved.names)
    for i, j in solved.edges():
        a, b = intervals[i], intervals[j]
        scenario.set(i, j, basic_relation(a[0], a[1], b[0], b[1]))
    return scenario


def verify_assignment(net, intervals):
    """True iff every edge's induced basic relation is a member of its label."""
    for i, j in net.edges():
        a, b = intervals[i], intervals[j]
        if not basic_relation(a[0], a[1], b[0], b[1]) & net.get(i, j):
            return False
    return True


def format_intervals(intervals):
    """One line per vertex: '<index> <start> <end>' with rationals as p/q."""
    def rat(x):
        x = Fraction(x)
        return f"{x.numerator}/{x.denominator}"

    return "\n".join(
        f"{i} {rat(lo)} {rat(hi)}" for i, (lo, hi) in enumerate(intervals)
    ) + "\n"


def parse_intervals(text):
    """Inverse of format_intervals."""
    entries = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 3:
            raise ValueError(f"line {lineno}: expected '<index> <start> <end>'")
        idx = int(fields[0])
        entries[idx] = (Fraction(fields[1]), Fraction(fields[2]))
    return [entries[i] for i in range(len(entries))]

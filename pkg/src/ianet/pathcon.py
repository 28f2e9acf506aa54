"""Path consistency for IA networks.

The worklist algorithm: pop an edge (i, j), and for every other vertex k
tighten C_ik by C_ij . C_jk and C_kj by C_ki . C_ij, mirroring inverses and
re-enqueueing changed edges.  Three composition-skipping techniques and five
queue ordering policies are configurable; every combination produces the
same closure.

Skipping techniques:
  a - edges labeled I are not seeded into the initial queue;
  b - if (b in x and bi in y) or (bi in x and b in y) or (d in x and di in y)
      then x . y = I and the whole tightening step is skipped;
  c - a composition is aborted as soon as the accumulated union already
      covers the target label (the intersection cannot change it).
"""

import heapq
from collections import deque
from dataclasses import dataclass

from .algebra import (
    B, BI, D, DI, FULL, LOW_MASK, LOW_WIDTH, BITS, COMP_ROW,
    TABLES, cardinality, inverse, weight,
)

QUEUE_POLICIES = ("fifo", "lifo", "weight", "card", "constr")


@dataclass
class PCConfig:
    composition: str = "split"              # "pairwise" | "split"
    skip: frozenset = frozenset("abc")      # subset of {a, b, c}
    queue: str = "fifo"

    def __post_init__(self):
        if self.composition not in ("pairwise", "split"):
            raise ValueError(f"unknown composition method {self.composition!r}")
        self.skip = frozenset(self.skip)
        if not self.skip <= frozenset("abc"):
            raise ValueError(f"unknown skip techniques {set(self.skip) - set('abc')}")
        if self.queue not in QUEUE_POLICIES:
            raise ValueError(f"unknown queue policy {self.queue!r}")


@dataclass
class PCStats:
    compositions: int = 0
    skipped_a: int = 0
    skipped_b: int = 0
    skipped_c: int = 0
    enqueues: int = 0
    queue_peak: int = 0
    iterations: int = 0
    updates: int = 0


def edge_heuristic(net, edge, kind):
    """Heuristic value of an edge: weight, cardinality, or constrainedness."""
    i, j = edge
    if kind == "weight":
        return weight(net.get(i, j))
    if kind == "card":
        return cardinality(net.get(i, j))
    if kind == "constr":
        n, labels = net.n, net.labels
        total = 0
        for k in range(n):
            if k != i and k != j:
                total += weight(labels[k * n + i]) + weight(labels[j * n + k])
        return total
    raise ValueError(f"unknown heuristic kind {kind!r}")


class EdgeQueue:
    """Worklist of normalized edges (i < j) with a pluggable pop order.

    No edge appears twice.  Ordered policies pop the minimum heuristic value
    (ties by (i, j)); re-inserting an edge already queued repositions it
    under its freshly computed value.
    """

    def __init__(self, policy, key=None):
        self.policy = policy
        self.key = key
        self.inq = set()
        if policy in ("fifo", "lifo"):
            self.entries = deque()
        else:
            self.heap = []
            self.curkey = {}

    def __len__(self):
        return len(self.inq)

    def push(self, edge):
        if self.policy in ("fifo", "lifo"):
            if edge in self.inq:
                return False
            self.inq.add(edge)
            self.entries.append(edge)
            return True
        k = self.key(edge)
        if edge in self.inq:
            if self.curkey[edge] != k:
                self.curkey[edge] = k
                heapq.heappush(self.heap, (k, edge))
            return False
        self.inq.add(edge)
        self.curkey[edge] = k
        heapq.heappush(self.heap, (k, edge))
        return True

    def pop(self):
        if self.policy == "fifo":
            edge = self.entries.popleft()
        elif self.policy == "lifo":
            edge = self.entries.pop()
        else:
            while True:
                k, edge = heapq.heappop(self.heap)
                if edge in self.inq and self.curkey[edge] == k:
                    del self.curkey[edge]
                    break
        self.inq.discard(edge)
        return edge


def _make_queue(net, cfg):
    if cfg.queue in ("fifo", "lifo"):
        return EdgeQueue(cfg.queue)
    kind = {"weight": "weight", "card": "card", "constr": "constr"}[cfg.queue]
    return EdgeQueue(cfg.queue, key=lambda e: edge_heuristic(net, e, kind))


def _propagate(net, seeds, cfg, stats, trail=None):
    """Run the worklist to quiescence.  Returns False on an empty label.

    Writes go through the network's flat label list; when a trail list is
    given every overwritten (index, old_label) pair is recorded so a caller
    can undo.  The composition step is inlined here because this loop
    dominates both closure and search time.
    """
    n = net.n
    labels = net.labels
    split = cfg.composition == "split"
    skip_b = "b" in cfg.skip
    skip_c = "c" in cfg.skip
    tll, tlh, thl, thh = TABLES.tll, TABLES.tlh, TABLES.thl, TABLES.thh
    rows = COMP_ROW

    queue = _make_queue(net, cfg)
    for edge in seeds:
        if queue.push(edge):
            stats.enqueues += 1
    stats.queue_peak = max(stats.queue_peak, len(queue))

    # Local counters; flushed into stats on every exit path.
    comps = skb = skc = upd = enq = iters = 0
    # Composed-pair memo for the skip-c-free pairwise path; counts are
    # unaffected, a hit is still one composition performed.
    pair_cache = {}
    peak = stats.queue_peak
    low_mask = LOW_MASK
    low_width = LOW_WIDTH

    try:
        while queue:
            i, j = queue.pop()
            iters += 1
            cij = labels[i * n + j]
            cij_b = cij & B
            cij_bi = cij & BI
            cij_d = cij & D
            cij_di = cij & DI
            row_i = i * n
            row_j = j * n
            for k in range(n):
                if k == i or k == j:
                    continue
                # Step 5: C_ik <- C_ik n C_ij . C_jk
                cjk = labels[row_j + k]
                if skip_b and (
                    (cij_b and cjk & BI)
                    or (cij_bi and cjk & B)
                    or (cij_d and cjk & DI)
                ):
                    skb += 1
                else:
                    cik = labels[row_i + k]
                    if split:
                        xl = cij & low_mask
                        xh = cij >> low_width
                        yl = cjk & low_mask
                        yh = cjk >> low_width
                        acc = tll[xl][yl]
                        if skip_c and cik & ~acc == 0:
                            skc += 1
                            t = cik
                        else:
                            acc |= tlh[xl][yh]
                            if skip_c and cik & ~acc == 0:
                                skc += 1
                                t = cik
                            else:
                                acc |= thl[xh][yl]
                                if skip_c and cik & ~acc == 0:
                                    skc += 1
                                    t = cik
                                else:
                                    comps += 1
                                    t = cik & (acc | thh[xh][yh])
                    elif skip_c:
                        # Allen's method, one precomputed row union per set
                        # bit of the left operand.
                        acc = 0
                        done = False
                        for r1 in BITS[cij]:
                            acc |= rows[r1][cjk]
                            if cik & ~acc == 0:
                                skc += 1
                                t = cik
                                done = True
                                break
                        if not done:
                            comps += 1
                            t = cik & acc
                    else:
                        key = cij << 13 | cjk
                        acc = pair_cache.get(key)
                        if acc is None:
                            acc = 0
                            for r1 in BITS[cij]:
                                acc |= rows[r1][cjk]
                            pair_cache[key] = acc
                        comps += 1
                        t = cik & acc
                    if t != cik:
                        if t == 0:
                            return False
                        upd += 1
                        if trail is not None:
                            trail.append((row_i + k, cik))
                            trail.append((k * n + i, labels[k * n + i]))
                        labels[row_i + k] = t
                        labels[k * n + i] = inverse(t)
                        if queue.push((i, k) if i < k else (k, i)):
                            enq += 1
                # Step 10: C_kj <- C_kj n C_ki . C_ij
                cki = labels[k * n + i]
                if skip_b and (
                    (cki & B and cij_bi)
                    or (cki & BI and cij_b)
                    or (cki & D and cij_di)
                ):
                    skb += 1
                else:
                    ckj = labels[k * n + j]
                    if split:
                        xl = cki & low_mask
                        xh = cki >> low_width
                        yl = cij & low_mask
                        yh = cij >> low_width
                        acc = tll[xl][yl]
                        if skip_c and ckj & ~acc == 0:
                            skc += 1
                            t = ckj
                        else:
                            acc |= tlh[xl][yh]
                            if skip_c and ckj & ~acc == 0:
                                skc += 1
                                t = ckj
                            else:
                                acc |= thl[xh][yl]
                                if skip_c and ckj & ~acc == 0:
                                    skc += 1
                                    t = ckj
                                else:
                                    comps += 1
                                    t = ckj & (acc | thh[xh][yh])
                    elif skip_c:
                        acc = 0
                        done = False
                        for r1 in BITS[cki]:
                            acc |= rows[r1][cij]
                            if ckj & ~acc == 0:
                                skc += 1
                                t = ckj
                                done = True
                                break
                        if not done:
                            comps += 1
                            t = ckj & acc
                    else:
                        key = cki << 13 | cij
                        acc = pair_cache.get(key)
                        if acc is None:
                            acc = 0
                            for r1 in BITS[cki]:
                                acc |= rows[r1][cij]
                            pair_cache[key] = acc
                        comps += 1
                        t = ckj & acc
                    if t != ckj:
                        if t == 0:
                            return False
                        upd += 1
                        if trail is not None:
                            trail.append((k * n + j, ckj))
                            trail.append((row_j + k, labels[row_j + k]))
                        labels[k * n + j] = t
                        labels[row_j + k] = inverse(t)
                        if queue.push((k, j) if k < j else (j, k)):
                            enq += 1
            if len(queue) > peak:
                peak = len(queue)
    finally:
        stats.compositions += comps
        stats.skipped_b += skb
        stats.skipped_c += skc
        stats.updates += upd
        stats.enqueues += enq
        stats.iterations += iters
        stats.queue_peak = peak
    return True


def path_consistency(net, cfg=None, stats=None, trail=None):
    """Close the network under path consistency, in place.

    Returns (consistent, stats).  On inconsistency the network holds the
    partially tightened labels (the empty label itself is never written).
    """
    cfg = cfg or PCConfig()
    stats = stats if stats is not None else PCStats()
    if "a" in cfg.skip:
        seeds = []
        for edge in net.edges():
            if net.get(*edge) != FULL:
                seeds.append(edge)
            else:
                stats.skipped_a += 1
    else:
        seeds = list(net.edges())
    ok = _propagate(net, seeds, cfg, stats, trail)
    return ok, stats


def incremental_path_consistency(net, changed, cfg=None, stats=None, trail=None):
    """Re-close a previously path-consistent network after one edge tightened."""
    cfg = cfg or PCConfig()
    stats = stats if stats is not None else PCStats()
    i, j = changed
    seed = (i, j) if i < j else (j, i)
    ok = _propagate(net, [seed], cfg, stats, trail)
    return ok, stats

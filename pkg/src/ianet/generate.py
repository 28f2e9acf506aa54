"""Random IA network generators B(n) and S(n, p).

Both models start from n random integer intervals (a hidden witness
solution).  B(n) keeps a random subset of the intersects/disjoint pairs so
that roughly 6% of all pairs stay intersects and 17% stay disjoint.  S(n, p)
puts a uniformly random nonempty label on each edge with probability p, then
unions the witness relation into every edge so the instance stays consistent.

Determinism is part of the interface: the RNG is SplitMix64 (Steele, Lea &
Flood's 64-bit mixer), draws are reduced by rejection sampling, and the draw
order is documented per generator, so equal seeds give byte-identical
networks on any platform.
"""

from dataclasses import dataclass
from fractions import Fraction

from .algebra import FULL, N_LABELS, basic_relation
from .network import DISJOINT, INTERSECTS, Network

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """SplitMix64: state += 0x9e3779b97f4a7c15; output via two xor-shift mixes."""

    def __init__(self, seed):
        self.state = seed & _MASK64

    def next_u64(self):
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, bound):
        """Uniform integer in [0, bound), unbiased via rejection."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = _MASK64 + 1 - (_MASK64 + 1) % bound
        while True:
            x = self.next_u64()
            if x < limit:
                return x % bound


@dataclass
class GeneratorConfig:
    model: str                   # "b" | "s"
    n: int
    seed: int
    p: Fraction | None = None    # S only
    intersect_fraction: float = 0.06
    disjoint_fraction: float = 0.17
    embed: bool = True           # S only: union the witness into the labels

    def __post_init__(self):
        if self.model not in ("b", "s"):
            raise ValueError(f"unknown model {self.model!r}")
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if self.model == "s":
            if self.p is None:
                raise ValueError("model S requires p")
            self.p = Fraction(self.p)
            if not 0 <= self.p <= 1:
                raise ValueError("p must be in [0, 1]")
        if not (0 <= self.intersect_fraction <= 1
                and 0 <= self.disjoint_fraction <= 1
                and self.intersect_fraction + self.disjoint_fraction <= 1):
            raise ValueError("fractions must lie in [0, 1] with sum <= 1")


def random_intervals(n, rng):
    """n integer intervals with start < end, endpoints uniform on [0, 4n].

    Per interval, two endpoints are drawn (start first); equal draws are
    redrawn as a pair, then the pair is sorted.
    """
    intervals = []
    span = 4 * n + 1
    for _ in range(n):
        while True:
            a = rng.below(span)
            b = rng.below(span)
            if a != b:
                break
        intervals.append((a, b) if a < b else (b, a))
    return intervals


def _sample(items, k, rng):
    """k distinct items by partial Fisher-Yates; consumes k draws."""
    pool = list(items)
    for t in range(k):
        pick = t + rng.below(len(pool) - t)
        pool[t], pool[pick] = pool[pick], pool[t]
    return pool[:k]


def gen_b(cfg):
    """Model B(n): biology-like sparse intersects/disjoint network.

    Draw order: the n intervals, then the retained intersects pairs, then
    the retained disjoint pairs.
    """
    rng = SplitMix64(cfg.seed)
    intervals = random_intervals(cfg.n, rng)
    intersect_pairs = []
    disjoint_pairs = []
    for i in range(cfg.n):
        for j in range(i + 1, cfg.n):
            a, b = intervals[i], intervals[j]
            rel = basic_relation(a[0], a[1], b[0], b[1])
            (disjoint_pairs if rel & DISJOINT else intersect_pairs).append((i, j))
    total = cfg.n * (cfg.n - 1) // 2
    want_i = round(cfg.intersect_fraction * total)
    want_d = round(cfg.disjoint_fraction * total)
    if want_i > len(intersect_pairs):
        raise ValueError(
            f"need {want_i} intersects pairs, only {len(intersect_pairs)} available"
        )
    if want_d > len(disjoint_pairs):
        raise ValueError(
            f"need {want_d} disjoint pairs, only {len(disjoint_pairs)} available"
        )
    net = Network(cfg.n)
    for i, j in _sample(intersect_pairs, want_i, rng):
        net.set(i, j, INTERSECTS)
    for i, j in _sample(disjoint_pairs, want_d, rng):
        net.set(i, j, DISJOINT)
    return net


def gen_s(cfg):
    """Model S(n, p): density-controlled networks with an embedded witness.

    Draw order, edges ascending by (i, j): one presence draw below(denom)
    per edge, one label draw for each present edge; then the n intervals.
    """
    rng = SplitMix64(cfg.seed)
    num, den = cfg.p.numerator, cfg.p.denominator
    net = Network(cfg.n)
    for i in range(cfg.n):
        for j in range(i + 1, cfg.n):
            if rng.below(den) < num:
                net.set(i, j, 1 + rng.below(N_LABELS - 1))
    if cfg.embed:
        intervals = random_intervals(cfg.n, rng)
        for i, j in net.edges():
            a, b = intervals[i], intervals[j]
            witness = basic_relation(a[0], a[1], b[0], b[1])
            label = net.get(i, j)
            if not label & witness:
                net.set(i, j, label | witness)
    return net


def generate(cfg):
    return gen_b(cfg) if cfg.model == "b" else gen_s(cfg)

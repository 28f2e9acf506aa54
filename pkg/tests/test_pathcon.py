"""Path consistency tests, checked against a naive fixpoint oracle."""

import itertools
from fractions import Fraction

import pytest

from ianet.algebra import B, BI, D, DI, EQ, FULL, M, O, compose_pairwise, inverse
from ianet.generate import GeneratorConfig, generate
from ianet.network import Network, parse_network
from ianet.pathcon import (
    EdgeQueue,
    PCConfig,
    PCStats,
    QUEUE_POLICIES,
    edge_heuristic,
    incremental_path_consistency,
    path_consistency,
)


def naive_closure(net):
    """Iterate the triangle rule over all (i, k, j) until nothing changes.

    Queue-free and skip-free, so it is independent of everything the
    worklist implementation does.  Returns False if a label empties.
    """
    n = net.n
    changed = True
    while changed:
        changed = False
        for i, k, j in itertools.product(range(n), repeat=3):
            if i == k or k == j or i == j:
                continue
            t = net.get(i, j) & compose_pairwise(net.get(i, k), net.get(k, j))
            if t != net.get(i, j):
                if t == 0:
                    return False
                net.set(i, j, t)
                changed = True
    return True


def instance(seed, n=12, model="s", p=Fraction(1, 3)):
    return generate(GeneratorConfig(model=model, n=n, seed=seed, p=p))


class TestClosure:
    @pytest.mark.parametrize("seed", range(8))
    def test_matches_naive_fixpoint(self, seed):
        net = instance(seed)
        oracle = net.copy()
        oracle_ok = naive_closure(oracle)
        ok, _ = path_consistency(net)
        assert ok == oracle_ok
        if ok:
            assert net.labels == oracle.labels

    def test_idempotent(self):
        net = instance(3)
        ok, _ = path_consistency(net)
        assert ok
        before = list(net.labels)
        ok, stats = path_consistency(net)
        assert ok
        assert net.labels == before
        assert stats.updates == 0

    def test_inconsistent_network_detected(self):
        # 0 < 1 < 2 but 0 after 2: no interval order satisfies this
        net = parse_network("n 3\n0 1 b\n1 2 b\n0 2 bi\n")
        ok, _ = path_consistency(net)
        assert not ok
        # the empty label is never written into the network
        assert 0 not in net.labels

    def test_single_vertex(self):
        net = Network(1)
        ok, stats = path_consistency(net)
        assert ok
        assert stats.compositions == 0

    def test_tightens_transitive_meets(self):
        # x meets y, y during z forces x before-or-overlapping z
        net = parse_network("n 3\n0 1 m\n1 2 di\n")
        ok, _ = path_consistency(net)
        assert ok
        assert net.get(0, 2) == B


class TestConfluence:
    def test_all_configs_same_closure(self):
        net0 = instance(11, n=18)
        ref = None
        for comp in ("pairwise", "split"):
            for skip in ("", "a", "b", "c", "ab", "ac", "bc", "abc"):
                for queue in QUEUE_POLICIES:
                    net = net0.copy()
                    cfg = PCConfig(comp, frozenset(skip), queue)
                    ok, _ = path_consistency(net, cfg)
                    state = (ok, tuple(net.labels))
                    if ref is None:
                        ref = state
                    else:
                        assert state == ref, (comp, skip, queue)

    def test_same_verdict_on_inconsistent(self):
        net0 = instance(5, n=14, p=Fraction(1, 2))
        verdicts = set()
        for comp in ("pairwise", "split"):
            for queue in QUEUE_POLICIES:
                ok, _ = path_consistency(net0.copy(), PCConfig(comp, frozenset("abc"), queue))
                verdicts.add(ok)
        assert len(verdicts) == 1


class TestSkipping:
    def test_skip_a_counts_universal_edges(self):
        net = parse_network("n 4\n0 1 b\n")
        _, stats = path_consistency(net.copy(), PCConfig(skip=frozenset("a")))
        assert stats.skipped_a == 5  # 6 edges, one constrained
        _, stats0 = path_consistency(net.copy(), PCConfig(skip=frozenset()))
        assert stats0.skipped_a == 0
        assert stats0.enqueues >= 6

    def test_skip_b_condition_is_exact(self):
        # technique (b) fires exactly when the composition is I
        for x, y in [(B, BI), (BI, B), (D, DI), (B | M, BI)]:
            assert compose_pairwise(x, y) == FULL

    def test_skips_never_increase_compositions(self):
        for seed in range(5):
            net0 = instance(seed, n=20)
            _, plain = path_consistency(net0.copy(), PCConfig(skip=frozenset()))
            _, skipped = path_consistency(net0.copy(), PCConfig(skip=frozenset("abc")))
            assert skipped.compositions <= plain.compositions
            assert skipped.skipped_b + skipped.skipped_c > 0

    def test_stats_accumulate_across_calls(self):
        stats = PCStats()
        net = instance(1)
        path_consistency(net.copy(), stats=stats)
        first = stats.compositions
        path_consistency(net.copy(), stats=stats)
        assert stats.compositions == 2 * first


class TestIncremental:
    @pytest.mark.parametrize("seed", range(5))
    def test_equals_full_reclosure(self, seed):
        net = instance(seed, n=15)
        ok, _ = path_consistency(net)
        if not ok:
            pytest.skip("instance inconsistent before tightening")
        # tighten the first edge with more than one relation
        edge = next(e for e in net.edges() if net.get(*e).bit_count() > 1)
        label = net.get(*edge)
        sub = label & -label  # lowest set bit
        net.set(*edge, sub)
        scratch = net.copy()
        ok_full, _ = path_consistency(scratch)
        ok_inc, _ = incremental_path_consistency(net, edge)
        assert ok_inc == ok_full
        if ok_inc:
            assert net.labels == scratch.labels

    def test_trail_undo_restores_network(self):
        net = instance(2, n=15)
        ok, _ = path_consistency(net)
        assert ok
        before = list(net.labels)
        edge = next(e for e in net.edges() if net.get(*e).bit_count() > 1)
        old = net.get(*edge)
        trail = [(edge[0] * net.n + edge[1], old), (edge[1] * net.n + edge[0], inverse(old))]
        net.set(*edge, old & -old)
        incremental_path_consistency(net, edge, trail=trail)
        for idx, lab in reversed(trail):
            net.labels[idx] = lab
        assert net.labels == before

    def test_detects_introduced_inconsistency(self):
        net = parse_network("n 3\n0 1 b\n1 2 b\n")
        ok, _ = path_consistency(net)
        assert ok and net.get(0, 2) == B
        net.set(0, 1, B)  # keep consistent state, then force a contradiction
        net.labels[0 * 3 + 2] = BI
        net.labels[2 * 3 + 0] = B
        ok, _ = incremental_path_consistency(net, (0, 2))
        assert not ok


class TestQueues:
    def test_heuristic_values(self):
        net = parse_network("n 3\n0 1 eq\n0 2 b,m\n")
        assert edge_heuristic(net, (0, 1), "card") == 1
        assert edge_heuristic(net, (0, 1), "weight") == 1
        assert edge_heuristic(net, (0, 2), "card") == 2
        assert edge_heuristic(net, (0, 2), "weight") == 5  # b=3, m=2
        # constrainedness of (0, 1): weight(C_20) + weight(C_12), where
        # C_20 = {bi,mi} weighs 5 and the universal C_12 weighs 34
        assert edge_heuristic(net, (0, 1), "constr") == 5 + 34
        with pytest.raises(ValueError):
            edge_heuristic(net, (0, 1), "size")

    def test_fifo_order(self):
        q = EdgeQueue("fifo")
        for e in [(0, 1), (0, 2), (0, 1)]:
            q.push(e)
        assert len(q) == 2
        assert q.pop() == (0, 1)
        assert q.pop() == (0, 2)

    def test_lifo_order(self):
        q = EdgeQueue("lifo")
        q.push((0, 1))
        q.push((0, 2))
        assert q.pop() == (0, 2)

    def test_ordered_pop_and_reposition(self):
        vals = {(0, 1): 5, (0, 2): 3, (1, 2): 4}
        q = EdgeQueue("weight", key=vals.get)
        for e in vals:
            q.push(e)
        vals[(0, 1)] = 1
        q.push((0, 1))  # repositions under the new key
        assert len(q) == 3
        assert [q.pop() for _ in range(3)] == [(0, 1), (0, 2), (1, 2)]

    def test_ordered_ties_break_by_edge(self):
        q = EdgeQueue("card", key=lambda e: 7)
        q.push((2, 3))
        q.push((0, 9))
        q.push((1, 2))
        assert q.pop() == (0, 9)
        assert q.pop() == (1, 2)


class TestConfigValidation:
    def test_rejects_unknown_values(self):
        with pytest.raises(ValueError):
            PCConfig(composition="table")
        with pytest.raises(ValueError):
            PCConfig(skip="abx")
        with pytest.raises(ValueError):
            PCConfig(queue="random")

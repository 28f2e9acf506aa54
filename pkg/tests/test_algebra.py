import random
from itertools import product

import pytest

from ianet import algebra as A


def brute_force_composition(r1, r2):
    """Endpoint-order enumeration oracle, independent of the build path.

    Enumerates weak orderings of six endpoints as permutations with ties,
    via rank vectors, like the table builder but written against the
    endpoint semantics directly.
    """
    result = 0
    for ranks in product(range(6), repeat=6):
        a0, a1, b0, b1, c0, c1 = ranks
        if not (a0 < a1 and b0 < b1 and c0 < c1):
            continue
        if A.basic_relation(a0, a1, b0, b1) != r1:
            continue
        if A.basic_relation(b0, b1, c0, c1) != r2:
            continue
        result |= A.basic_relation(a0, a1, c0, c1)
    return result


class TestBasicRelations:
    def test_thirteen_distinct(self):
        assert len(A.REL_NAMES) == 13
        assert len({A.NAME_TO_BIT[n] for n in A.REL_NAMES}) == 13

    def test_endpoint_semantics(self):
        # b: A entirely before B; eq: both endpoints equal.
        assert A.basic_relation(0, 1, 2, 3) == A.B
        assert A.basic_relation(2, 3, 0, 1) == A.BI
        assert A.basic_relation(0, 2, 2, 4) == A.M
        assert A.basic_relation(0, 3, 1, 2) == A.DI
        assert A.basic_relation(0, 5, 0, 5) == A.EQ
        assert A.basic_relation(1, 3, 1, 5) == A.S
        assert A.basic_relation(2, 5, 0, 5) == A.F

    def test_rejects_degenerate_interval(self):
        with pytest.raises(ValueError):
            A.basic_relation(1, 1, 0, 2)


class TestInverse:
    def test_paper_examples(self):
        assert A.inverse(A.B) == A.BI
        assert A.inverse(A.FULL) == A.FULL
        assert A.inverse(A.parse_label("m,o,s")) == A.parse_label("mi,oi,si")

    def test_involution_all_labels(self):
        assert all(A.inverse(A.inverse(x)) == x for x in range(A.N_LABELS))

    def test_matches_endpoint_swap(self):
        # inv(r) is the relation from B's point of view.
        for name in A.REL_NAMES:
            a0, a1, b0, b1 = A._CANON[name]
            assert A.inverse(A.NAME_TO_BIT[name]) == A.basic_relation(b0, b1, a0, a1)


class TestIntersect:
    def test_examples(self):
        assert A.intersect(A.parse_label("b,m,o"), A.parse_label("m,o,s")) == \
            A.parse_label("m,o")
        assert A.intersect(A.parse_label("d,f"), A.FULL) == A.parse_label("d,f")
        assert A.intersect(A.B, A.BI) == A.EMPTY


class TestComposition:
    def test_paper_deductions(self):
        assert A.compose(A.M, A.DI) == A.B
        assert A.compose(A.B, A.BI) == A.FULL
        assert A.compose(A.D, A.DI) == A.FULL

    def test_eq_is_identity(self):
        for r in range(13):
            assert A.compose(A.EQ, 1 << r) == 1 << r
            assert A.compose(1 << r, A.EQ) == 1 << r

    def test_full_table_against_enumeration_oracle(self):
        for i in range(13):
            for j in range(13):
                assert A.BASIC_COMP[i][j] == brute_force_composition(1 << i, 1 << j)

    def test_sound_on_random_concrete_intervals(self):
        # Monte Carlo soundness: the A-C relation realized by concrete
        # intervals always lies in the table entry for (A-B, B-C).
        rnd = random.Random(23)
        for _ in range(20_000):
            pts = [rnd.randrange(20) for _ in range(6)]
            a0, a1, b0, b1, c0, c1 = pts
            if not (a0 < a1 and b0 < b1 and c0 < c1):
                continue
            r1 = A.basic_relation(a0, a1, b0, b1)
            r2 = A.basic_relation(b0, b1, c0, c1)
            r3 = A.basic_relation(a0, a1, c0, c1)
            assert r3 & A.BASIC_COMP[r1.bit_length() - 1][r2.bit_length() - 1]

    def test_pairwise_equals_split_basics(self):
        for i in range(13):
            for j in range(13):
                assert A.compose_pairwise(1 << i, 1 << j) == \
                    A.compose_split(1 << i, 1 << j)

    def test_pairwise_equals_split_random(self):
        rnd = random.Random(20240901)
        for _ in range(100_000):
            x = rnd.randrange(A.N_LABELS)
            y = rnd.randrange(A.N_LABELS)
            assert A.compose_pairwise(x, y) == A.compose_split(x, y)

    def test_comp_row_matches_pairwise(self):
        rnd = random.Random(7)
        for _ in range(2000):
            y = rnd.randrange(A.N_LABELS)
            for r in range(13):
                assert A.COMP_ROW[r][y] == A.compose_pairwise(1 << r, y)

    def test_empty_operand_gives_empty(self):
        assert A.compose(A.EMPTY, A.FULL) == A.EMPTY
        assert A.compose(A.parse_label("b,m"), A.EMPTY) == A.EMPTY

    def test_full_is_absorbing(self):
        rnd = random.Random(11)
        for _ in range(500):
            x = rnd.randrange(1, A.N_LABELS)
            assert A.compose(x, A.FULL) == A.FULL
            assert A.compose(A.FULL, x) == A.FULL

    def test_inverse_antihomomorphism(self):
        rnd = random.Random(13)
        for _ in range(100_000):
            x = rnd.randrange(A.N_LABELS)
            y = rnd.randrange(A.N_LABELS)
            assert A.inverse(A.compose(x, y)) == A.compose(A.inverse(y), A.inverse(x))

    def test_monotonicity(self):
        rnd = random.Random(17)
        for _ in range(5000):
            x = rnd.randrange(A.N_LABELS)
            y = rnd.randrange(A.N_LABELS)
            xs = x & rnd.randrange(A.N_LABELS)
            ys = y & rnd.randrange(A.N_LABELS)
            full = A.compose(x, y)
            assert A.compose(xs, ys) & ~full == 0


class TestWeights:
    def test_paper_values(self):
        assert A.weight(A.parse_label("m,o,s")) == 8
        assert A.weight(A.EQ) == 1
        assert A.weight(A.FULL) == 34

    def test_cardinality(self):
        assert A.cardinality(A.parse_label("m,o,s")) == 3
        assert A.cardinality(A.FULL) == 13
        assert A.cardinality(A.EMPTY) == 0


class TestLabelText:
    def test_round_trip(self):
        for x in (0b1, 0b101, A.FULL, A.parse_label("d,fi,eq")):
            assert A.parse_label(A.format_label(x)) == x

    def test_full_set_token(self):
        assert A.parse_label("I") == A.FULL
        assert A.format_label(A.FULL) == "I"

    def test_unknown_token(self):
        with pytest.raises(ValueError):
            A.parse_label("b,zz")

"""Tractable subclasses of IA labels and label decompositions.

Two membership tables are built from first principles:

* pointizable (SA): a label is a member iff it equals the set of basic
  relations admitted by its own projection onto the four endpoint pairs
  (A-,B-), (A-,B+), (A+,B-), (A+,B+), each projected to a subset of {<,=,>}.

* ORD-Horn (NB): a label is a member iff the conjunction of every entailed
  Horn clause over endpoint literals pins down exactly the label's relations.
  The clause vocabulary is the ORD literals p<=q and p=q (positive) and
  p!=q (negative); a Horn clause carries at most one positive literal.  All
  such clauses over the four endpoints are enumerated (there are 1216), each
  reduced to its satisfaction mask over the 13 basic-relation endpoint
  configurations.

Decomposition partitions a label into maximal blocks of a class: repeatedly
extract the largest member subset of the remainder (ties by smallest bit
encoding).  SI blocks are the singletons.
"""

from itertools import combinations

from .algebra import (
    BITS, FULL, N_LABELS, N_RELS, REL_NAMES, _CANON, cardinality,
)

METHODS = ("si", "sa", "nb")

# Sign encodings: bit 1 = '<', bit 2 = '=', bit 4 = '>'.
_SIGN_BIT = {-1: 1, 0: 2, 1: 4}

# Per relation (by bit index): the four endpoint-pair sign bits.
_REL_POINT = []
for _name in REL_NAMES:
    _a0, _a1, _b0, _b1 = _CANON[_name]
    _REL_POINT.append(tuple(
        _SIGN_BIT[(x > y) - (x < y)]
        for x, y in ((_a0, _b0), (_a0, _b1), (_a1, _b0), (_a1, _b1))
    ))
_REL_POINT = tuple(_REL_POINT)


def endpoint_projection(label):
    """The four endpoint-pair relation sets induced by a label's members."""
    proj = [0, 0, 0, 0]
    for r in BITS[label]:
        point = _REL_POINT[r]
        for t in range(4):
            proj[t] |= point[t]
    return tuple(proj)


def _reconstruct(proj):
    """All basic relations whose endpoint signs fall inside the projection."""
    label = 0
    for r in range(N_RELS):
        point = _REL_POINT[r]
        if all(point[t] & proj[t] for t in range(4)):
            label |= 1 << r
    return label


def is_pointizable(label):
    """True iff the label is expressible as a conjunction of point relations."""
    if label == 0:
        raise ValueError("empty label")
    return _reconstruct(endpoint_projection(label)) == label


def _build_clause_masks():
    """Satisfaction mask over the 13 relation models for every ORD-Horn clause.

    Endpoints are indexed 0=A-, 1=A+, 2=B-, 3=B+.  For each relation model,
    atom p<=q and p=q truth comes from the canonical rank tuple.  A clause is
    one optional positive literal plus any set of != literals; its mask has
    bit r set iff relation r satisfies the clause.
    """
    ranks = [(_CANON[name][0], _CANON[name][1], _CANON[name][2], _CANON[name][3])
             for name in REL_NAMES]
    pairs_eq = list(combinations(range(4), 2))            # 6 unordered pairs
    pairs_le = [(p, q) for p in range(4) for q in range(4) if p != q]

    # Per-model truth masks for each atom.
    le_mask = {}
    for p, q in pairs_le:
        m = 0
        for r in range(N_RELS):
            if ranks[r][p] <= ranks[r][q]:
                m |= 1 << r
        le_mask[(p, q)] = m
    eq_mask = {}
    for p, q in pairs_eq:
        m = 0
        for r in range(N_RELS):
            if ranks[r][p] == ranks[r][q]:
                m |= 1 << r
        eq_mask[(p, q)] = m

    positives = [0] + [le_mask[pq] for pq in pairs_le] + [eq_mask[pq] for pq in pairs_eq]
    neq_masks = [FULL & ~eq_mask[pq] for pq in pairs_eq]

    masks = set()
    for pos in positives:
        for neg_bits in range(1 << len(neq_masks)):
            m = pos
            for t in range(len(neq_masks)):
                if neg_bits >> t & 1:
                    m |= neq_masks[t]
            masks.add(m)
    masks.discard(FULL)       # tautologies constrain nothing
    return tuple(masks)


_CLAUSE_MASKS = None


def _clause_masks():
    global _CLAUSE_MASKS
    if _CLAUSE_MASKS is None:
        _CLAUSE_MASKS = _build_clause_masks()
    return _CLAUSE_MASKS


def is_ord_horn(label):
    """True iff the label is expressible as a conjunction of ORD-Horn clauses."""
    if label == 0:
        raise ValueError("empty label")
    admitted = FULL
    for mask in _clause_masks():
        if label & ~mask == 0:
            admitted &= mask
            if admitted == label:
                return True
    return admitted == label


_NB_TABLE = None
_SA_TABLE = None


def build_nb_table():
    """ORD-Horn membership for all 8192 labels (index = label, empty -> False)."""
    global _NB_TABLE
    if _NB_TABLE is None:
        _NB_TABLE = tuple(
            x != 0 and is_ord_horn(x) for x in range(N_LABELS)
        )
    return _NB_TABLE


def build_sa_table():
    """Pointizable membership for all 8192 labels (empty -> False)."""
    global _SA_TABLE
    if _SA_TABLE is None:
        _SA_TABLE = tuple(
            x != 0 and is_pointizable(x) for x in range(N_LABELS)
        )
    return _SA_TABLE


class DecompositionCatalog:
    """Cached SI/SA/NB decompositions and membership for all labels.

    Membership tables are built on first use; decompositions are computed
    lazily per (label, method) and memoized, since only a small slice of the
    8192 labels shows up in any one solve.
    """

    def __init__(self):
        self._members = {}       # method -> members sorted by (-card, mask)
        self._cache = {}

    def _member_list(self, method):
        lst = self._members.get(method)
        if lst is None:
            table = build_sa_table() if method == "sa" else build_nb_table()
            lst = sorted(
                (x for x in range(1, N_LABELS) if table[x]),
                key=lambda x: (-cardinality(x), x),
            )
            self._members[method] = lst
        return lst

    def is_member(self, label, method):
        if method == "si":
            return cardinality(label) == 1
        table = build_sa_table() if method == "sa" else build_nb_table()
        return table[label]

    def decompose(self, label, method):
        """Ordered blocks partitioning the label; greedy largest-member-first."""
        if label == 0:
            raise ValueError("empty label")
        if method == "si":
            return [1 << r for r in BITS[label]]
        if method not in ("sa", "nb"):
            raise ValueError(f"unknown decomposition method {method!r}")
        cached = self._cache.get((label, method))
        if cached is not None:
            return list(cached)
        members = self._member_list(method)
        blocks = []
        rest = label
        while rest:
            for m in members:
                if m & ~rest == 0:
                    blocks.append(m)
                    rest ^= m
                    break
            else:
                raise AssertionError("singletons are members; unreachable")
        self._cache[(label, method)] = tuple(blocks)
        return blocks

    def block_count(self, label, method):
        if method == "si":
            return cardinality(label)
        return len(self.decompose(label, method))


_CATALOG = DecompositionCatalog()


def catalog():
    """The shared immutable decomposition catalog."""
    return _CATALOG


def decompose(label, method):
    return _CATALOG.decompose(label, method)

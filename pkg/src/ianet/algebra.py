"""Labels over Allen's thirteen basic interval relations, encoded as 13-bit sets.

Bit order is fixed: b=0, bi=1, m=2, mi=3, o=4, oi=5, s=6, si=7, d=8, di=9,
f=10, fi=11, eq=12.  A label is a plain int in [0, 8192); the full set I is
0x1fff.  All composition tables are derived from endpoint-order enumeration
rather than transcribed, so the tables double as their own oracle.
"""

from dataclasses import dataclass
from itertools import product

REL_NAMES = ("b", "bi", "m", "mi", "o", "oi", "s", "si", "d", "di", "f", "fi", "eq")
N_RELS = 13
N_LABELS = 1 << N_RELS
FULL = N_LABELS - 1
EMPTY = 0

B, BI, M, MI, O, OI, S, SI, D, DI, F, FI, EQ = (1 << i for i in range(N_RELS))
NAME_TO_BIT = {name: 1 << i for i, name in enumerate(REL_NAMES)}

# Canonical endpoint ranks (A-, A+, B-, B+) realizing each basic relation.
_CANON = {
    "b": (0, 1, 2, 3),
    "bi": (2, 3, 0, 1),
    "m": (0, 1, 1, 2),
    "mi": (1, 2, 0, 1),
    "o": (0, 2, 1, 3),
    "oi": (1, 3, 0, 2),
    "s": (0, 1, 0, 2),
    "si": (0, 2, 0, 1),
    "d": (1, 2, 0, 3),
    "di": (0, 3, 1, 2),
    "f": (1, 2, 0, 2),
    "fi": (0, 2, 1, 2),
    "eq": (0, 1, 0, 1),
}


def _sign(x, y):
    return (x > y) - (x < y)


def _signs(a0, a1, b0, b1):
    """Comparison signs for the four cross pairs (A-,B-), (A-,B+), (A+,B-), (A+,B+)."""
    return (_sign(a0, b0), _sign(a0, b1), _sign(a1, b0), _sign(a1, b1))


_SIGNS_TO_BIT = {_signs(*_CANON[name]): NAME_TO_BIT[name] for name in REL_NAMES}

# REL_SIGNS[i] is the sign tuple of the relation with bit index i.
REL_SIGNS = tuple(_signs(*_CANON[name]) for name in REL_NAMES)


def basic_relation(a_start, a_end, b_start, b_end):
    """The single basic relation holding between intervals A and B (as a bit)."""
    if not (a_start < a_end and b_start < b_end):
        raise ValueError("intervals must have start < end")
    return _SIGNS_TO_BIT[_signs(a_start, a_end, b_start, b_end)]


# Inverse swaps adjacent bit pairs (b<->bi, ..., f<->fi); eq is self-inverse.
_EVEN = 0x555  # bits 0,2,...,10
_ODD = 0xAAA   # bits 1,3,...,11


def inverse(label):
    """Inverse of a label: the inverse of each of its elements."""
    return ((label & _EVEN) << 1) | ((label & _ODD) >> 1) | (label & EQ)


def intersect(x, y):
    """Set intersection of two labels (a single machine AND)."""
    return x & y


def cardinality(label):
    """Number of basic relations in the label."""
    return label.bit_count()


BASIC_WEIGHTS = (3, 3, 2, 2, 4, 4, 2, 2, 4, 3, 2, 2, 1)

_WEIGHT = [0] * N_LABELS
for _x in range(1, N_LABELS):
    _low = _x & -_x
    _WEIGHT[_x] = _WEIGHT[_x ^ _low] + BASIC_WEIGHTS[_low.bit_length() - 1]


def weight(label):
    """Restrictiveness weight of a label: sum of its members' weights."""
    return _WEIGHT[label]


# BITS[x] lists the set bit indices of label x, ascending.
BITS = tuple(
    tuple(i for i in range(N_RELS) if x >> i & 1) for x in range(N_LABELS)
)


def parse_label(text):
    """Parse a comma-separated relation list, or the token I for the full set."""
    text = text.strip()
    if text == "I":
        return FULL
    label = 0
    for tok in text.split(","):
        tok = tok.strip()
        if tok not in NAME_TO_BIT:
            raise ValueError(f"unknown relation token {tok!r}")
        label |= NAME_TO_BIT[tok]
    return label


def format_label(label):
    """Canonical text form of a label; the full set prints as I."""
    if label == FULL:
        return "I"
    return ",".join(REL_NAMES[i] for i in BITS[label])


def _derive_basic_compositions():
    """Derive the 13x13 composition table by endpoint-order enumeration.

    Enumerates every assignment of the six endpoints of A, B, C to ranks
    0..5 (covering all weak orderings), keeps those where A, B, C are valid
    intervals, and collects the induced A-C relation per (A-B, B-C) pair.
    """
    table = [[0] * N_RELS for _ in range(N_RELS)]
    for a0, a1, b0, b1, c0, c1 in product(range(6), repeat=6):
        if not (a0 < a1 and b0 < b1 and c0 < c1):
            continue
        r1 = _SIGNS_TO_BIT[_signs(a0, a1, b0, b1)]
        r2 = _SIGNS_TO_BIT[_signs(b0, b1, c0, c1)]
        r3 = _SIGNS_TO_BIT[_signs(a0, a1, c0, c1)]
        table[r1.bit_length() - 1][r2.bit_length() - 1] |= r3
    return table


LOW_WIDTH = 7           # split tables: low 7 bits / high 6 bits
LOW_MASK = (1 << LOW_WIDTH) - 1


@dataclass(frozen=True)
class CompositionTables:
    """Pairwise 13x13 table plus Hogge-style four split tables.

    Split indexing: low(x) = x & 0x7f (relations b..s), high(x) = x >> 7
    (relations si..eq).  compose_split unions the four lookups
    (low,low), (low,high), (high,low), (high,high).
    """

    basic: tuple        # 13x13 label entries
    tll: tuple          # 128x128
    tlh: tuple          # 128x64
    thl: tuple          # 64x128
    thh: tuple          # 64x64


def _compose_rows(basic, offset, width, ysize, yoffset):
    """rows[r][y]: composition of single relation (offset+r) with bit-group mask y."""
    rows = []
    for r in range(width):
        row = [0] * ysize
        brow = basic[offset + r]
        for y in range(1, ysize):
            low = y & -y
            row[y] = row[y ^ low] | brow[yoffset + low.bit_length() - 1]
        rows.append(row)
    return rows


def _group_table(rows, xsize, ysize):
    """table[x][y] = union over set bits r of x of rows[r][y]."""
    table = [None] * xsize
    table[0] = tuple([0] * ysize)
    for x in range(1, xsize):
        low = x & -x
        base = table[x ^ low]
        row = rows[low.bit_length() - 1]
        table[x] = tuple(base[y] | row[y] for y in range(ysize))
    return tuple(table)


def build_composition_tables():
    """Build all composition tables from the endpoint-order enumeration."""
    basic = _derive_basic_compositions()
    low_rows = _compose_rows(basic, 0, LOW_WIDTH, 1 << LOW_WIDTH, 0)
    low_hi_rows = _compose_rows(basic, 0, LOW_WIDTH, 1 << 6, LOW_WIDTH)
    hi_rows = _compose_rows(basic, LOW_WIDTH, 6, 1 << LOW_WIDTH, 0)
    hi_hi_rows = _compose_rows(basic, LOW_WIDTH, 6, 1 << 6, LOW_WIDTH)
    return CompositionTables(
        basic=tuple(tuple(row) for row in basic),
        tll=_group_table(low_rows, 1 << LOW_WIDTH, 1 << LOW_WIDTH),
        tlh=_group_table(low_hi_rows, 1 << LOW_WIDTH, 1 << 6),
        thl=_group_table(hi_rows, 1 << 6, 1 << LOW_WIDTH),
        thh=_group_table(hi_hi_rows, 1 << 6, 1 << 6),
    )


TABLES = build_composition_tables()

BASIC_COMP = TABLES.basic
_TLL, _TLH, _THL, _THH = TABLES.tll, TABLES.tlh, TABLES.thl, TABLES.thh

# COMP_ROW[r][y]: composition of the single relation r with the whole label y,
# i.e. one full row of the pairwise nested loop, precomputed.
def _build_comp_rows():
    rows = []
    for r in range(N_RELS):
        row = [0] * N_LABELS
        brow = BASIC_COMP[r]
        for y in range(1, N_LABELS):
            low = y & -y
            row[y] = row[y ^ low] | brow[low.bit_length() - 1]
        rows.append(tuple(row))
    return tuple(rows)


COMP_ROW = _build_comp_rows()


def compose_pairwise(x, y, tables=TABLES):
    """Allen's method: union of pairwise compositions via the 13x13 table."""
    basic = tables.basic
    result = 0
    for r1 in BITS[x]:
        row = basic[r1]
        for r2 in BITS[y]:
            result |= row[r2]
    return result


def compose_split(x, y, tables=TABLES):
    """Hogge's method: union of four split-table references."""
    xl, xh, yl, yh = x & LOW_MASK, x >> LOW_WIDTH, y & LOW_MASK, y >> LOW_WIDTH
    return (
        tables.tll[xl][yl]
        | tables.tlh[xl][yh]
        | tables.thl[xh][yl]
        | tables.thh[xh][yh]
    )


def compose(x, y):
    """Composition of two labels (split method; identical to pairwise)."""
    return (
        _TLL[x & LOW_MASK][y & LOW_MASK]
        | _TLH[x & LOW_MASK][y >> LOW_WIDTH]
        | _THL[x >> LOW_WIDTH][y & LOW_MASK]
        | _THH[x >> LOW_WIDTH][y >> LOW_WIDTH]
    )

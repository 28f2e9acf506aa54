"""IA constraint networks and their textual file formats.

A network is an n x n matrix of labels stored flat, with {eq} on the
diagonal and inverse symmetry maintained by every write.  Two formats are
supported: an edge-list format (header ``n <count>``, lines
``<i> <j> <rel>[,<rel>]*`` with i < j, '#' comments) and an
intersects/disjoint matrix format (header ``matrix <count>``, rows of
symbols 1 / 0 / ?).
"""

from . import algebra
from .algebra import EQ, FULL, format_label, inverse, parse_label

# Labels used by the matrix format: 1 = intersects, 0 = disjoint.
DISJOINT = algebra.B | algebra.BI
INTERSECTS = FULL & ~DISJOINT


class ParseError(ValueError):
    def __init__(self, message, lineno):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class Network:
    """An IA network: vertex count n and a flat n*n list of labels."""

    __slots__ = ("n", "labels", "names")

    def __init__(self, n, names=None):
        if n < 1:
            raise ValueError("network needs at least one vertex")
        self.n = n
        self.labels = [FULL] * (n * n)
        for i in range(n):
            self.labels[i * n + i] = EQ
        self.names = list(names) if names else None

    def get(self, i, j):
        return self.labels[i * self.n + j]

    def set(self, i, j, label):
        """Set the label on edge (i, j), mirroring the inverse on (j, i)."""
        if i == j:
            raise ValueError("diagonal labels are fixed to {eq}")
        self.labels[i * self.n + j] = label
        self.labels[j * self.n + i] = inverse(label)

    def edges(self):
        """All edge references (i, j) with i < j."""
        for i in range(self.n):
            for j in range(i + 1, self.n):
                yield (i, j)

    def copy(self):
        dup = Network.__new__(Network)
        dup.n = self.n
        dup.labels = list(self.labels)
        dup.names = list(self.names) if self.names else None
        return dup

    def name_of(self, i):
        return self.names[i] if self.names else str(i)

    def __eq__(self, other):
        return (
            isinstance(other, Network)
            and self.n == other.n
            and self.labels == other.labels
        )

    def __repr__(self):
        return f"Network(n={self.n})"


def parse_network(text):
    """Parse the edge-list format into a network."""
    net = None
    seen = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split(None, 2)
        if net is None:
            if fields[0] != "n" or len(fields) != 2:
                raise ParseError("expected header 'n <count>'", lineno)
            try:
                count = int(fields[1])
            except ValueError:
                raise ParseError(f"bad vertex count {fields[1]!r}", lineno) from None
            if count < 1:
                raise ParseError("vertex count must be positive", lineno)
            net = Network(count)
            continue
        if len(fields) != 3:
            raise ParseError("expected '<i> <j> <relations>'", lineno)
        try:
            i, j = int(fields[0]), int(fields[1])
        except ValueError:
            raise ParseError("vertex indices must be integers", lineno) from None
        if not (0 <= i < net.n and 0 <= j < net.n):
            raise ParseError(f"vertex index out of range 0..{net.n - 1}", lineno)
        if i >= j:
            raise ParseError("edge lines require i < j", lineno)
        try:
            label = parse_label(fields[2])
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
        if label == 0:
            raise ParseError("empty label literal", lineno)
        if (i, j) in seen and seen[(i, j)] != label:
            raise ParseError(f"duplicate edge ({i}, {j}) with conflicting label", lineno)
        seen[(i, j)] = label
        net.set(i, j, label)
    if net is None:
        raise ParseError("missing header line", 1)
    return net


def serialize_network(net):
    """Canonical edge-list text: only edges i < j with label != I."""
    lines = [f"n {net.n}"]
    for i, j in net.edges():
        label = net.get(i, j)
        if label != FULL:
            lines.append(f"{i} {j} {format_label(label)}")
    return "\n".join(lines) + "\n"


_MATRIX_LABELS = {"1": INTERSECTS, "0": DISJOINT, "?": FULL}


def parse_matrix(text):
    """Parse the intersects/disjoint matrix format into a network."""
    rows = []
    n = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if n is None:
            fields = line.split()
            if fields[0] != "matrix" or len(fields) != 2:
                raise ParseError("expected header 'matrix <count>'", lineno)
            try:
                n = int(fields[1])
            except ValueError:
                raise ParseError(f"bad vertex count {fields[1]!r}", lineno) from None
            if n < 1:
                raise ParseError("vertex count must be positive", lineno)
            continue
        symbols = line.split()
        if len(symbols) != n:
            raise ParseError(f"expected {n} symbols, got {len(symbols)}", lineno)
        for sym in symbols:
            if sym not in _MATRIX_LABELS:
                raise ParseError(f"unknown symbol {sym!r}", lineno)
        rows.append((symbols, lineno))
    if n is None:
        raise ParseError("missing header line", 1)
    if len(rows) != n:
        raise ParseError(f"expected {n} rows, got {len(rows)}", rows[-1][1] if rows else 1)
    net = Network(n)
    for i in range(n):
        for j in range(i + 1, n):
            if rows[i][0][j] != rows[j][0][i]:
                raise ParseError(
                    f"asymmetric entries at ({i}, {j})", rows[j][1]
                )
            net.set(i, j, _MATRIX_LABELS[rows[i][0][j]])
    return net


def validate(net):
    """Invariant violations as human-readable strings; empty list iff valid."""
    violations = []
    n = net.n
    for i in range(n):
        if net.get(i, i) != EQ:
            violations.append(f"diagonal ({i}, {i}) is not {{eq}}")
    for i, j in net.edges():
        fwd, back = net.get(i, j), net.get(j, i)
        if back != inverse(fwd):
            violations.append(f"edge ({j}, {i}) is not the inverse of ({i}, {j})")
        if fwd == 0:
            violations.append(f"edge ({i}, {j}) has an empty label")
    return violations

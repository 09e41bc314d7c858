"""Edge-weighted decision diagrams for state vectors and unitaries.

A vector over n qubits decomposes level by level: the node at level i
splits the amplitude block for qubit i into its |0> and |1> halves, where
qubit 0 is the most significant bit of a basis-state index. Matrices split
into four quadrants per level, stored in the order

    (e00, e01, e10, e11) = (out 0 / in 0, out 0 / in 1,
                            out 1 / in 0, out 1 / in 1),

i.e. row index = output basis state, column index = input basis state, and
e01 is the upper-right quadrant. An entry is the product of the edge
weights along its root-to-terminal path.

Diagrams are reduced and normalized:

* structurally identical nodes are shared through a per-level unique
  table (a node with two equal successors is therefore stored once and
  shared, never skipped; every nonzero path visits every level);
* per node, the first successor edge with a nonzero weight carries weight
  exactly the interned 1; the common factor moves to the incoming edge;
* an all-zero sub-block is the canonical zero edge (weight 0, straight to
  the terminal), never a node.

A Universe owns the unique tables, the complex table, and the operation
caches. It is single-owner: one simulation, one thread. Edges are only
meaningful within the universe that created them.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple, Sequence, Union

from .cvalue import ComplexTable, ComplexValue


class Terminal:
    """The unique sink: a 1-dimensional vector / 1x1 matrix holding 1."""

    __slots__ = ()

    def __repr__(self) -> str:
        return "TERMINAL"


TERMINAL = Terminal()


class VectorNode:
    __slots__ = ("level", "edges", "idx")

    def __init__(self, level: int, edges: tuple["VEdge", "VEdge"], idx: int):
        self.level = level
        self.edges = edges
        self.idx = idx

    def __repr__(self) -> str:
        return f"<VectorNode q{self.level} #{self.idx}>"


class MatrixNode:
    __slots__ = ("level", "edges", "idx")

    def __init__(self, level: int, edges: tuple["MEdge", ...], idx: int):
        self.level = level
        self.edges = edges  # (e00, e01, e10, e11)
        self.idx = idx

    def __repr__(self) -> str:
        return f"<MatrixNode q{self.level} #{self.idx}>"


class VEdge(NamedTuple):
    w: ComplexValue
    node: Union[VectorNode, Terminal]


class MEdge(NamedTuple):
    w: ComplexValue
    node: Union[MatrixNode, Terminal]


Edge = Union[VEdge, MEdge]


class ComputeCache:
    """Memo tables for the diagram operations.

    Keys embed operand identities (nodes and interned weight handles), so
    a hit returns exactly the edge recomputation would produce. The whole
    cache is dropped whenever the universe garbage-collects, because node
    identities may be reused afterwards.
    """

    def __init__(self):
        self.add: dict = {}
        self.mult: dict = {}
        self.prob: dict = {}
        self.ops_count = 0  # recursion-entry counter for cost assertions

    def clear(self) -> None:
        self.add.clear()
        self.mult.clear()
        self.prob.clear()


class Universe:
    """Node storage and construction for one simulation.

    Holds the complex table, per-level unique tables for vector and
    matrix nodes, and the compute cache. All diagram construction goes
    through make_vector_node / make_matrix_node, which normalize and
    deduplicate.
    """

    def __init__(self, tol: float = 1e-10):
        self.ctab = ComplexTable(tol)
        self.cache = ComputeCache()
        self._vtables: dict[int, dict] = {}
        self._mtables: dict[int, dict] = {}
        self._node_seq = 0

    # -- bookkeeping ----------------------------------------------------

    @property
    def live_nodes(self) -> int:
        """Distinct nodes currently held by the unique tables."""
        return (sum(len(t) for t in self._vtables.values())
                + sum(len(t) for t in self._mtables.values()))

    def vector_zero(self) -> VEdge:
        return VEdge(self.ctab.zero, TERMINAL)

    def matrix_zero(self) -> MEdge:
        return MEdge(self.ctab.zero, TERMINAL)

    def _next_idx(self) -> int:
        idx = self._node_seq
        self._node_seq += 1
        return idx

    # -- node construction ----------------------------------------------

    def make_vector_node(self, level: int, e0: VEdge, e1: VEdge) -> VEdge:
        """Build (or find) the normalized node for the pair (e0, e1).

        The first nonzero weight becomes the returned edge's weight; the
        node keeps weight 1 there and the other weight divided through.
        Two zero operands collapse to the canonical zero edge.
        """
        ct = self.ctab
        zero = ct.zero
        for e in (e0, e1):
            if e.node is not TERMINAL and e.node.level <= level:
                raise ValueError(
                    f"successor at level {e.node.level} not below level {level}")
        if e0.w is zero:
            if e1.w is zero:
                return VEdge(zero, TERMINAL)
            d = e1.w
            e0 = VEdge(zero, TERMINAL)
            e1 = VEdge(ct.one, e1.node)
        else:
            d = e0.w
            e0 = VEdge(ct.one, e0.node)
            if e1.w is zero:
                e1 = VEdge(zero, TERMINAL)
            else:
                r = ct.cdiv(e1.w, d)
                e1 = VEdge(zero, TERMINAL) if r is zero else VEdge(r, e1.node)
        table = self._vtables.setdefault(level, {})
        key = (e0, e1)
        node = table.get(key)
        if node is None:
            node = VectorNode(level, key, self._next_idx())
            table[key] = node
        return VEdge(d, node)

    def make_matrix_node(self, level: int, e00: MEdge, e01: MEdge,
                         e10: MEdge, e11: MEdge) -> MEdge:
        """Four-successor analogue of make_vector_node."""
        ct = self.ctab
        zero = ct.zero
        edges = [e00, e01, e10, e11]
        d = None
        for i, e in enumerate(edges):
            if e.node is not TERMINAL and e.node.level <= level:
                raise ValueError(
                    f"successor at level {e.node.level} not below level {level}")
            if e.w is zero:
                edges[i] = MEdge(zero, TERMINAL)
            elif d is None:
                d = e.w
                edges[i] = MEdge(ct.one, e.node)
            else:
                r = ct.cdiv(e.w, d)
                edges[i] = MEdge(zero, TERMINAL) if r is zero else MEdge(r, e.node)
        if d is None:
            return MEdge(zero, TERMINAL)
        table = self._mtables.setdefault(level, {})
        key = tuple(edges)
        node = table.get(key)
        if node is None:
            node = MatrixNode(level, key, self._next_idx())
            table[key] = node
        return MEdge(d, node)

    # -- vector construction and readout ---------------------------------

    def basis_state(self, n: int, bits: str) -> VEdge:
        """The computational basis state |bits>, one node per level."""
        if len(bits) != n or any(b not in "01" for b in bits):
            raise ValueError(f"need a length-{n} bitstring, got {bits!r}")
        ct = self.ctab
        edge = VEdge(ct.one, TERMINAL)
        zero = VEdge(ct.zero, TERMINAL)
        for level in range(n - 1, -1, -1):
            if bits[level] == "0":
                edge = self.make_vector_node(level, edge, zero)
            else:
                edge = self.make_vector_node(level, zero, edge)
        return edge

    def build_vector(self, amplitudes: Sequence[complex]) -> VEdge:
        """Decompose a dense amplitude vector (length 2^n) into a diagram.

        The first half of the input is the most-significant-qubit |0>
        branch. No normalization of the input is required or checked.
        """
        size = len(amplitudes)
        if size == 0 or size & (size - 1):
            raise ValueError(f"length {size} is not a power of two")
        ct = self.ctab

        def build(level: int, offset: int, span: int) -> VEdge:
            if span == 1:
                a = complex(amplitudes[offset])
                return VEdge(ct.intern(a.real, a.imag), TERMINAL)
            half = span // 2
            e0 = build(level + 1, offset, half)
            e1 = build(level + 1, offset + half, half)
            return self.make_vector_node(level, e0, e1)

        return build(0, 0, size)

    def read_amplitude(self, v: VEdge, n: int, index: int) -> complex:
        """Amplitude of basis state ``index``: the path weight product."""
        if not 0 <= index < (1 << n):
            raise ValueError(f"index {index} out of range for {n} qubits")
        w = complex(v.w.re, v.w.im)
        node = v.node
        while node is not TERMINAL and w != 0:
            e = node.edges[(index >> (n - 1 - node.level)) & 1]
            w *= complex(e.w.re, e.w.im)
            node = e.node
        return w

    def read_dense(self, v: VEdge, n: int) -> list[complex]:
        """Expand a vector diagram back to its 2^n amplitudes (n <= 20)."""
        if n > 20:
            raise ValueError(f"read_dense caps at 20 qubits, got {n}")
        out = [0j] * (1 << n)

        def fill(edge: VEdge, offset: int, scale: complex) -> None:
            w = scale * complex(edge.w.re, edge.w.im)
            if w == 0:
                return
            node = edge.node
            if node is TERMINAL:
                out[offset] = w
                return
            half = 1 << (n - node.level - 1)
            fill(node.edges[0], offset, w)
            fill(node.edges[1], offset + half, w)

        fill(v, 0, 1.0 + 0j)
        return out

    # -- matrix construction and readout ---------------------------------

    def build_matrix(self, entries: Sequence[Sequence[complex]]) -> MEdge:
        """Decompose a dense 2^n x 2^n matrix into a diagram."""
        size = len(entries)
        if size == 0 or size & (size - 1):
            raise ValueError(f"dimension {size} is not a power of two")
        if any(len(row) != size for row in entries):
            raise ValueError("matrix is not square")
        ct = self.ctab

        def build(level: int, row: int, col: int, span: int) -> MEdge:
            if span == 1:
                a = complex(entries[row][col])
                return MEdge(ct.intern(a.real, a.imag), TERMINAL)
            half = span // 2
            return self.make_matrix_node(
                level,
                build(level + 1, row, col, half),
                build(level + 1, row, col + half, half),
                build(level + 1, row + half, col, half),
                build(level + 1, row + half, col + half, half),
            )

        return build(0, 0, 0, size)

    def read_matrix_entry(self, m: MEdge, n: int, row: int, col: int) -> complex:
        """Entry (row, col): row indexes the output basis state."""
        dim = 1 << n
        if not (0 <= row < dim and 0 <= col < dim):
            raise ValueError(f"entry ({row}, {col}) out of range for {n} qubits")
        w = complex(m.w.re, m.w.im)
        node = m.node
        while node is not TERMINAL and w != 0:
            shift = n - 1 - node.level
            e = node.edges[((row >> shift) & 1) * 2 + ((col >> shift) & 1)]
            w *= complex(e.w.re, e.w.im)
            node = e.node
        return w

    # -- garbage collection ----------------------------------------------

    def gc_collect(self, roots: Iterable[Edge]) -> int:
        """Drop nodes unreachable from ``roots``; returns the freed count.

        Invalidates the compute cache. Never called implicitly by the
        construction paths, so peak statistics stay deterministic.
        """
        live: set = set()
        stack = [r.node for r in roots]
        while stack:
            node = stack.pop()
            if node is TERMINAL or node in live:
                continue
            live.add(node)
            for e in node.edges:
                if e.node is not TERMINAL:
                    stack.append(e.node)
        freed = 0
        for tables in (self._vtables, self._mtables):
            for table in tables.values():
                dead = [k for k, nd in table.items() if nd not in live]
                freed += len(dead)
                for k in dead:
                    del table[k]
        self.cache.clear()
        return freed


def count_nodes(edge: Edge) -> int:
    """Number of distinct nonterminal nodes reachable from ``edge``."""
    seen: set = set()
    stack = [edge.node]
    while stack:
        node = stack.pop()
        if node is TERMINAL or node in seen:
            continue
        seen.add(node)
        for e in node.edges:
            if e.node is not TERMINAL:
                stack.append(e.node)
    return len(seen)


def _format_weight(w: ComplexValue) -> str:
    return f"{w.re:.6g}{w.im:+.6g}i"


def _is_zero_stub(e: Edge) -> bool:
    return e.node is TERMINAL and e.w.re == 0.0 and e.w.im == 0.0


def export_dot(edge: Edge) -> str:
    """Render a diagram as DOT text.

    One graph node per diagram node, labeled "q<level>"; edges carry the
    weight as "a+bi" with 6 significant digits; zero stubs become boxed
    "0" leaves; the terminal is a boxed "1".
    """
    lines = [
        "digraph dd {",
        "  ordering=out;",
        '  __root [shape=point, label=""];',
        '  __t [shape=box, label="1"];',
    ]
    ids: dict = {}
    order: list = []
    stack = [edge.node]
    while stack:
        node = stack.pop()
        if node is TERMINAL or node in ids:
            continue
        ids[node] = f"n{len(ids)}"
        order.append(node)
        for e in node.edges:
            if e.node is not TERMINAL:
                stack.append(e.node)
    for node in order:
        lines.append(f'  {ids[node]} [label="q{node.level}"];')

    stubs = 0

    def emit(src: str, e: Edge) -> None:
        nonlocal stubs
        if _is_zero_stub(e):
            name = f"z{stubs}"
            stubs += 1
            lines.append(f'  {name} [shape=box, label="0"];')
            lines.append(f"  {src} -> {name};")
        else:
            dest = "__t" if e.node is TERMINAL else ids[e.node]
            lines.append(f'  {src} -> {dest} [label="{_format_weight(e.w)}"];')

    emit("__root", edge)
    for node in order:
        for e in node.edges:
            emit(ids[node], e)
    lines.append("}")
    return "\n".join(lines)

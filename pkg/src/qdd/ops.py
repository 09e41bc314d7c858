"""Diagram arithmetic: Kronecker product, addition, matrix-vector
multiplication, and projective measurement.

Multiplication recurses on the quadrant decomposition

    U * psi = [U00*psi0 + U01*psi1; U10*psi0 + U11*psi1]

with sub-products and sub-sums memoized in the universe's compute cache.
Cache keys factor the operands' top weights out (multiply) or down to a
single weight ratio (add); both are exact rewrites, and they make the
memoization hit on shared structure instead of on per-path weight
products. Measurement works on node probabilities

    p(node) = |w_l|^2 * p(left) + |w_r|^2 * p(right),   p(terminal) = 1,

collapses by swapping the losing branch for a zero stub, and renormalizes
through the root edge weight.
"""

from __future__ import annotations

import math

from .cvalue import ComplexTable, ComplexValue, magnitude_squared
from .dd import MEdge, TERMINAL, Universe, VEdge

PROB_TOL = 1e-8


class NormDriftError(RuntimeError):
    """Probability mass stopped summing to 1 within tolerance."""

    def __init__(self, message: str, deviation: float | None = None,
                 op_index: int | None = None):
        super().__init__(message)
        self.deviation = deviation
        self.op_index = op_index


def _vedge(ct: ComplexTable, w: ComplexValue, node) -> VEdge:
    # Keep the zero edge canonical even when a product underflows the
    # interning tolerance.
    return VEdge(w, TERMINAL) if w is ct.zero else VEdge(w, node)


# -- Kronecker product ---------------------------------------------------

def kron(uni: Universe, a: MEdge, b: MEdge) -> MEdge:
    """Tensor product with a's qubits above (more significant than) b's.

    Rebuilds a with every nonzero terminal-bound edge redirected to b's
    root node; the two root weights multiply. Raises if any node of a
    sits at or below b's root level.
    """
    ct = uni.ctab
    if a.w is ct.zero or b.w is ct.zero:
        return MEdge(ct.zero, TERMINAL)
    b_level = None if b.node is TERMINAL else b.node.level
    memo: dict = {}

    def rebuild(node):
        if node is TERMINAL:
            return b.node
        got = memo.get(node)
        if got is not None:
            return got
        if b_level is not None and node.level >= b_level:
            raise ValueError(
                f"operand levels overlap: {node.level} >= {b_level}")
        edges = [e if e.w is ct.zero else MEdge(e.w, rebuild(e.node))
                 for e in node.edges]
        res = uni.make_matrix_node(node.level, *edges)
        # weights were normalized already, so no factor comes back up
        memo[node] = res.node
        return res.node

    return MEdge(ct.cmul(a.w, b.w), rebuild(a.node))


# -- addition --------------------------------------------------------------

def add(uni: Universe, p: VEdge, q: VEdge) -> VEdge:
    """Component-wise sum of two vectors over the same qubit set."""
    ct = uni.ctab
    cache = uni.cache
    cache.ops_count += 1
    if p.w is ct.zero:
        return q
    if q.w is ct.zero:
        return p
    pn, qn = p.node, q.node
    if pn is TERMINAL or qn is TERMINAL:
        if pn is not qn:
            raise ValueError("operands span different qubit sets")
        return VEdge(ct.cadd(p.w, q.w), TERMINAL)
    if pn.level != qn.level:
        raise ValueError(
            f"operands span different qubit sets: {pn.level} vs {qn.level}")
    # Deterministic operand order makes the cache line commutative.
    if (qn.idx, q.w.idx) < (pn.idx, p.w.idx):
        p, q = q, p
        pn, qn = qn, pn
    ratio = ct.cdiv(q.w, p.w)
    key = (pn, ratio, qn)
    hit = cache.add.get(key)
    if hit is None:
        parts = []
        for i in (0, 1):
            pe = pn.edges[i]
            qe = qn.edges[i]
            if qe.w is not ct.zero:
                qe = _vedge(ct, ct.cmul(ratio, qe.w), qe.node)
            parts.append(add(uni, pe, qe))
        hit = uni.make_vector_node(pn.level, parts[0], parts[1])
        cache.add[key] = hit
    return _vedge(ct, ct.cmul(p.w, hit.w), hit.node)


# -- matrix-vector multiplication -------------------------------------------

def multiply(uni: Universe, u: MEdge, v: VEdge) -> VEdge:
    """Apply the operator u to the state v (same qubit levels)."""
    ct = uni.ctab
    if u.w is ct.zero or v.w is ct.zero:
        return VEdge(ct.zero, TERMINAL)
    r = _mul_nodes(uni, u.node, v.node)
    return _vedge(ct, ct.cmul(ct.cmul(u.w, v.w), r.w), r.node)


def _mul_nodes(uni: Universe, un, vn) -> VEdge:
    ct = uni.ctab
    cache = uni.cache
    cache.ops_count += 1
    if un is TERMINAL or vn is TERMINAL:
        if un is not vn:
            raise ValueError("operands span different qubit levels")
        return VEdge(ct.one, TERMINAL)
    if un.level != vn.level:
        raise ValueError(
            f"operands span different qubit levels: {un.level} vs {vn.level}")
    key = (un, vn)
    hit = cache.mult.get(key)
    if hit is not None:
        return hit
    parts = []
    for i in (0, 1):
        acc = VEdge(ct.zero, TERMINAL)
        for j in (0, 1):
            ue = un.edges[2 * i + j]
            ve = vn.edges[j]
            if ue.w is ct.zero or ve.w is ct.zero:
                continue
            sub = _mul_nodes(uni, ue.node, ve.node)
            term = _vedge(ct, ct.cmul(ct.cmul(ue.w, ve.w), sub.w), sub.node)
            acc = term if acc.w is ct.zero else add(uni, acc, term)
        parts.append(acc)
    res = uni.make_vector_node(un.level, parts[0], parts[1])
    cache.mult[key] = res
    return res


# -- probabilities and measurement ------------------------------------------

def node_probability(uni: Universe, node) -> float:
    """Summed squared magnitudes of the sub-vector below ``node``.

    Weights on the way down count as |w|^2; the edge *into* the node is
    the caller's business. Memoized per node."""
    if node is TERMINAL:
        return 1.0
    cache = uni.cache.prob
    hit = cache.get(node)
    if hit is not None:
        return hit
    ct = uni.ctab
    p = 0.0
    for e in node.edges:
        if e.w is not ct.zero:
            p += magnitude_squared(e.w) * node_probability(uni, e.node)
    cache[node] = p
    return p


def norm_squared(uni: Universe, v: VEdge) -> float:
    """Total probability mass of the state (1 for a normalized state)."""
    return magnitude_squared(v.w) * node_probability(uni, v.node)


def qubit_probabilities(uni: Universe, v: VEdge) -> tuple[float, float]:
    """(P(root qubit -> 0), P(root qubit -> 1)), root weight included."""
    if v.node is TERMINAL:
        raise ValueError("state has no qubits to measure")
    rw = magnitude_squared(v.w)
    e0, e1 = v.node.edges
    p0 = rw * magnitude_squared(e0.w) * node_probability(uni, e0.node)
    p1 = rw * magnitude_squared(e1.w) * node_probability(uni, e1.node)
    return p0, p1


def _check_prob_sum(p0: float, p1: float) -> None:
    dev = abs(p0 + p1 - 1.0)
    if dev > PROB_TOL:
        raise NormDriftError(
            f"measurement probabilities sum to {p0 + p1!r}", deviation=dev)


def _pick(rng, p0: float, p1: float) -> tuple[int, float]:
    outcome = 0 if rng.random() < p0 else 1
    p = p0 if outcome == 0 else p1
    if p <= 0.0:
        raise NormDriftError("collapse branch has zero probability",
                             deviation=abs(p0 + p1 - 1.0))
    return outcome, p


def _collapse(uni: Universe, v: VEdge, q: int, outcome: int, prob: float) -> VEdge:
    """Zero-stub the losing branch of every level-q node, renormalize."""
    ct = uni.ctab
    stub = VEdge(ct.zero, TERMINAL)
    memo: dict = {}

    def rebuild(node) -> VEdge:
        got = memo.get(node)
        if got is not None:
            return got
        if node.level == q:
            kept = node.edges[outcome]
            if outcome == 0:
                res = uni.make_vector_node(q, kept, stub)
            else:
                res = uni.make_vector_node(q, stub, kept)
        else:
            parts = []
            for e in node.edges:
                if e.w is ct.zero:
                    parts.append(stub)
                else:
                    sub = rebuild(e.node)
                    parts.append(_vedge(ct, ct.cmul(e.w, sub.w), sub.node))
            res = uni.make_vector_node(node.level, parts[0], parts[1])
        memo[node] = res
        return res

    collapsed = rebuild(v.node)
    scale = ct.intern(1.0 / math.sqrt(prob), 0.0)
    w = ct.cmul(ct.cmul(v.w, collapsed.w), scale)
    return _vedge(ct, w, collapsed.node)


def measure_top(uni: Universe, v: VEdge, rng) -> tuple[int, VEdge]:
    """Measure the root node's qubit; returns (outcome, collapsed state).

    ``rng`` is any object with random() -> [0, 1); outcome 0 is chosen
    when the draw falls below P(0). Raises NormDriftError when the two
    probabilities stop summing to 1 within tolerance.
    """
    p0, p1 = qubit_probabilities(uni, v)
    _check_prob_sum(p0, p1)
    outcome, p = _pick(rng, p0, p1)
    return outcome, _collapse(uni, v, v.node.level, outcome, p)


def measure_qubit(uni: Universe, v: VEdge, q: int, rng) -> tuple[int, VEdge]:
    """Measure qubit q anywhere in the diagram, without SWAP gates.

    Accumulates the squared-magnitude mass reaching each level-q node,
    splits it through the two branches, then collapses and renormalizes
    like measure_top.
    """
    ct = uni.ctab
    if v.node is TERMINAL:
        raise ValueError("state has no qubits to measure")
    if q < v.node.level:
        raise ValueError(f"qubit {q} above the diagram root {v.node.level}")
    mass = {v.node: magnitude_squared(v.w)}
    level = v.node.level
    while level < q:
        nxt: dict = {}
        for node, m in mass.items():
            for e in node.edges:
                if e.w is ct.zero:
                    continue
                if e.node is TERMINAL:
                    raise ValueError(f"qubit {q} below the diagram depth")
                nxt[e.node] = nxt.get(e.node, 0.0) + m * magnitude_squared(e.w)
        mass = nxt
        level += 1
    p0 = p1 = 0.0
    for node, m in mass.items():
        e0, e1 = node.edges
        if e0.w is not ct.zero:
            p0 += m * magnitude_squared(e0.w) * node_probability(uni, e0.node)
        if e1.w is not ct.zero:
            p1 += m * magnitude_squared(e1.w) * node_probability(uni, e1.node)
    _check_prob_sum(p0, p1)
    outcome, p = _pick(rng, p0, p1)
    return outcome, _collapse(uni, v, q, outcome, p)


def measure_all(uni: Universe, v: VEdge, rng) -> str:
    """Sample one full bitstring from |psi|^2.

    Equivalent to measuring the top qubit and recursing into the observed
    branch, qubit by qubit; the conditional split at each node is its two
    branch masses over the node probability. One uniform draw per qubit.
    """
    total = norm_squared(uni, v)
    dev = abs(total - 1.0)
    if dev > PROB_TOL:
        raise NormDriftError(f"state norm is {total!r}", deviation=dev)
    ct = uni.ctab
    bits: list[str] = []
    node = v.node
    while node is not TERMINAL:
        e0, e1 = node.edges
        p0 = p1 = 0.0
        if e0.w is not ct.zero:
            p0 = magnitude_squared(e0.w) * node_probability(uni, e0.node)
        if e1.w is not ct.zero:
            p1 = magnitude_squared(e1.w) * node_probability(uni, e1.node)
        if rng.random() < p0 / (p0 + p1):
            bits.append("0")
            node = e0.node
        else:
            bits.append("1")
            node = e1.node
    return "".join(bits)

"""Circuit simulation: a DD gate engine plus a dense reference simulator.

Qubit q acts on diagram level n - 1 - q, so qubit 0 drives the most
significant bit of a state index. Diagonal gates (t, cz) rewrite weights
along the affected levels; the remaining single-qubit gates combine the
two child subtrees with a memoized recursive add. All memo caches live
for a single gate application.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .circuits import Circuit, Gate
from .dd import TERMINAL, DecisionDiagram, Edge

MAX_DENSE_QUBITS = 24

_S = 1 / math.sqrt(2)
GATE_MATRICES: dict[str, np.ndarray] = {
    "h": np.array([[_S, _S], [_S, -_S]], dtype=complex),
    "t": np.array([[1, 0], [0, cmath.exp(1j * math.pi / 4)]], dtype=complex),
    "x_1_2": 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=complex),
    "y_1_2": 0.5 * np.array([[1 + 1j, -1 - 1j], [1 + 1j, 1 + 1j]], dtype=complex),
}


class ApproximatedDDError(RuntimeError):
    """Gate application is only defined on exact diagrams."""


class TooManyQubitsError(ValueError):
    """Dense simulation refuses above MAX_DENSE_QUBITS."""


def _zero_edge() -> Edge:
    return Edge(0j, TERMINAL)


def _scaled(factor: complex, edge: Edge) -> Edge:
    if factor == 0 or edge.weight == 0:
        return _zero_edge()
    return Edge(factor * edge.weight, edge.target)


def _apply_single(dd: DecisionDiagram, level: int, mat: np.ndarray) -> Edge:
    u00, u01 = complex(mat[0, 0]), complex(mat[0, 1])
    u10, u11 = complex(mat[1, 0]), complex(mat[1, 1])
    node_memo: dict[int, Edge] = {}
    add_memo: dict[tuple[int, int, complex], Edge] = {}

    def add(e1: Edge, e2: Edge, sub_level: int) -> Edge:
        if e1.weight == 0:
            return Edge(e2.weight, e2.target)
        if e2.weight == 0:
            return Edge(e1.weight, e1.target)
        if sub_level < 0:
            return Edge(e1.weight + e2.weight, TERMINAL)
        if e1.target == e2.target:
            w = e1.weight + e2.weight
            return Edge(w, e1.target) if w != 0 else _zero_edge()
        ratio = e2.weight / e1.weight
        key = (e1.target, e2.target, ratio)
        unit = add_memo.get(key)
        if unit is None:
            n1 = dd.node(e1.target)
            n2 = dd.node(e2.target)
            lo = add(Edge(n1.low.weight, n1.low.target),
                     _scaled(ratio, n2.low), sub_level - 1)
            hi = add(Edge(n1.high.weight, n1.high.target),
                     _scaled(ratio, n2.high), sub_level - 1)
            if lo.weight == 0 and hi.weight == 0:
                unit = _zero_edge()
            else:
                unit = dd.make_node(sub_level, lo.weight, lo.target, hi.weight, hi.target)
            add_memo[key] = unit
        return _scaled(e1.weight, unit)

    def rec(edge: Edge) -> Edge:
        if edge.weight == 0:
            return _zero_edge()
        nid = edge.target
        cached = node_memo.get(nid)
        if cached is None:
            node = dd.node(nid)
            if node.level > level:
                lo = rec(node.low)
                hi = rec(node.high)
            else:
                lo = add(_scaled(u00, node.low), _scaled(u01, node.high), level - 1)
                hi = add(_scaled(u10, node.low), _scaled(u11, node.high), level - 1)
            if lo.weight == 0 and hi.weight == 0:
                cached = _zero_edge()
            else:
                cached = dd.make_node(node.level, lo.weight, lo.target, hi.weight, hi.target)
            node_memo[nid] = cached
        return _scaled(edge.weight, cached)

    return rec(dd.root)


def _apply_diag_single(dd: DecisionDiagram, level: int, d0: complex, d1: complex) -> Edge:
    memo: dict[int, Edge] = {}

    def rec(edge: Edge) -> Edge:
        if edge.weight == 0:
            return _zero_edge()
        nid = edge.target
        cached = memo.get(nid)
        if cached is None:
            node = dd.node(nid)
            if node.level > level:
                lo, hi = rec(node.low), rec(node.high)
            else:
                lo = _scaled(d0, node.low)
                hi = _scaled(d1, node.high)
            cached = dd.make_node(node.level, lo.weight, lo.target, hi.weight, hi.target)
            memo[nid] = cached
        return _scaled(edge.weight, cached)

    return rec(dd.root)


def _apply_cz(dd: DecisionDiagram, level_hi: int, level_lo: int) -> Edge:
    outer_memo: dict[int, Edge] = {}
    inner_memo: dict[int, Edge] = {}

    def flip(edge: Edge) -> Edge:
        # Negate the high weight once level_lo is reached.
        if edge.weight == 0:
            return _zero_edge()
        nid = edge.target
        cached = inner_memo.get(nid)
        if cached is None:
            node = dd.node(nid)
            if node.level > level_lo:
                lo, hi = flip(node.low), flip(node.high)
            else:
                lo = Edge(node.low.weight, node.low.target)
                hi = _scaled(-1, node.high)
            cached = dd.make_node(node.level, lo.weight, lo.target, hi.weight, hi.target)
            inner_memo[nid] = cached
        return _scaled(edge.weight, cached)

    def rec(edge: Edge) -> Edge:
        if edge.weight == 0:
            return _zero_edge()
        nid = edge.target
        cached = outer_memo.get(nid)
        if cached is None:
            node = dd.node(nid)
            if node.level > level_hi:
                lo, hi = rec(node.low), rec(node.high)
            else:
                lo = Edge(node.low.weight, node.low.target)
                hi = flip(node.high)
            cached = dd.make_node(node.level, lo.weight, lo.target, hi.weight, hi.target)
            outer_memo[nid] = cached
        return _scaled(edge.weight, cached)

    return rec(dd.root)


def apply_gate(dd: DecisionDiagram, gate: Gate) -> DecisionDiagram:
    """Apply one gate in place (the previous root becomes garbage)."""
    if dd.approximated:
        raise ApproximatedDDError("cannot apply gates after node replacement")
    n = dd.qubit_count
    for q in gate.qubits:
        if not 0 <= q < n:
            raise ValueError(f"qubit {q} outside 0..{n - 1}")
    if gate.kind == "cz":
        la, lb = (n - 1 - q for q in gate.qubits)
        dd.root = _apply_cz(dd, max(la, lb), min(la, lb))
    elif gate.kind == "t":
        mat = GATE_MATRICES["t"]
        dd.root = _apply_diag_single(dd, n - 1 - gate.qubits[0],
                                     complex(mat[0, 0]), complex(mat[1, 1]))
    elif gate.kind in GATE_MATRICES:
        dd.root = _apply_single(dd, n - 1 - gate.qubits[0], GATE_MATRICES[gate.kind])
    else:
        raise ValueError(f"unknown gate kind {gate.kind!r}")
    return dd


def simulate_circuit(circuit: Circuit) -> DecisionDiagram:
    """Fold apply_gate over the circuit starting from |0...0>."""
    basis = np.zeros(1 << circuit.qubit_count, dtype=complex)
    basis[0] = 1
    dd = DecisionDiagram.from_statevector(basis)
    live = 1
    for gate in circuit.gates:
        apply_gate(dd, gate)
        if len(dd) > max(200_000, 3 * live):
            dd.compact()
            live = len(dd)
    dd.compact()
    return dd


def dense_simulate(circuit: Circuit) -> np.ndarray:
    """Reference statevector simulation with flat numpy arrays."""
    n = circuit.qubit_count
    if n > MAX_DENSE_QUBITS:
        raise TooManyQubitsError(f"{n} qubits exceeds dense limit {MAX_DENSE_QUBITS}")
    state = np.zeros(1 << n, dtype=complex)
    state[0] = 1
    for gate in circuit.gates:
        if gate.kind == "cz":
            b1 = n - 1 - gate.qubits[0]
            b2 = n - 1 - gate.qubits[1]
            idx = np.arange(1 << n)
            mask = ((idx >> b1) & 1).astype(bool) & ((idx >> b2) & 1).astype(bool)
            state[mask] *= -1
        else:
            mat = GATE_MATRICES[gate.kind]
            bit = n - 1 - gate.qubits[0]
            step = 1 << bit
            idx = np.arange(1 << n)
            idx0 = idx[(idx >> bit) & 1 == 0]
            idx1 = idx0 + step
            a, b = state[idx0], state[idx1]
            state[idx0] = mat[0, 0] * a + mat[0, 1] * b
            state[idx1] = mat[1, 0] * a + mat[1, 1] * b
    return state

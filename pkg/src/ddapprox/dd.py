"""Decision diagrams over complex state vectors.

A diagram is a rooted DAG with one branching level per qubit. Level 0 sits
just above the terminal; the root edge points at the single node on level
n - 1 (qubit 0 maps to the top level, qubit q to level n - 1 - q). Every
node stores a normalized two-entry weight pair, and the amplitude of a
basis state is the product of edge weights along its root-to-terminal
path. Nodes with identical (level, weight pair, children) are shared.

Replacement machinery may later attach `VirtualEntry` records to nodes:
an edge annotated with a virtual-edge number descends through the node's
own weights for one block of levels, then continues below the block at
the entry's recorded continuation targets instead of the node's children.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

TERMINAL = -1

# Quantization grid for weight-pair sharing and the relative threshold
# below which a weight is flushed to an exact zero edge.
SHARE_TOL = 1e-12
SNAP_TOL = 1e-14


class ZeroNodeError(ValueError):
    """Raised when a node would be created with both weights zero."""


class CorruptVirtualEdgeError(ValueError):
    """Raised when an edge carries a virtual-edge number its target lacks."""


@dataclass(slots=True)
class Edge:
    weight: complex
    target: int = TERMINAL
    vnum: int | None = None

    def is_zero(self) -> bool:
        return self.weight == 0


@dataclass(slots=True)
class VirtualEntry:
    """Continuation record left behind by one node replacement.

    ``continuations[p]`` holds ``(target, nested_vnum)`` for block path
    index ``p``: the child the replaced node reached below its block via
    path ``p``, plus the virtual-edge number that was on that boundary
    edge (None when the boundary edge was plain).
    """

    block_size: int
    continuations: list[tuple[int, int | None]]


@dataclass(slots=True)
class Node:
    level: int
    low: Edge
    high: Edge
    virtual_entries: dict[int, VirtualEntry] | None = None


@dataclass(slots=True)
class NodeCount:
    per_level: list[int]
    total: int


def _quantize(w: complex) -> tuple[int, int]:
    return (int(round(w.real / SHARE_TOL)), int(round(w.imag / SHARE_TOL)))


class DecisionDiagram:
    """Mutable DD over ``qubit_count`` qubits. Single-threaded writes."""

    def __init__(self, qubit_count: int):
        if qubit_count < 1:
            raise ValueError("need at least one qubit")
        self.qubit_count = qubit_count
        self.root = Edge(0j, TERMINAL)
        self._nodes: dict[int, Node] = {}
        self._unique: dict[tuple, int] = {}
        self._next_id = 0
        self.approximated = False
        self._exact_node_count: int | None = None

    # -- construction -----------------------------------------------------

    def node(self, nid: int) -> Node:
        return self._nodes[nid]

    def __len__(self) -> int:
        return len(self._nodes)

    def make_node(self, level: int, low_w: complex, low_t: int,
                  high_w: complex, high_t: int) -> Edge:
        """Return a normalized shared edge to a (possibly new) node.

        The weight pair is divided by its Euclidean norm only; no phase
        factor is extracted. Components below SNAP_TOL relative to the
        pair norm are flushed to exact zero edges.
        """
        lw = complex(low_w)
        hw = complex(high_w)
        norm = math.hypot(abs(lw), abs(hw))
        if norm == 0.0:
            raise ZeroNodeError(f"both weights zero at level {level}")
        if abs(lw) < SNAP_TOL * norm:
            lw = 0j
        if abs(hw) < SNAP_TOL * norm:
            hw = 0j
        if lw == 0:
            low_t = TERMINAL
        if hw == 0:
            high_t = TERMINAL
        norm = math.hypot(abs(lw), abs(hw))
        ln = lw / norm
        hn = hw / norm
        key = (level, low_t, high_t, _quantize(ln), _quantize(hn))
        nid = self._unique.get(key)
        if nid is None:
            nid = self._next_id
            self._next_id += 1
            self._nodes[nid] = Node(level, Edge(ln, low_t), Edge(hn, high_t))
            self._unique[key] = nid
        return Edge(norm, nid)

    @classmethod
    def from_statevector(cls, vec) -> "DecisionDiagram":
        """Build the fully shared DD of ``vec`` bottom-up."""
        arr = np.asarray(vec, dtype=complex).ravel()
        size = arr.size
        if size < 2 or size & (size - 1):
            raise ValueError(f"length {size} is not a power of two >= 2")
        if not np.any(arr):
            raise ValueError("zero vector has no diagram")
        n = size.bit_length() - 1
        dd = cls(n)
        weights: list[complex] = [complex(a) for a in arr]
        targets: list[int] = [TERMINAL] * size
        for level in range(n):
            half = len(weights) // 2
            new_w: list[complex] = []
            new_t: list[int] = []
            for i in range(half):
                lw, hw = weights[2 * i], weights[2 * i + 1]
                if lw == 0 and hw == 0:
                    new_w.append(0j)
                    new_t.append(TERMINAL)
                    continue
                edge = dd.make_node(level, lw, targets[2 * i], hw, targets[2 * i + 1])
                new_w.append(edge.weight)
                new_t.append(edge.target)
            weights, targets = new_w, new_t
        dd.root = Edge(weights[0], targets[0])
        return dd

    # -- traversal --------------------------------------------------------

    def block_path_weights(self, nid: int, depth: int) -> np.ndarray:
        """Products of edge weights along every ``depth``-step path from
        node ``nid``, in path-index order (first branch is the most
        significant bit). Length ``2**depth``."""
        node = self._nodes[nid]
        if node.level < depth - 1:
            raise ValueError("block reaches below the terminal")
        out = np.zeros(1 << depth, dtype=complex)

        def walk(cur: int, step: int, acc: complex, base: int) -> None:
            nd = self._nodes[cur]
            for bit, edge in ((0, nd.low), (1, nd.high)):
                w = acc * edge.weight
                idx = base * 2 + bit
                if w == 0:
                    continue
                if step == depth - 1:
                    out[idx] = w
                else:
                    walk(edge.target, step + 1, w, idx)

        walk(nid, 0, 1.0 + 0j, 0)
        return out

    def _subvector(self, nid: int, vnum: int | None,
                   memo: dict[tuple[int, int | None], np.ndarray]) -> np.ndarray:
        key = (nid, vnum)
        cached = memo.get(key)
        if cached is not None:
            return cached
        node = self._nodes[nid]
        width = 1 << (node.level + 1)
        if vnum is None:
            half = width >> 1
            out = np.empty(width, dtype=complex)
            for bit, edge in ((0, node.low), (1, node.high)):
                seg = out[bit * half:(bit + 1) * half]
                if edge.weight == 0:
                    seg[:] = 0
                elif node.level == 0:
                    seg[:] = edge.weight
                else:
                    seg[:] = edge.weight * self._subvector(edge.target, edge.vnum, memo)
        else:
            entries = node.virtual_entries
            if not entries or vnum not in entries:
                raise CorruptVirtualEdgeError(
                    f"edge carries vnum {vnum} but node {nid} has no matching entry")
            entry = entries[vnum]
            paths = self.block_path_weights(nid, entry.block_size)
            seg_len = width >> entry.block_size
            out = np.empty(width, dtype=complex)
            for p in range(1 << entry.block_size):
                seg = out[p * seg_len:(p + 1) * seg_len]
                w = paths[p]
                tgt, nested = entry.continuations[p]
                if w == 0 or tgt == TERMINAL:
                    seg[:] = 0
                else:
                    seg[:] = w * self._subvector(tgt, nested, memo)
        memo[key] = out
        return out

    def to_statevector(self) -> np.ndarray:
        """Evaluate the diagram to a dense vector of length 2**n."""
        size = 1 << self.qubit_count
        if self.root.weight == 0 or self.root.target == TERMINAL:
            return np.zeros(size, dtype=complex)
        memo: dict[tuple[int, int | None], np.ndarray] = {}
        return self.root.weight * self._subvector(self.root.target, self.root.vnum, memo)

    # -- bookkeeping ------------------------------------------------------

    def reachable_by_level(self) -> dict[int, list[int]]:
        """Node ids reachable from the root (virtual continuations
        included), grouped by level, each list sorted."""
        seen: set[int] = set()
        stack: list[int] = []
        if self.root.target != TERMINAL and self.root.weight != 0:
            stack.append(self.root.target)
        while stack:
            nid = stack.pop()
            if nid in seen:
                continue
            seen.add(nid)
            node = self._nodes[nid]
            for edge in (node.low, node.high):
                if edge.target != TERMINAL and edge.target not in seen:
                    stack.append(edge.target)
            if node.virtual_entries:
                for entry in node.virtual_entries.values():
                    for tgt, _nested in entry.continuations:
                        if tgt != TERMINAL and tgt not in seen:
                            stack.append(tgt)
        levels: dict[int, list[int]] = {}
        for nid in seen:
            levels.setdefault(self._nodes[nid].level, []).append(nid)
        for ids in levels.values():
            ids.sort()
        return levels

    def count_nodes(self) -> NodeCount:
        levels = self.reachable_by_level()
        per_level = [len(levels.get(lv, ())) for lv in range(self.qubit_count)]
        return NodeCount(per_level, sum(per_level))

    def mark_approximated(self) -> None:
        """Freeze the pre-approximation node count for memory reports."""
        if not self.approximated:
            self._exact_node_count = self.count_nodes().total
            self.approximated = True

    @property
    def exact_node_count(self) -> int:
        if self._exact_node_count is not None:
            return self._exact_node_count
        return self.count_nodes().total

    def compact(self) -> None:
        """Drop unreachable nodes and rebuild the sharing table."""
        keep: set[int] = set()
        for ids in self.reachable_by_level().values():
            keep.update(ids)
        self._nodes = {nid: node for nid, node in self._nodes.items() if nid in keep}
        self._unique = {}
        for nid, node in self._nodes.items():
            key = (node.level, node.low.target, node.high.target,
                   _quantize(node.low.weight), _quantize(node.high.weight))
            self._unique.setdefault(key, nid)

    def copy(self) -> "DecisionDiagram":
        """Independent structural copy (used to approximate a frozen base)."""
        dup = DecisionDiagram(self.qubit_count)
        dup.root = Edge(self.root.weight, self.root.target, self.root.vnum)
        nodes: dict[int, Node] = {}
        for nid, node in self._nodes.items():
            entries = None
            if node.virtual_entries:
                entries = {k: VirtualEntry(e.block_size, list(e.continuations))
                           for k, e in node.virtual_entries.items()}
            nodes[nid] = Node(node.level,
                              Edge(node.low.weight, node.low.target, node.low.vnum),
                              Edge(node.high.weight, node.high.target, node.high.vnum),
                              entries)
        dup._nodes = nodes
        dup._unique = dict(self._unique)
        dup._next_id = self._next_id
        dup.approximated = self.approximated
        dup._exact_node_count = self._exact_node_count
        return dup


def fidelity(a, b) -> float:
    """|<a|b>|^2 without renormalizing either vector."""
    va = np.asarray(a, dtype=complex).ravel()
    vb = np.asarray(b, dtype=complex).ravel()
    if va.size != vb.size:
        raise ValueError("vectors differ in length")
    return float(abs(np.vdot(va, vb)) ** 2)

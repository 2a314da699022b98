"""Node replacement: trade state fidelity for diagram memory.

Levels are grouped into blocks of N consecutive levels; strategy "NxX"
replaces nodes at the top of each of the X lowest blocks. Within one
block a fraction f of the block-top nodes (those with the smallest
contribution) are redirected onto similar surviving nodes. For any block
above the terminal one, the replacement node records the replaced node's
below-block children in a virtual entry so the region underneath is
preserved exactly.

Each replacement changes the state by swapping one length-2**N unit
sub-vector v for the replacement's sub-vector v', which costs fidelity
c * (1 - <v, v'>) where c is the replaced node's contribution. Memory is
modeled in fixed units: 18 per node, 20 per node once virtual machinery
is enabled, and 2**N * 2 + 2 (first block above the terminal block) or
2**N * 4 + 2 (higher blocks) per virtual entry.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .contribution import compute_contributions, rank_and_split
from .dd import TERMINAL, DecisionDiagram, VirtualEntry
from .lsh import lsh_match_arrays, realify, realify_rows

NODE_UNITS = 18
NODE_UNITS_VIRTUAL = 20

MATCH_EXHAUSTIVE = "exhaustive"
MATCH_LSH = "lsh"

_MATCH_CHUNK = 1024


class NoCandidateError(ValueError):
    """Exhaustive matching against an empty candidate list."""


class IllegalPairError(ValueError):
    """Replacement target is the replaced node or scheduled for removal."""


@dataclass(slots=True)
class StrategySpec:
    """Replacement plan: block_size levels per block (N), block_count
    blocks (X), fraction of each block's top nodes to replace, matcher."""

    block_size: int
    block_count: int
    fraction: float
    matcher: str = MATCH_EXHAUSTIVE

    def __post_init__(self):
        if self.block_size < 1 or self.block_count < 1:
            raise ValueError("block_size and block_count must be >= 1")
        if not 0.0 <= self.fraction <= 1.0:
            raise ValueError(f"fraction {self.fraction} outside [0, 1]")
        if self.matcher not in (MATCH_EXHAUSTIVE, MATCH_LSH):
            raise ValueError(f"unknown matcher {self.matcher!r}")

    @property
    def label(self) -> str:
        return f"{self.block_size}x{self.block_count}"

    @classmethod
    def from_label(cls, label: str, fraction: float,
                   matcher: str = MATCH_EXHAUSTIVE) -> "StrategySpec":
        try:
            n_str, x_str = label.lower().split("x")
            return cls(int(n_str), int(x_str), fraction, matcher)
        except (ValueError, AttributeError):
            raise ValueError(f"strategy label {label!r} is not of the form NxX")


@dataclass(slots=True)
class BlockVector:
    """Unit sub-vector of in-block edge-weight products for one node."""

    vector: np.ndarray
    owner: int


@dataclass(slots=True)
class MemoryReport:
    units_before: float
    units_after: float
    ratio: float


@dataclass(slots=True)
class ApproxResult:
    dd: DecisionDiagram
    predicted_fidelity: float
    memory: MemoryReport
    replacements: list[tuple[int, int, complex]] = field(default_factory=list)
    unmatched: list[int] = field(default_factory=list)
    measured_fidelity: float | None = None
    match_ms: float = 0.0
    comparisons: int = 0


def virtual_entry_units(block_size: int, block_index: int) -> int:
    """Memory units one virtual entry costs, by owning block."""
    if block_index < 1:
        raise ValueError("terminal-touching blocks leave no entry")
    per_child = 2 if block_index == 1 else 4
    return (1 << block_size) * per_child + 2


def block_index_of(level: int, block_size: int) -> int:
    """Block number whose top sits at ``level``."""
    if (level + 1) % block_size:
        raise ValueError(f"level {level} is not a block top for N={block_size}")
    return (level + 1) // block_size - 1


def block_vector(dd: DecisionDiagram, node_id: int, block_size: int) -> BlockVector:
    node = dd.node(node_id)
    if node.level < block_size - 1:
        raise ValueError(f"node level {node.level} too low for block size {block_size}")
    return BlockVector(dd.block_path_weights(node_id, block_size), node_id)


def match_exhaustive(v: BlockVector, candidates: list[BlockVector]) -> BlockVector:
    """Candidate maximizing Re<v, v'>, ties to the smallest owner id."""
    if not candidates:
        raise NoCandidateError("no candidates to match against")
    ordered = sorted(candidates, key=lambda b: b.owner)
    target = realify(v.vector)
    mat = np.stack([realify(c.vector) for c in ordered])
    return ordered[int(np.argmax(mat @ target))]


def _match_batch(replaced: np.ndarray, candidates: np.ndarray) -> np.ndarray:
    """Row-by-row argmax of replaced @ candidates.T, chunked to bound the
    score matrix (full scan: every pair is compared)."""
    out = np.empty(replaced.shape[0], dtype=np.int64)
    for start in range(0, replaced.shape[0], _MATCH_CHUNK):
        chunk = replaced[start:start + _MATCH_CHUNK]
        out[start:start + _MATCH_CHUNK] = np.argmax(chunk @ candidates.T, axis=1)
    return out


def _boundary_continuations(dd: DecisionDiagram, node_id: int,
                            block_size: int) -> list[tuple[int, int | None]]:
    """(target, vnum) of the edges leaving the node's block bottom, in
    path order; zero edges record a terminal continuation."""
    conts: list[tuple[int, int | None]] = [(TERMINAL, None)] * (1 << block_size)

    def walk(cur: int, step: int, base: int) -> None:
        node = dd.node(cur)
        for bit, edge in ((0, node.low), (1, node.high)):
            idx = base * 2 + bit
            if edge.weight == 0:
                continue
            if step == block_size - 1:
                conts[idx] = (edge.target, edge.vnum)
            else:
                walk(edge.target, step + 1, idx)

    walk(node_id, 0, 0)
    return conts


def _incoming_edges(dd: DecisionDiagram, level: int):
    """Map node id -> edges pointing at it from one level above."""
    incoming: dict[int, list] = {}
    for node in dd._nodes.values():
        if node.level != level + 1:
            continue
        for edge in (node.low, node.high):
            if edge.weight != 0:
                incoming.setdefault(edge.target, []).append(edge)
    if dd.root.target != TERMINAL and level == dd.qubit_count - 1:
        incoming.setdefault(dd.root.target, []).append(dd.root)
    return incoming


def apply_replacement(dd: DecisionDiagram, replaced: int, replacement: int,
                      block_index: int, block_size: int,
                      forbidden=None, incoming=None) -> None:
    """Redirect every incoming edge of ``replaced`` onto ``replacement``.

    For blocks above the terminal one a fresh virtual-edge number is
    allocated on the replacement node, its entry storing the replaced
    node's boundary children, and the redirected edges are stamped with
    that number. The replaced node itself becomes unreachable.
    """
    if replaced == replacement:
        raise IllegalPairError("node cannot replace itself")
    if forbidden is not None and replacement in forbidden:
        raise IllegalPairError(f"replacement {replacement} is scheduled for replacement")
    rn = dd.node(replaced)
    cn = dd.node(replacement)
    top = block_index * block_size + block_size - 1
    if rn.level != top or cn.level != top:
        raise ValueError(f"nodes must sit at block top level {top}")
    dd.mark_approximated()
    vnum: int | None = None
    if block_index >= 1:
        conts = _boundary_continuations(dd, replaced, block_size)
        if cn.virtual_entries is None:
            cn.virtual_entries = {}
        vnum = max(cn.virtual_entries) + 1 if cn.virtual_entries else 0
        cn.virtual_entries[vnum] = VirtualEntry(block_size, conts)
    if incoming is None:
        incoming = _incoming_edges(dd, top).get(replaced, [])
    for edge in incoming:
        edge.target = replacement
        edge.vnum = vnum


def memory_report(dd: DecisionDiagram, spec: StrategySpec | None = None) -> MemoryReport:
    """Unit-model accounting against the pre-approximation node count."""
    plain = spec is None or (spec.block_size == 1 and spec.block_count == 1)
    per_node = NODE_UNITS if plain else NODE_UNITS_VIRTUAL
    levels = dd.reachable_by_level()
    after_nodes = sum(len(ids) for ids in levels.values())
    entry_units = 0
    for ids in levels.values():
        for nid in ids:
            node = dd.node(nid)
            if node.virtual_entries:
                for entry in node.virtual_entries.values():
                    b = block_index_of(node.level, entry.block_size)
                    entry_units += virtual_entry_units(entry.block_size, b)
    units_before = float(dd.exact_node_count * NODE_UNITS)
    units_after = float(after_nodes * per_node + entry_units)
    return MemoryReport(units_before, units_after, units_after / units_before)


def run_strategy(dd: DecisionDiagram, spec: StrategySpec,
                 contributions: dict[int, float] | None = None,
                 *, lsh_seed: int = 0) -> ApproxResult:
    """Replace nodes block by block, bottom-up, on a copy of ``dd``.

    Contributions are taken from the exact input diagram (they only
    depend on structure above a node, so earlier blocks do not disturb
    them). Nodes without a usable candidate are left intact and listed
    in the result.
    """
    if spec.block_size * spec.block_count > dd.qubit_count:
        raise ValueError(f"strategy {spec.label} does not fit {dd.qubit_count} qubits")
    if dd.approximated:
        raise ValueError("input diagram is already approximated")
    if contributions is None:
        contributions = compute_contributions(dd)
    work = dd.copy()
    by_level = work.reachable_by_level()
    losses: list[complex] = []
    replacements: list[tuple[int, int, complex]] = []
    unmatched: list[int] = []
    match_ms = 0.0
    comparisons = 0
    for b in range(spec.block_count):
        top = b * spec.block_size + spec.block_size - 1
        ids = by_level.get(top, [])
        if len(ids) < 2:
            continue
        replaced_ids, candidate_ids = rank_and_split(contributions, ids, spec.fraction)
        if not replaced_ids:
            continue
        if not candidate_ids:
            unmatched.extend(replaced_ids)
            continue
        rvecs = {nid: work.block_path_weights(nid, spec.block_size)
                 for nid in replaced_ids}
        cvecs = {nid: work.block_path_weights(nid, spec.block_size)
                 for nid in candidate_ids}
        t0 = time.perf_counter()
        # Candidate rows in id order so argmax ties resolve to the
        # smallest owner id, same as match_exhaustive.
        cand_order = sorted(candidate_ids)
        cmat = realify_rows(np.array([cvecs[nid] for nid in cand_order]))
        if spec.matcher == MATCH_EXHAUSTIVE:
            rmat = realify_rows(np.array([rvecs[nid] for nid in replaced_ids]))
            picks = _match_batch(rmat, cmat)
            mapping = {nid: cand_order[picks[i]] for i, nid in enumerate(replaced_ids)}
            comparisons += len(replaced_ids) * len(candidate_ids)
        else:
            repl_order = sorted(replaced_ids)
            rmat = realify_rows(np.array([rvecs[nid] for nid in repl_order]))
            mapping, compared = lsh_match_arrays(
                rmat, np.asarray(repl_order),
                cmat, np.asarray(cand_order), lsh_seed)
            comparisons += compared
        match_ms += (time.perf_counter() - t0) * 1e3
        incoming = _incoming_edges(work, top)
        forbidden = set(replaced_ids)
        for rid in replaced_ids:
            mid = mapping.get(rid)
            if mid is None:
                unmatched.append(rid)
                continue
            loss = contributions[rid] * (1 - np.dot(rvecs[rid], np.conj(cvecs[mid])))
            apply_replacement(work, rid, mid, b, spec.block_size,
                              forbidden=forbidden, incoming=incoming.get(rid, []))
            losses.append(complex(loss))
            replacements.append((rid, mid, complex(loss)))
    predicted = float(abs(1 - sum(losses)) ** 2)
    return ApproxResult(work, predicted, memory_report(work, spec),
                        replacements, unmatched,
                        match_ms=match_ms, comparisons=comparisons)


def remove_nodes_baseline(dd: DecisionDiagram, fidelity_budget: float) -> ApproxResult:
    """Prior-art baseline: zero out low-contribution nodes per level.

    Walking each level's nodes in ascending contribution order, nodes are
    removed (all parent edges zeroed) while the level's accumulated
    contribution stays within the budget. No renormalization happens, so
    the predicted fidelity is |1 - sum c|^2.
    """
    if fidelity_budget < 0:
        raise ValueError("budget must be non-negative")
    if dd.approximated:
        raise ValueError("input diagram is already approximated")
    contributions = compute_contributions(dd)
    work = dd.copy()
    by_level = work.reachable_by_level()
    removed: list[tuple[int, int, complex]] = []
    total_loss = 0.0
    for level in sorted(by_level):
        incoming = None
        acc = 0.0
        for nid in sorted(by_level[level], key=lambda i: (contributions[i], i)):
            c = contributions[nid]
            if acc + c > fidelity_budget:
                break
            acc += c
            total_loss += c
            if incoming is None:
                incoming = _incoming_edges(work, level)
            work.mark_approximated()
            for edge in incoming.get(nid, []):
                edge.weight = 0j
                edge.target = TERMINAL
                edge.vnum = None
            removed.append((nid, TERMINAL, complex(c)))
    predicted = float(abs(1 - total_loss) ** 2)
    return ApproxResult(work, predicted, memory_report(work, None), removed)

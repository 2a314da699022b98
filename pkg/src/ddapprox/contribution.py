"""Norm contributions: how much state mass flows through each node.

The contribution of a node is the sum over its distinct root-to-node
paths of the squared magnitude of the edge-weight product above the
node. On a unit-norm exact diagram every level's contributions add up
to one. Mass is pushed level by level in a single top-down pass;
virtual continuations are followed so the accounting also works on
already-approximated diagrams.
"""

from __future__ import annotations

import math

from .dd import TERMINAL, DecisionDiagram

# Context while mass is inside a replacement block:
# (entry owner id, vnum, path bits so far, edges consumed so far).
_Ctx = tuple[int, int, int, int] | None


def compute_contributions(dd: DecisionDiagram) -> dict[int, float]:
    """Map node id -> contribution for every reachable node."""
    out: dict[int, float] = {}
    root = dd.root
    if root.target == TERMINAL or root.weight == 0:
        return out
    cur: dict[tuple[int, _Ctx], float] = {}

    def enter(tgt: int, vnum: int | None) -> tuple[int, _Ctx]:
        if vnum is None:
            return (tgt, None)
        return (tgt, (tgt, vnum, 0, 0))

    cur[enter(root.target, root.vnum)] = abs(root.weight) ** 2
    n = dd.qubit_count
    for _level in range(n - 1, -1, -1):
        nxt: dict[tuple[int, _Ctx], float] = {}
        for (nid, ctx), mass in cur.items():
            out[nid] = out.get(nid, 0.0) + mass
            node = dd.node(nid)
            for bit, edge in ((0, node.low), (1, node.high)):
                w2 = abs(edge.weight) ** 2
                if w2 == 0.0:
                    continue
                child_mass = mass * w2
                if ctx is None:
                    if edge.target == TERMINAL:
                        continue
                    key = enter(edge.target, edge.vnum)
                else:
                    owner, k, bits, consumed = ctx
                    entry = dd.node(owner).virtual_entries[k]
                    bits = bits * 2 + bit
                    consumed += 1
                    if consumed == entry.block_size:
                        tgt, nested = entry.continuations[bits]
                        if tgt == TERMINAL:
                            continue
                        key = enter(tgt, nested)
                    else:
                        key = (edge.target, (owner, k, bits, consumed))
                nxt[key] = nxt.get(key, 0.0) + child_mass
        cur = nxt
    return out


def rank_and_split(contributions: dict[int, float], node_set, f: float,
                   ) -> tuple[list[int], list[int]]:
    """Split ``node_set`` into (replaced, candidates) by contribution.

    The floor(f * len) nodes with the smallest contribution become the
    replaced list; ties fall back to the node identifier so the split is
    deterministic.
    """
    if not 0.0 <= f <= 1.0:
        raise ValueError(f"fraction {f} outside [0, 1]")
    ids = list(node_set)
    if not ids:
        raise ValueError("empty node set")
    ids.sort(key=lambda nid: (contributions[nid], nid))
    k = math.floor(f * len(ids))
    return ids[:k], ids[k:]

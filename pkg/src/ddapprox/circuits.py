"""GRCS-style circuit files and random supremacy-style instance generation.

File format: optional leading ``#`` comment lines, then the qubit count on
its own line, then one gate per line as ``<cycle> <name> <qubit> [qubit2]``
with names drawn from h, t, x_1_2, y_1_2, cz. Cycles must be
non-decreasing and no qubit may be touched twice within a cycle.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

GATE_ARITY = {"h": 1, "t": 1, "x_1_2": 1, "y_1_2": 1, "cz": 2}


class GrcsError(ValueError):
    """Base class for circuit file problems."""


class MalformedLineError(GrcsError):
    pass


class UnknownGateError(GrcsError):
    pass


class QubitOutOfRangeError(GrcsError):
    pass


class DuplicateQubitInCycleError(GrcsError):
    pass


class NonMonotoneCycleError(GrcsError):
    pass


class GridTooSmallError(ValueError):
    """No coupler pattern fits the requested grid."""


@dataclass(slots=True)
class Gate:
    cycle: int
    kind: str
    qubits: tuple[int, ...]


@dataclass(slots=True)
class Circuit:
    qubit_count: int
    gates: list[Gate] = field(default_factory=list)
    header: list[str] = field(default_factory=list)

    @property
    def depth(self) -> int:
        return max((g.cycle for g in self.gates), default=0)


def parse_grcs(text: str) -> Circuit:
    """Parse a circuit file, reporting the offending line on failure."""
    header: list[str] = []
    qubit_count: int | None = None
    gates: list[Gate] = []
    last_cycle = -1
    cycle_qubits: set[int] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if qubit_count is None:
                header.append(line)
            continue
        parts = line.split()
        if qubit_count is None:
            if len(parts) != 1:
                raise MalformedLineError(f"line {lineno}: expected qubit count, got {raw!r}")
            try:
                qubit_count = int(parts[0])
            except ValueError:
                raise MalformedLineError(f"line {lineno}: qubit count {parts[0]!r} is not an integer")
            if qubit_count < 1:
                raise MalformedLineError(f"line {lineno}: qubit count must be positive")
            continue
        if len(parts) < 3:
            raise MalformedLineError(f"line {lineno}: too few fields in {raw!r}")
        try:
            cycle = int(parts[0])
        except ValueError:
            raise MalformedLineError(f"line {lineno}: cycle {parts[0]!r} is not an integer")
        if cycle < 0:
            raise MalformedLineError(f"line {lineno}: negative cycle")
        kind = parts[1]
        if kind not in GATE_ARITY:
            raise UnknownGateError(f"line {lineno}: unknown gate {kind!r}")
        arity = GATE_ARITY[kind]
        if len(parts) != 2 + arity:
            raise MalformedLineError(
                f"line {lineno}: {kind} takes {arity} qubit(s), got {len(parts) - 2}")
        try:
            qubits = tuple(int(p) for p in parts[2:])
        except ValueError:
            raise MalformedLineError(f"line {lineno}: qubit fields must be integers")
        for q in qubits:
            if not 0 <= q < qubit_count:
                raise QubitOutOfRangeError(
                    f"line {lineno}: qubit {q} outside 0..{qubit_count - 1}")
        if cycle < last_cycle:
            raise NonMonotoneCycleError(
                f"line {lineno}: cycle {cycle} after cycle {last_cycle}")
        if cycle > last_cycle:
            last_cycle = cycle
            cycle_qubits = set()
        for q in qubits:
            if q in cycle_qubits:
                raise DuplicateQubitInCycleError(
                    f"line {lineno}: qubit {q} used twice in cycle {cycle}")
            cycle_qubits.add(q)
        if len(set(qubits)) != len(qubits):
            raise DuplicateQubitInCycleError(
                f"line {lineno}: repeated qubit in {raw!r}")
        gates.append(Gate(cycle, kind, qubits))
    if qubit_count is None:
        raise MalformedLineError("no qubit count line found")
    return Circuit(qubit_count, gates, header)


def serialize_grcs(circuit: Circuit) -> str:
    lines = list(circuit.header)
    lines.append(str(circuit.qubit_count))
    for g in circuit.gates:
        lines.append(f"{g.cycle} {g.kind} " + " ".join(str(q) for q in g.qubits))
    return "\n".join(lines) + "\n"


# -- supremacy-style generator --------------------------------------------

# Coupler activation patterns: every other neighbor pair in one grid
# direction, staggered between adjacent rows/columns, cycling through four
# phase offsets per direction. Documented in the README.
CZ_PATTERNS: list[tuple[str, int]] = [
    ("h", 2), ("h", 0), ("v", 3), ("v", 1),
    ("h", 3), ("h", 1), ("v", 0), ("v", 2),
]


def _pattern_pairs(rows: int, cols: int, direction: str, phase: int) -> list[tuple[int, int]]:
    pairs = []
    if direction == "h":
        for r in range(rows):
            for c in range(cols - 1):
                if (c + 2 * (r % 2)) % 4 == phase:
                    pairs.append((r * cols + c, r * cols + c + 1))
    else:
        for c in range(cols):
            for r in range(rows - 1):
                if (r + 2 * (c % 2)) % 4 == phase:
                    pairs.append((r * cols + c, (r + 1) * cols + c))
    return pairs


def _layer_for_cycle(rows: int, cols: int, cycle: int) -> list[tuple[int, int]]:
    # Walk the rotation until a pattern fits this grid; tiny grids skip
    # the phases that produce no pairs.
    start = (cycle - 1) % len(CZ_PATTERNS)
    for off in range(len(CZ_PATTERNS)):
        direction, phase = CZ_PATTERNS[(start + off) % len(CZ_PATTERNS)]
        pairs = _pattern_pairs(rows, cols, direction, phase)
        if pairs:
            return pairs
    raise GridTooSmallError(f"no coupler pattern fits a {rows}x{cols} grid")


def generate_supremacy(rows: int, cols: int, depth: int, seed: int) -> Circuit:
    """Random circuit on a rows x cols grid, ``depth`` coupler cycles.

    Cycle 0 applies h to every qubit. Each later cycle applies one CZ
    pattern from the fixed rotation; a qubit receives a single-qubit gate
    in cycle c exactly when it had a CZ in cycle c - 1 and none in cycle
    c. The first such gate on a qubit is t, later ones alternate between
    x_1_2 and y_1_2 (never repeating the previous one), with the
    x_1_2/y_1_2 choice drawn from a pcg64 stream seeded by ``seed``.
    """
    n = rows * cols
    if n < 2:
        raise GridTooSmallError("grid needs at least two qubits")
    if depth < 0:
        raise ValueError("depth must be non-negative")
    rng = np.random.default_rng(seed)
    layers = {c: _layer_for_cycle(rows, cols, c) for c in range(1, depth + 1)}
    cz_qubits = {c: {q for pair in layers[c] for q in pair} for c in layers}
    cz_qubits[0] = set()

    gates = [Gate(0, "h", (q,)) for q in range(n)]
    prev_sq: list[str | None] = [None] * n
    for c in range(1, depth + 1):
        for q in range(n):
            if q in cz_qubits[c - 1] and q not in cz_qubits[c]:
                if prev_sq[q] is None:
                    kind = "t"
                else:
                    options = [k for k in ("x_1_2", "y_1_2") if k != prev_sq[q]]
                    kind = options[rng.integers(len(options))] if len(options) > 1 else options[0]
                prev_sq[q] = kind
                gates.append(Gate(c, kind, (q,)))
        for a, b in sorted(layers[c]):
            gates.append(Gate(c, "cz", (a, b)))
    header = [f"# rows={rows} cols={cols} depth={depth} seed={seed} rng=pcg64-v1"]
    return Circuit(n, gates, header)

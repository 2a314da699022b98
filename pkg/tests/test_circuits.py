"""Circuit file parsing, serialization, and instance generation."""

import pytest

from ddapprox.circuits import (Circuit, DuplicateQubitInCycleError, Gate,
                               GridTooSmallError, MalformedLineError,
                               NonMonotoneCycleError, QubitOutOfRangeError,
                               UnknownGateError, generate_supremacy,
                               parse_grcs, serialize_grcs)


def test_parse_single_hadamard():
    circuit = parse_grcs("1\n0 h 0")
    assert circuit.qubit_count == 1
    assert circuit.gates == [Gate(0, "h", (0,))]


def test_parse_two_qubit_example():
    circuit = parse_grcs("2\n0 h 0\n0 h 1\n1 cz 0 1")
    assert circuit.qubit_count == 2
    assert len(circuit.gates) == 3
    assert circuit.depth == 1
    assert circuit.gates[2] == Gate(1, "cz", (0, 1))


def test_parse_skips_blank_lines_and_keeps_header():
    circuit = parse_grcs("# generated\n\n2\n0 h 0\n")
    assert circuit.header == ["# generated"]
    assert len(circuit.gates) == 1


def test_serialize_single_hadamard():
    assert serialize_grcs(Circuit(1, [Gate(0, "h", (0,))])) == "1\n0 h 0\n"


def test_two_qubit_example_round_trips():
    text = "2\n0 h 0\n0 h 1\n1 cz 0 1\n"
    assert serialize_grcs(parse_grcs(text)) == text


def test_generated_circuit_round_trips_byte_exact():
    circuit = generate_supremacy(4, 4, 10, seed=3)
    text = serialize_grcs(circuit)
    assert serialize_grcs(parse_grcs(text)) == text


@pytest.mark.parametrize("text,err,lineno", [
    ("1 2\n0 h 0", MalformedLineError, 1),
    ("q\n0 h 0", MalformedLineError, 1),
    ("0\n", MalformedLineError, 1),
    ("2\n0 h", MalformedLineError, 2),
    ("2\nx h 0", MalformedLineError, 2),
    ("2\n-1 h 0", MalformedLineError, 2),
    ("2\n0 h 0 1", MalformedLineError, 2),
    ("2\n0 cnot 0 1", UnknownGateError, 2),
    ("2\n0 h 5", QubitOutOfRangeError, 2),
    ("2\n0 h 0\n0 h 0", DuplicateQubitInCycleError, 3),
    ("2\n0 cz 1 1", DuplicateQubitInCycleError, 2),
    ("2\n1 h 0\n0 h 1", NonMonotoneCycleError, 3),
])
def test_parse_errors_carry_line_numbers(text, err, lineno):
    with pytest.raises(err, match=f"line {lineno}"):
        parse_grcs(text)


def test_parse_rejects_empty_file():
    with pytest.raises(MalformedLineError):
        parse_grcs("")


def test_generate_two_qubit_line_depth_one():
    circuit = generate_supremacy(1, 2, 1, seed=0)
    assert circuit.qubit_count == 2
    assert circuit.gates[:2] == [Gate(0, "h", (0,)), Gate(0, "h", (1,))]
    assert circuit.gates[2] == Gate(1, "cz", (0, 1))
    assert len(circuit.gates) == 3


def test_generate_deterministic_per_seed():
    a = serialize_grcs(generate_supremacy(4, 4, 12, seed=5))
    b = serialize_grcs(generate_supremacy(4, 4, 12, seed=5))
    c = serialize_grcs(generate_supremacy(4, 4, 12, seed=6))
    assert a == b
    assert a != c


def test_generate_rejects_tiny_grid():
    with pytest.raises(GridTooSmallError):
        generate_supremacy(1, 1, 4, seed=0)


def test_generate_rejects_negative_depth():
    with pytest.raises(ValueError):
        generate_supremacy(2, 2, -1, seed=0)


def test_generated_composition_rules():
    """Layer structure: H wall, one coupler layer per cycle, single-qubit
    gates exactly where a coupler just ended, t first then alternating."""
    circuit = generate_supremacy(4, 4, 10, seed=1)
    n = circuit.qubit_count
    by_cycle: dict[int, list[Gate]] = {}
    for g in circuit.gates:
        by_cycle.setdefault(g.cycle, []).append(g)

    assert sorted(g.qubits[0] for g in by_cycle[0]) == list(range(n))
    assert all(g.kind == "h" for g in by_cycle[0])

    cz_qubits = {0: set()}
    for c in range(1, 11):
        czs = [g for g in by_cycle[c] if g.kind == "cz"]
        assert czs, f"cycle {c} has no coupler layer"
        cz_qubits[c] = {q for g in czs for q in g.qubits}

    history: dict[int, list[str]] = {q: [] for q in range(n)}
    for c in range(1, 11):
        singles = {g.qubits[0]: g.kind for g in by_cycle[c] if g.kind != "cz"}
        for q in range(n):
            should = q in cz_qubits[c - 1] and q not in cz_qubits[c]
            assert (q in singles) == should, (c, q)
            if q in singles:
                history[q].append(singles[q])
    for q, kinds in history.items():
        if not kinds:
            continue
        assert kinds[0] == "t"
        for prev, cur in zip(kinds[1:], kinds[2:]):
            assert cur != prev, f"qubit {q} repeats {cur}"
        assert all(k in ("x_1_2", "y_1_2") for k in kinds[1:])


def test_coupler_layers_touch_disjoint_pairs():
    circuit = generate_supremacy(4, 5, 8, seed=2)
    for c in range(1, 9):
        seen = set()
        for g in circuit.gates:
            if g.cycle == c and g.kind == "cz":
                for q in g.qubits:
                    assert q not in seen
                    seen.add(q)


def test_depth_zero_is_hadamard_wall_only():
    circuit = generate_supremacy(2, 2, 0, seed=0)
    assert all(g.kind == "h" and g.cycle == 0 for g in circuit.gates)
    assert len(circuit.gates) == 4

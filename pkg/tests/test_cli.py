"""End-to-end runs of the console entry point, in process."""

import pytest

from ddapprox import circuits
from ddapprox.cli import EXIT_IO, EXIT_OK, EXIT_PARSE, EXIT_SIM, main
from ddapprox.sweep import CSV_HEADER


def run(*argv):
    return main(list(argv))


def test_generate_writes_parseable_circuit(tmp_path):
    out = tmp_path / "c.grcs"
    code = run("generate", "--rows", "2", "--cols", "2", "--depth", "4",
               "--seed", "7", "--out", str(out))
    assert code == EXIT_OK
    circuit = circuits.parse_grcs(out.read_text())
    assert circuit.qubit_count == 4


def test_generate_is_deterministic(tmp_path):
    a = tmp_path / "a.grcs"
    b = tmp_path / "b.grcs"
    run("generate", "--rows", "2", "--cols", "3", "--depth", "6", "--out", str(a))
    run("generate", "--rows", "2", "--cols", "3", "--depth", "6", "--out", str(b))
    assert a.read_text() == b.read_text()


def test_generate_stdout(capsys):
    assert run("generate", "--rows", "1", "--cols", "2", "--depth", "1") == EXIT_OK
    captured = capsys.readouterr()
    assert captured.out.startswith("#")
    circuits.parse_grcs(captured.out)


def test_generate_rejects_tiny_grid(capsys):
    assert run("generate", "--rows", "1", "--cols", "1", "--depth", "2") == EXIT_PARSE
    assert "error" in capsys.readouterr().err


def test_sweep_writes_csv(tmp_path):
    out = tmp_path / "sweep.csv"
    code = run("sweep", "--rows", "2", "--cols", "2", "--depth", "4",
               "--fractions", "0.5,0.0", "--out", str(out))
    assert code == EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 3
    fs = [float(ln.split(",")[3]) for ln in lines[1:]]
    assert fs == [0.0, 0.5]


def test_sweep_removal_strategy(tmp_path):
    out = tmp_path / "removal.csv"
    code = run("sweep", "--rows", "2", "--cols", "2", "--depth", "4",
               "--strategy", "removal", "--fractions", "0.0,0.01",
               "--out", str(out))
    assert code == EXIT_OK
    for ln in out.read_text().splitlines()[1:]:
        assert ln.split(",")[4] == "removal"


def test_sweep_from_circuit_file(tmp_path):
    grcs = tmp_path / "c.grcs"
    run("generate", "--rows", "2", "--cols", "2", "--depth", "4", "--out", str(grcs))
    out = tmp_path / "sweep.csv"
    code = run("sweep", "--circuit", str(grcs), "--fractions", "0.2",
               "--out", str(out))
    assert code == EXIT_OK
    row = out.read_text().splitlines()[1]
    assert row.startswith(str(grcs))


def test_sweep_needs_circuit_or_grid(capsys):
    assert run("sweep", "--fractions", "0.1") == EXIT_PARSE
    assert "need --circuit" in capsys.readouterr().err


def test_sweep_rejects_bad_strategy_label(capsys):
    code = run("sweep", "--rows", "2", "--cols", "2", "--depth", "2",
               "--strategy", "huge")
    assert code == EXIT_PARSE


def test_sweep_missing_file_is_io_error(tmp_path, capsys):
    code = run("sweep", "--circuit", str(tmp_path / "nope.grcs"))
    assert code == EXIT_IO
    assert "i/o error" in capsys.readouterr().err


def test_sweep_malformed_circuit(tmp_path, capsys):
    bad = tmp_path / "bad.grcs"
    bad.write_text("2\n0 h 0\n0 frobnicate 1\n")
    assert run("sweep", "--circuit", str(bad), "--fractions", "0.1") == EXIT_PARSE
    assert "line 3" in capsys.readouterr().err


def test_sweep_skips_dense_reference_above_limit(capsys):
    # 25 qubits: no dense reference, measured column stays empty
    code = run("sweep", "--rows", "5", "--cols", "5", "--depth", "0",
               "--fractions", "0.1")
    assert code == EXIT_OK
    captured = capsys.readouterr()
    assert "predicted fidelity only" in captured.err
    assert captured.out.splitlines()[1].split(",")[5] == ""


def test_simulation_failure_exit_code(monkeypatch, capsys):
    # TooManyQubitsError is a ValueError; it must still route to the
    # simulation exit code, not the parse one
    from ddapprox import cli, simulate

    def boom(circuit):
        raise simulate.TooManyQubitsError("over the dense limit")

    monkeypatch.setattr(cli.simulate, "simulate_circuit", boom)
    code = run("sweep", "--rows", "2", "--cols", "2", "--depth", "2",
               "--fractions", "0.1")
    assert code == EXIT_SIM
    assert "simulation error" in capsys.readouterr().err


def test_compare_lsh_report(tmp_path):
    out = tmp_path / "cmp.csv"
    code = run("compare-lsh", "--rows", "2", "--cols", "3", "--depth", "6",
               "--fractions", "0.2,0.5", "--out", str(out))
    assert code == EXIT_OK
    text = out.read_text()
    lines = text.splitlines()
    assert lines[0] == "f,mem_ratio_exhaustive,mem_ratio_lsh,fid_exhaustive,fid_lsh"
    assert len([ln for ln in lines if not ln.startswith("#")]) == 3
    assert any(ln.startswith("# mem_ratio_rmse=") for ln in lines)
    assert any(ln.startswith("# match_ms_exhaustive=") for ln in lines)


def test_compare_lsh_excludes_starved_fractions(tmp_path):
    # depth 10 keeps 32 nodes on the bottom level, so the feasibility
    # cap lands between the two fractions
    out = tmp_path / "cmp.csv"
    code = run("compare-lsh", "--rows", "2", "--cols", "3", "--depth", "10",
               "--fractions", "0.2,0.99", "--out", str(out))
    assert code == EXIT_OK
    text = out.read_text()
    # the pairs table still carries every fraction
    assert any(ln.startswith("0.99,") for ln in text.splitlines())
    assert "# rmse_excluded_fractions=0.99 " in text
    rmse_line = next(ln for ln in text.splitlines()
                     if ln.startswith("# mem_ratio_rmse="))
    float(rmse_line.split("=")[1])
    assert "nan" not in rmse_line


def test_plot_script(tmp_path):
    csv = tmp_path / "sweep.csv"
    run("sweep", "--rows", "2", "--cols", "2", "--depth", "4",
        "--fractions", "0.2,0.6", "--out", str(csv))
    out = tmp_path / "plot.gp"
    assert run("plot", "--csv", str(csv), "--out", str(out)) == EXIT_OK
    script = out.read_text()
    assert "set xlabel 'fidelity'" in script
    assert "$data0 << EOD" in script
    assert "title '1x1/exhaustive'" in script
    assert script.rstrip().splitlines()[-1].startswith("plot ")


def test_plot_rejects_non_sweep_csv(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b\n1,2\n")
    assert run("plot", "--csv", str(bad)) == EXIT_PARSE
    assert "not a sweep CSV" in capsys.readouterr().err


def test_plot_missing_file(tmp_path):
    assert run("plot", "--csv", str(tmp_path / "nope.csv")) == EXIT_IO
